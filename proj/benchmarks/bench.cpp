// Micro-benchmarks for the hot paths: the PT-invariant decomposer, the
// two-qubit decision procedure, the separability certificate, and the
// underlying dense eigensolver.

#include <benchmark/benchmark.h>

#include <sep2n/sep2n.hpp>

using namespace sep2n;

namespace {

void BM_EigHermitian(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  const DensityOperator rho = random_density(dim / 2, dim, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eig_hermitian(rho.mat));
  }
}
BENCHMARK(BM_EigHermitian)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

void BM_DecomposePtInvariant(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const DensityOperator rho = random_pt_invariant(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose_pt_invariant(rho));
  }
}
BENCHMARK(BM_DecomposePtInvariant)->DenseRange(2, 6);

void BM_Decompose2x2(benchmark::State& state) {
  const DensityOperator rho = random_ppt(2, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose_2x2(rho));
  }
}
BENCHMARK(BM_Decompose2x2);

void BM_Certify(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const DensityOperator rho = random_density(n, 2 * n, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(rho));
  }
}
BENCHMARK(BM_Certify)->DenseRange(2, 4);

void BM_QuickCertify(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const DensityOperator rho = random_density(n, 2 * n, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quick_certify(rho));
  }
}
BENCHMARK(BM_QuickCertify)->DenseRange(2, 4);

void BM_FindProductInSubspace(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Subspace h = random_subspace(2 * n, n, 19);
  for (auto _ : state) {
    benchmark::DoNotOptimize(find_product_in_subspace(h));
  }
}
BENCHMARK(BM_FindProductInSubspace)->DenseRange(2, 8);

}  // namespace

BENCHMARK_MAIN();
