#include "sep2n/stategen.hpp"

#include <cmath>

namespace sep2n {

namespace {

constexpr int kRejectionCap = 100000;

Matrix gaussian_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.cnormal();
  return g;
}

Vector gaussian_vector(SplitMix64& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.cnormal();
  return v;
}

DensityOperator density_from(SplitMix64& rng, Eigen::Index dim_b,
                             Eigen::Index rank) {
  const Eigen::Index d = 2 * dim_b;
  const Matrix g = gaussian_matrix(rng, d, rank);
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return DensityOperator::create(dim_b, m);
}

}  // namespace

std::uint64_t SplitMix64::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 is bumped away from zero so the log stays finite.
  double u1 = uniform();
  if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

Cplx SplitMix64::cnormal() {
  const double re = normal();
  const double im = normal();
  return Cplx(re, im) / std::sqrt(2.0);
}

DensityOperator random_density(Eigen::Index dim_b, Eigen::Index rank,
                               std::uint64_t seed) {
  if (dim_b < 1) fail(Errc::invalid_argument, "dim_b must be >= 1");
  if (rank < 1 || rank > 2 * dim_b)
    fail(Errc::invalid_argument, "rank must be in [1, 2N]");
  SplitMix64 rng(seed);
  return density_from(rng, dim_b, rank);
}

SeparableSample random_separable(Eigen::Index dim_b, Eigen::Index terms,
                                 std::uint64_t seed) {
  if (dim_b < 1) fail(Errc::invalid_argument, "dim_b must be >= 1");
  if (terms < 1) fail(Errc::invalid_argument, "need at least one term");
  SplitMix64 rng(seed);
  SeparableSample out;
  out.decomposition.dim_b = dim_b;
  double total = 0.0;
  std::vector<double> raw(static_cast<size_t>(terms));
  for (double& w : raw) {
    // -ln(1-U) is a unit exponential, so the normalized vector is
    // Dirichlet(1,...,1) (uniform on the simplex). Floored away from zero
    // so every term stays a genuine convex contribution.
    w = std::max(-std::log(1.0 - rng.uniform()), 1e-9);
    total += w;
  }
  for (Eigen::Index i = 0; i < terms; ++i) {
    Term t;
    t.weight = raw[static_cast<size_t>(i)] / total;
    Eigen::Vector2cd e(rng.cnormal(), rng.cnormal());
    while (e.norm() < 1e-6) e << rng.cnormal(), rng.cnormal();
    Vector f = gaussian_vector(rng, dim_b);
    while (f.norm() < 1e-6) f = gaussian_vector(rng, dim_b);
    t.pv.e = Eigen::Vector2cd(phase_fix(Vector(e / e.norm())));
    t.pv.f = phase_fix(Vector(f / f.norm()));
    out.decomposition.terms.push_back(t);
  }
  out.state = assemble(out.decomposition);
  return out;
}

DensityOperator random_pt_invariant(Eigen::Index dim_b, std::uint64_t seed) {
  if (dim_b < 1) fail(Errc::invalid_argument, "dim_b must be >= 1");
  SplitMix64 rng(seed);
  DensityOperator start = density_from(rng, dim_b, 2 * dim_b);
  Matrix m = start.mat;
  // Alternate projections onto the PSD cone and the PT-invariant subspace
  // (both convex, nonempty intersection contains I/2N); stop at joint
  // defects below 1e-14.
  for (int iter = 0; iter < 500; ++iter) {
    const DensityOperator cur = DensityOperator::create(dim_b, m);
    m = 0.5 * (cur.mat + partial_transpose_a(cur).mat);
    m = 0.5 * (m + m.adjoint());
    const HermitianEig eig = eig_hermitian(m);
    const double mn = eig.values.minCoeff();
    if (mn >= 0.0) {
      const DensityOperator probe = DensityOperator::create(dim_b, m);
      if (pt_defect(probe) <= 1e-14) break;
      continue;
    }
    const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
    m = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
    m = 0.5 * (m + m.adjoint());
  }
  // One last exact symmetrization (harmless on the PSD side at this point).
  m = 0.5 * (m + partial_transpose_a(DensityOperator::create(dim_b, m)).mat);
  m = 0.5 * (m + m.adjoint());
  const double tr = m.trace().real();
  if (tr <= 1e-12)
    fail(Errc::numerical_failure, "pt-invariant projection collapsed");
  m /= tr;
  return DensityOperator::create(dim_b, m);
}

DensityOperator random_ppt(Eigen::Index dim_b, std::uint64_t seed) {
  if (dim_b < 1) fail(Errc::invalid_argument, "dim_b must be >= 1");
  SplitMix64 rng(seed);
  const ToleranceConfig tol;
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    DensityOperator rho = density_from(rng, dim_b, 2 * dim_b);
    const HermitianEig eig = eig_hermitian(partial_transpose_a(rho).mat);
    if (eig.values.minCoeff() >= -tol.psd_tol) return rho;
  }
  fail(Errc::numerical_failure, "no PPT sample within the attempt bound");
}

DensityOperator random_npt(Eigen::Index dim_b, std::uint64_t seed) {
  if (dim_b < 1) fail(Errc::invalid_argument, "dim_b must be >= 1");
  SplitMix64 rng(seed);
  const ToleranceConfig tol;
  for (int attempt = 0; attempt < kRejectionCap; ++attempt) {
    DensityOperator rho = density_from(rng, dim_b, 2 * dim_b);
    const HermitianEig eig = eig_hermitian(partial_transpose_a(rho).mat);
    if (eig.values.minCoeff() < -tol.psd_tol) return rho;
  }
  fail(Errc::numerical_failure, "no NPT sample within the attempt bound");
}

DensityOperator werner(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(Errc::invalid_argument, "werner parameter must be in [0, 1]");
  Vector psi = Vector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);   // |0,1>
  psi(2) = -1.0 / std::sqrt(2.0);  // -|1,0>
  Matrix m = p * (psi * psi.adjoint()) + (1.0 - p) * 0.25 * Matrix::Identity(4, 4);
  m = 0.5 * (m + m.adjoint());
  return DensityOperator::create(2, m);
}

Subspace random_subspace(Eigen::Index ambient, Eigen::Index dim,
                         std::uint64_t seed) {
  if (ambient < 1 || dim < 1 || dim > ambient)
    fail(Errc::invalid_argument, "need 1 <= dim <= ambient");
  SplitMix64 rng(seed);
  const Matrix g = gaussian_matrix(rng, ambient, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Subspace out;
  out.ambient = ambient;
  out.basis = q.leftCols(dim);
  return out;
}

}  // namespace sep2n
