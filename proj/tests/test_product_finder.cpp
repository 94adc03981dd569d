#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace sep2n;
using namespace testsupport;

namespace {

Subspace span_of(Eigen::Index ambient, std::initializer_list<Vector> vecs) {
  Matrix cols(ambient, static_cast<Eigen::Index>(vecs.size()));
  Eigen::Index j = 0;
  for (const Vector& v : vecs) cols.col(j++) = v;
  return subspace_from_columns(cols);
}

}  // namespace

TEST_CASE("pencil rows are orthonormal: A A^dag + B B^dag = I") {
  SplitMix64 rng(301);
  for (Eigen::Index n : {1, 2, 3, 6}) {
    const Subspace h = random_subspace(2 * n, n, rng.next_u64());
    const PencilSystem sys = build_pencil(h);
    CHECK(sys.a.rows() == n);
    CHECK(sys.a.cols() == n);
    const Matrix sum = sys.a * sys.a.adjoint() + sys.b * sys.b.adjoint();
    CHECK((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS((void)build_pencil(random_subspace(6, 2, 1)), Error);
}

TEST_CASE("pencil residual equals membership residual for unit factors") {
  SplitMix64 rng(303);
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::Index n = 2 + Eigen::Index(rng.next_u64() % 4);
    const Subspace h = random_subspace(2 * n, n, rng.next_u64());
    const PencilSystem sys = build_pencil(h);
    const Eigen::Vector2cd e = random_qubit(rng);
    const Vector f = random_vector(rng, n);
    const double pencil = ((e(0) * sys.a + e(1) * sys.b) * f).norm();
    const double member = membership_residual(h, tensor(e, f));
    CHECK(std::abs(pencil - member) <= 1e-12);
  }
}

TEST_CASE("two-dim symmetric subspace: both product vectors are legal answers") {
  // span{|00>+|11>, |01>+|10>} contains exactly two product rays:
  // (1,1)(x)(1,1) and (1,-1)(x)(1,-1), both normalized.
  Vector v1 = Vector::Zero(4), v2 = Vector::Zero(4);
  v1(0) = 1.0; v1(3) = 1.0;
  v2(1) = 1.0; v2(2) = 1.0;
  const Subspace h = span_of(4, {v1, v2});

  const ProductSearchResult r = find_product_in_subspace(h);
  CHECK(r.membership_residual <= 1e-12);
  CHECK(r.pencil_residual <= 1e-12);
  CHECK_FALSE(r.alpha_infinite);
  CHECK(std::abs(std::abs(r.alpha) - 1.0) <= 1e-10);

  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd plus, minus;
  plus << s, s;
  minus << s, -s;
  const double overlap_plus = std::abs(plus.dot(r.pv.e));
  const double overlap_minus = std::abs(minus.dot(r.pv.e));
  CHECK(std::max(overlap_plus, overlap_minus) >= 1.0 - 1e-10);
  // The B factor must be the matching one.
  Vector fplus(2), fminus(2);
  fplus << s, s;
  fminus << s, -s;
  if (overlap_plus > overlap_minus)
    CHECK(std::abs(fplus.dot(r.pv.f)) >= 1.0 - 1e-10);
  else
    CHECK(std::abs(fminus.dot(r.pv.f)) >= 1.0 - 1e-10);
}

TEST_CASE("planted product vectors are recovered in random subspaces") {
  SplitMix64 rng(305);
  for (int rep = 0; rep < 40; ++rep) {
    const Eigen::Index n = 2 + Eigen::Index(rng.next_u64() % 5);
    const Eigen::Vector2cd e = random_qubit(rng);
    const Vector f = random_vector(rng, n);
    Matrix cols(2 * n, n);
    cols.col(0) = tensor(e, f);
    for (Eigen::Index j = 1; j < n; ++j) cols.col(j) = random_vector(rng, 2 * n);
    const Subspace h = subspace_from_columns(cols);
    REQUIRE(h.dim() == n);

    const ProductSearchResult r = find_product_in_subspace(h);
    CHECK(r.membership_residual <= 1e-8);
    CHECK(r.pencil_residual <= 1e-10);
    CHECK(membership_residual(h, r.pv.joint()) <= 1e-8);
  }
}

TEST_CASE("square-pencil search meets the hard residual bounds") {
  for (Eigen::Index n : {2, 3, 5, 8}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const Subspace h = random_subspace(2 * n, n, n * 1000 + i);
      const ProductSearchResult r = find_product_in_subspace(h);
      CHECK(r.membership_residual <= 1e-8);
      CHECK(r.pencil_residual <= 1e-10);
      CHECK(std::abs(r.pv.e.norm() - 1.0) <= 1e-12);
      CHECK(std::abs(r.pv.f.norm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("search is deterministic") {
  const Subspace h = random_subspace(10, 5, 17);
  const ProductSearchResult a = find_product_in_subspace(h);
  const ProductSearchResult b = find_product_in_subspace(h);
  CHECK((a.pv.e - b.pv.e).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.pv.f - b.pv.f).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.membership_residual == b.membership_residual);
}

TEST_CASE("edge dimensions: N = 1 and the full space") {
  // Every vector of C^2 (x) C^1 is a product.
  const Subspace line = random_subspace(2, 1, 7);
  const ProductSearchResult r1 = find_product_in_subspace(line);
  CHECK(r1.membership_residual <= 1e-12);

  // The whole space trivially contains |0>(x)|0>.
  const Subspace full = random_subspace(8, 8, 9);
  const ProductSearchResult r2 = find_product_in_subspace(full);
  CHECK(r2.membership_residual <= 1e-12);

  // dim < N cannot be forced to contain a product vector: rejected.
  CHECK_THROWS_AS((void)find_product_in_subspace(random_subspace(8, 3, 11)),
                  Error);
}

TEST_CASE("oversized subspaces admit a real A-side factor") {
  for (Eigen::Index n : {2, 3, 5, 8}) {
    for (std::uint64_t i = 0; i < 25; ++i) {
      const Eigen::Index dim = n + 1 + Eigen::Index(i % n);  // N+1 .. 2N
      const Subspace h = random_subspace(2 * n, dim, n * 2000 + i);
      const ProductSearchResult r = find_real_e_product(h);
      CHECK(r.membership_residual <= 1e-8);
      CHECK(r.pencil_residual <= 1e-10);
      CHECK(r.pv.e.imag().cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  // dim == N is not enough for the realness guarantee.
  CHECK_THROWS_AS((void)find_real_e_product(random_subspace(6, 3, 1)), Error);
  try {
    (void)find_real_e_product(random_subspace(6, 3, 1));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::subspace_too_small);
  }
}
