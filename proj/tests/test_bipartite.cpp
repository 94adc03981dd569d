#include <doctest.h>

#include <cmath>
#include <complex>

#include "support.hpp"

using namespace sep2n;
using namespace testsupport;

TEST_CASE("DensityOperator::create validates shape, Hermiticity and trace") {
  CHECK_THROWS_AS(DensityOperator::create(2, Matrix::Zero(3, 4)), Error);
  CHECK_THROWS_AS(DensityOperator::create(2, Matrix::Zero(6, 6)), Error);
  Matrix bad = Matrix::Identity(4, 4);
  bad(0, 1) = Cplx(0, 1);  // not Hermitian
  CHECK_THROWS_AS(DensityOperator::create(2, bad), Error);
  Matrix neg = -Matrix::Identity(4, 4);
  CHECK_THROWS_AS(DensityOperator::create(2, neg), Error);
  const DensityOperator ok =
      DensityOperator::create(2, Matrix::Identity(4, 4) / 4.0);
  CHECK(ok.unit_trace);
  CHECK(ok.dim_total() == 4);
}

TEST_CASE("partial_transpose_a matches the index-level oracle") {
  SplitMix64 rng(101);
  for (Eigen::Index n : {1, 2, 3, 5}) {
    const Matrix h = random_hermitian(rng, 2 * n);
    const DensityOperator rho{n, h, false};
    const DensityOperator ta = partial_transpose_a(rho);
    CHECK(operator_norm(ta.mat - naive_partial_transpose(h, n)) <= 1e-15);
    // Involution; preserves trace and Frobenius norm.
    CHECK(operator_norm(partial_transpose_a(ta).mat - h) <= 1e-15);
    CHECK(std::abs(ta.mat.trace() - h.trace()) <= 1e-13);
    CHECK(std::abs(ta.mat.norm() - h.norm()) <= 1e-13);
  }
}

TEST_CASE("Bell state: partial transpose eigenvalue and pt_defect") {
  const DensityOperator bell = bell_state();
  CHECK(min_pt_eig(bell) == doctest::Approx(-0.5).epsilon(1e-14));
  // ||rho - rho^TA|| in operator norm.
  CHECK(pt_defect(bell) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("tensor stacks |e,f> in the row = a*N + k convention") {
  Eigen::Vector2cd e(Cplx(0, 1), 2.0);
  Vector f(3);
  f << 1.0, Cplx(0, -1), 0.5;
  const Vector v = tensor(e, f);
  CHECK(v.size() == 6);
  CHECK((v - naive_tensor(e, f)).norm() <= 1e-15);
  CHECK(v(0) == Cplx(0, 1));   // e_0 f_0
  CHECK(v(4) == Cplx(0, -2));  // e_1 f_1
}

TEST_CASE("perp convention and the frozen example") {
  // (a,b) -> (-conj b, conj a): perp((1,i)/sqrt2) = (i,1)/sqrt2.
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd e(s, Cplx(0, s));
  const Eigen::Vector2cd h = perp(e);
  CHECK(std::abs(h(0) - Cplx(0, s)) <= 1e-15);
  CHECK(std::abs(h(1) - Cplx(s, 0)) <= 1e-15);

  SplitMix64 rng(103);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::Vector2cd a = random_qubit(rng);
    CHECK(std::abs(a.dot(perp(a))) <= 1e-15);
    CHECK((perp(perp(a)) + a).norm() <= 1e-15);  // perp^2 = -1
    CHECK(std::abs(perp(a).norm() - 1.0) <= 1e-15);
    // Conjugation and perp interchange up to the definitional identity
    // perp(e)* = perp-of-(e*) with both sides computed independently.
    CHECK((conj_a(perp(a)) - perp(conj_a(a))).norm() <= 1e-15);
  }
}

TEST_CASE("sandwich_a and sandwich_b match the loop oracles") {
  SplitMix64 rng(107);
  for (Eigen::Index n : {2, 4}) {
    const DensityOperator rho{n, random_hermitian(rng, 2 * n), false};
    const Eigen::Vector2cd e1 = random_qubit(rng), e2 = random_qubit(rng);
    CHECK(operator_norm(sandwich_a(rho, e1, e2) -
                        naive_sandwich_a(rho, e1, e2)) <= 1e-13);
    const Vector f1 = random_vector(rng, n), f2 = random_vector(rng, n);
    CHECK(operator_norm(Matrix(sandwich_b(rho, f1, f2) -
                               naive_sandwich_b(rho, f1, f2))) <= 1e-13);
  }
}

TEST_CASE("sandwich_b of the Bell state at |0>_B is the frozen projector") {
  const DensityOperator bell = bell_state();
  Vector f = Vector::Zero(2);
  f(0) = 1.0;
  const Eigen::Matrix2cd m = sandwich_b(bell, f, f);
  CHECK(std::abs(m(0, 0) - Cplx(0.5, 0)) <= 1e-15);
  CHECK(std::abs(m(0, 1)) <= 1e-15);
  CHECK(std::abs(m(1, 0)) <= 1e-15);
  CHECK(std::abs(m(1, 1)) <= 1e-15);
}

TEST_CASE("conjugation identity: <e1|rho|e2> = <e2*|rho^TA|e1*>") {
  SplitMix64 rng(109);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next_u64() % 3);
    const DensityOperator rho{n, random_hermitian(rng, 2 * n), false};
    const DensityOperator ta = partial_transpose_a(rho);
    const Eigen::Vector2cd e1 = random_qubit(rng), e2 = random_qubit(rng);
    CHECK(operator_norm(sandwich_a(rho, e1, e2) -
                        sandwich_a(ta, conj_a(e2), conj_a(e1))) <= 1e-12);
  }
}

TEST_CASE("assemble matches the outer-product oracle") {
  SplitMix64 rng(113);
  for (int rep = 0; rep < 10; ++rep) {
    SeparableDecomposition dec;
    dec.dim_b = 3;
    for (int t = 0; t < 4; ++t) {
      Term term;
      term.weight = rng.uniform() + 0.05;
      term.pv.e = 2.3 * random_qubit(rng);  // unnormalized on purpose
      term.pv.f = 0.4 * random_vector(rng, 3);
      dec.terms.push_back(term);
    }
    const DensityOperator rho = assemble(dec);
    CHECK(operator_norm(rho.mat - naive_assemble(dec)) <= 1e-13);
  }
  CHECK_THROWS_AS(
      assemble(SeparableDecomposition{0, {}}), Error);
}

TEST_CASE("verify_decomposition verdicts") {
  SplitMix64 rng(127);
  const SeparableSample sample = random_separable(3, 5, rng.next_u64());
  CHECK(verify_decomposition(sample.state, sample.decomposition).ok);

  SeparableDecomposition bad = sample.decomposition;
  bad.terms[0].weight *= 1.5;
  const VerifyReport wrong = verify_decomposition(sample.state, bad);
  CHECK_FALSE(wrong.ok);

  SeparableDecomposition negated = sample.decomposition;
  negated.terms[0].weight *= -1.0;
  const VerifyReport neg = verify_decomposition(sample.state, negated);
  CHECK_FALSE(neg.ok);
  CHECK(neg.min_weight < 0.0);
  CHECK(std::isinf(neg.recon_error));

  SeparableDecomposition mismatched = sample.decomposition;
  mismatched.dim_b = 2;
  CHECK_THROWS_AS(verify_decomposition(sample.state, mismatched), Error);
}

TEST_CASE("compress_b removes a B-direction and lift undoes it") {
  SplitMix64 rng(131);
  for (Eigen::Index n : {2, 3, 5}) {
    // State supported on C^2 (x) f-perp: every B-factor orthogonal to f.
    const KernelInstance inst = kernel_both_instance(rng, n, 4, false);
    const BCompression c = compress_b(inst.rho, inst.pv.f);
    CHECK(c.reduced.dim_b == n - 1);
    CHECK(operator_norm(c.isometry.adjoint() * c.isometry -
                        Matrix::Identity(n - 1, n - 1)) <= 1e-12);
    // The compressed state reproduces rho through the isometry.
    Matrix v = Matrix::Zero(2 * n, 2 * (n - 1));
    v.topLeftCorner(n, n - 1) = c.isometry;
    v.bottomRightCorner(n, n - 1) = c.isometry;
    CHECK(operator_norm(v * c.reduced.mat * v.adjoint() - inst.rho.mat) <=
          1e-10);
    // lift maps compressed products back.
    ProductVector pv;
    pv.e = random_qubit(rng);
    pv.f = random_vector(rng, n - 1);
    const ProductVector lifted = lift(c, pv);
    CHECK((lifted.f - c.isometry * pv.f).norm() <= 1e-14);
    // Precondition enforcement: a full-rank state cannot be compressed.
    const DensityOperator full{
        n, Matrix::Identity(2 * n, 2 * n) / (2.0 * n), true};
    CHECK_THROWS_AS(compress_b(full, inst.pv.f), Error);
  }
}

TEST_CASE("as_product recognizes products and rejects entangled vectors") {
  SplitMix64 rng(137);
  for (Eigen::Index n : {2, 4}) {
    const Eigen::Vector2cd e = random_qubit(rng);
    const Vector f = random_vector(rng, n);
    const Vector v = tensor(e, f);
    const auto p = as_product(v, n, 1e-8);
    REQUIRE(p.has_value());
    // Factors reproduce v up to a global phase.
    const Vector w = tensor(p->e, p->f);
    CHECK(std::abs(std::abs(w.dot(v)) - v.norm()) <= 1e-10);

    Vector ent = Vector::Zero(2 * n);
    ent(0) = 1.0;
    ent(n + 1) = 1.0;  // |0,0> + |1,1>
    CHECK_FALSE(as_product(ent, n, 1e-8).has_value());
  }
}

TEST_CASE("require_psd accepts PSD and rejects indefinite operators") {
  const DensityOperator ok{2, Matrix::Identity(4, 4) / 4.0, true};
  CHECK_NOTHROW(require_psd(ok));
  CHECK_THROWS_AS(require_psd(partial_transpose_a(bell_state())), Error);
}
