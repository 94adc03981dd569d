#include "sep2n/bipartite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace sep2n {

DensityOperator DensityOperator::create(Eigen::Index dim_b, Matrix m) {
  if (dim_b < 1)
    fail(Errc::invalid_argument, "dim_b must be >= 1");
  if (m.rows() != 2 * dim_b || m.cols() != 2 * dim_b)
    fail(Errc::dimension_mismatch,
         "matrix must be 2N x 2N with N = " + std::to_string(dim_b));
  Matrix h = require_hermitian(m);
  const double tr = h.trace().real();
  if (tr < -1e-12)
    fail(Errc::invalid_argument,
         "trace " + std::to_string(tr) + " is negative");
  DensityOperator out;
  out.dim_b = dim_b;
  out.mat = std::move(h);
  out.unit_trace = std::abs(tr - 1.0) <= 1e-12;
  return out;
}

void require_psd(const DensityOperator& rho, const ToleranceConfig& tol) {
  const HermitianEig eig = eig_hermitian(rho.mat);
  const double min_eig = eig.values.minCoeff();
  if (min_eig < -tol.psd_tol)
    fail(Errc::not_psd,
         "min eigenvalue " + std::to_string(min_eig) + " below -psd_tol");
}

Vector tensor(const Eigen::Vector2cd& e, const Vector& f) {
  const Eigen::Index n = f.size();
  Vector out(2 * n);
  out.head(n) = e(0) * f;
  out.tail(n) = e(1) * f;
  return out;
}

DensityOperator partial_transpose_a(const DensityOperator& rho) {
  const Eigen::Index n = rho.dim_b;
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = rho.mat.topLeftCorner(n, n);
  out.bottomRightCorner(n, n) = rho.mat.bottomRightCorner(n, n);
  out.topRightCorner(n, n) = rho.mat.bottomLeftCorner(n, n);
  out.bottomLeftCorner(n, n) = rho.mat.topRightCorner(n, n);
  DensityOperator r;
  r.dim_b = n;
  r.mat = std::move(out);
  r.unit_trace = rho.unit_trace;
  return r;
}

Eigen::Vector2cd conj_a(const Eigen::Vector2cd& e) { return e.conjugate(); }

Eigen::Vector2cd perp(const Eigen::Vector2cd& e) {
  const double norm = e.norm();
  if (norm == 0.0) fail(Errc::zero_vector, "perp of the zero vector");
  Eigen::Vector2cd out;
  out(0) = -std::conj(e(1));
  out(1) = std::conj(e(0));
  return out / norm;
}

Matrix sandwich_a(const DensityOperator& rho, const Eigen::Vector2cd& e1,
                  const Eigen::Vector2cd& e2) {
  const Eigen::Index n = rho.dim_b;
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out += std::conj(e1(a)) * e2(b) * rho.mat.block(a * n, b * n, n, n);
  return out;
}

Eigen::Matrix2cd sandwich_b(const DensityOperator& rho, const Vector& f1,
                            const Vector& f2) {
  const Eigen::Index n = rho.dim_b;
  if (f1.size() != n || f2.size() != n)
    fail(Errc::dimension_mismatch, "sandwich_b factor dimension mismatch");
  Eigen::Matrix2cd out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out(a, b) = (f1.adjoint() * rho.mat.block(a * n, b * n, n, n) * f2)(0);
  return out;
}

DensityOperator assemble(const SeparableDecomposition& dec) {
  const Eigen::Index n = dec.dim_b;
  if (n < 1) fail(Errc::invalid_argument, "decomposition needs dim_b >= 1");
  Matrix acc = Matrix::Zero(2 * n, 2 * n);
  for (const Term& t : dec.terms) {
    if (!(t.weight > 0.0))
      fail(Errc::invalid_argument, "non-positive decomposition weight");
    if (t.pv.f.size() != n)
      fail(Errc::dimension_mismatch, "term B-factor has wrong dimension");
    Vector v = tensor(t.pv.e, t.pv.f);
    const double norm = v.norm();
    if (norm == 0.0) fail(Errc::zero_vector, "zero product vector in term");
    v /= norm;
    acc.noalias() += t.weight * (v * v.adjoint());
  }
  acc = 0.5 * (acc + acc.adjoint().eval());
  DensityOperator out;
  out.dim_b = n;
  out.mat = std::move(acc);
  out.unit_trace = std::abs(out.trace() - 1.0) <= 1e-12;
  return out;
}

VerifyReport verify_decomposition(const DensityOperator& rho,
                                  const SeparableDecomposition& dec,
                                  const ToleranceConfig& tol) {
  if (dec.dim_b != rho.dim_b)
    fail(Errc::dimension_mismatch, "decomposition/state dimension mismatch");
  VerifyReport rep;
  rep.min_weight = dec.terms.empty()
                       ? 0.0
                       : std::min_element(dec.terms.begin(), dec.terms.end(),
                                          [](const Term& a, const Term& b) {
                                            return a.weight < b.weight;
                                          })
                             ->weight;
  const bool weights_ok = dec.terms.empty() || rep.min_weight > 0.0;
  if (!weights_ok) {
    // assemble() would refuse the non-positive weight; report the failure
    // instead of throwing so callers get a verdict, not an exception.
    rep.recon_error = std::numeric_limits<double>::infinity();
    rep.ok = false;
    return rep;
  }
  const DensityOperator rebuilt = assemble(dec);
  rep.recon_error = operator_norm(rho.mat - rebuilt.mat);
  rep.ok = rep.recon_error <= tol.recon_tol * rho.trace();
  return rep;
}

double pt_defect(const DensityOperator& rho) {
  return operator_norm(rho.mat - partial_transpose_a(rho).mat);
}

BCompression compress_b(const DensityOperator& rho, const Vector& f,
                        const ToleranceConfig& tol) {
  const Eigen::Index n = rho.dim_b;
  if (f.size() != n)
    fail(Errc::dimension_mismatch, "direction has wrong B-dimension");
  if (n < 2)
    fail(Errc::invalid_argument, "cannot compress below dim_b = 1");
  const double fnorm = f.norm();
  if (fnorm == 0.0) fail(Errc::zero_vector, "zero compression direction");

  // Deterministic representative: unit norm, largest component real > 0.
  Vector fu = phase_fix(f / fnorm);

  const double scale = operator_norm(rho.mat);
  double defect = 0.0;
  for (int a = 0; a < 2; ++a) {
    Eigen::Vector2cd ea = Eigen::Vector2cd::Zero();
    ea(a) = 1.0;
    defect = std::max(defect, (rho.mat * tensor(ea, fu)).norm());
  }
  if (defect > tol.rank_tol * std::max(scale, 1e-300))
    fail(Errc::support_not_reduced,
         "rho does not annihilate the direction: defect " +
             std::to_string(defect));

  // Basis of f-perp from the computational basis, dropping the index where
  // |f| peaks, Gram-Schmidt in index order. Real f -> real isometry.
  Eigen::Index drop = 0;
  fu.cwiseAbs().maxCoeff(&drop);
  Matrix v(n, n - 1);
  Eigen::Index col = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (k == drop) continue;
    Vector cand = Vector::Zero(n);
    cand(k) = 1.0;
    cand -= fu * (fu.adjoint() * cand)(0);
    for (Eigen::Index j = 0; j < col; ++j)
      cand -= v.col(j) * (v.col(j).adjoint() * cand)(0);
    const double cn = cand.norm();
    if (cn < 1e-8)
      fail(Errc::numerical_failure, "degenerate complement basis");
    v.col(col++) = cand / cn;
  }

  Matrix big = Matrix::Zero(2 * n, 2 * (n - 1));
  big.topLeftCorner(n, n - 1) = v;
  big.bottomRightCorner(n, n - 1) = v;
  Matrix reduced_mat = big.adjoint() * rho.mat * big;
  reduced_mat = 0.5 * (reduced_mat + reduced_mat.adjoint().eval());

  BCompression out;
  out.reduced.dim_b = n - 1;
  out.reduced.mat = std::move(reduced_mat);
  out.reduced.unit_trace = std::abs(out.reduced.trace() - 1.0) <= 1e-12;
  out.isometry = std::move(v);
  out.removed = std::move(fu);
  return out;
}

ProductVector lift(const BCompression& c, const ProductVector& pv) {
  if (pv.f.size() != c.isometry.cols())
    fail(Errc::dimension_mismatch, "lift dimension mismatch");
  return {pv.e, c.isometry * pv.f};
}

std::optional<ProductVector> as_product(const Vector& v, Eigen::Index dim_b,
                                        double ratio_tol) {
  if (v.size() != 2 * dim_b)
    fail(Errc::dimension_mismatch, "vector is not 2 x dim_b");
  if (v.norm() == 0.0) fail(Errc::zero_vector, "product test on zero vector");
  // Reshape to the 2 x N coefficient matrix: row a, column k.
  Matrix coeff(2, dim_b);
  coeff.row(0) = v.head(dim_b).transpose();
  coeff.row(1) = v.tail(dim_b).transpose();
  Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv(1) > ratio_tol * sv(0)) return std::nullopt;
  ProductVector pv;
  Vector e_big = phase_fix(svd.matrixU().col(0));
  pv.e = Eigen::Vector2cd(e_big(0), e_big(1));
  // coeff ~ s0 * u v^dag; column factor f gets conj(v) so that
  // v_joint[(a,k)] = e_a f_k reproduces the input up to phase.
  pv.f = phase_fix(svd.matrixV().col(0).conjugate());
  return pv;
}

}  // namespace sep2n
