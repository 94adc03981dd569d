#include "sep2n/reduction.hpp"

#include <algorithm>
#include <cmath>

namespace sep2n {

namespace {

constexpr double kRangeMembershipLimit = 1e-7;

double op_scale(const Matrix& m) { return std::max(operator_norm(m), 1e-300); }

ProductVector unit_pv(const ProductVector& pv) {
  const double en = pv.e.norm();
  const double fn = pv.f.norm();
  if (en < 1e-300 || fn < 1e-300)
    fail(Errc::zero_vector, "product factors must be nonzero");
  ProductVector out;
  out.e = pv.e / en;
  out.f = pv.f / fn;
  return out;
}

// lambda = 1 / <v| M^+ |v> for unit v in R(M).
double extraction_lambda(const Matrix& m, const Vector& v,
                         const ToleranceConfig& tol, const char* side) {
  const RankSplit split = rank_kernel_range(m, tol);
  const double res = membership_residual(split.range, v);
  if (res > kRangeMembershipLimit)
    fail(Errc::not_in_range, std::string("product vector is not in the range of ") +
                                 side + " (residual " + std::to_string(res) + ")");
  const Matrix pinv = pseudo_inverse(m, tol);
  const double den = (v.adjoint() * pinv * v).value().real();
  if (!(den > 1e-300))
    fail(Errc::zero_denominator, "vanishing <v| pinv |v> in range peel");
  return 1.0 / den;
}

// Every subtraction re-symmetrizes its result to suppress accumulated
// floating-point asymmetry; the correction applied must stay negligible.
Matrix symmetrize_checked(const Matrix& m) {
  const double correction = 0.5 * (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (correction > 1e-12)
    fail(Errc::numerical_failure,
         "subtraction produced an asymmetry correction of " +
             std::to_string(correction));
  return 0.5 * (m + m.adjoint());
}

DensityOperator subtract_rank_one(const DensityOperator& rho, double lambda,
                                  const Vector& v) {
  const Matrix m = rho.mat - lambda * (v * v.adjoint());
  return DensityOperator::create(rho.dim_b, symmetrize_checked(m));
}

// Projects out the C^2 (x) f slice. A no-op in exact arithmetic once the
// operator annihilates it; numerically it pins the invariant compress_b
// checks for. Commutes with the partial transpose on the A side.
Matrix project_out_b_direction(const Matrix& m, Eigen::Index dim_b,
                               const Vector& f_unit) {
  Matrix qb = Matrix::Identity(dim_b, dim_b) - f_unit * f_unit.adjoint();
  Matrix q = Matrix::Zero(2 * dim_b, 2 * dim_b);
  q.topLeftCorner(dim_b, dim_b) = qb;
  q.bottomRightCorner(dim_b, dim_b) = qb;
  Matrix out = q * m * q;
  return 0.5 * (out + out.adjoint());
}

}  // namespace

SubtractionResult peel_range_product(const DensityOperator& rho,
                                     const ProductVector& pv,
                                     const ToleranceConfig& tol) {
  const ProductVector u = unit_pv(pv);
  const Vector v = tensor(u.e, u.f);
  const double lambda = extraction_lambda(rho.mat, v, tol, "rho");
  SubtractionResult out{subtract_rank_one(rho, lambda, v), lambda, u,
                        RankSide::rho};
  return out;
}

SubtractionResult peel_range_product_ppt(const DensityOperator& rho,
                                         const ProductVector& pv,
                                         const ToleranceConfig& tol) {
  const ProductVector u = unit_pv(pv);
  const Vector v = tensor(u.e, u.f);
  const Vector vt = tensor(conj_a(u.e), u.f);
  const DensityOperator rho_ta = partial_transpose_a(rho);
  const double l1 = extraction_lambda(rho.mat, v, tol, "rho");
  const double l2 = extraction_lambda(rho_ta.mat, vt, tol, "rho^TA");
  const double lambda = std::min(l1, l2);
  RankSide dropped;
  if (std::abs(l1 - l2) <= 1e-12 * std::max(l1, l2))
    dropped = RankSide::both;
  else
    dropped = (l1 < l2) ? RankSide::rho : RankSide::rho_ta;
  SubtractionResult out{subtract_rank_one(rho, lambda, v), lambda, u, dropped};
  return out;
}

KernelCase classify_kernel_product(const DensityOperator& rho,
                                   const ProductVector& pv,
                                   const ToleranceConfig& tol) {
  const ProductVector u = unit_pv(pv);
  const Vector v = tensor(u.e, u.f);
  const double opn = op_scale(rho.mat);
  const double kernel_residual = (rho.mat * v).norm();
  if (kernel_residual > tol.rank_tol * opn)
    fail(Errc::not_in_kernel,
         "product vector is not annihilated (residual " +
             std::to_string(kernel_residual / opn) + " relative)");

  const Eigen::Vector2cd eh = perp(u.e);
  const Vector w = rho.mat * tensor(eh, u.f);
  const Eigen::Index n = rho.dim_b;
  // Split w on the A side along {e, perp(e)}; the e component must vanish
  // for a PPT operator (up to square-root amplification of the kernel
  // residual).
  Vector g(n);
  Cplx e_component_sq = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Cplx w0 = w(k);
    const Cplx w1 = w(n + k);
    g(k) = std::conj(eh(0)) * w0 + std::conj(eh(1)) * w1;
    const Cplx along_e = std::conj(u.e(0)) * w0 + std::conj(u.e(1)) * w1;
    e_component_sq += along_e * std::conj(along_e);
  }
  const double e_component = std::sqrt(std::abs(e_component_sq));
  const double e_limit =
      100.0 * std::sqrt(std::max(kernel_residual, tol.rank_tol * opn) * opn) +
      1e-12 * opn;
  if (e_component > e_limit)
    fail(Errc::structure_violation,
         "companion image has a component along e (" +
             std::to_string(e_component / opn) + " relative); operator is "
             "not PPT-compatible with this kernel vector");

  // The zero-test for the companion image scales linearly with the measured
  // kernel residual: the image is a direct matrix-vector product, with no
  // square-root amplification. A generous limit here silently truncates
  // genuinely small structure components and breaks the reconstruction.
  const double both_limit = 100.0 * kernel_residual + 1e-12 * opn;

  KernelCase out;
  if (w.norm() <= both_limit) {
    out.both_in_kernel = true;
  } else {
    out.g = g;
  }
  return out;
}

namespace {

SupportReduction reduce_with(const DensityOperator& rho, const ProductVector& u,
                             const ToleranceConfig& tol) {
  const KernelCase kc = classify_kernel_product(rho, u, tol);
  SupportReduction out;
  out.direction = u.f;
  if (kc.both_in_kernel) {
    out.reduced = DensityOperator::create(
        rho.dim_b, project_out_b_direction(rho.mat, rho.dim_b, u.f));
    return out;
  }
  const Eigen::Vector2cd eh = perp(u.e);
  // <g|f> equals the sandwich <perp(e),f| rho |perp(e),f>; computing it as
  // that quadratic form keeps it manifestly real and nonnegative instead of
  // picking up spurious imaginary parts from separately computed factors.
  const Vector x = tensor(eh, u.f);
  const double gf = x.dot(rho.mat * x).real();
  const double opn = op_scale(rho.mat);
  if (!(gf > 1e-300)) {
    if (std::abs(gf) <= 1e-12 * opn)
      fail(Errc::zero_denominator, "overlap <g|f> vanishes");
    fail(Errc::non_positive_overlap, "overlap <g|f> is negative");
  }
  const double g2 = kc.g.squaredNorm();
  const Vector veg = tensor(eh, kc.g);
  Matrix m = symmetrize_checked(rho.mat - (veg * veg.adjoint()) / gf);
  m = project_out_b_direction(m, rho.dim_b, u.f);
  out.reduced = DensityOperator::create(rho.dim_b, m);
  Term t;
  t.weight = g2 / gf;
  t.pv.e = eh;
  t.pv.f = kc.g / std::sqrt(g2);
  out.removed = t;
  return out;
}

}  // namespace

SupportReduction reduce_support(const DensityOperator& rho,
                                const ProductVector& pv,
                                const ToleranceConfig& tol) {
  return reduce_with(rho, unit_pv(pv), tol);
}

SupportReduction reduce_support_pt(const DensityOperator& rho,
                                   const ProductVector& pv,
                                   const ToleranceConfig& tol) {
  const ProductVector u = unit_pv(pv);
  const double opn = op_scale(rho.mat);

  // Both e + e* and (e - e*)/i span kernel directions of a PT-invariant
  // operator; at least one has norm >= sqrt(2). Take them in that order and
  // keep the first that verifies.
  Eigen::Vector2cd combos[2] = {
      u.e + u.e.conjugate(),
      (u.e - u.e.conjugate()) / Cplx(0.0, 1.0),
  };
  for (Eigen::Vector2cd er : combos) {
    const double norm = er.norm();
    if (norm <= tol.colinear_tol) continue;
    // Force exact realness; the imaginary parts are roundoff by construction.
    er(0) = Cplx(er(0).real(), 0.0);
    er(1) = Cplx(er(1).real(), 0.0);
    er /= er.norm();
    const double res = (rho.mat * tensor(er, u.f)).norm();
    if (res <= tol.rank_tol * opn) {
      ProductVector real_pv;
      real_pv.e = er;
      real_pv.f = u.f;
      return reduce_with(rho, real_pv, tol);
    }
  }
  fail(Errc::realization_failed,
       "no real A-side combination of the kernel vector is annihilated");
}

}  // namespace sep2n
