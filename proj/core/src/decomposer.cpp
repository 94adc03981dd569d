#include "sep2n/decomposer.hpp"

#include <cmath>
#include <string>

#include "sep2n/product_finder.hpp"
#include "sep2n/reduction.hpp"

namespace sep2n {

namespace {

void log_step(DecompositionTrace* trace, TraceStep::Kind kind,
              Eigen::Index rank, Eigen::Index dim_b, double clamp) {
  if (!trace) return;
  TraceStep s;
  s.kind = kind;
  s.rank_before = rank;
  s.dim_b_before = dim_b;
  s.clamp_magnitude = clamp;
  trace->steps.push_back(s);
}

// Zeroes the negative tail of the spectrum. The budget keeps this honest:
// anything beyond roundoff accumulation is a real positivity violation.
double clamp_psd(Matrix& m, double budget, const char* what) {
  const HermitianEig eig = eig_hermitian(m);
  if (eig.values.size() == 0) return 0.0;
  const double mn = eig.values.minCoeff();
  if (mn >= 0.0) return 0.0;
  if (-mn > budget)
    fail(Errc::not_psd, std::string(what) + ": eigenvalue " +
                            std::to_string(mn) + " exceeds the clamp budget " +
                            std::to_string(budget));
  const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  m = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
  m = 0.5 * (m + m.adjoint());
  return -mn;
}

double clamp_budget(const Matrix& m, double t0) {
  return std::max(1e-6 * operator_norm(m), 1e-12 * std::max(t0, 1e-300));
}

// Real representative of a 2-level vector that equals its conjugate up to
// phase. Falls back over e + e* and (e - e*)/i; at least one has norm
// >= sqrt(2) for unit e.
Eigen::Vector2cd realify_e(const Eigen::Vector2cd& e,
                           const ToleranceConfig& tol) {
  if (std::max(std::abs(e(0).imag()), std::abs(e(1).imag())) <= 1e-12) {
    Eigen::Vector2cd out(e(0).real(), e(1).real());
    return out / out.norm();
  }
  const Eigen::Vector2cd combos[2] = {
      e + e.conjugate(),
      (e - e.conjugate()) / Cplx(0.0, 1.0),
  };
  for (const Eigen::Vector2cd& c : combos) {
    const double norm = c.norm();
    if (norm <= tol.colinear_tol) continue;
    Eigen::Vector2cd er(c(0).real(), c(1).real());
    er /= er.norm();
    if (std::abs(er.dot(e)) >= 1.0 - 1e-7) return er;
  }
  fail(Errc::realization_failed,
       "2-level factor is not real up to a global phase");
}

void pt_rec(Matrix m, Eigen::Index n, const ToleranceConfig& tol,
            DecompositionTrace* trace, double t0, int fuel,
            std::vector<Term>& out) {
  if (fuel <= 0)
    fail(Errc::numerical_failure, "decomposition did not terminate");

  // Exact projection onto the PT-invariant subspace plus positivity clamp;
  // both are no-ops up to the noise the previous step produced.
  {
    const DensityOperator d = DensityOperator::create(n, m);
    m = 0.5 * (d.mat + partial_transpose_a(d).mat);
  }
  const double clamped = clamp_psd(m, clamp_budget(m, t0), "pt-invariant remainder");
  if (m.trace().real() <= 1e-12 * t0) return;

  const RankSplit split = rank_kernel_range(m, tol);
  if (split.rank == 0) return;

  if (n == 1) {
    // A PT-invariant 2x2 operator is real symmetric; its spectral split is
    // already a product decomposition with real 2-level factors.
    log_step(trace, TraceStep::Kind::base_case, split.rank, n, clamped);
    const HermitianEig eig = eig_hermitian(m);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      const double w = eig.values(j);
      if (w <= 1e-12 * t0) continue;
      Term t;
      t.weight = w;
      t.pv.e = realify_e(Eigen::Vector2cd(phase_fix(eig.vectors.col(j))), tol);
      t.pv.f = Vector::Ones(1);
      out.push_back(t);
    }
    return;
  }

  if (split.rank == 1) {
    log_step(trace, TraceStep::Kind::rank_one, 1, n, clamped);
    const HermitianEig eig = eig_hermitian(m);
    const Eigen::Index last = eig.values.size() - 1;
    auto p = as_product(eig.vectors.col(last), n, 1e-6);
    if (!p)
      fail(Errc::numerical_failure, "rank-one remainder is not a product");
    Term t;
    t.weight = eig.values(last);
    t.pv.e = realify_e(p->e, tol);
    t.pv.f = p->f;
    out.push_back(t);
    return;
  }

  const DensityOperator d = DensityOperator::create(n, m);

  if (split.rank > n) {
    log_step(trace, TraceStep::Kind::range_peel, split.rank, n, clamped);
    const ProductSearchResult found = find_real_e_product(split.range, tol);
    const SubtractionResult sub = peel_range_product_ppt(d, found.pv, tol);
    Term t;
    t.weight = sub.weight;
    t.pv = sub.pv;
    t.pv.e = realify_e(t.pv.e, tol);
    out.push_back(t);
    pt_rec(sub.reduced.mat, n, tol, trace, t0, fuel - 1, out);
    return;
  }

  // rank <= n with n >= 2: the kernel has dimension >= n and contains a
  // product vector; one reduction plus a compression recurses at N-1.
  log_step(trace, TraceStep::Kind::kernel_reduce, split.rank, n, clamped);
  const ProductSearchResult found = find_product_in_subspace(split.kernel, tol);
  const SupportReduction red = reduce_support_pt(d, found.pv, tol);
  if (red.removed) out.push_back(*red.removed);
  log_step(trace, TraceStep::Kind::compress,
           split.rank - (red.removed ? 1 : 0), n, 0.0);
  const BCompression comp = compress_b(red.reduced, red.direction, tol);
  std::vector<Term> inner;
  pt_rec(comp.reduced.mat, n - 1, tol, trace, t0, fuel - 1, inner);
  for (const Term& t : inner) {
    Term lifted;
    lifted.weight = t.weight;
    lifted.pv = lift(comp, t.pv);
    out.push_back(lifted);
  }
}

void rn_rec(Matrix m, Eigen::Index n, const ToleranceConfig& tol,
            DecompositionTrace* trace, double t0, int fuel,
            std::vector<Term>& out) {
  if (fuel <= 0)
    fail(Errc::numerical_failure, "decomposition did not terminate");

  m = 0.5 * (m + m.adjoint());
  const double clamped = clamp_psd(m, clamp_budget(m, t0), "low-rank remainder");
  if (m.trace().real() <= 1e-12 * t0) return;

  const RankSplit split = rank_kernel_range(m, tol);
  if (split.rank == 0) return;

  if (n == 1) {
    log_step(trace, TraceStep::Kind::base_case, split.rank, n, clamped);
    const HermitianEig eig = eig_hermitian(m);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      const double w = eig.values(j);
      if (w <= 1e-12 * t0) continue;
      Term t;
      t.weight = w;
      t.pv.e = Eigen::Vector2cd(phase_fix(eig.vectors.col(j)));
      t.pv.f = Vector::Ones(1);
      out.push_back(t);
    }
    return;
  }

  if (split.rank > n)
    fail(Errc::rank_out_of_scope,
         "rank " + std::to_string(split.rank) + " exceeds the B dimension " +
             std::to_string(n));

  if (split.rank == 1) {
    log_step(trace, TraceStep::Kind::rank_one, 1, n, clamped);
    const HermitianEig eig = eig_hermitian(m);
    const Eigen::Index last = eig.values.size() - 1;
    auto p = as_product(eig.vectors.col(last), n, 1e-6);
    if (!p)
      fail(Errc::numerical_failure, "rank-one remainder is not a product");
    Term t;
    t.weight = eig.values(last);
    t.pv = *p;
    out.push_back(t);
    return;
  }

  const DensityOperator d = DensityOperator::create(n, m);
  log_step(trace, TraceStep::Kind::kernel_reduce, split.rank, n, clamped);
  const ProductSearchResult found = find_product_in_subspace(split.kernel, tol);
  const SupportReduction red = reduce_support(d, found.pv, tol);
  if (red.removed) out.push_back(*red.removed);
  log_step(trace, TraceStep::Kind::compress,
           split.rank - (red.removed ? 1 : 0), n, 0.0);
  const BCompression comp = compress_b(red.reduced, red.direction, tol);
  std::vector<Term> inner;
  rn_rec(comp.reduced.mat, n - 1, tol, trace, t0, fuel - 1, inner);
  for (const Term& t : inner) {
    Term lifted;
    lifted.weight = t.weight;
    lifted.pv = lift(comp, t.pv);
    out.push_back(lifted);
  }
}

Matrix a_side_unitary(const Eigen::Matrix2cd& u, Eigen::Index n) {
  Matrix big = Matrix::Zero(2 * n, 2 * n);
  const Matrix id = Matrix::Identity(n, n);
  big.topLeftCorner(n, n) = u(0, 0) * id;
  big.topRightCorner(n, n) = u(0, 1) * id;
  big.bottomLeftCorner(n, n) = u(1, 0) * id;
  big.bottomRightCorner(n, n) = u(1, 1) * id;
  return big;
}

}  // namespace

SeparableDecomposition decompose_pt_invariant(const DensityOperator& rho,
                                              const ToleranceConfig& tol,
                                              DecompositionTrace* trace) {
  require_psd(rho, tol);
  const double t0 = rho.trace();
  SeparableDecomposition dec;
  dec.dim_b = rho.dim_b;
  if (t0 <= 1e-300) return dec;
  const double defect = pt_defect(rho);
  if (defect > tol.recon_tol * t0)
    fail(Errc::not_pt_invariant,
         "pt defect " + std::to_string(defect) + " exceeds " +
             std::to_string(tol.recon_tol * t0));
  const int fuel =
      static_cast<int>((rho.dim_b + 3) * (rho.dim_b + 3));
  pt_rec(rho.mat, rho.dim_b, tol, trace, t0, fuel, dec.terms);
  return dec;
}

SeparableDecomposition decompose_rank_n(const DensityOperator& rho,
                                        const ToleranceConfig& tol,
                                        DecompositionTrace* trace) {
  require_psd(rho, tol);
  require_psd(partial_transpose_a(rho), tol);
  const double t0 = rho.trace();
  SeparableDecomposition dec;
  dec.dim_b = rho.dim_b;
  if (t0 <= 1e-300) return dec;
  const int fuel =
      static_cast<int>((rho.dim_b + 3) * (rho.dim_b + 3));
  rn_rec(rho.mat, rho.dim_b, tol, trace, t0, fuel, dec.terms);
  return dec;
}

Eigen::Matrix2cd takagi_unitary(const Eigen::Matrix2cd& u,
                                const ToleranceConfig&) {
  if ((u * u.adjoint() - Eigen::Matrix2cd::Identity()).norm() > 1e-10)
    fail(Errc::not_symmetric_unitary, "input is not unitary");
  if ((u - u.transpose()).norm() > 1e-10)
    fail(Errc::not_symmetric_unitary, "input is not symmetric");

  // One real Givens rotation diagonalizes a symmetric unitary: writing
  // U = X + iY with X, Y real symmetric and commuting, the rotation angle
  // satisfies tan(2 phi) = 2 u01 / (u00 - u11), whose ratio is real by the
  // commutation relation. atan2 handles the u00 = u11 limit (phi = pi/4).
  const Cplx a = u(0, 0), b = u(0, 1), dd = u(1, 1);
  double phi = 0.0;
  if (std::abs(b) > 1e-15) {
    const Cplx num = 2.0 * b * std::conj(a - dd);
    phi = 0.5 * std::atan2(num.real(), std::norm(a - dd));
  }
  Eigen::Matrix2d o;
  o << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  const Eigen::Matrix2cd diag = o.transpose().cast<Cplx>() * u * o.cast<Cplx>();
  Eigen::Matrix2cd w = Eigen::Matrix2cd::Zero();
  const Cplx h0 = std::exp(Cplx(0.0, 0.5 * std::arg(diag(0, 0))));
  const Cplx h1 = std::exp(Cplx(0.0, 0.5 * std::arg(diag(1, 1))));
  w.col(0) = o.col(0).cast<Cplx>() * h0;
  w.col(1) = o.col(1).cast<Cplx>() * h1;
  if ((w * w.transpose() - u).norm() > 1e-10)
    fail(Errc::not_symmetric_unitary, "takagi factor verification failed");
  return w;
}

SeparableDecomposition decompose_twisted(const DensityOperator& rho,
                                         const Eigen::Matrix2cd& u,
                                         const ToleranceConfig& tol,
                                         DecompositionTrace* trace) {
  const double t0 = rho.trace();
  const Matrix big_u = a_side_unitary(u, rho.dim_b);
  const DensityOperator rho_ta = partial_transpose_a(rho);
  const double defect =
      operator_norm(rho.mat - big_u * rho_ta.mat * big_u.adjoint());
  if (defect > tol.recon_tol * std::max(t0, 1e-300))
    fail(Errc::twisted_invariance_failed,
         "twist defect " + std::to_string(defect) + " exceeds " +
             std::to_string(tol.recon_tol * std::max(t0, 1e-300)));

  const Eigen::Matrix2cd w = takagi_unitary(u, tol);
  const Matrix big_w = a_side_unitary(w, rho.dim_b);
  Matrix rotated = big_w.adjoint() * rho.mat * big_w;
  rotated = 0.5 * (rotated + rotated.adjoint());
  const DensityOperator rho_pt = DensityOperator::create(rho.dim_b, rotated);

  SeparableDecomposition inner;
  try {
    inner = decompose_pt_invariant(rho_pt, tol, trace);
  } catch (const Error& err) {
    if (err.code() == Errc::not_pt_invariant)
      fail(Errc::twisted_invariance_failed,
           "rotated state is not pt-invariant: " + std::string(err.what()));
    throw;
  }

  SeparableDecomposition out;
  out.dim_b = rho.dim_b;
  out.terms.reserve(inner.terms.size());
  for (const Term& t : inner.terms) {
    Term mapped = t;
    mapped.pv.e = Eigen::Vector2cd(phase_fix(Vector(w * t.pv.e)));
    out.terms.push_back(mapped);
  }
  return out;
}

}  // namespace sep2n
