#include "sep2n/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sep2n/decomposer.hpp"

namespace sep2n {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Eigenvalues of the B-block smaller than this (relative) do not contribute
// an envelope term.
double envelope_cutoff(const BDecomposition& bd, const ToleranceConfig& tol) {
  double mx = 0.0;
  for (Eigen::Index i = 0; i < bd.lambdas.size(); ++i)
    mx = std::max(mx, std::abs(bd.lambdas(i)));
  return tol.rank_tol * mx;
}

}  // namespace

Eigen::Matrix2cd antisymmetric_unit() {
  Eigen::Matrix2cd s;
  s << Cplx(0.0, 0.0), Cplx(0.0, 1.0), Cplx(0.0, -1.0), Cplx(0.0, 0.0);
  return s;
}

PTSplit pt_split(const DensityOperator& rho) {
  const DensityOperator ta = partial_transpose_a(rho);
  const Eigen::Index n = rho.dim_b;
  Matrix sym = 0.5 * (rho.mat + ta.mat);
  sym = 0.5 * (sym + sym.adjoint());
  // The antisymmetric half has zero diagonal blocks and off-diagonal blocks
  // +-(i b); read b off the top-right one.
  const Matrix delta = 0.5 * (rho.mat - ta.mat);
  Matrix b = Cplx(0.0, -1.0) * delta.topRightCorner(n, n);
  b = 0.5 * (b + b.adjoint());
  PTSplit out{DensityOperator::create(n, sym), b};
  return out;
}

BDecomposition decompose_b(const Matrix& b, const ToleranceConfig&) {
  const Matrix bh = require_hermitian(b);
  const HermitianEig eig = eig_hermitian(bh);
  BDecomposition out;
  out.lambdas = eig.values;
  out.vs = eig.vectors;
  return out;
}

DensityOperator build_envelope(const BDecomposition& bd,
                               const Eigen::VectorXd& a, Eigen::Index dim_b,
                               const ToleranceConfig& tol) {
  if (a.size() != bd.lambdas.size())
    fail(Errc::dimension_mismatch, "weight vector size mismatch");
  if (bd.vs.rows() != dim_b)
    fail(Errc::dimension_mismatch, "B eigenvector size mismatch");
  const double cutoff = envelope_cutoff(bd, tol);
  Matrix c = Matrix::Zero(2 * dim_b, 2 * dim_b);
  for (Eigen::Index i = 0; i < bd.lambdas.size(); ++i) {
    const double lam = std::abs(bd.lambdas(i));
    if (lam <= cutoff) continue;
    if (!(a(i) > 0.0))
      fail(Errc::invalid_argument, "envelope weights must be positive");
    const Matrix proj = bd.vs.col(i) * bd.vs.col(i).adjoint();
    c.topLeftCorner(dim_b, dim_b) += lam * a(i) * a(i) * proj;
    c.bottomRightCorner(dim_b, dim_b) += lam / (a(i) * a(i)) * proj;
  }
  c = 0.5 * (c + c.adjoint());
  return DensityOperator::create(dim_b, c);
}

DominanceReport dominance_check(const Matrix& x, const Matrix& y,
                                const ToleranceConfig& tol) {
  DominanceReport out;
  const Matrix xh = require_hermitian(x);
  const Matrix yh = require_hermitian(y);
  const double yscale = std::max(operator_norm(yh), 1e-300);

  const RankSplit split = rank_kernel_range(xh, tol);
  const Matrix p = split.range.basis * split.range.basis.adjoint();
  const Matrix leak = yh - p * yh * p;
  out.support_ok = operator_norm(leak) <= 1e-8 * yscale;

  const Matrix xph = pseudo_inverse_sqrt(xh, tol);
  Matrix weighted = xph * yh * xph;
  weighted = 0.5 * (weighted + weighted.adjoint());
  out.norm_value = operator_norm(weighted);
  out.ok = out.support_ok && out.norm_value <= 1.0 + tol.psd_tol;
  return out;
}

CertificateReport certify(const DensityOperator& rho, AStrategy strategy,
                          const ToleranceConfig& tol) {
  require_psd(rho, tol);
  CertificateReport rep;
  rep.method = strategy == AStrategy::unit ? CertMethod::envelope_default
                                           : CertMethod::envelope_optimized;

  const PTSplit split = pt_split(rho);

  // No envelope can be dominated by an indefinite PT-invariant part, so that
  // case is a structural "inconclusive", not an input error.
  {
    const HermitianEig seig = eig_hermitian(split.symmetric.mat);
    const double mx = seig.values.size() ? seig.values.cwiseAbs().maxCoeff() : 0.0;
    const double mn = seig.values.size() ? seig.values.minCoeff() : 0.0;
    if (mn < -tol.psd_tol && std::abs(mn) > tol.rank_tol * mx) {
      rep.norm_value = kInf;
      return rep;
    }
  }

  const BDecomposition bd = decompose_b(split.b, tol);
  Eigen::VectorXd a = Eigen::VectorXd::Ones(bd.lambdas.size());
  if (strategy == AStrategy::optimized)
    a = optimize_envelope(split.symmetric, bd, tol);

  const DensityOperator envelope = build_envelope(bd, a, rho.dim_b, tol);
  const DominanceReport dom =
      dominance_check(split.symmetric.mat, envelope.mat, tol);
  rep.norm_value = dom.norm_value;
  rep.support_ok = dom.support_ok;
  if (!dom.ok) return rep;

  // Dominance grants rho_s - C(a) >= 0; decompose the PT-invariant remainder
  // and add one explicitly separable term per retained B eigenvalue.
  try {
    Matrix remainder = split.symmetric.mat - envelope.mat;
    remainder = 0.5 * (remainder + remainder.adjoint());
    {
      const HermitianEig eig = eig_hermitian(remainder);
      const double mn = eig.values.minCoeff();
      const double budget =
          std::max(1e-6 * operator_norm(remainder), 1e-10 * rho.trace());
      if (mn < -budget)
        fail(Errc::not_psd, "dominated remainder is not positive");
      if (mn < 0.0) {
        const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
        remainder = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
        remainder = 0.5 * (remainder + remainder.adjoint());
      }
    }
    SeparableDecomposition dec = decompose_pt_invariant(
        DensityOperator::create(rho.dim_b, remainder), tol);

    const double cutoff = envelope_cutoff(bd, tol);
    for (Eigen::Index i = 0; i < bd.lambdas.size(); ++i) {
      const double lam = bd.lambdas(i);
      if (std::abs(lam) <= cutoff) continue;
      const double sign = lam >= 0.0 ? 1.0 : -1.0;
      Eigen::Vector2cd w;
      w << Cplx(a(i), 0.0), Cplx(0.0, -sign / a(i));
      Term t;
      t.weight = std::abs(lam) * w.squaredNorm();
      t.pv.e = w / w.norm();
      t.pv.f = bd.vs.col(i);
      dec.terms.push_back(t);
    }

    const VerifyReport check = verify_decomposition(rho, dec, tol);
    if (check.ok) {
      rep.verdict = CertVerdict::certified_separable;
      rep.decomposition = std::move(dec);
    }
  } catch (const Error&) {
    // Sufficient condition held numerically but the construction did not
    // verify; stay inconclusive rather than claim separability.
  }
  return rep;
}

CertificateReport quick_certify(const DensityOperator& rho,
                                const ToleranceConfig& tol) {
  require_psd(rho, tol);
  CertificateReport rep;
  rep.method = CertMethod::quick_norm_product;
  rep.norm_value = kInf;

  const DensityOperator ta = partial_transpose_a(rho);
  Matrix sum = rho.mat + ta.mat;
  sum = 0.5 * (sum + sum.adjoint());
  const HermitianEig eig = eig_hermitian(sum);
  const double mx = eig.values.cwiseAbs().maxCoeff();
  const double mn = eig.values.minCoeff();
  if (!(mn > tol.rank_tol * mx)) return rep;  // not of full range
  rep.support_ok = true;

  const double diff_norm = operator_norm(rho.mat - ta.mat);
  rep.norm_value = diff_norm / mn;  // ||sum^{-1}|| = 1/mn for PSD sum
  if (rep.norm_value > 1.0 + tol.psd_tol) return rep;

  const CertificateReport inner = certify(rho, AStrategy::unit, tol);
  rep.verdict = inner.verdict;
  rep.decomposition = inner.decomposition;
  return rep;
}

Eigen::VectorXd optimize_envelope(const DensityOperator& rho_s,
                                  const BDecomposition& bd,
                                  const ToleranceConfig& tol) {
  const Eigen::Index m = bd.lambdas.size();
  Eigen::VectorXd best_a = Eigen::VectorXd::Ones(m);
  if (m == 0) return best_a;
  const double cutoff = envelope_cutoff(bd, tol);

  const auto objective = [&](const Eigen::VectorXd& a) {
    const DensityOperator env = build_envelope(bd, a, rho_s.dim_b, tol);
    return dominance_check(rho_s.mat, env.mat, tol).norm_value;
  };

  double best = objective(best_a);
  Eigen::VectorXd a = best_a;

  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int sweep = 0; sweep < 5 && best > 0.99; ++sweep) {
    bool improved = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::abs(bd.lambdas(i)) <= cutoff) continue;
      // Golden-section on log10 a_i within [-3, 3], <= 50 evaluations.
      double lo = -3.0, hi = 3.0;
      double x1 = hi - golden * (hi - lo);
      double x2 = lo + golden * (hi - lo);
      const auto eval = [&](double x) {
        Eigen::VectorXd probe = a;
        probe(i) = std::pow(10.0, x);
        return objective(probe);
      };
      double f1 = eval(x1);
      double f2 = eval(x2);
      for (int it = 0; it < 44; ++it) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - golden * (hi - lo);
          f1 = eval(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + golden * (hi - lo);
          f2 = eval(x2);
        }
      }
      const double xbest = f1 <= f2 ? x1 : x2;
      const double fbest = std::min(f1, f2);
      if (fbest < best - 1e-12) {
        a(i) = std::pow(10.0, xbest);
        best = fbest;
        best_a = a;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return best_a;
}

}  // namespace sep2n
