#include "sep2n/hermitian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace sep2n {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_square: return "not_square";
    case Errc::not_hermitian: return "not_hermitian";
    case Errc::not_psd: return "not_psd";
    case Errc::not_finite: return "not_finite";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::zero_vector: return "zero_vector";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::subspace_too_small: return "subspace_too_small";
    case Errc::numerical_failure: return "numerical_failure";
    case Errc::not_in_range: return "not_in_range";
    case Errc::not_in_kernel: return "not_in_kernel";
    case Errc::zero_denominator: return "zero_denominator";
    case Errc::non_positive_overlap: return "non_positive_overlap";
    case Errc::structure_violation: return "structure_violation";
    case Errc::support_not_reduced: return "support_not_reduced";
    case Errc::not_pt_invariant: return "not_pt_invariant";
    case Errc::realization_failed: return "realization_failed";
    case Errc::rank_out_of_scope: return "rank_out_of_scope";
    case Errc::not_symmetric_unitary: return "not_symmetric_unitary";
    case Errc::twisted_invariance_failed: return "twisted_invariance_failed";
    case Errc::degenerate_quadratic: return "degenerate_quadratic";
    case Errc::inconsistent_shared_factor: return "inconsistent_shared_factor";
    case Errc::neither_case_matches: return "neither_case_matches";
    case Errc::parse_error: return "parse_error";
  }
  return "unknown";
}

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

void require_finite(const Matrix& m) {
  if (!m.allFinite()) fail(Errc::not_finite, "matrix contains NaN or inf");
}

Matrix require_hermitian(const Matrix& m) {
  if (m.rows() != m.cols())
    fail(Errc::not_square, "expected a square matrix, got " +
                               std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()));
  require_finite(m);
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianDefectLimit)
    fail(Errc::not_hermitian,
         "Hermiticity defect " + std::to_string(defect) + " exceeds 1e-12");
  return 0.5 * (m + m.adjoint().eval());
}

HermitianEig eig_hermitian(const Matrix& m) {
  const Matrix h = require_hermitian(m);
  if (h.rows() == 0) return {Eigen::VectorXd(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    fail(Errc::numerical_failure, "Hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  require_finite(m);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

// Shared spectral-function core: applies fn to each eigenvalue after the
// rank/positivity policy (negatives within psd_tol and magnitudes under the
// relative cutoff become exact zeros; deeper negatives reject).
Matrix psd_spectral_map(const Matrix& m, const ToleranceConfig& tol,
                        double (*fn)(double), const char* what) {
  const HermitianEig eig = eig_hermitian(m);
  const Eigen::Index n = eig.values.size();
  if (n == 0) return Matrix(0, 0);
  const double max_abs = eig.values.cwiseAbs().maxCoeff();
  const double min_val = eig.values.minCoeff();
  if (min_val < -tol.psd_tol && std::abs(min_val) > tol.rank_tol * max_abs)
    fail(Errc::not_psd, std::string(what) + ": eigenvalue " +
                            std::to_string(min_val) + " below -psd_tol");
  Eigen::VectorXd mapped(n);
  const double cutoff = tol.rank_tol * max_abs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = eig.values(i);
    mapped(i) = (v <= cutoff) ? 0.0 : fn(v);
  }
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

double inv_fn(double x) { return 1.0 / x; }
double sqrt_fn(double x) { return std::sqrt(x); }
double inv_sqrt_fn(double x) { return 1.0 / std::sqrt(x); }

}  // namespace

Matrix pseudo_inverse(const Matrix& m, const ToleranceConfig& tol) {
  return psd_spectral_map(m, tol, inv_fn, "pseudo_inverse");
}

Matrix sqrt_psd(const Matrix& m, const ToleranceConfig& tol) {
  return psd_spectral_map(m, tol, sqrt_fn, "sqrt_psd");
}

Matrix pseudo_inverse_sqrt(const Matrix& m, const ToleranceConfig& tol) {
  return psd_spectral_map(m, tol, inv_sqrt_fn, "pseudo_inverse_sqrt");
}

RankSplit rank_kernel_range(const Matrix& m, const ToleranceConfig& tol) {
  const HermitianEig eig = eig_hermitian(m);
  const Eigen::Index n = eig.values.size();
  RankSplit out;
  out.kernel.ambient = n;
  out.range.ambient = n;
  if (n == 0) return out;
  const double max_abs = eig.values.cwiseAbs().maxCoeff();
  const double cutoff = tol.rank_tol * max_abs;
  std::vector<Eigen::Index> kernel_idx, range_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(eig.values(i)) > cutoff && max_abs > 0.0)
      range_idx.push_back(i);
    else
      kernel_idx.push_back(i);
  }
  out.rank = static_cast<Eigen::Index>(range_idx.size());
  out.kernel.basis.resize(n, static_cast<Eigen::Index>(kernel_idx.size()));
  for (std::size_t j = 0; j < kernel_idx.size(); ++j)
    out.kernel.basis.col(static_cast<Eigen::Index>(j)) =
        eig.vectors.col(kernel_idx[j]);
  out.range.basis.resize(n, out.rank);
  for (std::size_t j = 0; j < range_idx.size(); ++j)
    out.range.basis.col(static_cast<Eigen::Index>(j)) =
        eig.vectors.col(range_idx[j]);
  return out;
}

double membership_residual(const Subspace& s, const Vector& v) {
  if (v.size() != s.ambient)
    fail(Errc::dimension_mismatch, "vector/ambient dimension mismatch");
  const double norm = v.norm();
  if (norm == 0.0) fail(Errc::zero_vector, "membership of the zero vector");
  if (s.dim() == 0) return 1.0;
  const Vector proj = s.basis * (s.basis.adjoint() * v);
  return (v - proj).norm() / norm;
}

Subspace orthogonal_complement(const Subspace& s) {
  Subspace out;
  out.ambient = s.ambient;
  if (s.dim() == 0) {
    out.basis = Matrix::Identity(s.ambient, s.ambient);
    return out;
  }
  if (s.dim() >= s.ambient) {
    out.basis = Matrix(s.ambient, 0);
    return out;
  }
  Eigen::HouseholderQR<Matrix> qr(s.basis);
  const Matrix q = qr.householderQ() * Matrix::Identity(s.ambient, s.ambient);
  out.basis = q.rightCols(s.ambient - s.dim());
  return out;
}

Subspace subspace_from_columns(const Matrix& columns,
                               const ToleranceConfig& tol) {
  Subspace out;
  out.ambient = columns.rows();
  if (columns.cols() == 0) {
    out.basis = Matrix(columns.rows(), 0);
    return out;
  }
  require_finite(columns);
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? tol.rank_tol * sv(0) : 0.0;
  Eigen::Index keep = 0;
  while (keep < sv.size() && sv(keep) > cutoff && sv(keep) > 0.0) ++keep;
  out.basis = svd.matrixU().leftCols(keep);
  return out;
}

Vector phase_fix(const Vector& v) {
  const double max_abs = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (max_abs == 0.0) return v;
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= max_abs - 1e-12 * max_abs) {
      pick = i;
      break;
    }
  }
  const Cplx z = v(pick);
  return v * (std::conj(z) / std::abs(z));
}

}  // namespace sep2n
