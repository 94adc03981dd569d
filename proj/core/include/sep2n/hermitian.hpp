#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sep2n/errors.hpp"
#include "sep2n/tolerance.hpp"

namespace sep2n {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Eigendecomposition of a Hermitian matrix: values ascending, vectors the
/// matching orthonormal columns.
struct HermitianEig {
  Eigen::VectorXd values;
  Matrix vectors;
};

/// A subspace of C^ambient represented by an orthonormal column basis.
/// dim() == 0 (empty basis) is a valid subspace.
struct Subspace {
  Eigen::Index ambient = 0;
  Matrix basis;  // ambient x dim, orthonormal columns

  Eigen::Index dim() const { return basis.cols(); }
};

/// Rank decision plus the two complementary eigenspaces that produced it.
struct RankSplit {
  Eigen::Index rank = 0;
  Subspace kernel;
  Subspace range;
};

/// max_ij |M(i,j) - conj(M(j,i))|; 0 for empty matrices.
double hermiticity_defect(const Matrix& m);

/// Throws Errc::not_finite if any entry is NaN/inf.
void require_finite(const Matrix& m);

/// Validates squareness, finiteness and Hermiticity (defect <= 1e-12), then
/// returns the exactly Hermitian average (M + M^dag)/2.
Matrix require_hermitian(const Matrix& m);

/// Full eigendecomposition of a Hermitian matrix (values ascending).
/// Throws not_square / not_finite / not_hermitian.
HermitianEig eig_hermitian(const Matrix& m);

/// Largest singular value. Defined for any (possibly rectangular) matrix;
/// 0 for empty ones.
double operator_norm(const Matrix& m);

/// Moore-Penrose inverse of a Hermitian PSD matrix via its eigensystem.
/// Eigenvalues below the relative rank cutoff (or negative within psd_tol)
/// are treated as exact zeros; a negativity below -psd_tol throws not_psd.
Matrix pseudo_inverse(const Matrix& m, const ToleranceConfig& tol = {});

/// Unique PSD square root, same eigenvalue policy as pseudo_inverse.
Matrix sqrt_psd(const Matrix& m, const ToleranceConfig& tol = {});

/// (pseudo_inverse . sqrt) in one eigendecomposition: X^{+1/2}.
Matrix pseudo_inverse_sqrt(const Matrix& m, const ToleranceConfig& tol = {});

/// Rank with respect to the relative cutoff |lambda| > rank_tol * max|lambda|,
/// plus orthonormal bases of kernel and range. Works for any Hermitian matrix
/// (indefinite included: the rank counts both signs).
RankSplit rank_kernel_range(const Matrix& m, const ToleranceConfig& tol = {});

/// ||v - P_S v|| / ||v|| where P_S projects onto the subspace. Throws
/// zero_vector for v = 0, dimension_mismatch if ambients differ.
double membership_residual(const Subspace& s, const Vector& v);

/// Orthonormal basis of the orthogonal complement (deterministic, via
/// Householder QR of the basis).
Subspace orthogonal_complement(const Subspace& s);

/// Orthonormalizes arbitrary spanning columns into a Subspace, dropping
/// near-dependent directions at the relative rank cutoff.
Subspace subspace_from_columns(const Matrix& columns,
                               const ToleranceConfig& tol = {});

/// Multiplies v by the unit phase that makes its largest-magnitude component
/// real and positive. Deterministic tie-break: lowest index among components
/// within 1e-12 of the maximum magnitude. Zero vectors are returned as-is.
Vector phase_fix(const Vector& v);

}  // namespace sep2n
