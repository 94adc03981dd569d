#pragma once

#include <optional>
#include <vector>

#include "sep2n/hermitian.hpp"

namespace sep2n {

/// A Hermitian operator on C^2 (x) C^N, stored as a dense 2N x 2N matrix in
/// the basis |a,k> -> row a*N + k with a in {0,1}, k in 0..N-1. Construction
/// validates shape, finiteness, Hermiticity (defect <= 1e-12) and
/// tr >= -1e-12 (exhausted remainders may be exactly zero). Positivity is a
/// per-operation precondition, not a type invariant: partial transposition
/// legitimately produces indefinite operators of the same shape.
struct DensityOperator {
  Eigen::Index dim_b = 0;  // N
  Matrix mat;              // 2N x 2N
  bool unit_trace = false; // |tr - 1| <= 1e-12 at construction time

  static DensityOperator create(Eigen::Index dim_b, Matrix m);

  Eigen::Index dim_total() const { return 2 * dim_b; }
  double trace() const { return mat.trace().real(); }
};

/// Throws not_psd unless min eigenvalue >= -psd_tol (absolute).
void require_psd(const DensityOperator& rho, const ToleranceConfig& tol = {});

/// |e> (x) |f> with e on the 2-level side. Not normalized.
Vector tensor(const Eigen::Vector2cd& e, const Vector& f);

/// A pure product vector: both factors nonzero (not necessarily unit).
struct ProductVector {
  Eigen::Vector2cd e;
  Vector f;

  Vector joint() const { return tensor(e, f); }
};

/// One convex term w * |e,f><e,f| with unit-norm factors and w > 0.
struct Term {
  double weight = 0.0;
  ProductVector pv;
};

struct SeparableDecomposition {
  Eigen::Index dim_b = 0;
  std::vector<Term> terms;
};

/// Transposition of the 2-level factor only: blockwise, the (a,b) block of
/// the result is the (b,a) block of the input. An involution; preserves
/// Hermiticity, trace and Frobenius norm, but not positivity.
DensityOperator partial_transpose_a(const DensityOperator& rho);

/// Componentwise conjugate of a 2-level vector (the A-side conjugation that
/// pairs with partial_transpose_a).
Eigen::Vector2cd conj_a(const Eigen::Vector2cd& e);

/// The unit vector orthogonal to e with the fixed phase convention
/// (a, b) -> (-conj(b), conj(a)) / norm. perp(perp(e)) = -e.
Eigen::Vector2cd perp(const Eigen::Vector2cd& e);

/// <e1|_A rho |e2>_A: the N x N B-side operator with entries
/// sum_{a,b} conj(e1_a) e2_b rho[(a,k),(b,l)].
Matrix sandwich_a(const DensityOperator& rho, const Eigen::Vector2cd& e1,
                  const Eigen::Vector2cd& e2);

/// <f1|_B rho |f2>_B: the 2 x 2 A-side operator with entries
/// f1^dag rho_block(a,b) f2.
Eigen::Matrix2cd sandwich_b(const DensityOperator& rho, const Vector& f1,
                            const Vector& f2);

/// sum_i w_i |e_i,f_i><e_i,f_i| with the stored (non-normalized) factors
/// normalized first. Empty decompositions assemble to the zero operator.
DensityOperator assemble(const SeparableDecomposition& dec);

struct VerifyReport {
  bool ok = false;
  double recon_error = 0.0;  // operator norm of the difference
  double min_weight = 0.0;
};

/// Checks dimensional consistency, positive weights, and
/// ||rho - assemble(dec)|| <= recon_tol * tr(rho).
VerifyReport verify_decomposition(const DensityOperator& rho,
                                  const SeparableDecomposition& dec,
                                  const ToleranceConfig& tol = {});

/// operator_norm(rho - rho^TA): 0 exactly on the PT-invariant subspace.
double pt_defect(const DensityOperator& rho);

/// Result of removing one B-side direction from the support.
struct BCompression {
  DensityOperator reduced;  // on C^2 (x) C^{N-1}
  Matrix isometry;          // N x (N-1), orthonormal columns spanning f-perp
  Vector removed;           // the (normalized) direction f that was dropped
};

/// Compresses rho onto C^2 (x) f-perp. Precondition: rho (1 (x) |f>) = 0
/// within rank_tol * ||rho|| (throws support_not_reduced otherwise). The
/// isometry is built deterministically from the computational basis (dropping
/// the index where |f| is largest) and is real whenever f is real up to
/// global phase.
BCompression compress_b(const DensityOperator& rho, const Vector& f,
                        const ToleranceConfig& tol = {});

/// Maps a product vector on the compressed space back: f' -> V f'.
ProductVector lift(const BCompression& c, const ProductVector& pv);

/// Schmidt test: if v in C^2 (x) C^N is a product within ratio_tol
/// (second Schmidt coefficient <= ratio_tol * first), returns the factors
/// (unit norm, phase-fixed); otherwise nullopt.
std::optional<ProductVector> as_product(const Vector& v, Eigen::Index dim_b,
                                        double ratio_tol);

}  // namespace sep2n
