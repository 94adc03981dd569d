#pragma once

#include <optional>

#include "sep2n/bipartite.hpp"

namespace sep2n {

enum class TwoQubitStatus { separable, entangled, ambiguous };

struct TwoQubitVerdict {
  TwoQubitStatus status = TwoQubitStatus::ambiguous;
  double min_pt_eigenvalue = 0.0;
  std::optional<SeparableDecomposition> decomposition;  // present iff separable
};

/// Constructive two-qubit separability decision (Peres criterion made
/// effective): min eig(rho^TA) < -psd_tol -> entangled; otherwise a
/// decomposition is constructed. States whose min PT eigenvalue sits inside
/// [-psd_tol, psd_tol] and defeat the construction return `ambiguous`;
/// outside that band a construction failure raises numerical_failure
/// instead of guessing.
TwoQubitVerdict decompose_2x2(const DensityOperator& rho,
                              const ToleranceConfig& tol = {});

/// Joint normal form of the two kernel vectors in the irreducible core case
/// dim K(rho) = dim K(rho^TA) = 1 with neither vector a product:
///   psi1 = |e,f> - |perp(e),g>            (exactly)
///   s * psi2 = |e*,h> - |perp(e)*,f>      (same f, within tolerance)
/// e is unit with e = (alpha|0> + |1>)/|.| for a root alpha of the 2x2
/// determinant condition (linear pencil in alpha; both roots are tried and
/// the better-conditioned one wins). Throws degenerate_quadratic if no root
/// yields a usable system, inconsistent_shared_factor if the shared factor
/// f cannot be matched between the two expansions.
struct KernelPairSplit {
  Eigen::Vector2cd e;
  Vector f, g, h;  // dim-2 B-side vectors
  Cplx alpha;
  double residual = 0.0;  // worst of the defining residuals
};

KernelPairSplit split_kernel_pair(const Vector& psi1, const Vector& psi2,
                                  const ToleranceConfig& tol = {});

/// Resolution of the core case: either h = k^2 g (k real > 0) and a product
/// vector a = e + k perp(e), b = perp(f - k g) lies in both ranges (path
/// `subtract`), or the B-side Bloch vectors of <f|rho|f> and <g|rho|g> span
/// a plane and rotating its normal onto the transposition-odd axis makes
/// rho PT-invariant (path `rotate`). neither_case_matches if both fail
/// their verification.
struct CoreResolution {
  enum class Path { subtract, rotate } path = Path::subtract;
  ProductVector pv;             // subtract path: in R(rho), conj in R(rho^TA)
  Eigen::Matrix2cd rotation;    // rotate path: U with (U x 1) rho (U x 1)^dag
                                // PT-invariant
};

CoreResolution resolve_core(const DensityOperator& rho,
                            const KernelPairSplit& split,
                            const ToleranceConfig& tol = {});

/// (x, y, z) with m = (tr(m)/2) I + x X + y Y + z Z for Hermitian 2x2 m,
/// where Y is antisymmetric_unit() (so y is the transposition-odd
/// coordinate) and X, Z the standard real symmetric units.
Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& m);

/// SU(2) lift of a 3D rotation taking the unit vector `from` to `to`
/// (rotation about from x to; deterministic positive-trace sign).
Eigen::Matrix2cd su2_rotation_between(const Eigen::Vector3d& from,
                                      const Eigen::Vector3d& to);

}  // namespace sep2n
