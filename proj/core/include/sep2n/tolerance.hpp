#pragma once

namespace sep2n {

/// Shared numerical policy. Every threshold used by the library is one of
/// these four knobs; functions take a ToleranceConfig so callers can tighten
/// or loosen the whole stack coherently.
struct ToleranceConfig {
  /// Relative eigenvalue cutoff for rank / kernel / range decisions:
  /// an eigenvalue counts as zero when |lambda| <= rank_tol * max|lambda|.
  double rank_tol = 1e-9;

  /// Positivity slack: eigenvalues in [-psd_tol, 0] are treated as exact
  /// zeros; anything below -psd_tol is a genuine negativity.
  double psd_tol = 1e-9;

  /// Reconstruction budget for decompositions, relative to the trace:
  /// ||rho - sum_i w_i P_i|| <= recon_tol * tr(rho).
  double recon_tol = 1e-8;

  /// Colinearity / Schmidt-ratio threshold: a bipartite vector counts as a
  /// product when its second Schmidt coefficient is <= colinear_tol times
  /// the first.
  double colinear_tol = 1e-8;
};

/// Hermiticity is not configurable: inputs whose defect max|H - H^dag|
/// exceeds this are rejected outright rather than silently symmetrized.
inline constexpr double kHermitianDefectLimit = 1e-12;

}  // namespace sep2n
