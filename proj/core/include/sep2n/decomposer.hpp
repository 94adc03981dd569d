#pragma once

#include <vector>

#include "sep2n/bipartite.hpp"

namespace sep2n {

/// Step log for the recursive decomposers (observability only; the
/// decomposition result does not depend on it).
struct TraceStep {
  enum class Kind {
    range_peel,      // one PPT-preserving subtraction in the range branch
    kernel_reduce,   // one kernel-driven subtraction (term may be absent)
    compress,        // dropped one B-side direction
    base_case,       // spectral split of a 2x1 remainder
    rank_one,        // pure product shortcut
  };
  Kind kind;
  Eigen::Index rank_before = 0;
  Eigen::Index dim_b_before = 0;
  double clamp_magnitude = 0.0;  // largest negative eigenvalue zeroed, if any
};

struct DecompositionTrace {
  std::vector<TraceStep> steps;
};

/// Constructive separable decomposition of a PT-invariant PPT state
/// (pt_defect <= recon_tol * tr; not_pt_invariant otherwise). All A-side
/// factors of the result are real up to the fixed phase convention. Term
/// count is bounded by N(N+3)/2 + 2.
SeparableDecomposition decompose_pt_invariant(const DensityOperator& rho,
                                              const ToleranceConfig& tol = {},
                                              DecompositionTrace* trace = nullptr);

/// Constructive decomposition of a PPT state with rank(rho) <= N. Generic
/// branch: a kernel product vector exists and one subtraction reduces both
/// rank and B-dimension. Degenerate branch (support already inside
/// C^2 (x) C^{N-1}): compress and recurse. States outside the theorem's
/// scope (rank > N after a degenerate compression) throw rank_out_of_scope.
SeparableDecomposition decompose_rank_n(const DensityOperator& rho,
                                        const ToleranceConfig& tol = {},
                                        DecompositionTrace* trace = nullptr);

/// Takagi factor of a symmetric unitary: W unitary with W W^T = U
/// (verified to 1e-10; not_symmetric_unitary on bad input or failure).
/// Built from the simultaneous real-orthogonal diagonalization of Re U and
/// Im U with eigenvector phases split evenly.
Eigen::Matrix2cd takagi_unitary(const Eigen::Matrix2cd& u,
                                const ToleranceConfig& tol = {});

/// Decomposition of a state satisfying the twisted invariance
/// rho = (U (x) 1) rho^TA (U^dag (x) 1) for a symmetric unitary U:
/// rotates by the Takagi factor (W^dag (x) 1), which lands exactly on the
/// PT-invariant case, then maps the terms back by e -> W e. Throws
/// twisted_invariance_failed if the precondition does not hold within
/// recon_tol * tr.
SeparableDecomposition decompose_twisted(const DensityOperator& rho,
                                         const Eigen::Matrix2cd& u,
                                         const ToleranceConfig& tol = {},
                                         DecompositionTrace* trace = nullptr);

}  // namespace sep2n
