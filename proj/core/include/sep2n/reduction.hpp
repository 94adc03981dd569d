#pragma once

#include <optional>

#include "sep2n/bipartite.hpp"

namespace sep2n {

/// Which operator lost rank in a range peel.
enum class RankSide { rho, rho_ta, both };

struct SubtractionResult {
  DensityOperator reduced;
  double weight = 0.0;     // the subtracted lambda
  ProductVector pv;        // unit-norm factors actually subtracted
  RankSide dropped = RankSide::rho;
};

/// Subtracts the largest multiple of |e,f><e,f| that keeps rho PSD:
/// lambda = 1 / <e,f| rho^+ |e,f>. Preconditions: rho PSD and |e,f> in
/// R(rho) (membership residual <= 1e-7; not_in_range otherwise). The rank of
/// the result drops by one and rho^+|e,f> moves into its kernel.
SubtractionResult peel_range_product(const DensityOperator& rho,
                                     const ProductVector& pv,
                                     const ToleranceConfig& tol = {});

/// PPT-preserving variant: lambda = min of the two candidates computed from
/// rho with |e,f> and from rho^TA with |e*,f>; requires both memberships.
/// Both the result and its partial transpose stay PSD; `dropped` reports
/// which side lost rank (ties within 1e-9 relative report `both`).
SubtractionResult peel_range_product_ppt(const DensityOperator& rho,
                                         const ProductVector& pv,
                                         const ToleranceConfig& tol = {});

/// Outcome of probing the companion vector |perp(e), f> of a kernel product
/// vector |e,f> of a PPT operator: either it is annihilated too, or
/// rho |perp(e),f> = |perp(e), g> for the reported g != 0.
struct KernelCase {
  bool both_in_kernel = false;
  Vector g;  // empty when both_in_kernel
};

/// Classifies the kernel case. Preconditions: rho and rho^TA PSD,
/// rho|e,f> = 0 within rank_tol * ||rho|| (not_in_kernel otherwise). The
/// block structure rho|perp(e),f> = |perp(e), g> is verified; a nonzero
/// component along e beyond tolerance throws structure_violation.
KernelCase classify_kernel_product(const DensityOperator& rho,
                                   const ProductVector& pv,
                                   const ToleranceConfig& tol = {});

/// One dimension-reduction step driven by a kernel product vector.
struct SupportReduction {
  DensityOperator reduced;        // annihilates C^2 (x) direction
  std::optional<Term> removed;    // absent in the both_in_kernel case
  Vector direction;               // the B-side direction to compress away
};

/// Applies the kernel case: both_in_kernel -> no subtraction; otherwise
/// subtracts (1/<g|f>) |perp(e),g><perp(e),g| (the overlap <g|f> =
/// <perp(e),f| rho |perp(e),f> is real positive; non_positive_overlap /
/// zero_denominator otherwise). Either way the result annihilates
/// C^2 (x) f and is ready for compress_b.
SupportReduction reduce_support(const DensityOperator& rho,
                                const ProductVector& pv,
                                const ToleranceConfig& tol = {});

/// PT-invariant variant: replaces e by the real combination e + e*
/// (or (e - e*)/i when ||e + e*|| <= colinear_tol), verifies the realified
/// vector is still in the kernel (realization_failed if neither combination
/// is), then reduces as above. Keeps pt_defect at the noise floor.
SupportReduction reduce_support_pt(const DensityOperator& rho,
                                   const ProductVector& pv,
                                   const ToleranceConfig& tol = {});

}  // namespace sep2n
