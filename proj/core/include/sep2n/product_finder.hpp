#pragma once

#include "sep2n/bipartite.hpp"
#include "sep2n/hermitian.hpp"

namespace sep2n {

/// Linear system encoding "(alpha |0> + |1>) (x) f lies in H" as
/// (alpha A + B) f = 0. Rows index an orthonormal basis {Psi_i} of H-perp:
/// A(i,k) = conj(<0,k|Psi_i>), B(i,k) = conj(<1,k|Psi_i>). Row
/// orthonormality gives A A^dag + B B^dag = I.
struct PencilSystem {
  Matrix a;  // (2N - M) x N
  Matrix b;  // (2N - M) x N
};

/// Builds the pencil for a subspace H of C^2 (x) C^N (ambient must be even;
/// dim H >= N required, throws subspace_too_small otherwise).
PencilSystem build_pencil(const Subspace& h);

struct ProductSearchResult {
  ProductVector pv;           // unit-norm factors
  double membership_residual; // || |e,f> - P_H |e,f> || on the unit vector
  double pencil_residual;     // ||(c0 A + c1 B) f|| with (c0,c1)=(alpha,1)/|.|
  Cplx alpha;                 // e = (alpha|0> + |1>)/norm; meaningless if
  bool alpha_infinite = false;// alpha_infinite (then e = |0>)
};

/// Finds a product vector in H (dim H >= N). dim H == N reduces to the
/// square pencil solved as a shifted standard eigenproblem; dim H > N fixes
/// alpha on the deterministic grid 0, 1, -1, 2, -2, ... and reads f off the
/// least-singular right vector. Candidates are polished by coordinate
/// descent on the pencil residual (exact per-factor minimizers via small
/// SVDs), deterministically. Throws numerical_failure if no candidate
/// reaches membership residual <= 1e-8.
ProductSearchResult find_product_in_subspace(const Subspace& h,
                                             const ToleranceConfig& tol = {});

/// Same search restricted to real A-side factors; requires dim H > N
/// strictly (throws subspace_too_small otherwise). The returned e has
/// imaginary parts <= 1e-12 after phase fixing.
ProductSearchResult find_real_e_product(const Subspace& h,
                                        const ToleranceConfig& tol = {});

}  // namespace sep2n
