#pragma once

#include <cstdint>

#include "sep2n/bipartite.hpp"

namespace sep2n {

/// Deterministic 64-bit generator (SplitMix64: Steele/Lea/Flood finalizer
/// over a golden-ratio counter). Chosen over <random> engines because the
/// standard distributions are not bit-portable; the uniform and Gaussian
/// mappings below are spelled out so the stream for a given seed is
/// reproducible everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// [0, 1) with 53 random bits: next_u64() >> 11 times 2^-53.
  double uniform();

  /// Standard normal via Box-Muller on two uniforms (pairs cached).
  double normal();

  /// (normal + i normal) / sqrt(2): unit-variance complex Gaussian.
  Cplx cnormal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// rho = G G^dag / tr(G G^dag) for a 2N x rank complex Gaussian G
/// (the natural induced measure at that rank). 1 <= rank <= 2N.
DensityOperator random_density(Eigen::Index dim_b, Eigen::Index rank,
                               std::uint64_t seed);

struct SeparableSample {
  DensityOperator state;
  SeparableDecomposition decomposition;
};

/// Convex mixture of `terms` Haar-ish random product projectors with
/// uniform-renormalized weights; returns the state together with the
/// decomposition that built it.
SeparableSample random_separable(Eigen::Index dim_b, Eigen::Index terms,
                                 std::uint64_t seed);

/// Generic full-rank PT-invariant state: a random density matrix pushed onto
/// the intersection of the PSD cone and the PT-invariant subspace by
/// alternating projection (both convex; converges), then renormalized.
DensityOperator random_pt_invariant(Eigen::Index dim_b, std::uint64_t seed);

/// Rejection sampler: random full-rank densities until the partial transpose
/// is PSD (min eigenvalue >= -psd_tol with the default config). Bounded at
/// 100000 attempts, then numerical_failure.
DensityOperator random_ppt(Eigen::Index dim_b, std::uint64_t seed);

/// Rejection sampler for a verified-NPT state (min PT eigenvalue
/// < -psd_tol), same bound.
DensityOperator random_npt(Eigen::Index dim_b, std::uint64_t seed);

/// Two-qubit Werner family: p |psi-><psi-| + (1-p) I/4 with
/// psi- = (|0,1> - |1,0>)/sqrt(2). Min PT eigenvalue is (1 - 3p)/4.
/// Requires 0 <= p <= 1.
DensityOperator werner(double p);

/// Haar-distributed dim-dimensional subspace of C^ambient (QR of a complex
/// Gaussian; deterministic per seed).
Subspace random_subspace(Eigen::Index ambient, Eigen::Index dim,
                         std::uint64_t seed);

}  // namespace sep2n
