// Shared test helpers: independent (loop-level) oracles for the linear
// algebra the library implements with Eigen expressions, plus seeded
// generators for structured problem instances. The oracles deliberately
// avoid the library's own code paths wherever the point of the test is to
// cross-check one.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "sep2n/sep2n.hpp"

namespace testsupport {

using sep2n::Cplx;
using sep2n::DensityOperator;
using sep2n::Matrix;
using sep2n::ProductVector;
using sep2n::SeparableDecomposition;
using sep2n::SplitMix64;
using sep2n::Term;
using sep2n::Vector;

// --- independent oracles ---------------------------------------------------

// Partial transposition on the 2-level factor by explicit index arithmetic
// in the row = a*N + k convention: out[(a,k),(b,l)] = in[(b,k),(a,l)].
inline Matrix naive_partial_transpose(const Matrix& m, Eigen::Index n) {
  Matrix out(2 * n, 2 * n);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index k = 0; k < n; ++k)
      for (Eigen::Index b = 0; b < 2; ++b)
        for (Eigen::Index l = 0; l < n; ++l)
          out(a * n + k, b * n + l) = m(b * n + k, a * n + l);
  return out;
}

// Kronecker stacking |e,f>(a*N+k) = e_a f_k by explicit loops.
inline Vector naive_tensor(const Eigen::Vector2cd& e, const Vector& f) {
  const Eigen::Index n = f.size();
  Vector v(2 * n);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index k = 0; k < n; ++k) v(a * n + k) = e(a) * f(k);
  return v;
}

// sum_i w_i |e_i,f_i><e_i,f_i| with normalized factors, by outer-product
// loops.
inline Matrix naive_assemble(const SeparableDecomposition& dec) {
  const Eigen::Index d = 2 * dec.dim_b;
  Matrix acc = Matrix::Zero(d, d);
  for (const Term& t : dec.terms) {
    Vector v = naive_tensor(t.pv.e, t.pv.f);
    v /= v.norm();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        acc(i, j) += t.weight * v(i) * std::conj(v(j));
  }
  return acc;
}

// <e1|rho|e2> on the A side by explicit index loops.
inline Matrix naive_sandwich_a(const DensityOperator& rho,
                               const Eigen::Vector2cd& e1,
                               const Eigen::Vector2cd& e2) {
  const Eigen::Index n = rho.dim_b;
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          out(k, l) +=
              std::conj(e1(a)) * e2(b) * rho.mat(a * n + k, b * n + l);
  return out;
}

// <f1|rho|f2> on the B side by explicit index loops.
inline Eigen::Matrix2cd naive_sandwich_b(const DensityOperator& rho,
                                         const Vector& f1, const Vector& f2) {
  const Eigen::Index n = rho.dim_b;
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          out(a, b) +=
              std::conj(f1(k)) * f2(l) * rho.mat(a * n + k, b * n + l);
  return out;
}

inline double min_eig(const Matrix& m) {
  return sep2n::eig_hermitian(m).values(0);
}

inline double min_pt_eig(const DensityOperator& rho) {
  return min_eig(sep2n::partial_transpose_a(rho).mat);
}

// --- fixed states ------------------------------------------------------

// (|0,0> + |1,1>)/sqrt(2) as a density operator on 2 x 2.
inline DensityOperator bell_state() {
  Vector v = Vector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = 1.0 / std::sqrt(2.0);
  return DensityOperator::create(2, v * v.adjoint());
}

// --- random draws --------------------------------------------------------

inline Eigen::Vector2cd random_qubit(SplitMix64& rng) {
  Eigen::Vector2cd e(rng.cnormal(), rng.cnormal());
  while (e.norm() < 1e-6) e << rng.cnormal(), rng.cnormal();
  return e / e.norm();
}

inline Eigen::Vector2cd random_real_qubit(SplitMix64& rng) {
  Eigen::Vector2cd e(rng.normal(), rng.normal());
  while (e.norm() < 1e-6) e << rng.normal(), rng.normal();
  return e / e.norm();
}

inline Vector random_vector(SplitMix64& rng, Eigen::Index n) {
  Vector f(n);
  do {
    for (Eigen::Index k = 0; k < n; ++k) f(k) = rng.cnormal();
  } while (f.norm() < 1e-6);
  return f / f.norm();
}

inline Matrix random_matrix(SplitMix64& rng, Eigen::Index r, Eigen::Index c) {
  Matrix g(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) g(i, j) = rng.cnormal();
  return g;
}

inline Matrix random_hermitian(SplitMix64& rng, Eigen::Index n) {
  const Matrix g = random_matrix(rng, n, n);
  return 0.5 * (g + g.adjoint().eval());
}

// GG^dag / trace for an n x rank Gaussian G: a PSD unit-trace matrix of the
// requested rank.
inline Matrix random_psd(SplitMix64& rng, Eigen::Index n, Eigen::Index rank) {
  const Matrix g = random_matrix(rng, n, rank);
  Matrix m = g * g.adjoint();
  return m / m.trace().real();
}

// A vector orthogonal to f (n >= 2), unit norm.
inline Vector random_orthogonal_to(SplitMix64& rng, const Vector& f) {
  const Eigen::Index n = f.size();
  Vector g;
  double norm = 0.0;
  do {
    g = random_vector(rng, n);
    g -= f * (f.dot(g) / f.squaredNorm());
    norm = g.norm();
  } while (norm < 1e-6);
  return g / norm;
}

// --- structured instances -------------------------------------------------

// Separable PPT state with |e,f> planted in the kernel and the companion
// |perp(e),f> mapped to |perp(e)> (x) g, g != 0 ("structure" case): mixes
// terms with A-factor perp(e) (arbitrary B-factors, aligned family) and
// terms with arbitrary A-factors but B-factors orthogonal to f.
struct KernelInstance {
  DensityOperator rho;
  ProductVector pv;  // the planted kernel product (unit factors)
};

inline KernelInstance kernel_structure_instance(SplitMix64& rng,
                                                Eigen::Index n,
                                                int aligned_terms,
                                                int orthogonal_terms,
                                                bool real_a_side) {
  const Eigen::Vector2cd e =
      real_a_side ? random_real_qubit(rng) : random_qubit(rng);
  const Vector f = random_vector(rng, n);
  SeparableDecomposition dec;
  dec.dim_b = n;
  const Eigen::Vector2cd ehat = sep2n::perp(e);
  for (int i = 0; i < aligned_terms; ++i) {
    Term t;
    t.weight = rng.uniform() + 0.1;
    t.pv.e = ehat;
    t.pv.f = random_vector(rng, n);
    dec.terms.push_back(t);
  }
  for (int i = 0; i < orthogonal_terms; ++i) {
    Term t;
    t.weight = rng.uniform() + 0.1;
    t.pv.e = real_a_side ? random_real_qubit(rng) : random_qubit(rng);
    t.pv.f = random_orthogonal_to(rng, f);
    dec.terms.push_back(t);
  }
  KernelInstance out;
  DensityOperator rho = sep2n::assemble(dec);
  rho.mat /= rho.trace();
  out.rho = std::move(rho);
  out.pv.e = e;
  out.pv.f = f;
  return out;
}

// Separable PPT state whose kernel contains all of C^2 (x) f (the
// "both_in_kernel" case): every B-factor is orthogonal to f.
inline KernelInstance kernel_both_instance(SplitMix64& rng, Eigen::Index n,
                                           int terms, bool real_a_side) {
  return kernel_structure_instance(rng, n, 0, terms, real_a_side);
}

// Random symmetric unitary U = V V^T from a Haar-ish 2x2 unitary V.
inline Eigen::Matrix2cd random_symmetric_unitary(SplitMix64& rng) {
  const Matrix g = random_matrix(rng, 2, 2);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  return (q * q.transpose()).eval();
}

}  // namespace testsupport
