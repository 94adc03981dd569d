#include "sep2n/peres2x2.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sep2n/certificate.hpp"
#include "sep2n/decomposer.hpp"
#include "sep2n/product_finder.hpp"
#include "sep2n/reduction.hpp"

namespace sep2n {

namespace {

// <e|_A v: the dim-2 B-side component of a C^2 (x) C^2 vector along e.
Vector a_component(const Eigen::Vector2cd& e, const Vector& v) {
  Vector out(2);
  for (Eigen::Index k = 0; k < 2; ++k)
    out(k) = std::conj(e(0)) * v(k) + std::conj(e(1)) * v(2 + k);
  return out;
}

// Mixed determinant term of det(alpha P + Q) = a^2 det P + a * mixed + det Q.
Cplx mixed_det(const Eigen::Matrix2cd& p, const Eigen::Matrix2cd& q) {
  return p(0, 0) * q(1, 1) + q(0, 0) * p(1, 1) - p(0, 1) * q(1, 0) -
         q(0, 1) * p(1, 0);
}

struct PairCandidate {
  KernelPairSplit split;
  Cplx s{0.0, 0.0};
  double consistency = std::numeric_limits<double>::infinity();
  bool valid = false;
};

PairCandidate try_alpha(const Vector& psi1, const Vector& psi2,
                        const Eigen::Vector2cd& e, Cplx alpha) {
  PairCandidate c;
  c.split.e = e;
  c.split.alpha = alpha;
  const Eigen::Vector2cd eh = perp(e);
  c.split.f = a_component(e, psi1);
  c.split.g = -a_component(eh, psi1);
  const Vector p = a_component(e.conjugate(), psi2);
  const Vector q = a_component(eh.conjugate(), psi2);
  const double qn2 = q.squaredNorm();
  if (qn2 < 1e-24) {
    // psi2 would be a product with the 2-level factor e*; the caller already
    // excluded products, so this alpha is unusable.
    c.consistency = c.split.f.norm();
    return c;
  }
  c.s = -(q.dot(c.split.f)) / qn2;
  c.consistency = (c.s * q + c.split.f).norm();
  c.split.h = c.s * p;
  c.split.residual = c.consistency;
  c.valid = true;
  return c;
}

Matrix a_side_unitary_2x2(const Eigen::Matrix2cd& u) {
  Matrix big = Matrix::Zero(4, 4);
  big.topLeftCorner(2, 2) = u(0, 0) * Matrix::Identity(2, 2);
  big.topRightCorner(2, 2) = u(0, 1) * Matrix::Identity(2, 2);
  big.bottomLeftCorner(2, 2) = u(1, 0) * Matrix::Identity(2, 2);
  big.bottomRightCorner(2, 2) = u(1, 1) * Matrix::Identity(2, 2);
  return big;
}

std::vector<Term> spectral_terms_n1(const Matrix& m, double dust) {
  std::vector<Term> out;
  const HermitianEig eig = eig_hermitian(m);
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const double w = eig.values(j);
    if (w <= dust) continue;
    Term t;
    t.weight = w;
    t.pv.e = Eigen::Vector2cd(phase_fix(eig.vectors.col(j)));
    t.pv.f = Vector::Ones(1);
    out.push_back(t);
  }
  return out;
}

double clamp_small_negatives(Matrix& m, double t0) {
  const HermitianEig eig = eig_hermitian(m);
  const double mn = eig.values.minCoeff();
  if (mn >= 0.0) return 0.0;
  const double budget =
      std::max(1e-6 * operator_norm(m), 1e-12 * std::max(t0, 1e-300));
  if (-mn > budget)
    fail(Errc::not_psd, "two-qubit iterate lost positivity (" +
                            std::to_string(mn) + ")");
  const Eigen::VectorXd clipped = eig.values.cwiseMax(0.0);
  m = eig.vectors * clipped.asDiagonal() * eig.vectors.adjoint();
  m = 0.5 * (m + m.adjoint());
  return -mn;
}

// Kernel-product reduction for a PPT 2-qubit state: one removed term (maybe
// absent), a compression to C^2 (x) C^1, and the spectral split of the rest.
std::vector<Term> kernel_product_terms(const DensityOperator& rho,
                                       const ProductVector& pv, double t0,
                                       const ToleranceConfig& tol) {
  std::vector<Term> out;
  const SupportReduction red = reduce_support(rho, pv, tol);
  if (red.removed) out.push_back(*red.removed);
  const BCompression comp = compress_b(red.reduced, red.direction, tol);
  for (const Term& t : spectral_terms_n1(comp.reduced.mat, 1e-12 * t0)) {
    Term lifted;
    lifted.weight = t.weight;
    lifted.pv = lift(comp, t.pv);
    out.push_back(lifted);
  }
  return out;
}

void conj_terms_a(std::vector<Term>& terms) {
  for (Term& t : terms)
    t.pv.e = Eigen::Vector2cd(phase_fix(Vector(t.pv.e.conjugate())));
}

std::vector<Term> build_terms(Matrix m, double t0, const ToleranceConfig& tol,
                              int fuel);

// Peel one PPT-preserving product term and recurse.
std::vector<Term> peel_and_recurse(const DensityOperator& rho,
                                   const ProductVector& pv, double t0,
                                   const ToleranceConfig& tol, int fuel) {
  const SubtractionResult sub = peel_range_product_ppt(rho, pv, tol);
  std::vector<Term> out;
  Term t;
  t.weight = sub.weight;
  t.pv = sub.pv;
  out.push_back(t);
  std::vector<Term> rest = build_terms(sub.reduced.mat, t0, tol, fuel - 1);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<Term> build_terms(Matrix m, double t0, const ToleranceConfig& tol,
                              int fuel) {
  if (fuel <= 0)
    fail(Errc::numerical_failure, "two-qubit construction did not terminate");
  m = 0.5 * (m + m.adjoint());
  clamp_small_negatives(m, t0);
  if (m.trace().real() <= 1e-12 * t0) return {};

  const RankSplit split = rank_kernel_range(m, tol);
  if (split.rank == 0) return {};
  const DensityOperator rho = DensityOperator::create(2, m);

  if (split.rank == 1) {
    const HermitianEig eig = eig_hermitian(m);
    auto p = as_product(eig.vectors.col(3), 2, 1e-6);
    if (!p) fail(Errc::numerical_failure, "pure PPT iterate is not a product");
    Term t;
    t.weight = eig.values(3);
    t.pv = *p;
    return {t};
  }

  if (split.rank <= 2) return decompose_rank_n(rho, tol).terms;

  const DensityOperator ta = partial_transpose_a(rho);
  const RankSplit split_ta = rank_kernel_range(ta.mat, tol);

  // The partial transpose has low rank: decompose it instead and conjugate
  // the 2-level factors (rho = (ta)^TA maps |e,f> terms to |e*,f>).
  if (split_ta.rank <= 2) {
    std::vector<Term> out = decompose_rank_n(ta, tol).terms;
    conj_terms_a(out);
    return out;
  }

  // A product vector in either kernel short-circuits the core machinery.
  if (split.rank == 3) {
    auto p = as_product(split.kernel.basis.col(0), 2, 1e-7);
    if (p) return kernel_product_terms(rho, *p, t0, tol);
  }
  if (split_ta.rank == 3) {
    auto p = as_product(split_ta.kernel.basis.col(0), 2, 1e-7);
    if (p) {
      std::vector<Term> out = kernel_product_terms(ta, *p, t0, tol);
      conj_terms_a(out);
      return out;
    }
  }

  if (split.rank == 4 && split_ta.rank == 4) {
    // No constraints: peel the first computational product direction.
    ProductVector pv;
    pv.e << 1.0, 0.0;
    pv.f = Vector::Zero(2);
    pv.f(0) = 1.0;
    return peel_and_recurse(rho, pv, t0, tol, fuel);
  }

  if (split.rank == 3 && split_ta.rank == 4) {
    // Single linear constraint <psi1 | a,b> = 0: a wide pencil on the range.
    const ProductSearchResult found =
        find_product_in_subspace(split.range, tol);
    return peel_and_recurse(rho, found.pv, t0, tol, fuel);
  }

  if (split.rank == 4 && split_ta.rank == 3) {
    // Single conjugate-side constraint <psi2 | a*, b> = 0. With a = |1>
    // it reads (conj psi2_(1,k)) . f = 0; solve it directly.
    const Vector psi2 = split_ta.kernel.basis.col(0);
    Eigen::Vector2cd row(std::conj(psi2(2)), std::conj(psi2(3)));
    ProductVector pv;
    pv.e << 0.0, 1.0;
    pv.f = Vector(2);
    if (row.norm() > 1e-12) {
      pv.f(0) = -row(1);
      pv.f(1) = row(0);
      pv.f /= pv.f.norm();
    } else {
      pv.f(0) = 1.0;
      pv.f(1) = 0.0;
    }
    return peel_and_recurse(rho, pv, t0, tol, fuel);
  }

  // Irreducible core: both kernels are one-dimensional and neither vector is
  // a product.
  const KernelPairSplit pair = split_kernel_pair(
      split.kernel.basis.col(0), split_ta.kernel.basis.col(0), tol);
  const CoreResolution res = resolve_core(rho, pair, tol);

  if (res.path == CoreResolution::Path::subtract)
    return peel_and_recurse(rho, res.pv, t0, tol, fuel);

  // Rotate path: conjugating by (U (x) 1) lands on the PT-invariant case.
  const Matrix big = a_side_unitary_2x2(res.rotation);
  Matrix rotated = big * m * big.adjoint();
  rotated = 0.5 * (rotated + rotated.adjoint());
  clamp_small_negatives(rotated, t0);
  SeparableDecomposition inner =
      decompose_pt_invariant(DensityOperator::create(2, rotated), tol);
  std::vector<Term> out;
  out.reserve(inner.terms.size());
  for (const Term& t : inner.terms) {
    Term mapped = t;
    mapped.pv.e = Eigen::Vector2cd(
        phase_fix(Vector(res.rotation.adjoint() * t.pv.e)));
    out.push_back(mapped);
  }
  return out;
}

}  // namespace

KernelPairSplit split_kernel_pair(const Vector& psi1, const Vector& psi2,
                                  const ToleranceConfig& tol) {
  if (psi1.size() != 4 || psi2.size() != 4)
    fail(Errc::dimension_mismatch, "kernel vectors must live on C^2 (x) C^2");
  const double n1 = psi1.norm();
  const double n2 = psi2.norm();
  if (n1 < 1e-300 || n2 < 1e-300)
    fail(Errc::zero_vector, "kernel vectors must be nonzero");
  const Vector u1 = psi1 / n1;
  const Vector u2 = psi2 / n2;

  // det C(alpha) = 0 with C = alpha P + Q encodes "the e-component of psi1
  // and the perp(e*)-component of psi2 are parallel".
  Eigen::Matrix2cd p, q;
  for (Eigen::Index k = 0; k < 2; ++k) {
    p(0, k) = std::conj(u1(k));       // conj <0,k|psi1>
    q(0, k) = std::conj(u1(2 + k));   // conj <1,k|psi1>
    p(1, k) = std::conj(u2(2 + k));   // conj <1,k|psi2>
    q(1, k) = -std::conj(u2(k));      // -conj <0,k|psi2>
  }
  const Cplx c2 = p.determinant();
  const Cplx c1 = mixed_det(p, q);
  const Cplx c0 = q.determinant();
  const double scale =
      std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale < 1e-300)
    fail(Errc::degenerate_quadratic, "vanishing determinant condition");

  std::vector<std::pair<Cplx, bool>> roots;  // (alpha, infinite)
  if (std::abs(c2) <= 1e-12 * scale) {
    if (std::abs(c1) <= 1e-12 * scale)
      fail(Errc::degenerate_quadratic,
           "determinant condition has no isolated roots");
    roots.push_back({-c0 / c1, false});
    roots.push_back({Cplx(0.0, 0.0), true});
  } else {
    const Cplx disc = c1 * c1 - 4.0 * c2 * c0;
    const Cplx sq = std::sqrt(disc);
    const Cplx qq = std::abs(c1 + sq) >= std::abs(c1 - sq) ? -0.5 * (c1 + sq)
                                                           : -0.5 * (c1 - sq);
    if (std::abs(qq) > 1e-14 * scale) {
      roots.push_back({qq / c2, false});
      roots.push_back({c0 / qq, false});
    } else {
      roots.push_back({Cplx(0.0, 0.0), false});
      roots.push_back({-c1 / c2, false});
    }
  }

  PairCandidate best;
  for (const auto& [alpha, infinite] : roots) {
    Eigen::Vector2cd e;
    if (infinite) {
      e << 1.0, 0.0;
    } else {
      e << alpha, 1.0;
      e /= e.norm();
    }
    const PairCandidate c = try_alpha(u1, u2, e, infinite ? Cplx(0, 0) : alpha);
    if (c.consistency < best.consistency) best = c;
  }

  const double fscale = std::max(best.split.f.norm(), 1e-6);
  if (!best.valid || best.consistency > 1e-6 * fscale)
    fail(Errc::inconsistent_shared_factor,
         "kernel vectors do not share a B-side factor (residual " +
             std::to_string(best.consistency) + ")");

  // Fold the scale into h so that the reported quadruple satisfies the
  // normal form against the *unit* kernel vectors.
  return best.split;
}

Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& m) {
  Eigen::Vector3d out;
  out(0) = m(0, 1).real();
  out(1) = m(0, 1).imag();
  out(2) = 0.5 * (m(0, 0) - m(1, 1)).real();
  return out;
}

Eigen::Matrix2cd su2_rotation_between(const Eigen::Vector3d& from,
                                      const Eigen::Vector3d& to) {
  const double nf = from.norm();
  const double nt = to.norm();
  if (nf < 1e-300 || nt < 1e-300)
    fail(Errc::zero_vector, "rotation endpoints must be nonzero");
  const Eigen::Vector3d a = from / nf;
  const Eigen::Vector3d b = to / nt;
  Eigen::Vector3d axis = a.cross(b);
  const double sin_norm = axis.norm();
  const double cos_val = a.dot(b);
  if (sin_norm < 1e-14 && cos_val > 0.0) return Eigen::Matrix2cd::Identity();
  if (sin_norm < 1e-14) {
    // Antipodal: rotate by pi about a deterministic perpendicular axis.
    axis = a.cross(Eigen::Vector3d::UnitX());
    if (axis.norm() < 1e-8) axis = a.cross(Eigen::Vector3d::UnitZ());
  }
  axis /= axis.norm();
  const double theta = std::atan2(sin_norm, cos_val);
  // In the (X, Y, Z) basis used here (Y the antisymmetric unit), the lift of
  // a right-handed rotation carries +i in the exponent.
  Eigen::Matrix2cd x, z;
  x << 0.0, 1.0, 1.0, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  const Eigen::Matrix2cd n_tau =
      axis(0) * x + axis(1) * antisymmetric_unit() + axis(2) * z;
  return std::cos(0.5 * theta) * Eigen::Matrix2cd::Identity() +
         Cplx(0.0, std::sin(0.5 * theta)) * n_tau;
}

CoreResolution resolve_core(const DensityOperator& rho,
                            const KernelPairSplit& split,
                            const ToleranceConfig& tol) {
  if (rho.dim_b != 2)
    fail(Errc::invalid_argument, "core resolution needs C^2 (x) C^2");
  const RankSplit sr = rank_kernel_range(rho.mat, tol);
  const DensityOperator ta = partial_transpose_a(rho);
  const RankSplit st = rank_kernel_range(ta.mat, tol);
  if (sr.kernel.dim() != 1 || st.kernel.dim() != 1)
    fail(Errc::invalid_argument, "core case needs rank 3 on both sides");
  const Vector k1 = sr.kernel.basis.col(0);
  const Vector k2 = st.kernel.basis.col(0);

  // Decide between the two exits by solving h = alpha_c f + beta g.
  const Vector& f = split.f;
  const Vector& g = split.g;
  Eigen::Matrix2cd fg;
  fg << f(0), g(0), f(1), g(1);
  const double fg_scale = std::max(f.norm() * g.norm(), 1e-300);
  const bool solvable = std::abs(fg.determinant()) > 1e-10 * fg_scale;

  if (solvable) {
    Eigen::Vector2cd h2(split.h(0), split.h(1));
    const Eigen::Vector2cd x = fg.partialPivLu().solve(h2);
    const Cplx alpha_c = x(0);
    const Cplx beta = x(1);
    const bool alpha_small = std::abs(alpha_c) <= 1e-7 * std::max(1.0, std::abs(beta));
    const bool beta_real =
        std::abs(beta.imag()) <= 1e-7 * std::max(1.0, std::abs(beta.real()));
    if (alpha_small && beta_real && beta.real() > 1e-12) {
      const double k = std::sqrt(beta.real());
      Eigen::Vector2cd a = split.e + k * perp(split.e);
      a /= a.norm();
      Vector d = f - k * g;
      if (d.norm() > 1e-10 * std::max(f.norm(), k * g.norm())) {
        const Eigen::Vector2cd b2 = perp(Eigen::Vector2cd(d(0), d(1)));
        Vector b(2);
        b << b2(0), b2(1);
        const Vector v = tensor(a, b);
        const Vector vc = tensor(a.conjugate(), b);
        const double r1 = std::abs(k1.dot(v));
        const double r2 = std::abs(k2.dot(vc));
        if (r1 <= 1e-6 && r2 <= 1e-6) {
          CoreResolution out;
          out.path = CoreResolution::Path::subtract;
          out.pv.e = a;
          out.pv.f = b;
          return out;
        }
      }
    }
  }

  // Rotate exit: the traceless Bloch images of the B-side quadratic forms
  // must lie in a plane; its normal goes to the transposition-odd axis.
  std::vector<Vector> probes;
  {
    Vector fh = f, gh = g;
    if (fh.norm() > 1e-300) fh /= fh.norm();
    if (gh.norm() > 1e-300) gh /= gh.norm();
    probes.push_back(fh);
    probes.push_back(gh);
    Vector s1 = fh + gh;
    if (s1.norm() > 1e-12) probes.push_back(Vector(s1 / s1.norm()));
    Vector s2 = fh + Cplx(0.0, 1.0) * gh;
    if (s2.norm() > 1e-12) probes.push_back(Vector(s2 / s2.norm()));
  }
  Eigen::MatrixXd images(3, static_cast<Eigen::Index>(probes.size()));
  for (size_t j = 0; j < probes.size(); ++j)
    images.col(static_cast<Eigen::Index>(j)) =
        bloch_vector(sandwich_b(rho, probes[j], probes[j]));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(images, Eigen::ComputeFullU);
  Eigen::Vector3d normal = svd.matrixU().col(2);
  // Deterministic sign: largest magnitude component positive.
  Eigen::Index imax;
  normal.cwiseAbs().maxCoeff(&imax);
  if (normal(imax) < 0.0) normal = -normal;

  const Eigen::Matrix2cd u =
      su2_rotation_between(normal, Eigen::Vector3d::UnitY());
  const Matrix big = a_side_unitary_2x2(u);
  Matrix rotated = big * rho.mat * big.adjoint();
  rotated = 0.5 * (rotated + rotated.adjoint());
  const double defect =
      pt_defect(DensityOperator::create(2, rotated));
  const double limit = tol.recon_tol * std::max(rho.trace(), 1e-300);
  if (defect > limit)
    fail(Errc::neither_case_matches,
         "neither a shared product vector nor a flattening rotation exists "
         "(pt defect " + std::to_string(defect) + ")");
  CoreResolution out;
  out.path = CoreResolution::Path::rotate;
  out.rotation = u;
  return out;
}

TwoQubitVerdict decompose_2x2(const DensityOperator& rho,
                              const ToleranceConfig& tol) {
  if (rho.dim_b != 2)
    fail(Errc::invalid_argument, "decompose_2x2 needs C^2 (x) C^2");
  require_psd(rho, tol);

  TwoQubitVerdict verdict;
  const double t0 = rho.trace();
  if (t0 <= 1e-300) {
    verdict.status = TwoQubitStatus::separable;
    SeparableDecomposition dec;
    dec.dim_b = 2;
    verdict.decomposition = std::move(dec);
    return verdict;
  }

  const DensityOperator ta = partial_transpose_a(rho);
  const HermitianEig eig_ta = eig_hermitian(ta.mat);
  verdict.min_pt_eigenvalue = eig_ta.values.minCoeff();

  if (verdict.min_pt_eigenvalue < -tol.psd_tol) {
    verdict.status = TwoQubitStatus::entangled;
    return verdict;
  }

  try {
    SeparableDecomposition dec;
    dec.dim_b = 2;
    dec.terms = build_terms(rho.mat, t0, tol, 16);
    const VerifyReport check = verify_decomposition(rho, dec, tol);
    if (!check.ok)
      fail(Errc::numerical_failure,
           "constructed decomposition failed verification (error " +
               std::to_string(check.recon_error) + ")");
    verdict.status = TwoQubitStatus::separable;
    verdict.decomposition = std::move(dec);
  } catch (const Error& err) {
    if (std::abs(verdict.min_pt_eigenvalue) <= tol.psd_tol) {
      verdict.status = TwoQubitStatus::ambiguous;
    } else {
      fail(Errc::numerical_failure,
           std::string("PPT state defeated the construction: ") + err.what());
    }
  }
  return verdict;
}

}  // namespace sep2n
