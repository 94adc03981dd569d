// Acceptance gate: one self-contained check per release criterion, each
// printing exactly one "criterion k: PASS/FAIL - details" line. Exit status
// is 0 iff every selected criterion passes. Criterion 9 drives the installed
// CLI and needs --cli <path>.

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace sep2n;
using namespace testsupport;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return std::string(buf);
}

// Independent minimum partial-transpose eigenvalue: explicit re-indexing plus
// a direct solver call, bypassing the library's own transpose and wrappers.
double oracle_min_pt(const DensityOperator& rho) {
  Matrix pt = naive_partial_transpose(rho.mat, rho.dim_b);
  pt = 0.5 * (pt + pt.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(pt);
  return solver.eigenvalues().minCoeff();
}

double oracle_min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint().eval()));
  return solver.eigenvalues().minCoeff();
}

double oracle_op_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// --- criterion 1: PT-invariant decomposer at scale ------------------------

bool crit1(std::string& detail) {
  const auto t0 = Clock::now();
  double worst_recon = 0.0, worst_imag = 0.0;
  for (Eigen::Index n = 1; n <= 6; ++n) {
    const int bound = int(n * (n + 3) / 2 + 2);
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t seed = std::uint64_t(n) * 10000 + std::uint64_t(i);
      const DensityOperator rho = random_pt_invariant(n, seed);
      SeparableDecomposition dec;
      try {
        dec = decompose_pt_invariant(rho);
      } catch (const Error& e) {
        detail = fmt("N=%d seed=%llu threw %s", int(n),
                     (unsigned long long)seed, errc_name(e.code()));
        return false;
      }
      if (int(dec.terms.size()) > bound) {
        detail = fmt("N=%d seed=%llu used %d terms (bound %d)", int(n),
                     (unsigned long long)seed, int(dec.terms.size()), bound);
        return false;
      }
      for (const Term& t : dec.terms) {
        if (!(t.weight > 0.0)) {
          detail = fmt("N=%d seed=%llu non-positive weight", int(n),
                       (unsigned long long)seed);
          return false;
        }
        const Vector fixed = phase_fix(Vector(t.pv.e));
        worst_imag = std::max(worst_imag,
                              double(fixed.imag().cwiseAbs().maxCoeff()));
      }
      const double recon =
          oracle_op_norm(rho.mat - naive_assemble(dec)) / rho.trace();
      worst_recon = std::max(worst_recon, recon);
      if (recon > 1e-8) {
        detail = fmt("N=%d seed=%llu recon %.3e > 1e-8", int(n),
                     (unsigned long long)seed, recon);
        return false;
      }
    }
  }
  if (worst_imag > 1e-8) {
    detail = fmt("A-side imaginary part %.3e > 1e-8", worst_imag);
    return false;
  }
  const double secs = seconds_since(t0);
  detail = fmt("3000 states, worst recon %.2e, worst imag %.2e, %.1fs",
               worst_recon, worst_imag, secs);
  if (secs > 60.0) {
    detail += " (over the 60s budget)";
    return false;
  }
  return true;
}

// --- criterion 2: two-qubit decision vs the eigenvalue oracle -------------

bool crit2(std::string& detail) {
  int separable = 0, entangled = 0, ambiguous = 0;
  double worst_recon = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t seed = 20000 + std::uint64_t(i);
    const Eigen::Index rank = 1 + Eigen::Index(i % 4);
    const DensityOperator rho = random_density(2, rank, seed);
    const double oracle = oracle_min_pt(rho);
    TwoQubitVerdict v;
    try {
      v = decompose_2x2(rho);
    } catch (const Error& e) {
      detail = fmt("seed=%llu threw %s", (unsigned long long)seed,
                   errc_name(e.code()));
      return false;
    }
    switch (v.status) {
      case TwoQubitStatus::separable: {
        if (oracle < -1e-9) {
          detail = fmt("seed=%llu certified NPT (oracle %.3e)",
                       (unsigned long long)seed, oracle);
          return false;
        }
        const double recon =
            oracle_op_norm(rho.mat - naive_assemble(*v.decomposition)) /
            rho.trace();
        worst_recon = std::max(worst_recon, recon);
        if (recon > 1e-7) {
          detail = fmt("seed=%llu recon %.3e > 1e-7",
                       (unsigned long long)seed, recon);
          return false;
        }
        ++separable;
        break;
      }
      case TwoQubitStatus::entangled:
        if (oracle >= -1e-9 && std::abs(oracle) > 1e-9) {
          detail = fmt("seed=%llu called entangled, oracle %.3e",
                       (unsigned long long)seed, oracle);
          return false;
        }
        ++entangled;
        break;
      case TwoQubitStatus::ambiguous:
        if (std::abs(oracle) > 1e-9) {
          detail = fmt("seed=%llu ambiguous outside band (oracle %.3e)",
                       (unsigned long long)seed, oracle);
          return false;
        }
        ++ambiguous;
        break;
    }
  }
  detail = fmt("1000 states: %d separable / %d entangled / %d ambiguous, "
               "worst recon %.2e, 0 certified-NPT",
               separable, entangled, ambiguous, worst_recon);
  return true;
}

// --- criterion 3: werner family --------------------------------------------

bool crit3(std::string& detail) {
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double p = i / 10.0;
    const double expect = (1.0 - 3.0 * p) / 4.0;
    const double got = oracle_min_pt(werner(p));
    worst = std::max(worst, std::abs(got - expect));
    if (std::abs(got - expect) > 1e-12) {
      detail = fmt("p=%.1f min PT eig off by %.3e", p, std::abs(got - expect));
      return false;
    }
  }
  const TwoQubitVerdict inside = decompose_2x2(werner(0.30));
  if (inside.status != TwoQubitStatus::separable) {
    detail = "werner(0.30) not declared separable";
    return false;
  }
  const TwoQubitVerdict outside = decompose_2x2(werner(0.36));
  if (outside.status != TwoQubitStatus::entangled) {
    detail = "werner(0.36) not declared entangled";
    return false;
  }
  detail = fmt("11-point sweep matches (1-3p)/4 to %.1e; "
               "separable at 0.30, entangled at 0.36", worst);
  return true;
}

// --- criterion 4: certificate soundness ------------------------------------

bool crit4(std::string& detail) {
  int certified = 0, quick_passes = 0;
  double worst_recon = 0.0;
  for (Eigen::Index n : {2, 3, 4}) {
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t seed = 40000 + std::uint64_t(n) * 1000 +
                                 std::uint64_t(i);
      const DensityOperator rho = random_density(n, 2 * n, seed);
      CertificateReport quick, unit;
      try {
        quick = quick_certify(rho);
        unit = certify(rho, AStrategy::unit);
      } catch (const Error& e) {
        detail = fmt("N=%d seed=%llu threw %s", int(n),
                     (unsigned long long)seed, errc_name(e.code()));
        return false;
      }
      for (const CertificateReport* rep : {&quick, &unit}) {
        if (rep->verdict != CertVerdict::certified_separable) continue;
        ++certified;
        if (!rep->decomposition) {
          detail = fmt("N=%d seed=%llu certified without a decomposition",
                       int(n), (unsigned long long)seed);
          return false;
        }
        const double recon =
            oracle_op_norm(rho.mat - naive_assemble(*rep->decomposition)) /
            rho.trace();
        worst_recon = std::max(worst_recon, recon);
        if (recon > 1e-8) {
          detail = fmt("N=%d seed=%llu certificate recon %.3e > 1e-8", int(n),
                       (unsigned long long)seed, recon);
          return false;
        }
      }
      // Quick-test pass (its norm condition) must imply the envelope pass.
      const bool quick_condition =
          quick.support_ok && quick.norm_value <= 1.0 + 1e-9;
      if (quick_condition) {
        ++quick_passes;
        if (unit.verdict != CertVerdict::certified_separable) {
          detail = fmt("N=%d seed=%llu quick norm %.6f passed but the "
                       "envelope test did not", int(n),
                       (unsigned long long)seed, quick.norm_value);
          return false;
        }
      }
    }
  }
  int npt_certified = 0;
  for (Eigen::Index n : {2, 3}) {
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t seed = 50000 + std::uint64_t(n) * 1000 +
                                 std::uint64_t(i);
      const DensityOperator rho = random_npt(n, seed);
      try {
        if (certify(rho).verdict == CertVerdict::certified_separable)
          ++npt_certified;
        if (quick_certify(rho).verdict == CertVerdict::certified_separable)
          ++npt_certified;
      } catch (const Error&) {
        // an exception is not a certification
      }
    }
  }
  if (npt_certified > 0) {
    detail = fmt("%d NPT states were certified separable", npt_certified);
    return false;
  }
  detail = fmt("1500 random states: %d certifications (worst recon %.2e), "
               "%d quick passes all implied envelope passes; "
               "1000 NPT states: 0 certifications",
               certified, worst_recon, quick_passes);
  return true;
}

// --- criterion 5: product vectors in subspaces ------------------------------

bool crit5(std::string& detail) {
  double worst_mem = 0.0, worst_pencil = 0.0, worst_imag = 0.0;
  for (Eigen::Index n = 2; n <= 8; ++n) {
    for (int i = 0; i < 500; ++i) {
      const std::uint64_t seed = std::uint64_t(n) * 100000 + std::uint64_t(i);
      const Subspace h = random_subspace(2 * n, n, seed);
      ProductSearchResult r;
      try {
        r = find_product_in_subspace(h);
      } catch (const Error& e) {
        detail = fmt("N=%d seed=%llu square search threw %s", int(n),
                     (unsigned long long)seed, errc_name(e.code()));
        return false;
      }
      // Re-derive the residuals independently of the reported fields.
      const Vector joint = naive_tensor(r.pv.e, r.pv.f);
      const Vector proj = h.basis * (h.basis.adjoint() * joint).eval();
      const double mem = (joint - proj).norm() / joint.norm();
      worst_mem = std::max(worst_mem, mem);
      worst_pencil = std::max(worst_pencil, r.pencil_residual);
      if (mem > 1e-8 || r.pencil_residual > 1e-10) {
        detail = fmt("N=%d seed=%llu residuals %.3e / %.3e", int(n),
                     (unsigned long long)seed, mem, r.pencil_residual);
        return false;
      }

      // Oversized subspace: the A-side factor must come out real.
      const Eigen::Index dim = n + 1 + Eigen::Index(i % n);
      const Subspace hb = random_subspace(2 * n, std::min(dim, 2 * n),
                                          seed + 7);
      ProductSearchResult rr;
      try {
        rr = find_real_e_product(hb);
      } catch (const Error& e) {
        detail = fmt("N=%d seed=%llu real search threw %s", int(n),
                     (unsigned long long)seed, errc_name(e.code()));
        return false;
      }
      const Vector jb = naive_tensor(rr.pv.e, rr.pv.f);
      const Vector pb = hb.basis * (hb.basis.adjoint() * jb).eval();
      const double memb = (jb - pb).norm() / jb.norm();
      const double im = rr.pv.e.imag().cwiseAbs().maxCoeff();
      worst_mem = std::max(worst_mem, memb);
      worst_pencil = std::max(worst_pencil, rr.pencil_residual);
      worst_imag = std::max(worst_imag, im);
      if (memb > 1e-8 || rr.pencil_residual > 1e-10 || im > 1e-12) {
        detail = fmt("N=%d seed=%llu real-e residuals %.3e / %.3e / imag %.3e",
                     int(n), (unsigned long long)seed, memb,
                     rr.pencil_residual, im);
        return false;
      }
    }
  }
  detail = fmt("7000 searches: worst membership %.2e, worst pencil %.2e, "
               "worst real-e imag %.2e",
               worst_mem, worst_pencil, worst_imag);
  return true;
}

// --- criterion 6: reduction laws --------------------------------------------

bool crit6(std::string& detail) {
  SplitMix64 rng(60001);
  double worst_kernel = 0.0, worst_annihilation = 0.0, worst_defect = 0.0;

  // (a) range peel: rank drop exactly one, kernel postcondition.
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 2 + Eigen::Index(i % 3);
    const SeparableSample s = random_separable(n, n, rng.next_u64());
    const Eigen::Index r0 = rank_kernel_range(s.state.mat).rank;
    SubtractionResult r;
    try {
      r = peel_range_product(s.state, s.decomposition.terms[0].pv);
    } catch (const Error& e) {
      detail = fmt("peel instance %d threw %s", i, errc_name(e.code()));
      return false;
    }
    if (rank_kernel_range(r.reduced.mat).rank != r0 - 1) {
      detail = fmt("peel instance %d rank drop != 1", i);
      return false;
    }
    Vector k = pseudo_inverse(s.state.mat) *
               naive_tensor(s.decomposition.terms[0].pv.e,
                            s.decomposition.terms[0].pv.f);
    k /= k.norm();
    const double res = (r.reduced.mat * k).norm();
    worst_kernel = std::max(worst_kernel, res);
    if (res > 1e-8) {
      detail = fmt("peel instance %d kernel residual %.3e", i, res);
      return false;
    }
  }

  // (b) PPT-preserving peel: both sides stay PSD.
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 2 + Eigen::Index(i % 3);
    const SeparableSample s =
        random_separable(n, n + 2, rng.next_u64());
    SubtractionResult r;
    try {
      r = peel_range_product_ppt(s.state, s.decomposition.terms[0].pv);
    } catch (const Error& e) {
      detail = fmt("ppt peel instance %d threw %s", i, errc_name(e.code()));
      return false;
    }
    const double m1 = oracle_min_eig(r.reduced.mat);
    const double m2 =
        oracle_min_eig(naive_partial_transpose(r.reduced.mat, n));
    if (m1 < -1e-9 || m2 < -1e-9) {
      detail = fmt("ppt peel instance %d min eigs %.3e / %.3e", i, m1, m2);
      return false;
    }
  }

  // (c) kernel-driven reduction annihilates the C^2 (x) f slice.
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 2 + Eigen::Index(i % 4);
    const KernelInstance ki =
        kernel_structure_instance(rng, n, 2 + (i % 2), 2, false);
    SupportReduction sr;
    try {
      sr = reduce_support(ki.rho, ki.pv);
    } catch (const Error& e) {
      detail = fmt("reduce instance %d threw %s", i, errc_name(e.code()));
      return false;
    }
    Eigen::Vector2cd e0(1.0, 0.0), e1(0.0, 1.0);
    const double res =
        std::max((sr.reduced.mat * naive_tensor(e0, ki.pv.f)).norm(),
                 (sr.reduced.mat * naive_tensor(e1, ki.pv.f)).norm());
    worst_annihilation = std::max(worst_annihilation, res);
    if (res > 1e-8) {
      detail = fmt("reduce instance %d annihilation residual %.3e", i, res);
      return false;
    }
  }

  // (d) PT-aware variant keeps the transpose defect at the floor.
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 2 + Eigen::Index(i % 4);
    const KernelInstance ki =
        kernel_structure_instance(rng, n, 2 + (i % 2), 2, true);
    SupportReduction sr;
    try {
      sr = reduce_support_pt(ki.rho, ki.pv);
    } catch (const Error& e) {
      detail = fmt("pt reduce instance %d threw %s", i, errc_name(e.code()));
      return false;
    }
    const double defect = oracle_op_norm(
        sr.reduced.mat - naive_partial_transpose(sr.reduced.mat, n));
    worst_defect = std::max(worst_defect, defect);
    if (defect > 1e-9) {
      detail = fmt("pt reduce instance %d defect %.3e", i, defect);
      return false;
    }
  }

  detail = fmt("4x500 instances: worst kernel %.2e, annihilation %.2e, "
               "pt defect %.2e",
               worst_kernel, worst_annihilation, worst_defect);
  return true;
}

// --- criterion 7: sandwich conjugation and transpose-odd split -------------

bool crit7(std::string& detail) {
  SplitMix64 rng(70001);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 1 + Eigen::Index(rng.next_u64() % 6);
    const DensityOperator rho = random_density(n, 2 * n, rng.next_u64());
    const DensityOperator ta = partial_transpose_a(rho);
    const Eigen::Vector2cd e1 = random_qubit(rng), e2 = random_qubit(rng);
    const Matrix lhs = sandwich_a(rho, e1, e2);
    const Matrix rhs = sandwich_a(ta, e2.conjugate(), e1.conjugate());
    const double defect = (lhs - rhs).cwiseAbs().maxCoeff();
    worst = std::max(worst, defect);
    if (defect > 1e-12) {
      detail = fmt("conjugation identity instance %d defect %.3e", i, defect);
      return false;
    }
  }
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 1 + Eigen::Index(rng.next_u64() % 6);
    const DensityOperator rho = random_density(n, 2 * n, rng.next_u64());
    const PTSplit split = pt_split(rho);
    Matrix anti = Matrix::Zero(2 * n, 2 * n);
    anti.topRightCorner(n, n) = Cplx(0.0, 1.0) * split.b;
    anti.bottomLeftCorner(n, n) = Cplx(0.0, -1.0) * split.b;
    const double recon =
        (rho.mat - split.symmetric.mat - anti).cwiseAbs().maxCoeff();
    const double sym_defect = oracle_op_norm(
        split.symmetric.mat -
        naive_partial_transpose(split.symmetric.mat, n));
    const double defect = std::max(recon, sym_defect);
    worst = std::max(worst, defect);
    if (defect > 1e-12) {
      detail = fmt("split identity instance %d defect %.3e", i, defect);
      return false;
    }
  }
  detail = fmt("2x500 identity checks, worst defect %.2e", worst);
  return true;
}

// --- criterion 8: dominance vs the direct eigenvalue oracle ----------------

bool crit8(std::string& detail) {
  SplitMix64 rng(80001);
  int band = 0, checked = 0;
  for (int i = 0; i < 500; ++i) {
    const Eigen::Index n = 2 + Eigen::Index(rng.next_u64() % 5);
    const Eigen::Index xrank = (i % 5 == 0) ? n - 1 : n;
    const Matrix x = 1.5 * random_psd(rng, n, xrank);
    const double scale = std::pow(10.0, 2.0 * rng.uniform() - 1.3);
    const Matrix y =
        scale * random_psd(rng, n, 1 + Eigen::Index(rng.next_u64() % n));
    DominanceReport rep;
    try {
      rep = dominance_check(x, y);
    } catch (const Error& e) {
      detail = fmt("instance %d threw %s", i, errc_name(e.code()));
      return false;
    }
    if (std::abs(rep.norm_value - 1.0) <= 1e-7) {
      ++band;  // logged, not failed
      continue;
    }
    const bool oracle = oracle_min_eig(x - y) >= -1e-9;
    if (rep.ok != oracle) {
      detail = fmt("instance %d disagrees (norm %.9f, oracle min eig %.3e)",
                   i, rep.norm_value, oracle_min_eig(x - y));
      return false;
    }
    ++checked;
  }
  detail = fmt("%d pairs checked, %d inside the decision band (logged)",
               checked, band);
  return true;
}

// --- criterion 9: CLI round trips -------------------------------------------

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -2;
}

bool read_file(const std::filesystem::path& p, std::string& out) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool crit9(const std::string& cli, std::string& detail) {
  if (cli.empty()) {
    detail = "no --cli path given";
    return false;
  }
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::path("acceptance_cli_" + std::to_string(::getpid()));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    detail = "cannot create work directory";
    return false;
  }
  const std::string q = "\"" + cli + "\"";
  const auto at = [&](const char* name) { return (dir / name).string(); };
  bool ok = true;

  // gen -> decompose -> verify chains.
  for (int i = 0; i < 100 && ok; ++i) {
    const bool ptcase = i < 50;
    const int n = ptcase ? 2 + (i % 3) : 2;
    const std::string kind = ptcase ? "pt-invariant" : "ppt";
    const std::string st = at("state.json"), dec = at("dec.json");
    const std::string gen = q + " gen " + kind + " -n " + std::to_string(n) +
                            " --seed " + std::to_string(1000 + i) + " -o " +
                            st + " > /dev/null 2>&1";
    const std::string dc =
        q + " decompose " + st + " -o " + dec + " > /dev/null 2>&1";
    const std::string vf =
        q + " verify " + st + " " + dec + " > /dev/null 2>&1";
    int rc = run_cmd(gen);
    if (rc != 0) {
      detail = fmt("gen %s (i=%d) exited %d", kind.c_str(), i, rc);
      ok = false;
      break;
    }
    rc = run_cmd(dc);
    if (rc != 0) {
      detail = fmt("decompose %s (i=%d) exited %d", kind.c_str(), i, rc);
      ok = false;
      break;
    }
    rc = run_cmd(vf);
    if (rc != 0) {
      detail = fmt("verify %s (i=%d) exited %d", kind.c_str(), i, rc);
      ok = false;
      break;
    }
  }

  // Deterministic experiment CSV: two runs, byte-identical output.
  if (ok) {
    const std::string cfg = at("config.json");
    {
      std::ofstream out(cfg);
      out << R"({"experiments": [
  {"family": "werner", "steps": 11},
  {"family": "werner_bisection", "iters": 12},
  {"family": "pt_perturbation", "dim_b": 2, "seed": 3, "steps": 6, "end": 0.3},
  {"family": "random_certify", "dim_b": 2, "seed": 5, "count": 8},
  {"family": "two_qubit_random", "seed": 7, "count": 10}
]}
)";
    }
    const std::string csv1 = at("run1.csv"), csv2 = at("run2.csv");
    for (const std::string& csv : {csv1, csv2}) {
      const int rc = run_cmd(q + " experiment " + cfg + " " + csv +
                             " > /dev/null 2>&1");
      if (rc != 0) {
        detail = fmt("experiment run exited %d", rc);
        ok = false;
        break;
      }
    }
    if (ok) {
      std::string a, b;
      if (!read_file(csv1, a) || !read_file(csv2, b)) {
        detail = "experiment CSV missing";
        ok = false;
      } else if (a != b) {
        detail = "experiment CSV differs between identical runs";
        ok = false;
      } else if (a.find("family,param,verdict,norm_value,terms,recon_error,"
                        "wall_time") != 0) {
        detail = "experiment CSV header mismatch";
        ok = false;
      } else if (ok) {
        detail = fmt("100 gen/decompose/verify chains exit 0; "
                     "experiment CSV deterministic (%zu bytes)", a.size());
      }
    }
  }

  fs::remove_all(dir, ec);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      criterion = std::atoi(argv[++i]);
    } else if (arg == "--cli" && i + 1 < argc) {
      cli = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--criterion K] [--cli PATH]\n",
                   argv[0]);
      return 64;
    }
  }

  bool all_ok = true;
  const auto run = [&](int k, bool (*f)(std::string&)) {
    if (criterion != 0 && criterion != k) return;
    std::string detail;
    const bool ok = f(detail);
    std::printf("criterion %d: %s - %s\n", k, ok ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  };

  run(1, crit1);
  run(2, crit2);
  run(3, crit3);
  run(4, crit4);
  run(5, crit5);
  run(6, crit6);
  run(7, crit7);
  run(8, crit8);
  if (criterion == 0 ? !cli.empty() : criterion == 9) {
    std::string detail;
    const bool ok = crit9(cli, detail);
    std::printf("criterion 9: %s - %s\n", ok ? "PASS" : "FAIL",
                detail.c_str());
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
