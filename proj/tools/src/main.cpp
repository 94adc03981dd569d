// sep2n command-line tool: separability checks, constructive decompositions,
// state generation and batch experiments for 2 x N bipartite states.
//
// Exit codes (stable):
//   0   success / separable / PPT
//   1   entangled, failed verification, or inconclusive-as-negative
//   2   ambiguous (inside the tolerance band)
//   64  usage error (bad flags or arguments)
//   65  data error (unreadable files, inputs violating a method's contract)
//   70  internal numerical failure

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sep2n/sep2n.hpp"

namespace {

using nlohmann::json;
using sep2n::AStrategy;
using sep2n::CertificateReport;
using sep2n::CertMethod;
using sep2n::CertVerdict;
using sep2n::DensityOperator;
using sep2n::Errc;
using sep2n::Matrix;
using sep2n::SeparableDecomposition;
using sep2n::ToleranceConfig;
using sep2n::TwoQubitStatus;
using sep2n::TwoQubitVerdict;
using sep2n::VerifyReport;

int exit_code_for(const sep2n::Error& e) {
  switch (e.code()) {
    // Inputs that are malformed or violate the contract of the requested
    // operation: the data is at fault, not the machinery.
    case Errc::parse_error:
    case Errc::not_square:
    case Errc::not_hermitian:
    case Errc::not_psd:
    case Errc::not_finite:
    case Errc::dimension_mismatch:
    case Errc::zero_vector:
    case Errc::invalid_argument:
    case Errc::not_pt_invariant:
    case Errc::rank_out_of_scope:
    case Errc::not_symmetric_unitary:
    case Errc::twisted_invariance_failed:
      return 65;
    default:
      return 70;
  }
}

const char* cert_method_name(CertMethod m) {
  switch (m) {
    case CertMethod::quick_norm_product: return "quick_norm_product";
    case CertMethod::envelope_default: return "envelope_default";
    case CertMethod::envelope_optimized: return "envelope_optimized";
  }
  return "unknown";
}

const char* two_qubit_name(TwoQubitStatus s) {
  switch (s) {
    case TwoQubitStatus::separable: return "separable";
    case TwoQubitStatus::entangled: return "entangled";
    case TwoQubitStatus::ambiguous: return "ambiguous";
  }
  return "unknown";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) sep2n::fail(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double min_pt_eigenvalue(const DensityOperator& rho) {
  return sep2n::eig_hermitian(sep2n::partial_transpose_a(rho).mat).values(0);
}

// ---------------------------------------------------------------------------
// ppt

int cmd_ppt(const std::string& state_path, const ToleranceConfig& tol) {
  const sep2n::StateFile sf = sep2n::read_state_file(state_path);
  const double mn = min_pt_eigenvalue(sf.state);
  std::cout << "min_pt_eigenvalue: " << sep2n::format_g17(mn) << "\n";
  if (mn < -tol.psd_tol) {
    std::cout << "verdict: npt\n";
    return 1;
  }
  if (mn <= tol.psd_tol) {
    // The eigenvalue sits inside the two-sided noise band around zero:
    // strict positivity cannot be certified at this tolerance.
    std::cout << "verdict: ambiguous\n";
    return 2;
  }
  std::cout << "verdict: ppt\n";
  return 0;
}

// ---------------------------------------------------------------------------
// decompose

int cmd_decompose(const std::string& state_path, std::string method,
                  const std::string& out_path, bool optimize_a,
                  const ToleranceConfig& tol) {
  const sep2n::StateFile sf = sep2n::read_state_file(state_path);
  const DensityOperator& rho = sf.state;

  if (method == "auto") {
    // PPT is necessary for separability, so an unambiguously negative PT
    // eigenvalue settles the question before any constructive method runs.
    const double mn = min_pt_eigenvalue(rho);
    if (mn < -tol.psd_tol) {
      std::cout << "method: auto\n"
                << "min_pt_eigenvalue: " << sep2n::format_g17(mn) << "\n"
                << "verdict: entangled\n";
      return 1;
    }
    if (rho.dim_b == 2) {
      method = "peres2x2";
    } else if (sep2n::pt_defect(rho) <= tol.recon_tol * rho.trace()) {
      method = "theorem2";
    } else if (sep2n::rank_kernel_range(rho.mat, tol).rank <= rho.dim_b) {
      method = "rankN";
    } else {
      method = "certificate";
    }
  }
  std::cout << "method: " << method << "\n";

  std::optional<SeparableDecomposition> dec;
  if (method == "peres2x2") {
    const TwoQubitVerdict v = sep2n::decompose_2x2(rho, tol);
    std::cout << "min_pt_eigenvalue: "
              << sep2n::format_g17(v.min_pt_eigenvalue) << "\n";
    if (v.status == TwoQubitStatus::entangled) {
      std::cout << "verdict: entangled\n";
      return 1;
    }
    if (v.status == TwoQubitStatus::ambiguous) {
      std::cout << "verdict: ambiguous\n";
      return 2;
    }
    dec = v.decomposition;
  } else if (method == "theorem2") {
    dec = sep2n::decompose_pt_invariant(rho, tol);
  } else if (method == "rankN") {
    dec = sep2n::decompose_rank_n(rho, tol);
  } else {  // certificate
    const CertificateReport rep = sep2n::certify(
        rho, optimize_a ? AStrategy::optimized : AStrategy::unit, tol);
    std::cout << "norm_value: " << sep2n::format_g17(rep.norm_value) << "\n"
              << "certificate_method: " << cert_method_name(rep.method) << "\n";
    if (rep.verdict != CertVerdict::certified_separable) {
      std::cout << "verdict: inconclusive\n";
      return 1;
    }
    dec = rep.decomposition;
  }

  // Every separable exit re-verifies the construction, so "exit 0" and
  // "passes the verify subcommand" are the same statement.
  const VerifyReport check = sep2n::verify_decomposition(rho, *dec, tol);
  std::cout << "terms: " << dec->terms.size() << "\n"
            << "recon_error: " << sep2n::format_g17(check.recon_error) << "\n";
  if (!check.ok)
    sep2n::fail(Errc::numerical_failure, "decomposition failed verification");
  std::cout << "verdict: separable\n";
  if (!out_path.empty()) {
    sep2n::write_decomposition_file(out_path, *dec, sf.label);
    std::cout << "wrote: " << out_path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// certify

int cmd_certify(const std::string& state_path, bool optimize_a, bool quick,
                const std::string& out_path, const ToleranceConfig& tol) {
  const sep2n::StateFile sf = sep2n::read_state_file(state_path);
  const CertificateReport rep =
      quick ? sep2n::quick_certify(sf.state, tol)
            : sep2n::certify(sf.state,
                             optimize_a ? AStrategy::optimized : AStrategy::unit,
                             tol);
  const bool certified = rep.verdict == CertVerdict::certified_separable;
  std::cout << "norm_value: " << sep2n::format_g17(rep.norm_value) << "\n"
            << "method: " << cert_method_name(rep.method) << "\n"
            << "verdict: "
            << (certified ? "certified_separable" : "inconclusive") << "\n";
  if (certified && rep.decomposition) {
    std::cout << "terms: " << rep.decomposition->terms.size() << "\n";
    if (!out_path.empty()) {
      sep2n::write_decomposition_file(out_path, *rep.decomposition, sf.label);
      std::cout << "wrote: " << out_path << "\n";
    }
  }
  return certified ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& state_path, const std::string& dec_path,
               const ToleranceConfig& tol) {
  const sep2n::StateFile sf = sep2n::read_state_file(state_path);
  const sep2n::DecompositionFile df = sep2n::read_decomposition_file(dec_path);
  if (df.decomposition.dim_b != sf.state.dim_b)
    sep2n::fail(Errc::dimension_mismatch,
                "state and decomposition dimensions differ");
  const VerifyReport rep =
      sep2n::verify_decomposition(sf.state, df.decomposition, tol);
  std::cout << "terms: " << df.decomposition.terms.size() << "\n"
            << "min_weight: " << sep2n::format_g17(rep.min_weight) << "\n"
            << "recon_error: " << sep2n::format_g17(rep.recon_error) << "\n"
            << "verdict: " << (rep.ok ? "ok" : "mismatch") << "\n";
  return rep.ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const std::string& kind, Eigen::Index dim_b, std::uint64_t seed,
            Eigen::Index rank, Eigen::Index terms, double werner_p,
            const std::string& out_path, const std::string& dec_out_path) {
  DensityOperator rho;
  std::optional<std::uint64_t> stored_seed = seed;
  if (kind == "density") {
    rho = sep2n::random_density(dim_b, rank == 0 ? 2 * dim_b : rank, seed);
  } else if (kind == "separable") {
    const sep2n::SeparableSample s =
        sep2n::random_separable(dim_b, terms == 0 ? 2 * dim_b : terms, seed);
    rho = s.state;
    if (!dec_out_path.empty()) {
      sep2n::write_decomposition_file(dec_out_path, s.decomposition,
                                      std::string(kind));
      std::cout << "wrote: " << dec_out_path << "\n";
    }
  } else if (kind == "pt-invariant") {
    rho = sep2n::random_pt_invariant(dim_b, seed);
  } else if (kind == "ppt") {
    rho = sep2n::random_ppt(dim_b, seed);
  } else if (kind == "npt") {
    rho = sep2n::random_npt(dim_b, seed);
  } else {  // werner (kind is validated by the option parser)
    rho = sep2n::werner(werner_p);
    stored_seed = std::nullopt;  // the family is deterministic in p
  }
  sep2n::write_state_file(out_path, rho, std::string(kind), stored_seed);
  std::cout << "dims: 2x" << rho.dim_b << "\n"
            << "wrote: " << out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct CsvRow {
  std::string family;
  double param = 0.0;
  std::string verdict;
  double norm_value = 0.0;
  std::size_t terms = 0;
  double recon_error = 0.0;
  double wall_time = 0.0;
};

std::string csv_line(const CsvRow& r) {
  std::ostringstream ss;
  ss << r.family << ',' << sep2n::format_g17(r.param) << ',' << r.verdict
     << ',' << sep2n::format_g17(r.norm_value) << ',' << r.terms << ','
     << sep2n::format_g17(r.recon_error) << ','
     << sep2n::format_g17(r.wall_time);
  return ss.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - t0_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point t0_ = Clock::now();
};

void attach_decomposition(CsvRow& row, const DensityOperator& rho,
                          const std::optional<SeparableDecomposition>& dec,
                          const ToleranceConfig& tol) {
  if (!dec) return;
  row.terms = dec->terms.size();
  row.recon_error = sep2n::verify_decomposition(rho, *dec, tol).recon_error;
}

void fill_two_qubit_row(CsvRow& row, const DensityOperator& rho,
                        const ToleranceConfig& tol, TwoQubitStatus* status) {
  try {
    const TwoQubitVerdict v = sep2n::decompose_2x2(rho, tol);
    row.verdict = two_qubit_name(v.status);
    row.norm_value = v.min_pt_eigenvalue;
    attach_decomposition(row, rho, v.decomposition, tol);
    if (status) *status = v.status;
  } catch (const sep2n::Error& e) {
    row.verdict = sep2n::errc_name(e.code());
    if (status) *status = TwoQubitStatus::ambiguous;
  }
}

void fill_certify_row(CsvRow& row, const DensityOperator& rho, bool optimize,
                      const ToleranceConfig& tol) {
  try {
    const CertificateReport rep = sep2n::certify(
        rho, optimize ? AStrategy::optimized : AStrategy::unit, tol);
    row.norm_value = rep.norm_value;
    row.verdict = rep.verdict == CertVerdict::certified_separable
                      ? "certified_separable"
                      : "inconclusive";
    attach_decomposition(row, rho, rep.decomposition, tol);
  } catch (const sep2n::Error& e) {
    row.verdict = sep2n::errc_name(e.code());
  }
}

// family "werner": sweep of the two-qubit decision over p in [start, end].
void run_werner_sweep(const json& cfg, bool timing, const ToleranceConfig& tol,
                      std::vector<CsvRow>& rows) {
  const double lo = cfg.value("start", 0.0);
  const double hi = cfg.value("end", 1.0);
  const int steps = cfg.value("steps", 11);
  if (steps < 1) sep2n::fail(Errc::parse_error, "werner sweep needs steps >= 1");
  for (int i = 0; i < steps; ++i) {
    const double p = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    CsvRow row;
    row.family = "werner";
    row.param = p;
    const Stopwatch sw;
    fill_two_qubit_row(row, sep2n::werner(p), tol, nullptr);
    if (timing) row.wall_time = sw.seconds();
    rows.push_back(row);
  }
}

// family "werner_bisection": locate the separable/entangled threshold of the
// Werner family by bisection on the constructive two-qubit verdict. Each
// midpoint evaluation is one row; non-separable (including ambiguous)
// midpoints move the upper end down.
void run_werner_bisection(const json& cfg, bool timing,
                          const ToleranceConfig& tol,
                          std::vector<CsvRow>& rows) {
  double lo = cfg.value("lo", 0.2);
  double hi = cfg.value("hi", 0.5);
  const int iters = cfg.value("iters", 20);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    CsvRow row;
    row.family = "werner_bisection";
    row.param = mid;
    const Stopwatch sw;
    TwoQubitStatus status = TwoQubitStatus::ambiguous;
    fill_two_qubit_row(row, sep2n::werner(mid), tol, &status);
    if (timing) row.wall_time = sw.seconds();
    rows.push_back(row);
    if (status == TwoQubitStatus::separable) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

// family "pt_perturbation": certification as a PT-invariant base state is
// pushed along a transposition-odd direction. The base is a seeded random
// PT-invariant state; the direction is the antisymmetric unit tensored with
// a seeded unit-norm Hermitian B-side matrix; param is the step size.
void run_pt_perturbation(const json& cfg, bool timing,
                         const ToleranceConfig& tol,
                         std::vector<CsvRow>& rows) {
  const auto n = static_cast<Eigen::Index>(cfg.value("dim_b", 2));
  const auto seed = static_cast<std::uint64_t>(cfg.value("seed", 1));
  const double lo = cfg.value("start", 0.0);
  const double hi = cfg.value("end", 0.5);
  const int steps = cfg.value("steps", 11);
  const bool optimize = cfg.value("optimize", false);
  if (steps < 1)
    sep2n::fail(Errc::parse_error, "pt_perturbation needs steps >= 1");

  const DensityOperator base = sep2n::random_pt_invariant(n, seed);
  sep2n::SplitMix64 rng(seed + 1);
  Matrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = rng.cnormal();
  Matrix dir = 0.5 * (g + g.adjoint().eval());
  const double dn = sep2n::operator_norm(dir);
  if (dn < 1e-300)
    sep2n::fail(Errc::numerical_failure, "degenerate perturbation direction");
  dir /= dn;
  const Eigen::Matrix2cd au = sep2n::antisymmetric_unit();

  for (int i = 0; i < steps; ++i) {
    const double eps = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    Matrix m = base.mat;
    m.topRightCorner(n, n) += eps * au(0, 1) * dir;
    m.bottomLeftCorner(n, n) += eps * au(1, 0) * dir;
    const DensityOperator state = DensityOperator::create(n, std::move(m));
    CsvRow row;
    row.family = "pt_perturbation";
    row.param = eps;
    const Stopwatch sw;
    const double mn = sep2n::eig_hermitian(state.mat).values(0);
    if (mn < -tol.psd_tol) {
      row.verdict = "not_psd";
      row.norm_value = mn;
    } else {
      fill_certify_row(row, state, optimize, tol);
    }
    if (timing) row.wall_time = sw.seconds();
    rows.push_back(row);
  }
}

// family "random_certify": certification rate over seeded random densities;
// param is the instance index, instance i uses seed + i.
void run_random_certify(const json& cfg, bool timing,
                        const ToleranceConfig& tol, std::vector<CsvRow>& rows) {
  const auto n = static_cast<Eigen::Index>(cfg.value("dim_b", 2));
  const auto seed = static_cast<std::uint64_t>(cfg.value("seed", 1));
  const int count = cfg.value("count", 20);
  const auto rank = static_cast<Eigen::Index>(cfg.value("rank", 0));
  const bool optimize = cfg.value("optimize", false);
  for (int i = 0; i < count; ++i) {
    const DensityOperator rho =
        sep2n::random_density(n, rank == 0 ? 2 * n : rank, seed + i);
    CsvRow row;
    row.family = "random_certify";
    row.param = i;
    const Stopwatch sw;
    fill_certify_row(row, rho, optimize, tol);
    if (timing) row.wall_time = sw.seconds();
    rows.push_back(row);
  }
}

// family "two_qubit_random": the constructive two-qubit decision over seeded
// random densities; param is the instance index.
void run_two_qubit_random(const json& cfg, bool timing,
                          const ToleranceConfig& tol,
                          std::vector<CsvRow>& rows) {
  const auto seed = static_cast<std::uint64_t>(cfg.value("seed", 1));
  const int count = cfg.value("count", 20);
  const auto rank = static_cast<Eigen::Index>(cfg.value("rank", 0));
  for (int i = 0; i < count; ++i) {
    const DensityOperator rho =
        sep2n::random_density(2, rank == 0 ? 4 : rank, seed + i);
    CsvRow row;
    row.family = "two_qubit_random";
    row.param = i;
    const Stopwatch sw;
    fill_two_qubit_row(row, rho, tol, nullptr);
    if (timing) row.wall_time = sw.seconds();
    rows.push_back(row);
  }
}

int cmd_experiment(const std::string& config_path, const std::string& csv_path,
                   bool timing, const ToleranceConfig& tol) {
  std::vector<CsvRow> rows;
  try {
    const json cfg = json::parse(read_text(config_path), nullptr, false);
    if (cfg.is_discarded())
      sep2n::fail(Errc::parse_error, "invalid JSON in " + config_path);
    if (!cfg.is_object() || !cfg.contains("experiments") ||
        !cfg["experiments"].is_array())
      sep2n::fail(Errc::parse_error,
                  "config needs a top-level \"experiments\" array");
    for (const json& e : cfg["experiments"]) {
      if (!e.is_object() || !e.contains("family") || !e["family"].is_string())
        sep2n::fail(Errc::parse_error,
                    "each experiment needs a \"family\" string");
      const std::string family = e["family"].get<std::string>();
      if (family == "werner") {
        run_werner_sweep(e, timing, tol, rows);
      } else if (family == "werner_bisection") {
        run_werner_bisection(e, timing, tol, rows);
      } else if (family == "pt_perturbation") {
        run_pt_perturbation(e, timing, tol, rows);
      } else if (family == "random_certify") {
        run_random_certify(e, timing, tol, rows);
      } else if (family == "two_qubit_random") {
        run_two_qubit_random(e, timing, tol, rows);
      } else {
        sep2n::fail(Errc::parse_error, "unknown experiment family: " + family);
      }
    }
  } catch (const json::exception& e) {
    sep2n::fail(Errc::parse_error, std::string("experiment config: ") + e.what());
  }

  std::ofstream out(csv_path, std::ios::binary);
  if (!out) sep2n::fail(Errc::parse_error, "cannot open " + csv_path);
  out << "family,param,verdict,norm_value,terms,recon_error,wall_time\n";
  for (const CsvRow& r : rows) out << csv_line(r) << "\n";
  out.close();
  if (!out) sep2n::fail(Errc::parse_error, "write failure on " + csv_path);
  std::cout << "rows: " << rows.size() << "\n"
            << "wrote: " << csv_path << "\n";
  return 0;
}

void add_tolerance_flags(CLI::App* cmd, ToleranceConfig* tol) {
  cmd->add_option("--rank-tol", tol->rank_tol,
                  "relative eigenvalue cutoff for rank/kernel decisions")
      ->capture_default_str();
  cmd->add_option("--psd-tol", tol->psd_tol,
                  "positivity slack: eigenvalues in [-psd_tol, 0] count as 0")
      ->capture_default_str();
  cmd->add_option("--recon-tol", tol->recon_tol,
                  "reconstruction budget relative to the trace")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "separability checks and constructive decompositions for density "
      "operators on C^2 (x) C^N"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  ToleranceConfig tol;

  // ppt ----------------------------------------------------------------
  auto* ppt = app.add_subcommand(
      "ppt", "min eigenvalue of the partial transpose; exit 0 PPT, 1 NPT, "
             "2 inside the tolerance band");
  std::string ppt_state;
  ppt->add_option("state", ppt_state, "state file (JSON)")->required();
  add_tolerance_flags(ppt, &tol);

  // decompose ------------------------------------------------------------
  auto* dec = app.add_subcommand(
      "decompose", "construct an explicit separable decomposition; exit 0 "
                   "separable (output verifies), 1 entangled/inconclusive, "
                   "2 ambiguous");
  std::string dec_state, dec_out;
  std::string dec_method = "auto";
  bool dec_optimize = false;
  dec->add_option("state", dec_state, "state file (JSON)")->required();
  dec->add_option("-o,--out", dec_out, "write the decomposition here (JSON)");
  dec->add_option("--method", dec_method,
                  "auto: peres2x2 for N=2, theorem2 for PT-invariant states, "
                  "rankN for rank <= N, certificate otherwise")
      ->check(CLI::IsMember(
          {"auto", "theorem2", "rankN", "peres2x2", "certificate"}))
      ->capture_default_str();
  dec->add_flag("--optimize-a", dec_optimize,
                "optimize the envelope weights (certificate method only)");
  add_tolerance_flags(dec, &tol);

  // certify --------------------------------------------------------------
  auto* cert = app.add_subcommand(
      "certify", "sufficient separability certificate; exit 0 certified "
                 "(with decomposition), 1 inconclusive");
  std::string cert_state, cert_out;
  bool cert_optimize = false, cert_quick = false;
  cert->add_option("state", cert_state, "state file (JSON)")->required();
  cert->add_option("-o,--out", cert_out,
                   "write the decomposition here when certified (JSON)");
  cert->add_flag("--optimize-a", cert_optimize,
                 "coordinate-descent on the envelope weights");
  cert->add_flag("--quick", cert_quick,
                 "norm-product shortcut ||(rho+rho^TA)^-1|| ||rho-rho^TA||");
  add_tolerance_flags(cert, &tol);

  // verify ---------------------------------------------------------------
  auto* ver = app.add_subcommand(
      "verify", "check a decomposition file against a state file; exit 0 ok, "
                "1 mismatch");
  std::string ver_state, ver_dec;
  ver->add_option("state", ver_state, "state file (JSON)")->required();
  ver->add_option("decomposition", ver_dec, "decomposition file (JSON)")
      ->required();
  add_tolerance_flags(ver, &tol);

  // gen --------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a state file");
  std::string gen_kind, gen_out, gen_dec_out;
  std::uint64_t gen_seed = 1;
  Eigen::Index gen_n = 2, gen_rank = 0, gen_terms = 0;
  double gen_p = 0.0;
  gen->add_option("kind", gen_kind,
                  "density | separable | pt-invariant | ppt | npt | werner")
      ->required()
      ->check(CLI::IsMember(
          {"density", "separable", "pt-invariant", "ppt", "npt", "werner"}));
  gen->add_option("-o,--out", gen_out, "output state file (JSON)")->required();
  auto* gen_n_opt =
      gen->add_option("-n,--dim-b", gen_n, "B-side dimension N")
          ->check(CLI::PositiveNumber)
          ->capture_default_str();
  gen->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
  gen->add_option("--rank", gen_rank,
                  "rank for kind=density (default: full rank 2N)");
  gen->add_option("--terms", gen_terms,
                  "product terms for kind=separable (default: 2N)");
  auto* gen_p_opt = gen->add_option("-p", gen_p, "werner mixing parameter")
                        ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--decomposition-out", gen_dec_out,
                  "for kind=separable: also write the generating "
                  "decomposition here");

  // experiment -----------------------------------------------------------
  auto* exp = app.add_subcommand(
      "experiment", "batch sweeps from a JSON config; writes one CSV row per "
                    "instance (sequential, deterministic order)");
  std::string exp_cfg, exp_csv;
  bool exp_timing = false;
  exp->add_option("config", exp_cfg, "experiment config (JSON)")->required();
  exp->add_option("csv", exp_csv, "output CSV path")->required();
  exp->add_flag("--timing", exp_timing,
                "fill the wall_time column (off by default so identical "
                "seeds give byte-identical CSV)");
  add_tolerance_flags(exp, &tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (app.got_subcommand(ppt)) return cmd_ppt(ppt_state, tol);
    if (app.got_subcommand(dec))
      return cmd_decompose(dec_state, dec_method, dec_out, dec_optimize, tol);
    if (app.got_subcommand(cert))
      return cmd_certify(cert_state, cert_optimize, cert_quick, cert_out, tol);
    if (app.got_subcommand(ver)) return cmd_verify(ver_state, ver_dec, tol);
    if (app.got_subcommand(gen)) {
      if (gen_kind == "werner") {
        if (gen_p_opt->count() == 0) {
          std::cerr << "gen: kind=werner requires -p\n";
          return 64;
        }
        if (gen_n_opt->count() > 0 && gen_n != 2) {
          std::cerr << "gen: the werner family is fixed at N = 2\n";
          return 64;
        }
      }
      return cmd_gen(gen_kind, gen_n, gen_seed, gen_rank, gen_terms, gen_p,
                     gen_out, gen_dec_out);
    }
    if (app.got_subcommand(exp))
      return cmd_experiment(exp_cfg, exp_csv, exp_timing, tol);
  } catch (const sep2n::Error& e) {
    std::cerr << "sep2n: error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "sep2n: internal error: " << e.what() << "\n";
    return 70;
  }
  return 64;  // unreachable: require_subcommand(1) guarantees a match
}
