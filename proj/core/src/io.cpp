#include "sep2n/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sep2n {

namespace {

using nlohmann::json;

json complex_to_json(const Cplx& z) { return json::array({z.real(), z.imag()}); }

Cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(Errc::parse_error, "complex entries must be [re, im] number pairs");
  return Cplx(j[0].get<double>(), j[1].get<double>());
}

Eigen::Index dims_from_json(const json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 2)
    fail(Errc::parse_error, "missing or malformed \"dims\" (expect [2, N])");
  const json& d = j["dims"];
  if (!d[0].is_number_integer() || !d[1].is_number_integer())
    fail(Errc::parse_error, "\"dims\" entries must be integers");
  if (d[0].get<long long>() != 2)
    fail(Errc::parse_error, "first factor must have dimension 2");
  const long long n = d[1].get<long long>();
  if (n < 1) fail(Errc::parse_error, "B dimension must be >= 1");
  return static_cast<Eigen::Index>(n);
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Vector vector_from_json(const json& j, Eigen::Index expect, const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expect)
    fail(Errc::parse_error,
         std::string(what) + " must be an array of " + std::to_string(expect) +
             " complex entries");
  Vector v(expect);
  for (Eigen::Index i = 0; i < expect; ++i) v(i) = complex_from_json(j[i]);
  return v;
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::parse_error, "invalid JSON");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::parse_error, "cannot write " + path);
  out << text;
  if (!out) fail(Errc::parse_error, "short write to " + path);
}

}  // namespace

std::string state_to_json(const DensityOperator& rho,
                          const std::optional<std::string>& label,
                          const std::optional<std::uint64_t>& seed) {
  json j;
  j["dims"] = json::array({2, rho.dim_b});
  json rows = json::array();
  for (Eigen::Index r = 0; r < rho.mat.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rho.mat.cols(); ++c)
      row.push_back(complex_to_json(rho.mat(r, c)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  if (label) j["label"] = *label;
  if (seed) j["seed"] = *seed;
  return j.dump(2) + "\n";
}

StateFile state_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail(Errc::parse_error, "state file must be an object");
  const Eigen::Index n = dims_from_json(j);
  const Eigen::Index d = 2 * n;
  if (!j.contains("matrix") || !j["matrix"].is_array() ||
      static_cast<Eigen::Index>(j["matrix"].size()) != d)
    fail(Errc::parse_error, "\"matrix\" must have 2N rows");
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = j["matrix"][r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      fail(Errc::parse_error, "matrix rows must have 2N entries");
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = complex_from_json(row[c]);
  }
  StateFile out;
  out.state = DensityOperator::create(n, std::move(m));
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail(Errc::parse_error, "\"label\" must be a string");
    out.label = j["label"].get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      fail(Errc::parse_error, "\"seed\" must be an integer");
    out.seed = j["seed"].get<std::uint64_t>();
  }
  return out;
}

std::string decomposition_to_json(const SeparableDecomposition& dec,
                                  const std::optional<std::string>& label) {
  json j;
  j["dims"] = json::array({2, dec.dim_b});
  json terms = json::array();
  for (const Term& t : dec.terms) {
    json jt;
    jt["weight"] = t.weight;
    Vector e(2);
    e << t.pv.e(0), t.pv.e(1);
    jt["e"] = vector_to_json(e);
    jt["f"] = vector_to_json(t.pv.f);
    terms.push_back(std::move(jt));
  }
  j["terms"] = std::move(terms);
  if (label) j["label"] = *label;
  return j.dump(2) + "\n";
}

DecompositionFile decomposition_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object())
    fail(Errc::parse_error, "decomposition file must be an object");
  const Eigen::Index n = dims_from_json(j);
  if (!j.contains("terms") || !j["terms"].is_array())
    fail(Errc::parse_error, "missing \"terms\" array");
  DecompositionFile out;
  out.decomposition.dim_b = n;
  for (const json& jt : j["terms"]) {
    if (!jt.is_object() || !jt.contains("weight") || !jt["weight"].is_number())
      fail(Errc::parse_error, "terms need a numeric \"weight\"");
    Term t;
    // Sign and size of the weight are a *verification* question, not a
    // parse question: a file with a bad weight must load so verify can
    // report the mismatch.
    t.weight = jt["weight"].get<double>();
    if (!jt.contains("e") || !jt.contains("f"))
      fail(Errc::parse_error, "terms need \"e\" and \"f\" factors");
    const Vector e = vector_from_json(jt["e"], 2, "\"e\"");
    t.pv.e << e(0), e(1);
    t.pv.f = vector_from_json(jt["f"], n, "\"f\"");
    if (t.pv.e.norm() < 1e-300 || t.pv.f.norm() < 1e-300)
      fail(Errc::parse_error, "term factors must be nonzero");
    out.decomposition.terms.push_back(std::move(t));
  }
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail(Errc::parse_error, "\"label\" must be a string");
    out.label = j["label"].get<std::string>();
  }
  return out;
}

StateFile read_state_file(const std::string& path) {
  return state_from_json(slurp(path));
}

void write_state_file(const std::string& path, const DensityOperator& rho,
                      const std::optional<std::string>& label,
                      const std::optional<std::uint64_t>& seed) {
  spill(path, state_to_json(rho, label, seed));
}

DecompositionFile read_decomposition_file(const std::string& path) {
  return decomposition_from_json(slurp(path));
}

void write_decomposition_file(const std::string& path,
                              const SeparableDecomposition& dec,
                              const std::optional<std::string>& label) {
  spill(path, decomposition_to_json(dec, label));
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

}  // namespace sep2n
