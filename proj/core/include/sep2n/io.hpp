#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sep2n/bipartite.hpp"

namespace sep2n {

/// State file (JSON): {"dims": [2, N], "matrix": [[[re, im], ...], ...],
/// "label": optional string, "seed": optional integer}. The matrix is the
/// row-major 2N x 2N complex matrix with each entry an [re, im] pair.
/// Doubles round-trip exactly (shortest-round-trip serialization).
struct StateFile {
  DensityOperator state{};
  std::optional<std::string> label;
  std::optional<std::uint64_t> seed;
};

StateFile read_state_file(const std::string& path);
void write_state_file(const std::string& path, const DensityOperator& rho,
                      const std::optional<std::string>& label = std::nullopt,
                      const std::optional<std::uint64_t>& seed = std::nullopt);

/// Decomposition file (JSON): {"dims": [2, N], "terms": [{"weight": w,
/// "e": [[re,im], [re,im]], "f": [[re,im] x N]}, ...], "label": optional}.
struct DecompositionFile {
  SeparableDecomposition decomposition;
  std::optional<std::string> label;
};

DecompositionFile read_decomposition_file(const std::string& path);
void write_decomposition_file(
    const std::string& path, const SeparableDecomposition& dec,
    const std::optional<std::string>& label = std::nullopt);

/// Serialized forms (used by the file writers; exposed for tests).
std::string state_to_json(const DensityOperator& rho,
                          const std::optional<std::string>& label,
                          const std::optional<std::uint64_t>& seed);
std::string decomposition_to_json(const SeparableDecomposition& dec,
                                  const std::optional<std::string>& label);
StateFile state_from_json(const std::string& text);
DecompositionFile decomposition_from_json(const std::string& text);

/// %.17g formatting used for CSV numeric fields.
std::string format_g17(double x);

}  // namespace sep2n
