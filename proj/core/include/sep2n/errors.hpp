#pragma once

#include <stdexcept>
#include <string>

namespace sep2n {

/// Machine-checkable failure categories. Exceptions carry one of these so
/// tests and the CLI can react to the *kind* of failure without parsing
/// messages.
enum class Errc {
  not_square,
  not_hermitian,
  not_psd,
  not_finite,
  dimension_mismatch,
  zero_vector,
  invalid_argument,

  subspace_too_small,
  numerical_failure,

  not_in_range,
  not_in_kernel,
  zero_denominator,
  non_positive_overlap,
  structure_violation,
  support_not_reduced,

  not_pt_invariant,
  realization_failed,
  rank_out_of_scope,

  not_symmetric_unitary,
  twisted_invariance_failed,

  degenerate_quadratic,
  inconsistent_shared_factor,
  neither_case_matches,

  parse_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace sep2n
