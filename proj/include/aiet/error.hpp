#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aiet {

enum class ErrorCode {
  malformed_input,
  config_invalid,
  reducible_permutation,
  closure_violation,
  nonpositive_length,
  out_of_domain,
  precondition,
  tie,
  degenerate_lengths,
  keane_failure,
  cap_exceeded,
  insufficient_length,
  insufficient_path,
  singular_matrix,
  nonpositive_coordinate,
  zero_vector,
  validation_failure,
  orthogonality_violation,
  max_steps_exceeded,
  io_failure,
};

/// Machine-readable name, e.g. "closure-violation".
std::string_view to_string(ErrorCode code);

/// Process exit status used by the CLI: 2 config, 3 precondition,
/// 4 non-convergence, 5 io.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> step = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  /// Elementary induction step at which the failure happened, if any.
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> step_;
};

/// Re-throws `e` with its step index shifted to an absolute position.
[[noreturn]] void rethrow_at_step(const Error& e, std::size_t step);

/// Ties and degenerate lengths met while following a path are reported as
/// keane-failure (same message and step); other errors pass through.
[[noreturn]] void rethrow_as_keane_failure(const Error& e);

}  // namespace aiet
