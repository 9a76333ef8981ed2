#include "aiet/error.hpp"

namespace aiet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_input: return "malformed-input";
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::reducible_permutation: return "reducible-permutation";
    case ErrorCode::closure_violation: return "closure-violation";
    case ErrorCode::nonpositive_length: return "nonpositive-length";
    case ErrorCode::out_of_domain: return "out-of-domain";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::tie: return "tie";
    case ErrorCode::degenerate_lengths: return "degenerate-lengths";
    case ErrorCode::keane_failure: return "keane-failure";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::insufficient_length: return "insufficient-length";
    case ErrorCode::insufficient_path: return "insufficient-path";
    case ErrorCode::singular_matrix: return "singular-matrix";
    case ErrorCode::nonpositive_coordinate: return "nonpositive-coordinate";
    case ErrorCode::zero_vector: return "zero-vector";
    case ErrorCode::validation_failure: return "validation-failure";
    case ErrorCode::orthogonality_violation: return "orthogonality-violation";
    case ErrorCode::max_steps_exceeded: return "max-steps-exceeded";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_input:
    case ErrorCode::config_invalid:
      return 2;
    case ErrorCode::cap_exceeded:
    case ErrorCode::validation_failure:
    case ErrorCode::max_steps_exceeded:
      return 4;
    case ErrorCode::io_failure:
      return 5;
    default:
      return 3;
  }
}

namespace {

std::string with_step(const std::string& message, std::optional<std::size_t> step) {
  if (!step) return message;
  return message + " (step " + std::to_string(*step) + ")";
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> step)
    : std::runtime_error(std::string(to_string(code)) + ": " + with_step(message, step)),
      code_(code),
      step_(step) {}

namespace {

std::string bare_message(const Error& e) {
  std::string what = e.what();
  // strip the "<code>: " prefix added by the constructor
  auto colon = what.find(": ");
  std::string message = colon == std::string::npos ? what : what.substr(colon + 2);
  auto paren = message.rfind(" (step ");
  if (paren != std::string::npos && e.step()) message = message.substr(0, paren);
  return message;
}

}  // namespace

void rethrow_at_step(const Error& e, std::size_t step) { throw Error(e.code(), bare_message(e), step); }

void rethrow_as_keane_failure(const Error& e) {
  if (e.code() == ErrorCode::tie || e.code() == ErrorCode::degenerate_lengths)
    throw Error(ErrorCode::keane_failure, bare_message(e), e.step());
  throw e;
}

}  // namespace aiet
