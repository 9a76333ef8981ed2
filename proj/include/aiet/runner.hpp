#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aiet/serialize.hpp"

namespace aiet {

inline constexpr const char* toolkit_version = "0.1.0";

/// One experiment. Numbers are kept as strings ("p/q", decimals, or
/// "a+b*sqrt5") until the command fixes their scalar type.
struct ExperimentConfig {
  std::string command;  ///< induce | solve | lyapunov | ecs | bcc | cone-trace | verify
  std::string top;
  std::string bottom;
  std::vector<std::string> alphabet;  ///< empty: the top row order
  std::vector<std::string> lengths;
  std::vector<std::string> omega;      ///< log-slopes
  std::vector<std::string> slopes;     ///< e^omega, rational mode induce
  std::vector<std::string> candidate;  ///< verify: lengths of the AIET under test
  Mode mode = Mode::floating;
  std::string precision = "double";  ///< double | high
  std::string tolerance = "1e-10";
  std::string closure_tolerance = "1e-9";
  std::size_t max_steps = 10000;
  std::size_t depth = 100;
  std::size_t iterations = 100000;
  std::size_t ecs_depth = 0;  ///< bcc: 0 picks 2 * depth + 100
  std::size_t verify_depth = 0;
  std::uint64_t seed = 1;
  double V = 10.0;
  std::size_t N = 2;
  std::string output;  ///< RunRecord JSON path (empty: none)
  std::string trace;   ///< CSV trace path (empty: none)

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const json& j);
/// Throws config-invalid on unknown commands, dimension mismatches, bad numbers.
void validate_config(const ExperimentConfig& c);

struct RunRecord {
  json config;
  std::string version = toolkit_version;
  double wall_time = 0.0;
  std::string status = "success";  ///< success | error
  std::optional<ErrorCode> error_code;
  std::string error_message;
  std::optional<std::size_t> error_step;
  json result = json::object();
  std::string csv_trace;   ///< empty when the command has no trace
  std::string plot_trace;  ///< "x y" columns

  int exit_status() const { return error_code ? exit_code(*error_code) : 0; }
};

json to_json(const RunRecord& r);

/// Dispatches the command; module errors end up in the record, never thrown.
/// Writes the record (and the CSV trace) when the config names output paths.
RunRecord run_experiment(const ExperimentConfig& config);

/// format: json | csv | plotdata. Throws io-failure.
void emit_report(const RunRecord& record, const std::string& format, const std::string& path);

struct BatchEntry {
  std::size_t index = 0;
  std::string config_path;
  std::string output_path;
  int exit_status = 0;
};

/// Runs every config in its own child process (`exe run --config ...`) on a
/// pool of `jobs` workers, writes run_<i>.json files and index.json into
/// `directory`, and returns the index.
json run_batch(const std::vector<ExperimentConfig>& configs, const std::string& directory, std::size_t jobs,
               const std::string& exe);

}  // namespace aiet
