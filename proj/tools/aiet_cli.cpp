#include <fstream>
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "aiet/runner.hpp"

using namespace aiet;

namespace {

/// Flag values, applied over the config file only when given.
struct Overrides {
  std::vector<std::function<void(ExperimentConfig&)>> setters;
};

template <class T>
void flag(CLI::App* app, Overrides& o, const std::string& name, T ExperimentConfig::*field, const std::string& help) {
  auto value = std::make_shared<T>();
  auto* opt = app->add_option(name, *value, help);
  o.setters.push_back([opt, value, field](ExperimentConfig& c) {
    if (opt->count()) c.*field = *value;
  });
}

void add_experiment_options(CLI::App* app, Overrides& o, std::string& config_path, std::string& format,
                            std::string& emit_path) {
  app->add_option("--config", config_path, "JSON config file; flags override its fields");
  flag(app, o, "--top", &ExperimentConfig::top, "top row, e.g. \"A B C D\"");
  flag(app, o, "--bottom", &ExperimentConfig::bottom, "bottom row, e.g. \"D C B A\"");
  flag(app, o, "--alphabet", &ExperimentConfig::alphabet, "alphabet order (default: top row)");
  flag(app, o, "--lengths", &ExperimentConfig::lengths, "length vector (\"p/q\", decimal or a+b*sqrt5)");
  flag(app, o, "--omega", &ExperimentConfig::omega, "log-slope vector");
  flag(app, o, "--slopes", &ExperimentConfig::slopes, "slope vector e^omega (exact induce)");
  flag(app, o, "--candidate", &ExperimentConfig::candidate, "verify: lengths of the candidate AIET");
  auto mode = std::make_shared<std::string>();
  auto* mode_opt = app->add_option("--mode", *mode, "rational | float");
  o.setters.push_back([mode_opt, mode](ExperimentConfig& c) {
    if (mode_opt->count()) c.mode = parse_mode(*mode);
  });
  flag(app, o, "--precision", &ExperimentConfig::precision, "double | high");
  flag(app, o, "--tolerance", &ExperimentConfig::tolerance, "solver diameter tolerance");
  flag(app, o, "--closure-tolerance", &ExperimentConfig::closure_tolerance, "closure residual tolerance");
  flag(app, o, "--max-steps", &ExperimentConfig::max_steps, "solver step cap");
  flag(app, o, "--depth", &ExperimentConfig::depth, "path / scan depth");
  flag(app, o, "--iterations", &ExperimentConfig::iterations, "Zorich iterations (lyapunov)");
  flag(app, o, "--ecs-depth", &ExperimentConfig::ecs_depth, "E_cs depth for bcc");
  flag(app, o, "--verify-depth", &ExperimentConfig::verify_depth, "solve: verify the path to this depth");
  flag(app, o, "--seed", &ExperimentConfig::seed, "random seed");
  flag(app, o, "--V", &ExperimentConfig::V, "bcc norm bound");
  flag(app, o, "--N", &ExperimentConfig::N, "bcc positivity window");
  flag(app, o, "--output", &ExperimentConfig::output, "write the RunRecord JSON here");
  flag(app, o, "--trace", &ExperimentConfig::trace, "write the CSV trace here");
  app->add_option("--format", format, "also emit the record as json | csv | plotdata")
      ->check(CLI::IsMember({"json", "csv", "plotdata"}));
  app->add_option("--emit", emit_path, "path for --format");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::config_invalid, "'" + path + "' is not valid JSON");
  return config_from_json(j);
}

int report_error(const Error& e) {
  json out = {{"status", "error"}, {"error", {{"code", std::string(to_string(e.code())), }, {"message", e.what()}}}};
  std::cerr << out.dump() << "\n";
  return exit_code(e.code());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renormalization toolkit for interval exchanges and affine interval exchanges"};
  app.require_subcommand(0, 1);
  std::string batch_file, output_dir = "batch_out";
  std::size_t jobs = 1;
  app.add_option("--batch", batch_file, "JSON array of configs, each run in its own process");
  app.add_option("--output-dir", output_dir, "batch output directory");
  app.add_option("--jobs", jobs, "batch worker count");
  app.set_version_flag("--version", toolkit_version);

  struct Sub {
    CLI::App* app;
    Overrides overrides;
    std::string config_path, format, emit_path;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  for (const char* name : {"induce", "solve", "lyapunov", "ecs", "bcc", "cone-trace", "verify", "run"}) {
    auto sub = std::make_unique<Sub>();
    sub->app = app.add_subcommand(name, std::string(name) == "run" ? "run a config file as is" : name);
    add_experiment_options(sub->app, sub->overrides, sub->config_path, sub->format, sub->emit_path);
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!batch_file.empty()) {
      std::ifstream in(batch_file);
      if (!in) throw Error(ErrorCode::io_failure, "cannot read '" + batch_file + "'");
      json j = json::parse(in, nullptr, false);
      if (j.is_discarded() || !j.is_array()) throw Error(ErrorCode::config_invalid, "batch file must be a JSON array");
      std::vector<ExperimentConfig> configs;
      for (const auto& item : j) configs.push_back(item.is_string() ? load_config(item.get<std::string>()) : config_from_json(item));
      json index = run_batch(configs, output_dir, jobs, "/proc/self/exe");
      std::cout << index.dump(2) << "\n";
      for (const auto& run : index["runs"])
        if (run["exit_status"].get<int>() != 0) return 4;
      return 0;
    }
    for (auto& sub : subs) {
      if (!sub->app->parsed()) continue;
      ExperimentConfig config;
      if (!sub->config_path.empty()) config = load_config(sub->config_path);
      std::string name = sub->app->get_name();
      if (name != "run") config.command = name;
      for (auto& set : sub->overrides.setters) set(config);
      RunRecord record = run_experiment(config);
      if (config.output.empty()) std::cout << to_json(record).dump(2) << "\n";
      if (!sub->format.empty()) {
        if (sub->emit_path.empty()) throw Error(ErrorCode::config_invalid, "--format needs --emit");
        emit_report(record, sub->format, sub->emit_path);
      }
      if (record.error_code) std::cerr << record.error_message << "\n";
      return record.exit_status();
    }
    std::cout << app.help() << "\n";
    return 2;
  } catch (const Error& e) {
    return report_error(e);
  }
}
