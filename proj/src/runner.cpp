#include "aiet/runner.hpp"

#include <spawn.h>
#include <sys/wait.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

extern char** environ;

namespace aiet {

namespace {

const std::set<std::string>& known_commands() {
  static const std::set<std::string> commands{"induce", "solve", "lyapunov", "ecs", "bcc", "cone-trace", "verify"};
  return commands;
}

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::config_invalid, message); }

std::vector<std::string> string_array(const json& j, const std::string& key) {
  if (!j.is_array()) invalid("'" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) invalid("'" + key + "' entries must be strings (\"p/q\" or decimal)");
    out.push_back(x.get<std::string>());
  }
  return out;
}

template <class S>
S parse_entry(const std::string& text) {
  if constexpr (std::is_same_v<S, GoldenNumber>) {
    return parse_golden(text);
  } else if constexpr (std::is_same_v<S, Rational>) {
    if (mentions_sqrt5(text)) invalid("'" + text + "' is not rational");
    return parse_rational(text);
  } else {
    if (mentions_sqrt5(text)) return parse_golden(text).template to<S>();
    return parse_scalar<S>(text);
  }
}

template <class S>
std::vector<S> parse_entries(const std::vector<std::string>& texts) {
  std::vector<S> out;
  for (const auto& t : texts) out.push_back(parse_entry<S>(t));
  return out;
}

Permutation config_permutation(const ExperimentConfig& c) {
  if (c.alphabet.empty()) return Permutation::from_rows(c.top, c.bottom);
  return Permutation::from_rows(Alphabet(c.alphabet), c.top, c.bottom);
}

bool uses_sqrt5(const ExperimentConfig& c) {
  for (const auto& s : c.lengths)
    if (mentions_sqrt5(s)) return true;
  return false;
}

/// Calls f with a value of the scalar type that follows the IET path.
template <class F>
decltype(auto) with_path_scalar(const ExperimentConfig& c, F&& f) {
  if (c.mode == Mode::rational) {
    if (uses_sqrt5(c)) return f(GoldenNumber{});
    return f(Rational{});
  }
  if (c.precision == "high") return f(HighPrecision{});
  return f(double{});
}

/// Calls f with the scalar type of accumulated products and candidate AIETs.
template <class F>
decltype(auto) with_product_scalar(const ExperimentConfig& c, F&& f) {
  if (c.precision == "high") return f(HighPrecision{});
  return f(double{});
}

template <class R>
std::string plot_columns(const std::vector<DiameterPoint<R>>& trace) {
  std::string out = "# step diameter\n";
  for (const auto& p : trace) out += std::to_string(p.step) + " " + scalar_json(p.diameter).template get<std::string>() + "\n";
  return out;
}

template <class P>
Aiet<P> config_iet(const ExperimentConfig& c) {
  return make_iet<P>(config_permutation(c), parse_entries<P>(c.lengths));
}

template <class P>
void run_induce(const ExperimentConfig& c, RunRecord& rec) {
  Permutation p = config_permutation(c);
  auto lengths = parse_entries<P>(c.lengths);
  std::vector<P> slopes;
  if (!c.slopes.empty()) {
    slopes = parse_entries<P>(c.slopes);
  } else if (!c.omega.empty()) {
    if constexpr (is_exact_v<P>) {
      for (const auto& w : c.omega) {
        if (!(parse_rational(w) == 0))
          invalid("rational mode takes exact slopes; give 'slopes' instead of a nonzero 'omega'");
        slopes.push_back(P(1));
      }
    } else {
      using std::exp;
      for (const auto& w : parse_entries<P>(c.omega)) slopes.push_back(P(exp(w)));
    }
  } else {
    slopes.assign(lengths.size(), P(1));
  }
  P tol(0);
  if constexpr (!is_exact_v<P>) tol = parse_entry<P>(c.closure_tolerance);
  Aiet<P> f = make_aiet(p, lengths, slopes, tol);
  rec.result["aiet"] = to_json(f);
  rec.result["keane"] = to_json(check_keane(f, std::max<std::size_t>(c.depth, 1)), p);
  RauzyPath path(p);
  PathIterator<P> it(f, false);
  for (std::size_t n = 0; n < c.depth; ++n) path.append(it.next());
  rec.result["path"] = to_json(path);
  rec.result["zorich_times"] = path.zorich_times();
  rec.result["every_letter_wins"] = path.every_letter_wins();
  rec.result["final"] = to_json(it.current());
}

template <class P, class R>
void run_solve(const ExperimentConfig& c, RunRecord& rec) {
  auto iet = config_iet<P>(c);
  auto omega = parse_entries<R>(c.omega);
  R tol = parse_entry<R>(c.tolerance);
  try {
    auto report = solve_unique_aiet(iet, omega, tol, c.max_steps);
    if (c.verify_depth > 0) {
      auto check = verify_semiconjugacy(iet, report.lengths, report.omega, c.verify_depth,
                                        parse_entry<R>(c.closure_tolerance));
      report.verified_depth = check.equal ? check.depth : check.agreement;
      rec.result["semiconjugacy"] = to_json(check);
    }
    rec.result["solve"] = to_json(report);
    rec.csv_trace = diameter_csv(report.diameter_trace);
    rec.plot_trace = plot_columns(report.diameter_trace);
  } catch (const SolveFailure<R>& failure) {
    rec.result["solve"] = to_json(failure.report());
    rec.csv_trace = diameter_csv(failure.report().diameter_trace);
    rec.plot_trace = plot_columns(failure.report().diameter_trace);
    throw;
  }
}

void run_lyapunov(const ExperimentConfig& c, RunRecord& rec) {
  auto iet = config_iet<double>(c);
  LyapunovOptions options;
  options.trace_stride = std::max<std::size_t>(1, c.iterations / 100);
  auto s = lyapunov_spectrum(iet, c.iterations, c.seed, options);
  rec.result["spectrum"] = to_json(s);
  rec.result["genus"] = genus(iet.perm());
  rec.csv_trace = lyapunov_csv(s);
  rec.plot_trace = "# k theta_1\n";
  for (const auto& [k, row] : s.trace) rec.plot_trace += std::to_string(k) + " " + format_scalar(row[0]) + "\n";
}

template <class P>
void run_ecs(const ExperimentConfig& c, RunRecord& rec) {
  auto iet = config_iet<P>(c);
  EcsOptions options;
  options.seed = c.seed;
  rec.result["ecs"] = to_json(estimate_ecs(iet, c.depth, options), iet.perm().alphabet());
}

template <class P>
void run_bcc(const ExperimentConfig& c, RunRecord& rec) {
  auto iet = config_iet<P>(c);
  EcsOptions options;
  options.seed = c.seed;
  std::size_t ecs_depth = c.ecs_depth ? c.ecs_depth : 2 * c.depth + 100;
  auto ecs = estimate_ecs(iet, ecs_depth, options);
  rec.result["ecs"] = to_json(ecs, iet.perm().alphabet());
  auto report = bcc_monitor(iet, ecs, c.V, c.N, c.depth);
  rec.result["bcc"] = to_json(report);
  rec.csv_trace = "n,norm\n";
  rec.plot_trace = "# n norm\n";
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    rec.csv_trace += std::to_string(report.times[k]) + "," + format_scalar(report.norms[k]) + "\n";
    rec.plot_trace += std::to_string(report.times[k]) + " " + format_scalar(report.norms[k]) + "\n";
  }
}

template <class P, class R>
void run_cone_trace(const ExperimentConfig& c, RunRecord& rec) {
  auto iet = config_iet<P>(c);
  auto trace = cone_diameter_trace(iet, parse_entries<R>(c.omega), c.depth);
  json points = json::array();
  for (const auto& p : trace) points.push_back(to_json(p));
  rec.result["trace"] = std::move(points);
  rec.result["non_increasing"] = is_non_increasing(trace);
  rec.csv_trace = diameter_csv(trace);
  rec.plot_trace = plot_columns(trace);
}

template <class P, class R>
void run_verify(const ExperimentConfig& c, RunRecord& rec) {
  auto iet = config_iet<P>(c);
  auto check = verify_semiconjugacy(iet, parse_entries<R>(c.candidate), parse_entries<R>(c.omega), c.depth,
                                    parse_entry<R>(c.closure_tolerance));
  rec.result["semiconjugacy"] = to_json(check);
}

void dispatch(const ExperimentConfig& c, RunRecord& rec) {
  const std::string& cmd = c.command;
  if (cmd == "lyapunov") return run_lyapunov(c, rec);
  with_path_scalar(c, [&](auto path_tag) {
    using P = decltype(path_tag);
    if (cmd == "induce") return run_induce<P>(c, rec);
    if (cmd == "ecs") return run_ecs<P>(c, rec);
    if (cmd == "bcc") return run_bcc<P>(c, rec);
    with_product_scalar(c, [&](auto product_tag) {
      using R = decltype(product_tag);
      if (cmd == "solve") return run_solve<P, R>(c, rec);
      if (cmd == "cone-trace") return run_cone_trace<P, R>(c, rec);
      if (cmd == "verify") return run_verify<P, R>(c, rec);
    });
  });
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::io_failure, "cannot write '" + path + "'");
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  return {{"command", c.command},
          {"top", c.top},
          {"bottom", c.bottom},
          {"alphabet", c.alphabet},
          {"lengths", c.lengths},
          {"omega", c.omega},
          {"slopes", c.slopes},
          {"candidate", c.candidate},
          {"mode", std::string(to_string(c.mode))},
          {"precision", c.precision},
          {"tolerance", c.tolerance},
          {"closure_tolerance", c.closure_tolerance},
          {"max_steps", c.max_steps},
          {"depth", c.depth},
          {"iterations", c.iterations},
          {"ecs_depth", c.ecs_depth},
          {"verify_depth", c.verify_depth},
          {"seed", c.seed},
          {"V", c.V},
          {"N", c.N},
          {"output", c.output},
          {"trace", c.trace}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  ExperimentConfig c;
  static const std::set<std::string> keys{"command", "top", "bottom", "alphabet", "lengths", "omega",
                                          "slopes", "candidate", "mode", "precision", "tolerance",
                                          "closure_tolerance", "max_steps", "depth", "iterations", "ecs_depth",
                                          "verify_depth", "seed", "V", "N", "output", "trace"};
  for (const auto& [key, value] : j.items())
    if (!keys.count(key)) invalid("unknown config field '" + key + "'");
  auto str = [&](const char* key, std::string& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) invalid(std::string("'") + key + "' must be a string");
    field = j.at(key).get<std::string>();
  };
  auto count = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_unsigned()) invalid(std::string("'") + key + "' must be a non-negative integer");
    field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  str("command", c.command);
  str("top", c.top);
  str("bottom", c.bottom);
  if (j.contains("alphabet")) c.alphabet = string_array(j.at("alphabet"), "alphabet");
  if (j.contains("lengths")) c.lengths = string_array(j.at("lengths"), "lengths");
  if (j.contains("omega")) c.omega = string_array(j.at("omega"), "omega");
  if (j.contains("slopes")) c.slopes = string_array(j.at("slopes"), "slopes");
  if (j.contains("candidate")) c.candidate = string_array(j.at("candidate"), "candidate");
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) invalid("'mode' must be a string");
    c.mode = parse_mode(j.at("mode").get<std::string>());
  }
  str("precision", c.precision);
  str("tolerance", c.tolerance);
  str("closure_tolerance", c.closure_tolerance);
  count("max_steps", c.max_steps);
  count("depth", c.depth);
  count("iterations", c.iterations);
  count("ecs_depth", c.ecs_depth);
  count("verify_depth", c.verify_depth);
  count("seed", c.seed);
  count("N", c.N);
  if (j.contains("V")) {
    if (!j.at("V").is_number()) invalid("'V' must be a number");
    c.V = j.at("V").get<double>();
  }
  str("output", c.output);
  str("trace", c.trace);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (!known_commands().count(c.command)) invalid("unknown command '" + c.command + "'");
  if (c.precision != "double" && c.precision != "high") invalid("precision must be 'double' or 'high'");
  Permutation p = [&] {
    try {
      return config_permutation(c);
    } catch (const Error& e) {
      invalid(std::string("permutation: ") + e.what());
    }
  }();
  std::size_t d = p.size();
  auto check_vector = [&](const std::vector<std::string>& v, const char* name, bool required) {
    if (v.empty() && !required) return;
    if (v.size() != d)
      invalid(std::string("'") + name + "' has " + std::to_string(v.size()) + " entries, alphabet has " +
              std::to_string(d));
    for (const auto& s : v) {
      try {
        parse_golden(s);
      } catch (const Error&) {
        invalid(std::string("'") + name + "' entry '" + s + "' is not a number");
      }
    }
  };
  check_vector(c.lengths, "lengths", true);
  bool needs_omega = c.command == "solve" || c.command == "cone-trace" || c.command == "verify";
  check_vector(c.omega, "omega", needs_omega);
  check_vector(c.slopes, "slopes", false);
  check_vector(c.candidate, "candidate", c.command == "verify");
  for (const auto* t : {&c.tolerance, &c.closure_tolerance}) {
    try {
      if (!(parse_rational(*t) > 0)) invalid("tolerances must be positive");
    } catch (const Error& e) {
      if (e.code() == ErrorCode::config_invalid) throw;
      invalid("tolerance '" + *t + "' is not a number");
    }
  }
  if (c.command == "bcc" && c.N == 0) invalid("N must be >= 1");
}

json to_json(const RunRecord& r) {
  json error = nullptr;
  if (r.error_code) {
    error = {{"code", std::string(to_string(*r.error_code))}, {"message", r.error_message}};
    error["step"] = r.error_step ? json(*r.error_step) : json(nullptr);
  }
  return {{"config", r.config},       {"version", r.version}, {"wall_time", r.wall_time},
          {"status", r.status},       {"error", error},       {"result", r.result}};
}

RunRecord run_experiment(const ExperimentConfig& config) {
  RunRecord rec;
  rec.config = config_to_json(config);
  auto start = std::chrono::steady_clock::now();
  try {
    validate_config(config);
    dispatch(config, rec);
  } catch (const Error& e) {
    rec.status = "error";
    rec.error_code = e.code();
    rec.error_message = e.what();
    rec.error_step = e.step();
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    if (!config.output.empty()) emit_report(rec, "json", config.output);
    if (!config.trace.empty() && !rec.csv_trace.empty()) emit_report(rec, "csv", config.trace);
  } catch (const Error& e) {
    rec.status = "error";
    rec.error_code = e.code();
    rec.error_message = e.what();
    rec.error_step = std::nullopt;
  }
  return rec;
}

void emit_report(const RunRecord& record, const std::string& format, const std::string& path) {
  if (format == "json") return write_file(path, to_json(record).dump(2) + "\n");
  if (format == "csv" || format == "plotdata") {
    const std::string& body = format == "csv" ? record.csv_trace : record.plot_trace;
    if (body.empty()) throw Error(ErrorCode::precondition, "record has no trace to emit");
    return write_file(path, body);
  }
  throw Error(ErrorCode::config_invalid, "unknown report format '" + format + "'");
}

json run_batch(const std::vector<ExperimentConfig>& configs, const std::string& directory, std::size_t jobs,
               const std::string& exe) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorCode::io_failure, "cannot create '" + directory + "': " + ec.message());
  jobs = std::max<std::size_t>(1, jobs);

  std::vector<BatchEntry> entries(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    ExperimentConfig c = configs[i];
    entries[i].index = i;
    entries[i].config_path = (fs::path(directory) / ("config_" + std::to_string(i) + ".json")).string();
    entries[i].output_path = (fs::path(directory) / ("run_" + std::to_string(i) + ".json")).string();
    c.output = entries[i].output_path;
    if (!c.trace.empty()) c.trace = (fs::path(directory) / ("trace_" + std::to_string(i) + ".csv")).string();
    write_file(entries[i].config_path, config_to_json(c).dump(2) + "\n");
  }

  std::map<pid_t, std::size_t> running;
  std::size_t next = 0;
  auto reap_one = [&] {
    int status = 0;
    pid_t pid = waitpid(-1, &status, 0);
    if (pid < 0) throw Error(ErrorCode::io_failure, "waitpid failed");
    auto it = running.find(pid);
    if (it == running.end()) return;
    entries[it->second].exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    running.erase(it);
  };
  while (next < entries.size() || !running.empty()) {
    while (next < entries.size() && running.size() < jobs) {
      std::vector<std::string> args{exe, "run", "--config", entries[next].config_path};
      std::vector<char*> argv;
      for (auto& a : args) argv.push_back(a.data());
      argv.push_back(nullptr);
      pid_t pid = 0;
      if (posix_spawn(&pid, exe.c_str(), nullptr, nullptr, argv.data(), environ) != 0)
        throw Error(ErrorCode::io_failure, "cannot spawn '" + exe + "'");
      running[pid] = next++;
    }
    if (!running.empty()) reap_one();
  }

  json runs = json::array();
  for (const auto& e : entries) {
    json run = {{"index", e.index}, {"config", e.config_path}, {"output", e.output_path}, {"exit_status", e.exit_status}};
    std::ifstream in(e.output_path);
    json record = json::parse(in, nullptr, false);
    if (!record.is_discarded() && record.is_object()) {
      run["status"] = record.value("status", "unknown");
      run["command"] = record["config"].value("command", "");
      if (record["error"].is_object()) run["error"] = record["error"]["code"];
    } else {
      run["status"] = "missing";
    }
    runs.push_back(std::move(run));
  }
  json index = {{"version", toolkit_version}, {"count", entries.size()}, {"runs", std::move(runs)}};
  write_file((fs::path(directory) / "index.json").string(), index.dump(2) + "\n");
  return index;
}

}  // namespace aiet
