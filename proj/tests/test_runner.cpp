#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aiet/runner.hpp"

using namespace aiet;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures = AIET_FIXTURE_DIR;

ExperimentConfig fixture(const std::string& name) {
  std::ifstream in(fixtures / name);
  REQUIRE(in);
  return config_from_json(json::parse(in));
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "aiet_runner_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  std::string cmd = std::string(AIET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(fixtures))
    if (e.path().extension() == ".json") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("config round trip for every fixture") {
  auto names = fixture_names();
  REQUIRE(names.size() >= 5);
  for (const auto& name : names) {
    CAPTURE(name);
    auto c = fixture(name);
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));
  }
}

TEST_CASE("config validation") {
  auto bad = fixture("bad_omega.json");
  try {
    validate_config(bad);
    FAIL("mismatched omega accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_invalid);
  }
  auto rec = run_experiment(bad);
  CHECK(rec.status == "error");
  CHECK(rec.error_code == ErrorCode::config_invalid);
  CHECK(rec.exit_status() == 2);

  auto c = fixture("golden_solve.json");
  c.command = "unknown";
  CHECK_THROWS_AS(validate_config(c), Error);
  c = fixture("golden_solve.json");
  c.tolerance = "-1";
  CHECK_THROWS_AS(validate_config(c), Error);
  c = fixture("golden_solve.json");
  c.lengths = {"1/2", "x"};
  CHECK_THROWS_AS(validate_config(c), Error);
  CHECK_THROWS_AS(config_from_json(json{{"command", "solve"}, {"depth", "ten"}}), Error);
}

TEST_CASE("golden solve fixture") {
  auto rec = run_experiment(fixture("golden_solve.json"));
  REQUIRE(rec.status == "success");
  CHECK(rec.exit_status() == 0);
  const auto& solve = rec.result["solve"];
  CHECK(solve["converged"] == true);
  CHECK(solve["verified_depth"] == 100);
  CHECK(rec.result["semiconjugacy"]["equal"] == true);
  for (const char* key : {"lengths", "steps", "final_diameter", "closure_residual", "verified_depth", "diameter_trace",
                          "tolerance", "converged", "omega", "projection_distance", "final_contraction",
                          "positivity_constant"})
    CHECK(solve.contains(key));
  auto j = to_json(rec);
  CHECK(j["version"] == toolkit_version);
  CHECK(j["config"]["seed"] == 1);
  CHECK(j["error"].is_null());

  auto csv = scratch("golden_trace.csv");
  emit_report(rec, "csv", csv.string());
  auto body = slurp(csv);
  CHECK(body.rfind("step,diameter,logscale\n", 0) == 0);
  auto plot = scratch("golden_trace.dat");
  emit_report(rec, "plotdata", plot.string());
  CHECK_FALSE(slurp(plot).empty());
  auto out = scratch("golden_record.json");
  emit_report(rec, "json", out.string());
  CHECK(json::parse(slurp(out))["status"] == "success");
  try {
    emit_report(rec, "csv", "/nonexistent/dir/trace.csv");
    FAIL("unwritable path accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io_failure);
  }
  CHECK_THROWS_AS(emit_report(rec, "xml", out.string()), Error);
}

TEST_CASE("records are reproducible from their echoed config") {
  auto rational = fixture("induce_rational.json");
  auto a = run_experiment(rational);
  REQUIRE(a.status == "success");
  auto b = run_experiment(config_from_json(a.config));
  CHECK(a.result == b.result);
  // the non-tied example: one type-1 step, winner A
  CHECK(a.result["path"]["edges"][0]["type"] == 1);

  auto lyap = fixture("lyapunov_d4.json");
  auto l1 = run_experiment(lyap);
  auto l2 = run_experiment(lyap);
  REQUIRE(l1.status == "success");
  CHECK(l1.result == l2.result);
  CHECK(l1.result["genus"] == 2);
  CHECK(l1.result["spectrum"]["seed"] == 7);
  CHECK(l1.csv_trace == l2.csv_trace);
}

TEST_CASE("bcc records") {
  auto c = fixture("golden_bcc.json");
  auto rec = run_experiment(c);
  REQUIRE(rec.status == "success");
  CHECK_FALSE(rec.result["bcc"]["times"].empty());
  c.V = 0.0;
  auto empty = run_experiment(c);
  REQUIRE(empty.status == "success");
  CHECK(empty.result["bcc"]["times"].is_array());
  CHECK(empty.result["bcc"]["times"].empty());
  CHECK(to_json(empty).dump().find("\"times\":[]") != std::string::npos);
}

TEST_CASE("cone trace record") {
  auto rec = run_experiment(fixture("cone_trace_golden.json"));
  REQUIRE(rec.status == "success");
  CHECK(rec.result["non_increasing"] == true);
  CHECK(rec.result["trace"].size() == 40);
  CHECK(rec.csv_trace.rfind("step,diameter,logscale\n", 0) == 0);
}

TEST_CASE("module errors become records") {
  auto c = fixture("golden_solve.json");
  c.max_steps = 3;
  auto rec = run_experiment(c);
  CHECK(rec.status == "error");
  CHECK(rec.error_code == ErrorCode::max_steps_exceeded);
  CHECK(rec.exit_status() == 4);
  CHECK(rec.result["solve"]["steps"] == 3);

  auto l = fixture("lyapunov_d4.json");
  l.iterations = 10;
  auto pre = run_experiment(l);
  CHECK(pre.error_code == ErrorCode::precondition);
  CHECK(pre.exit_status() == 3);

  auto k = fixture("induce_rational.json");
  k.slopes.clear();
  k.depth = 5;
  auto tie = run_experiment(k);
  CHECK(tie.status == "error");
  CHECK(tie.error_step.has_value());
}

TEST_CASE("command-line exit codes") {
  std::string f = (fixtures / "golden_solve.json").string();
  auto out = scratch("cli_record.json");
  fs::remove(out);
  CHECK(cli("run --config " + f + " --output " + out.string()) == 0);
  CHECK(json::parse(slurp(out))["result"]["semiconjugacy"]["equal"] == true);
  CHECK(cli("run --config " + (fixtures / "bad_omega.json").string()) == 2);
  CHECK(cli("lyapunov --config " + (fixtures / "lyapunov_d4.json").string() + " --iterations 10") == 3);
  CHECK(cli("solve --config " + f + " --max-steps 3") == 4);
  CHECK(cli("run --config " + f + " --output /nonexistent/dir/out.json") == 5);
  CHECK(cli("run --config /nonexistent/config.json") == 5);
  CHECK(cli("solve --bogus-flag") == 2);
  // flags override the file
  auto csv = scratch("cli_trace.csv");
  CHECK(cli("cone-trace --config " + (fixtures / "cone_trace_golden.json").string() + " --depth 7 --trace " +
            csv.string()) == 0);
  auto body = slurp(csv);
  CHECK(std::count(body.begin(), body.end(), '\n') == 8);
  CHECK(cli("--version") == 0);
}

TEST_CASE("batch runs each config in its own process") {
  auto dir = scratch("batch");
  fs::remove_all(dir);
  std::vector<ExperimentConfig> configs{fixture("induce_rational.json"), fixture("bad_omega.json"),
                                        fixture("cone_trace_golden.json")};
  json index = run_batch(configs, dir.string(), 2, AIET_CLI_PATH);
  REQUIRE(index["runs"].size() == 3);
  CHECK(index["runs"][0]["exit_status"] == 0);
  CHECK(index["runs"][1]["exit_status"] == 2);
  CHECK(index["runs"][2]["exit_status"] == 0);
  CHECK(fs::exists(dir / "index.json"));
  for (int i = 0; i < 3; ++i) CHECK(fs::exists(dir / ("run_" + std::to_string(i) + ".json")));
  auto rec = json::parse(slurp(dir / "run_0.json"));
  CHECK(rec["result"] == run_experiment(configs[0]).result);
}
