#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "spinet/runner.hpp"

using namespace spinet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "spinet-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig small_identify(const fs::path& out) {
  ExperimentConfig config;
  config.mode = RunMode::identify;
  config.n_max = 2;
  config.true_graph.add_edge(1, 2, 1.0);
  config.has_true_graph = true;
  config.n_paths = 4;
  config.horizon = 0.5;
  config.seed = 11;
  config.output_dir = out.string();
  return config;
}

}  // namespace

TEST_CASE("config json round trip and overrides") {
  const std::string text = R"({
    "mode": "identify",
    "n_max": 3,
    "true_graph": {"edges": [[1, 2], [2, 3, 1.5]]},
    "dt": 0.002,
    "horizon": 4.0,
    "n_paths": 7,
    "seed": 99
  })";
  const ExperimentConfig config = config_from_json_text(text);
  CHECK(config.mode == RunMode::identify);
  CHECK(config.n_max == 3);
  CHECK(config.true_graph.coupling(1, 2) == 1.0);
  CHECK(config.true_graph.coupling(2, 3) == 1.5);
  CHECK(config.dt == 0.002);
  CHECK(config.n_paths == 7);
  CHECK(config.seed == 99);

  const ExperimentConfig echoed = config_from_json_text(config_to_json(config));
  CHECK(echoed.n_max == config.n_max);
  CHECK(echoed.true_graph.couplings == config.true_graph.couplings);
  CHECK(echoed.horizon == config.horizon);
}

TEST_CASE("config validation messages") {
  ExperimentConfig config;
  config.mode = RunMode::validate;
  config.dt = 0.1;  // violates dt * gamma <= 1e-2
  CHECK_THROWS_WITH_AS(config.validate(), doctest::Contains("dt * gamma"), std::invalid_argument);

  ExperimentConfig paths;
  paths.mode = RunMode::validate;
  paths.n_paths = 0;
  CHECK_THROWS_AS(paths.validate(), std::invalid_argument);

  ExperimentConfig no_graph;
  no_graph.mode = RunMode::identify;
  CHECK_THROWS_AS(no_graph.validate(), std::invalid_argument);

  CHECK_THROWS_AS(config_from_json_text("{not json"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json_text(R"({"true_graph": {"edges": [[1]]}})"),
                  std::invalid_argument);
}

TEST_CASE("graph spec parsing") {
  const RootedGraph g = parse_graph_spec("1-2:1.0,2-3:1.2,3-4");
  CHECK(g.n_nodes == 4);
  CHECK(g.coupling(2, 3) == 1.2);
  CHECK(g.coupling(3, 4) == 1.0);
  CHECK_THROWS_AS(parse_graph_spec(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_graph_spec("12"), std::invalid_argument);
}

TEST_CASE("dt bound is rejected with exit code 2") {
  ExperimentConfig config;
  config.mode = RunMode::validate;
  config.dt = 0.1;
  config.output_dir = fresh_dir("reject").string();
  std::ostringstream log;
  CHECK(run_experiment(config, log) == 2);
  CHECK(log.str().find("dt * gamma") != std::string::npos);
}

TEST_CASE("enumerate mode writes the catalog artifact") {
  const fs::path dir = fresh_dir("enumerate");
  ExperimentConfig config;
  config.mode = RunMode::enumerate_catalog;
  config.n_max = 3;
  config.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_experiment(config, log) == 0);

  const json catalog = json::parse(slurp(dir / "catalog.json"));
  REQUIRE(catalog.size() == 5);
  CHECK(catalog[0]["class_id"] == 1);
  CHECK(catalog[0]["n_nodes"] == 1);
  CHECK(catalog[0]["edges"].empty());
  for (const auto& entry : catalog) {
    CHECK(entry.contains("class_id"));
    CHECK(entry.contains("n_nodes"));
    CHECK(entry.contains("edges"));
  }
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["mode"] == "enumerate");
  CHECK(manifest["version"] == kVersion);
}

TEST_CASE("identify mode writes summary, trajectories and manifest") {
  const fs::path dir = fresh_dir("identify");
  std::ostringstream log;
  REQUIRE(run_experiment(small_identify(dir), log) == 0);

  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["m"] == 2);
  CHECK(summary["decision_class"].is_number_integer());
  CHECK(summary["top2_gap"].is_number());
  CHECK(summary["excluded_paths"] == 0);
  CHECK(summary["class_edge_lists"].size() == 2);
  CHECK(summary["mean_prob_trajectories"].size() > 0);

  const std::string csv = slurp(dir / "mean_probs.csv");
  CHECK(csv.rfind("t,p_1,p_2\n", 0) == 0);
  CHECK(csv.find("\r") == std::string::npos);  // LF endings
}

TEST_CASE("identical config and seed reproduce byte-identical artifacts") {
  const fs::path dir_a = fresh_dir("repro-a");
  const fs::path dir_b = fresh_dir("repro-b");
  std::ostringstream log;
  ExperimentConfig config_a = small_identify(dir_a);
  config_a.threads = 2;  // parallel execution must not change results
  ExperimentConfig config_b = small_identify(dir_b);
  config_b.threads = 1;
  REQUIRE(run_experiment(config_a, log) == 0);
  REQUIRE(run_experiment(config_b, log) == 0);
  CHECK(slurp(dir_a / "mean_probs.csv") == slurp(dir_b / "mean_probs.csv"));

  json summary_a = json::parse(slurp(dir_a / "summary.json"));
  json summary_b = json::parse(slurp(dir_b / "summary.json"));
  summary_a["config_echo"].erase("output_dir");
  summary_b["config_echo"].erase("output_dir");
  summary_a["config_echo"].erase("threads");
  summary_b["config_echo"].erase("threads");
  CHECK(summary_a == summary_b);
}

TEST_CASE("initialize mode writes per-path csv pairs and quantiles") {
  const fs::path dir = fresh_dir("initialize");
  ExperimentConfig config;
  config.mode = RunMode::initialize;
  config.true_graph.add_edge(1, 2, 1.0);
  config.has_true_graph = true;
  config.n_paths = 3;
  config.horizon = 0.2;
  config.seed = 4;
  config.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_experiment(config, log) == 0);

  for (int path = 0; path < 3; ++path) {
    char name[64];
    std::snprintf(name, sizeof(name), "trajectory_%04d.csv", path);
    const std::string dump = slurp(dir / name);
    CHECK(dump.rfind("t,dY,fidelity,cost\n", 0) == 0);
    std::snprintf(name, sizeof(name), "fidelity_%04d.csv", path);
    const std::string fid = slurp(dir / name);
    CHECK(fid.rfind("t,fidelity,cost,theta,delta\n", 0) == 0);
  }
  const json summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["final_fidelity"]["min"].get<double>() <=
        summary["final_fidelity"]["max"].get<double>());
  CHECK(summary["aborted_paths"] == 0);
}

TEST_CASE("steady-states mode reports the symmetric pentagon") {
  const fs::path dir = fresh_dir("steady");
  ExperimentConfig config;
  config.mode = RunMode::steady_states;
  config.true_graph = parse_graph_spec("1-2:1.0,2-3:1.2,3-4:0.9,4-5:1.2,1-5:1.0");
  config.has_true_graph = true;
  config.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_experiment(config, log) == 0);

  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(report["unique_target"] == false);
  CHECK(report["states"].size() >= 3);
  CHECK(report["symmetry_witness"] == json::array({1, 5, 4, 3, 2}));
  for (const auto& state : report["states"]) {
    CHECK(state["amplitudes"].size() == 32);
    CHECK(state.contains("h_eigenvalue"));
  }
}

TEST_CASE("validate mode artifacts") {
  const fs::path dir = fresh_dir("validate");
  ExperimentConfig config;
  config.mode = RunMode::validate;
  config.output_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_experiment(config, log) == 0);
  const json report = json::parse(slurp(dir / "validation.json"));
  CHECK(report["all_passed"] == true);
  CHECK(report["checks"].size() >= 5);
  CHECK(log.str().find("[ok]") != std::string::npos);
}

#ifdef SPINET_CLI_PATH
TEST_CASE("cli end to end") {
  const fs::path dir = fresh_dir("cli");
  const std::string cli = SPINET_CLI_PATH;

  SUBCASE("enumerate subcommand") {
    const std::string cmd =
        cli + " enumerate --n-max 4 --out " + (dir / "enum").string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const json catalog = json::parse(slurp(dir / "enum" / "catalog.json"));
    CHECK(catalog.size() == 16);
  }

  SUBCASE("flag overrides beat the config file") {
    const fs::path cfg = dir / "config.json";
    std::ofstream(cfg) << R"({"mode": "enumerate", "n_max": 2, "seed": 5})";
    const std::string cmd = cli + " enumerate --config " + cfg.string() + " --n-max 3 --out " +
                            (dir / "override").string() + " > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const json catalog = json::parse(slurp(dir / "override" / "catalog.json"));
    CHECK(catalog.size() == 5);
  }

  SUBCASE("bad configuration exits with code 2") {
    const std::string cmd = cli + " identify --graph 1-2:0 --out " + (dir / "bad").string() +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
  }

  SUBCASE("unknown subcommand fails") {
    const std::string cmd = cli + " frobnicate > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) != 0);
  }
}
#endif
