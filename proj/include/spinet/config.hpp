// Experiment configuration: a single JSON document drives every CLI mode;
// command-line flags override individual fields.
#pragma once

#include <cstdint>
#include <string>

#include "spinet/graph.hpp"

namespace spinet {

enum class RunMode { enumerate_catalog, identify, initialize, steady_states, validate };

RunMode parse_mode(const std::string& name);
std::string mode_name(RunMode mode);

struct ExperimentConfig {
  RunMode mode = RunMode::validate;
  int n_max = 3;
  RootedGraph true_graph;
  bool has_true_graph = false;
  double nominal_lambda = 1.0;
  double gamma = 1.0;
  double dt = 1e-3;
  double horizon = 0.0;  // 0 means the mode default (5/gamma identify, 10/gamma initialize)
  int n_paths = 50;
  uint64_t seed = 1;
  std::string output_dir = "spinet-out";
  int threads = 0;
  bool full_resolution = false;

  double effective_horizon() const;

  // Throws std::invalid_argument with a descriptive message on any violated
  // constraint (dt * gamma <= 1e-2, n_paths >= 1, positive couplings, ...).
  void validate() const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

// Inline edge-list syntax for the CLI: "1-2:1.0,2-3:1.2" (coupling optional,
// default 1).
RootedGraph parse_graph_spec(const std::string& spec);

}  // namespace spinet
