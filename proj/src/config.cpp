#include "spinet/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spinet {

using nlohmann::json;

RunMode parse_mode(const std::string& name) {
  if (name == "enumerate") return RunMode::enumerate_catalog;
  if (name == "identify") return RunMode::identify;
  if (name == "initialize") return RunMode::initialize;
  if (name == "steady-states") return RunMode::steady_states;
  if (name == "validate") return RunMode::validate;
  throw std::invalid_argument("unknown mode: " + name);
}

std::string mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::enumerate_catalog: return "enumerate";
    case RunMode::identify: return "identify";
    case RunMode::initialize: return "initialize";
    case RunMode::steady_states: return "steady-states";
    case RunMode::validate: return "validate";
  }
  return "unknown";
}

double ExperimentConfig::effective_horizon() const {
  if (horizon > 0.0) return horizon;
  return mode == RunMode::initialize ? 10.0 / gamma : 5.0 / gamma;
}

void ExperimentConfig::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (dt * gamma > 1e-2)
    throw std::invalid_argument("dt * gamma must not exceed 1e-2 (integration step bound)");
  if (n_paths < 1) throw std::invalid_argument("n_paths must be at least 1");
  if (horizon < 0.0) throw std::invalid_argument("horizon must be positive");
  if (n_max < 1 || n_max > 6) throw std::invalid_argument("n_max must be in 1..6");
  if (!(nominal_lambda > 0.0)) throw std::invalid_argument("nominal_lambda must be positive");
  for (const auto& [e, w] : true_graph.couplings) {
    if (!(w > 0.0)) throw std::invalid_argument("couplings must be positive");
  }
  const bool needs_graph =
      mode == RunMode::identify || mode == RunMode::initialize || mode == RunMode::steady_states;
  if (needs_graph && !has_true_graph)
    throw std::invalid_argument(mode_name(mode) + " requires a true_graph");
  if (mode == RunMode::identify && true_graph.n_nodes > n_max)
    throw std::invalid_argument("true_graph has more nodes than n_max");
}

namespace {

RootedGraph graph_from_json(const json& j) {
  RootedGraph g;
  if (j.contains("n_nodes")) g.n_nodes = j.at("n_nodes").get<int>();
  for (const auto& edge : j.at("edges")) {
    if (!edge.is_array() || edge.size() < 2 || edge.size() > 3)
      throw std::invalid_argument("edges must be [j, k] or [j, k, coupling] triples");
    const double w = edge.size() == 3 ? edge[2].get<double>() : 1.0;
    g.add_edge(edge[0].get<int>(), edge[1].get<int>(), w);
  }
  return g;
}

json graph_to_json(const RootedGraph& g) {
  json edges = json::array();
  for (const auto& [e, w] : g.couplings) edges.push_back({e.first, e.second, w});
  return {{"n_nodes", g.n_nodes}, {"edges", edges}};
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + err.what());
  }
  ExperimentConfig config;
  try {
    if (j.contains("mode")) config.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("n_max")) config.n_max = j.at("n_max").get<int>();
    if (j.contains("true_graph")) {
      config.true_graph = graph_from_json(j.at("true_graph"));
      config.has_true_graph = true;
    }
    if (j.contains("nominal_lambda")) config.nominal_lambda = j.at("nominal_lambda").get<double>();
    if (j.contains("gamma")) config.gamma = j.at("gamma").get<double>();
    if (j.contains("dt")) config.dt = j.at("dt").get<double>();
    if (j.contains("horizon")) config.horizon = j.at("horizon").get<double>();
    if (j.contains("n_paths")) config.n_paths = j.at("n_paths").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<uint64_t>();
    if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("threads")) config.threads = j.at("threads").get<int>();
    if (j.contains("full_resolution")) config.full_resolution = j.at("full_resolution").get<bool>();
  } catch (const json::exception& err) {
    throw std::invalid_argument(std::string("malformed config field: ") + err.what());
  }
  return config;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
  json j{{"mode", mode_name(config.mode)},
         {"n_max", config.n_max},
         {"nominal_lambda", config.nominal_lambda},
         {"gamma", config.gamma},
         {"dt", config.dt},
         {"horizon", config.effective_horizon()},
         {"n_paths", config.n_paths},
         {"seed", config.seed},
         {"output_dir", config.output_dir},
         {"threads", config.threads},
         {"full_resolution", config.full_resolution}};
  if (config.has_true_graph) j["true_graph"] = graph_to_json(config.true_graph);
  return j.dump(2);
}

RootedGraph parse_graph_spec(const std::string& spec) {
  RootedGraph g;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("bad edge spec: " + item);
    const auto colon = item.find(':', dash);
    const int j = std::stoi(item.substr(0, dash));
    const int k = std::stoi(item.substr(dash + 1, colon == std::string::npos
                                                      ? std::string::npos
                                                      : colon - dash - 1));
    const double w = colon == std::string::npos ? 1.0 : std::stod(item.substr(colon + 1));
    g.add_edge(j, k, w);
  }
  if (g.couplings.empty()) throw std::invalid_argument("graph spec has no edges: " + spec);
  return g;
}

}  // namespace spinet
