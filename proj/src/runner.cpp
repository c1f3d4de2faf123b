#include "spinet/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"
#include "spinet/adaptive.hpp"
#include "spinet/filter.hpp"
#include "spinet/steady.hpp"

namespace spinet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json graph_json(const RootedGraph& g, bool with_couplings) {
  json edges = json::array();
  for (const auto& [e, w] : g.couplings) {
    if (with_couplings)
      edges.push_back({e.first, e.second, w});
    else
      edges.push_back({e.first, e.second});
  }
  return {{"n_nodes", g.n_nodes}, {"edges", edges}};
}

void write_manifest(const ExperimentConfig& config, const std::vector<std::string>& artifacts) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%FT%TZ");
  json manifest{{"tool", "spinet"},
                {"version", kVersion},
                {"mode", mode_name(config.mode)},
                {"seed", config.seed},
                {"generated_at", stamp.str()},
                {"config", json::parse(config_to_json(config))},
                {"artifacts", artifacts}};
  write_text(fs::path(config.output_dir) / "manifest.json", manifest.dump(2) + "\n");
}

int run_enumerate(const ExperimentConfig& config, std::ostream& log) {
  const GraphCatalog catalog = enumerate_graphs(config.n_max);
  json out = json::array();
  for (const auto& cls : catalog.classes) {
    json edges = json::array();
    for (const auto& [j, k] : cls.graph.edges()) edges.push_back({j, k});
    out.push_back({{"class_id", cls.class_id}, {"n_nodes", cls.graph.n_nodes}, {"edges", edges}});
  }
  write_text(fs::path(config.output_dir) / "catalog.json", out.dump(2) + "\n");
  write_manifest(config, {"catalog.json"});
  log << "enumerated " << catalog.classes.size() << " graph classes for n_max=" << config.n_max
      << "\n";
  return 0;
}

int run_identify(const ExperimentConfig& config, std::ostream& log) {
  const GraphCatalog catalog = enumerate_graphs(config.n_max);
  IdentificationConfig id_config;
  id_config.nominal_lambda = config.nominal_lambda;
  id_config.gamma = config.gamma;
  id_config.dt = config.dt;
  id_config.horizon = config.effective_horizon();
  id_config.n_paths = config.n_paths;
  id_config.seed = config.seed;
  id_config.threads = config.threads;
  id_config.record_stride = config.full_resolution ? 1 : 0;

  const IdentificationResult result = run_identification(config.true_graph, catalog, id_config);

  // Mean probability trajectories.
  std::ostringstream csv;
  csv << "t";
  for (size_t i = 0; i < result.class_ids.size(); ++i) csv << ",p_" << result.class_ids[i];
  csv << "\n";
  for (size_t r = 0; r < result.times.size(); ++r) {
    csv << format_double(result.times[r]);
    for (const double p : result.mean_probs[r]) csv << "," << format_double(p);
    csv << "\n";
  }
  write_text(fs::path(config.output_dir) / "mean_probs.csv", csv.str());

  json class_edges = json::array();
  for (const auto& cls : catalog.classes) {
    json edges = json::array();
    for (const auto& [j, k] : cls.graph.edges()) edges.push_back({j, k});
    class_edges.push_back({{"class_id", cls.class_id}, {"edges", edges}});
  }
  // Trajectories thinned again for the JSON echo.
  const size_t json_stride = std::max<size_t>(1, result.times.size() / 200);
  json traj = json::array();
  for (size_t r = 0; r < result.times.size(); r += json_stride)
    traj.push_back({{"t", result.times[r]}, {"p", result.mean_probs[r]}});
  json summary{{"config_echo", json::parse(config_to_json(config))},
               {"m", result.class_ids.size()},
               {"class_edge_lists", class_edges},
               {"mean_prob_trajectories", traj},
               {"decision_class", result.decision_class},
               {"runner_up_class", result.runner_up_class},
               {"top2_gap", result.top2_gap},
               {"excluded_paths", result.excluded_paths},
               {"final_probs", result.final_probs}};
  write_text(fs::path(config.output_dir) / "summary.json", summary.dump(2) + "\n");
  write_manifest(config, {"mean_probs.csv", "summary.json"});
  log << "decision: class " << result.decision_class << " (runner-up " << result.runner_up_class
      << ", gap " << result.top2_gap << ", excluded " << result.excluded_paths << " paths)\n";
  return 0;
}

int run_initialize(const ExperimentConfig& config, std::ostream& log) {
  InitializationConfig init_config;
  init_config.gamma = config.gamma;
  init_config.dt = config.dt;
  init_config.horizon = config.effective_horizon();
  init_config.n_paths = config.n_paths;
  init_config.seed = config.seed;
  init_config.threads = config.threads;
  init_config.record_stride = config.full_resolution ? 1 : 0;

  const auto records = run_initialization(config.true_graph, init_config);

  std::vector<std::string> artifacts;
  std::vector<double> finals;
  int aborted = 0;
  for (const auto& rec : records) {
    char name[64];
    std::snprintf(name, sizeof(name), "trajectory_%04d.csv", rec.path_index);
    std::ostringstream dump;
    dump << "t,dY,fidelity,cost\n";
    for (const auto& s : rec.samples)
      dump << format_double(s.t) << "," << format_double(s.dY) << "," << format_double(s.fidelity)
           << "," << format_double(s.cost) << "\n";
    write_text(fs::path(config.output_dir) / name, dump.str());
    artifacts.push_back(name);

    std::snprintf(name, sizeof(name), "fidelity_%04d.csv", rec.path_index);
    std::ostringstream fid;
    fid << "t,fidelity,cost,theta,delta\n";
    for (const auto& s : rec.samples)
      fid << format_double(s.t) << "," << format_double(s.fidelity) << ","
          << format_double(s.cost) << "," << format_double(s.theta) << ","
          << format_double(s.delta) << "\n";
    write_text(fs::path(config.output_dir) / name, fid.str());
    artifacts.push_back(name);

    if (rec.aborted)
      ++aborted;
    else
      finals.push_back(rec.final_fidelity());
  }
  if (finals.empty()) throw InstabilityError("all initialization paths aborted");

  std::vector<double> sorted = finals;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const double pos = q * double(sorted.size() - 1);
    const size_t lo = size_t(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
  };
  json summary{{"config_echo", json::parse(config_to_json(config))},
               {"n_paths", config.n_paths},
               {"aborted_paths", aborted},
               {"final_fidelity",
                {{"min", sorted.front()},
                 {"p25", quantile(0.25)},
                 {"median", quantile(0.5)},
                 {"p75", quantile(0.75)},
                 {"max", sorted.back()},
                 {"mean", std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size()}}}};
  write_text(fs::path(config.output_dir) / "summary.json", summary.dump(2) + "\n");
  artifacts.push_back("summary.json");
  write_manifest(config, artifacts);
  log << "initialization: median final fidelity " << quantile(0.5) << " over "
      << finals.size() << " paths (" << aborted << " aborted)\n";
  return 0;
}

int run_steady_states(const ExperimentConfig& config, std::ostream& log) {
  const SteadyStateReport report = pure_steady_states(config.true_graph);
  json states = json::array();
  for (const auto& s : report.states) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.vector.size(); ++i)
      amps.push_back({s.vector(i).real(), s.vector(i).imag()});
    states.push_back({{"amplitudes", amps}, {"h_eigenvalue", s.h_eigenvalue}});
  }
  json out{{"graph", graph_json(config.true_graph, true)},
           {"unique_target", report.unique_target},
           {"states", states}};
  if (report.symmetry_witness) {
    json witness = json::array();
    for (int v = 1; v < int(report.symmetry_witness->size()); ++v)
      witness.push_back((*report.symmetry_witness)[v]);
    out["symmetry_witness"] = witness;
  } else {
    out["symmetry_witness"] = nullptr;
  }
  write_text(fs::path(config.output_dir) / "report.json", out.dump(2) + "\n");
  write_manifest(config, {"report.json"});
  log << "steady states: " << report.states.size() << " (unique_target="
      << (report.unique_target ? "true" : "false") << ")\n";
  return 0;
}

int run_validate(const ExperimentConfig& config, std::ostream& log) {
  const auto checks = run_validation_checks();
  bool all_ok = true;
  json entries = json::array();
  for (const auto& check : checks) {
    all_ok = all_ok && check.passed;
    log << (check.passed ? "[ok]   " : "[FAIL] ") << check.name;
    if (!check.detail.empty()) log << ": " << check.detail;
    log << "\n";
    entries.push_back({{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
  }
  json out{{"all_passed", all_ok}, {"checks", entries}};
  write_text(fs::path(config.output_dir) / "validation.json", out.dump(2) + "\n");
  write_manifest(config, {"validation.json"});
  log << (all_ok ? "all checks passed\n" : "some checks FAILED\n");
  return all_ok ? 0 : 1;
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
  try {
    config.validate();
    fs::create_directories(config.output_dir);
    switch (config.mode) {
      case RunMode::enumerate_catalog: return run_enumerate(config, log);
      case RunMode::identify: return run_identify(config, log);
      case RunMode::initialize: return run_initialize(config, log);
      case RunMode::steady_states: return run_steady_states(config, log);
      case RunMode::validate: return run_validate(config, log);
    }
    return 2;
  } catch (const InstabilityError& err) {
    log << "numeric instability: " << err.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& err) {
    log << "configuration error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    log << "error: " << err.what() << "\n";
    return 2;
  }
}

namespace {

ValidationCheck check(const std::string& name, bool ok, const std::string& detail = "") {
  return {name, ok, detail};
}

}  // namespace

std::vector<ValidationCheck> run_validation_checks() {
  std::vector<ValidationCheck> out;

  {  // Operator algebra: hermitian, involutory, traceless embeddings.
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n)
      for (int site = 1; site <= n; ++site)
        for (const auto axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
          const Matrix p = pauli_operator(axis, site, n);
          const Eigen::Index dim = p.rows();
          worst = std::max(worst, hermiticity_defect(p));
          worst = std::max(worst, (p * p - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
          worst = std::max(worst, std::abs(p.trace()));
        }
    out.push_back(check("pauli operator algebra", worst <= 1e-12,
                        "max defect " + format_double(worst)));
  }

  {  // Drift and diffusion are traceless; the coherent target is stationary.
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist;
    double worst = 0.0;
    const MeasurementSetup m(pauli_operator(PauliAxis::Z, 1, 2), 1.0);
    RootedGraph chain;
    chain.add_edge(1, 2, 1.0);
    const Matrix h = build_hamiltonian(chain, 2);
    for (int rep = 0; rep < 50; ++rep) {
      Matrix a(4, 4);
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = Complex(dist(rng), dist(rng));
      const Matrix rho = project(a * a.adjoint());
      worst = std::max(worst, std::abs(drift(rho, h, m).trace()));
      worst = std::max(worst, std::abs(diffusion(rho, m).trace()));
    }
    const DensityMatrix target = basis_state(2, 0);
    const StepResult step = step_true_system(target, h, m, 1e-3, 0.031);
    const double move = (step.rho.mat - target.mat).cwiseAbs().maxCoeff();
    out.push_back(check("sme drift/diffusion invariants", worst <= 1e-12 && move <= 1e-14,
                        "max trace defect " + format_double(worst) + ", target drift " +
                            format_double(move)));
  }

  {  // Catalog counts for small networks.
    const int expected[] = {1, 2, 5, 16};
    bool ok = true;
    std::string detail;
    for (int n = 1; n <= 4; ++n) {
      const size_t m = enumerate_graphs(n).classes.size();
      detail += (n > 1 ? ", " : "") + std::to_string(m);
      ok = ok && m == size_t(expected[n - 1]);
    }
    out.push_back(check("catalog counts n=1..4", ok, "got " + detail));
  }

  {  // Single-excitation block of the symmetric pentagon network.
    RootedGraph pentagon;
    pentagon.add_edge(1, 2, 1.0);
    pentagon.add_edge(2, 3, 1.2);
    pentagon.add_edge(3, 4, 0.9);
    pentagon.add_edge(4, 5, 1.2);
    pentagon.add_edge(1, 5, 1.0);
    const NodePermutation witness = {0, 1, 5, 4, 3, 2};
    const auto analysis = single_excitation_analysis(pentagon, witness);
    Matrix expected(4, 4);
    expected << 0, 2.4, 0, 0, 2.4, 0, 1.8, 0, 0, 1.8, 0, 2.4, 0, 0, 2.4, 0;
    const double defect = (analysis.h1 - expected).cwiseAbs().maxCoeff();
    bool roots_ok = analysis.antisymmetric_eigenvectors.size() == 2;
    if (roots_ok)
      for (const auto& [mu, v] : analysis.antisymmetric_eigenvectors) {
        const double a = (v(1) / v(0)).real();
        roots_ok = roots_ok && std::abs(4 * a * a + 3 * a - 4) <= 1e-12;
      }
    out.push_back(check("single-excitation block reproduction", defect <= 1e-12 && roots_ok,
                        "block defect " + format_double(defect)));
  }

  {  // Cost drift equals the generator route and is nonpositive in closed loop.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst_diff = 0.0, worst_sign = -1.0;
    const Matrix sz = pauli_matrix(PauliAxis::Z);
    for (int rep = 0; rep < 200; ++rep) {
      BlochParams b{uni(rng), uni(rng) * 3.14159, (2 * uni(rng) - 1) * 3.14159};
      const Matrix rho = bloch_state(b);
      const AdaptiveAngles angles =
          rep % 2 == 0 ? AdaptiveAngles{uni(rng), (2 * uni(rng) - 1) * 3.14159}
                       : adaptive_angles(bloch_params(rho));
      const MeasurementSetup m(build_adaptive_operator(angles, 1), 1.0);
      const double generator = -expectation(sz, drift(rho, Matrix::Zero(2, 2), m));
      const double closed_form = cost_drift(rho, angles, 1.0);
      worst_diff = std::max(worst_diff, std::abs(generator - closed_form));
      if (rep % 2 == 1) worst_sign = std::max(worst_sign, closed_form);
    }
    out.push_back(check("cost drift generator identity", worst_diff <= 1e-10 && worst_sign <= 0.0,
                        "max |difference| " + format_double(worst_diff)));
  }

  {  // Bloch parameterization round trip.
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uni(0.05, 0.95);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const BlochParams b{uni(rng), uni(rng) * 3.0, (2 * uni(rng) - 1) * 3.0};
      const BlochParams back = bloch_params(bloch_state(b));
      worst = std::max({worst, std::abs(back.r - b.r), std::abs(back.alpha - b.alpha),
                        std::abs(back.beta - b.beta)});
    }
    out.push_back(check("bloch round trip", worst <= 1e-10, "max defect " + format_double(worst)));
  }

  return out;
}

}  // namespace spinet
