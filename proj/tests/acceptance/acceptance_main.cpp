// Acceptance suite: one entry per release criterion, each printing a single
// pass/fail line. Run with no arguments for the full suite or with
// --criterion N (repeatable) for a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spinet/adaptive.hpp"
#include "spinet/filter.hpp"
#include "spinet/steady.hpp"
#include "../test_util.hpp"

using namespace spinet;

namespace {

struct Failure : std::runtime_error {
  explicit Failure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool cond, const std::string& message) {
  if (!cond) throw Failure(message);
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

int class_id_of(const GraphCatalog& catalog, const RootedGraph& g) {
  const std::string key = canonical_form(g);
  for (const auto& cls : catalog.classes)
    if (cls.key == key) return cls.class_id;
  throw Failure("graph class not found in catalog");
}

RootedGraph chain5_nonuniform() {
  RootedGraph g;
  g.add_edge(1, 2, 1.2);
  g.add_edge(2, 3, 0.8);
  g.add_edge(3, 4, 1.1);
  g.add_edge(4, 5, 0.9);
  return g;
}

RootedGraph chain5_init() {
  RootedGraph g;
  g.add_edge(1, 2, 1.0);
  g.add_edge(2, 3, 1.2);
  g.add_edge(3, 4, 0.9);
  g.add_edge(4, 5, 1.2);
  return g;
}

RootedGraph pentagon() {
  RootedGraph g;
  g.add_edge(1, 2, 1.0);
  g.add_edge(2, 3, 1.2);
  g.add_edge(3, 4, 0.9);
  g.add_edge(4, 5, 1.2);
  g.add_edge(1, 5, 1.0);
  return g;
}

// --- criterion 1: catalog counts ------------------------------------------

std::string criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const size_t m3 = enumerate_graphs(3).classes.size();
  const size_t m4 = enumerate_graphs(4).classes.size();
  const size_t m5 = enumerate_graphs(5).classes.size();
  const size_t oracle4 = spinet::testing::brute_force_classes(4).size();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(m3 == 5, fmt("n_max=3 gave %zu classes, expected 5", m3));
  require(m5 == 74, fmt("n_max=5 gave %zu classes, expected 74", m5));
  require(m4 == 16 && oracle4 == 16,
          fmt("n_max=4 gave %zu classes vs oracle %zu, expected 16", m4, oracle4));
  require(secs < 10.0, fmt("enumeration took %.1f s, budget 10 s", secs));
  return fmt("m(3)=5, m(4)=16=oracle, m(5)=74 in %.2f s", secs);
}

// --- criterion 2: three-spin identification --------------------------------

std::string criterion_2() {
  const GraphCatalog catalog = enumerate_graphs(3);
  RootedGraph chain;
  chain.add_edge(1, 2, 1.0);
  chain.add_edge(2, 3, 1.0);
  const int true_id = class_id_of(catalog, chain);

  IdentificationConfig config;
  config.n_paths = 50;
  config.horizon = 5.0;
  config.dt = 1e-3;
  config.seed = 1;
  const IdentificationResult result = run_identification(chain, catalog, config);

  require(result.decision_class == true_id,
          fmt("decision was class %d, true class is %d", result.decision_class, true_id));
  double best_other = 0.0;
  for (size_t i = 0; i < result.final_probs.size(); ++i)
    if (result.class_ids[i] != true_id) best_other = std::max(best_other, result.final_probs[i]);
  const double winner = result.final_probs[size_t(true_id - 1)];
  const double margin = winner - best_other;
  require(margin >= 0.05, fmt("final margin %.4f below 0.05", margin));
  return fmt("chain class %d decided with margin %.3f over %d paths (%d excluded)", true_id,
             margin, config.n_paths, result.excluded_paths);
}

// --- criterion 3: five-spin identification ---------------------------------

std::string run_five_spin_case(const GraphCatalog& catalog, const RootedGraph& truth,
                               uint64_t seed, const char* label) {
  const int true_id = class_id_of(catalog, truth);
  IdentificationConfig config;
  config.n_paths = 20;
  config.horizon = 10.0;
  config.dt = 1e-3;
  config.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  const IdentificationResult result = run_identification(truth, catalog, config);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  require(secs < 3600.0, fmt("%s exceeded the one-hour budget (%.0f s)", label, secs));
  require(result.decision_class == true_id,
          fmt("%s: decision was class %d, true class is %d (gap %.4f)", label,
              result.decision_class, true_id, result.top2_gap));
  return fmt("%s -> class %d (gap %.4f, %.0f s)", label, true_id, result.top2_gap, secs);
}

std::string criterion_3() {
  const GraphCatalog catalog = enumerate_graphs(5);
  require(catalog.classes.size() == 74, "bank must hold 74 models");

  RootedGraph tree;  // uniform couplings, farthest node two hops from the root
  tree.add_edge(1, 2, 1.0);
  tree.add_edge(1, 3, 1.0);
  tree.add_edge(2, 4, 1.0);
  tree.add_edge(3, 5, 1.0);
  const std::string a = run_five_spin_case(catalog, tree, 3, "uniform tree");
  const std::string b = run_five_spin_case(catalog, chain5_nonuniform(), 3, "non-uniform chain");
  return a + "; " + b;
}

// --- criterion 4: star ambiguity -------------------------------------------

std::string criterion_4() {
  const GraphCatalog catalog = enumerate_graphs(5);
  RootedGraph star;
  star.add_edge(1, 2, 1.2);
  star.add_edge(1, 3, 0.8);
  star.add_edge(1, 4, 1.1);
  star.add_edge(1, 5, 0.9);
  const int true_id = class_id_of(catalog, star);

  IdentificationConfig config;
  config.n_paths = 20;
  config.horizon = 5.0;
  config.seed = 3;
  const IdentificationResult result = run_identification(star, catalog, config);
  const bool in_top2 =
      result.decision_class == true_id || result.runner_up_class == true_id;
  require(in_top2, fmt("true class %d not in top-2 (%d, %d)", true_id, result.decision_class,
                       result.runner_up_class));
  return fmt("true star class %d in top-2 (%d, %d), gap %.4f", true_id, result.decision_class,
             result.runner_up_class, result.top2_gap);
}

// --- criterion 5: single-spin convergence -----------------------------------

std::string criterion_5() {
  RootedGraph single;
  single.n_nodes = 1;

  InitializationConfig config;
  config.n_paths = 200;
  config.horizon = 10.0;
  config.dt = 1e-3;
  config.seed = 42;
  config.record_stride = 1;
  const auto from_mixed = run_initialization(single, config);
  double worst = 1.0;
  for (const auto& rec : from_mixed) {
    require(!rec.aborted, "path aborted");
    worst = std::min(worst, rec.max_fidelity());
  }
  require(worst >= 0.99, fmt("a path from I/2 peaked at fidelity %.5f < 0.99", worst));

  // Twenty random mixed initial states, ten paths each.
  std::mt19937_64 rng(2025);
  double worst_mixed = 1.0;
  for (int state = 0; state < 20; ++state) {
    const DensityMatrix rho0{spinet::testing::random_density(2, rng), 1};
    InitializationConfig per_state = config;
    per_state.n_paths = 10;
    per_state.seed = 4242 + uint64_t(state);
    per_state.record_stride = 1;
    const auto records = run_initialization(single, per_state, &rho0);
    for (const auto& rec : records) {
      require(!rec.aborted, "path aborted");
      worst_mixed = std::min(worst_mixed, rec.max_fidelity());
    }
  }
  require(worst_mixed >= 0.99,
          fmt("a path from a random mixed state peaked at %.5f < 0.99", worst_mixed));

  // Path-averaged cost must be nonincreasing within twice the Monte Carlo
  // standard error of the paired decrements.
  const int stride = 500;
  const size_t checkpoints = from_mixed[0].samples.size() / stride;
  for (size_t c = 1; c < checkpoints; ++c) {
    double mean = 0.0, var = 0.0;
    for (const auto& rec : from_mixed)
      mean += rec.samples[c * stride].cost - rec.samples[(c - 1) * stride].cost;
    mean /= double(from_mixed.size());
    for (const auto& rec : from_mixed) {
      const double d =
          rec.samples[c * stride].cost - rec.samples[(c - 1) * stride].cost - mean;
      var += d * d;
    }
    const double se = std::sqrt(var) / double(from_mixed.size());
    require(mean <= 2.0 * se, fmt("mean cost increased by %.3g (2se=%.3g) at checkpoint %zu",
                                  mean, 2.0 * se, c));
  }
  return fmt("400 paths all peaked above 0.99 (worst %.5f / %.5f); mean cost monotone", worst,
             worst_mixed);
}

// --- criterion 6: cost-drift generator identity -----------------------------

std::string criterion_6() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const Matrix sz = pauli_matrix(PauliAxis::Z);
  double worst_diff = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Matrix rho = spinet::testing::random_density(2, rng);
    const AdaptiveAngles angles{3.2 * (2 * uni(rng) - 1), 3.2 * (2 * uni(rng) - 1)};
    const double gamma = 0.25 + 2.0 * uni(rng);
    const MeasurementSetup m(build_adaptive_operator(angles, 1), gamma);
    const double generator = -expectation(sz, drift(rho, Matrix::Zero(2, 2), m));
    worst_diff = std::max(worst_diff, std::abs(cost_drift(rho, angles, gamma) - generator));
  }
  require(worst_diff <= 1e-10, fmt("identity violated by %.3g", worst_diff));

  double worst_sign = -1.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Matrix rho = spinet::testing::random_density(2, rng);
    worst_sign = std::max(worst_sign, cost_drift(rho, adaptive_angles(bloch_params(rho)), 1.0));
  }
  require(worst_sign <= 0.0, fmt("adaptive drift reached %.3g > 0", worst_sign));
  return fmt("identity within %.2g; adaptive drift max %.2g", worst_diff, worst_sign);
}

// --- criterion 7: single-excitation block reproduction ----------------------

std::string criterion_7() {
  const auto analysis = single_excitation_analysis(pentagon(), {0, 1, 5, 4, 3, 2});
  Matrix expected(4, 4);
  expected << 0, 2.4, 0, 0, 2.4, 0, 1.8, 0, 0, 1.8, 0, 2.4, 0, 0, 2.4, 0;
  const double defect = (analysis.h1 - expected).cwiseAbs().maxCoeff();
  require(defect <= 1e-12, fmt("block matrix deviates by %.3g", defect));

  require(analysis.antisymmetric_eigenvectors.size() == 2,
          fmt("expected 2 antisymmetric eigenvectors, got %zu",
              analysis.antisymmetric_eigenvectors.size()));
  const double root_plus = (-3.0 + std::sqrt(73.0)) / 8.0;
  const double root_minus = (-3.0 - std::sqrt(73.0)) / 8.0;
  double worst_poly = 0.0, worst_root = 0.0;
  for (const auto& [mu, v] : analysis.antisymmetric_eigenvectors) {
    const double a = (v(1) / v(0)).real();
    worst_poly = std::max(worst_poly, std::abs(4.0 * a * a + 3.0 * a - 4.0));
    worst_root = std::max(worst_root,
                          std::min(std::abs(a - root_plus), std::abs(a - root_minus)));
  }
  require(worst_poly <= 1e-12, fmt("4a^2+3a-4 residual %.3g", worst_poly));
  require(worst_root <= 1e-12, fmt("root mismatch %.3g", worst_root));
  return fmt("block exact; quadratic residual %.2g, root error %.2g", worst_poly, worst_root);
}

// --- criterion 8: symmetry sweep over the n<=4 catalog ----------------------

std::string criterion_8() {
  const GraphCatalog catalog = enumerate_graphs(4);
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> uni(0.6, 1.4);
  int symmetric_count = 0;
  double worst_motion = 0.0;

  for (const auto& cls : catalog.classes) {
    // Couplings constant on the edge orbits of the topology's automorphisms,
    // so the weighted graph keeps every symmetry.
    const auto autos = root_fixing_automorphisms(cls.graph);
    const auto edges = cls.graph.edges();
    std::vector<int> orbit(edges.size());
    std::iota(orbit.begin(), orbit.end(), 0);
    const auto find_orbit = [&](int e) {
      while (orbit[e] != e) e = orbit[e] = orbit[orbit[e]];
      return e;
    };
    for (const auto& perm : autos)
      for (size_t e = 0; e < edges.size(); ++e) {
        int pj = perm[edges[e].first], pk = perm[edges[e].second];
        if (pj > pk) std::swap(pj, pk);
        for (size_t f = 0; f < edges.size(); ++f)
          if (edges[f] == std::make_pair(pj, pk)) orbit[find_orbit(int(e))] = find_orbit(int(f));
      }
    RootedGraph weighted;
    weighted.n_nodes = cls.graph.n_nodes;
    std::map<int, double> orbit_coupling;
    for (size_t e = 0; e < edges.size(); ++e) {
      const int root = find_orbit(int(e));
      if (!orbit_coupling.count(root)) orbit_coupling[root] = uni(rng);
      weighted.add_edge(edges[e].first, edges[e].second, orbit_coupling[root]);
    }

    const bool symmetric = root_fixing_automorphisms(weighted).size() > 1;
    const SteadyStateReport report = pure_steady_states(weighted);
    if (symmetric) {
      ++symmetric_count;
      require(report.states.size() >= 2,
              fmt("class %d is symmetric but reported %zu steady states", cls.class_id,
                  report.states.size()));
    }

    const int n = weighted.n_nodes;
    const Matrix h = build_hamiltonian(weighted, n);
    const MeasurementSetup m(pauli_operator(PauliAxis::Z, 1, n), 1.0);
    for (const auto& s : report.states) {
      DensityMatrix rho{s.vector * s.vector.adjoint(), n};
      const Matrix rho0 = rho.mat;
      const NoisePath noise{9000 + uint64_t(cls.class_id), 0, 1e-3};
      for (int k = 0; k < 100; ++k)
        rho = step_true_system(rho, h, m, 1e-3, noise.increment(k)).rho;
      worst_motion = std::max(worst_motion, (rho.mat - rho0).norm());
    }
  }
  require(worst_motion <= 1e-9, fmt("a steady state moved by %.3g over 100 steps", worst_motion));
  return fmt("%d symmetric classes all have extra steady states; max drift %.2g over 100 steps",
             symmetric_count, worst_motion);
}

// --- criterion 9: initialization dichotomy ----------------------------------

std::string criterion_9() {
  const RootedGraph chain = chain5_init();
  require(pure_steady_states(chain).unique_target, "chain must have the unique target state");

  InitializationConfig config;
  config.n_paths = 40;
  config.horizon = 30.0;
  config.dt = 1e-3;
  config.seed = 7;
  config.record_stride = 1;

  const auto chain_records = run_initialization(chain, config);
  int reached = 0;
  for (const auto& rec : chain_records)
    if (!rec.aborted && rec.max_fidelity() >= 0.95) ++reached;

  const auto pentagon_records = run_initialization(pentagon(), config);
  int stuck = 0;
  for (const auto& rec : pentagon_records)
    if (!rec.aborted && rec.final_fidelity() < 0.9) ++stuck;

  require(stuck >= 10, fmt("only %d/40 pentagon paths ended below 0.9 (need >= 10)", stuck));
  require(reached >= 38,
          fmt("only %d/40 chain paths reached 0.95 by t=30 (need >= 38); pentagon stuck %d/40",
              reached, stuck));
  return fmt("chain reached 0.95 on %d/40 paths; pentagon ended below 0.9 on %d/40", reached,
             stuck);
}

// --- criterion 10: filter consistency ---------------------------------------

std::string criterion_10() {
  // Single-model bank against the true system on a shared noise path.
  RootedGraph pair;
  pair.add_edge(1, 2, 1.0);
  const Matrix h = build_hamiltonian(pair, 2);
  const MeasurementSetup m(pauli_operator(PauliAxis::Z, 1, 2), 1.0);
  ModelBank bank;
  bank.n_spins = 2;
  bank.models.push_back({1, h, maximally_mixed(2)});
  bank.probs = {1.0};
  DensityMatrix truth = maximally_mixed(2);
  const NoisePath noise{1010, 0, 1e-3};
  double worst_track = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const StepResult step = step_true_system(truth, h, m, 1e-3, noise.increment(k));
    truth = step.rho;
    filter_step(bank, m, step.dY, 1e-3);
    worst_track =
        std::max(worst_track, (bank.models[0].rho.mat - truth.mat).cwiseAbs().maxCoeff());
  }
  require(worst_track <= 1e-8, fmt("single-model tracking error %.3g", worst_track));

  // Continuous update vs discrete Bayes posterior: first-order agreement.
  ModelBank mixed;
  mixed.n_spins = 2;
  mixed.models.push_back({1, h, maximally_mixed(2)});
  mixed.models.push_back({2, Matrix::Zero(4, 4), maximally_mixed(2)});
  mixed.probs = {0.5, 0.5};
  const NoisePath warm{2020, 0, 1e-3};
  for (int k = 0; k < 200; ++k)
    filter_step(mixed, m, 0.5 * 1e-3 + warm.increment(k), 1e-3);

  const double xi = 0.7;
  const std::vector<double> dts = {1e-3, 5e-4, 2.5e-4};
  std::vector<double> errs;
  for (const double dt : dts) {
    const double dY = 2.0 * m.mean(mixture_state(mixed).mat) * dt + xi * std::sqrt(dt);
    const auto oracle = bayes_discrete_oracle(mixed, m, dY, dt);
    ModelBank stepped = mixed;
    filter_step(stepped, m, dY, dt);
    double err = 0.0;
    for (size_t i = 0; i < oracle.size(); ++i) err += std::abs(oracle[i] - stepped.probs[i]);
    errs.push_back(err);
  }
  require(errs.back() > 0.0, "oracle difference vanished; slope undefined");
  const double slope = std::log(errs.front() / errs.back()) / std::log(dts.front() / dts.back());
  require(slope >= 0.8 && slope <= 1.2, fmt("log-log slope %.3f outside [0.8, 1.2]", slope));
  return fmt("tracking error %.2g; oracle-agreement slope %.3f", worst_track, slope);
}

struct Criterion {
  int id;
  const char* name;
  std::function<std::string()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "catalog counts", criterion_1},
      {2, "three-spin identification", criterion_2},
      {3, "five-spin identification", criterion_3},
      {4, "star ambiguity", criterion_4},
      {5, "single-spin convergence", criterion_5},
      {6, "cost-drift generator identity", criterion_6},
      {7, "single-excitation block reproduction", criterion_7},
      {8, "symmetry sweep", criterion_8},
      {9, "initialization dichotomy", criterion_9},
      {10, "filter self-consistency", criterion_10},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& c : criteria()) std::printf("%2d  %s\n", c.id, c.name);
      return 0;
    } else {
      std::fprintf(stderr, "usage: %s [--list] [--criterion N]...\n", argv[0]);
      return 2;
    }
  }

  int failures = 0, ran = 0;
  for (const auto& criterion : criteria()) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
      continue;
    ++ran;
    try {
      const std::string detail = criterion.run();
      std::printf("[PASS] criterion %d (%s): %s\n", criterion.id, criterion.name, detail.c_str());
    } catch (const std::exception& err) {
      ++failures;
      std::printf("[FAIL] criterion %d (%s): %s\n", criterion.id, criterion.name, err.what());
    }
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no matching criterion\n");
    return 2;
  }
  std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
