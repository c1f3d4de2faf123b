// Multi-model Bayesian filtering over graph classes: each model carries a
// conditional network state driven by the shared measurement record, and the
// probability simplex over models is updated from the innovation against the
// probability-weighted mixture.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spinet/graph.hpp"
#include "spinet/noise.hpp"
#include "spinet/quantum.hpp"
#include "spinet/sme.hpp"

namespace spinet {

struct Model {
  int class_id = 0;
  Matrix hamiltonian;
  DensityMatrix rho;
};

struct ModelBank {
  std::vector<Model> models;
  std::vector<double> probs;
  int n_spins = 0;

  size_t size() const { return models.size(); }
  // Checks the simplex (sum 1 within 1e-9, entries in [0,1]) and every state.
  void assert_valid() const;
};

// One model per catalog class with uniform coupling `nominal_lambda`, uniform
// prior and maximally mixed initial states on an n_spins register.
ModelBank make_nominal_bank(const GraphCatalog& catalog, int n_spins, double nominal_lambda);

// Probability-weighted mixture of the bank's states.
DensityMatrix mixture_state(const ModelBank& bank);

// Advances every model state by one measurement increment (each against its
// own innovation, then projected) and updates the probabilities against the
// mixture innovation, flooring at 1e-12 and renormalizing.
void filter_step(ModelBank& bank, const MeasurementSetup& m, double dY, double dt);

// Exact single-increment Bayes posterior with Gaussian likelihoods
// exp[-(dY - 2 sqrt(gamma) Tr(c rho_i) dt)^2 / (2 dt)]; the reference law the
// continuous probability update discretizes.
std::vector<double> bayes_discrete_oracle(const ModelBank& bank, const MeasurementSetup& m,
                                          double dY, double dt);

struct IdentificationConfig {
  double nominal_lambda = 1.0;
  double gamma = 1.0;
  double dt = 1e-3;
  double horizon = 5.0;       // in units of 1/gamma
  int n_paths = 50;
  uint64_t seed = 1;
  int record_stride = 0;      // 0: auto (<= 5000 recorded rows)
  int threads = 0;            // 0: hardware concurrency, capped by SPINET_THREADS
};

struct IdentificationResult {
  std::vector<double> times;
  // mean_probs[t][i]: path-averaged probability of class i at times[t].
  std::vector<std::vector<double>> mean_probs;
  std::vector<int> class_ids;
  int decision_class = 0;
  int runner_up_class = 0;
  double top2_gap = 0.0;
  int excluded_paths = 0;
  std::vector<double> final_probs;
};

// Full identification experiment: for each path, simulate the true system,
// feed its measurement record to the filter, average the probability
// trajectories over paths and decide by the largest final mean probability
// (ties broken by lowest class id).
IdentificationResult run_identification(const RootedGraph& true_graph, const GraphCatalog& catalog,
                                        const IdentificationConfig& config);

// Single-path helper used by the experiment loop and by tests: runs the true
// system and the bank in lockstep for `steps` increments. Returns false when
// the path was aborted by numerical instability.
bool identification_path(DensityMatrix& true_rho, const Matrix& true_h, ModelBank& bank,
                         const MeasurementSetup& m, double dt, int steps, const NoisePath& noise,
                         const std::function<void(int step, const ModelBank&)>& on_step = {});

}  // namespace spinet
