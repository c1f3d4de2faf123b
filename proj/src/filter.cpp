#include "spinet/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinet/parallel.hpp"

namespace spinet {

namespace {
constexpr double kProbFloor = 1e-12;
}

void ModelBank::assert_valid() const {
  if (models.size() != probs.size())
    throw std::invalid_argument("bank has mismatched model and probability counts");
  double sum = 0.0;
  for (const double p : probs) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities do not sum to 1");
  for (const auto& model : models) model.rho.assert_valid();
}

ModelBank make_nominal_bank(const GraphCatalog& catalog, int n_spins, double nominal_lambda) {
  if (!(nominal_lambda > 0.0)) throw std::invalid_argument("nominal coupling must be positive");
  ModelBank bank;
  bank.n_spins = n_spins;
  const DensityMatrix rho0 = maximally_mixed(n_spins);
  for (const auto& cls : catalog.classes) {
    RootedGraph g = cls.graph;
    for (auto& [e, w] : g.couplings) w = nominal_lambda;
    bank.models.push_back({cls.class_id, build_hamiltonian(g, n_spins), rho0});
  }
  bank.probs.assign(bank.models.size(), 1.0 / double(bank.models.size()));
  return bank;
}

DensityMatrix mixture_state(const ModelBank& bank) {
  if (bank.models.empty()) throw std::invalid_argument("empty model bank");
  Matrix mix = Matrix::Zero(bank.models[0].rho.dim(), bank.models[0].rho.dim());
  for (size_t i = 0; i < bank.size(); ++i) mix += bank.probs[i] * bank.models[i].rho.mat;
  return {mix, bank.n_spins};
}

void filter_step(ModelBank& bank, const MeasurementSetup& m, double dY, double dt) {
  const size_t n = bank.size();
  const double sqrt_gamma = std::sqrt(m.gamma);

  std::vector<double> z(n);
  for (size_t i = 0; i < n; ++i) z[i] = m.mean(bank.models[i].rho.mat);
  const DensityMatrix mixture = mixture_state(bank);
  const double z_mix = m.mean(mixture.mat);

  // State updates: each model against its own innovation.
  for (size_t i = 0; i < n; ++i) {
    Matrix& rho = bank.models[i].rho.mat;
    const double innovation = dY - 2.0 * sqrt_gamma * z[i] * dt;
    const Matrix raw =
        rho + drift(rho, bank.models[i].hamiltonian, m) * dt + diffusion(rho, m) * innovation;
    rho = project(raw);
  }

  // Probability updates: every model against the mixture innovation.
  const double mix_innovation = dY - 2.0 * sqrt_gamma * z_mix * dt;
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double p = bank.probs[i] * (1.0 + 2.0 * sqrt_gamma * (z[i] - z_mix) * mix_innovation);
    p = std::max(p, kProbFloor);
    bank.probs[i] = p;
    sum += p;
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw InstabilityError("model probabilities underflowed or diverged");
  for (double& p : bank.probs) p /= sum;
}

std::vector<double> bayes_discrete_oracle(const ModelBank& bank, const MeasurementSetup& m,
                                          double dY, double dt) {
  const size_t n = bank.size();
  const double sqrt_gamma = std::sqrt(m.gamma);
  std::vector<double> post(n);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> log_like(n);
  for (size_t i = 0; i < n; ++i) {
    const double mean = 2.0 * sqrt_gamma * m.mean(bank.models[i].rho.mat) * dt;
    const double resid = dY - mean;
    log_like[i] = -resid * resid / (2.0 * dt) + std::log(bank.probs[i]);
    best = std::max(best, log_like[i]);
  }
  double norm = 0.0;
  for (size_t i = 0; i < n; ++i) {
    post[i] = std::exp(log_like[i] - best);
    norm += post[i];
  }
  for (double& p : post) p /= norm;
  return post;
}

bool identification_path(DensityMatrix& true_rho, const Matrix& true_h, ModelBank& bank,
                         const MeasurementSetup& m, double dt, int steps, const NoisePath& noise,
                         const std::function<void(int step, const ModelBank&)>& on_step) {
  try {
    for (int k = 0; k < steps; ++k) {
      const StepResult step = step_true_system(true_rho, true_h, m, dt, noise.increment(k));
      true_rho = step.rho;
      filter_step(bank, m, step.dY, dt);
      if (on_step) on_step(k, bank);
    }
  } catch (const InstabilityError&) {
    return false;
  }
  return true;
}

namespace {

int auto_stride(int steps, int requested, int max_rows = 5000) {
  if (requested > 0) return requested;
  return std::max(1, (steps + max_rows - 1) / max_rows);
}

}  // namespace

IdentificationResult run_identification(const RootedGraph& true_graph, const GraphCatalog& catalog,
                                        const IdentificationConfig& config) {
  if (catalog.classes.empty()) throw std::invalid_argument("empty catalog");
  const int n_spins = catalog.n_max;
  if (true_graph.n_nodes > n_spins)
    throw std::invalid_argument("true graph does not fit the catalog register");
  if (config.n_paths < 1) throw std::invalid_argument("need at least one path");

  const Matrix true_h = build_hamiltonian(true_graph, n_spins);
  const MeasurementSetup m(pauli_operator(PauliAxis::Z, 1, n_spins), config.gamma);
  const int steps = std::max(1, int(std::llround(config.horizon / (config.gamma * config.dt))));
  const int stride = auto_stride(steps, config.record_stride);
  const int n_records = steps / stride;
  const ModelBank bank_template = make_nominal_bank(catalog, n_spins, config.nominal_lambda);
  const size_t n_models = bank_template.size();

  struct PathOutput {
    bool ok = false;
    std::vector<std::vector<double>> probs;  // [record][model]
  };
  std::vector<PathOutput> outputs(config.n_paths);

  parallel_for_index(config.n_paths, config.threads, [&](int path) {
    DensityMatrix true_rho = maximally_mixed(n_spins);
    ModelBank bank = bank_template;
    PathOutput& out = outputs[path];
    out.probs.reserve(n_records);
    const NoisePath noise{config.seed, uint64_t(path), config.dt};
    out.ok = identification_path(true_rho, true_h, bank, m, config.dt, steps, noise,
                                 [&](int k, const ModelBank& b) {
                                   if ((k + 1) % stride == 0) out.probs.push_back(b.probs);
                                 });
  });

  IdentificationResult result;
  for (const auto& cls : catalog.classes) result.class_ids.push_back(cls.class_id);
  result.times.resize(n_records);
  for (int r = 0; r < n_records; ++r) result.times[r] = double(r + 1) * stride * config.dt;
  result.mean_probs.assign(n_records, std::vector<double>(n_models, 0.0));

  int included = 0;
  for (const auto& out : outputs) {  // deterministic reduction in path order
    if (!out.ok) {
      ++result.excluded_paths;
      continue;
    }
    ++included;
    for (int r = 0; r < n_records; ++r)
      for (size_t i = 0; i < n_models; ++i) result.mean_probs[r][i] += out.probs[r][i];
  }
  if (included == 0) throw InstabilityError("all identification paths were excluded");
  for (auto& row : result.mean_probs)
    for (double& p : row) p /= double(included);

  result.final_probs = result.mean_probs.back();
  size_t best = 0, second = n_models;
  for (size_t i = 1; i < n_models; ++i) {
    if (result.final_probs[i] > result.final_probs[best]) {
      second = best;
      best = i;
    } else if (second == n_models || result.final_probs[i] > result.final_probs[second]) {
      second = i;
    }
  }
  result.decision_class = result.class_ids[best];
  if (second != n_models) {
    result.runner_up_class = result.class_ids[second];
    result.top2_gap = result.final_probs[best] - result.final_probs[second];
  }
  return result;
}

}  // namespace spinet
