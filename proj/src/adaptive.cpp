#include "spinet/adaptive.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "spinet/parallel.hpp"

namespace spinet {

AdaptiveAngles adaptive_angles(const BlochParams& b, AdaptiveBranch branch) {
  if (b.r <= 1e-9) return {0.0, 0.0};
  if (branch == AdaptiveBranch::primary) return {0.5 * b.alpha, b.beta};
  double delta = b.beta + std::numbers::pi;
  if (delta > std::numbers::pi) delta -= 2.0 * std::numbers::pi;
  return {-0.5 * b.alpha, delta};
}

Matrix build_adaptive_operator(const AdaptiveAngles& a, int n_spins) {
  Matrix block(2, 2);
  const double ct = std::cos(a.theta);
  const double st = std::sin(a.theta);
  const Complex phase(std::cos(a.delta), std::sin(a.delta));
  block << ct, std::conj(phase) * st, phase * st, -ct;
  return n_spins == 1 ? block : embed_on_first(block, n_spins);
}

double network_cost(const DensityMatrix& rho) {
  const int n = rho.n_spins;
  double mag = 0.0;
  for (Eigen::Index i = 0; i < rho.dim(); ++i)
    mag += (double(n) - 2.0 * std::popcount(static_cast<unsigned>(i))) * rho.mat(i, i).real();
  return double(n) - mag;
}

double cost_drift(const Matrix& rho2x2, const AdaptiveAngles& a, double gamma) {
  const BlochParams b = bloch_params(rho2x2);
  const double bracket = (std::cos(2.0 * a.theta) - 1.0) * std::cos(b.alpha) +
                         std::sin(2.0 * a.theta) * std::sin(b.alpha) * std::cos(a.delta - b.beta);
  return -gamma * b.r * bracket;
}

double TrajectoryRecord::max_fidelity() const {
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, s.fidelity);
  return best;
}

StepResult adaptive_step(const DensityMatrix& rho, const Matrix& hamiltonian, double gamma,
                         double dt, double dW, AdaptiveAngles* angles_out, AdaptiveBranch branch) {
  const DensityMatrix reduced = partial_trace_keep_first(rho);
  const AdaptiveAngles angles = adaptive_angles(bloch_params(reduced.mat), branch);
  if (angles_out) *angles_out = angles;
  const MeasurementSetup m(build_adaptive_operator(angles, rho.n_spins), gamma);
  return step_true_system(rho, hamiltonian, m, dt, dW);
}

std::vector<TrajectoryRecord> run_initialization(const RootedGraph& graph,
                                                 const InitializationConfig& config,
                                                 const DensityMatrix* rho0) {
  if (config.n_paths < 1) throw std::invalid_argument("need at least one path");
  const int n_spins = graph.n_nodes;
  const Matrix hamiltonian = build_hamiltonian(graph, n_spins);
  const DensityMatrix initial = rho0 ? *rho0 : maximally_mixed(n_spins);
  if (initial.dim() != (Eigen::Index(1) << n_spins))
    throw std::invalid_argument("initial state does not match the network size");
  const int steps = std::max(1, int(std::llround(config.horizon / (config.gamma * config.dt))));
  const int stride =
      config.record_stride > 0 ? config.record_stride : std::max(1, (steps + 4999) / 5000);

  std::vector<TrajectoryRecord> records(config.n_paths);
  parallel_for_index(config.n_paths, config.threads, [&](int path) {
    TrajectoryRecord& rec = records[path];
    rec.path_index = path;
    rec.seed = config.seed;
    const NoisePath noise{config.seed, uint64_t(path), config.dt};
    DensityMatrix rho = initial;
    try {
      for (int k = 0; k < steps; ++k) {
        AdaptiveAngles angles;
        const StepResult step =
            adaptive_step(rho, hamiltonian, config.gamma, config.dt, noise.increment(k), &angles,
                          config.branch);
        rho = step.rho;
        if ((k + 1) % stride == 0 || k + 1 == steps) {
          rec.samples.push_back({double(k + 1) * config.dt, step.dY,
                                 fidelity_with_coherent_target(rho), network_cost(rho),
                                 angles.theta, angles.delta});
        }
      }
    } catch (const InstabilityError&) {
      rec.aborted = true;
    }
  });
  return records;
}

}  // namespace spinet
