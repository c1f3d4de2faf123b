// Adaptive measurement feedback: the measured observable on the accessible
// spin is rotated each step toward the reduced state's Bloch vector, which
// makes the expected cost N - <sum_j sigma_j^z> nonincreasing and steers the
// network toward the spin coherent state |0...0>.
#pragma once

#include <cstdint>
#include <vector>

#include "spinet/graph.hpp"
#include "spinet/noise.hpp"
#include "spinet/quantum.hpp"
#include "spinet/sme.hpp"

namespace spinet {

struct AdaptiveAngles {
  double theta = 0.0;
  double delta = 0.0;
};

// The adaptive law offers two equivalent minimizers of the cost drift; both
// generate the same measurement operator. The primary branch is the default
// everywhere; the alternate exists for the equivalence check.
enum class AdaptiveBranch { primary, alternate };

// (theta, delta) = (alpha/2, beta) on the primary branch,
// (-alpha/2, beta + pi) on the alternate. Holds (0, 0) when r <= 1e-9.
AdaptiveAngles adaptive_angles(const BlochParams& b,
                               AdaptiveBranch branch = AdaptiveBranch::primary);

// 2x2 block [[cos t, e^{-i d} sin t], [e^{i d} sin t, -cos t]] embedded on
// spin 1; hermitian, involutory, traceless.
Matrix build_adaptive_operator(const AdaptiveAngles& a, int n_spins);

// Network cost N - Tr(sum_j sigma_j^z rho), in [0, 2N], zero only at the
// target state.
double network_cost(const DensityMatrix& rho);

// Drift of the expected cost under measurement of the operator generated by
// `a`, evaluated from the Bloch parameters of the reduced state:
//   -gamma r [(cos 2t - 1) cos a + sin 2t sin a cos(d - b)].
// With the adaptive law this is -gamma r (1 - cos a) <= 0.
double cost_drift(const Matrix& rho2x2, const AdaptiveAngles& a, double gamma);

struct InitializationConfig {
  double gamma = 1.0;
  double dt = 1e-3;
  double horizon = 10.0;  // in units of 1/gamma
  int n_paths = 1;
  uint64_t seed = 1;
  AdaptiveBranch branch = AdaptiveBranch::primary;
  int record_stride = 0;  // 0: auto (<= 5000 recorded rows)
  int threads = 0;
};

struct TrajectorySample {
  double t = 0.0;
  double dY = 0.0;
  double fidelity = 0.0;
  double cost = 0.0;
  double theta = 0.0;
  double delta = 0.0;
};

struct TrajectoryRecord {
  int path_index = 0;
  uint64_t seed = 0;
  bool aborted = false;
  std::vector<TrajectorySample> samples;

  double final_fidelity() const { return samples.empty() ? 0.0 : samples.back().fidelity; }
  double max_fidelity() const;
};

// Closed-loop initialization runs for the given network: extract the reduced
// state of spin 1, update the measurement angles, advance one SME step,
// record fidelity and cost. Starts from the maximally mixed state unless
// rho0 is given.
std::vector<TrajectoryRecord> run_initialization(const RootedGraph& graph,
                                                 const InitializationConfig& config,
                                                 const DensityMatrix* rho0 = nullptr);

// Single closed-loop step, exposed for tests and custom drivers.
StepResult adaptive_step(const DensityMatrix& rho, const Matrix& hamiltonian, double gamma,
                         double dt, double dW, AdaptiveAngles* angles_out = nullptr,
                         AdaptiveBranch branch = AdaptiveBranch::primary);

}  // namespace spinet
