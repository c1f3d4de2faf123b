// Euler-Maruyama integration of the stochastic master equation
//
//   d rho = -i[H, rho] dt + gamma D[c] rho dt + sqrt(gamma) Hc[c] rho dW
//   dY    = 2 sqrt(gamma) Tr(c rho) dt + dW
//
// for a Hermitian, involutory measurement operator c, with a projection step
// restoring hermiticity, positivity and unit trace after every update.
#pragma once

#include "spinet/linalg.hpp"
#include "spinet/quantum.hpp"

namespace spinet {

struct MeasurementSetup {
  Matrix c;
  double gamma = 1.0;

  // Derived caches for the elementwise fast path available when c is
  // diagonal (c = sigma_1^z in particular).
  bool diagonal = false;
  Eigen::VectorXd diag;
  Eigen::MatrixXd dissipator_mask;  // d_i d_j - 1
  Eigen::MatrixXd anticomm_mask;    // d_i + d_j

  // Validates c = c^dag and c^2 = I (1e-12) and gamma > 0.
  MeasurementSetup(Matrix c_in, double gamma_in);

  // Tr(c rho).
  double mean(const Matrix& rho) const;
};

// Deterministic dt coefficient: -i[H, rho] + gamma (c rho c - rho).
Matrix drift(const Matrix& rho, const Matrix& hamiltonian, const MeasurementSetup& m);

// dW coefficient: sqrt(gamma) (c rho + rho c - 2 Tr(c rho) rho).
Matrix diffusion(const Matrix& rho, const MeasurementSetup& m);

// Restores the state constraints: hermitize, clip negative eigenvalues to
// zero, renormalize the trace to one. Throws InstabilityError when the trace
// has collapsed below 0.5 before renormalization.
Matrix project(const Matrix& raw);

struct StepResult {
  DensityMatrix rho;
  double dY = 0.0;
};

// One Euler-Maruyama step of the true system, returning the measurement
// increment it generates. Requires dt * gamma <= 1e-2.
StepResult step_true_system(const DensityMatrix& rho, const Matrix& hamiltonian,
                            const MeasurementSetup& m, double dt, double dW);

}  // namespace spinet
