#include "spinet/sme.hpp"

#include <Eigen/Cholesky>

namespace spinet {

MeasurementSetup::MeasurementSetup(Matrix c_in, double gamma_in)
    : c(std::move(c_in)), gamma(gamma_in) {
  if (!(gamma > 0.0)) throw std::invalid_argument("measurement strength must be positive");
  if (hermiticity_defect(c) > 1e-12)
    throw std::invalid_argument("measurement operator must be hermitian");
  if ((c * c - Matrix::Identity(c.rows(), c.cols())).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("measurement operator must be involutory");

  const Eigen::Index n = c.rows();
  diagonal = (c - Matrix(c.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    diag = c.diagonal().real();
    dissipator_mask = diag * diag.transpose() - Eigen::MatrixXd::Ones(n, n);
    anticomm_mask = diag.replicate(1, n) + diag.transpose().replicate(n, 1);
  }
}

double MeasurementSetup::mean(const Matrix& rho) const {
  if (diagonal) return (diag.array() * rho.diagonal().real().array()).sum();
  return expectation(c, rho);
}

Matrix drift(const Matrix& rho, const Matrix& hamiltonian, const MeasurementSetup& m) {
  if (rho.rows() != hamiltonian.rows() || rho.rows() != m.c.rows())
    throw std::invalid_argument("dimension mismatch in drift");
  const Matrix h_rho = hamiltonian * rho;
  Matrix out = Complex(0, -1) * (h_rho - h_rho.adjoint());
  // c^2 = I collapses the dissipator to c rho c - rho.
  if (m.diagonal)
    out += m.gamma * rho.cwiseProduct(m.dissipator_mask);
  else
    out += m.gamma * (m.c * rho * m.c - rho);
  return out;
}

Matrix diffusion(const Matrix& rho, const MeasurementSetup& m) {
  if (rho.rows() != m.c.rows()) throw std::invalid_argument("dimension mismatch in diffusion");
  const double sqrt_gamma = std::sqrt(m.gamma);
  if (m.diagonal) {
    const double mean = (m.diag.array() * rho.diagonal().real().array()).sum();
    return sqrt_gamma * (rho.cwiseProduct(m.anticomm_mask) - 2.0 * mean * rho);
  }
  const Matrix c_rho = m.c * rho;
  const double mean = 2.0 * c_rho.trace().real();
  return sqrt_gamma * (c_rho + c_rho.adjoint() - mean * rho);
}

Matrix project(const Matrix& raw) {
  Matrix herm = hermitize(raw);
  const double tr = herm.trace().real();
  if (!(tr > 0.5))
    throw InstabilityError("state trace collapsed to " + std::to_string(tr) +
                           " before renormalization");
  // Cheap positivity probe; the eigenvalue clip only runs when needed.
  Eigen::LLT<Matrix> llt(herm + 1e-12 * tr * Matrix::Identity(herm.rows(), herm.cols()));
  if (llt.info() != Eigen::Success) {
    const EighResult es = eigh(herm);
    herm = es.vectors * es.values.cwiseMax(0.0).asDiagonal() * es.vectors.adjoint();
    const double clipped_tr = herm.trace().real();
    if (!(clipped_tr > 0.5))
      throw InstabilityError("state trace collapsed to " + std::to_string(clipped_tr) +
                             " after clipping");
    return herm / clipped_tr;
  }
  return herm / tr;
}

StepResult step_true_system(const DensityMatrix& rho, const Matrix& hamiltonian,
                            const MeasurementSetup& m, double dt, double dW) {
  if (!(dt * m.gamma <= 1e-2))
    throw std::invalid_argument("dt * gamma must not exceed 1e-2");
  const double dY = 2.0 * std::sqrt(m.gamma) * m.mean(rho.mat) * dt + dW;
  const Matrix raw = rho.mat + drift(rho.mat, hamiltonian, m) * dt + diffusion(rho.mat, m) * dW;
  return {{project(raw), rho.n_spins}, dY};
}

}  // namespace spinet
