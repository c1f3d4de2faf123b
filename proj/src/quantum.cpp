#include "spinet/quantum.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace spinet {

Matrix pauli_matrix(PauliAxis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case PauliAxis::X:
      m << 0, 1, 1, 0;
      break;
    case PauliAxis::Y:
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case PauliAxis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

Matrix pauli_operator(PauliAxis axis, int site, int n_spins) {
  if (n_spins < 1) throw std::out_of_range("n_spins must be positive");
  if (site < 1 || site > n_spins)
    throw std::out_of_range("pauli site " + std::to_string(site) + " outside 1.." +
                            std::to_string(n_spins));
  Matrix op = Matrix::Identity(1, 1);
  for (int j = 1; j <= n_spins; ++j)
    op = kron(op, j == site ? pauli_matrix(axis) : Matrix::Identity(2, 2));
  return op;
}

Matrix total_sz(int n_spins) {
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  Matrix jz = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    jz(i, i) = double(n_spins) - 2.0 * std::popcount(static_cast<unsigned>(i));
  return jz;
}

Matrix embed_on_first(const Matrix& op2x2, int n_spins) {
  if (op2x2.rows() != 2 || op2x2.cols() != 2)
    throw std::invalid_argument("embed_on_first expects a 2x2 operator");
  const Eigen::Index rest = Eigen::Index(1) << (n_spins - 1);
  return kron(op2x2, Matrix::Identity(rest, rest));
}

void DensityMatrix::assert_valid() const {
  if (mat.rows() != mat.cols() || mat.rows() != (Eigen::Index(1) << n_spins))
    throw std::invalid_argument("density matrix dimension does not match n_spins");
  if (std::abs(mat.trace().real() - 1.0) > 1e-10 || std::abs(mat.trace().imag()) > 1e-10)
    throw std::invalid_argument("density matrix trace differs from 1");
  if (hermiticity_defect(mat) > 1e-10)
    throw std::invalid_argument("density matrix is not hermitian");
  const EighResult es = eigh(mat);
  if (es.values(0) < -1e-8)
    throw std::invalid_argument("density matrix has a negative eigenvalue");
}

DensityMatrix maximally_mixed(int n_spins) {
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  return {Matrix::Identity(dim, dim) / double(dim), n_spins};
}

DensityMatrix basis_state(int n_spins, int index) {
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  if (index < 0 || index >= dim) throw std::out_of_range("basis index out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return {m, n_spins};
}

DensityMatrix partial_trace_keep_first(const DensityMatrix& rho) {
  const Eigen::Index rest = rho.dim() / 2;
  Matrix out = Matrix::Zero(2, 2);
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 2; ++b) {
      Complex s = 0.0;
      for (Eigen::Index k = 0; k < rest; ++k) s += rho.mat(a * rest + k, b * rest + k);
      out(a, b) = s;
    }
  return {out, 1};
}

BlochParams bloch_params(const Matrix& rho2x2) {
  const double vx = 2.0 * rho2x2(1, 0).real();
  const double vy = 2.0 * rho2x2(1, 0).imag();
  const double vz = (rho2x2(0, 0) - rho2x2(1, 1)).real();
  BlochParams b;
  b.r = std::sqrt(vx * vx + vy * vy + vz * vz);
  if (b.r <= 1e-9) return {b.r, 0.0, 0.0};
  const double perp = std::hypot(vx, vy);
  b.alpha = std::atan2(perp, vz);
  if (std::sin(b.alpha) <= 1e-9) return {b.r, b.alpha, 0.0};
  b.beta = std::atan2(vy, vx);
  if (b.beta <= -std::numbers::pi) b.beta = std::numbers::pi;
  return b;
}

Matrix bloch_state(const BlochParams& b) {
  Matrix rho(2, 2);
  const double c = b.r * std::cos(b.alpha);
  const Complex off = b.r * std::sin(b.alpha) * Complex(std::cos(b.beta), std::sin(b.beta));
  rho << 0.5 * (1.0 + c), 0.5 * std::conj(off), 0.5 * off, 0.5 * (1.0 - c);
  return rho;
}

double fidelity_with_coherent_target(const DensityMatrix& rho) {
  return rho.mat(0, 0).real();
}

double expectation(const Matrix& a, const Matrix& rho) {
  // Tr(a rho) = sum_ij a_ij rho_ji without forming the product.
  return a.cwiseProduct(rho.transpose()).sum().real();
}

std::vector<ExcitationBlock> excitation_blocks(const Matrix& a, int n_spins) {
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  if (a.rows() != dim || a.cols() != dim)
    throw std::invalid_argument("operator dimension does not match n_spins");
  if (commutator_defect(a, total_sz(n_spins)) > 1e-10)
    throw std::invalid_argument("operator does not commute with total sigma^z");

  std::vector<std::vector<int>> indices(n_spins + 1);
  for (Eigen::Index i = 0; i < dim; ++i)
    indices[std::popcount(static_cast<unsigned>(i))].push_back(int(i));

  std::vector<ExcitationBlock> blocks;
  blocks.reserve(n_spins + 1);
  for (int j = 0; j <= n_spins; ++j) {
    const auto& idx = indices[j];
    Matrix block(idx.size(), idx.size());
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t c = 0; c < idx.size(); ++c) block(r, c) = a(idx[r], idx[c]);
    blocks.push_back({j, std::move(block), idx});
  }
  return blocks;
}

}  // namespace spinet
