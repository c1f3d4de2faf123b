// Quantum-state primitives for N-spin networks.
//
// Basis convention: computational basis with spin 1 as the most significant
// qubit; |0> = (1,0)^T has sigma^z eigenvalue +1. The all-|0> product state is
// basis index 0, and bit b of a basis index (counting from the MSB) gives the
// state of spin b+1.
#pragma once

#include <vector>

#include "spinet/linalg.hpp"

namespace spinet {

enum class PauliAxis { X, Y, Z };

// 2x2 Pauli matrix.
Matrix pauli_matrix(PauliAxis axis);

// Kronecker embedding of a Pauli matrix at position `site` (1-based) in an
// N-spin register. Throws std::out_of_range for site outside 1..n_spins.
Matrix pauli_operator(PauliAxis axis, int site, int n_spins);

// Total z magnetization J_z = sum_j sigma_j^z (diagonal).
Matrix total_sz(int n_spins);

// Embeds a single-spin operator on spin 1: op (x) I^(N-1).
Matrix embed_on_first(const Matrix& op2x2, int n_spins);

struct DensityMatrix {
  Matrix mat;
  int n_spins = 0;

  Eigen::Index dim() const { return mat.rows(); }

  // Checks hermiticity (1e-10), unit trace (1e-10) and positivity (-1e-8).
  void assert_valid() const;
};

DensityMatrix maximally_mixed(int n_spins);
DensityMatrix basis_state(int n_spins, int index);

// Reduced state of spin 1: Tr_(2..N)[rho].
DensityMatrix partial_trace_keep_first(const DensityMatrix& rho);

// Polar parameterization of a single-spin state: radius r in [0,1], polar
// angle alpha in [0,pi] from +z, azimuth beta in (-pi,pi].
struct BlochParams {
  double r = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

// Extraction from a 2x2 density matrix. Degenerate cases use a fixed
// convention: r <= 1e-9 gives alpha = beta = 0; sin(alpha) <= 1e-9 gives
// beta = 0.
BlochParams bloch_params(const Matrix& rho2x2);

// Reconstructs the 2x2 state from its Bloch parameters.
Matrix bloch_state(const BlochParams& b);

// <0^N| rho |0^N>: the (0,0) entry, which is real for a valid state.
double fidelity_with_coherent_target(const DensityMatrix& rho);

// Expectation Tr(A rho) for Hermitian A; returns the real part.
double expectation(const Matrix& a, const Matrix& rho);

struct ExcitationBlock {
  int excitations = 0;            // number of spins in |1>
  Matrix block;                   // restriction of the operator
  std::vector<int> basis_indices; // ascending computational-basis indices
};

// Block-diagonalization of an operator commuting with J_z into the N+1
// fixed-excitation subspaces. Throws std::invalid_argument when
// [A, J_z] != 0 beyond 1e-10.
std::vector<ExcitationBlock> excitation_blocks(const Matrix& a, int n_spins);

}  // namespace spinet
