// Pure steady states of the controlled SME: a pure state is stationary iff it
// is a common eigenvector of H and c, and the adaptive mechanism restricts
// the search to the +1 eigenspace of c. Root-fixing permutation symmetry
// forces extra steady states beyond the target |0...0>, which this module
// detects and exhibits via the single-excitation block.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spinet/graph.hpp"
#include "spinet/quantum.hpp"

namespace spinet {

struct SteadyState {
  Vector vector;             // unit vector in the 2^N space, c-eigenvalue +1
  double h_eigenvalue = 0.0;
};

struct SteadyStateReport {
  std::vector<SteadyState> states;
  bool unique_target = false;            // true iff states == {|0...0>} up to phase
  std::optional<NodePermutation> symmetry_witness;
};

// All pure steady states with c-eigenvalue +1: eigenvectors of H restricted
// to the maximal H-invariant subspace of the +1 eigenspace of c, computed by
// iterated kernel refinement with rank decisions at 1e-9 times the largest
// singular value. Requires c hermitian and involutory and [H, J_z] = 0.
SteadyStateReport pure_steady_states(const Matrix& hamiltonian, const Matrix& c, int n_spins);

// Convenience overload: c = sigma_1^z and H built from the graph; also
// attaches the symmetry witness when the graph has one.
SteadyStateReport pure_steady_states(const RootedGraph& g);

struct SingleExcitationAnalysis {
  Matrix p1;                         // witness permutation on the block
  Matrix h1;                         // Hamiltonian compressed to the block
  Matrix c1;                         // identity: every block state has spin 1 at |0>
  std::vector<int> basis_indices;    // computational-basis index of each block vector
  // Eigenvectors of p1 with eigenvalue -1 that are also h1 eigenvectors,
  // with their h1 eigenvalues.
  std::vector<std::pair<double, Vector>> antisymmetric_eigenvectors;
};

// Restriction to the single-excitation subspace with the excitation on the
// measured node removed, in site order (excitation on node 2 first). The
// witness must be a root-fixing automorphism of g.
SingleExcitationAnalysis single_excitation_analysis(const RootedGraph& g,
                                                    const NodePermutation& witness);

struct Theorem2Result {
  bool symmetric = false;
  std::optional<NodePermutation> witness;
};

// True with a witness iff g has a nontrivial root-fixing automorphism; in
// that case the steady-state search is cross-checked to return at least two
// states.
Theorem2Result check_theorem2(const RootedGraph& g);

}  // namespace spinet
