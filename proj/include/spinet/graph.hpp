// Rooted spin-network graphs: enumeration of the classes distinguishable from
// the accessible node, XY coupling Hamiltonians, and root-fixing symmetries.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spinet/linalg.hpp"

namespace spinet {

// Undirected weighted graph on nodes 1..n_nodes with node 1 the accessible
// (root) node. Edges are stored as ordered pairs (j < k) with strictly
// positive couplings in units of the measurement strength.
struct RootedGraph {
  int n_nodes = 1;
  std::map<std::pair<int, int>, double> couplings;

  void add_edge(int j, int k, double lambda = 1.0);
  bool has_edge(int j, int k) const;
  double coupling(int j, int k) const;
  std::vector<std::pair<int, int>> edges() const;
};

// Node permutation as a 1-based lookup table: perm[j] is the image of node j,
// with perm[0] unused and perm[1] == 1 for root-fixing permutations.
using NodePermutation = std::vector<int>;

// Removes every node not connected to node 1 and relabels the survivors
// 1..k preserving their relative order.
RootedGraph prune_to_root_component(const RootedGraph& g);

// Canonical key of the pruned topology: "<n>:<bits>" where <bits> is the
// lexicographically smallest upper-triangle adjacency string over all
// permutations of nodes 2..n. Couplings are ignored.
std::string canonical_form(const RootedGraph& g);

// All permutations of nodes 2..n that map the edge set onto itself with
// couplings preserved exactly (tolerance 1e-12). Always contains the identity.
std::vector<NodePermutation> root_fixing_automorphisms(const RootedGraph& g);

struct GraphClass {
  int class_id = 0;          // 1-based position in catalog order
  RootedGraph graph;         // canonical representative, unit couplings
  std::string key;
};

struct GraphCatalog {
  int n_max = 0;
  std::vector<GraphClass> classes;
};

// Enumerates every root-connected topology on up to n_max nodes, one class
// per root-fixing relabeling orbit, ordered by node count then canonical key.
// n_max above 6 is rejected (the canonicalizer minimizes over (n-1)!
// permutations).
GraphCatalog enumerate_graphs(int n_max);

// XY coupling Hamiltonian sum_(j,k) lambda_jk (sx_j sx_k + sy_j sy_k) on an
// n_spins register; nodes beyond g.n_nodes are non-interacting.
Matrix build_hamiltonian(const RootedGraph& g, int n_spins);

}  // namespace spinet
