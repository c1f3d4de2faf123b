#include "spinet/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "spinet/quantum.hpp"

namespace spinet {

void RootedGraph::add_edge(int j, int k, double lambda) {
  if (j == k) throw std::invalid_argument("self-loops are not allowed");
  if (j < 1 || k < 1) throw std::invalid_argument("nodes are 1-based");
  if (!(lambda > 0.0)) throw std::invalid_argument("couplings must be positive");
  if (j > k) std::swap(j, k);
  n_nodes = std::max(n_nodes, k);
  couplings[{j, k}] = lambda;
}

bool RootedGraph::has_edge(int j, int k) const {
  if (j > k) std::swap(j, k);
  return couplings.count({j, k}) > 0;
}

double RootedGraph::coupling(int j, int k) const {
  if (j > k) std::swap(j, k);
  const auto it = couplings.find({j, k});
  return it == couplings.end() ? 0.0 : it->second;
}

std::vector<std::pair<int, int>> RootedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(couplings.size());
  for (const auto& [e, w] : couplings) out.push_back(e);
  return out;
}

RootedGraph prune_to_root_component(const RootedGraph& g) {
  std::vector<bool> reached(g.n_nodes + 1, false);
  std::vector<int> stack = {1};
  reached[1] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [e, w] : g.couplings) {
      const int other = e.first == v ? e.second : (e.second == v ? e.first : 0);
      if (other != 0 && !reached[other]) {
        reached[other] = true;
        stack.push_back(other);
      }
    }
  }
  std::vector<int> relabel(g.n_nodes + 1, 0);
  int next = 0;
  for (int v = 1; v <= g.n_nodes; ++v)
    if (reached[v]) relabel[v] = ++next;
  RootedGraph out;
  out.n_nodes = next;
  for (const auto& [e, w] : g.couplings)
    if (reached[e.first] && reached[e.second]) out.add_edge(relabel[e.first], relabel[e.second], w);
  return out;
}

namespace {

// Upper-triangle adjacency bits of the relabeled graph in
// (1,2),(1,3),...,(n-1,n) order: bit (j,k) asks whether the preimages of j
// and k are adjacent.
std::string adjacency_bits(const RootedGraph& g, const NodePermutation& perm) {
  std::vector<int> inv(g.n_nodes + 1, 0);
  for (int v = 1; v <= g.n_nodes; ++v) inv[perm[v]] = v;
  std::string bits;
  bits.reserve(size_t(g.n_nodes) * (g.n_nodes - 1) / 2);
  for (int j = 1; j <= g.n_nodes; ++j)
    for (int k = j + 1; k <= g.n_nodes; ++k)
      bits.push_back(g.has_edge(inv[j], inv[k]) ? '1' : '0');
  return bits;
}

std::vector<NodePermutation> root_fixing_permutations(int n_nodes) {
  std::vector<int> tail(std::max(0, n_nodes - 1));
  std::iota(tail.begin(), tail.end(), 2);
  std::vector<NodePermutation> perms;
  do {
    NodePermutation perm(n_nodes + 1);
    perm[0] = 0;
    perm[1] = 1;
    for (int i = 0; i < int(tail.size()); ++i) perm[i + 2] = tail[i];
    perms.push_back(std::move(perm));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return perms;
}

}  // namespace

std::string canonical_form(const RootedGraph& g) {
  const RootedGraph pruned = prune_to_root_component(g);
  std::string best;
  for (const auto& perm : root_fixing_permutations(pruned.n_nodes)) {
    std::string bits = adjacency_bits(pruned, perm);
    if (best.empty() || bits < best) best = std::move(bits);
  }
  return std::to_string(pruned.n_nodes) + ":" + best;
}

std::vector<NodePermutation> root_fixing_automorphisms(const RootedGraph& g) {
  std::vector<NodePermutation> out;
  for (const auto& perm : root_fixing_permutations(g.n_nodes)) {
    bool ok = true;
    for (const auto& [e, w] : g.couplings) {
      const double mapped = g.coupling(perm[e.first], perm[e.second]);
      if (std::abs(mapped - w) > 1e-12) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(perm);
  }
  return out;
}

namespace {

RootedGraph graph_from_key(const std::string& key) {
  const auto colon = key.find(':');
  const int n = std::stoi(key.substr(0, colon));
  const std::string bits = key.substr(colon + 1);
  RootedGraph g;
  g.n_nodes = n;
  size_t pos = 0;
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k)
      if (bits[pos++] == '1') g.add_edge(j, k, 1.0);
  return g;
}

}  // namespace

GraphCatalog enumerate_graphs(int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
  if (n_max > 6)
    throw std::invalid_argument("n_max above 6 is not supported by the exhaustive canonicalizer");

  std::set<std::string> keys;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<std::pair<int, int>> all_edges;
    for (int j = 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) all_edges.push_back({j, k});
    const size_t m = all_edges.size();
    for (size_t mask = 0; mask < (size_t(1) << m); ++mask) {
      RootedGraph g;
      g.n_nodes = n;
      for (size_t b = 0; b < m; ++b)
        if (mask & (size_t(1) << b)) g.add_edge(all_edges[b].first, all_edges[b].second, 1.0);
      keys.insert(canonical_form(g));
    }
  }

  std::vector<std::string> ordered(keys.begin(), keys.end());
  std::sort(ordered.begin(), ordered.end(), [](const std::string& a, const std::string& b) {
    const int na = std::stoi(a.substr(0, a.find(':')));
    const int nb = std::stoi(b.substr(0, b.find(':')));
    if (na != nb) return na < nb;
    return a.substr(a.find(':') + 1) < b.substr(b.find(':') + 1);
  });

  GraphCatalog catalog;
  catalog.n_max = n_max;
  int id = 0;
  for (const auto& key : ordered) catalog.classes.push_back({++id, graph_from_key(key), key});
  return catalog;
}

Matrix build_hamiltonian(const RootedGraph& g, int n_spins) {
  if (g.n_nodes > n_spins)
    throw std::invalid_argument("graph has more nodes than the spin register");
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  Matrix h = Matrix::Zero(dim, dim);
  for (const auto& [e, lambda] : g.couplings) {
    const Matrix xx =
        pauli_operator(PauliAxis::X, e.first, n_spins) * pauli_operator(PauliAxis::X, e.second, n_spins);
    const Matrix yy =
        pauli_operator(PauliAxis::Y, e.first, n_spins) * pauli_operator(PauliAxis::Y, e.second, n_spins);
    h += lambda * (xx + yy);
  }
  return h;
}

}  // namespace spinet
