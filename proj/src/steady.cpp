#include "spinet/steady.hpp"

#include <algorithm>
#include <cmath>

namespace spinet {

namespace {

constexpr double kRankTol = 1e-9;

// Maximal H-invariant subspace of span(basis): iterate
// W <- W ∩ ker((I - P_W) H P_W) until the dimension stops shrinking.
Matrix maximal_invariant_subspace(const Matrix& hamiltonian, Matrix basis) {
  const double floor = 1e-12 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  while (basis.cols() > 0) {
    const Matrix image = hamiltonian * basis;
    const Matrix residual = image - basis * (basis.adjoint() * image);
    if (residual.cwiseAbs().maxCoeff() <= floor) break;
    const Matrix kernel = null_space_basis(residual, kRankTol);
    if (kernel.cols() == basis.cols()) break;
    basis = basis * kernel;
  }
  return basis;
}

}  // namespace

SteadyStateReport pure_steady_states(const Matrix& hamiltonian, const Matrix& c, int n_spins) {
  const Eigen::Index dim = Eigen::Index(1) << n_spins;
  if (hamiltonian.rows() != dim || c.rows() != dim)
    throw std::invalid_argument("operator dimension does not match n_spins");
  if (hermiticity_defect(c) > 1e-12 ||
      (c * c - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("measurement operator must be hermitian and involutory");
  if (hermiticity_defect(hamiltonian) > 1e-12)
    throw std::invalid_argument("hamiltonian must be hermitian");
  if (commutator_defect(hamiltonian, total_sz(n_spins)) > 1e-10)
    throw std::invalid_argument("hamiltonian does not commute with total sigma^z");

  // +1 eigenspace of c. The -1 eigenspace cannot host steady states of the
  // controlled dynamics and is excluded.
  const EighResult c_eig = eigh_canonical(c);
  Eigen::Index plus_count = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (c_eig.values(i) > 0.0) ++plus_count;
  Matrix plus_basis(dim, plus_count);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (c_eig.values(i) > 0.0) plus_basis.col(col++) = c_eig.vectors.col(i);

  const Matrix invariant = maximal_invariant_subspace(hamiltonian, plus_basis);

  SteadyStateReport report;
  if (invariant.cols() == 0) return report;

  const Matrix compressed = hermitize(invariant.adjoint() * hamiltonian * invariant);
  const EighResult h_eig = eigh(compressed);
  const double scale = std::max(1.0, h_eig.values.cwiseAbs().maxCoeff());

  // Lift eigenvectors and canonicalize each eigenvalue group in the full
  // space so the output does not depend on intermediate bases.
  Eigen::Index start = 0;
  const Eigen::Index k = h_eig.values.size();
  while (start < k) {
    Eigen::Index end = start + 1;
    while (end < k && h_eig.values(end) - h_eig.values(start) <= kRankTol * scale) ++end;
    const Eigen::Index g = end - start;
    const Matrix lifted = invariant * h_eig.vectors.middleCols(start, g);
    Matrix basis(dim, g);
    Eigen::Index got = 0;
    for (Eigen::Index j = 0; j < dim && got < g; ++j) {
      Vector cand = lifted * (lifted.adjoint() * Vector::Unit(dim, j));
      for (Eigen::Index m = 0; m < got; ++m) cand -= basis.col(m).dot(cand) * basis.col(m);
      const double nrm = cand.norm();
      if (nrm > 1e-6) basis.col(got++) = cand / nrm;
    }
    if (got != g) throw std::runtime_error("steady-state eigenspace canonicalization failed");
    const double mean_value = h_eig.values.segment(start, g).mean();
    for (Eigen::Index j = 0; j < g; ++j) {
      Vector v = basis.col(j);
      fix_phase(v);
      report.states.push_back({std::move(v), mean_value});
    }
    start = end;
  }

  // Order by eigenvalue, then by earliest significant component.
  std::sort(report.states.begin(), report.states.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.h_eigenvalue - b.h_eigenvalue) > 1e-12) return a.h_eigenvalue < b.h_eigenvalue;
    for (Eigen::Index i = 0; i < a.vector.size(); ++i) {
      const double da = std::abs(a.vector(i)), db = std::abs(b.vector(i));
      if (std::abs(da - db) > 1e-9) return da > db;
    }
    return false;
  });

  report.unique_target =
      report.states.size() == 1 && std::abs(report.states[0].vector(0)) >= 1.0 - 1e-9;
  return report;
}

SteadyStateReport pure_steady_states(const RootedGraph& g) {
  const int n = g.n_nodes;
  SteadyStateReport report =
      pure_steady_states(build_hamiltonian(g, n), pauli_operator(PauliAxis::Z, 1, n), n);
  const Theorem2Result sym = check_theorem2(g);
  if (sym.symmetric) report.symmetry_witness = sym.witness;
  return report;
}

SingleExcitationAnalysis single_excitation_analysis(const RootedGraph& g,
                                                    const NodePermutation& witness) {
  const int n = g.n_nodes;
  if (int(witness.size()) != n + 1 || witness[1] != 1)
    throw std::invalid_argument("witness must be a permutation of nodes fixing node 1");
  const auto autos = root_fixing_automorphisms(g);
  if (std::find(autos.begin(), autos.end(), witness) == autos.end())
    throw std::invalid_argument("witness is not an automorphism of the graph");

  // Block basis in site order: vector j-2 is the excitation on node j.
  const int k = n - 1;
  SingleExcitationAnalysis out;
  out.basis_indices.reserve(k);
  for (int site = 2; site <= n; ++site) out.basis_indices.push_back(1 << (n - site));

  out.h1 = Matrix::Zero(k, k);
  out.p1 = Matrix::Zero(k, k);
  out.c1 = Matrix::Identity(k, k);
  for (int j = 2; j <= n; ++j) {
    for (int l = j + 1; l <= n; ++l) {
      const double w = g.coupling(j, l);
      if (w != 0.0) {
        // XY matrix element between one-excitation states is 2 lambda.
        out.h1(j - 2, l - 2) = 2.0 * w;
        out.h1(l - 2, j - 2) = 2.0 * w;
      }
    }
    out.p1(witness[j] - 2, j - 2) = 1.0;
  }

  // Antisymmetric sector of the witness, then its h1 eigenvectors.
  const EighResult p_eig = eigh_canonical(out.p1);
  Eigen::Index anti = 0;
  for (Eigen::Index i = 0; i < k; ++i)
    if (p_eig.values(i) < 0.0) ++anti;
  if (anti > 0) {
    Matrix q(k, anti);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (p_eig.values(i) < 0.0) q.col(col++) = p_eig.vectors.col(i);
    const Matrix compressed = hermitize(q.adjoint() * out.h1 * q);
    const EighResult h_sub = eigh_canonical(compressed);
    for (Eigen::Index i = 0; i < anti; ++i) {
      Vector v = q * h_sub.vectors.col(i);
      const double mu = h_sub.values(i);
      if ((out.h1 * v - mu * v).norm() <= 1e-9) {
        fix_phase(v);
        out.antisymmetric_eigenvectors.push_back({mu, std::move(v)});
      }
    }
  }
  return out;
}

Theorem2Result check_theorem2(const RootedGraph& g) {
  Theorem2Result result;
  for (const auto& perm : root_fixing_automorphisms(g)) {
    bool identity = true;
    for (int v = 1; v < int(perm.size()); ++v)
      if (perm[v] != v) {
        identity = false;
        break;
      }
    if (!identity) {
      result.symmetric = true;
      result.witness = perm;
      break;
    }
  }
  if (result.symmetric) {
    // Symmetry guarantees a steady state besides the target.
    const SteadyStateReport report =
        pure_steady_states(build_hamiltonian(g, g.n_nodes),
                           pauli_operator(PauliAxis::Z, 1, g.n_nodes), g.n_nodes);
    if (report.states.size() < 2)
      throw std::logic_error("symmetric network reported fewer than two steady states");
  }
  return result;
}

}  // namespace spinet
