// Python bindings for the spinet core: graph catalog, Hamiltonians, the SME
// engine, the multi-model structure estimator, the adaptive initializer and
// the steady-state analyzer.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinet/adaptive.hpp"
#include "spinet/filter.hpp"
#include "spinet/runner.hpp"
#include "spinet/steady.hpp"

namespace py = pybind11;
using namespace spinet;

namespace {

PauliAxis axis_from_string(const std::string& axis) {
  if (axis == "x" || axis == "X") return PauliAxis::X;
  if (axis == "y" || axis == "Y") return PauliAxis::Y;
  if (axis == "z" || axis == "Z") return PauliAxis::Z;
  throw std::invalid_argument("axis must be one of x, y, z");
}

// Permutations cross the boundary as 0-indexed image lists.
std::vector<int> perm_to_python(const NodePermutation& perm) {
  std::vector<int> out;
  for (size_t v = 1; v < perm.size(); ++v) out.push_back(perm[v]);
  return out;
}

NodePermutation perm_from_python(const std::vector<int>& images) {
  NodePermutation perm(images.size() + 1);
  perm[0] = 0;
  for (size_t i = 0; i < images.size(); ++i) perm[i + 1] = images[i];
  return perm;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-network structure identification and adaptive initialization";
  m.attr("__version__") = kVersion;

  py::register_exception<InstabilityError>(m, "InstabilityError");

  py::class_<RootedGraph>(m, "RootedGraph")
      .def(py::init<>())
      .def_readwrite("n_nodes", &RootedGraph::n_nodes)
      .def("add_edge", &RootedGraph::add_edge, py::arg("j"), py::arg("k"),
           py::arg("coupling") = 1.0)
      .def("has_edge", &RootedGraph::has_edge)
      .def("coupling", &RootedGraph::coupling)
      .def("edges", &RootedGraph::edges)
      .def("__repr__", [](const RootedGraph& g) {
        std::string out = "RootedGraph(n_nodes=" + std::to_string(g.n_nodes) + ", edges=[";
        bool first = true;
        for (const auto& [e, w] : g.couplings) {
          if (!first) out += ", ";
          first = false;
          out += "(" + std::to_string(e.first) + "," + std::to_string(e.second) + "):" +
                 std::to_string(w);
        }
        return out + "])";
      });

  py::class_<GraphClass>(m, "GraphClass")
      .def_readonly("class_id", &GraphClass::class_id)
      .def_readonly("graph", &GraphClass::graph)
      .def_readonly("key", &GraphClass::key);

  py::class_<GraphCatalog>(m, "GraphCatalog")
      .def_readonly("n_max", &GraphCatalog::n_max)
      .def_readonly("classes", &GraphCatalog::classes)
      .def("__len__", [](const GraphCatalog& c) { return c.classes.size(); });

  m.def("enumerate_graphs", &enumerate_graphs, py::arg("n_max"),
        "All root-connected graph classes on up to n_max nodes, one per "
        "root-fixing relabeling orbit.");
  m.def("canonical_form", &canonical_form, py::arg("graph"));
  m.def(
      "root_fixing_automorphisms",
      [](const RootedGraph& g) {
        std::vector<std::vector<int>> out;
        for (const auto& perm : root_fixing_automorphisms(g)) out.push_back(perm_to_python(perm));
        return out;
      },
      py::arg("graph"), "Permutations as image lists: entry i is the image of node i+1.");
  m.def("build_hamiltonian", &build_hamiltonian, py::arg("graph"), py::arg("n_spins"));

  m.def(
      "pauli_operator",
      [](const std::string& axis, int site, int n_spins) {
        return pauli_operator(axis_from_string(axis), site, n_spins);
      },
      py::arg("axis"), py::arg("site"), py::arg("n_spins"));
  m.def("total_sz", &total_sz, py::arg("n_spins"));
  m.def(
      "partial_trace_keep_first",
      [](const Matrix& rho, int n_spins) {
        return partial_trace_keep_first({rho, n_spins}).mat;
      },
      py::arg("rho"), py::arg("n_spins"));
  m.def(
      "bloch_params",
      [](const Matrix& rho) {
        const BlochParams b = bloch_params(rho);
        return py::make_tuple(b.r, b.alpha, b.beta);
      },
      py::arg("rho2x2"), "Returns (r, alpha, beta).");
  m.def(
      "bloch_state",
      [](double r, double alpha, double beta) { return bloch_state({r, alpha, beta}); },
      py::arg("r"), py::arg("alpha"), py::arg("beta"));
  m.def(
      "fidelity_with_coherent_target",
      [](const Matrix& rho, int n_spins) {
        return fidelity_with_coherent_target({rho, n_spins});
      },
      py::arg("rho"), py::arg("n_spins"));
  m.def(
      "excitation_blocks",
      [](const Matrix& a, int n_spins) {
        py::list out;
        for (const auto& blk : excitation_blocks(a, n_spins))
          out.append(py::make_tuple(blk.excitations, blk.block, blk.basis_indices));
        return out;
      },
      py::arg("operator"), py::arg("n_spins"));

  m.def(
      "sme_step",
      [](const Matrix& rho, int n_spins, const Matrix& hamiltonian, const Matrix& c, double gamma,
         double dt, double dW) {
        const MeasurementSetup setup(c, gamma);
        const StepResult step = step_true_system({rho, n_spins}, hamiltonian, setup, dt, dW);
        return py::make_tuple(step.rho.mat, step.dY);
      },
      py::arg("rho"), py::arg("n_spins"), py::arg("hamiltonian"), py::arg("c"), py::arg("gamma"),
      py::arg("dt"), py::arg("dW"), "One Euler-Maruyama step; returns (rho_next, dY).");
  m.def("project_state", &project, py::arg("rho_raw"),
        "Hermitize, clip negative eigenvalues, renormalize the trace.");

  m.def(
      "adaptive_angles",
      [](double r, double alpha, double beta, bool alternate) {
        const AdaptiveAngles a = adaptive_angles(
            {r, alpha, beta}, alternate ? AdaptiveBranch::alternate : AdaptiveBranch::primary);
        return py::make_tuple(a.theta, a.delta);
      },
      py::arg("r"), py::arg("alpha"), py::arg("beta"), py::arg("alternate") = false);
  m.def(
      "build_adaptive_operator",
      [](double theta, double delta, int n_spins) {
        return build_adaptive_operator({theta, delta}, n_spins);
      },
      py::arg("theta"), py::arg("delta"), py::arg("n_spins"));
  m.def(
      "cost_drift",
      [](const Matrix& rho2x2, double theta, double delta, double gamma) {
        return cost_drift(rho2x2, {theta, delta}, gamma);
      },
      py::arg("rho2x2"), py::arg("theta"), py::arg("delta"), py::arg("gamma") = 1.0);

  py::class_<IdentificationResult>(m, "IdentificationResult")
      .def_readonly("times", &IdentificationResult::times)
      .def_readonly("mean_probs", &IdentificationResult::mean_probs)
      .def_readonly("class_ids", &IdentificationResult::class_ids)
      .def_readonly("decision_class", &IdentificationResult::decision_class)
      .def_readonly("runner_up_class", &IdentificationResult::runner_up_class)
      .def_readonly("top2_gap", &IdentificationResult::top2_gap)
      .def_readonly("excluded_paths", &IdentificationResult::excluded_paths)
      .def_readonly("final_probs", &IdentificationResult::final_probs);

  m.def(
      "run_identification",
      [](const RootedGraph& true_graph, int n_max, double nominal_lambda, double gamma, double dt,
         double horizon, int n_paths, uint64_t seed, int record_stride, int threads) {
        const GraphCatalog catalog = enumerate_graphs(n_max);
        IdentificationConfig config{nominal_lambda, gamma, dt, horizon,
                                    n_paths,        seed,  record_stride, threads};
        return run_identification(true_graph, catalog, config);
      },
      py::arg("true_graph"), py::arg("n_max"), py::arg("nominal_lambda") = 1.0,
      py::arg("gamma") = 1.0, py::arg("dt") = 1e-3, py::arg("horizon") = 5.0,
      py::arg("n_paths") = 50, py::arg("seed") = 1, py::arg("record_stride") = 0,
      py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

  py::class_<TrajectorySample>(m, "TrajectorySample")
      .def_readonly("t", &TrajectorySample::t)
      .def_readonly("dY", &TrajectorySample::dY)
      .def_readonly("fidelity", &TrajectorySample::fidelity)
      .def_readonly("cost", &TrajectorySample::cost)
      .def_readonly("theta", &TrajectorySample::theta)
      .def_readonly("delta", &TrajectorySample::delta);

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("path_index", &TrajectoryRecord::path_index)
      .def_readonly("seed", &TrajectoryRecord::seed)
      .def_readonly("aborted", &TrajectoryRecord::aborted)
      .def_readonly("samples", &TrajectoryRecord::samples)
      .def("final_fidelity", &TrajectoryRecord::final_fidelity)
      .def("max_fidelity", &TrajectoryRecord::max_fidelity);

  m.def(
      "run_initialization",
      [](const RootedGraph& graph, double gamma, double dt, double horizon, int n_paths,
         uint64_t seed, bool alternate_branch, int record_stride, int threads,
         std::optional<Matrix> rho0) {
        InitializationConfig config;
        config.gamma = gamma;
        config.dt = dt;
        config.horizon = horizon;
        config.n_paths = n_paths;
        config.seed = seed;
        config.branch = alternate_branch ? AdaptiveBranch::alternate : AdaptiveBranch::primary;
        config.record_stride = record_stride;
        config.threads = threads;
        if (rho0) {
          const DensityMatrix initial{*rho0, graph.n_nodes};
          return run_initialization(graph, config, &initial);
        }
        return run_initialization(graph, config);
      },
      py::arg("graph"), py::arg("gamma") = 1.0, py::arg("dt") = 1e-3, py::arg("horizon") = 10.0,
      py::arg("n_paths") = 1, py::arg("seed") = 1, py::arg("alternate_branch") = false,
      py::arg("record_stride") = 0, py::arg("threads") = 0, py::arg("rho0") = std::nullopt,
      py::call_guard<py::gil_scoped_release>());

  py::class_<SteadyState>(m, "SteadyState")
      .def_readonly("vector", &SteadyState::vector)
      .def_readonly("h_eigenvalue", &SteadyState::h_eigenvalue);

  py::class_<SteadyStateReport>(m, "SteadyStateReport")
      .def_readonly("states", &SteadyStateReport::states)
      .def_readonly("unique_target", &SteadyStateReport::unique_target)
      .def_property_readonly("symmetry_witness", [](const SteadyStateReport& r) -> py::object {
        if (!r.symmetry_witness) return py::none();
        return py::cast(perm_to_python(*r.symmetry_witness));
      });

  m.def("pure_steady_states",
        py::overload_cast<const RootedGraph&>(&pure_steady_states), py::arg("graph"));
  m.def(
      "check_theorem2",
      [](const RootedGraph& g) {
        const Theorem2Result result = check_theorem2(g);
        py::object witness = py::none();
        if (result.witness) witness = py::cast(perm_to_python(*result.witness));
        return py::make_tuple(result.symmetric, witness);
      },
      py::arg("graph"), "Returns (has_nontrivial_symmetry, witness_or_None).");
  m.def(
      "single_excitation_analysis",
      [](const RootedGraph& g, const std::vector<int>& witness) {
        const auto analysis = single_excitation_analysis(g, perm_from_python(witness));
        py::list eigs;
        for (const auto& [mu, v] : analysis.antisymmetric_eigenvectors)
          eigs.append(py::make_tuple(mu, v));
        return py::make_tuple(analysis.p1, analysis.h1, analysis.c1, analysis.basis_indices,
                              eigs);
      },
      py::arg("graph"), py::arg("witness"),
      "Returns (P1, H1, c1, basis_indices, [(h_eigenvalue, vector)...]).");
}
