"""Spin-network structure identification and adaptive state initialization.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from spinet._core import (  # noqa: F401
    GraphCatalog,
    GraphClass,
    IdentificationResult,
    InstabilityError,
    RootedGraph,
    SteadyState,
    SteadyStateReport,
    TrajectoryRecord,
    TrajectorySample,
    __version__,
    adaptive_angles,
    bloch_params,
    bloch_state,
    build_adaptive_operator,
    build_hamiltonian,
    canonical_form,
    check_theorem2,
    cost_drift,
    enumerate_graphs,
    excitation_blocks,
    fidelity_with_coherent_target,
    partial_trace_keep_first,
    pauli_operator,
    project_state,
    pure_steady_states,
    root_fixing_automorphisms,
    run_identification,
    run_initialization,
    single_excitation_analysis,
    sme_step,
    total_sz,
)
