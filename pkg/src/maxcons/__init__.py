"""Privacy-preserving distributed maximum consensus on augmented graphs."""

from ._util import derive_seed
from .adversary import (
    AdversaryConfig,
    ObservationSet,
    ReconstructionResult,
    attack_mmse,
    collect,
    reconstruct,
)
from .baselines import BaselineConfig, dp_admm_max, noisy_broadcast_max
from .engine import (
    EngineState,
    InitSpec,
    Trace,
    dummy_update,
    initialize,
    run,
    run_from,
    write_trace_csvs,
    x_update,
    z_neighbor_update,
)
from .estimator import MaxConsensus
from .experiments import (
    REFERENCE_SEED,
    VERSION,
    MetricRecord,
    Scenario,
    iterations_to_tolerance,
    metric_record,
    run_scenario,
    squared_error_series,
    summarize,
)
from .graph import (
    AugmentedGraph,
    Graph,
    augment,
    default_rgg_radius,
    generate_rgg,
    read_topology,
    write_topology,
)
from .privacy import (
    ConditionReport,
    MIEstimate,
    check_condition,
    estimate_mi_ksg,
    nmi_curve,
)
from .problem import (
    ProblemInstance,
    assemble,
    dump_instance,
    load_instance,
    solve_exact,
)
from . import exceptions

__version__ = VERSION

__all__ = [
    "AdversaryConfig",
    "AugmentedGraph",
    "BaselineConfig",
    "ConditionReport",
    "EngineState",
    "Graph",
    "InitSpec",
    "MaxConsensus",
    "MetricRecord",
    "MIEstimate",
    "ObservationSet",
    "ProblemInstance",
    "ReconstructionResult",
    "REFERENCE_SEED",
    "Scenario",
    "Trace",
    "VERSION",
    "assemble",
    "attack_mmse",
    "augment",
    "check_condition",
    "collect",
    "default_rgg_radius",
    "derive_seed",
    "dp_admm_max",
    "dummy_update",
    "dump_instance",
    "estimate_mi_ksg",
    "exceptions",
    "generate_rgg",
    "initialize",
    "iterations_to_tolerance",
    "load_instance",
    "metric_record",
    "nmi_curve",
    "noisy_broadcast_max",
    "read_topology",
    "reconstruct",
    "run",
    "run_from",
    "run_scenario",
    "solve_exact",
    "squared_error_series",
    "summarize",
    "write_topology",
    "write_trace_csvs",
    "x_update",
    "z_neighbor_update",
]
