"""
Replicated sweeps, the bootstrap relative-error protocol and result files.
"""

from .bootstrap import CdfTable, bootstrap_cdf
from .export import RESULT_COLUMNS, emit_report, manifest_path, read_results_csv, results_frame
from .grids import DEFAULT_ROSTER, DESK_GRIDS, DESK_REPLICATIONS, EXPERIMENTS, FULL_GRIDS, SWEEP_PARAMS, Experiment, default_values
from .report import AggregateRow, ExperimentReport, FailedEstimate, SeedEstimate
from .roster import ESTIMATOR_NAMES, ESTIMATORS, ReplicationContext, check_roster, evaluate_roster
from .runner import SeedOutcome, SweepPoint, run_replications, run_seed
from .sweep import SweepSpec

__all__ = [
    "AggregateRow",
    "CdfTable",
    "DEFAULT_ROSTER",
    "DESK_GRIDS",
    "DESK_REPLICATIONS",
    "ESTIMATORS",
    "ESTIMATOR_NAMES",
    "EXPERIMENTS",
    "Experiment",
    "ExperimentReport",
    "FULL_GRIDS",
    "FailedEstimate",
    "RESULT_COLUMNS",
    "ReplicationContext",
    "SWEEP_PARAMS",
    "SeedEstimate",
    "SeedOutcome",
    "SweepPoint",
    "SweepSpec",
    "bootstrap_cdf",
    "check_roster",
    "default_values",
    "emit_report",
    "evaluate_roster",
    "manifest_path",
    "read_results_csv",
    "results_frame",
    "run_replications",
    "run_seed",
]
