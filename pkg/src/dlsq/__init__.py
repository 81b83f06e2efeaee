"""Distributed least-squares solvers over a simulated mesh network."""

from .costs import analytic, verify_costs
from .estimators import DistributedLeastSquares
from .harness import ExperimentConfig, run_experiment
from .linalg import matvec, qr_decompose, solve_ls_direct, solve_ridge
from .mesh import CostLedger, MeshNetwork, build_topology
from .partition import col_partition, redistribute_columns, row_partition
from .problem import LSProblem, generate_problem
from .report import SolverReport, emit_report, read_report

__version__ = "0.1.0"

__all__ = [
    "CostLedger",
    "DistributedLeastSquares",
    "ExperimentConfig",
    "LSProblem",
    "MeshNetwork",
    "SolverReport",
    "analytic",
    "build_topology",
    "col_partition",
    "emit_report",
    "generate_problem",
    "matvec",
    "qr_decompose",
    "read_report",
    "redistribute_columns",
    "row_partition",
    "run_experiment",
    "solve_ls_direct",
    "solve_ridge",
    "verify_costs",
]
