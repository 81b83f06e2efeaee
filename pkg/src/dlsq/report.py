"""Solver reports and their JSON / CSV serializations."""

import csv
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

JSON_KEYS = (
    "algorithm",
    "k",
    "converged",
    "residual_history",
    "cost_measured",
    "time_measured",
    "cost_analytic",
    "time_analytic",
    "setup_cost",
    "errata_notes",
    "final_x",
)
CSV_HEADER = ("iter", "residual", "cum_cost", "cum_time")


@dataclass
class SolverReport:
    """Outcome of one distributed solve.

    ``residual_history[i]``, ``cost_history[i]`` and ``time_history[i]`` are
    taken after iteration ``i + 1``; all three have length ``k``.
    """

    algorithm: str
    k: int
    final_x: np.ndarray
    converged: bool
    residual_history: list = field(default_factory=list)
    cost_history: list = field(default_factory=list)
    time_history: list = field(default_factory=list)
    cost_measured: int = 0
    time_measured: int = 0
    setup_cost: int = 0
    cost_analytic: object = None
    time_analytic: object = None
    errata_notes: list = field(default_factory=list)
    per_node_x: Optional[np.ndarray] = None
    dims: dict = field(default_factory=dict)
    trace: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "algorithm": self.algorithm,
            "k": int(self.k),
            "converged": bool(self.converged),
            "residual_history": [float(r) for r in self.residual_history],
            "cost_measured": int(self.cost_measured),
            "time_measured": int(self.time_measured),
            "cost_analytic": _jsonable(self.cost_analytic),
            "time_analytic": _jsonable(self.time_analytic),
            "setup_cost": int(self.setup_cost),
            "errata_notes": list(self.errata_notes),
            "final_x": [float(v) for v in np.asarray(self.final_x)],
        }

    @classmethod
    def from_dict(cls, d):
        missing = set(JSON_KEYS) - set(d)
        if missing:
            raise ValueError(f"report is missing keys: {sorted(missing)}")
        return cls(
            algorithm=d["algorithm"],
            k=d["k"],
            final_x=np.asarray(d["final_x"], dtype=float),
            converged=d["converged"],
            residual_history=list(d["residual_history"]),
            cost_measured=d["cost_measured"],
            time_measured=d["time_measured"],
            setup_cost=d["setup_cost"],
            cost_analytic=d["cost_analytic"],
            time_analytic=d["time_analytic"],
            errata_notes=list(d["errata_notes"]),
        )


def _jsonable(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    return v


def emit_report(report, path, fmt="json"):
    """Write ``report`` to ``path`` as ``json`` (summary) or ``csv`` (per iteration)."""
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    elif fmt == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            for i, (r, c, t) in enumerate(
                zip(report.residual_history, report.cost_history, report.time_history), start=1
            ):
                w.writerow([i, repr(float(r)), c, t])
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    return path


def read_report(path):
    return SolverReport.from_dict(json.loads(Path(path).read_text()))
