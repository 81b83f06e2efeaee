"""Experiment orchestration: build inputs, run a solver, fill the report."""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .costs import ALGORITHMS
from .exceptions import ConfigurationError
from .mesh import CostLedger, build_topology, with_hamiltonian_path
from .problem import KINDS, LSProblem, generate_problem, read_problem
from .report import emit_report
from .solvers import SOLVERS

log = logging.getLogger(__name__)

# CLI / config key -> solver config attribute, per algorithm
SOLVER_KEYS = {
    "dms": {"tol": "tol", "max_iter": "max_iter"},
    "dmcgls": {"tol": "tol", "max_iter": "max_iter"},
    "dlms": {
        "mu": "mu", "c": "c", "max_iter": "max_iter", "seed": "seed",
        "noise_std": "noise_std", "tol_consensus": "tol_consensus",
        "tol": "tol_solution", "init": "init",
    },
    "drls": {"lambda": "lam", "lam": "lam", "eps": "eps", "gamma": "gamma"},
}


def parse_problem_spec(spec, seed=0, N=None):
    """``kind:m:n[:extra]`` -> generated problem, otherwise a problem file path.

    ``extra`` is ``kappa`` for ``conditioned`` and the block count for
    ``block_orthogonal`` (defaulting to ``N``).
    """
    if isinstance(spec, LSProblem):
        return spec
    parts = str(spec).split(":")
    if parts[0] in KINDS:
        try:
            kind, m, n = parts[0], int(parts[1]), int(parts[2])
            extra = parts[3] if len(parts) > 3 else None
        except (IndexError, ValueError):
            raise ConfigurationError(f"malformed problem spec {spec!r}; expected kind:m:n[:extra]") from None
        if kind == "conditioned":
            return generate_problem(m, n, seed, kind, kappa=float(extra if extra else 1.0))
        if kind == "block_orthogonal":
            return generate_problem(m, n, seed, kind, N=int(extra) if extra else N)
        return generate_problem(m, n, seed, kind)
    p = Path(spec)
    if not p.exists():
        raise ConfigurationError(f"problem file {spec!r} does not exist")
    return read_problem(p)


@dataclass
class ExperimentConfig:
    algorithm: str
    problem: object
    topology: object
    solver: dict = field(default_factory=dict)
    seed: int = 0
    out: object = None
    fmt: str = "json"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")

    def solver_config(self):
        _, cfg_cls = SOLVERS[self.algorithm]
        keys = SOLVER_KEYS[self.algorithm]
        kwargs = {}
        for k, v in self.solver.items():
            if v is None:
                continue
            if k not in keys:
                log.debug("ignoring %s for %s", k, self.algorithm)
                continue
            kwargs[keys[k]] = v
        if self.algorithm == "dlms":
            kwargs.setdefault("seed", self.seed)
        return cfg_cls(**kwargs)


def run_experiment(config):
    """Build topology and problem, run the chosen solver, write outputs if requested."""
    net = build_topology(config.topology)
    problem = parse_problem_spec(config.problem, config.seed, net.n_nodes)
    m, n = problem.A.shape
    N = net.n_nodes
    if not (m >= n >= 1 and m >= N):
        raise ConfigurationError(f"need m >= n >= 1 and m >= N, got m={m}, n={n}, N={N}")
    if config.algorithm in ("dms", "dmcgls") and n < N:
        raise ConfigurationError(f"{config.algorithm} needs n >= N for the column split")
    if config.algorithm == "drls" and net.hamiltonian_path is None:
        # path discovery is not charged to the ledger
        net = with_hamiltonian_path(net)

    run, _ = SOLVERS[config.algorithm]
    ledger = CostLedger()
    report = run(problem, net, config.solver_config(), ledger)
    log.info(
        "%s: k=%d converged=%s cost=%d time=%d",
        config.algorithm, report.k, report.converged, report.cost_measured, report.time_measured,
    )
    if config.out is not None:
        emit_report(report, config.out, config.fmt)
    return report
