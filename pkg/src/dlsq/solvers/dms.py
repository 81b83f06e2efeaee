"""Distributed multisplitting (D-MS).

Each node owns a column block ``A'_u`` and the matching slice ``x_u``.  An
iteration is: solve the local problem ``min ||A'_u y - b_u(x)||`` through the
stored QR factors, take the damped step ``x_u += alpha (y - x_u)``, flood
``B_u = A'_u (y - x_u)`` and fold everybody else's ``B`` into ``b_u(x)``.
"""

from dataclasses import dataclass

import numpy as np

from ..linalg import normal_residual, qr_decompose
from ..mesh import CostLedger, record_flood_round
from ..partition import col_partition, redistribute_columns, row_partition
from ._common import build_report


@dataclass
class DmsConfig:
    tol: float = 1e-6
    max_iter: int = 1000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass
class DmsNodeState:
    Acol: np.ndarray
    qr: object
    x: np.ndarray
    y: np.ndarray
    delta: np.ndarray
    b_vec: np.ndarray
    alpha: float


def dms_init(colpart, b, x0=None):
    """Node states before the first iteration (``b_u(x^0) = b`` with ``x^0 = 0``)."""
    N = colpart.n_nodes
    states = []
    for u, Acol in enumerate(colpart.blocks):
        nu = Acol.shape[1]
        xu = np.zeros(nu) if x0 is None else np.asarray(x0[colpart.slice(u)], dtype=float).copy()
        states.append(
            DmsNodeState(
                Acol=Acol,
                qr=qr_decompose(Acol),
                x=xu,
                y=xu.copy(),
                delta=np.zeros(nu),
                b_vec=np.asarray(b, dtype=float).copy(),
                alpha=1.0 / N,
            )
        )
    if x0 is not None:
        # b_u(x) = b - A x + A'_u x_u
        Ax = sum(s.Acol @ s.x for s in states)
        for s in states:
            s.b_vec = b - Ax + s.Acol @ s.x
    return states


def dms_local_update(state):
    """Solve the local subproblem, step ``x_u`` and return ``B_u`` (length m)."""
    state.y = state.qr.solve(state.b_vec)
    state.delta = state.y - state.x
    state.x = state.x + state.alpha * state.delta
    return state.Acol @ state.delta


def dms_absorb(state, u, flooded, alphas):
    """Fold the other nodes' flooded ``B`` vectors into ``b_u(x)`` (node-id order)."""
    for v, B in enumerate(flooded):
        if v != u:
            state.b_vec = state.b_vec - alphas[v] * B


def _column_blocks(problem, net, ledger):
    A = problem.A
    N = net.n_nodes
    if A.shape[0] == A.shape[1] and np.array_equal(A, A.T):
        # symmetric A: row block u transposed is column block u, no exchange needed
        return col_partition(A, N)
    return redistribute_columns(row_partition(A, problem.b, N), net, ledger)


def dms_run(problem, net, config=None, ledger=None, colpart=None, x0=None):
    """Run D-MS until the observer's normal-equation residual drops below ``config.tol``.

    Every iteration is exactly one flood round in which each node floods
    ``m`` scalars.  Hitting ``max_iter`` returns a report with
    ``converged=False``.
    """
    config = config or DmsConfig()
    ledger = ledger if ledger is not None else CostLedger()
    A, b = problem.A, problem.b
    m = A.shape[0]
    if colpart is None:
        colpart = _column_blocks(problem, net, ledger)
    states = dms_init(colpart, b, x0)
    N = len(states)

    history, iterates, b_drift = [], [], []
    converged = False
    k = 0
    while k < config.max_iter:
        k += 1
        flooded = [dms_local_update(s) for s in states]
        record_flood_round(ledger, net, [m] * N, "dms:B", k)
        alphas = [s.alpha for s in states]
        for u, s in enumerate(states):
            dms_absorb(s, u, flooded, alphas)

        x = np.concatenate([s.x for s in states])
        iterates.append(x)
        Ax = A @ x
        b_drift.append(max(float(np.abs(s.b_vec - (b - Ax + s.Acol @ s.x)).max()) for s in states))
        res = normal_residual(A, b, x)
        history.append((res, ledger.cost_units, ledger.time_units))
        if res <= config.tol:
            converged = True
            break

    x = np.concatenate([s.x for s in states])
    return build_report(
        "dms", problem, net, ledger, k, x, converged, history,
        trace={"x": iterates, "b_drift": b_drift},
    )
