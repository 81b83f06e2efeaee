"""Recursive least squares, centralized and relayed along a Hamiltonian path.

The distributed version moves the same recursion from node to node: node
``u`` runs its rows through the update, then hands ``(x, P)`` (``n + n^2``
scalars) to its successor on the path.  With forgetting factor ``lambda``
and per-row weight ``gamma`` one row update is::

    P~ = P / lambda
    g  = P~ a / (1/gamma + a^T P~ a)
    x <- x + g (b - a^T x)
    P <- P~ - g (P~ a)^T

With ``lambda = 1`` and ``P = I / eps`` initially, the final ``x`` is the
ridge solution ``argmin sum gamma_i (b_i - a_i^T x)^2 + eps ||x - prior||^2``.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigurationError, DimensionError
from ..linalg import normal_residual
from ..mesh import CostLedger, record_path_hop
from ..partition import row_partition
from ._common import build_report


@dataclass
class DrlsConfig:
    lam: float = 1.0
    eps: float = 1e-10
    gamma: object = 1.0
    prior: object = None

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise ValueError("forgetting factor must be in (0, 1]")
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    def gamma_for(self, u):
        g = self.gamma[u] if np.ndim(self.gamma) else self.gamma
        if not g > 0:
            raise ValueError("per-node weights gamma_u must be positive")
        return float(g)

    def initial_state(self, n):
        prior = np.zeros(n) if self.prior is None else np.asarray(self.prior, dtype=float).copy()
        if prior.shape != (n,):
            raise DimensionError(f"prior must have length {n}")
        return RlsState(prior, np.eye(n) / self.eps)


@dataclass
class RlsState:
    x: np.ndarray
    P: np.ndarray
    max_asymmetry: float = 0.0
    n_updates: int = 0


def rls_update(state, a, b, lam=1.0, gamma=1.0):
    """Absorb one observation ``b ~ a^T x`` in place."""
    Pt = state.P / lam
    Pa = Pt @ a
    g = Pa / (1.0 / gamma + a @ Pa)
    state.x = state.x + g * (b - a @ state.x)
    P = Pt - np.outer(g, Pa)
    # asymmetry relative to the scale of the matrix being updated
    drift = float(np.abs(P - P.T).max() / np.abs(Pt).max())
    state.max_asymmetry = max(state.max_asymmetry, drift)
    state.P = 0.5 * (P + P.T)
    state.n_updates += 1
    return state


def rls_centralized(A, b, config=None, weights=None):
    """Classic RLS over the rows of ``(A, b)`` in order.

    ``weights[i]`` is the per-row weight (default 1).
    """
    config = config or DrlsConfig()
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[1] if A.ndim == 2 else len(config.prior)
    state = config.initial_state(n)
    for i in range(len(b)):
        w = 1.0 if weights is None else float(weights[i])
        rls_update(state, A[i], b[i], config.lam, w)
    return state


def path_ordered_stream(rowpart, order, config):
    """Rows and per-row weights in the order the path visits them."""
    A = np.vstack([rowpart.blocks_A[u] for u in order])
    b = np.concatenate([rowpart.blocks_b[u] for u in order])
    w = np.concatenate([np.full(rowpart.sizes[u], config.gamma_for(u)) for u in order])
    return A, b, w


def drls_run(problem, net, config=None, ledger=None, rowpart=None, order=None):
    """One pass of distributed RLS along ``order`` (default ``net.hamiltonian_path``).

    Raises
    ------
    ConfigurationError
        If no Hamiltonian path is available.
    """
    config = config or DrlsConfig()
    ledger = ledger if ledger is not None else CostLedger()
    A, b = problem.A, problem.b
    n = A.shape[1]
    if order is None:
        order = net.hamiltonian_path
    if order is None:
        raise ConfigurationError("D-RLS needs a Hamiltonian path through the network")
    if sorted(order) != list(range(net.n_nodes)):
        raise ConfigurationError("path must visit every node exactly once")
    if rowpart is None:
        rowpart = row_partition(A, b, net.n_nodes)

    state = config.initial_state(n)
    for j, u in enumerate(order):
        gamma = config.gamma_for(u)
        A_u, b_u = rowpart.blocks_A[u], rowpart.blocks_b[u]
        for i in range(A_u.shape[0]):
            rls_update(state, A_u[i], b_u[i], config.lam, gamma)
        if j + 1 < len(order):
            record_path_hop(ledger, net, u, order[j + 1], n + n * n, "drls:psi,P", 1)

    history = [(normal_residual(A, b, state.x), ledger.cost_units, ledger.time_units)]
    return build_report(
        "drls", problem, net, ledger, 1, state.x, True, history,
        trace={"P": state.P, "max_asymmetry": state.max_asymmetry, "order": tuple(order)},
    )
