"""Distributed least mean squares (D-LMS) with neighbor-consensus multipliers.

One synchronous round ``k``:

1. every node broadcasts ``x_u(k)`` to its neighbors;
2. every node updates its multipliers
   ``v[u'] += c/2 * (x_u - x_u'_received)`` for each neighbor ``u'``;
3. every node unicasts ``v[u']`` to neighbor ``u'``;
4. every node takes an LMS step on its next data row plus a consensus
   correction built from the received estimates and multipliers.

Data rows are cycled, so a fixed block of rows is reused indefinitely.
Reception noise (zero-mean Gaussian, ``noise_std``) is added to every
received vector when enabled.
"""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConfigurationError, DivergenceError
from ..linalg import normal_residual, solve_ls_direct
from ..mesh import CostLedger, record_broadcast_round, record_neighbor_unicast_round
from ..partition import row_partition
from ._common import build_report

DIVERGENCE_LIMIT = 1e8


@dataclass
class DlmsConfig:
    mu: float = 0.01
    c: float = 1.0
    noise_std: float = 0.0
    tol_consensus: float = 1e-3
    tol_solution: float = 1e-2
    max_iter: int = 20000
    seed: int = 0
    init: str = "random"

    def __post_init__(self):
        if not (self.mu > 0 and self.c > 0):
            raise ValueError("mu and c must be positive")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")
        if self.init not in ("random", "zeros"):
            raise ValueError("init must be 'random' or 'zeros'")


@dataclass
class DlmsNodeState:
    node: int
    x: np.ndarray
    v: dict
    A_u: np.ndarray
    b_u: np.ndarray
    sample_cursor: int = 0
    inbox_x: dict = field(default_factory=dict)
    inbox_v: dict = field(default_factory=dict)


def update_multipliers(state, inbox_x, c):
    """``v[u'] <- v[u'] + c/2 (x_u - x_u')`` for every neighbor."""
    for nb in state.v:
        state.v[nb] = state.v[nb] + 0.5 * c * (state.x - inbox_x[nb])


def update_estimate(state, inbox_x, inbox_v, mu, c):
    """LMS step on the current sample row plus the consensus terms; advances the cursor."""
    a = state.A_u[state.sample_cursor]
    e = state.b_u[state.sample_cursor] - a @ state.x
    mult = np.zeros_like(state.x)
    disagree = np.zeros_like(state.x)
    for nb in state.v:
        mult += state.v[nb] - inbox_v[nb]
        disagree += state.x - inbox_x[nb]
    state.x = state.x + mu * (2.0 * a * e - mult - c * disagree)
    state.sample_cursor = (state.sample_cursor + 1) % state.A_u.shape[0]


def dlms_step(state, config, inbox_x, inbox_v):
    """Both half-steps for one node.

    ``inbox_v[u']`` must hold neighbor ``u'``'s multiplier toward this node
    as sent *after* its own multiplier update in the same round.
    """
    update_multipliers(state, inbox_x, config.c)
    update_estimate(state, inbox_x, inbox_v, config.mu, config.c)
    return state


def dlms_init(rowpart, net, config, x0=None):
    n = rowpart.blocks_A[0].shape[1]
    rng = np.random.default_rng(config.seed)
    states = []
    for u in range(net.n_nodes):
        if x0 is not None:
            xu = np.asarray(x0[u], dtype=float).copy()
        elif config.init == "random":
            xu = rng.standard_normal(n)
        else:
            xu = np.zeros(n)
        states.append(
            DlmsNodeState(
                node=u,
                x=xu,
                v={nb: np.zeros(n) for nb in net.neighbors(u)},
                A_u=rowpart.blocks_A[u],
                b_u=rowpart.blocks_b[u],
            )
        )
    return states


def consensus_spread(states):
    X = np.array([s.x for s in states])
    xbar = X.mean(axis=0)
    return float(np.linalg.norm(X - xbar, axis=1).max()), xbar


def dlms_run(problem, net, config=None, ledger=None, rowpart=None, x0=None):
    """Run D-LMS until consensus and proximity to the direct LS solution.

    Converged when ``max_u ||x_u - xbar|| <= tol_consensus`` and
    ``||xbar - x*|| / ||x*|| <= tol_solution``, both evaluated by an
    observer at no communication cost.

    Raises
    ------
    DivergenceError
        If any ``||x_u||`` exceeds ``1e8``.
    """
    config = config or DlmsConfig()
    ledger = ledger if ledger is not None else CostLedger()
    A, b = problem.A, problem.b
    n = A.shape[1]
    N = net.n_nodes
    if rowpart is None:
        rowpart = row_partition(A, b, N)
    if min(rowpart.sizes) < 1:
        raise ConfigurationError("every node needs at least one row")
    states = dlms_init(rowpart, net, config, x0)
    x_star = solve_ls_direct(A, b)
    x_star_norm = np.linalg.norm(x_star) or 1.0
    noise = np.random.default_rng(config.seed + 1)

    def received(vec):
        if config.noise_std > 0:
            return vec + config.noise_std * noise.standard_normal(vec.shape)
        return vec

    history, spreads, errors = [], [], []
    converged = False
    k = 0
    xbar = np.mean([s.x for s in states], axis=0)
    while k < config.max_iter:
        k += 1
        record_broadcast_round(ledger, net, n, "dlms:x", k)
        for s in states:
            s.inbox_x = {nb: received(states[nb].x) for nb in s.v}
        for s in states:
            update_multipliers(s, s.inbox_x, config.c)
        record_neighbor_unicast_round(ledger, net, n, "dlms:v", k)
        for s in states:
            s.inbox_v = {nb: received(states[nb].v[s.node]) for nb in s.v}
        for s in states:
            update_estimate(s, s.inbox_x, s.inbox_v, config.mu, config.c)

        biggest = max(float(np.linalg.norm(s.x)) for s in states)
        if not np.isfinite(biggest) or biggest > DIVERGENCE_LIMIT:
            raise DivergenceError(
                f"D-LMS diverged at iteration {k} (max ||x_u|| = {biggest:.3e}) "
                f"with mu={config.mu}, c={config.c}"
            )
        spread, xbar = consensus_spread(states)
        err = float(np.linalg.norm(xbar - x_star) / x_star_norm)
        spreads.append(spread)
        errors.append(err)
        history.append((normal_residual(A, b, xbar), ledger.cost_units, ledger.time_units))
        if spread <= config.tol_consensus and err <= config.tol_solution:
            converged = True
            break

    report = build_report(
        "dlms", problem, net, ledger, k, xbar, converged, history,
        trace={"spread": spreads, "solution_error": errors},
    )
    report.per_node_x = np.array([s.x for s in states])
    return report
