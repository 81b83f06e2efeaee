"""Conjugate-gradient least squares: centralized reference and distributed form.

In the distributed form node ``u`` holds the row block ``A_u`` (for ``q_u =
A_u p``) and the column block ``A'_u`` (for ``s_u = A'_u^T r``).  Vector
pieces and scalar partial inner products are flooded; every node then
rebuilds the global quantities itself, always reducing in node-id order so
all nodes agree bitwise.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import BreakdownError
from ..linalg import as_matrix, as_vector, normal_residual
from ..mesh import CostLedger, record_flood_round
from ..partition import col_partition, redistribute_columns, row_partition
from ._common import build_report


@dataclass
class McglsConfig:
    tol: float = 1e-10
    max_iter: int = 500

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass
class McglsStep:
    x: np.ndarray
    r: np.ndarray
    gamma: float
    delta: float


def mcgls_centralized(A, b, x0=None, tol=1e-10, max_iter=500):
    """Centralized CGLS.

    Stops once ``sqrt(gamma) / ||A^T b|| <= tol`` where ``gamma = ||A^T r||^2``.

    Returns
    -------
    history : list of McglsStep
        One entry per iteration (entry ``i`` is after iteration ``i + 1``).
    x : ndarray
        Final iterate.
    """
    A = as_matrix(A)
    b = as_vector(b, "b")
    x = np.zeros(A.shape[1]) if x0 is None else as_vector(x0, "x0").copy()
    scale = np.linalg.norm(A.T @ b) or 1.0
    r = b - A @ x
    s = A.T @ r
    p = s.copy()
    gamma = float(s @ s)
    history = []
    if np.sqrt(gamma) / scale <= tol:
        return history, x
    for k in range(1, max_iter + 1):
        q = A @ p
        delta = float(q @ q)
        if delta == 0.0:
            raise BreakdownError(k)
        alpha = gamma / delta
        x = x + alpha * p
        r = r - alpha * q
        s = A.T @ r
        gamma_new = float(s @ s)
        history.append(McglsStep(x.copy(), r.copy(), gamma_new, delta))
        if np.sqrt(gamma_new) / scale <= tol:
            break
        beta = gamma_new / gamma
        gamma = gamma_new
        p = s + beta * p
    return history, x


@dataclass
class McglsNodeState:
    A_u: np.ndarray
    Acol_u: np.ndarray
    x_u: np.ndarray
    p_u: np.ndarray
    s_u: np.ndarray
    q_u: np.ndarray
    r_u: np.ndarray
    gamma_u: float = 0.0
    delta_u: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    r: np.ndarray = None
    p: np.ndarray = None


def _sum_scalars(parts):
    total = 0.0
    for v in parts:
        total += v
    return total


def dmcgls_run(problem, net, config=None, ledger=None, rowpart=None, colpart=None, x0=None):
    """Distributed CGLS over flood rounds.

    Initialization floods ``r^0_u`` (length ``m_u``) and ``gamma^0_u``; each
    iteration floods ``p_u`` (``n_u``), ``delta_u``, ``r_u`` (``m_u``) and
    ``gamma_u`` in that order.
    """
    config = config or McglsConfig()
    ledger = ledger if ledger is not None else CostLedger()
    A, b = problem.A, problem.b
    N = net.n_nodes
    if rowpart is None:
        rowpart = row_partition(A, b, N)
    if colpart is None:
        if A.shape[0] == A.shape[1] and np.array_equal(A, A.T):
            colpart = col_partition(A, N)
        else:
            colpart = redistribute_columns(rowpart, net, ledger)
    x0 = np.zeros(A.shape[1]) if x0 is None else np.asarray(x0, dtype=float)
    scale = np.linalg.norm(A.T @ b) or 1.0

    nodes = []
    for u in range(N):
        sl = colpart.slice(u)
        A_u = rowpart.blocks_A[u]
        nodes.append(
            McglsNodeState(
                A_u=A_u,
                Acol_u=colpart.blocks[u],
                x_u=x0[sl].copy(),
                p_u=np.zeros(colpart.sizes[u]),
                s_u=np.zeros(colpart.sizes[u]),
                q_u=np.zeros(rowpart.sizes[u]),
                r_u=rowpart.blocks_b[u] - A_u @ x0,
            )
        )

    def flood_vectors(attr, label, it):
        pieces = [getattr(nd, attr) for nd in nodes]
        record_flood_round(ledger, net, [len(p) for p in pieces], label, it)
        return pieces

    def flood_scalars(attr, label, it):
        vals = [getattr(nd, attr) for nd in nodes]
        record_flood_round(ledger, net, [1] * N, label, it)
        return vals

    # init
    r_pieces = flood_vectors("r_u", "dmcgls:r0", 0)
    for nd in nodes:
        nd.r = np.concatenate(r_pieces)
    for nd in nodes:
        nd.s_u = nd.Acol_u.T @ nd.r
        nd.p_u = nd.s_u.copy()
        nd.gamma_u = float(nd.s_u @ nd.s_u)
    g_parts = flood_scalars("gamma_u", "dmcgls:gamma0", 0)
    for nd in nodes:
        nd.gamma = _sum_scalars(g_parts)

    history, iterates = [], []
    k = 0
    converged = np.sqrt(nodes[0].gamma) / scale <= config.tol
    while not converged and k < config.max_iter:
        k += 1
        if k > 1:
            for nd in nodes:
                nd.p_u = nd.s_u + nd.beta * nd.p_u
        p_pieces = flood_vectors("p_u", "dmcgls:p", k)
        for nd in nodes:
            nd.p = np.concatenate(p_pieces)
            nd.q_u = nd.A_u @ nd.p
            nd.delta_u = float(nd.q_u @ nd.q_u)
        d_parts = flood_scalars("delta_u", "dmcgls:delta", k)
        for nd in nodes:
            nd.delta = _sum_scalars(d_parts)
            if nd.delta == 0.0:
                raise BreakdownError(k)
            nd.alpha = nd.gamma / nd.delta
            nd.x_u = nd.x_u + nd.alpha * nd.p_u
            nd.r_u = nd.r_u - nd.alpha * nd.q_u
        r_pieces = flood_vectors("r_u", "dmcgls:r", k)
        for nd in nodes:
            nd.r = np.concatenate(r_pieces)
            nd.s_u = nd.Acol_u.T @ nd.r
            nd.gamma_u = float(nd.s_u @ nd.s_u)
        g_parts = flood_scalars("gamma_u", "dmcgls:gamma", k)
        for nd in nodes:
            gamma_new = _sum_scalars(g_parts)
            nd.beta = gamma_new / nd.gamma
            nd.gamma = gamma_new

        x = np.concatenate([nd.x_u for nd in nodes])
        iterates.append(
            McglsStep(x, nodes[0].r.copy(), nodes[0].gamma, nodes[0].delta)
        )
        history.append((normal_residual(A, b, x), ledger.cost_units, ledger.time_units))
        converged = np.sqrt(nodes[0].gamma) / scale <= config.tol

    x = np.concatenate([nd.x_u for nd in nodes])
    globals_agree = all(
        nd.gamma == nodes[0].gamma and nd.delta == nodes[0].delta and nd.alpha == nodes[0].alpha
        for nd in nodes
    )
    return build_report(
        "dmcgls", problem, net, ledger, k, x, converged, history,
        trace={"steps": iterates, "globals_agree": globals_agree},
    )
