import numpy as np
import pytest

from dlsq import mesh
from dlsq.exceptions import DivergenceError
from dlsq.linalg import solve_ls_direct
from dlsq.mesh import FLOOD, CostLedger
from dlsq.partition import row_partition
from dlsq.problem import LSProblem, generate_problem
from dlsq.solvers.dlms import DlmsConfig, DlmsNodeState, dlms_init, dlms_run, dlms_step


def test_consensus_zero_error_is_fixed_point():
    net = mesh.ring(4)
    A = np.random.default_rng(0).standard_normal((8, 3))
    x = np.array([0.5, -1.0, 2.0])
    prob = LSProblem(A, A @ x)
    cfg = DlmsConfig()
    states = dlms_init(row_partition(prob.A, prob.b, 4), net, cfg, x0=[x] * 4)
    inbox_x = {u: {nb: x.copy() for nb in net.neighbors(u)} for u in range(4)}
    inbox_v = {u: {nb: np.zeros(3) for nb in net.neighbors(u)} for u in range(4)}
    for s in states:
        dlms_step(s, cfg, inbox_x[s.node], inbox_v[s.node])
        np.testing.assert_allclose(s.x, x, atol=1e-14)
        assert all(np.all(v == 0) for v in s.v.values())


def test_two_node_hand_step():
    # node 0: x=1, v[1]=0.5, sample (a=2, b=3); neighbor sends x=0 and v=-0.25
    s = DlmsNodeState(node=0, x=np.array([1.0]), v={1: np.array([0.5])},
                      A_u=np.array([[2.0]]), b_u=np.array([3.0]))
    cfg = DlmsConfig(mu=0.1, c=1.0)
    dlms_step(s, cfg, {1: np.array([0.0])}, {1: np.array([-0.25])})
    # v = 0.5 + 0.5 * (1 - 0) = 1.0
    assert s.v[1][0] == pytest.approx(1.0)
    # e = 3 - 2 = 1; x = 1 + 0.1 * (2*2*1 - (1.0 + 0.25) - (1 - 0)) = 1.175
    assert s.x[0] == pytest.approx(1.175)
    assert s.sample_cursor == 0


def test_cursor_cycles():
    s = DlmsNodeState(node=0, x=np.zeros(1), v={}, A_u=np.ones((3, 1)), b_u=np.zeros(3))
    cfg = DlmsConfig()
    seen = []
    for _ in range(4):
        seen.append(s.sample_cursor)
        dlms_step(s, cfg, {}, {})
    assert seen == [0, 1, 2, 0]


def test_compensating_multipliers_are_fixed_point():
    # one row per node keeps the sample fixed, so the averaged fixed point is exact
    net = mesh.ring(6)
    rng = np.random.default_rng(8)
    A = rng.standard_normal((6, 3))
    b = rng.standard_normal(6)
    x_star = solve_ls_direct(A, b)
    g = A * (b - A @ x_star)[:, None]          # per-node a_u e_u, sums to zero
    L = np.zeros((6, 6))
    for u, v in net.edges:
        L[u, v] = L[v, u] = -1
    L += np.diag(-L.sum(axis=1))
    phi = np.linalg.lstsq(L, 2 * g, rcond=None)[0]
    cfg = DlmsConfig(mu=0.01, c=1.0)
    states = dlms_init(row_partition(A, b, 6), net, cfg, x0=[x_star] * 6)
    for s in states:
        for nb in s.v:
            s.v[nb] = 0.5 * (phi[s.node] - phi[nb])
    before_v = {s.node: {k: v.copy() for k, v in s.v.items()} for s in states}
    # multipliers as the neighbors will send them this round (unchanged at consensus)
    inbox_v = {s.node: {nb: before_v[nb][s.node] for nb in s.v} for s in states}
    for s in states:
        dlms_step(s, cfg, {nb: x_star.copy() for nb in s.v}, inbox_v[s.node])
        assert np.abs(s.x - x_star).max() <= 1e-10
        for nb in s.v:
            assert np.abs(s.v[nb] - before_v[s.node][nb]).max() <= 1e-10


def test_deterministic_reruns():
    p = generate_problem(24, 4, 5)
    cfg = DlmsConfig(max_iter=200, noise_std=0.01, seed=3)
    r1 = dlms_run(p, mesh.ring(6), cfg)
    r2 = dlms_run(p, mesh.ring(6), cfg)
    assert np.array_equal(r1.per_node_x, r2.per_node_x)
    assert r1.trace["spread"] == r2.trace["spread"]


def test_locality_and_cost_formula():
    p = generate_problem(30, 4, 1)
    for net in (mesh.ring(6), mesh.grid(2, 3), mesh.random_geometric(6, 0.6, 2)):
        led = CostLedger()
        r = dlms_run(p, net, DlmsConfig(max_iter=60), led)
        assert led.count(FLOOD) == 0
        assert {e.kind for e in led.events} == {"broadcast", "unicast"}
        assert all(net.has_edge(e.src, e.dst) for e in led.events if e.kind == "unicast")
        n, k = 4, r.k
        assert r.cost_measured == k * n * (net.degree_sum + net.n_nodes)
        assert r.time_measured == 2 * k * n * net.d_max


def test_ring6_converges():
    p = generate_problem(24, 4, 5)
    r = dlms_run(p, mesh.ring(6), DlmsConfig(mu=0.01, c=1.0, seed=5))
    assert r.converged
    xs = solve_ls_direct(p.A, p.b)
    assert np.linalg.norm(r.final_x - xs) / np.linalg.norm(xs) <= 1e-2
    spread = r.trace["spread"]
    windows = [max(spread[i : i + 50]) for i in range(0, len(spread), 50)]
    assert all(b < a for a, b in zip(windows, windows[1:]))


def test_divergence_guard():
    p = generate_problem(24, 4, 5)
    with pytest.raises(DivergenceError, match=r"mu=1\.5.*c=1\.0"):
        dlms_run(p, mesh.ring(6), DlmsConfig(mu=1.5, c=1.0, max_iter=2000))


def test_bad_config():
    with pytest.raises(ValueError):
        DlmsConfig(mu=0)
