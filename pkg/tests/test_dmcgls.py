import numpy as np
import pytest

from dlsq import mesh
from dlsq.exceptions import BreakdownError
from dlsq.linalg import solve_ls_direct
from dlsq.problem import LSProblem, generate_problem
from dlsq.solvers.dmcgls import McglsConfig, dmcgls_run, mcgls_centralized


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


class TestCentralized:
    def test_exact_start_stops_immediately(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((8, 3))
        x0 = rng.standard_normal(3)
        hist, x = mcgls_centralized(A, A @ x0, x0=x0)
        assert hist == []
        np.testing.assert_array_equal(x, x0)

    def test_finite_termination(self):
        rng = np.random.default_rng(1)
        A = rng.standard_normal((20, 6))
        b = rng.standard_normal(20)
        hist, x = mcgls_centralized(A, b, tol=1e-13, max_iter=50)
        assert len(hist) <= 6 + 2
        assert rel(x, solve_ls_direct(A, b)) <= 1e-9

    def test_diagonal(self):
        hist, x = mcgls_centralized(np.diag([1.0, 2.0, 3.0, 4.0]), np.ones(4), tol=1e-14)
        np.testing.assert_allclose(x, [1, 1 / 2, 1 / 3, 1 / 4], rtol=1e-12)

    def test_residual_norm_non_increasing(self):
        p = generate_problem(40, 10, 2, "conditioned", kappa=30)
        hist, _ = mcgls_centralized(p.A, p.b, tol=1e-12)
        norms = [np.linalg.norm(h.r) for h in hist]
        assert all(b <= a + 1e-12 for a, b in zip(norms, norms[1:]))

    def test_zero_matrix_stops_without_breakdown(self):
        # s0 = A^T r0 = 0, so the start point already satisfies the normal equations
        hist, x = mcgls_centralized(np.zeros((3, 2)), np.ones(3))
        assert hist == [] and np.all(x == 0)


class TestDistributed:
    def test_oracle_equivalence(self):
        p = generate_problem(60, 12, 11)
        r = dmcgls_run(p, mesh.ring(6), McglsConfig(tol=1e-10))
        hist, _ = mcgls_centralized(p.A, p.b, tol=1e-10)
        steps = r.trace["steps"]
        assert len(steps) == len(hist) == r.k
        # scalars are compared on the scale of their first value; late gammas sit at round-off
        g0, d0 = hist[0].gamma, hist[0].delta
        for d, c in zip(steps, hist):
            assert rel(d.x, c.x) <= 1e-10
            assert rel(d.r, c.r) <= 1e-10
            assert abs(d.gamma - c.gamma) <= 1e-10 * max(c.gamma, g0)
            assert abs(d.delta - c.delta) <= 1e-10 * max(c.delta, d0)
        assert r.trace["globals_agree"]

    @pytest.mark.parametrize("net", [mesh.ring(6), mesh.grid(2, 3), mesh.random_geometric(6, 0.6, 3)])
    def test_cost_formula(self, net):
        p = generate_problem(60, 12, 11)
        r = dmcgls_run(p, net)
        k, m, n, N = r.k, 60, 12, 6
        assert r.cost_measured == (k + 1) * (m + N) * N + k * (n + N) * N
        assert r.time_measured == (N - 1) * ((k + 1) * (10 + 1) + k * (2 + 1))
        assert r.time_measured <= k * (m + n + 2) * (N - 1)

    def test_single_node(self):
        p = generate_problem(15, 4, 3)
        r = dmcgls_run(p, mesh.ring(1), McglsConfig(tol=1e-12))
        assert r.time_measured == 0
        _, x = mcgls_centralized(p.A, p.b, tol=1e-12)
        np.testing.assert_allclose(r.final_x, x, rtol=1e-12)

    def test_zero_iterations_when_started_at_solution(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((12, 4))
        x0 = rng.standard_normal(4)
        r = dmcgls_run(LSProblem(A, A @ x0), mesh.ring(4), x0=x0)
        assert r.k == 0 and r.converged
        assert r.cost_measured == (12 + 4) * 4

    def test_unequal_blocks(self):
        p = generate_problem(23, 7, 5)
        r = dmcgls_run(p, mesh.ring(3))
        assert rel(r.final_x, solve_ls_direct(p.A, p.b)) <= 1e-8
        k, m, n, N = r.k, 23, 7, 3
        assert r.cost_measured == (k + 1) * (m + N) * N + k * (n + N) * N

    def test_breakdown_error_type(self):
        err = BreakdownError(3)
        assert err.iteration == 3 and "iteration 3" in str(err)
