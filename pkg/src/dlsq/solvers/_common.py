from fractions import Fraction

import numpy as np

from ..costs import ERRATA, analytic
from ..report import SolverReport


def network_dims(problem, net):
    m, n = problem.A.shape
    return {"m": m, "n": n, "N": net.n_nodes, "degree_sum": net.degree_sum, "d_max": net.d_max}


def build_report(algorithm, problem, net, ledger, k, x, converged, history, **extra):
    """Assemble a :class:`SolverReport` with measured and analytic channels filled in.

    ``history`` is a list of ``(residual, cum_cost, cum_time)`` tuples, one per iteration.
    """
    dims = network_dims(problem, net)
    cost, time = analytic(
        algorithm, k, dims["m"], dims["n"], dims["N"],
        Fraction(dims["degree_sum"], dims["N"]), dims["d_max"],
    )
    return SolverReport(
        algorithm=algorithm,
        k=k,
        final_x=np.asarray(x, dtype=float),
        converged=bool(converged),
        residual_history=[h[0] for h in history],
        cost_history=[h[1] for h in history],
        time_history=[h[2] for h in history],
        cost_measured=ledger.cost_units,
        time_measured=ledger.time_units,
        setup_cost=ledger.setup_cost_units,
        cost_analytic=cost,
        time_analytic=time,
        errata_notes=[ERRATA[algorithm]] if algorithm in ERRATA else [],
        dims=dims,
        **extra,
    )
