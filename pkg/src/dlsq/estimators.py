"""scikit-learn style front end for the distributed solvers."""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .harness import ExperimentConfig, run_experiment
from .problem import LSProblem


class DistributedLeastSquares(RegressorMixin, BaseEstimator):
    """Least-squares regressor whose fit runs a simulated distributed solver.

    The rows of ``X`` are split over the nodes of ``topology`` in order, as
    if each node had measured a consecutive slice of the data.  No intercept
    is fitted.

    Parameters
    ----------
    algorithm : {"dms", "dmcgls", "dlms", "drls"}
    topology : str
        Topology spec such as ``"ring:6"`` or ``"grid:2x3"``.
    tol, max_iter : optional
        Stopping rule for the iterative solvers.
    mu, c : optional
        D-LMS step size and penalty.
    lam, eps : optional
        D-RLS forgetting factor and initial ridge weight.
    seed : int
        Seed for D-LMS initialization and reception noise.

    Attributes
    ----------
    coef_ : ndarray of shape (n_features,)
    report_ : SolverReport
    n_iter_ : int
    converged_ : bool
    """

    def __init__(
        self,
        algorithm="dmcgls",
        topology="ring:4",
        tol=None,
        max_iter=None,
        mu=None,
        c=None,
        lam=None,
        eps=None,
        seed=0,
    ):
        self.algorithm = algorithm
        self.topology = topology
        self.tol = tol
        self.max_iter = max_iter
        self.mu = mu
        self.c = c
        self.lam = lam
        self.eps = eps
        self.seed = seed

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, y_numeric=True)
        config = ExperimentConfig(
            algorithm=self.algorithm,
            problem=LSProblem(X, y),
            topology=self.topology,
            solver={
                "tol": self.tol, "max_iter": self.max_iter, "mu": self.mu, "c": self.c,
                "lambda": self.lam, "eps": self.eps,
            },
            seed=self.seed,
        )
        self.report_ = run_experiment(config)
        self.coef_ = np.asarray(self.report_.final_x)
        self.n_iter_ = self.report_.k
        self.converged_ = self.report_.converged
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X @ self.coef_
