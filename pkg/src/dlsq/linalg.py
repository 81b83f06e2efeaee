"""Dense linear-algebra kernels and the centralized least-squares oracle.

Matrices and vectors are plain ``numpy.ndarray`` objects of dtype float64.
The QR factorization is a hand-written Householder implementation so that
the rank-deficiency rule is deterministic and independent of LAPACK pivoting.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionError, RankDeficiencyError

RANK_RTOL = 1e-12


def as_matrix(A, name="A"):
    """Return ``A`` as a finite 2-D float64 array (copy-free when possible)."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DimensionError(f"{name} contains non-finite entries")
    return A


def as_vector(x, name="x"):
    """Return ``x`` as a finite 1-D float64 array."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DimensionError(f"{name} contains non-finite entries")
    return x


def matvec(A, x):
    """Matrix-vector product with shape checking."""
    A = as_matrix(A)
    x = as_vector(x)
    if A.shape[1] != x.shape[0]:
        raise DimensionError(
            f"cannot multiply {A.shape[0]}x{A.shape[1]} matrix by vector of length {x.shape[0]}"
        )
    return A @ x


@dataclass(frozen=True)
class QRFactors:
    """Thin QR factors: ``Q`` is m x n with orthonormal columns, ``R`` is n x n upper triangular."""

    Q: np.ndarray
    R: np.ndarray

    def solve(self, b):
        """Least-squares solution of ``Q R x = b``."""
        return back_substitute(self.R, self.Q.T @ b)


def qr_decompose(A):
    """Householder QR of a tall, full-column-rank matrix.

    Parameters
    ----------
    A : array_like, shape (m, n)
        Matrix with ``m >= n``.

    Returns
    -------
    QRFactors
        Thin factors with ``R`` exactly zero below the diagonal.

    Raises
    ------
    RankDeficiencyError
        If some ``|R[j, j]|`` falls below ``1e-12`` times the largest column norm of ``A``.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m < n:
        raise DimensionError(f"QR requires rows >= cols, got {m}x{n}")
    colnorm = np.linalg.norm(A, axis=0).max() if n else 0.0
    threshold = RANK_RTOL * colnorm

    W = A.copy()
    reflectors = []
    for j in range(n):
        x = W[j:, j]
        normx = np.linalg.norm(x)
        v = x.copy()
        if normx > 0.0:
            alpha = -normx if x[0] >= 0 else normx
            v[0] -= alpha
            vnorm = np.linalg.norm(v)
            v /= vnorm
            W[j:, j:] -= 2.0 * np.outer(v, v @ W[j:, j:])
            W[j + 1 :, j] = 0.0
        else:
            v[:] = 0.0
        if abs(W[j, j]) < threshold or colnorm == 0.0:
            raise RankDeficiencyError(j, abs(W[j, j]), threshold)
        reflectors.append(v)

    R = np.triu(W[:n, :n])
    Q = np.zeros((m, n))
    Q[:n, :n] = np.eye(n)
    for j in reversed(range(n)):
        v = reflectors[j]
        Q[j:, j:] -= 2.0 * np.outer(v, v @ Q[j:, j:])
    return QRFactors(Q=Q, R=R)


def back_substitute(R, y):
    """Solve ``R x = y`` for upper triangular ``R``."""
    n = R.shape[0]
    x = np.zeros(n)
    for i in reversed(range(n)):
        x[i] = (y[i] - R[i, i + 1 :] @ x[i + 1 :]) / R[i, i]
    return x


def solve_ls_direct(A, b):
    """Minimize ``||A x - b||_2`` through Householder QR."""
    A = as_matrix(A)
    b = as_vector(b, "b")
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
    return qr_decompose(A).solve(b)


def solve_ridge(A, b, eps, prior):
    """Minimize ``||A x - b||^2 + eps * ||x - prior||^2``.

    Solved as the stacked least-squares problem ``[A; sqrt(eps) I] x ~ [b; sqrt(eps) prior]``,
    so zero-row ``A`` is allowed and returns ``prior``.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    prior = as_vector(prior, "prior")
    n = prior.shape[0]
    A = np.asarray(A, dtype=float).reshape(-1, n)
    A = as_matrix(A)
    b = as_vector(b, "b")
    if A.shape[0] != b.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
    s = np.sqrt(eps)
    stacked = np.vstack([A, s * np.eye(n)])
    rhs = np.concatenate([b, s * prior])
    return solve_ls_direct(stacked, rhs)


def normal_residual(A, b, x):
    """Relative normal-equation residual ``||A^T (b - A x)|| / ||A^T b||``."""
    g = A.T @ (b - A @ x)
    denom = np.linalg.norm(A.T @ b)
    if denom == 0.0:
        return float(np.linalg.norm(g))
    return float(np.linalg.norm(g) / denom)
