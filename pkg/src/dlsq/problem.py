"""Least-squares problem instances: generation and the plain-text file format.

File format: first line ``m n``; then ``m`` lines each holding the ``n``
entries of a row of ``A`` followed by the matching entry of ``b``.  Floats
are written with ``repr`` (shortest round-trip decimal), so write/read is
bit-exact.
"""

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DimensionError
from .partition import block_sizes

KINDS = ("gaussian", "block_orthogonal", "conditioned")
NOISE_STD = 1e-3


@dataclass
class LSProblem:
    A: np.ndarray
    b: np.ndarray
    x_true: np.ndarray = None
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.A.shape


def _orthonormal(rng, m, n):
    q, r = np.linalg.qr(rng.standard_normal((m, n)))
    return q * np.sign(np.diag(r))


def generate_problem(m, n, seed, kind="gaussian", N=None, kappa=None, noise_std=NOISE_STD):
    """Generate a seeded overdetermined instance ``b = A x_true + noise``.

    Parameters
    ----------
    kind : {"gaussian", "block_orthogonal", "conditioned"}
        ``gaussian`` draws standard normal entries.  ``conditioned`` builds
        ``U diag(s) V^T`` with singular values log-spaced from 1 down to
        ``1/kappa``.  ``block_orthogonal`` makes the ``N`` column blocks (as
        laid out by :func:`~dlsq.partition.col_partition`) mutually orthogonal.
    """
    if not (m >= n >= 1):
        raise DimensionError(f"need m >= n >= 1, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    meta = {"m": m, "n": n, "seed": seed, "kind": kind}
    if kind == "gaussian":
        A = rng.standard_normal((m, n))
    elif kind == "conditioned":
        if kappa is None or kappa < 1:
            raise ValueError("conditioned problems need kappa >= 1")
        U = _orthonormal(rng, m, n)
        V = _orthonormal(rng, n, n)
        s = np.logspace(0.0, -np.log10(kappa), n)
        A = (U * s) @ V.T
        meta["kappa"] = kappa
    elif kind == "block_orthogonal":
        if N is None:
            raise ValueError("block_orthogonal problems need N")
        Q = _orthonormal(rng, m, n)
        blocks = []
        start = 0
        for size in block_sizes(n, N):
            rot = _orthonormal(rng, size, size)
            scale = rng.uniform(1.0, 3.0, size)
            blocks.append(Q[:, start : start + size] @ (rot * scale))
            start += size
        A = np.hstack(blocks)
        meta["N"] = N
    else:
        raise ValueError(f"unknown problem kind {kind!r}; expected one of {KINDS}")
    x_true = rng.standard_normal(n)
    b = A @ x_true + noise_std * rng.standard_normal(m)
    return LSProblem(A, b, x_true, meta)


def format_problem(problem):
    A, b = problem.A, problem.b
    m, n = A.shape
    lines = [f"{m} {n}"]
    for i in range(m):
        lines.append(" ".join(repr(float(v)) for v in A[i]) + " " + repr(float(b[i])))
    return "\n".join(lines) + "\n"


def parse_problem(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DimensionError("empty problem file")
    try:
        m, n = (int(t) for t in lines[0].split())
    except ValueError:
        raise DimensionError("first line of a problem file must be 'm n'") from None
    if len(lines) - 1 != m:
        raise DimensionError(f"header says {m} rows but file holds {len(lines) - 1}")
    data = np.array([[float(t) for t in ln.split()] for ln in lines[1:]]).reshape(m, -1)
    if data.shape[1] != n + 1:
        raise DimensionError(f"expected {n + 1} values per row, got {data.shape[1]}")
    return LSProblem(np.ascontiguousarray(data[:, :n]), data[:, n].copy(), meta={"m": m, "n": n})


def write_problem(problem, path):
    Path(path).write_text(format_problem(problem))


def read_problem(path):
    return parse_problem(Path(path).read_text())
