"""Row and column partitions of a least-squares problem over network nodes."""

from dataclasses import dataclass

import numpy as np

from .exceptions import PartitionError
from .mesh import record_setup_flood


def block_sizes(total, N):
    """Split ``total`` items into ``N`` consecutive blocks; earlier blocks take the remainder."""
    if N < 1:
        raise PartitionError("need at least one node")
    if total < N:
        raise PartitionError(f"cannot split {total} items over {N} nodes")
    q, r = divmod(total, N)
    return [q + 1 if u < r else q for u in range(N)]


def _offsets(sizes):
    return np.concatenate([[0], np.cumsum(sizes)]).astype(int)


@dataclass(frozen=True)
class RowPartition:
    blocks_A: tuple
    blocks_b: tuple
    offsets: tuple

    @property
    def n_nodes(self):
        return len(self.blocks_A)

    @property
    def sizes(self):
        return [blk.shape[0] for blk in self.blocks_A]

    def stack(self):
        return np.vstack(self.blocks_A), np.concatenate(self.blocks_b)


@dataclass(frozen=True)
class ColPartition:
    blocks: tuple
    offsets: tuple

    @property
    def n_nodes(self):
        return len(self.blocks)

    @property
    def sizes(self):
        return [blk.shape[1] for blk in self.blocks]

    def slice(self, u):
        return slice(self.offsets[u], self.offsets[u + 1])

    def stack(self):
        return np.hstack(self.blocks)


def row_partition(A, b, N):
    """Give node ``u`` consecutive rows ``offsets[u]:offsets[u+1]`` of ``(A, b)``."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    off = _offsets(block_sizes(A.shape[0], N))
    blocks_A = tuple(A[off[u] : off[u + 1]].copy() for u in range(N))
    blocks_b = tuple(b[off[u] : off[u + 1]].copy() for u in range(N))
    return RowPartition(blocks_A, blocks_b, tuple(int(o) for o in off))


def col_partition(A, N):
    """Give node ``u`` consecutive columns ``offsets[u]:offsets[u+1]`` of ``A``."""
    A = np.asarray(A, dtype=float)
    off = _offsets(block_sizes(A.shape[1], N))
    blocks = tuple(A[:, off[u] : off[u + 1]].copy() for u in range(N))
    return ColPartition(blocks, tuple(int(o) for o in off))


def redistribute_columns(rowpart, net, ledger):
    """Column blocks each node holds after a one-time exchange of its row block.

    Node ``u`` floods the ``m_u x (n - n_u)`` part of its rows that belongs to
    other nodes' column blocks; the traffic goes to ``ledger.setup_cost_units``.
    """
    A, _ = rowpart.stack()
    N = rowpart.n_nodes
    colpart = col_partition(A, N)
    if N > 1:
        n = A.shape[1]
        payloads = {
            u: rowpart.sizes[u] * (n - colpart.sizes[u]) for u in range(N)
        }
        record_setup_flood(ledger, net, payloads, "redistribute_columns")
    return colpart
