"""Mesh-network model and message-level cost accounting.

Cost units count scalars times links traversed; time units count unit-time
slots under one radio per node and unit link bandwidth.  Accounting is done
per synchronous round:

* flood round: every flooding node's message reaches all ``N`` nodes, each
  node retransmitting once, so cost is ``payload * N`` per flooding node.  A
  receiver must take in every other node's message on its single radio, so
  time is ``(N - 1) * max(payload)``.
* broadcast round: every node sends one local broadcast; cost
  ``payload * N``, time ``payload * d_max`` (the busiest receiver).
* neighbor-unicast round: every node sends a distinct message to each
  neighbor; cost ``payload * sum(deg)``, time ``payload * d_max``.
* path hop: one single-hop unicast; cost and time both ``payload``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .exceptions import AdjacencyError, TopologyError

MAX_TOPOLOGY_ATTEMPTS = 1000


@dataclass(frozen=True)
class MeshNetwork:
    """Immutable connected undirected graph on nodes ``0 .. N-1``."""

    n_nodes: int
    edges: frozenset
    hamiltonian_path: Optional[tuple] = None
    degrees: tuple = field(init=False)
    hop_dist: np.ndarray = field(init=False, repr=False, compare=False)
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        N = self.n_nodes
        if N < 1:
            raise TopologyError("network needs at least one node")
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise TopologyError(f"self-loop at node {u}")
            if not (0 <= u < N and 0 <= v < N):
                raise TopologyError(f"edge ({u}, {v}) out of range for N={N}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

        adj = [[] for _ in range(N)]
        for u, v in sorted(norm):
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "degrees", tuple(len(a) for a in adj))

        rows = [u for u, v in norm] + [v for u, v in norm]
        cols = [v for u, v in norm] + [u for u, v in norm]
        graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(N, N))
        ncomp, _ = connected_components(graph, directed=False)
        if ncomp != 1:
            raise TopologyError(f"network is not connected ({ncomp} components)")
        dist = shortest_path(graph, directed=False, unweighted=True)
        dist = dist.astype(np.int64)
        dist.setflags(write=False)
        object.__setattr__(self, "hop_dist", dist)

        if self.hamiltonian_path is not None:
            path = tuple(int(u) for u in self.hamiltonian_path)
            if sorted(path) != list(range(N)):
                raise TopologyError("Hamiltonian path must visit every node exactly once")
            for a, b in zip(path, path[1:]):
                if not self.has_edge(a, b):
                    raise TopologyError(f"Hamiltonian path step {a}->{b} is not an edge")
            object.__setattr__(self, "hamiltonian_path", path)

    @property
    def degree_sum(self):
        return 2 * len(self.edges)

    @property
    def d_avg(self):
        return self.degree_sum / self.n_nodes

    @property
    def d_max(self):
        return max(self.degrees)

    @property
    def diameter(self):
        return int(self.hop_dist.max())

    def neighbors(self, u):
        return self._adj[u]

    def has_edge(self, u, v):
        return v in self._adj[u]


# -- generators -------------------------------------------------------------


def ring(N):
    if N < 1:
        raise TopologyError("ring needs N >= 1")
    if N == 1:
        edges = []
    elif N == 2:
        edges = [(0, 1)]
    else:
        edges = [(u, (u + 1) % N) for u in range(N)]
    return MeshNetwork(N, frozenset(edges), tuple(range(N)))


def path(N):
    if N < 1:
        raise TopologyError("path needs N >= 1")
    return MeshNetwork(N, frozenset((u, u + 1) for u in range(N - 1)), tuple(range(N)))


def grid(rows, cols):
    """``rows x cols`` lattice; node ``(i, j)`` has id ``i * cols + j``.

    The Hamiltonian path is the serpentine (boustrophedon) order.
    """
    if rows < 1 or cols < 1:
        raise TopologyError("grid dimensions must be >= 1")
    edges = []
    for i in range(rows):
        for j in range(cols):
            u = i * cols + j
            if j + 1 < cols:
                edges.append((u, u + 1))
            if i + 1 < rows:
                edges.append((u, u + cols))
    order = []
    for i in range(rows):
        js = range(cols) if i % 2 == 0 else reversed(range(cols))
        order.extend(i * cols + j for j in js)
    return MeshNetwork(rows * cols, frozenset(edges), tuple(order))


def star(N):
    """Hub node 0 joined to every other node."""
    if N < 1:
        raise TopologyError("star needs N >= 1")
    hp = tuple(range(N)) if N <= 2 else None
    return MeshNetwork(N, frozenset((0, u) for u in range(1, N)), hp)


def random_geometric(N, radius, seed):
    """Random geometric graph in the unit square.

    Seeds ``seed, seed + 1, ...`` are tried in turn until the graph is
    connected.  No Hamiltonian path is attached; see :func:`with_hamiltonian_path`.
    """
    if N < 1:
        raise TopologyError("random_geometric needs N >= 1")
    if radius <= 0:
        raise TopologyError("radius must be positive")
    for attempt in range(MAX_TOPOLOGY_ATTEMPTS):
        rng = np.random.default_rng(seed + attempt)
        pts = rng.random((N, 2))
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
        iu, ju = np.nonzero(np.triu(d <= radius, k=1))
        try:
            return MeshNetwork(N, frozenset(zip(iu.tolist(), ju.tolist())))
        except TopologyError:
            continue
    raise TopologyError(
        f"no connected random geometric graph for N={N}, radius={radius} "
        f"after {MAX_TOPOLOGY_ATTEMPTS} seeds starting at {seed}"
    )


def build_topology(spec):
    """Build a network from a spec string.

    Accepted forms: ``ring:N``, ``path:N``, ``star:N``, ``grid:RxC``,
    ``rgg:N:RADIUS:SEED``, or the path of a topology file.
    """
    if isinstance(spec, MeshNetwork):
        return spec
    spec = str(spec).strip()
    kind, _, rest = spec.partition(":")
    try:
        if kind == "ring":
            return ring(int(rest))
        if kind == "path":
            return path(int(rest))
        if kind == "star":
            return star(int(rest))
        if kind == "grid":
            r, c = rest.lower().split("x")
            return grid(int(r), int(c))
        if kind in ("rgg", "random_geometric"):
            n, radius, seed = rest.split(":")
            return random_geometric(int(n), float(radius), int(seed))
    except ValueError as exc:
        raise TopologyError(f"malformed topology spec {spec!r}: {exc}") from None
    p = Path(spec)
    if p.exists():
        return read_topology(p)
    raise TopologyError(f"unknown topology spec {spec!r}")


def find_hamiltonian_path(net, max_steps=2_000_000):
    """Backtracking search for a Hamiltonian path, or ``None``.

    Neighbors are tried fewest-onward-options first (Warnsdorff's rule).
    The search is abandoned after ``max_steps`` expansions.
    """
    N = net.n_nodes
    if N == 1:
        return (0,)
    steps = 0
    starts = sorted(range(N), key=lambda u: (net.degrees[u], u))
    for start in starts:
        visited = [False] * N
        visited[start] = True
        route = [start]
        stack = [iter(_ordered_options(net, start, visited))]
        while stack:
            if len(route) == N:
                return tuple(route)
            steps += 1
            if steps > max_steps:
                return None
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                visited[route.pop()] = False
                continue
            visited[nxt] = True
            route.append(nxt)
            stack.append(iter(_ordered_options(net, nxt, visited)))
    return None


def _ordered_options(net, u, visited):
    opts = [v for v in net.neighbors(u) if not visited[v]]
    return sorted(opts, key=lambda v: (sum(not visited[w] for w in net.neighbors(v)), v))


def with_hamiltonian_path(net):
    """Return ``net`` with a Hamiltonian path attached (searching if needed)."""
    if net.hamiltonian_path is not None:
        return net
    hp = find_hamiltonian_path(net)
    if hp is None:
        raise TopologyError("network has no Hamiltonian path (or search budget exhausted)")
    return dataclasses.replace(net, hamiltonian_path=hp)


# -- topology file ------------------------------------------------------------


def format_topology(net):
    lines = [str(net.n_nodes)]
    lines += [f"{u} {v}" for u, v in sorted(net.edges)]
    return "\n".join(lines) + "\n"


def parse_topology(text):
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 1:
        raise TopologyError("topology file must start with a line holding N")
    try:
        N = int(lines[0][0])
        edges = []
        for parts in lines[1:]:
            if len(parts) != 2:
                raise ValueError(f"bad edge line {' '.join(parts)!r}")
            edges.append((int(parts[0]), int(parts[1])))
    except ValueError as exc:
        raise TopologyError(f"malformed topology file: {exc}") from None
    if len(set((min(e), max(e)) for e in edges)) != len(edges):
        raise TopologyError("duplicate edge in topology file")
    return MeshNetwork(N, frozenset(edges))


def write_topology(net, path):
    Path(path).write_text(format_topology(net))


def read_topology(path):
    return parse_topology(Path(path).read_text())


# -- cost ledger -----------------------------------------------------------------

UNICAST, BROADCAST, FLOOD = "unicast", "broadcast", "flood"


@dataclass(frozen=True)
class CommEvent:
    kind: str
    src: int
    dst: Optional[int]
    payload_len: int
    round_label: str
    iteration: int

    def __post_init__(self):
        if self.payload_len < 1:
            raise ValueError("payload_len must be >= 1")
        if (self.dst is not None) != (self.kind == UNICAST):
            raise ValueError("dst must be given for unicast and only for unicast")


@dataclass
class CostLedger:
    """Append-only record of transmissions with running cost/time totals.

    ``setup_cost_units`` collects one-off preprocessing traffic (column
    redistribution) and is kept apart from the algorithmic totals.
    """

    events: list = field(default_factory=list)
    cost_units: int = 0
    time_units: int = 0
    setup_cost_units: int = 0

    def snapshot(self):
        return self.cost_units, self.time_units

    def count(self, kind):
        return sum(1 for e in self.events if e.kind == kind)

    def _charge(self, cost, time):
        self.cost_units += int(cost)
        self.time_units += int(time)


def record_flood_round(ledger, net, payloads, label, iteration):
    """Every node ``u`` with a payload floods ``payloads[u]`` scalars.

    ``payloads`` is a sequence indexed by node id or a mapping node -> length.
    """
    items = payloads.items() if hasattr(payloads, "items") else enumerate(payloads)
    items = [(int(u), int(p)) for u, p in items]
    N = net.n_nodes
    for u, p in items:
        ledger.events.append(CommEvent(FLOOD, u, None, p, label, iteration))
    ledger._charge(sum(p for _, p in items) * N, (N - 1) * max((p for _, p in items), default=0))


def record_broadcast_round(ledger, net, payload_len, label, iteration):
    """Every node sends one local broadcast of ``payload_len`` scalars."""
    for u in range(net.n_nodes):
        ledger.events.append(CommEvent(BROADCAST, u, None, payload_len, label, iteration))
    ledger._charge(payload_len * net.n_nodes, payload_len * net.d_max)


def record_neighbor_unicast_round(ledger, net, payload_len, label, iteration):
    """Every node sends a distinct ``payload_len``-scalar message to each neighbor."""
    for u in range(net.n_nodes):
        for v in net.neighbors(u):
            ledger.events.append(CommEvent(UNICAST, u, v, payload_len, label, iteration))
    ledger._charge(payload_len * net.degree_sum, payload_len * net.d_max)


def record_path_hop(ledger, net, src, dst, payload_len, label, iteration=0):
    """Single-hop unicast between adjacent nodes."""
    if not net.has_edge(src, dst):
        raise AdjacencyError(f"nodes {src} and {dst} are not neighbors")
    ledger.events.append(CommEvent(UNICAST, src, dst, payload_len, label, iteration))
    ledger._charge(payload_len, payload_len)


def record_multihop_unicast(ledger, net, src, dst, payload_len, label, iteration=0):
    """Unicast relayed along a shortest path: cost and time ``payload * hops``."""
    hops = int(net.hop_dist[src, dst])
    ledger.events.append(CommEvent(UNICAST, src, dst, payload_len, label, iteration))
    ledger._charge(payload_len * hops, payload_len * hops)


def record_setup_flood(ledger, net, payloads, label):
    """Flood charged to ``setup_cost_units`` only; algorithmic totals are untouched."""
    N = net.n_nodes
    items = payloads.items() if hasattr(payloads, "items") else enumerate(payloads)
    for u, p in items:
        if p > 0:
            ledger.events.append(CommEvent(FLOOD, int(u), None, int(p), label, -1))
            ledger.setup_cost_units += int(p) * N
