import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlsq import mesh
from dlsq.exceptions import AdjacencyError, TopologyError
from dlsq.mesh import (
    BROADCAST,
    FLOOD,
    UNICAST,
    CostLedger,
    build_topology,
    record_broadcast_round,
    record_flood_round,
    record_multihop_unicast,
    record_neighbor_unicast_round,
    record_path_hop,
)


class TestTopologies:
    def test_ring4(self):
        net = mesh.ring(4)
        assert len(net.edges) == 4
        assert net.degrees == (2, 2, 2, 2)
        assert net.d_max == 2
        assert net.hamiltonian_path == (0, 1, 2, 3)

    def test_path3(self):
        net = mesh.path(3)
        assert net.edges == frozenset({(0, 1), (1, 2)})
        assert net.d_avg == pytest.approx(4 / 3)
        assert net.d_max == 2

    def test_grid_2x3(self):
        net = mesh.grid(2, 3)
        # rows: 0-1-2 / 3-4-5, verticals 0-3, 1-4, 2-5
        assert net.edges == frozenset({(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)})
        assert net.d_max == 3
        assert net.hamiltonian_path == (0, 1, 2, 5, 4, 3)

    def test_small_rings(self):
        assert mesh.ring(1).edges == frozenset()
        assert mesh.ring(2).edges == frozenset({(0, 1)})

    def test_star(self):
        net = mesh.star(5)
        assert net.d_max == 4
        assert net.hamiltonian_path is None

    def test_hop_distances(self):
        net = mesh.ring(6)
        assert net.hop_dist[0, 3] == 3
        assert net.hop_dist[1, 5] == 2
        assert net.diameter == 3

    def test_disconnected_rejected(self):
        with pytest.raises(TopologyError):
            mesh.MeshNetwork(4, frozenset({(0, 1), (2, 3)}))

    def test_self_loop_rejected(self):
        with pytest.raises(TopologyError):
            mesh.MeshNetwork(2, frozenset({(0, 0), (0, 1)}))

    def test_bad_hamiltonian_path(self):
        with pytest.raises(TopologyError):
            mesh.MeshNetwork(3, frozenset({(0, 1), (1, 2)}), hamiltonian_path=(0, 2, 1))

    def test_random_geometric_deterministic(self):
        a = mesh.random_geometric(12, 0.4, 3)
        b = mesh.random_geometric(12, 0.4, 3)
        assert a == b
        assert a.hamiltonian_path is None

    def test_random_geometric_gives_up(self):
        with pytest.raises(TopologyError):
            mesh.random_geometric(30, 0.01, 0)

    def test_build_topology_specs(self):
        assert build_topology("ring:5") == mesh.ring(5)
        assert build_topology("grid:2x3") == mesh.grid(2, 3)
        assert build_topology("rgg:10:0.5:2") == mesh.random_geometric(10, 0.5, 2)
        with pytest.raises(TopologyError):
            build_topology("torus:3")
        with pytest.raises(TopologyError):
            build_topology("ring:x")

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 15), st.floats(0.3, 0.9), st.integers(0, 10_000))
    def test_degree_and_distance_properties(self, N, radius, seed):
        net = mesh.random_geometric(N, radius, seed)
        assert net.d_avg <= net.d_max <= N - 1
        D = net.hop_dist
        assert np.array_equal(D, D.T)
        assert np.all(np.diag(D) == 0)
        for i, j, k in itertools.product(range(N), repeat=3):
            assert D[i, k] <= D[i, j] + D[j, k]


class TestHamiltonianSearch:
    def test_finds_path_on_grid(self):
        net = mesh.MeshNetwork(6, mesh.grid(2, 3).edges)
        hp = mesh.find_hamiltonian_path(net)
        assert sorted(hp) == list(range(6))
        assert all(net.has_edge(a, b) for a, b in zip(hp, hp[1:]))

    def test_star_has_none(self):
        assert mesh.find_hamiltonian_path(mesh.star(5)) is None
        with pytest.raises(TopologyError):
            mesh.with_hamiltonian_path(mesh.star(5))

    def test_attached_path_validates(self):
        net = mesh.with_hamiltonian_path(mesh.random_geometric(10, 0.6, 1))
        assert net.hamiltonian_path is not None


class TestTopologyFile:
    def test_roundtrip(self, tmp_path):
        net = mesh.random_geometric(9, 0.5, 4)
        p = tmp_path / "t.txt"
        mesh.write_topology(net, p)
        text = p.read_text()
        back = mesh.read_topology(p)
        assert back.edges == net.edges and back.n_nodes == net.n_nodes
        assert mesh.format_topology(back) == text

    def test_format(self):
        assert mesh.format_topology(mesh.path(3)) == "3\n0 1\n1 2\n"

    def test_malformed(self):
        with pytest.raises(TopologyError):
            mesh.parse_topology("3\n0 1 2\n")
        with pytest.raises(TopologyError):
            mesh.parse_topology("3\n0 1\n1 0\n1 2\n")


class TestLedgerRules:
    def test_flood_uniform(self):
        led = CostLedger()
        record_flood_round(led, mesh.ring(4), [16] * 4, "B", 1)
        assert (led.cost_units, led.time_units) == (256, 48)

    def test_flood_single_node(self):
        led = CostLedger()
        record_flood_round(led, mesh.ring(1), [7], "B", 1)
        assert (led.cost_units, led.time_units) == (7, 0)

    def test_flood_events(self):
        led = CostLedger()
        record_flood_round(led, mesh.path(3), [2, 2, 2], "B", 1)
        assert led.cost_units == 18
        assert [e.kind for e in led.events] == [FLOOD] * 3

    def test_flood_mixed_payload_uses_max(self):
        led = CostLedger()
        record_flood_round(led, mesh.ring(3), [3, 2, 2], "r", 1)
        assert (led.cost_units, led.time_units) == (21, 6)

    def test_broadcast_ring(self):
        led = CostLedger()
        record_broadcast_round(led, mesh.ring(4), 5, "x", 1)
        assert (led.cost_units, led.time_units) == (20, 10)
        assert led.count(BROADCAST) == 4

    def test_broadcast_single_node(self):
        led = CostLedger()
        record_broadcast_round(led, mesh.ring(1), 3, "x", 1)
        assert (led.cost_units, led.time_units) == (3, 0)

    def test_broadcast_star_hub(self):
        led = CostLedger()
        record_broadcast_round(led, mesh.star(5), 2, "x", 1)
        assert led.time_units == 2 * 4

    def test_unicast_round_ring(self):
        led = CostLedger()
        record_neighbor_unicast_round(led, mesh.ring(4), 5, "v", 1)
        assert (led.cost_units, led.time_units) == (40, 10)
        assert led.count(UNICAST) == 8

    def test_unicast_round_single_edge(self):
        led = CostLedger()
        record_neighbor_unicast_round(led, mesh.path(2), 1, "v", 1)
        assert (led.cost_units, led.time_units) == (2, 1)

    def test_broadcast_plus_unicast(self):
        net, n = mesh.ring(4), 5
        led = CostLedger()
        record_broadcast_round(led, net, n, "x", 1)
        record_neighbor_unicast_round(led, net, n, "v", 1)
        assert led.cost_units == n * net.n_nodes * (net.d_avg + 1)

    def test_path_hop(self):
        led = CostLedger()
        record_path_hop(led, mesh.path(5), 0, 1, 3 + 9, "psi")
        assert (led.cost_units, led.time_units) == (12, 12)
        record_path_hop(led, mesh.path(5), 1, 2, 1, "psi")
        assert led.cost_units == 13

    def test_full_path_pass(self):
        net = mesh.path(5)
        led = CostLedger()
        for a, b in zip(net.hamiltonian_path, net.hamiltonian_path[1:]):
            record_path_hop(led, net, a, b, 12, "psi")
        assert led.cost_units == 48

    def test_path_hop_requires_adjacency(self):
        with pytest.raises(AdjacencyError):
            record_path_hop(CostLedger(), mesh.path(5), 0, 2, 1, "psi")

    def test_multihop(self):
        led = CostLedger()
        record_multihop_unicast(led, mesh.path(5), 0, 4, 3, "m")
        assert (led.cost_units, led.time_units) == (12, 12)

    def test_event_validation(self):
        with pytest.raises(ValueError):
            mesh.CommEvent(FLOOD, 0, None, 0, "x", 0)
        with pytest.raises(ValueError):
            mesh.CommEvent(UNICAST, 0, None, 1, "x", 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["flood", "bcast", "ucast"]), st.integers(1, 9)), max_size=12))
def test_ledger_additivity_and_determinism(rounds):
    net = mesh.grid(2, 3)

    def play():
        led = CostLedger()
        increments = []
        for kind, p in rounds:
            before = led.snapshot()
            if kind == "flood":
                record_flood_round(led, net, [p] * net.n_nodes, kind, 0)
            elif kind == "bcast":
                record_broadcast_round(led, net, p, kind, 0)
            else:
                record_neighbor_unicast_round(led, net, p, kind, 0)
            after = led.snapshot()
            assert after[0] >= before[0] and after[1] >= before[1]
            increments.append((after[0] - before[0], after[1] - before[1]))
        return led, increments

    a, inc = play()
    b, _ = play()
    assert a.snapshot() == (sum(c for c, _ in inc), sum(t for _, t in inc))
    assert a.events == b.events and a.snapshot() == b.snapshot()
