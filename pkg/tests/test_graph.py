import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import maxcons as mc
from maxcons.exceptions import ConnectivityFailure, InvalidParameter

THRESHOLD_RADIUS_10 = math.sqrt(2 * math.log(10) / 10)


class TestGenerateRgg:
    def test_single_node_has_no_edges(self):
        g = mc.generate_rgg(1, 0.3, seed=0)
        assert g.n == 1
        assert g.m == 0

    def test_two_nodes_at_diameter_radius_always_connect(self):
        g = mc.generate_rgg(2, math.sqrt(2), seed=123)
        assert g.edges == ((0, 1),)

    def test_pinned_reference_graph(self):
        # regression value from the first seeded run of this implementation
        g = mc.generate_rgg(10, THRESHOLD_RADIUS_10, seed=42)
        assert g.is_connected()
        assert g.m == 31

    def test_fixed_seed_is_bit_reproducible(self):
        g1 = mc.generate_rgg(10, THRESHOLD_RADIUS_10, seed=7)
        g2 = mc.generate_rgg(10, THRESHOLD_RADIUS_10, seed=7)
        assert g1 == g2
        assert np.array_equal(g1.coordinates, g2.coordinates)
        assert g1 != mc.generate_rgg(10, THRESHOLD_RADIUS_10, seed=8)

    def test_default_radius_is_threshold(self):
        assert mc.default_rgg_radius(10) == pytest.approx(THRESHOLD_RADIUS_10)
        g = mc.generate_rgg(10, seed=42)
        assert g.m == 31

    @pytest.mark.parametrize("n,radius", [(0, 0.5), (-1, 0.5), (3, 0.0), (3, -1.0), (3, 2.0)])
    def test_invalid_parameters(self, n, radius):
        with pytest.raises(InvalidParameter):
            mc.generate_rgg(n, radius, seed=0)

    def test_connectivity_failure_after_retries(self):
        with pytest.raises(ConnectivityFailure):
            mc.generate_rgg(3, 1e-9, seed=0)


class TestGraph:
    def test_edge_normalization_and_adjacency(self):
        g = mc.Graph(4, ((2, 0), (1, 2), (3, 2)))
        assert g.edges == ((0, 2), (1, 2), (2, 3))
        assert g.neighbors(2) == (0, 1, 3)
        assert g.degree(2) == 3 and g.degree(0) == 1

    @pytest.mark.parametrize(
        "edges", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)]
    )
    def test_rejects_bad_edges(self, edges):
        with pytest.raises(InvalidParameter):
            mc.Graph(3, edges)

    def test_directed_edges_canonical_order(self, path3):
        assert path3.directed_edges == ((0, 1), (1, 0), (1, 2), (2, 1))
        rev = path3.reverse_index
        for k, (i, j) in enumerate(path3.directed_edges):
            assert path3.directed_edges[rev[k]] == (j, i)

    def test_connectivity_and_diameter(self, path3):
        assert path3.is_connected()
        assert path3.diameter() == 2
        assert not mc.Graph(3, ((0, 1),)).is_connected()

    def test_relabeled_preserves_structure(self, path3):
        g = path3.relabeled([2, 0, 1])
        assert g.edges == ((0, 1), (0, 2))
        assert g.degree(0) == 2


class TestAugment:
    def test_path_example(self, path3):
        ag = mc.augment(path3)
        assert ag.n_total == 6
        assert set(ag.edges_augmented) == {(0, 1), (1, 2), (0, 3), (1, 4), (2, 5)}

    def test_single_node(self):
        ag = mc.augment(mc.Graph(1, ()))
        assert ag.n_total == 2
        assert ag.edges_augmented == ((0, 1),)

    def test_rgg_counts(self):
        g = mc.generate_rgg(10, seed=42)
        ag = mc.augment(g)
        assert ag.n_total == 20
        assert len(ag.edges_augmented) == g.m + 10

    def test_base_unchanged(self):
        g = mc.generate_rgg(10, seed=42)
        assert mc.augment(g).base == g

    @given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.floats(0.2, 1.4))
    @settings(max_examples=40, deadline=None)
    def test_degree_invariants(self, n, seed, radius):
        rng = np.random.default_rng(seed)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        mask = rng.random(len(pairs)) < radius / 2
        g = mc.Graph(n, tuple(e for e, keep in zip(pairs, mask) if keep))
        ag = mc.augment(g)
        for i in range(n):
            assert ag.degree_regular(i) == g.degree(i)
            assert ag.degree_augmented(i) == g.degree(i) + 1
        dummy_edges = [e for e in ag.edges_augmented if e not in g.edges]
        assert dummy_edges == [(i, n + i) for i in range(n)]


class TestTopologyFile:
    def test_round_trip(self, tmp_path):
        g = mc.generate_rgg(10, seed=42)
        path = tmp_path / "topology.txt"
        mc.write_topology(g, path)
        g2 = mc.read_topology(path)
        assert g2.n == g.n and g2.edges == g.edges

    def test_header_format(self, tmp_path, path3):
        path = tmp_path / "t.txt"
        mc.write_topology(path3, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "n=3"
        assert lines[1:] == ["1 2", "2 3"]

    def test_rejects_missing_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 2\n")
        with pytest.raises(InvalidParameter):
            mc.read_topology(path)
