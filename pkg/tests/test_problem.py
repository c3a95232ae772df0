import numpy as np
import pytest
from scipy.optimize import linprog

import maxcons as mc
from maxcons.exceptions import DimensionMismatch, EmptyInput, InvalidParameter


class TestAssemble:
    def test_two_node_example(self, k2):
        p = mc.assemble(mc.augment(k2), [0.0, 1.0], c=1.0)
        # directed edges are ((0,1),(1,0)); A_12 = +1, A_21 = -1
        assert p.a_directed.tolist() == [1.0, -1.0]
        assert p.b_regular.tolist() == [0.0]
        assert p.a_node_to_dummy.tolist() == [-1.0, -1.0]
        assert p.a_dummy_to_node.tolist() == [0.0, 0.0]
        assert p.b_dummy.tolist() == [0.0, -1.0]

    def test_dummy_row_encodes_lower_bound(self):
        # A_{ii'} x_i + A_{i'i} x_{i'} <= b_{ii'}  must hold iff  x_i >= s_i
        rng = np.random.default_rng(0)
        s = rng.normal(size=4)
        p = mc.assemble(mc.augment(mc.Graph(4, ((0, 1), (1, 2), (2, 3)))), s, c=2.0)
        for _ in range(200):
            x = rng.normal(scale=3.0, size=4)
            x_dummy = rng.normal(scale=3.0, size=4)
            lhs = p.a_node_to_dummy * x + p.a_dummy_to_node * x_dummy
            assert np.array_equal(lhs <= p.b_dummy, x >= s)

    def test_coefficient_rules_on_reference_graph(self):
        g = mc.generate_rgg(10, seed=42)
        s = np.random.default_rng(1).normal(size=10)
        p = mc.assemble(mc.augment(g), s, c=0.7, theta=0.4)
        for k, (i, j) in enumerate(g.directed_edges):
            expected = 1.0 if i < j else -1.0
            assert p.a_directed[k] == expected
            assert p.a_directed[g.reverse_index[k]] == -expected
        assert np.all(p.b_regular == 0.0)
        assert np.array_equal(p.b_dummy, -s)
        assert p.c == 0.7 and p.theta == 0.4

    def test_accepts_plain_graph(self, k2):
        p = mc.assemble(k2, [0.0, 1.0], c=1.0)
        assert p.graph.base == k2

    def test_dimension_mismatch(self, k2):
        with pytest.raises(DimensionMismatch):
            mc.assemble(mc.augment(k2), [1.0, 2.0, 3.0], c=1.0)

    @pytest.mark.parametrize(
        "c,theta", [(0.0, 0.5), (-1.0, 0.5), (1.0, 0.0), (1.0, 1.5), (np.nan, 0.5)]
    )
    def test_invalid_parameters(self, k2, c, theta):
        with pytest.raises(InvalidParameter):
            mc.assemble(mc.augment(k2), [0.0, 1.0], c=c, theta=theta)

    def test_rejects_non_finite_data(self, k2):
        with pytest.raises(InvalidParameter):
            mc.assemble(mc.augment(k2), [0.0, np.inf], c=1.0)


class TestSolveExact:
    def test_simple(self):
        assert mc.solve_exact([0.0, 1.0]) == 1.0

    def test_ties(self):
        assert mc.solve_exact([-3.0, -3.0]) == -3.0

    def test_seeded_draw_matches_scan(self):
        s = np.random.default_rng(11).normal(size=10)
        expected = sorted(s)[-1]
        assert mc.solve_exact(s) == expected

    def test_empty(self):
        with pytest.raises(EmptyInput):
            mc.solve_exact([])


def test_lp_optimum_is_the_maximum():
    # independent oracle: solve the consensus LP directly and confirm every
    # coordinate equals max(s)
    g = mc.Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    s = np.array([0.3, -1.2, 2.5, 0.9])
    a_eq = []
    for i, j in g.edges:
        row = np.zeros(4)
        row[i], row[j] = 1.0, -1.0
        a_eq.append(row)
    res = linprog(
        c=np.ones(4),
        A_eq=np.array(a_eq),
        b_eq=np.zeros(len(a_eq)),
        bounds=[(s_i, None) for s_i in s],
        method="highs",
    )
    assert res.success
    assert np.allclose(res.x, mc.solve_exact(s), atol=1e-9)


class TestInstanceFile:
    def test_round_trip_exact(self, tmp_path):
        g = mc.generate_rgg(10, seed=42)
        s = np.random.default_rng(5).normal(size=10)
        p = mc.assemble(mc.augment(g), s, c=0.31, theta=0.5)
        path = tmp_path / "instance.txt"
        mc.dump_instance(p, path)
        q = mc.load_instance(path)
        assert q.graph.base.edges == g.edges
        assert np.array_equal(q.s, p.s)
        assert q.c == p.c and q.theta == p.theta
        assert np.array_equal(q.b_dummy, p.b_dummy)

    def test_rejects_truncated_file(self, tmp_path):
        path = tmp_path / "broken.txt"
        path.write_text("n=2\nc=1.0\ntheta=0.5\n")
        with pytest.raises(InvalidParameter):
            mc.load_instance(path)
