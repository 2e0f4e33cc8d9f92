import math

import numpy as np
import pytest

from wellconn.clustering import Clustering
from wellconn.dl import compare_dl, dl_dc, edge_count_matrix, term_E
from wellconn.graph import Graph
from wellconn.treatments import treat_cc

from conftest import complete, make_graph
from oracles import exact_dl_terms


def clique_pairs_fixture(cliques=20, size=4):
    """Disjoint K4s; the 'merged' clustering pairs them, its CC split separates them."""
    edges = []
    for c in range(cliques):
        edges += complete(size, c * size)
    g = make_graph(cliques * size, edges)
    split = np.repeat(np.arange(cliques), size)
    merged = Clustering(split // 2, g.labels)
    return g, merged, treat_cc(g, merged).output


class TestEdgeCountMatrix:
    def test_triangle(self, triangle):
        em = edge_count_matrix(triangle, Clustering([0, 0, 0], triangle.labels))
        assert em.to_dense().tolist() == [[6]]
        assert em.block_degrees.tolist() == [6]

    def test_cross_edge(self):
        g = make_graph(2, [(0, 1)])
        assert edge_count_matrix(g, Clustering([0, 1], g.labels)).to_dense().tolist() == [[0, 1], [1, 0]]

    def test_invariants(self, rng):
        for _ in range(30):
            n = int(rng.integers(2, 40))
            edges = rng.integers(0, n, (int(rng.integers(0, 3 * n)), 2))
            g = Graph.from_edges(n, edges)
            c = Clustering(rng.integers(0, 5, n), g.labels)
            m = edge_count_matrix(g, c).to_dense()
            assert m.sum() == 2 * g.num_edges
            assert np.array_equal(m, m.T)
            assert np.all(np.diag(m) % 2 == 0)


def test_triangle_hand_values(triangle):
    # e = [[6]], k = (2,2,2): p(A) = 3!·2^3·(2!)^3 / 6! = 384/720
    d = dl_dc(triangle, Clustering([0, 0, 0], triangle.labels))
    assert d.term_A == pytest.approx(math.log(720 / 384), rel=1e-12)
    assert d.term_K == pytest.approx(math.log(28), rel=1e-12)  # C(3+6-1, 6)
    assert d.term_B == pytest.approx(math.log(3), rel=1e-12)
    assert d.term_E == 0.0


def test_single_block_closed_forms(rng):
    for _ in range(20):
        n = int(rng.integers(1, 50))
        g = Graph.from_edges(n, rng.integers(0, n, (int(rng.integers(0, 4 * n)), 2)))
        d = dl_dc(g, Clustering([0] * n, g.labels))
        assert d.term_E == 0.0
        assert abs(d.term_B - math.log(n)) <= 1e-9


def test_empty_graph_term_a_zero():
    g = make_graph(4, [])
    assert dl_dc(g, Clustering([0, 0, 1, 1], g.labels)).term_A == 0.0


def test_exact_oracle_small_graphs(rng):
    checked = 0
    for _ in range(300):
        n = int(rng.integers(1, 7))
        edges = rng.integers(0, n, (int(rng.integers(0, 12)), 2))
        g = Graph.from_edges(n, edges)
        assign = rng.integers(0, int(rng.integers(1, n + 1)), n)
        c = Clustering(assign, g.labels)
        got = dl_dc(g, c)
        want = exact_dl_terms(n, g.edges().tolist(), c.assignment.tolist())
        for k, v in want.items():
            assert getattr(got, k) == pytest.approx(v, rel=1e-6, abs=1e-12), k
            assert getattr(got, k) >= 0
        checked += 1
    assert checked == 300


def test_additivity_and_relabel_invariance(rng):
    for _ in range(20):
        n = int(rng.integers(2, 40))
        g = Graph.from_edges(n, rng.integers(0, n, (3 * n, 2)))
        assign = rng.integers(0, 6, n)
        d = dl_dc(g, Clustering(assign, g.labels))
        assert d.total == d.term_A + d.term_K + d.term_B + d.term_E
        perm = rng.permutation(6)
        d2 = dl_dc(g, Clustering(perm[assign], g.labels))
        for k in ("term_A", "term_K", "term_B", "term_E"):
            assert getattr(d2, k) == pytest.approx(getattr(d, k), rel=1e-12)


@pytest.mark.parametrize("E", [1, 10, 1000, 100000])
def test_term_e_strictly_increasing_in_b(E):
    values = [term_E(B, E) for B in range(1, 51)]
    assert values[0] == 0.0
    assert all(b > a for a, b in zip(values, values[1:]))


def test_compare_identity(two_k5_bridge):
    c = Clustering([0] * 5 + [1] * 5, two_k5_bridge.labels)
    cmp = compare_dl(two_k5_bridge, c, c)
    for row in cmp.ROWS:
        assert cmp.ratio(row) == 1.0


def test_more_clusters_raise_term_e(rng):
    g, merged, split = clique_pairs_fixture()
    assert split.B > merged.B
    cmp = compare_dl(g, merged, split)
    assert cmp.treated.term_E > cmp.untreated.term_E


def test_table2_pattern_on_clique_pairs():
    g, merged, split = clique_pairs_fixture()
    cmp = compare_dl(g, merged, split)
    assert cmp.ratio("term_A") < 1 and cmp.ratio("term_K") < 1
    assert cmp.ratio("term_B") > 1 and cmp.ratio("term_E") > 1
    assert cmp.ratio("term_E") == max(cmp.ratio(r) for r in ("term_A", "term_K", "term_B", "term_E"))
    assert cmp.winner("total") == "untreated"
    assert cmp.winner("total_without_term_E") == "treated"
    table = cmp.table()
    assert "-log p(e)" in table and "uniform degree prior" in table
