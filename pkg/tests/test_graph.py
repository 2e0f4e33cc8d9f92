import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wellconn.errors import ContractViolation, ParseError
from wellconn.graph import (Graph, connected_components, degree_sequence, induced_subgraph,
                            parse_edge_list, write_edge_list)

from conftest import complete, make_graph


def parse(text):
    return parse_edge_list(io.StringIO(text))


def edge_set(g):
    return {tuple(e) for e in g.edges().tolist()}


class TestParse:
    def test_triangle(self):
        g = parse("1 2\n2 3\n3 1")
        assert (g.n, g.num_edges) == (3, 3)
        assert edge_set(g) == {(0, 1), (1, 2), (0, 2)}

    def test_self_loop_and_duplicates_removed(self):
        g = parse("1 1\n1 2\n2 1")
        assert (g.n, g.num_edges) == (2, 1)

    def test_extra_columns_ignored(self):
        g = parse("a b 5.0\nb c 1.0")
        assert (g.n, g.num_edges) == (3, 2)
        assert g.labels == ("a", "b", "c")

    def test_comments_and_blank_lines(self):
        g = parse("# header\n% other\n\n1 2\n\n")
        assert g.num_edges == 1

    def test_malformed_line_reports_line_number(self):
        with pytest.raises(ParseError) as exc:
            parse("1 2\n3\n")
        assert exc.value.lineno == 2

    def test_labels_in_first_appearance_order(self):
        g = parse("10 7\n7 3\n")
        assert g.labels == ("10", "7", "3")
        assert g.index_of("3") == 2


class TestComponents:
    def test_connected(self, triangle):
        assert [c.tolist() for c in connected_components(triangle, {0, 1, 2})] == [[0, 1, 2]]

    def test_isolated_node(self):
        g = make_graph(3, [(0, 1)])
        assert [c.tolist() for c in connected_components(g, {0, 1, 2})] == [[0, 1], [2]]

    def test_empty_subset(self, triangle):
        assert connected_components(triangle, set()) == []

    def test_out_of_range(self, triangle):
        with pytest.raises(ContractViolation):
            connected_components(triangle, {0, 5})

    def test_ordered_by_smallest_member(self):
        g = make_graph(6, [(5, 0), (1, 4), (2, 3)])
        assert [c.tolist() for c in connected_components(g)] == [[0, 5], [1, 4], [2, 3]]


class TestInducedSubgraph:
    def test_clique_restriction(self):
        g = make_graph(4, complete(4))
        sub, mapping = induced_subgraph(g, [0, 2, 3])
        assert (sub.n, sub.num_edges) == (3, 3)
        assert mapping.tolist() == [0, 2, 3]
        assert sub.labels == ("0", "2", "3")

    def test_no_induced_edge(self):
        g = make_graph(3, [(0, 1), (1, 2)])
        sub, _ = induced_subgraph(g, [0, 2])
        assert (sub.n, sub.num_edges) == (2, 0)

    def test_identity(self, two_k5_bridge):
        sub, mapping = induced_subgraph(two_k5_bridge, range(10))
        assert sub == two_k5_bridge
        assert mapping.tolist() == list(range(10))


class TestDegrees:
    def test_triangle(self, triangle):
        assert degree_sequence(triangle).tolist() == [2, 2, 2]

    def test_star(self):
        g = make_graph(4, [(0, 1), (0, 2), (0, 3)])
        assert degree_sequence(g).tolist() == [3, 1, 1, 1]

    def test_empty(self):
        assert degree_sequence(make_graph(2, [])).tolist() == [0, 0]


edge_lists = st.integers(min_value=1, max_value=25).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                                             max_size=80)))


@settings(max_examples=200, deadline=None)
@given(edge_lists)
def test_graph_invariants(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    deg = g.degrees()
    assert deg.sum() == 2 * g.num_edges
    for v in range(n):
        nb = g.neighbors(v)
        assert np.all(np.diff(nb) > 0)
        assert v not in nb
        for u in nb:
            assert v in g.neighbors(u)
    expected = {(min(u, v), max(u, v)) for u, v in edges if u != v}
    assert edge_set(g) == expected
    comps = connected_components(g)
    joined = np.concatenate(comps) if comps else np.array([], dtype=int)
    assert sorted(joined.tolist()) == list(range(n))


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_round_trip(data):
    n, edges = data
    g = Graph.from_edges(n, edges)
    buf = io.StringIO()
    write_edge_list(g, buf)
    h = parse_edge_list(io.StringIO(buf.getvalue()))
    # write drops isolated nodes; compare edges by external label
    got = {frozenset((h.labels[u], h.labels[v])) for u, v in h.edges()}
    want = {frozenset((g.labels[u], g.labels[v])) for u, v in g.edges()}
    assert got == want
    assert h.num_edges == g.num_edges
    assert h.n == int(np.count_nonzero(g.degrees()))
