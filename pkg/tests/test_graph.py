from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opinion_communities.graph import (
    EdgeListError,
    Graph,
    Partition,
    connected_components,
    induced_subgraph,
    load_edge_list,
    partition_spanning_subgraph,
    to_dot,
)

from .conftest import complete_graph, path_graph


def bfs_components(g):
    adj = {i: set() for i in range(g.n)}
    for i, j in g.edges:
        adj[i].add(j)
        adj[j].add(i)
    seen, comps = set(), []
    for s in range(g.n):
        if s in seen:
            continue
        comp, queue = [], deque([s])
        seen.add(s)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adj[v] - seen:
                seen.add(w)
                queue.append(w)
        comps.append(comp)
    return comps


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


@st.composite
def graph_and_partition(draw):
    g = draw(graphs())
    labels = draw(st.lists(st.integers(0, 3), min_size=g.n, max_size=g.n))
    return g, Partition.from_labels(labels)


class TestLoadEdgeList:
    def test_simple(self):
        g = load_edge_list("0 1\n1 2")
        assert g.n == 3
        assert g.edges == {(0, 1), (1, 2)}

    def test_duplicates_and_comments(self):
        g = load_edge_list("a b\nb a\n# comment")
        assert g.n == 2
        assert g.edges == {(0, 1)}
        assert g.labels == ("a", "b")

    def test_self_loop_rejected_with_line(self):
        with pytest.raises(EdgeListError) as exc:
            load_edge_list("3 3")
        assert exc.value.lineno == 1

    def test_self_loop_after_int_normalization(self):
        with pytest.raises(EdgeListError, match="line 2"):
            load_edge_list("1 2\n01 1\n")

    @pytest.mark.parametrize("text,line", [("0 1 2", 1), ("0 1\n\n5", 3)])
    def test_token_count(self, text, line):
        with pytest.raises(EdgeListError) as exc:
            load_edge_list(text)
        assert exc.value.lineno == line

    def test_first_appearance_order(self):
        g = load_edge_list("10 3\n3 7\n")
        assert g.labels == (10, 3, 7)
        assert g.edges == {(0, 1), (1, 2)}

    def test_drop_self_loops(self):
        g = load_edge_list("1 1\n1 2\n", drop_self_loops=True)
        assert g.n == 2 and g.num_edges == 1

    def test_karate_fixture(self, karate):
        assert karate.n == 34
        assert karate.num_edges == 78
        assert karate.degrees.sum() == 2 * karate.num_edges


class TestGraph:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Graph(2, [(1, 1)])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 2)])

    def test_immutable_edges(self):
        g = path_graph(3)
        with pytest.raises(ValueError):
            g.edge_array[0, 0] = 2

    def test_neighbors(self):
        assert path_graph(3).neighbors(1) == {0, 2}


class TestPartition:
    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            Partition([[0, 1], [1, 2]])

    def test_cover_checked(self):
        with pytest.raises(ValueError):
            Partition([[0], [2]], n=3)

    def test_canonical(self):
        assert Partition([[2], [1, 0]]).canonical_key == "0,1|2"

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=10), st.randoms())
    def test_key_invariant_under_permutation(self, labels, rnd):
        p = Partition.from_labels(labels)
        classes = [list(c) for c in p.classes]
        for c in classes:
            rnd.shuffle(c)
        rnd.shuffle(classes)
        assert Partition(classes, len(labels)).canonical_key == p.canonical_key


class TestComponents:
    @pytest.mark.parametrize("n,edges,expected", [
        (3, [(0, 1), (1, 2)], [[0, 1, 2]]),
        (4, [(0, 1), (2, 3)], [[0, 1], [2, 3]]),
        (2, [], [[0], [1]]),
    ])
    def test_examples(self, n, edges, expected):
        assert connected_components(Graph(n, edges)) == Partition(expected)

    @given(graphs())
    def test_matches_bfs(self, g):
        assert connected_components(g) == Partition(bfs_components(g), g.n)


class TestSubgraphs:
    def test_induced_triangle(self):
        sub, idx = induced_subgraph(complete_graph(3), {0, 1})
        assert sub.edges == {(0, 1)}
        assert idx.tolist() == [0, 1]

    def test_induced_path_endpoints(self):
        sub, _ = induced_subgraph(path_graph(3), {0, 2})
        assert sub.n == 2 and sub.num_edges == 0

    def test_induced_errors(self):
        with pytest.raises(ValueError):
            induced_subgraph(path_graph(3), set())
        with pytest.raises(ValueError):
            induced_subgraph(path_graph(3), {5})

    @given(graphs())
    def test_induced_identity(self, g):
        sub, _ = induced_subgraph(g, range(g.n))
        assert sub == g

    def test_spanning_examples(self):
        g = path_graph(3)
        assert partition_spanning_subgraph(g, Partition([[0, 1], [2]])).edges == {(0, 1)}
        assert partition_spanning_subgraph(g, Partition([[0, 1, 2]])) == g
        assert partition_spanning_subgraph(g, Partition([[0], [1], [2]])).num_edges == 0

    def test_spanning_wrong_size(self):
        with pytest.raises(ValueError):
            partition_spanning_subgraph(path_graph(3), Partition([[0, 1]]))

    @settings(max_examples=200)
    @given(graph_and_partition())
    def test_components_refine_partition(self, gp):
        g, p = gp
        assert connected_components(partition_spanning_subgraph(g, p)).refines(p)


def test_dot_export():
    g = path_graph(3)
    text = to_dot(g, Partition([[0, 1], [2]]))
    assert text.startswith("graph G {")
    assert text.count("--") == 2
    assert "1 -- 2 [style=dashed]" in text
    assert "0 -- 1;" in text


def test_degrees_consistent():
    g = Graph(5, [(0, 1), (0, 2), (3, 4)])
    assert np.array_equal(g.degrees, [2, 1, 1, 1, 1])
    assert np.array_equal(g.adjacency.sum(axis=1), g.degrees)
