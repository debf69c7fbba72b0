import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcluster import (
    Graph,
    VertexSet,
    cheeger_ratio,
    dump_edge_list,
    edge_boundary,
    load_edge_list,
    local_cheeger_brute,
    parse_edge_list,
    volume,
)


def test_parse_basic(k3):
    assert k3.n == 3
    assert k3.m == 3
    assert k3.total_volume == 6
    assert list(k3.degree) == [2, 2, 2]
    assert k3.is_connected()


def test_parse_skips_comments_and_blanks():
    G = parse_edge_list(["# header", "", "a b", "  ", "b c"])
    assert G.n == 3
    assert G.m == 2


def test_parse_rejects_inline_comment():
    # only whole-line comments are allowed
    with pytest.raises(ValueError, match="line 1"):
        parse_edge_list(["a b # trailing"])


def test_parse_rejects_wrong_token_count():
    with pytest.raises(ValueError, match="line 2"):
        parse_edge_list(["a b", "a b c"])
    with pytest.raises(ValueError, match="line 1"):
        parse_edge_list(["lonely"])


def test_parse_rejects_empty():
    with pytest.raises(ValueError, match="empty"):
        parse_edge_list(["# nothing here"])


def test_duplicate_and_loop_counting():
    G = parse_edge_list(["a b", "b a", "a a", "a b"])
    assert G.m == 1
    assert G.duplicates_dropped == 2
    assert G.self_loops_dropped == 1


def test_labels_round_trip(k2):
    assert k2.label_of(0) == "a"
    assert k2.resolve_vertex("b") == 1
    # numeric ids are accepted when no such label exists
    assert k2.resolve_vertex("1") == 1


def test_resolve_vertex_errors(k2):
    with pytest.raises(KeyError):
        k2.resolve_vertex("zz")
    with pytest.raises(KeyError):
        k2.resolve_vertex("17")


def test_dump_round_trip(bridge):
    buf = io.StringIO()
    dump_edge_list(bridge, buf)
    G2 = parse_edge_list(buf.getvalue().splitlines())
    assert G2.m == bridge.m
    assert sorted(G2.degree) == sorted(bridge.degree)


def test_neighbors_sorted(bridge):
    for v in range(bridge.n):
        nbrs = bridge.neighbors(v)
        assert list(nbrs) == sorted(nbrs)


def test_has_edge(k3, path3):
    assert k3.has_edge(0, 2)
    assert not path3.has_edge(0, 2)


def test_volume_and_boundary(path3):
    assert volume(path3, {0, 1}) == 3
    assert edge_boundary(path3, {0, 1}) == 1
    assert cheeger_ratio(path3, {0, 1}) == pytest.approx(1.0)  # min side is {2}, vol 1
    assert cheeger_ratio(path3, {0}) == pytest.approx(1.0)
    assert volume(path3, set(range(3))) == path3.total_volume


def test_cheeger_uses_smaller_side(k3):
    # both sides of {0,1} vs {2}: boundary 2, min volume 2
    assert cheeger_ratio(k3, {0, 1}) == pytest.approx(1.0)


def test_cheeger_errors(k3):
    with pytest.raises(ValueError):
        cheeger_ratio(k3, set())
    with pytest.raises(ValueError):
        cheeger_ratio(k3, {0, 1, 2})


def test_local_cheeger_brute_bridge(bridge):
    tri = {bridge.resolve_vertex(x) for x in "abc"}
    assert local_cheeger_brute(bridge, tri) == pytest.approx(1.0 / 7.0)
    # a two-vertex subset of the triangle is worse than the whole triangle
    assert local_cheeger_brute(bridge, set(list(tri)[:2])) > 1.0 / 7.0


def test_local_cheeger_brute_is_min_over_subsets(k3):
    assert local_cheeger_brute(k3, {0, 1}) == pytest.approx(1.0)


def test_local_cheeger_brute_size_guard(two_pods):
    with pytest.raises(ValueError):
        local_cheeger_brute(two_pods, set(range(21)))


def test_vertex_set_volume(bridge):
    S = VertexSet(bridge, {0, 1, 2})
    assert S.volume == volume(bridge, {0, 1, 2})


def test_from_edges_sorted_csr():
    G = Graph.from_edges(4, [(3, 0), (1, 0), (2, 1)])
    assert list(G.neighbors(0)) == [1, 3]
    assert list(G.neighbors(1)) == [0, 2]


edges_strategy = st.lists(
    st.tuples(st.integers(0, 14), st.integers(0, 14)).filter(lambda e: e[0] != e[1]),
    min_size=1,
    max_size=40,
)


@given(edges=edges_strategy)
@settings(max_examples=60, deadline=None)
def test_csr_invariants(edges):
    n = 15
    G = Graph.from_edges(n, edges)
    # degree sums and symmetry
    assert int(G.degree.sum()) == G.total_volume == 2 * G.m
    A = G.adjacency_matrix()
    assert (A != A.T).nnz == 0
    for u in range(n):
        for v in G.neighbors(u):
            assert G.has_edge(int(v), u)


@given(edges=edges_strategy, data=st.data())
@settings(max_examples=40, deadline=None)
def test_boundary_complement_symmetry(edges, data):
    G = Graph.from_edges(15, edges)
    S = set(data.draw(st.lists(st.integers(0, 14), min_size=1, max_size=14, unique=True)))
    comp = set(range(15)) - S
    assert edge_boundary(G, S) == edge_boundary(G, comp)
    assert volume(G, S) + volume(G, comp) == G.total_volume
