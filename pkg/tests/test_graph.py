import pytest
from hypothesis import given, settings

from copguard.families import figure1_instance, gen_mgp
from copguard.graph import (
    INF,
    DisconnectedError,
    GraphError,
    PreconditionError,
    IsometryWitness,
    all_pairs_distances,
    blocks,
    build_graph,
    closed_twin_classes,
    complete_graph,
    cycle_graph,
    format_graph,
    gated_neighbors,
    is_dismantlable,
    is_isometric,
    parse_graph,
    path_graph,
    star_graph,
)

from oracles import nx_blocks, relaxation_distances
from strategies import connected_graphs, graphs


def test_build_path_p3():
    g = build_graph(3, [(0, 1), (1, 2)])
    assert g.edges() == [(0, 1), (1, 2)]
    assert g.closed(1) == {0, 1, 2}


def test_build_single_vertex():
    g = build_graph(1, [])
    assert g.n == 1 and g.m == 0 and g.is_connected()


@pytest.mark.parametrize(
    "n,edges,needle",
    [
        (4, [(0, 1), (1, 1)], "self-loop"),
        (3, [(0, 1), (1, 0)], "duplicate"),
        (3, [(0, 3)], "outside"),
    ],
)
def test_build_rejects_bad_edges(n, edges, needle):
    with pytest.raises(GraphError, match=needle):
        build_graph(n, edges)


def test_distances_small():
    assert all_pairs_distances(path_graph(3))(0, 2) == 2
    assert all_pairs_distances(cycle_graph(4))(0, 2) == 2


def test_mgp_distance_frozen():
    # frozen from a networkx BFS on the same graph
    g, lab = gen_mgp(14, 3, 2)
    assert all_pairs_distances(g)(lab.to_id(0, 0), lab.to_id(0, 7)) == 5


def test_disconnected_distance_is_sentinel():
    d = all_pairs_distances(build_graph(3, [(0, 1)]))
    assert d(0, 2) == INF and not d.connected


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_distances_match_relaxation(g):
    d = all_pairs_distances(g)
    ref = relaxation_distances(g)
    assert [list(r) for r in d.rows] == ref


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=9))
def test_distance_invariants(g):
    d = all_pairs_distances(g)
    for u in g.vertices:
        assert d(u, u) == 0
        for v in g.vertices:
            assert d(u, v) == d(v, u)
            assert (d(u, v) == 1) == g.has_edge(u, v)
            for w in g.vertices:
                assert d(u, w) <= d(u, v) + d(v, w)


def test_gated_neighbors_examples():
    p3 = path_graph(3)
    assert gated_neighbors(p3, all_pairs_distances(p3), 0, 2) == {1}
    c4 = cycle_graph(4)
    assert gated_neighbors(c4, all_pairs_distances(c4), 0, 2) == {1, 3}
    with pytest.raises(PreconditionError):
        gated_neighbors(p3, all_pairs_distances(p3), 0, 1)


def test_gated_neighbors_disconnected_is_distinct_error():
    g = build_graph(3, [(0, 1)])
    with pytest.raises(DisconnectedError):
        gated_neighbors(g, all_pairs_distances(g), 0, 2)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=3, max_n=9))
def test_gated_neighbors_property(g):
    d = all_pairs_distances(g)
    for c in g.vertices:
        for x in g.vertices:
            if d(c, x) >= 2:
                gn = gated_neighbors(g, d, c, x)
                assert gn and gn <= g.adj[c]
                assert all(d(v, x) == d(c, x) - 1 for v in gn)


def test_isometric_examples():
    g, h = figure1_instance()
    assert is_isometric(h, all_pairs_distances(g)) is True
    c6 = cycle_graph(6)
    w = is_isometric(c6.induced(range(5)), all_pairs_distances(c6))
    assert isinstance(w, IsometryWitness)
    assert (w.u, w.v, w.internal, w.parent) == (0, 4, 4, 2)


def test_isometric_disconnected_h():
    c6 = cycle_graph(6)
    w = is_isometric(c6.induced([0, 3]), all_pairs_distances(c6))
    assert w.internal == INF and w.parent == 3


def test_twin_classes():
    k4e = build_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert sorted(map(sorted, closed_twin_classes(k4e))) == [[0, 1], [2], [3]]
    assert closed_twin_classes(complete_graph(3)) == [frozenset({0, 1, 2})]
    assert all(len(c) == 1 for c in closed_twin_classes(path_graph(5)))


def test_blocks_examples():
    bl, cuts = blocks(path_graph(4))
    assert bl == [frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})] and cuts == {1, 2}
    bowtie = build_graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    bl, cuts = blocks(bowtie)
    assert sorted(map(len, bl)) == [3, 3] and cuts == {2}
    bl, cuts = blocks(cycle_graph(5))
    assert bl == [frozenset(range(5))] and not cuts


def test_blocks_rejects_disconnected():
    with pytest.raises(DisconnectedError):
        blocks(build_graph(3, [(0, 1)]))


@settings(max_examples=80, deadline=None)
@given(connected_graphs(max_n=10))
def test_blocks_match_networkx(g):
    bl, cuts = blocks(g)
    ref_bl, ref_cuts = nx_blocks(g)
    assert sorted(bl, key=sorted) == ref_bl
    assert cuts == ref_cuts
    for a in bl:
        for b in bl:
            if a != b:
                assert len(a & b) <= 1


def test_dismantlable_examples():
    assert is_dismantlable(star_graph(4))[0]
    assert not is_dismantlable(cycle_graph(4))[0]
    _, h = figure1_instance()
    ok, order = is_dismantlable(h.local())
    assert ok and sorted(order) == list(range(6))


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=9))
def test_dismantling_order_is_valid(g):
    ok, order = is_dismantlable(g)
    if not ok:
        return
    alive = set(g.vertices)
    for v in order[:-1]:
        nv = g.closed(v) & alive
        assert any(u != v and nv <= (g.closed(u) & alive) for u in alive)
        alive.discard(v)
    assert len(alive) == 1


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=8))
def test_text_round_trip(g):
    assert parse_graph(format_graph(g, "round trip")) == g


def test_parse_errors():
    with pytest.raises(GraphError, match="header"):
        parse_graph("e 0 1\n")
    with pytest.raises(GraphError, match="declares"):
        parse_graph("p 2 2\ne 0 1\n")
    assert parse_graph("# c\np 2 1\n  e 0 1").m == 1
