from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copguard.characterize import (
    Inconclusive,
    Violation,
    check_p1,
    check_p2,
    check_p3_with_R,
    compute_C,
    exists_p3_R,
    find_backbone,
    is_block_graph,
    is_extended_block_graph,
    p3_witness_table,
    verify_backbone,
)
from copguard.families import (
    BlowupSpec,
    blow_up,
    figure1_instance,
    figure2_extended,
    figure2_vertebrate,
    random_block_graph,
    random_vertebrate_graph,
)
from copguard.graph import (
    DisconnectedError,
    INF,
    all_pairs_distances,
    build_graph,
    cycle_graph,
    path_graph,
    star_graph,
)
from copguard.small import connected_graphs_upto

from oracles import four_point_holds, p2_holds
from strategies import connected_graphs

K4_MINUS = build_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])  # missing 2-3
BOWTIE = build_graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


@lru_cache(maxsize=None)
def upto6():
    return tuple(connected_graphs_upto(6))


def test_p1_tree_and_cycle():
    assert check_p1(random_block_graph(2, 8, max_clique=2)) is True
    v = check_p1(cycle_graph(4))
    assert isinstance(v, Violation) and v.tag == "P1"
    assert v.extra["sums"] == [2, 4, 2]


def test_p1_violation_reevaluates():
    g = K4_MINUS
    v = check_p1(g)
    assert not v
    d = all_pairs_distances(g)
    a, b, c, e = v.vertices
    s = sorted([d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c)])
    assert s[1] != s[2]


def test_p1_rejects_disconnected():
    with pytest.raises(DisconnectedError):
        check_p1(build_graph(3, [(0, 1)]))


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=7))
def test_p1_matches_brute_force(g):
    assert (check_p1(g) is True) == four_point_holds(g)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=7))
def test_p2_matches_brute_force(g):
    assert (check_p2(g) is True) == p2_holds(g)


def test_p2_examples():
    assert check_p2(K4_MINUS) is True
    assert check_p2(cycle_graph(4)) is not True


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 12))
def test_block_graphs_satisfy_p2(seed, n):
    assert check_p2(random_block_graph(seed, n)) is True


def test_compute_C_examples():
    p3 = path_graph(3)
    assert compute_C(p3, all_pairs_distances(p3), range(3), 0, 2) == {1}
    c4 = cycle_graph(4)
    assert compute_C(c4, all_pairs_distances(c4), range(4), 0, 2) == frozenset()
    assert compute_C(K4_MINUS, all_pairs_distances(K4_MINUS), range(4), 2, 3) == {0, 1}


def test_p3_with_R_examples():
    g = figure2_extended()
    d = all_pairs_distances(g)
    assert check_p3_with_R(g, d, range(g.n)) is True
    g1, _ = figure1_instance()
    v = check_p3_with_R(g1, all_pairs_distances(g1), range(7))
    assert v.tag == "P3" and v.extra["blocking"]
    s = star_graph(4)
    assert check_p3_with_R(s, all_pairs_distances(s), [0]) is True


def test_p3_with_R_needs_cover():
    p = path_graph(5)
    v = check_p3_with_R(p, all_pairs_distances(p), [0])
    assert not v


def test_block_recognizer():
    assert is_block_graph(BOWTIE) is True
    v = is_block_graph(cycle_graph(4))
    assert v.tag == "BLOCK" and v.vertices in ((0, 2), (1, 3))


def test_extended_recognizer():
    ok, js = is_extended_block_graph(K4_MINUS)
    assert ok and {0, 1} in [set(b) for b in js.joint_blocks]
    ok, v = is_extended_block_graph(cycle_graph(4))
    assert not ok and v.tag == "EXTENDED"
    ok, js = is_extended_block_graph(BOWTIE)
    assert ok and all(len(b) == 1 for b in js.joint_blocks)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 10))
def test_blow_ups_are_extended(seed, n):
    from copguard.graph import blocks

    base = random_block_graph(seed, n)
    cuts = sorted(blocks(base)[1])
    g = blow_up(BlowupSpec(base, {c: 2 + (c % 2) for c in cuts}))
    ok, js = is_extended_block_graph(g)
    assert ok
    seen = set()
    for b in js.joint_blocks:
        assert not (seen & b)
        seen |= b
        assert all(g.has_edge(u, v) for u in b for v in b if u != v)
    assert check_p2(g) is True


def test_find_backbone_examples():
    g = figure2_extended()
    cert = find_backbone(g)
    assert cert.B == tuple(range(g.n))
    assert find_backbone(cycle_graph(4)) is None
    g, B = figure2_vertebrate()
    cert = find_backbone(g)
    assert verify_backbone(g, cert.B) is True and cert.R is not None


def test_find_backbone_inconclusive_above_limit():
    # C_13 has no backbone; stage 1 fails and the graph is above the limit
    with pytest.raises(Inconclusive):
        find_backbone(cycle_graph(13))


@pytest.mark.parametrize("seed", range(8))
def test_find_backbone_on_random_vertebrates(seed):
    g, B = random_vertebrate_graph(seed)
    cert = find_backbone(g)
    assert cert is not None and verify_backbone(g, cert.B) is True
    d = all_pairs_distances(g)
    assert check_p3_with_R(g, d, cert.R) is True
    cover = set()
    for c in cert.R:
        cover |= g.closed(c)
    assert cover == set(g.vertices)
    for (c, x), w in cert.guard_witnesses.items():
        gated = [v for v in g.adj[c] if d(v, x) == d(c, x) - 1]
        assert w in gated and all(g.closed(v) <= g.closed(w) for v in gated)


def test_verify_backbone_examples():
    assert verify_backbone(K4_MINUS, range(4)) is True
    g, B = figure2_vertebrate()
    assert verify_backbone(g, B) is True


def test_implication_chain():
    for g in upto6():
        d = all_pairs_distances(g)
        p1 = check_p1(g, d) is True
        p2 = check_p2(g, d) is True
        p3 = exists_p3_R(g, d) is not None
        assert (not p1 or p2) and (not p2 or p3)


def test_gate_properties_on_small_graphs():
    """(P3) witnesses dominate all gated neighbors; members of one C set are
    closed twins; in (P3) graphs distinct C sets are disjoint."""
    for g in upto6():
        d = all_pairs_distances(g)
        good = p3_witness_table(g, d)
        sets = set()
        for c in g.vertices:
            for x in g.vertices:
                if d(c, x) < 2:
                    continue
                C = compute_C(g, d, range(g.n), c, x)
                for cp in np.nonzero(good[c, x])[0]:
                    assert int(cp) in C
                if C:
                    assert len({g.closed(u) for u in C}) == 1
                    sets.add(frozenset(C))
        if exists_p3_R(g, d) is not None:
            for a in sets:
                for b in sets:
                    assert a == b or not (a & b)


def _internal_in_b(g, B, u, v, d):
    """Length of a shortest u-v path whose internal vertices lie in B."""
    B = set(B)
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            if w != u and w not in B:
                continue
            for z in g.adj[w]:
                if z not in dist:
                    dist[z] = dist[w] + 1
                    nxt.append(z)
        frontier = nxt
    return dist.get(v, INF)


@pytest.mark.parametrize("seed", range(6))
def test_backbone_carries_shortest_paths(seed):
    g, B = random_vertebrate_graph(seed)
    d = all_pairs_distances(g)
    for u in g.vertices:
        for v in g.vertices:
            if d(u, v) >= 2:
                assert _internal_in_b(g, B, u, v, d) == d(u, v)
