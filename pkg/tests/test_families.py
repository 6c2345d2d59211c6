from math import gcd

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copguard.characterize import (
    check_p1,
    check_p3_with_R,
    find_guard_set,
    is_block_graph,
    is_extended_block_graph,
    twin_contraction,
    verify_backbone,
)
from copguard.families import (
    BlowupSpec,
    MgpLabeling,
    blow_up,
    figure1_instance,
    figure2_vertebrate,
    figure2_vertebrate_as_drawn,
    gen_gp,
    gen_mgp,
    petersen,
    random_block_graph,
    random_path_arena,
    VertebrateParams,
    random_vertebrate_graph,
    vertebrate_arena,
)
from copguard.graph import (
    GraphError,
    all_pairs_distances,
    blocks,
    closed_twin_classes,
    is_isometric,
    path_graph,
    star_graph,
)


def test_petersen():
    g, _ = gen_gp(5, 2)
    assert (g.n, g.m) == (10, 15)
    assert nx.is_isomorphic(g.to_networkx(), nx.petersen_graph())


def test_gp_counts():
    g, _ = gen_gp(7, 3)
    assert (g.n, g.m) == (14, 21)


def test_gp_collision_rejected():
    with pytest.raises(GraphError):
        gen_gp(4, 2)
    with pytest.raises(GraphError):
        gen_mgp(6, 3, 1)


def test_mgp_14_3_2():
    g, lab = gen_mgp(14, 3, 2)
    assert (g.n, g.m) == (42, 84)


def test_mgp_5_2_1_is_petersen():
    g, _ = gen_mgp(5, 2, 1)
    assert nx.is_isomorphic(g.to_networkx(), petersen().to_networkx())


@pytest.mark.parametrize("n,k", [(n, k) for n in range(3, 21) for k in range(1, n) if (2 * k) % n])
def test_mgp_t1_equals_gp(n, k):
    # a_i = v_i^0 and b_i = v_i^1 map to the same ids, so the edge sets agree
    assert gen_mgp(n, k, 1)[0] == gen_gp(n, k)[0]


@pytest.mark.parametrize("n,k,t", [(7, 2, 3), (10, 3, 2), (12, 2, 1), (9, 3, 2)])
def test_mgp_structure(n, k, t):
    g, lab = gen_mgp(n, k, t)
    assert g.m == n + n * t + n * t * (t + 1) // 2
    for i in range(n):
        col = lab.column(i)
        assert all(g.has_edge(a, b) for a in col for b in col if a != b)
    cyc = n // gcd(n, k)
    for j in range(1, t + 1):
        layer = g.to_networkx().subgraph(lab.layer(j))
        comps = list(nx.connected_components(layer))
        assert all(len(c) == cyc for c in comps)
        assert all(d == 2 for _, d in layer.degree())


def test_labeling_bijection():
    lab = MgpLabeling(6, 2, 3)
    ids = [lab.to_id(j, i) for j in range(4) for i in range(6)]
    assert ids == list(range(24))
    assert all(lab.to_id(*lab.to_coord(v)) == v for v in ids)
    assert lab.format().splitlines()[7] == "v 7 1 1"


def test_blow_up_p3():
    g = blow_up(BlowupSpec(path_graph(3), {1: 2}))
    assert (g.n, g.m) == (4, 5)
    assert not g.has_edge(0, 2)


def test_blow_up_identity():
    base = random_block_graph(5, 9)
    assert nx.is_isomorphic(blow_up(BlowupSpec(base, {})).to_networkx(), base.to_networkx())


def test_blow_up_star():
    g = blow_up(BlowupSpec(star_graph(3), {0: 3}))
    assert (g.n, g.m) == (6, 3 + 9)
    assert frozenset({0, 4, 5}) in closed_twin_classes(g)


def test_blow_up_rejects_non_cut():
    with pytest.raises(ValueError):
        blow_up(BlowupSpec(path_graph(3), {0: 2}))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(1, 14), st.integers(2, 5))
def test_random_block_graph_properties(seed, budget, mc):
    g = random_block_graph(seed, budget, mc)
    assert g.n == budget and g.is_connected()
    assert is_block_graph(g) is True
    assert check_p1(g) is True
    assert random_block_graph(seed, budget, mc) == g


def test_random_block_tree_and_k1():
    assert random_block_graph(0, 1).n == 1
    t = random_block_graph(3, 10, max_clique=2)
    assert t.m == t.n - 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**63 - 1), st.integers(0, 3))
def test_random_vertebrate_verified(seed, extra):
    g, B = random_vertebrate_graph(seed, VertebrateParams(extra_vertices=extra))
    assert verify_backbone(g, B) is True
    d = all_pairs_distances(g)
    R = find_guard_set(g, d, B)
    assert R is not None and check_p3_with_R(g, d, R) is True
    if extra == 0:
        assert is_extended_block_graph(g)[0]


@pytest.mark.parametrize("seed,mc", [(11, 3), (4, 4), (7, 2), (19, 2)])
def test_blow_up_contracts_to_base(seed, mc):
    base = random_block_graph(seed, 10, mc)
    cuts = sorted(blocks(base)[1])
    g = blow_up(BlowupSpec(base, {c: 3 for c in cuts}))
    assert nx.is_isomorphic(twin_contraction(g)[0].to_networkx(), twin_contraction(base)[0].to_networkx())
    if mc == 2:  # trees on >= 3 vertices have no closed twins
        assert nx.is_isomorphic(twin_contraction(g)[0].to_networkx(), base.to_networkx())


def test_figure1_transcription():
    g, h = figure1_instance()
    assert g.n == 7 and h.vertices == tuple(range(6))
    assert sorted(h.induced_edges()) == [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 5), (3, 4), (3, 5)]
    assert g.adj[6] == {2, 4, 5}


def test_figure2_vertebrate():
    g, B = figure2_vertebrate()
    assert verify_backbone(g, B) is True
    assert is_extended_block_graph(g.induced(B).local())[0]
    moved = tuple(sorted(B + (10,)))
    assert verify_backbone(g, moved) is not True


def test_figure2_as_drawn_is_not_vertebrate_on_its_backbone():
    g = figure2_vertebrate_as_drawn()
    assert verify_backbone(g, range(9)) is not True


def test_arena_generators_are_seeded():
    g1, h1, b1 = vertebrate_arena(3)
    g2, h2, b2 = vertebrate_arena(3)
    assert g1 == g2 and h1.vertices == h2.vertices and b1 == b2
    assert g1.n <= 25 and is_isometric(h1, all_pairs_distances(g1)) is True
    g, h = random_path_arena(5)
    assert is_isometric(h, all_pairs_distances(g)) is True
