"""Constructors for the graph families used throughout the package.

Random generators take an explicit integer seed and draw only from a private
:class:`random.Random`, which is reproducible across platforms.

Random block graph: start from K1; while vertices remain in the budget, pick a
uniform existing vertex ``a`` and a clique size ``s`` uniform in
``[2, max_clique]`` (capped by the budget) and add ``s - 1`` new vertices that
form a clique with ``a``.

Random vertebrate graph: blow up a random subset of the cut vertices of a
random block graph, then add "extra" vertices.  Each extra vertex picks an
anchor ``a`` in the backbone and attaches to ``a`` plus a random subset of
``N[a]`` (and possibly to earlier extras with the same anchor).  A candidate is
kept only if :func:`~copguard.characterize.verify_backbone` still accepts the
backbone.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

from .characterize import is_block_graph, verify_backbone
from .graph import Graph, GraphError, SubgraphView, blocks, build_graph, is_isometric, all_pairs_distances


@dataclass(frozen=True)
class MgpLabeling:
    """Vertex ids of MGP(n, k, t): layer ``j`` index ``i`` has id ``j * n + i``."""

    n: int
    k: int
    t: int

    def to_id(self, j: int, i: int) -> int:
        if not 0 <= j <= self.t:
            raise ValueError(f"layer {j} outside 0..{self.t}")
        return j * self.n + i % self.n

    def to_coord(self, v: int) -> tuple[int, int]:
        if not 0 <= v < self.n * (self.t + 1):
            raise ValueError(f"vertex {v} out of range")
        return divmod(v, self.n)

    def column(self, i: int) -> list[int]:
        """B_i: the vertices with index ``i`` on every layer."""
        return [self.to_id(j, i) for j in range(self.t + 1)]

    def layer(self, j: int) -> list[int]:
        return [self.to_id(j, i) for i in range(self.n)]

    def format(self) -> str:
        lines = [f"v {self.to_id(j, i)} {j} {i}" for j in range(self.t + 1) for i in range(self.n)]
        return "\n".join(lines) + "\n"


def _check_skip(n: int, k: int):
    if n < 3:
        raise GraphError(f"need n >= 3, got {n}")
    if not 1 <= k < n:
        raise GraphError(f"need 1 <= k < n, got k={k}")
    if (2 * k) % n == 0:
        raise GraphError(f"skip {k} on {n} vertices doubles every skip edge (2k = 0 mod n)")


def gen_gp(n: int, k: int) -> tuple[Graph, MgpLabeling]:
    """Generalized Petersen graph GP(n, k) with a_i -> i and b_i -> n + i."""
    _check_skip(n, k)
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return build_graph(2 * n, edges), MgpLabeling(n, k, 1)


def gen_mgp(n: int, k: int, t: int) -> tuple[Graph, MgpLabeling]:
    """Multi-layer generalized Petersen graph MGP(n, k, t).

    Layer 0 is the n-cycle, layers 1..t are skip-k cycles, every column is a
    clique on t + 1 vertices.
    """
    _check_skip(n, k)
    if t < 1:
        raise GraphError(f"need t >= 1, got {t}")
    lab = MgpLabeling(n, k, t)
    edges = [(lab.to_id(0, i), lab.to_id(0, i + 1)) for i in range(n)]
    for j in range(1, t + 1):
        edges += [(lab.to_id(j, i), lab.to_id(j, i + k)) for i in range(n)]
    for i in range(n):
        col = lab.column(i)
        edges += [(col[a], col[b]) for a in range(t + 1) for b in range(a + 1, t + 1)]
    return build_graph(n * (t + 1), edges), lab


def skip_cycle_length(n: int, k: int) -> int:
    return n // gcd(n, k)


# --------------------------------------------------------------------------- blow-ups


@dataclass(frozen=True)
class BlowupSpec:
    base: Graph
    sizes: dict


def blow_up(spec: BlowupSpec) -> Graph:
    """Replace each listed cut vertex by a clique of the given size.

    Original vertices keep their ids; the extra copies of cut vertex ``v`` are
    appended in increasing order of ``v``.
    """
    base = spec.base
    if is_block_graph(base) is not True:
        raise GraphError("blow-up base must be a block graph")
    cuts = blocks(base)[1]
    for v, s in spec.sizes.items():
        if v not in cuts:
            raise GraphError(f"vertex {v} is not a cut vertex of the base")
        if s < 1:
            raise GraphError(f"clique size for {v} must be >= 1, got {s}")
    copies: dict[int, list[int]] = {v: [v] for v in base.vertices}
    nxt = base.n
    for v in sorted(spec.sizes):
        for _ in range(spec.sizes[v] - 1):
            copies[v].append(nxt)
            nxt += 1
    edges = set()
    for u, v in base.edges():
        for a in copies[u]:
            for b in copies[v]:
                edges.add((min(a, b), max(a, b)))
    for v, group in copies.items():
        for i, a in enumerate(group):
            for b in group[i + 1:]:
                edges.add((min(a, b), max(a, b)))
    return build_graph(nxt, sorted(edges))


# --------------------------------------------------------------------------- fixtures


FIGURE1_EDGES = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 5), (3, 4), (3, 5),
                 (2, 6), (4, 6), (5, 6)]


def figure1_instance() -> tuple[Graph, SubgraphView]:
    """Cop-win H = {0..5} sitting isometrically in G, yet not 1-guardable there."""
    g = build_graph(7, FIGURE1_EDGES)
    return g, g.induced(range(6))


def figure2_block() -> Graph:
    """Block graph of the inclusion example (blue cut vertex 0, red cut vertex 2)."""
    return build_graph(7, [(0, 2), (2, 3), (2, 1), (1, 5), (0, 4), (0, 1), (6, 2), (3, 6)])


_FIG2_MIDDLE = [(0, 2), (2, 1), (0, 1), (2, 3), (3, 1), (0, 3), (4, 0), (4, 1), (6, 1),
                (5, 6), (5, 4), (5, 0), (5, 1), (4, 6), (6, 0), (7, 4), (7, 5), (8, 6)]


def figure2_extended() -> Graph:
    """Extended block graph: red joint block {0, 1}, blue joint block {4, 5}."""
    return build_graph(9, _FIG2_MIDDLE)


def figure2_vertebrate() -> tuple[Graph, tuple[int, ...]]:
    """Vertebrate example: the extended block graph plus extras 9, 10, 11.

    The drawing omits the edge 4-1 of the middle picture; it is kept here so
    that the backbone {0..8} is the extended block graph drawn next to it.
    """
    extra = [(9, 7), (9, 5), (10, 2), (10, 3), (10, 1), (11, 5), (11, 9), (7, 11), (9, 4), (11, 4)]
    return build_graph(12, _FIG2_MIDDLE + extra), tuple(range(9))


def figure2_vertebrate_as_drawn() -> Graph:
    edges = [e for e in _FIG2_MIDDLE if e != (4, 1)]
    extra = [(9, 7), (9, 5), (10, 2), (10, 3), (10, 1), (11, 5), (11, 9), (7, 11), (9, 4), (11, 4)]
    return build_graph(12, edges + extra)


def petersen() -> Graph:
    return gen_gp(5, 2)[0]


# --------------------------------------------------------------------------- random


def random_block_graph(seed: int, vertex_budget: int, max_clique: int = 4) -> Graph:
    if vertex_budget < 1:
        raise ValueError("vertex_budget must be >= 1")
    if max_clique < 2:
        raise ValueError("max_clique must be >= 2")
    rng = random.Random(seed)
    n = 1
    edges: list[tuple[int, int]] = []
    while n < vertex_budget:
        anchor = rng.randrange(n)
        size = min(rng.randint(2, max_clique), vertex_budget - n + 1)
        group = [anchor] + list(range(n, n + size - 1))
        n += size - 1
        edges += [(group[a], group[b]) for a in range(size) for b in range(a + 1, size)]
    return build_graph(n, edges)


@dataclass(frozen=True)
class VertebrateParams:
    base_vertices: int = 7
    max_clique: int = 3
    blowup_prob: float = 0.5
    max_blowup: int = 3
    extra_vertices: int = 3
    retries: int = 200


class GenerationError(RuntimeError):
    pass


def random_vertebrate_graph(seed: int, params: VertebrateParams | None = None) -> tuple[Graph, tuple[int, ...]]:
    """A random vertebrate graph and the backbone it was built around."""
    p = params or VertebrateParams()
    rng = random.Random(seed)
    base = random_block_graph(rng.randrange(2**63), p.base_vertices, p.max_clique)
    cuts = sorted(blocks(base)[1])
    sizes = {v: rng.randint(2, p.max_blowup) for v in cuts if rng.random() < p.blowup_prob}
    backbone = blow_up(BlowupSpec(base, sizes))
    B = tuple(backbone.vertices)
    edges = list(backbone.edges())
    n = backbone.n
    anchors: dict[int, list[int]] = {}
    added = 0
    attempts = 0
    while added < p.extra_vertices:
        attempts += 1
        if attempts > p.retries:
            raise GenerationError(f"could not place extra vertex {added + 1} after {p.retries} tries")
        cur = build_graph(n, edges)
        a = rng.choice(B)
        pool = sorted(v for v in cur.closed(a) if v in B and v != a)
        attach = {a} | {v for v in pool if rng.random() < 0.5}
        attach |= {w for w in anchors.get(a, []) if rng.random() < 0.5}
        cand = build_graph(n + 1, edges + [(v, n) for v in sorted(attach)])
        if verify_backbone(cand, B) is True:
            edges = list(cand.edges())
            anchors.setdefault(a, []).append(n)
            n += 1
            added += 1
    return build_graph(n, edges), B


def random_isometric_host(
    seed: int, h: Graph, max_vertices: int, extra_edges: float = 0.3, retries: int = 400
) -> tuple[Graph, SubgraphView]:
    """Embed ``h`` (as vertices 0..h.n-1) in a random connected host in which it
    stays isometric and induced.  New vertices attach to random existing
    vertices; candidates breaking isometry are rejected."""
    rng = random.Random(seed)
    edges = list(h.edges())
    n = h.n
    target = rng.randint(h.n, max(h.n, max_vertices))
    attempts = 0
    while n < target and attempts < retries:
        attempts += 1
        k = 1 + (rng.random() < extra_edges) + (rng.random() < extra_edges * 0.5)
        nbrs = sorted(rng.sample(range(n), min(k, n)))
        cand = build_graph(n + 1, edges + [(v, n) for v in nbrs])
        if is_isometric(cand.induced(range(h.n)), all_pairs_distances(cand)) is True:
            edges = list(cand.edges())
            n += 1
    # a few chords among host-only vertices
    for _ in range(rng.randint(0, 3)):
        if n - h.n < 2:
            break
        u, v = rng.sample(range(h.n, n), 2)
        if (min(u, v), max(u, v)) in set(edges):
            continue
        cand = build_graph(n, edges + [(u, v)])
        if is_isometric(cand.induced(range(h.n)), all_pairs_distances(cand)) is True:
            edges = list(cand.edges())
    g = build_graph(n, edges)
    return g, g.induced(range(h.n))


def random_connected_graph(seed: int, n: int, extra_edges: int) -> Graph:
    """Uniform random recursive tree on ``n`` vertices plus up to
    ``extra_edges`` random chords."""
    rng = random.Random(seed)
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    edges |= set(rng.sample(pairs, min(extra_edges, len(pairs))))
    return build_graph(n, sorted(edges))


def shortest_path(g: Graph, s: int, t: int) -> list[int]:
    """BFS path from s to t, preferring the lowest-id predecessor."""
    parent = {s: s}
    frontier = [s]
    while frontier and t not in parent:
        nxt = []
        for u in frontier:
            for w in sorted(g.adj[u]):
                if w not in parent:
                    parent[w] = u
                    nxt.append(w)
        frontier = nxt
    if t not in parent:
        raise GraphError(f"{t} unreachable from {s}")
    path = [t]
    while path[-1] != s:
        path.append(parent[path[-1]])
    return path[::-1]


def random_path_arena(seed: int, max_vertices: int = 14) -> tuple[Graph, SubgraphView]:
    """Random connected host and H = a shortest path between a random pair
    of vertices at maximum distance from a random source."""
    rng = random.Random(seed)
    n = rng.randint(4, max_vertices)
    g = random_connected_graph(rng.randrange(2**63), n, rng.randint(0, n))
    s = rng.randrange(n)
    d = all_pairs_distances(g).rows[s]
    far = max(d)
    t = rng.choice([v for v in range(n) if d[v] == far])
    return g, g.induced(shortest_path(g, s, t))


def vertebrate_arena(
    seed: int, max_vertices: int = 25, params: VertebrateParams | None = None
) -> tuple[Graph, SubgraphView, tuple[int, ...]]:
    """Random vertebrate graph embedded isometrically in a random host of at
    most ``max_vertices`` vertices; returns (G, H, backbone)."""
    rng = random.Random(seed)
    h, B = random_vertebrate_graph(rng.randrange(2**63), params)
    if h.n > max_vertices:
        raise GenerationError(f"vertebrate graph has {h.n} > {max_vertices} vertices")
    g, hv = random_isometric_host(rng.randrange(2**63), h, max_vertices)
    return g, hv, B
