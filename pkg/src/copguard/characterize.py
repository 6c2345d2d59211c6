"""Metric recognizers for block, extended block and vertebrate graphs.

Every checker is exhaustive and reports the lexicographically first witness so
that independent checkers can be compared exactly.  Dense numpy tables do the
heavy lifting; graphs here are small (tens of vertices).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graph import (
    INF,
    DisconnectedError,
    DistanceMatrix,
    Graph,
    PreconditionError,
    all_pairs_distances,
    blocks,
    build_graph,
    closed_twin_classes,
)

DEFAULT_EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class Violation:
    """A failed instance of one of the metric properties.

    ``tag`` is one of P1, P2, P3, BLOCK, EXTENDED, BACKBONE.  ``vertices`` is the
    offending tuple in the order the property names them.
    """

    tag: str
    vertices: tuple[int, ...]
    detail: str
    extra: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        out = {"tag": self.tag, "vertices": list(self.vertices), "detail": self.detail}
        if self.extra:
            out["extra"] = self.extra
        return out


def _require_connected(dist: DistanceMatrix):
    if not dist.connected:
        raise DisconnectedError("metric characterizations assume a connected graph")


def _dist(g: Graph, dist: DistanceMatrix | None) -> DistanceMatrix:
    return all_pairs_distances(g) if dist is None else dist


def closed_matrix(g: Graph) -> np.ndarray:
    """Boolean matrix of closed neighborhoods (row v is N[v])."""
    m = np.eye(g.n, dtype=bool)
    for v in g.vertices:
        m[v, list(g.adj[v])] = True
    return m


def domination_matrix(g: Graph) -> np.ndarray:
    """``dom[a, b]`` is True when N[a] contains N[b]."""
    m = closed_matrix(g)
    return ~(m[None, :, :] & ~m[:, None, :]).any(axis=2)


def gated_tensor(g: Graph, dist: DistanceMatrix) -> np.ndarray:
    """``gate[c, x, v]``: v is in N(c, x) and d(c, x) >= 2."""
    d = dist.d
    adj = closed_matrix(g) & ~np.eye(g.n, dtype=bool)
    far = (d >= 2) & (d < INF)
    # d(v, x) == d(c, x) - 1 for each (c, x, v)
    on_path = d.T[None, :, :] == (d - 1)[:, :, None]
    return far[:, :, None] & adj[:, None, :] & on_path


# --------------------------------------------------------------------------- (P1)


def check_p1(g: Graph, dist: DistanceMatrix | None = None) -> bool | Violation:
    """Four-point condition over all quadruples (c, c', x, y), repetition allowed."""
    dist = _dist(g, dist)
    _require_connected(dist)
    if g.n == 0:
        return True
    d = dist.d
    # axes: c, c', x, y
    s1 = d[:, :, None, None] + d[None, None, :, :]
    s2 = d[:, None, :, None] + d[None, :, None, :]
    s3 = d[:, None, None, :] + d[None, :, :, None]
    stacked = np.sort(np.stack([s1, s2, s3]), axis=0)
    bad = stacked[2] != stacked[1]
    if not bad.any():
        return True
    c, cp, x, y = (int(i) for i in np.argwhere(bad)[0])
    sums = (int(s1[c, cp, x, y]), int(s2[c, cp, x, y]), int(s3[c, cp, x, y]))
    return Violation(
        "P1",
        (c, cp, x, y),
        f"d(c,c')+d(x,y)={sums[0]}, d(c,x)+d(c',y)={sums[1]}, d(c,y)+d(c',x)={sums[2]}",
        {"sums": list(sums)},
    )


# --------------------------------------------------------------------------- (P2)/(P3)


def _inner_ok(dist: DistanceMatrix) -> np.ndarray:
    """``ok[c, x, c', y]``: the two-path disjunction of (P2)/(P3) holds for y
    (or y is within distance 1 of c', where nothing is required)."""
    d = dist.d
    near = d < 2  # indexed [c', y]
    via_c = d[:, None, None, :] == 1 + d[None, None, :, :]  # d(c,y) = 1 + d(c',y)
    via_x = d[None, :, None, :] == d.T[None, :, :, None] + d[None, None, :, :]
    return near[None, None, :, :] | via_c | via_x


def p3_witness_table(g: Graph, dist: DistanceMatrix | None = None) -> np.ndarray:
    """``good[c, x, c']``: c' in N(c, x) and every y passes the (P3) disjunction."""
    dist = _dist(g, dist)
    gate = gated_tensor(g, dist)
    return gate & _inner_ok(dist).all(axis=3)


def _blocking_y(dist: DistanceMatrix, c: int, x: int, cp: int) -> int | None:
    d = dist.rows
    for y in range(dist.n):
        if d[cp][y] < 2:
            continue
        if d[c][y] == 1 + d[cp][y] or d[x][y] == d[x][cp] + d[cp][y]:
            continue
        return y
    return None


def check_p2(g: Graph, dist: DistanceMatrix | None = None) -> bool | Violation:
    dist = _dist(g, dist)
    _require_connected(dist)
    if g.n == 0:
        return True
    gate = gated_tensor(g, dist)
    bad = gate[:, :, :, None] & ~_inner_ok(dist)
    if not bad.any():
        return True
    c, x, cp, y = (int(i) for i in np.argwhere(bad)[0])
    r = dist.rows
    return Violation(
        "P2",
        (c, x, cp, y),
        f"d(c,y)={r[c][y]} != 1+d(c',y)={1 + r[cp][y]} and "
        f"d(x,y)={r[x][y]} != d(x,c')+d(c',y)={r[x][cp] + r[cp][y]}",
    )


def compute_C(
    g: Graph, dist: DistanceMatrix, R, c: int, x: int
) -> frozenset[int]:
    """Gated neighbors of c toward x inside R whose closed neighborhood
    contains the closed neighborhood of every gated neighbor."""
    R = frozenset(R)
    if c not in R:
        raise PreconditionError(f"{c} is not in R")
    dcx = dist(c, x)
    if dcx >= INF or dcx < 2:
        raise PreconditionError(f"compute_C needs 2 <= d({c},{x}) < inf, got {dcx}")
    gated = [v for v in g.adj[c] if dist(v, x) == dcx - 1]
    closed = {v: g.closed(v) for v in gated}
    return frozenset(
        u for u in gated if u in R and all(closed[v] <= closed[u] for v in gated)
    )


def check_p3_with_R(
    g: Graph, dist: DistanceMatrix | None, R, good: np.ndarray | None = None
) -> bool | Violation:
    """(P3) for a fixed R.  ``good`` may pass a precomputed witness table."""
    dist = _dist(g, dist)
    _require_connected(dist)
    R = sorted(set(R))
    covered = set()
    for v in R:
        covered |= g.closed(v)
    missing = sorted(set(g.vertices) - covered)
    if missing:
        return Violation("P3", (missing[0],), f"vertex {missing[0]} is not in N[R]")
    if good is None:
        good = p3_witness_table(g, dist)
    in_r = np.zeros(g.n, dtype=bool)
    in_r[R] = True
    r = dist.rows
    for c in R:
        for x in range(g.n):
            if r[c][x] < 2:
                continue
            if (good[c, x] & in_r).any():
                continue
            candidates = [v for v in sorted(g.adj[c]) if in_r[v] and r[v][x] == r[c][x] - 1]
            blockers = {cp: _blocking_y(dist, c, x, cp) for cp in candidates}
            return Violation(
                "P3",
                (c, x),
                f"no admissible c' in N_R({c},{x}); candidates {candidates}",
                {"blocking": {str(k): v for k, v in blockers.items()}},
            )
    return True


def _bitmask_tables(g: Graph, dist: DistanceMatrix):
    """Per-(c, x) bitmasks of (P3) witnesses and of dominating gates."""
    good = p3_witness_table(g, dist)
    gate = gated_tensor(g, dist)
    dom = domination_matrix(g)
    # dom_gate[c, x, u]: u gated and N[u] contains N[v] for every gated v
    dom_gate = gate & ~(gate[:, :, None, :] & ~dom[None, None, :, :]).any(axis=3)
    weights = 1 << np.arange(g.n, dtype=object)

    def masks(t):
        out = {}
        for c, x in zip(*np.nonzero(dist.d >= 2)):
            if dist.d[c, x] >= INF:
                continue
            out[(int(c), int(x))] = int(sum(weights[t[c, x]]))
        return out

    return masks(good), masks(dom_gate), good, dom_gate


def _closed_masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in g.closed(v)) for v in g.vertices]


def _bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def exists_p3_R(g: Graph, dist: DistanceMatrix | None = None) -> frozenset[int] | None:
    """Exhaustive search over every nonempty R.  Returns the first valid R in
    order of increasing bitmask, or None."""
    dist = _dist(g, dist)
    _require_connected(dist)
    goodm, _, _, _ = _bitmask_tables(g, dist)
    closed = _closed_masks(g)
    full = (1 << g.n) - 1
    by_c: dict[int, list[int]] = {}
    for (c, _x), m in goodm.items():
        by_c.setdefault(c, []).append(m)
    for R in range(1, full + 1):
        cover = 0
        ok = True
        for c in _bits(R):
            cover |= closed[c]
            if any(m & R == 0 for m in by_c.get(c, ())):
                ok = False
                break
        if ok and cover == full:
            return frozenset(_bits(R))
    return None


# --------------------------------------------------------------------------- block graphs


def is_block_graph(g: Graph) -> bool | Violation:
    if not g.is_connected():
        raise DisconnectedError("block graphs are connected")
    for b in blocks(g)[0]:
        for u, v in combinations(sorted(b), 2):
            if not g.has_edge(u, v):
                return Violation("BLOCK", (u, v), f"{u} and {v} share a block but are not adjacent")
    return True


@dataclass(frozen=True)
class JointStructure:
    joint_blocks: tuple[frozenset[int], ...]

    @property
    def joints(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for b in self.joint_blocks:
            out |= b
        return out


def twin_contraction(g: Graph) -> tuple[Graph, list[frozenset[int]]]:
    """Contract each closed-twin class to one vertex (class i -> vertex i)."""
    classes = closed_twin_classes(g)
    owner = {}
    for i, cls in enumerate(classes):
        for v in cls:
            owner[v] = i
    edges = {
        (min(owner[u], owner[v]), max(owner[u], owner[v]))
        for u, v in g.edges()
        if owner[u] != owner[v]
    }
    return build_graph(len(classes), sorted(edges)), classes


def is_extended_block_graph(g: Graph) -> tuple[bool, JointStructure | Violation]:
    """Structural recognition via twin contraction.

    Returns ``(True, JointStructure)`` or ``(False, Violation)``; the joint
    blocks are the twin classes sitting on cut vertices of the contraction.
    """
    if not g.is_connected():
        raise DisconnectedError("extended block graphs are connected")
    q, classes = twin_contraction(g)
    verdict = is_block_graph(q)
    if verdict is not True:
        a, b = verdict.vertices
        u, v = min(classes[a]), min(classes[b])
        u, v = min(u, v), max(u, v)
        return False, Violation(
            "EXTENDED",
            (u, v),
            f"twin contraction is not a block graph: classes of {u} and {v} share a block but are not adjacent",
        )
    cuts = blocks(q)[1]
    joints = tuple(classes[i] for i in sorted(cuts))
    return True, JointStructure(joints)


# --------------------------------------------------------------------------- backbones


@dataclass(frozen=True)
class BackboneCertificate:
    """A verified backbone ``B`` and, when found, a guard set ``R`` with (P3).

    ``witnesses`` maps every (c, x) with c in B and d(c, x) >= 2 to a gate of B
    that dominates all gated neighbors; ``guard_witnesses`` does the same for the
    (P3) disjunction with c in R.
    """

    B: tuple[int, ...]
    R: tuple[int, ...] | None
    witnesses: dict
    guard_witnesses: dict
    stage: str

    def to_json(self) -> dict:
        return {
            "backbone": list(self.B),
            "guard_set": None if self.R is None else list(self.R),
            "stage": self.stage,
            "witnesses": [[c, x, w] for (c, x), w in sorted(self.witnesses.items())],
        }


class Inconclusive(Exception):
    """The bounded search could neither find nor rule out an object."""


def _connected_subset(g: Graph, vs) -> bool:
    vs = set(vs)
    if not vs:
        return False
    start = min(vs)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


def verify_backbone(g: Graph, B, dist: DistanceMatrix | None = None) -> bool | Violation:
    """Check both conditions of the vertebrate definition for a candidate B."""
    dist = _dist(g, dist)
    B = sorted(set(B))
    if not B or not _connected_subset(g, B):
        raise PreconditionError("backbone must be a nonempty connected vertex set")
    ok, info = is_extended_block_graph(g.induced(B).local())
    if not ok:
        u, v = B[info.vertices[0]], B[info.vertices[1]]
        return Violation("BACKBONE", (u, v), "G[B] is not an extended block graph: " + info.detail)
    in_b = set(B)
    r = dist.rows
    for c in B:
        for x in range(g.n):
            dcx = r[c][x]
            if dcx < 2 or dcx >= INF:
                continue
            gated = [v for v in g.adj[c] if r[v][x] == dcx - 1]
            closed = {v: g.closed(v) for v in gated}
            if not any(u in in_b and all(closed[v] <= closed[u] for v in gated) for u in gated):
                return Violation(
                    "BACKBONE",
                    (c, x),
                    f"no gate of B toward {x} from {c} dominates N({c},{x})={sorted(gated)}",
                )
    return True


def _backbone_witnesses(g: Graph, dist: DistanceMatrix, B) -> dict:
    out = {}
    in_b = set(B)
    r = dist.rows
    for c in sorted(in_b):
        for x in range(g.n):
            dcx = r[c][x]
            if dcx < 2 or dcx >= INF:
                continue
            gated = sorted(v for v in g.adj[c] if r[v][x] == dcx - 1)
            closed = {v: g.closed(v) for v in gated}
            for u in gated:
                if u in in_b and all(closed[v] <= closed[u] for v in gated):
                    out[(c, x)] = u
                    break
    return out


def _guard_witnesses(g: Graph, good: np.ndarray, R) -> dict:
    out = {}
    in_r = set(R)
    for c in sorted(in_r):
        for x in range(g.n):
            for cp in np.nonzero(good[c, x])[0]:
                if int(cp) in in_r:
                    out[(c, x)] = int(cp)
                    break
    return out


def find_guard_set(
    g: Graph, dist: DistanceMatrix, B, exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    good: np.ndarray | None = None,
) -> tuple[int, ...] | None:
    """A set R satisfying (P3): tries B itself, then V(G), then (small graphs
    only) every subset of B and finally of V(G) by increasing size."""
    if good is None:
        good = p3_witness_table(g, dist)
    B = tuple(sorted(B))
    for cand in (B, tuple(g.vertices)):
        if check_p3_with_R(g, dist, cand, good) is True:
            return cand
    if g.n > exhaustive_limit:
        return None
    for pool in (B, tuple(g.vertices)):
        for size in range(1, len(pool) + 1):
            for cand in combinations(pool, size):
                if check_p3_with_R(g, dist, cand, good) is True:
                    return cand
    return None


def find_backbone(
    g: Graph,
    dist: DistanceMatrix | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> BackboneCertificate | None:
    """Search for a vertebrate backbone.

    Stage 1 tries B = V(G) and B = G[S] where S is the union of the dominating
    gate sets C(c, x) taken with R = V(G).  Stage 2 (only up to
    ``exhaustive_limit`` vertices) scans every connected vertex subset, largest
    first.  Raises :class:`Inconclusive` when stage 1 fails above the limit.
    """
    dist = _dist(g, dist)
    _require_connected(dist)
    if g.n == 0:
        return None
    _, dom_masks, good, _ = _bitmask_tables(g, dist)
    S = 0
    for m in dom_masks.values():
        S |= m

    def certify(B, stage):
        R = find_guard_set(g, dist, B, exhaustive_limit, good)
        return BackboneCertificate(
            tuple(B),
            R,
            _backbone_witnesses(g, dist, B),
            {} if R is None else _guard_witnesses(g, good, R),
            stage,
        )

    stage1 = [tuple(g.vertices)]
    if S:
        stage1.append(tuple(_bits(S)))
    for B in stage1:
        if _connected_subset(g, B) and verify_backbone(g, B, dist) is True:
            return certify(B, "canonical")
    if g.n > exhaustive_limit:
        raise Inconclusive(f"canonical backbone failed and n={g.n} exceeds limit {exhaustive_limit}")
    by_c: dict[int, list[int]] = {}
    for (c, _x), m in dom_masks.items():
        by_c.setdefault(c, []).append(m)
    for size in range(g.n, 0, -1):
        for B in combinations(range(g.n), size):
            mask = sum(1 << v for v in B)
            if any(m & mask == 0 for c in B for m in by_c.get(c, ())):
                continue
            if not _connected_subset(g, B):
                continue
            if verify_backbone(g, B, dist) is True:
                return certify(B, "exhaustive")
    return None
