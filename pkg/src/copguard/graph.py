"""Core graph representation, shortest-path distances and small structural tools.

Graphs are simple and undirected with positional vertex ids ``0..n-1``.  Every
object in this module is immutable once built; operations are pure functions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Distance sentinel for disconnected pairs.  Large enough that sums of two
#: sentinels still fit comfortably in int64 and never look like a real distance.
INF = 10**9


class GraphError(ValueError):
    """Raised on malformed graph input (bad ids, loops, parallel edges)."""


class PreconditionError(ValueError):
    """Raised when an operation is called outside its domain."""


class DisconnectedError(PreconditionError):
    """Raised when an operation that needs a connected graph gets another one."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise GraphError(f"self-loop at {v}")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphError(f"neighbor {u} of {v} out of range")
                if v not in self.adj[u]:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")

    @property
    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> list[tuple[int, int]]:
        """Sorted edge list with ``u < v``."""
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def closed(self, v: int) -> frozenset[int]:
        """Closed neighborhood N[v]."""
        return self.adj[v] | {v}

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return len(_bfs_layers(self, 0)) == self.n

    def induced(self, vertices: Iterable[int]) -> "SubgraphView":
        return SubgraphView(self, tuple(vertices))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return build_graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple undirected graph, rejecting loops, duplicates and bad ids."""
    if n < 0:
        raise GraphError(f"negative vertex count {n}")
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an id outside 0..{n - 1}")
        if u == v:
            raise GraphError(f"self-loop ({u}, {v})")
        if v in adj[u]:
            raise GraphError(f"duplicate edge ({u}, {v})")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(n, tuple(frozenset(a) for a in adj))


def from_networkx(g) -> Graph:
    nodes = sorted(g.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return build_graph(len(nodes), [(index[u], index[v]) for u, v in g.edges()])


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves: int) -> Graph:
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# --------------------------------------------------------------------------- distances


def _bfs_layers(g: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs distances.  ``d`` is an int64 array, ``rows`` the same data as
    nested tuples for fast scalar access in pure-Python loops."""

    d: np.ndarray
    rows: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def __call__(self, u: int, v: int) -> int:
        return self.rows[u][v]

    def __getitem__(self, key):
        return self.d[key]

    @property
    def connected(self) -> bool:
        return not bool((self.d >= INF).any())

    def diameter(self) -> int:
        return int(self.d.max()) if self.n else 0


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """Unweighted all-pairs shortest paths by one breadth-first search per source."""
    d = np.full((g.n, g.n), INF, dtype=np.int64)
    for s in range(g.n):
        for v, k in _bfs_layers(g, s).items():
            d[s, v] = k
    d.setflags(write=False)
    return DistanceMatrix(d, tuple(tuple(int(x) for x in row) for row in d))


def gated_neighbors(g: Graph, dist: DistanceMatrix, c: int, x: int) -> frozenset[int]:
    """N(c, x): neighbors of ``c`` on some shortest ``c``-``x`` path."""
    dcx = dist(c, x)
    if dcx >= INF:
        raise DisconnectedError(f"vertices {c} and {x} are in different components")
    if dcx < 2:
        raise PreconditionError(f"gated neighbors need d({c},{x}) >= 2, got {dcx}")
    row = dist.rows
    return frozenset(v for v in g.adj[c] if row[v][x] == dcx - 1)


# --------------------------------------------------------------------------- subgraphs


@dataclass(frozen=True)
class SubgraphView:
    """Induced subgraph of ``parent`` on ``vertices`` (kept in the given order)."""

    parent: Graph
    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("subgraph vertices are not distinct")
        for v in self.vertices:
            if not 0 <= v < self.parent.n:
                raise GraphError(f"subgraph vertex {v} not in parent")

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.vertex_set

    def local(self) -> Graph:
        """The induced subgraph as a standalone graph, local id i <-> vertices[i]."""
        index = {v: i for i, v in enumerate(self.vertices)}
        edges = [
            (index[u], index[v])
            for u in self.vertices
            for v in self.parent.adj[u]
            if v in index and index[u] < index[v]
        ]
        return build_graph(len(self.vertices), edges)

    def induced_edges(self) -> list[tuple[int, int]]:
        """Parent-id edges inside the subset."""
        s = self.vertex_set
        return [(u, v) for u, v in self.parent.edges() if u in s and v in s]


@dataclass(frozen=True)
class IsometryWitness:
    u: int
    v: int
    internal: int
    parent: int


def is_isometric(h: SubgraphView, parent_dist: DistanceMatrix) -> bool | IsometryWitness:
    """True when distances inside ``h`` match the parent's; otherwise the first
    offending pair (in the order of ``h.vertices``) with both distances.  A
    disconnected ``h`` reports a pair whose internal distance is ``INF``."""
    local = all_pairs_distances(h.local())
    vs = h.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            inner = local(i, j)
            outer = parent_dist(vs[i], vs[j])
            if inner != outer:
                return IsometryWitness(vs[i], vs[j], inner, outer)
    return True


def closed_twin_classes(g: Graph) -> list[frozenset[int]]:
    """Partition of V by equality of closed neighborhoods, ordered by least member."""
    groups: dict[frozenset[int], list[int]] = {}
    for v in g.vertices:
        groups.setdefault(g.closed(v), []).append(v)
    return sorted((frozenset(c) for c in groups.values()), key=min)


def blocks(g: Graph) -> tuple[list[frozenset[int]], frozenset[int]]:
    """Biconnected components (as vertex sets) and cut vertices.

    Iterative Hopcroft-Tarjan over edges.  Bridges are 2-vertex blocks and an
    isolated single vertex forms a one-vertex block.
    """
    if not g.is_connected():
        raise DisconnectedError("block decomposition needs a connected graph")
    if g.n == 1:
        return [frozenset({0})], frozenset()
    disc = [-1] * g.n
    low = [0] * g.n
    found: list[frozenset[int]] = []
    edge_stack: list[tuple[int, int]] = []
    counter = 0
    root = 0
    disc[root] = low[root] = counter
    stack = [(root, -1, iter(sorted(g.adj[root])))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if disc[w] == -1:
                counter += 1
                disc[w] = low[w] = counter
                edge_stack.append((v, w))
                stack.append((w, v, iter(sorted(g.adj[w]))))
                advanced = True
                break
            if w != parent and disc[w] < disc[v]:
                edge_stack.append((v, w))
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if parent >= 0:
            low[parent] = min(low[parent], low[v])
            if low[v] >= disc[parent]:
                comp = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.update((a, b))
                    if (a, b) == (parent, v):
                        break
                found.append(frozenset(comp))
    count: dict[int, int] = {}
    for b in found:
        for v in b:
            count[v] = count.get(v, 0) + 1
    cuts = frozenset(v for v, k in count.items() if k >= 2)
    found.sort(key=lambda b: sorted(b))
    return found, cuts


def is_dismantlable(g: Graph) -> tuple[bool, list[int]]:
    """Corner elimination.  Repeatedly delete the lowest-id vertex ``u`` whose
    closed neighborhood (in the current graph) is contained in that of another
    vertex.  Returns the verdict and the elimination order; the last remaining
    vertex is appended when the graph dismantles completely."""
    if g.n == 0:
        raise PreconditionError("empty graph")
    if not g.is_connected():
        raise DisconnectedError("dismantlability is defined here for connected graphs")
    alive = set(g.vertices)
    nbr = {v: set(g.closed(v)) for v in g.vertices}
    order: list[int] = []
    while len(alive) > 1:
        corner = None
        for u in sorted(alive):
            nu = nbr[u]
            if any(w != u and nu <= nbr[w] for w in nu):
                corner = u
                break
        if corner is None:
            return False, order
        order.append(corner)
        alive.discard(corner)
        for w in nbr[corner]:
            if w != corner:
                nbr[w].discard(corner)
        del nbr[corner]
    order.extend(alive)
    return True, order


# --------------------------------------------------------------------------- text format


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"p {g.n} {g.m}")
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the ``p <n> <m>`` / ``e <u> <v>`` text format."""
    n = None
    declared_m = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 3:
                raise GraphError(f"line {lineno}: bad header {line!r}")
            n, declared_m = int(parts[1]), int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise GraphError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise GraphError(f"line {lineno}: bad edge {line!r}")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise GraphError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise GraphError("missing 'p <n> <m>' header")
    if len(edges) != declared_m:
        raise GraphError(f"header declares {declared_m} edges, found {len(edges)}")
    return build_graph(n, edges)


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(g, comment))
