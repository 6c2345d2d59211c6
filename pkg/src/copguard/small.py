"""Exhaustive suites of small connected graphs."""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .graph import Graph, build_graph, from_networkx


def labeled_connected_graphs(n: int) -> Iterator[Graph]:
    """Every connected labeled graph on ``n`` vertices (edge-subset enumeration).

    Exponential in n(n-1)/2; meant for n <= 6.
    """
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        g = build_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        if g.is_connected():
            yield g


@lru_cache(maxsize=None)
def _atlas() -> tuple[Graph, ...]:
    from networkx.generators.atlas import graph_atlas_g

    return tuple(from_networkx(h) for h in graph_atlas_g())


def connected_graphs_upto(max_n: int = 7, min_n: int = 1) -> list[Graph]:
    """One representative per isomorphism class of connected graphs with
    ``min_n <= n <= max_n`` (max 7), taken from the networkx graph atlas."""
    if max_n > 7:
        raise ValueError("the atlas stops at 7 vertices")
    return [g for g in _atlas() if min_n <= g.n <= max_n and g.is_connected()]
