"""Slow, independent reference implementations used as test oracles."""
from itertools import product

import networkx as nx

from copguard.graph import INF


def relaxation_distances(g):
    """All-pairs distances by repeated edge relaxation (Bellman-Ford style)."""
    n = g.n
    d = [[0 if u == v else INF for v in range(n)] for u in range(n)]
    edges = g.edges()
    changed = True
    while changed:
        changed = False
        for s in range(n):
            for u, v in edges:
                for a, b in ((u, v), (v, u)):
                    if d[s][a] + 1 < d[s][b]:
                        d[s][b] = d[s][a] + 1
                        changed = True
    return d


def nx_blocks(g):
    G = g.to_networkx()
    comps = [frozenset(c) for c in nx.biconnected_components(G)]
    if g.n == 1:
        comps = [frozenset({0})]
    return sorted(comps, key=sorted), frozenset(nx.articulation_points(G))


def four_point_holds(g):
    d = relaxation_distances(g)
    for a, b, c, e in product(range(g.n), repeat=4):
        s = sorted([d[a][b] + d[c][e], d[a][c] + d[b][e], d[a][e] + d[b][c]])
        if s[1] != s[2]:
            return False
    return True


def p2_holds(g):
    d = relaxation_distances(g)
    n = g.n
    for c, x in product(range(n), repeat=2):
        if d[c][x] < 2:
            continue
        for cp in g.adj[c]:
            if d[cp][x] != d[c][x] - 1:
                continue
            for y in range(n):
                if d[cp][y] < 2:
                    continue
                if d[c][y] != d[c][cp] + d[cp][y] and d[x][y] != d[x][cp] + d[cp][y]:
                    return False
    return True


def naive_cop_win(g, k):
    """Cop-win decision for k cops with ordered cop tuples and a plain
    fixpoint over (cops, robber, turn) states."""
    n = g.n
    closed = [sorted(g.closed(v)) for v in range(n)]
    tuples = list(product(range(n), repeat=k))
    win = {}
    for cops in tuples:
        for r in range(n):
            caught = r in cops
            win[(cops, r, 0)] = caught
            win[(cops, r, 1)] = caught
    changed = True
    while changed:
        changed = False
        for cops in tuples:
            moves = list(product(*(closed[c] for c in cops)))
            for r in range(n):
                if not win[(cops, r, 0)] and any(win[(m, r, 1)] for m in moves):
                    win[(cops, r, 0)] = True
                    changed = True
                if not win[(cops, r, 1)] and all(win[(cops, r2, 0)] for r2 in closed[r]):
                    win[(cops, r, 1)] = True
                    changed = True
    return any(all(win[(cops, r, 0)] for r in range(n)) for cops in tuples)


def induced_distance(g, vs, u, v):
    G = g.to_networkx().subgraph(vs)
    try:
        return nx.shortest_path_length(G, u, v)
    except nx.NetworkXNoPath:
        return INF
