"""Figures for the CLI report path.

Every function writes one file and returns its path.  The Agg backend is
selected on import so the CLI works without a display.
"""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .families import MgpLabeling  # noqa: E402
from .graph import Graph  # noqa: E402

H_COLOR = "tab:red"
BASE_COLOR = "tab:gray"
COP_COLOR = "tab:blue"
ROBBER_COLOR = "tab:orange"


def _save(fig, path):
    fig.savefig(path, bbox_inches="tight", dpi=120)
    plt.close(fig)
    return str(path)


def mgp_layout(lab: MgpLabeling) -> dict[int, tuple[float, float]]:
    """Concentric rings: layer j on radius 1 + j, index i at angle 2*pi*i/n."""
    pos = {}
    for j in range(lab.t + 1):
        for i in range(lab.n):
            a = math.pi / 2 - 2 * math.pi * i / lab.n
            pos[lab.to_id(j, i)] = ((1 + j) * math.cos(a), (1 + j) * math.sin(a))
    return pos


def spring_layout(g: Graph, seed: int = 0) -> dict[int, tuple[float, float]]:
    import networkx as nx

    return {v: tuple(p) for v, p in nx.spring_layout(g.to_networkx(), seed=seed).items()}


def draw_graph(g: Graph, path, highlight=(), pos=None, cops=(), robber=None, title=None, labels=True):
    """Draw ``g`` with the vertices and induced edges of ``highlight`` in red."""
    pos = spring_layout(g) if pos is None else pos
    hl = set(highlight)
    fig, ax = plt.subplots(figsize=(6, 6))
    for u, v in g.edges():
        inside = u in hl and v in hl
        ax.plot([pos[u][0], pos[v][0]], [pos[u][1], pos[v][1]],
                color=H_COLOR if inside else BASE_COLOR, lw=2.0 if inside else 0.8, zorder=1)
    for v in g.vertices:
        ax.scatter(*pos[v], s=160, color=H_COLOR if v in hl else "white",
                   edgecolors="black", linewidths=0.8, zorder=2)
        if labels:
            ax.annotate(str(v), pos[v], ha="center", va="center", fontsize=7, zorder=3)
    for c in cops:
        ax.scatter(*pos[c], s=420, facecolors="none", edgecolors=COP_COLOR, linewidths=2.5, zorder=4)
    if robber is not None:
        ax.scatter(*pos[robber], s=520, facecolors="none", edgecolors=ROBBER_COLOR,
                   linewidths=2.5, linestyle="--", zorder=4)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_mgp(g: Graph, lab: MgpLabeling, hv, path, cops=(), robber=None):
    """MGP(n, k, t) on concentric rings with the guarded set H in red."""
    return draw_graph(g, path, hv, mgp_layout(lab), cops, robber,
                      title=f"MGP({lab.n},{lab.k},{lab.t})", labels=g.n <= 60)


def plot_potential(rounds, path, title="guard potential", guarded_at=None):
    """Potential f against round number; ``rounds`` holds dicts with
    ``round`` and ``f`` (the GuardTrace JSON rows)."""
    xs = [r["round"] for r in rounds]
    ys = [r["f"] for r in rounds]
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.step(xs, ys, where="post", color=COP_COLOR, lw=1.8)
    ax.axhline(0, color=BASE_COLOR, lw=0.8, ls="--")
    if guarded_at is not None:
        ax.axvline(guarded_at, color=H_COLOR, lw=0.8, ls=":")
    ax.set_xlabel("round")
    ax.set_ylabel("f(c, r)")
    ax.set_title(title)
    return _save(fig, path)


def plot_capture_profile(depths: dict, path, title="rounds to capture by robber start"):
    """Bar chart of worst-case capture rounds per robber start vertex."""
    keys = sorted(depths)
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(range(len(keys)), [depths[k] for k in keys], color=COP_COLOR)
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels([str(k) for k in keys], fontsize=6, rotation=90)
    ax.set_xlabel("robber start")
    ax.set_ylabel("cop moves")
    ax.set_title(title)
    return _save(fig, path)
