"""One-cop guarding of an isometric subgraph.

The guard keeps the potential ``f(c, r) = min_{x in H} d(r, x) - d(c, x)``
from decreasing; once ``f >= 0`` any robber step into H lands next to the cop.
This module provides the potential, the cop's move rule, a simulator with an
optional helper cop, an exhaustive adversarial check of the rule, and an exact
solver for the guarding game itself.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .characterize import p3_witness_table
from .graph import (
    INF,
    DistanceMatrix,
    Graph,
    PreconditionError,
    SubgraphView,
    all_pairs_distances,
    is_isometric,
)

log = logging.getLogger(__name__)


class NotIsometric(PreconditionError):
    pass


class GuardStrategyError(RuntimeError):
    """The move rule found no (P3) witness: the guard set does not satisfy (P3)."""


@dataclass(eq=False)
class GuardArena:
    G: Graph
    H: SubgraphView
    R: frozenset
    D: DistanceMatrix = None

    def __post_init__(self):
        if self.D is None:
            self.D = all_pairs_distances(self.G)
        self.R = frozenset(self.R)
        hv = self.H.vertex_set
        if not self.R or not self.R <= hv:
            raise PreconditionError("guard set must be a nonempty subset of V(H)")
        witness = is_isometric(self.H, self.D)
        if witness is not True:
            raise NotIsometric(f"H is not isometric: {witness}")
        covered = set()
        for c in self.R:
            covered |= self.G.closed(c) & hv
        if covered != hv:
            raise PreconditionError(f"N[R] misses {sorted(hv - covered)}")
        self.hv = tuple(sorted(hv))
        d = self.D.d
        cols = d[:, self.hv]
        # pot[c, r] = min over x in H of d(r, x) - d(c, x)
        self.pot = (cols[None, :, :] - cols[:, None, :]).min(axis=2)
        local = self.H.local()
        good = p3_witness_table(local, all_pairs_distances(local))
        ids = self.H.vertices
        self._witness: dict[tuple[int, int], list[int]] = {}
        for a, b, w in zip(*np.nonzero(good)):
            self._witness.setdefault((ids[a], ids[b]), []).append(ids[w])
        for key in self._witness:
            self._witness[key].sort()

    def potential(self, c: int, r: int) -> int:
        return int(self.pot[c, r])

    def p3_witnesses(self, c: int, x: int) -> list[int]:
        """Gates c' of c toward x inside R that pass the (P3) disjunction."""
        return [w for w in self._witness.get((c, x), []) if w in self.R]


def potential(arena: GuardArena, c: int, r: int) -> int:
    return arena.potential(c, r)


def potential_bruteforce(G: Graph, D: DistanceMatrix, H, c: int, r: int) -> int:
    return min(D(r, x) - D(c, x) for x in H)


def guard_move(arena: GuardArena, c: int, r_new: int, f_old: int) -> tuple[int, str]:
    """The guard's reply after the robber moved to ``r_new``.

    Returns the new cop vertex and one of ``capture``, ``stay`` (potential went
    up while negative), ``stay-zero`` (potential non-negative and still so) or
    ``advance`` (step to a (P3) gate toward the worst target).  Ties among
    targets and gates are broken by smallest id.
    """
    if r_new in arena.G.closed(c):
        return r_new, "capture"
    f_new = arena.potential(c, r_new)
    if f_old < 0 and f_new > f_old:
        return c, "stay"
    if f_old >= 0 and f_new >= 0:
        return c, "stay-zero"
    d = arena.D.rows
    for x in arena.hv:
        if d[r_new][x] - d[c][x] != f_new or d[c][x] < 2:
            continue
        gates = arena.p3_witnesses(c, x)
        if gates:
            return gates[0], "advance"
    raise GuardStrategyError(f"no (P3) gate from {c} against robber at {r_new}")


# --------------------------------------------------------------------------- simulation


@dataclass(frozen=True)
class GuardState:
    round: int
    c: int
    r: int
    f: int
    case: str = "start"
    helper: int | None = None


@dataclass
class GuardTrace:
    states: list[GuardState] = field(default_factory=list)
    outcome: str = "budget-exhausted"
    guarded_at: int | None = None

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "guarded_at": self.guarded_at,
            "rounds": [
                {"round": s.round, "cop": s.c, "robber": s.r, "f": s.f, "case": s.case, "helper": s.helper}
                for s in self.states
            ],
        }


def helper_step(G: Graph, D: DistanceMatrix, p: int, r: int) -> int:
    """Shortest-path pursuit: lowest-id neighbor strictly closer to ``r``."""
    if p == r:
        return p
    for w in sorted(G.adj[p]):
        if D(w, r) == D(p, r) - 1:
            return w
    return p


RobberPolicy = Callable[[GuardState, GuardArena], int]


def stay_policy(state: GuardState, arena: GuardArena) -> int:
    return state.r


def greedy_policy(state: GuardState, arena: GuardArena) -> int:
    """Step that minimises the guard's potential (ties: lowest id), avoiding cops."""
    best = None
    for w in sorted(arena.G.closed(state.r)):
        if w == state.c or w == state.helper:
            continue
        key = (arena.potential(state.c, w), w)
        if best is None or key < best:
            best = key
    return state.r if best is None else best[1]


def simulate_guard(
    arena: GuardArena,
    robber_policy: RobberPolicy,
    forcing: str = "helper",
    max_rounds: int = 100,
    cop_start: int | None = None,
    robber_start: int = 0,
    helper_start: int | None = None,
) -> GuardTrace:
    """Play the guard rule against ``robber_policy``.

    Each round the robber moves first, then the guard, then (``helper`` mode)
    the helper cop.  In ``restless`` mode a robber that does not move forfeits
    the round and the run stops as ``captured``.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    if forcing not in ("helper", "restless"):
        raise ValueError(f"unknown forcing mode {forcing!r}")
    G = arena.G
    c = min(arena.R) if cop_start is None else cop_start
    p = (c if helper_start is None else helper_start) if forcing == "helper" else None
    r = robber_start
    trace = GuardTrace()
    f = arena.potential(c, r)
    trace.states.append(GuardState(0, c, r, f, "start", p))
    if r in (c, p):
        trace.outcome = "captured"
        return trace
    if f >= 0:
        trace.guarded_at = 0
    breach = False
    hv = arena.H.vertex_set
    for rnd in range(1, max_rounds + 1):
        state = trace.states[-1]
        r_new = robber_policy(state, arena)
        if r_new not in G.closed(r):
            raise ValueError(f"robber policy made an illegal move {r} -> {r_new}")
        if forcing == "restless" and r_new == r:
            trace.outcome = "captured"
            return trace
        if f >= 0 and r_new in hv and r_new not in G.closed(c):
            breach = True
        if r_new in (c, p):
            trace.states.append(GuardState(rnd, c, r_new, 0, "capture", p))
            trace.outcome = "breach" if breach else "captured"
            return trace
        c, case = guard_move(arena, c, r_new, f)
        r = r_new
        if p is not None and c != r:
            p = helper_step(G, arena.D, p, r)
        f = arena.potential(c, r)
        trace.states.append(GuardState(rnd, c, r, f, case, p))
        if c == r or p == r:
            trace.outcome = "breach" if breach else "captured"
            return trace
        if f >= 0 and trace.guarded_at is None:
            trace.guarded_at = rnd
    if breach:
        trace.outcome = "breach"
    elif trace.guarded_at is not None:
        trace.outcome = "guarded"
    return trace


@dataclass
class AdversarialReport:
    """Result of searching every robber behaviour against the guard rule."""

    loops: bool
    max_rounds_to_guard: int
    monotone_failures: list = field(default_factory=list)
    breaches: list = field(default_factory=list)
    states: int = 0

    @property
    def ok(self) -> bool:
        return not self.loops and not self.monotone_failures and not self.breaches


def check_monotone(arena: GuardArena) -> list[tuple[int, int, int, int]]:
    """Exhaustive one-step check: from every (c in R, r) with f <= 0 and every
    robber step r', the guard's reply keeps f from dropping.  Returns failures
    as (c, r, r', c')."""
    fails = []
    G = arena.G
    for c in sorted(arena.R):
        for r in G.vertices:
            f = arena.potential(c, r)
            if f > 0 or r == c:
                continue
            for r2 in sorted(G.closed(r)):
                if r2 == c:
                    continue
                c2, case = guard_move(arena, c, r2, f)
                if case != "capture" and (arena.potential(c2, r2) < f or c2 not in arena.R):
                    fails.append((c, r, r2, c2))
    return fails


def adversarial_guard(
    arena: GuardArena, forcing: str = "helper", cop_start: int | None = None,
    helper_start: int | None = None,
) -> AdversarialReport:
    """Search all robber strategies against the deterministic guard (+ helper).

    Every robber start is tried.  Reports whether the robber can keep ``f < 0``
    forever (a loop among negative states), the longest number of rounds it can
    keep ``f < 0`` otherwise, and any breach from a state with ``f >= 0``.
    """
    G, D = arena.G, arena.D
    c0 = min(arena.R) if cop_start is None else cop_start
    helper = forcing == "helper"
    p0 = (c0 if helper_start is None else helper_start) if helper else -1
    hv = arena.H.vertex_set

    def successors(state):
        c, r, p = state
        f = arena.potential(c, r)
        out = []
        for r2 in sorted(G.closed(r)):
            if forcing == "restless" and r2 == r:
                continue
            if r2 == c or r2 == p:
                continue
            if f >= 0 and r2 in hv and r2 not in G.closed(c):
                out.append(("breach", (c, r, r2)))
                continue
            c2, case = guard_move(arena, c, r2, f)
            if c2 == r2:
                continue
            p2 = helper_step(G, D, p, r2) if helper else -1
            if p2 == r2:
                continue
            out.append(("move", (c2, r2, p2)))
        return out

    starts = [(c0, r, p0) for r in G.vertices if r != c0 and r != p0]
    seen = set(starts)
    order = deque(starts)
    edges: dict = {}
    breaches = []
    while order:
        s = order.popleft()
        nxt = []
        for kind, item in successors(s):
            if kind == "breach":
                breaches.append(item)
                continue
            nxt.append(item)
            if item not in seen:
                seen.add(item)
                order.append(item)
        edges[s] = nxt
    # longest stay among negative-potential states
    neg = {s for s in seen if arena.potential(s[0], s[1]) < 0}
    depth: dict = {}
    loops = False
    for root in sorted(neg):
        if root in depth:
            continue
        stack = [(root, iter(edges[root]))]
        onstack = {root}
        while stack:
            s, it = stack[-1]
            pushed = False
            for t in it:
                if t not in neg:
                    continue
                if t in onstack:
                    loops = True
                    continue
                if t not in depth:
                    stack.append((t, iter(edges[t])))
                    onstack.add(t)
                    pushed = True
                    break
            if pushed:
                continue
            stack.pop()
            onstack.discard(s)
            depth[s] = 1 + max((depth.get(t, 0) for t in edges[s] if t in neg and t in depth), default=0)
    longest = max((depth[s] for s in starts if s in depth), default=0)
    return AdversarialReport(loops, longest, check_monotone(arena), breaches, len(seen))


# --------------------------------------------------------------------------- guard game


@dataclass
class GuardGameResult:
    winner: str
    cop_winning_region: set
    winning_starts: list
    robber_strategy: dict | None = None

    def to_json(self) -> dict:
        return {
            "winner": self.winner,
            "winning_starts": self.winning_starts,
            "cop_region_size": len(self.cop_winning_region),
        }


def _attractor(target: set, owner: dict, succ: dict, pred: dict, alive: set, player: str) -> set:
    """States of ``alive`` from which ``player`` forces a visit to ``target``."""
    attr = set(target & alive)
    count = {s: sum(1 for t in succ[s] if t in alive) for s in alive}
    queue = deque(attr)
    while queue:
        t = queue.popleft()
        for s in pred[t]:
            if s not in alive or s in attr:
                continue
            if owner[s] == player:
                attr.add(s)
                queue.append(s)
            else:
                count[s] -= 1
                if count[s] == 0:
                    attr.add(s)
                    queue.append(s)
    return attr


def solve_guard_game(G: Graph, H: SubgraphView, cop_region=None, D: DistanceMatrix | None = None) -> GuardGameResult:
    """Decide whether one cop confined to ``cop_region`` guards H.

    States are (cop, robber, side to move).  The robber ending a move on
    V(H) minus N[cop] is a breach; ending it on N[cop] inside H (or on the cop)
    loses at once.  The cop wins when breaches can be made to happen only
    finitely often.  The robber's Buchi objective is solved by the classical
    iterated-attractor algorithm; the cop picks a start first, then the robber.
    """
    D = all_pairs_distances(G) if D is None else D
    w = is_isometric(H, D)
    if w is not True:
        raise NotIsometric(f"a guarded subgraph must be isometric: {w}")
    hv = H.vertex_set
    region = sorted(hv if cop_region is None else set(cop_region))
    if not region or not set(region) <= hv:
        raise PreconditionError("cop region must be a nonempty subset of V(H)")
    SINK = ("sink",)
    owner: dict = {SINK: "cop"}
    succ: dict = {SINK: [SINK]}
    breach: set = set()
    for c in region:
        for r in G.vertices:
            cop_s = (c, r, "cop")
            rob_s = (c, r, "robber")
            owner[cop_s] = "cop"
            owner[rob_s] = "robber"
            if r == c:
                succ[cop_s] = [SINK]
                succ[rob_s] = [SINK]
                continue
            succ[cop_s] = [SINK if c2 == r else (c2, r, "robber")
                           for c2 in sorted(G.closed(c)) if c2 in set(region)]
            moves = []
            for r2 in sorted(G.closed(r)):
                if r2 == c or (r2 in hv and r2 in G.closed(c)):
                    moves.append(SINK)
                else:
                    moves.append((c, r2, "cop"))
            succ[rob_s] = moves
            if r in hv and r not in G.closed(c):
                breach.add(cop_s)
    pred: dict = {s: [] for s in succ}
    for s, ts in succ.items():
        for t in ts:
            pred[t].append(s)
    alive = set(succ)
    cop_win: set = set()
    while True:
        reach = _attractor(breach, owner, succ, pred, alive, "robber")
        trap = alive - reach
        lost = _attractor(trap, owner, succ, pred, alive, "cop")
        if not lost:
            break
        cop_win |= lost
        alive -= lost
    robber_win = alive
    starts = [c for c in region if all((c, r, "cop") in cop_win for r in G.vertices)]
    strategy = None
    if not starts:
        strategy = {}
        for s in robber_win:
            if owner[s] == "robber":
                for t in succ[s]:
                    if t in robber_win:
                        strategy[s] = t
                        break
    return GuardGameResult("cop" if starts else "robber", cop_win, starts, strategy)
