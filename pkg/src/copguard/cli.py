"""Command-line entry point.

Commands: gen, check, guard, simulate, copnum, verify-mgp.  Every command
prints one JSON report (schema ``copguard.report/1``) to stdout or to
``--report``.  Exit codes: 0 verdict matches ``--expect`` (or none given),
1 mismatch, 2 usage or input error, 3 state budget exhausted.

Reports leave out wall-clock timings unless ``--timing`` is passed, so equal
inputs give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .characterize import (
    Inconclusive,
    check_p1,
    check_p2,
    exists_p3_R,
    find_backbone,
    find_guard_set,
    is_block_graph,
    is_extended_block_graph,
)
from .copnumber import DEFAULT_STATE_BUDGET, BudgetExceeded, solve_k_cops
from .families import (
    figure1_instance,
    figure2_block,
    figure2_extended,
    figure2_vertebrate,
    gen_gp,
    gen_mgp,
    petersen,
    random_block_graph,
    random_path_arena,
    vertebrate_arena,
)
from .graph import (
    DisconnectedError,
    Graph,
    GraphError,
    PreconditionError,
    all_pairs_distances,
    format_graph,
    is_dismantlable,
    is_isometric,
    read_graph,
)

SCHEMA = "copguard.report/1"
EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("copguard")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------- inputs


def _fixture(name: str) -> tuple[Graph, tuple[int, ...] | None]:
    """Named built-in graph plus its highlighted vertex set (if any)."""
    if name == "figure1":
        g, h = figure1_instance()
        return g, h.vertices
    if name == "figure2-block":
        return figure2_block(), None
    if name == "figure2-extended":
        return figure2_extended(), None
    if name == "figure2-vertebrate":
        g, _ = figure2_vertebrate()
        return g, tuple(g.vertices)
    if name == "petersen":
        return petersen(), None
    raise UsageError(f"--fixture: unknown fixture {name!r} (choose from {', '.join(FIXTURES)})")


FIXTURES = ("figure1", "figure2-block", "figure2-extended", "figure2-vertebrate", "petersen")


def _ints(text: str, flag: str, count: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"{flag}: expected integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"{flag}: expected {count} integers, got {text!r}")
    return vals


def read_vertex_set(path) -> tuple[int, ...]:
    """Whitespace- or comma-separated vertex ids; ``#`` starts a comment."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read vertex set {path}: {exc.strerror}") from None
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    return tuple(sorted(set(_ints(body, str(path)))))


def _load_graph(args) -> tuple[Graph, tuple[int, ...] | None]:
    sources = [s for s in ("graph", "fixture") if getattr(args, s, None)]
    if len(sources) != 1:
        raise UsageError("give exactly one input: a graph file or --fixture")
    if args.fixture:
        g, hv = _fixture(args.fixture)
    else:
        try:
            g = read_graph(args.graph)
        except OSError as exc:
            raise UsageError(f"cannot read graph {args.graph}: {exc.strerror}") from None
        except (GraphError, ValueError) as exc:
            raise UsageError(f"{args.graph}: {exc}") from None
        hv = None
    if getattr(args, "h", None) and getattr(args, "subgraph", None):
        raise UsageError("give H once: --h FILE or --subgraph LIST")
    if getattr(args, "h", None):
        hv = read_vertex_set(args.h)
    elif getattr(args, "subgraph", None):
        hv = tuple(sorted(set(_ints(args.subgraph, "--subgraph"))))
    if hv is not None:
        bad = [v for v in hv if not 0 <= v < g.n]
        if bad:
            raise UsageError(f"--h: vertices {bad} outside 0..{g.n - 1}")
    return g, hv


# --------------------------------------------------------------------------- commands


def cmd_gen(args) -> dict:
    kinds = [k for k in ("mgp", "gp", "fixture", "random_block", "vertebrate", "path_arena")
             if getattr(args, k) is not None]
    if len(kinds) != 1:
        raise UsageError("gen: give exactly one of --mgp, --gp, --fixture, --random-block, --vertebrate, --path-arena")
    kind = kinds[0]
    hv = None
    extra: dict = {}
    if kind == "mgp":
        n, k, t = _ints(args.mgp, "--mgp", 3)
        g, lab = gen_mgp(n, k, t)
        extra["labeling"] = "id = layer * n + index"
        if args.labels_out:
            Path(args.labels_out).write_text(lab.format())
            extra["labels_output"] = args.labels_out
        if k in (2, 3):
            hv = tuple(sorted(v for i in range(1, k + 1) for v in lab.column(i)))
    elif kind == "gp":
        n, k = _ints(args.gp, "--gp", 2)
        g, _ = gen_gp(n, k)
    elif kind == "fixture":
        g, hv = _fixture(args.fixture)
    elif kind == "random_block":
        g = random_block_graph(args.random_block, args.size)
    elif kind == "vertebrate":
        g, h, B = vertebrate_arena(args.vertebrate, args.host_max)
        hv = h.vertices
        extra["backbone"] = list(B)
    else:
        g, h = random_path_arena(args.path_arena, args.host_max)
        hv = h.vertices
    text = format_graph(g, f"generated by copguard gen ({kind})")
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if hv is not None and args.h_out:
        Path(args.h_out).write_text(" ".join(map(str, hv)) + "\n")
    return {"verdict": "generated", "n": g.n, "m": g.m, "output": args.output,
            "h": None if hv is None else list(hv), "h_output": args.h_out, **extra}


def _holds(res) -> tuple[bool, dict | None]:
    if res is True:
        return True, None
    return False, res.to_json()


def cmd_check(args) -> dict:
    if args.suite:
        return _small_suite(args.suite)
    g, hv = _load_graph(args)
    prop = args.property
    dist = all_pairs_distances(g)
    if not dist.connected and prop not in ("block", "isometric"):
        raise UsageError(f"check --property {prop} needs a connected graph")
    out: dict = {"property": prop}
    if prop == "p1":
        holds, wit = _holds(check_p1(g, dist))
    elif prop == "p2":
        holds, wit = _holds(check_p2(g, dist))
    elif prop == "p3":
        R = exists_p3_R(g, dist)
        holds, wit = R is not None, None
        out["R"] = None if R is None else sorted(R)
    elif prop == "block":
        holds, wit = _holds(is_block_graph(g))
    elif prop == "extended":
        ok, info = is_extended_block_graph(g)
        holds = ok
        wit = None if ok else info.to_json()
        if ok:
            out["joint_blocks"] = [sorted(b) for b in info.joint_blocks]
    elif prop == "vertebrate":
        try:
            cert = find_backbone(g, dist)
        except Inconclusive as exc:
            out.update(verdict="inconclusive", holds=None, detail=str(exc))
            return out
        holds, wit = cert is not None, None
        out["certificate"] = None if cert is None else cert.to_json()
    elif prop == "dismantlable":
        holds, order = is_dismantlable(g)
        wit = None
        out["order"] = order
    elif prop == "isometric":
        if hv is None:
            raise UsageError("check --property isometric needs --h (or a fixture with H)")
        res = is_isometric(g.induced(hv), dist)
        holds = res is True
        wit = None if holds else {"u": res.u, "v": res.v, "internal": res.internal, "parent": res.parent}
    else:  # argparse restricts the choices
        raise UsageError(f"--property: unknown {prop!r}")
    out.update(verdict="holds" if holds else "fails", holds=holds, witness=wit)
    return out


def _small_suite(name: str) -> dict:
    """Cross-check the characterizations on every connected graph up to 7
    vertices (one per isomorphism class)."""
    from .small import connected_graphs_upto

    if name != "small7":
        raise UsageError(f"--suite: unknown suite {name!r}")
    counts = {"p1_vs_block": 0, "p2_vs_extended": 0, "p3_vs_vertebrate": 0, "copwin_vs_dismantlable": 0}
    examples: dict = {key: [] for key in counts}
    graphs = connected_graphs_upto(7)
    for g in graphs:
        dist = all_pairs_distances(g)
        pairs = {
            "p1_vs_block": (check_p1(g, dist) is True, is_block_graph(g) is True),
            "p2_vs_extended": (check_p2(g, dist) is True, is_extended_block_graph(g)[0]),
            "p3_vs_vertebrate": (exists_p3_R(g, dist) is not None, find_backbone(g, dist) is not None),
            "copwin_vs_dismantlable": (solve_k_cops(g, 1).cop_win, is_dismantlable(g)[0]),
        }
        for key, (a, b) in pairs.items():
            if a != b:
                counts[key] += 1
                if len(examples[key]) < 3:
                    examples[key].append(g.edges())
    total = sum(counts.values())
    return {"suite": name, "graphs": len(graphs), "disagreements": counts, "examples": examples,
            "verdict": "agree" if total == 0 else "disagree", "holds": total == 0}


def _arena(args):
    from .graph import SubgraphView
    from .guard import GuardArena

    g, hv = _load_graph(args)
    if hv is None:
        raise UsageError("this command needs H: --h FILE or a fixture that defines H")
    h = SubgraphView(g, tuple(hv))
    D = all_pairs_distances(g)
    if args.r:
        R = read_vertex_set(args.r)
    else:
        loc = h.local()
        try:
            cert = find_backbone(loc)
        except Inconclusive:
            cert = None
        local_r = None
        if cert is not None:
            local_r = cert.R if cert.R is not None else find_guard_set(loc, all_pairs_distances(loc), cert.B)
        R = tuple(h.vertices[i] for i in local_r) if local_r else tuple(h.vertices)
    return g, h, D, R, GuardArena


def cmd_guard(args) -> dict:
    from .guard import GuardStrategyError, NotIsometric, adversarial_guard, check_monotone, solve_guard_game

    if args.mode == "simulate":
        return cmd_simulate(args)
    g, h, D, R, GuardArena = _arena(args)
    out: dict = {"mode": args.mode, "H": list(h.vertices), "R": list(R)}
    try:
        if args.mode == "solve":
            res = solve_guard_game(g, h, None if args.region_all else R, D)
            out.update(res.to_json())
            out["verdict"] = res.winner
        else:
            arena = GuardArena(g, h, R, D)
            if args.mode == "monotone":
                fails = check_monotone(arena)
                out.update(failures=[list(f) for f in fails], verdict="monotone" if not fails else "violated")
            else:
                rep = adversarial_guard(arena, args.forcing)
                out.update(loops=rep.loops, max_rounds_to_guard=rep.max_rounds_to_guard,
                           monotone_failures=[list(f) for f in rep.monotone_failures],
                           breaches=[list(b) for b in rep.breaches], states=rep.states,
                           round_limit=g.n ** 2,
                           verdict="guarded" if rep.ok and rep.max_rounds_to_guard <= g.n ** 2 else "failed")
    except NotIsometric as exc:
        out.update(verdict="not-isometric", detail=str(exc))
    except GuardStrategyError as exc:
        out.update(verdict="no-strategy", detail=str(exc))
    return out


def cmd_simulate(args) -> dict:
    from .guard import GuardStrategyError, greedy_policy, simulate_guard, stay_policy

    g, h, D, R, GuardArena = _arena(args)
    arena = GuardArena(g, h, R, D)
    policy = {"greedy": greedy_policy, "stay": stay_policy}[args.robber]
    if not 0 <= args.robber_start < g.n:
        raise UsageError(f"--robber-start: {args.robber_start} outside 0..{g.n - 1}")
    try:
        trace = simulate_guard(arena, policy, args.forcing, args.rounds,
                               cop_start=args.cop_start, robber_start=args.robber_start)
    except GuardStrategyError as exc:
        return {"verdict": "no-strategy", "detail": str(exc), "H": list(h.vertices), "R": list(R)}
    tj = trace.to_json()
    out = {"verdict": trace.outcome, "guarded_at": trace.guarded_at, "rounds": len(trace.states) - 1,
           "H": list(h.vertices), "R": list(R)}
    if args.trace:
        Path(args.trace).write_text(json.dumps(tj, indent=2, sort_keys=True) + "\n")
        out["trace_path"] = args.trace
    else:
        out["trace"] = tj
    if args.plot:
        from .plotting import draw_graph, plot_potential

        d = Path(args.plot)
        d.mkdir(parents=True, exist_ok=True)
        last = trace.states[-1]
        out["figures"] = [
            plot_potential(tj["rounds"], d / "potential.png", guarded_at=trace.guarded_at),
            draw_graph(g, d / "arena.png", h.vertices, cops=[last.c], robber=last.r,
                       title="final position"),
        ]
    return out


def _graph_for_copnum(args) -> Graph:
    if args.mgp:
        n, k, t = _ints(args.mgp, "--mgp", 3)
        if args.graph or args.fixture:
            raise UsageError("give exactly one input: a graph file, --fixture or --mgp")
        return gen_mgp(n, k, t)[0]
    return _load_graph(args)[0]


def cmd_copnum(args) -> dict:
    g = _graph_for_copnum(args)
    if not g.is_connected():
        raise UsageError("copnum needs a connected graph")
    tables = []
    number: int | str = f">{args.max_cops}"
    for k in range(1, args.max_cops + 1):
        table = solve_k_cops(g, k, args.budget)
        tables.append(table.to_json())
        if table.cop_win:
            number = k
            break
    return {"verdict": number, "cop_number": number, "n": g.n, "games": tables}


def cmd_verify_mgp(args) -> dict:
    from .mgp import verify_mgp_theorem

    rep = verify_mgp_theorem(args.n, args.k, args.t, args.method, args.budget)
    out = rep.to_json()
    sc = out.get("scripted") or {}
    if args.trace:
        side = {"two_cop_trace": (out.get("exact") or {}).pop("two_cop_trace", None),
                "scripted_failure_trace": sc.pop("failure_trace", None)}
        Path(args.trace).write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
        out["trace_path"] = args.trace
    if args.plot:
        from .mgp import MgpScriptedStrategy, certify_scripted
        from .plotting import plot_capture_profile, plot_mgp

        d = Path(args.plot)
        d.mkdir(parents=True, exist_ok=True)
        g, lab = gen_mgp(args.n, args.k, args.t)
        hv = [v for i in range(1, args.k + 1) for v in lab.column(i)] if args.k in (2, 3) else []
        figs = []
        cops = ()
        if rep.scripted is not None and args.k in (2, 3) and rep.scripted.get("reason") is None:
            cops = MgpScriptedStrategy(args.n, args.k, args.t).start()
        figs.append(plot_mgp(g, lab, hv, d / "mgp.png", cops=cops))
        if rep.scripted and rep.scripted["certified"]:
            depths = certify_scripted(args.n, args.k, args.t).start_depths
            figs.append(plot_capture_profile(depths, d / "capture_profile.png"))
        out["figures"] = figs
    return out


# --------------------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="copguard", description="Cops-and-robber guarding and cop-number tools.")
    p.add_argument("--version", action="version", version=f"copguard {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", help="write the JSON report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_inputs(sp, with_h=True):
        sp.add_argument("graph", nargs="?", help="graph file in the p/e text format")
        sp.add_argument("--fixture", choices=FIXTURES)
        if with_h:
            sp.add_argument("--h", help="file with the vertex ids of H")
            sp.add_argument("--subgraph", help="vertex ids of H, comma separated")

    def sim_options(sp):
        sp.add_argument("--r", help="file with the guard set R (default: from a backbone certificate)")
        sp.add_argument("--forcing", choices=("helper", "restless"), default="helper")
        sp.add_argument("--robber", choices=("greedy", "stay"), default="greedy")
        sp.add_argument("--max-rounds", "--rounds", dest="rounds", type=int, default=100)
        sp.add_argument("--cop-start", type=int)
        sp.add_argument("--robber-start", type=int, default=0)
        sp.add_argument("--trace", help="write the round-by-round trace here")
        sp.add_argument("--plot", metavar="DIR", help="render figures into DIR")

    g = sub.add_parser("gen", parents=[common], help="generate a graph")
    g.add_argument("--mgp", help="n,k,t")
    g.add_argument("--gp", help="n,k")
    g.add_argument("--fixture", choices=FIXTURES)
    g.add_argument("--random-block", type=int, metavar="SEED")
    g.add_argument("--size", type=int, default=10, help="vertex budget for --random-block")
    g.add_argument("--vertebrate", type=int, metavar="SEED", help="random vertebrate arena (G and H)")
    g.add_argument("--path-arena", type=int, metavar="SEED", help="random host with H a shortest path")
    g.add_argument("--host-max", type=int, default=25)
    g.add_argument("-o", "--output", help="graph file (stdout if omitted)")
    g.add_argument("--h-out", help="write the vertex set of H here")
    g.add_argument("--labels-out", help="write MGP coordinates as 'v <id> <j> <i>' lines")

    c = sub.add_parser("check", parents=[common], help="test a structural property")
    graph_inputs(c)
    c.add_argument("--property", choices=("p1", "p2", "p3", "block", "extended", "vertebrate",
                                          "dismantlable", "isometric"), default="p1")
    c.add_argument("--suite", help="run a built-in cross-check suite (small7)")
    c.add_argument("--expect", choices=("true", "false"))

    gd = sub.add_parser("guard", parents=[common], help="decide or verify 1-guardability of H")
    graph_inputs(gd)
    sim_options(gd)
    gd.add_argument("--mode", choices=("solve", "adversarial", "monotone", "simulate"), default="solve")
    gd.add_argument("--region-all", action="store_true", help="solve with the cop free on all of V(H)")
    gd.add_argument("--expect", choices=("cop", "robber", "guarded", "monotone", "captured", "breach",
                                         "budget-exhausted"))

    s = sub.add_parser("simulate", parents=[common], help="play the guard rule against a robber policy")
    graph_inputs(s)
    sim_options(s)
    s.add_argument("--expect", choices=("captured", "guarded", "breach", "budget-exhausted"))

    cn = sub.add_parser("copnum", parents=[common], help="exact cop number up to --max-cops")
    graph_inputs(cn, with_h=False)
    cn.add_argument("--mgp", help="n,k,t instead of a file")
    cn.add_argument("--max-cops", type=int, default=3)
    cn.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    cn.add_argument("--expect")

    vm = sub.add_parser("verify-mgp", parents=[common], help="check that MGP(n,k,t) has cop number 3")
    vm.add_argument("--n", type=int, required=True)
    vm.add_argument("--k", type=int, required=True)
    vm.add_argument("--t", type=int, required=True)
    vm.add_argument("--method", choices=("exact", "scripted", "both"), default="both")
    vm.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET)
    vm.add_argument("--trace", help="write 2-cop and scripted-failure traces here")
    vm.add_argument("--plot", metavar="DIR", help="render figures into DIR")
    vm.add_argument("--expect")
    return p


COMMANDS = {
    "gen": cmd_gen,
    "check": cmd_check,
    "guard": cmd_guard,
    "simulate": cmd_simulate,
    "copnum": cmd_copnum,
    "verify-mgp": cmd_verify_mgp,
}


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "elapsed"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _matches(verdict, holds, expect) -> bool:
    if expect in ("true", "false"):
        return holds is (expect == "true")
    return str(verdict) == expect


def run(argv=None) -> tuple[int, dict | None]:
    """Parse ``argv``, run the command and return (exit code, report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    argv_echo = list(sys.argv[1:] if argv is None else argv)
    report = {"schema": SCHEMA, "version": __version__, "command": argv_echo}
    try:
        body = COMMANDS[args.command](args)
        code = EXIT_OK
    except UsageError as exc:
        print(f"copguard: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except (GraphError, DisconnectedError, PreconditionError) as exc:
        print(f"copguard: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except BudgetExceeded as exc:
        body = {"verdict": "budget-exceeded", "states": exc.states, "budget": exc.budget}
        code = EXIT_BUDGET
    report.update(body)
    if not args.timing:
        report = _strip_timing(report)
    expect = getattr(args, "expect", None)
    if code == EXIT_OK and expect is not None:
        report["expect"] = expect
        if not _matches(report.get("verdict"), report.get("holds"), expect):
            code = EXIT_MISMATCH
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    elif args.command != "gen" or args.output:
        sys.stdout.write(text)
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
