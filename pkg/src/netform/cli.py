"""Command-line front end.

Exit codes: 0 when every requested check holds, 1 when a check fails,
2 for bad input (parse errors, refused sizes, refused constructions).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import experiments as ex
from .analysis import (BudgetExceeded, ConstructionRefused, both_modes_report, is_stable, path_lemma2,
                       path_prop2_line, path_prop2_star, path_theorem2,
                       prop3_report, prop4_report, reachable_sets, theorem1_check, unstable_pairs)
from .analysis.reach import MAX_EXHAUSTIVE_N
from .beliefs import information_complete
from .dynamics import GameState, Mode, run
from .graph import Network, classify
from .payoff import PRESETS
from .scenario import ScenarioError, load_path, load_scenario

OK, FAIL, BAD_INPUT = 0, 1, 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _mode(args, scen) -> Mode:
    if args.mode:
        return Mode.parse(args.mode)
    return scen.mode or Mode.SIMPLE


def _classes(net: Network) -> list[str]:
    return sorted(c.value for c in classify(net))


def cmd_replay(args) -> int:
    scen = load_scenario(args.scenario)
    mode = _mode(args, scen)
    game = scen.game(mode)
    if args.path:
        path = load_path(args.path, scen.n_agents)
    elif scen.path is not None:
        path = list(scen.path)
    else:
        raise ScenarioError("no selection path: pass --path or put \"path\" in the scenario")
    start = GameState.initial(game, scen.network)
    hist = run(start, path)
    lines = []
    for rec in hist.records:
        o = rec.outcome
        verb = "formed" if o.changed and o.link_after else "severed" if o.changed else "unchanged"
        lines.append(f"t={rec.period:<3d} pair={rec.pair[0]},{rec.pair[1]} a_ij={int(o.a_ij)} a_ji={int(o.a_ji)} "
                     f"{verb:<9s} links={len(rec.network.links)}")
    final = hist.final
    stable = is_stable(hist.final_state)
    info = information_complete(hist.final_state.beliefs)
    lines.append(f"final: {', '.join(_classes(final))}; {len(final.links)} links; "
                 f"{'stable' if stable else 'not stable'}; information {'complete' if info else 'incomplete'}")
    lines.append("links: " + " ".join(f"{i}-{j}" for i, j in final.sorted_links()))
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "history.jsonl").write_text(hist.to_jsonl())
        (out / "final.edges").write_text(final.to_edgelist())
    failed = _check_expectations(scen.expect, final, stable, info)
    for msg in failed:
        sys.stdout.write(f"EXPECTATION FAILED: {msg}\n")
    return FAIL if failed else OK


def _check_expectations(expect: dict, net: Network, stable: bool, info: bool) -> list[str]:
    bad = []
    if "n_links" in expect and len(net.links) != expect["n_links"]:
        bad.append(f"n_links {len(net.links)} != {expect['n_links']}")
    if "links" in expect:
        want = sorted(tuple(sorted(p)) for p in expect["links"])
        if want != net.sorted_links():
            bad.append(f"links {net.sorted_links()} != {want}")
    if "stable" in expect and stable != expect["stable"]:
        bad.append(f"stable {stable} != {expect['stable']}")
    if "information_complete" in expect and info != expect["information_complete"]:
        bad.append(f"information_complete {info} != {expect['information_complete']}")
    if "classes" in expect:
        have = set(_classes(net))
        missing = set(expect["classes"]) - have
        if missing:
            bad.append(f"classes {sorted(have)} lack {sorted(missing)}")
    return bad


def _n_values(spec: str) -> tuple[int, ...]:
    a, sep, b = spec.partition("..")
    if sep:
        return tuple(range(int(a), int(b) + 1))
    return tuple(int(x) for x in spec.split(","))


def cmd_montecarlo(args) -> int:
    kappa = None
    if args.scenario in PRESETS:
        preset = PRESETS[args.scenario]
        n_values = _n_values(args.n)
    else:
        scen = load_scenario(args.scenario)
        preset = scen.preset
        if scen.kappa is not None and not args.sample:
            kappa, n_values = scen.kappa, (scen.n_agents,)
        else:
            n_values = _n_values(args.n) if args.n else (scen.n_agents,)
    mode = Mode.parse(args.mode or "simple")
    cfg = ex.ExperimentConfig(preset, mode, n_values, args.runs, args.seed, args.horizon, kappa, args.workers)
    _emit(ex.stats_to_csv(cfg, ex.montecarlo(cfg)), args.out)
    return OK


def cmd_enumerate(args) -> int:
    scen = load_scenario(args.scenario)
    if scen.n_agents > MAX_EXHAUSTIVE_N:
        sys.stderr.write(f"refusing exhaustive enumeration at N={scen.n_agents}: limit is {MAX_EXHAUSTIVE_N}\n")
        return BAD_INPUT
    game = scen.game(_mode(args, scen))
    if args.check_theorem1:
        rep = theorem1_check(game)
        rep["verdict"] = "inclusions hold" if rep["holds"] else "violations found"
        _emit(_dump(rep), args.out)
        sys.stderr.write(rep["verdict"] + "\n")
        return OK if rep["holds"] else FAIL
    _emit(_dump(reachable_sets(game).to_json()), args.out)
    return OK


def cmd_figures(args) -> int:
    which = ex.FIGURES if args.which == "all" else (args.which,)
    out = Path(args.out or "figures")
    status = OK
    for w in which:
        kw = {"seed": args.seed, "runs": args.runs, "workers": args.workers}
        if w == "fig2":
            kw["preset"] = PRESETS[args.preset]
        verdict = ex.write_figure(w, out, **kw)
        sys.stdout.write(f"{w}: {'ok' if verdict['ok'] else 'FAILED'}\n")
        if not verdict["ok"]:
            status = FAIL
    return status


def cmd_construct(args) -> int:
    scen = load_scenario(args.scenario)
    kind = args.kind
    if kind == "theorem2":
        if scen.network is None:
            raise ScenarioError("theorem2 needs a \"network\" in the scenario")
        path = path_theorem2(scen.network)
        game = scen.game(Mode.SIMPLE)
        rep = both_modes_report(game, path)
        rep["target"] = [list(p) for p in scen.network.sorted_links()]
        rep["reached"] = rep["incomplete"]["links"] == rep["target"]
        rep["path"] = [list(p) for p in path]
        _emit(_dump(rep), args.out)
        return OK if rep["reached"] else FAIL
    if kind == "prop4":
        game = scen.game(Mode.BAYES)
        rep = prop4_report(game, args.agent, args.m)
        _emit(_dump(rep), args.out)
        return OK if rep["first_m_below_cost"] is not None else FAIL
    game = scen.game(Mode.SIMPLE)
    if kind == "prop3":
        base = list(scen.path) if scen.path else None
        if base is None:
            raise ScenarioError("prop3 needs the complete-information base path as \"path\"")
        rep = prop3_report(game, base)
        _emit(_dump(rep), args.out)
        return OK
    gen = {"lemma2": path_lemma2, "prop2-star": path_prop2_star, "prop2-line": path_prop2_line}[kind]
    path = gen(game)
    rep = both_modes_report(game, path)
    rep["path"] = [list(p) for p in path]
    _emit(_dump(rep), args.out)
    if kind == "lemma2":
        good = rep["complete"]["converged"] and rep["incomplete"]["converged"]
    else:
        good = rep["difference"] == "Maximal"
    return OK if good else FAIL


def cmd_stable_check(args) -> int:
    scen = load_scenario(args.scenario)
    n = scen.n_agents
    if args.network:
        net = Network.from_edgelist(n, Path(args.network).read_text())
    else:
        net = scen.network if scen.network is not None else Network.empty(n)
    game = scen.game(_mode(args, scen))
    if game.mode is Mode.BAYES:
        raise ScenarioError("stable-check takes complete or simple mode; Bayesian states need a history")
    state = GameState.informed(game, net) if args.informed else GameState.initial(game, net)
    bad = unstable_pairs(state)
    rep = {"mode": game.mode.value, "links": [list(p) for p in net.sorted_links()],
           "classes": _classes(net), "stable": not bad, "unstable_pairs": [list(p) for p in bad]}
    _emit(_dump(rep), args.out)
    return OK if not bad else FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netform", description="Network formation under incomplete information.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, scenario=True):
        if scenario:
            sp.add_argument("--scenario", required=True,
                            help="scenario JSON file, or PRESET:TYPES such as P1:bbbbb")
        sp.add_argument("--mode", help="complete, simple or bayes")
        sp.add_argument("--out", help="output file (or directory for replay/figures)")

    sp = sub.add_parser("replay", help="run a scripted selection path")
    common(sp)
    sp.add_argument("--path", help="path file, one 'i j' pair per line")
    sp.set_defaults(func=cmd_replay)

    sp = sub.add_parser("montecarlo", help="seeded random-path sweep, CSV out")
    common(sp)
    sp.add_argument("--n", default="5..12", help="agent counts, '5..12' or '5,8,12'")
    sp.add_argument("--runs", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--horizon", type=int, help="periods per run (default 5N(N-1))")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--sample", action="store_true", help="sample types per run even if the scenario pins them")
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("enumerate", help="exhaustive reachability report (N <= 6)")
    common(sp)
    sp.add_argument("--check-theorem1", action="store_true", help="check the emergent/stable inclusions")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("figures", help="write figure data and verdicts")
    sp.add_argument("which", choices=ex.FIGURES + ("all",))
    sp.add_argument("--out", help="output directory (default ./figures)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--runs", type=int, default=500)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--preset", default="P1", choices=sorted(PRESETS), help="parameter set for fig2")
    sp.set_defaults(func=cmd_figures)

    sp = sub.add_parser("construct", help="emit and verify a constructive selection path")
    sp.add_argument("kind", choices=("lemma2", "prop2-star", "prop2-line", "prop3", "prop4", "theorem2"))
    common(sp)
    sp.add_argument("--agent", type=int, default=1, help="prop4: the agent whose type is learned")
    sp.add_argument("--m", type=int, default=2, help="prop4: number of low-value partners")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("stable-check", help="is a network stable, and which pairs would act")
    common(sp)
    sp.add_argument("--network", help="edge-list file; defaults to the scenario's network")
    sp.add_argument("--informed", action="store_true", help="assume every agent knows every type")
    sp.set_defaults(func=cmd_stable_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, ConstructionRefused, BudgetExceeded, ValueError) as e:
        sys.stderr.write(f"error: {e}\n")
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
