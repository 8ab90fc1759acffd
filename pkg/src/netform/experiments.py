"""Seeded Monte Carlo sweeps and figure recipes."""
from __future__ import annotations

import csv
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .analysis import difference_class, is_stable
from .dynamics import Game, GameState, Mode, default_horizon, random_pair, run, step
from .graph import Network, classify, count_components, is_connected
from .payoff import P1, P2, P3, ParamSet, ValueClass, sample_kappa, value_class

CSV_SCHEMA = "netform-mc/1"
CSV_HEADER = ["schema", "mode", "preset", "seed", "n_agents", "runs", "horizon",
              "freq_low_linked", "ci_low", "ci_high", "ci_width", "mean_links", "mean_components"]
Z95 = 1.959963984540054


@dataclass(frozen=True)
class ExperimentConfig:
    preset: ParamSet
    mode: Mode
    n_values: tuple[int, ...]
    runs: int
    seed: int
    horizon: int | None = None  # None means 5N(N-1)
    kappa: tuple[str, ...] | None = None  # pinned type vector, else sampled per run
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.kappa is not None and any(len(self.kappa) != n for n in self.n_values):
            raise ValueError("a pinned type vector fixes N")

    def horizon_for(self, n: int) -> int:
        return self.horizon if self.horizon is not None else default_horizon(n)


@dataclass(frozen=True)
class RunSummary:
    kappa: str
    links: int
    components: int
    low_linked: bool
    degree_by_class: dict = field(default_factory=dict)


def run_seed(master: int, n: int, index: int) -> str:
    # string seeds hash through sha512, so streams are stable across platforms
    return f"{master}/{n}/{index}"


def simulate(game: Game, rng: random.Random, horizon: int) -> GameState:
    """Play ``horizon`` uniformly drawn periods and return the terminal state.

    Once a whole round's worth of draws has changed nothing the state is
    checked for stability; a stable state can never change again, so
    stopping there leaves the terminal network identical to the full run.
    Bayesian states are never cut short because their stability test is
    only operational.
    """
    n = game.params.n_agents
    st = GameState.initial(game)
    n_pairs = n * (n - 1) // 2
    can_stop = game.mode is not Mode.BAYES
    quiet = 0
    for _ in range(horizon):
        st, out = step(st, random_pair(rng, n))
        if out.changed:
            quiet = 0
            continue
        quiet += 1
        if can_stop and quiet % n_pairs == 0 and is_stable(st):
            break
    return st


def _one_run(args) -> RunSummary:
    preset, mode, n, horizon, seed, kappa = args
    rng = random.Random(seed)
    if kappa is None:
        kappa = sample_kappa(preset.space, n, rng)
    params = preset.params(n)
    game = Game(preset.space, params, kappa, mode)
    net = simulate(game, rng, horizon).network
    degs: dict[str, list[int]] = {c.value: [] for c in ValueClass}
    low_linked = False
    for i, k in enumerate(kappa, 1):
        cls = value_class(k, params, preset.space)
        degs[cls.value].append(net.degree(i))
        if cls is ValueClass.LOW and net.degree(i) > 0:
            low_linked = True
    mean_deg = {k: (sum(v) / len(v) if v else None) for k, v in degs.items()}
    return RunSummary("".join(kappa), len(net.links), count_components(net), low_linked, mean_deg)


def wald_ci(successes: int, n: int) -> tuple[float, float]:
    """Normal-approximation binomial interval, clipped to [0, 1]."""
    p = successes / n
    half = Z95 * math.sqrt(p * (1 - p) / n)
    return max(0.0, p - half), min(1.0, p + half)


@dataclass
class RunStatistics:
    n_agents: int
    runs: list[RunSummary]

    @property
    def freq_low_linked(self) -> float:
        return sum(r.low_linked for r in self.runs) / len(self.runs)

    @property
    def ci(self) -> tuple[float, float]:
        return wald_ci(sum(r.low_linked for r in self.runs), len(self.runs))

    @property
    def mean_links(self) -> float:
        return math.fsum(r.links for r in self.runs) / len(self.runs)

    @property
    def mean_components(self) -> float:
        return math.fsum(r.components for r in self.runs) / len(self.runs)


def montecarlo(cfg: ExperimentConfig) -> list[RunStatistics]:
    jobs = [(cfg.preset, cfg.mode, n, cfg.horizon_for(n), run_seed(cfg.seed, n, r), cfg.kappa)
            for n in cfg.n_values for r in range(cfg.runs)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            results = list(ex.map(_one_run, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    else:
        results = [_one_run(j) for j in jobs]
    out = []
    for k, n in enumerate(cfg.n_values):
        out.append(RunStatistics(n, results[k * cfg.runs:(k + 1) * cfg.runs]))
    return out


def _fmt(x: float) -> str:
    return repr(round(x, 12))


def stats_to_csv(cfg: ExperimentConfig, stats: Sequence[RunStatistics]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for s in stats:
        lo, hi = s.ci
        w.writerow([CSV_SCHEMA, cfg.mode.value, cfg.preset.name, cfg.seed, s.n_agents, len(s.runs),
                    cfg.horizon_for(s.n_agents), _fmt(s.freq_low_linked), _fmt(lo), _fmt(hi), _fmt(hi - lo),
                    _fmt(s.mean_links), _fmt(s.mean_components)])
    return buf.getvalue()


# ---------------------------------------------------------------- figures

EXAMPLE1_PATH = [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]
EXAMPLE2_PATH = [(1, 3), (1, 3), (2, 4), (2, 4), (1, 2), (3, 4), (4, 5), (2, 3), (1, 5)]
ALL_B5 = ("b",) * 5
FIG3_KAPPA = ("a",) * 8 + ("b",)
FIG3_PATH = ([(9, i) for i in range(1, 9)] + [(i, i + 1) for i in range(1, 8)] + [(8, 1)]
             + [(i, i + 4) for i in range(1, 5)])
# Path under which the three- and twelve-link networks appear; (6,7) and (2,5)
# replace two pairs that cannot be read literally.
FIG2_PATH = [(1, 2), (1, 3), (2, 6), (3, 7), (6, 7), (1, 5), (5, 9), (6, 9), (1, 4), (4, 8), (7, 8), (8, 9),
             (2, 5), (3, 5), (4, 5)]
FIG2_LINKS = {"complete": 3, "incomplete": 12}


def _links(net: Network) -> list[list[int]]:
    return [list(p) for p in net.sorted_links()]


def _edge_rows(tag: str, net: Network) -> list[list]:
    return [[tag, i, j] for i, j in net.sorted_links()]


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _replay_pair(preset: ParamSet, kappa: Sequence[str], path, modes=(Mode.COMPLETE, Mode.SIMPLE)):
    out = {}
    for m in modes:
        g = Game(preset.space, preset.params(len(kappa)), tuple(kappa), m)
        out[m] = run(GameState.initial(g), path)
    return out


def fig1() -> tuple[list[list], dict]:
    h = _replay_pair(P1, ALL_B5, EXAMPLE1_PATH)
    c, i = h[Mode.COMPLETE], h[Mode.SIMPLE]
    ring = Network.ring([1, 2, 3, 4, 5], 5)
    verdict = {
        "complete_empty_every_period": all(not n.links for n in c.networks()),
        "incomplete_is_ring": i.final == ring,
        "incomplete_classes": sorted(x.value for x in classify(i.final)),
        "incomplete_stable": is_stable(i.final_state),
        "complete_stable": is_stable(c.final_state),
    }
    verdict["ok"] = (verdict["complete_empty_every_period"] and verdict["incomplete_is_ring"]
                     and verdict["incomplete_stable"] and verdict["complete_stable"])
    rows = _edge_rows("complete", c.final) + _edge_rows("incomplete", i.final)
    return rows, verdict


def fig2_search(preset: ParamSet = P1, path=FIG2_PATH, n_a: int = 4, n: int = 9) -> list[dict]:
    """Every labeling with ``n_a`` agents of type a that gives the 3/12/disjoint picture."""
    hits = []
    for a_set in combinations(range(1, n + 1), n_a):
        kappa = tuple("a" if i in a_set else "b" for i in range(1, n + 1))
        h = _replay_pair(preset, kappa, path)
        gc, gi = h[Mode.COMPLETE].final, h[Mode.SIMPLE].final
        if (len(gc.links) == FIG2_LINKS["complete"] and len(gi.links) == FIG2_LINKS["incomplete"]
                and difference_class(gc, gi).value == "Maximal"):
            hits.append({"type_a": list(a_set), "complete": _links(gc), "incomplete": _links(gi)})
    return hits


def fig2(preset: ParamSet = P1) -> tuple[list[list], dict]:
    hits = fig2_search(preset)
    rows = []
    if hits:
        first = hits[0]
        rows = [["complete", i, j] for i, j in first["complete"]] + [["incomplete", i, j] for i, j in first["incomplete"]]
    verdict = {"preset": preset.name, "n_labelings": 126, "n_hits": len(hits),
               "hits": [h["type_a"] for h in hits], "ok": bool(hits)}
    return rows, verdict


def fig3() -> tuple[list[list], dict]:
    h = _replay_pair(P3, FIG3_KAPPA, FIG3_PATH)
    c, i = h[Mode.COMPLETE].final, h[Mode.SIMPLE].final
    verdict = {"complete_links": len(c.links), "incomplete_links": len(i.links),
               "incomplete_classes": sorted(x.value for x in classify(i)),
               "complete_stable": is_stable(h[Mode.COMPLETE].final_state),
               "incomplete_stable": is_stable(h[Mode.SIMPLE].final_state)}
    verdict["ok"] = verdict["complete_links"] == 12 and verdict["incomplete_links"] == 8
    return _edge_rows("complete", c) + _edge_rows("incomplete", i), verdict


def fig4(seed: int = 0, runs: int = 500, n_values=tuple(range(5, 13)), workers: int = 1):
    out = {}
    for m in (Mode.COMPLETE, Mode.SIMPLE):
        cfg = ExperimentConfig(P1, m, tuple(n_values), runs, seed, workers=workers)
        out[m] = (cfg, montecarlo(cfg))
    comp = [s.freq_low_linked for s in out[Mode.COMPLETE][1]]
    inc = [s.freq_low_linked for s in out[Mode.SIMPLE][1]]
    verdict = {"seed": seed, "runs": runs, "n_values": list(n_values),
               "complete_freq": comp, "incomplete_freq": inc,
               "complete_all_zero": all(x == 0.0 for x in comp),
               "incomplete_max": max(inc)}
    verdict["ok"] = verdict["complete_all_zero"] and verdict["incomplete_max"] > 0.5
    csv_text = "".join(stats_to_csv(cfg, st) if k == 0 else stats_to_csv(cfg, st).split("\n", 1)[1]
                       for k, (cfg, st) in enumerate(out.values()))
    return csv_text, verdict


def fig5() -> tuple[list[list], dict]:
    h = _replay_pair(P2, ALL_B5, EXAMPLE2_PATH, (Mode.SIMPLE, Mode.BAYES))
    s, b = h[Mode.SIMPLE], h[Mode.BAYES]
    rows = []
    for tag, hist in (("simple", s), ("bayes", b)):
        for rec in hist.records:
            rows.append([tag, rec.period, rec.pair[0], rec.pair[1], int(rec.outcome.link_after),
                         len(rec.network.links)])
    empty_from = next((t for t in range(len(b.records) + 1)
                       if all(not n.links for n in b.networks()[t:])), None)
    verdict = {"simple_connected": is_connected(s.final), "simple_stable": is_stable(s.final_state),
               "bayes_empty": not b.final.links, "bayes_empty_from_period": empty_from,
               "bayes_stable": is_stable(b.final_state)}
    verdict["ok"] = (verdict["simple_connected"] and verdict["simple_stable"] and verdict["bayes_empty"]
                     and empty_from is not None and empty_from <= 4 and verdict["bayes_stable"])
    return rows, verdict


FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5")


def write_figure(which: str, out_dir: Path, seed: int = 0, runs: int = 500, workers: int = 1,
                 preset: ParamSet = P1) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    if which == "fig4":
        text, verdict = fig4(seed, runs, workers=workers)
        (out_dir / "fig4.csv").write_text(text)
    elif which == "fig5":
        rows, verdict = fig5()
        _write_csv(out_dir / "fig5.csv", ["rule", "period", "i", "j", "link_after", "n_links"], rows)
    elif which == "fig2":
        rows, verdict = fig2(preset)
        _write_csv(out_dir / "fig2.csv", ["network", "i", "j"], rows)
    else:
        rows, verdict = {"fig1": fig1, "fig3": fig3}[which]()
        _write_csv(out_dir / f"{which}.csv", ["network", "i", "j"], rows)
    (out_dir / f"{which}_verdict.json").write_text(json.dumps(verdict, indent=2, sort_keys=True) + "\n")
    return verdict


__all__ = ["ExperimentConfig", "RunStatistics", "RunSummary", "montecarlo", "simulate", "stats_to_csv",
           "wald_ci", "run_seed", "fig1", "fig2", "fig2_search", "fig3", "fig4", "fig5", "write_figure",
           "FIGURES", "CSV_HEADER", "CSV_SCHEMA", "EXAMPLE1_PATH", "EXAMPLE2_PATH", "FIG2_PATH", "FIG3_PATH",
           "FIG3_KAPPA", "ALL_B5"]
