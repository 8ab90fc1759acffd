"""Selection paths built the way the existence proofs build them.

Generators only emit paths. Whether a path does what its proof claims is
checked by running the engine on it (see the ``*_report`` helpers), never
assumed.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from ..beliefs import posterior_expected_f
from ..dynamics import Game, GameState, Mode, run, step
from ..graph import Network, Pair, TopologyClass, classify
from ..payoff import ValueClass, agents_in_class, census, welfare
from .compare import difference_class
from .stability import is_stable

LOW, MED, HIGH = ValueClass.LOW, ValueClass.MEDIUM, ValueClass.HIGH


class ConstructionRefused(ValueError):
    """The requested construction's preconditions do not hold."""


def _classes(game: Game):
    k, p, s = game.kappa, game.params, game.space
    return (agents_in_class(k, p, s, LOW), agents_in_class(k, p, s, MED), agents_in_class(k, p, s, HIGH))


def _by_value(game: Game, agents: Sequence[int]) -> list[int]:
    # highest link value first, ties by id
    return sorted(agents, key=lambda i: (-game.truth[i], i))


def path_lemma2(game: Game) -> list[Pair]:
    """Path along which both information regimes converge.

    1. a hub (the most valuable non-low agent) meets every other non-low agent;
    2. the hub meets every low agent twice in a row;
    3. every pair of high agents meets once;
    4. every pair of low agents meets twice in a row.
    """
    low, med, high = _classes(game)
    path: list[Pair] = []
    non_low = _by_value(game, med + high)
    if non_low:
        hub = _by_value(game, high)[0] if high else non_low[0]
        path += [(hub, j) for j in sorted(non_low) if j != hub]
        for l in sorted(low):
            path += [(hub, l), (hub, l)]
        path += list(combinations(sorted(high), 2))
    for a, b in combinations(sorted(low), 2):
        path += [(a, b), (a, b)]
    return path


def prop2_star_threshold(game: Game) -> float:
    low, _, _ = _classes(game)
    c, d = game.params.cost, game.params.delta
    best_low = max(game.truth[i] for i in low)
    return (c - best_low) / (d * c) + 1


def path_prop2_star(game: Game) -> list[Pair]:
    """Star centred on the best low-value agent, followed by the Lemma 2 path."""
    low, med, high = _classes(game)
    if len(high) >= 2:
        raise ConstructionRefused("n_h >= 2: any pair of high-value agents must be linked in every stable network")
    if not low:
        raise ConstructionRefused("n_l = 0: both regimes evolve identically")
    need = prop2_star_threshold(game)
    if len(med) + len(high) < need:
        raise ConstructionRefused(f"n_m + n_h = {len(med) + len(high)} < (c - max low f)/(delta c) + 1 = {need:.6g}")
    centre = _by_value(game, low)[0]
    path = [(centre, j) for j in sorted(med + high)]
    for l in sorted(low):
        if l != centre:
            path += [(centre, l), (centre, l)]
    return path + path_lemma2(game)


def path_prop2_line(game: Game) -> list[Pair]:
    """Line alternating non-low and low agents, followed by the Lemma 2 path.

    Only meaningful with delta close to one; callers verify the outcome.
    """
    low, med, high = _classes(game)
    if len(high) >= 2:
        raise ConstructionRefused("n_h >= 2: any pair of high-value agents must be linked in every stable network")
    if not low:
        raise ConstructionRefused("n_l = 0: both regimes evolve identically")
    tops = sorted(med + high)
    if len(tops) < 2:
        raise ConstructionRefused("need n_m + n_h >= 2")
    if len(low) < len(tops) - 1:
        raise ConstructionRefused(f"need n_l >= n_m + n_h - 1 = {len(tops) - 1}, have {len(low)}")
    lows = sorted(low)
    path: list[Pair] = []
    for t in range(len(tops) - 1):
        path += [(lows[t], tops[t]), (tops[t + 1], lows[t])]
    for l in lows[len(tops) - 1:]:
        path.append((tops[0], l))
    return path + path_lemma2(game)


def path_prop3_insert(game: Game, base_path: Sequence[Pair], low_agent: int | None = None) -> list[Pair]:
    """Put a low-value agent between the two ends of the base path's last formed link.

    ``base_path`` must form its network under complete information without
    ever selecting a low-value agent before its terminal link forms.
    """
    low, med, high = _classes(game)
    if not low:
        raise ConstructionRefused("n_l = 0: stable sets coincide, welfare maxima are equal")
    if len(med) + len(high) <= 1:
        raise ConstructionRefused("need n_m + n_h > 1")
    hist = run(GameState.initial(game.with_mode(Mode.COMPLETE)), base_path)
    formed = [t for t, r in enumerate(hist.records) if r.outcome.changed and r.outcome.link_after]
    if not formed:
        raise ConstructionRefused("base path forms no link under complete information")
    t_last = formed[-1]
    i, j = hist.records[t_last].pair
    if any(r.outcome.changed for r in hist.records[t_last + 1:]):
        raise ConstructionRefused("base path changes the network after its terminal link forms")
    low_set = set(low)
    if any(a in low_set or b in low_set for a, b in base_path[:t_last + 1]):
        raise ConstructionRefused("base path selects a low-value agent before the terminal link forms")
    if i in low_set or j in low_set:
        raise ConstructionRefused("terminal link must join two non-low agents")
    lp = low_agent if low_agent is not None else _by_value(game, low)[0]
    if lp not in low_set:
        raise ConstructionRefused(f"agent {lp} is not low-value")
    base = list(base_path)
    return base[:t_last] + [(lp, i), (lp, j)] + base[t_last:]


def path_prop4(game: Game, i: int, m: int) -> list[Pair]:
    """Agent ``i`` meets ``m`` distinct low-value agents, twice in a row each."""
    if game.mode is not Mode.BAYES:
        raise ConstructionRefused("this construction concerns Bayesian learning")
    space = game.space
    if not any(space.f[k] < game.params.cost and space.h[k] > 0 for k in space.types):
        raise ConstructionRefused("prior puts no mass on low-value types")
    partners = [l for l in agents_in_class(game.kappa, game.params, space, LOW) if l != i]
    if len(partners) < m:
        raise ConstructionRefused(f"only {len(partners)} low-value partners available, {m} requested")
    path: list[Pair] = []
    for l in partners[:m]:
        path += [(i, l), (l, i)]
    return path


def prop4_recursion(p0: float, m: int) -> list[float]:
    """Posterior mass on the non-low type after 0..m form-then-sever episodes."""
    out = [p0]
    for _ in range(m):
        pm = out[-1]
        out.append(pm * (1 - p0) / (1 - pm * p0))
    return out


def prop4_report(game: Game, i: int, m: int, observer: int | None = None) -> dict:
    """Play the doubled pairings and read an outsider's posterior about ``i`` after each.

    The observer defaults to the highest-numbered agent that never meets ``i``.
    """
    path = path_prop4(game, i, m)
    touched = {a for p in path for a in p}
    if observer is None:
        outsiders = [a for a in range(game.params.n_agents, 0, -1) if a not in touched]
        if not outsiders:
            raise ConstructionRefused("no agent left to observe from outside")
        observer = outsiders[0]
    non_low = [t for t, k in enumerate(game.space.types) if game.space.f[k] >= game.params.cost]
    st = GameState.initial(game)
    posts = [sum(st.beliefs.marginals(observer)[i - 1][t] for t in non_low)]
    ef = [posterior_expected_f(st.beliefs, observer, i, game)]
    formed = []
    for t, pair in enumerate(path):
        st, out = step(st, pair)
        if t % 2 == 0:
            formed.append(out.link_after)
        else:
            posts.append(sum(st.beliefs.marginals(observer)[i - 1][t] for t in non_low))
            ef.append(posterior_expected_f(st.beliefs, observer, i, game))
    below = next((k for k, e in enumerate(ef) if e < game.params.cost), None)
    return {"agent": i, "observer": observer, "path": [list(p) for p in path], "formed": formed,
            "posterior_non_low": posts, "expected_f": ef, "first_m_below_cost": below}


def path_theorem2(net: Network) -> list[Pair]:
    """Witness path for the catalogued topologies: each link selected once.

    Core-periphery networks list periphery links before core links; every
    other class lists links in a breadth-first order from agent 1 so each
    new link attaches to the growing component.
    """
    classes = classify(net)
    if TopologyClass.CORE_PERIPHERY in classes and TopologyClass.COMPLETE not in classes:
        periphery = [p for p in net.sorted_links() if net.degree(p[0]) == 1 or net.degree(p[1]) == 1]
        core = [p for p in net.sorted_links() if p not in periphery]
        if TopologyClass.STAR in classes or not core:
            return periphery
        return periphery + core
    if not net.links:
        return []
    order: list[Pair] = []
    seen_links = set()
    visited = set()
    starts = sorted({a for p in net.links for a in p})
    for s in starts:
        if s in visited:
            continue
        visited.add(s)
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in sorted(net.neighbors(u)):
                    p = (min(u, v), max(u, v))
                    if p not in seen_links:
                        seen_links.add(p)
                        order.append(p)
                    if v not in visited:
                        visited.add(v)
                        nxt.append(v)
            frontier = nxt
    return order


def _run_both(game: Game, path_c, path_ic):
    hc = run(GameState.initial(game.with_mode(Mode.COMPLETE)), path_c)
    hi = run(GameState.initial(game.with_mode(Mode.SIMPLE)), path_ic)
    return hc, hi


def both_modes_report(game: Game, path: Sequence[Pair], path_ic: Sequence[Pair] | None = None) -> dict:
    hc, hi = _run_both(game, path, path if path_ic is None else path_ic)
    return {
        "complete": {"links": [list(p) for p in hc.final.sorted_links()],
                     "converged": is_stable(hc.final_state),
                     "welfare": welfare(hc.final, game.kappa, game.params, game.space)},
        "incomplete": {"links": [list(p) for p in hi.final.sorted_links()],
                       "converged": is_stable(hi.final_state),
                       "welfare": welfare(hi.final, game.kappa, game.params, game.space)},
        "difference": difference_class(hc.final, hi.final).value,
        "census": census(game.kappa, game.params, game.space).__dict__,
    }


def prop3_report(game: Game, base_path: Sequence[Pair]) -> dict:
    """Welfare of the base path under complete information vs the inserted path under the simple rule."""
    ins = path_prop3_insert(game, base_path)
    rep = both_modes_report(game, base_path, ins)
    rep["path_incomplete"] = [list(p) for p in ins]
    rep["incomplete_beats_complete"] = rep["incomplete"]["welfare"] > rep["complete"]["welfare"]
    return rep


__all__ = ["ConstructionRefused", "path_lemma2", "path_prop2_star", "path_prop2_line", "path_prop3_insert",
           "path_prop4", "prop4_recursion", "prop4_report", "path_theorem2", "both_modes_report", "prop3_report", "prop2_star_threshold"]
