"""Exhaustive breadth-first enumeration of the (network, beliefs) state space."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from ..dynamics import Game, GameState, Mode, step
from ..graph import Network, all_pairs
from ..payoff import welfare, payoff

MAX_EXHAUSTIVE_N = 6


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class ReachabilitySets:
    mode: Mode
    emergent: set[Network]
    stable_states: list[GameState]
    exhaustive: bool = True
    n_states: int = 0
    depth: int = 0

    @property
    def stable_networks(self) -> set[Network]:
        return {s.network for s in self.stable_states}

    def to_json(self) -> dict:
        return {
            "mode": self.mode.value,
            "exhaustive": self.exhaustive,
            "n_states": self.n_states,
            "depth": self.depth,
            "emergent": sorted(g.encode() for g in self.emergent),
            "stable": sorted(g.encode() for g in self.stable_networks),
        }


def reachable_sets(game: Game, depth_bound: int | None = None, max_states: int = 2_000_000) -> ReachabilitySets:
    """Every network reachable by some selection path, and the reachable stable states.

    A state is stable exactly when every pair leaves its network unchanged,
    which falls out of the successor expansion without a separate sweep.
    """
    n = game.params.n_agents
    if game.mode is Mode.BAYES:
        raise ValueError("reachability is defined for complete information and the simple rule only")
    if n > MAX_EXHAUSTIVE_N and depth_bound is None:
        raise BudgetExceeded(f"N={n} exceeds the exhaustive limit of {MAX_EXHAUSTIVE_N}; pass depth_bound")
    pairs = all_pairs(n)
    start = GameState.initial(game)
    seen = {start.key: 0}
    queue = deque([start])
    emergent: set[Network] = set()
    stable: dict = {}
    max_depth = 0
    truncated = False
    while queue:
        st = queue.popleft()
        d = seen[st.key]
        max_depth = max(max_depth, d)
        still = True
        succ = []
        for p in pairs:
            nxt, out = step(st, p)
            if out.changed:
                still = False
            succ.append(nxt)
        # non-events leave the key unchanged, so a stable state is re-reached at t >= 1
        if still:
            stable[st.key] = st
        for nxt in succ:
            emergent.add(nxt.network)
            if nxt.key in seen:
                continue
            if depth_bound is not None and d + 1 > depth_bound:
                truncated = True
                continue
            seen[nxt.key] = d + 1
            if len(seen) > max_states:
                raise BudgetExceeded(f"more than {max_states} states")
            queue.append(nxt)
    states = sorted(stable.values(), key=lambda s: (s.network.encode(), repr(s.beliefs)))
    return ReachabilitySets(game.mode, emergent, states, not truncated, len(seen), max_depth)


def theorem1_check(game: Game, **kw) -> dict:
    """Compare emergent and stable-emergent sets under both information regimes."""
    sc = reachable_sets(game.with_mode(Mode.COMPLETE), **kw)
    si = reachable_sets(game.with_mode(Mode.SIMPLE), **kw)
    high_prior = game.ef >= game.params.cost
    empty = Network.empty(game.params.n_agents)
    report = {
        "kappa": "".join(game.kappa),
        "ef_ge_c": high_prior,
        "n_emergent_complete": len(sc.emergent),
        "n_emergent_incomplete": len(si.emergent),
        "n_stable_complete": len(sc.stable_networks),
        "n_stable_incomplete": len(si.stable_networks),
    }
    violations = []
    if high_prior:
        for g in sorted(sc.emergent - si.emergent, key=Network.encode):
            violations.append({"kind": "emergent", "network": g.encode()})
        for g in sorted(sc.stable_networks - si.stable_networks, key=Network.encode):
            violations.append({"kind": "stable", "network": g.encode()})
    else:
        if si.emergent != {empty}:
            violations.append({"kind": "nonempty_incomplete",
                               "networks": sorted(g.encode() for g in si.emergent)})
        if si.stable_networks != {empty}:
            violations.append({"kind": "incomplete_stable_not_empty"})
    report["violations"] = violations
    report["holds"] = not violations
    return report


def max_stable_welfare(sets: ReachabilitySets, game: Game) -> float | None:
    """Best welfare over reachable stable networks; ``None`` when there are none."""
    if not sets.exhaustive:
        raise ValueError("welfare maximum needs an exhaustive enumeration")
    nets = sets.stable_networks
    if not nets:
        return None
    return max(welfare(g, game.kappa, game.params, game.space) for g in nets)


def lemma3_check(sets: ReachabilitySets, game: Game, tol: float = 1e-9) -> list[dict]:
    """Agents never lose payoff moving from a stable network to a stable proper superset."""
    nets = sorted(sets.stable_networks, key=Network.encode)
    n = game.params.n_agents
    cache = {g: [payoff(i, g, game.kappa, game.params, game.space) for i in range(1, n + 1)] for g in nets}
    out = []
    for g1, g2 in combinations(nets, 2):
        for big, small in ((g1, g2), (g2, g1)):
            if small.links < big.links:
                for i in range(n):
                    if cache[big][i] < cache[small][i] - tol:
                        out.append({"superset": big.encode(), "subset": small.encode(), "agent": i + 1,
                                    "payoff_superset": cache[big][i], "payoff_subset": cache[small][i]})
    return out


def sampled_welfare_bound(game: Game, n_paths: int, horizon: int, seed: int) -> dict:
    """Lower bound on the stable-welfare maximum from random runs; never a maximum."""
    import random
    from ..dynamics import random_path, run
    from .stability import is_stable

    rng = random.Random(seed)
    best = -math.inf
    found = 0
    for _ in range(n_paths):
        hist = run(GameState.initial(game), random_path(rng, game.params.n_agents, horizon))
        if is_stable(hist.final_state):
            found += 1
            best = max(best, welfare(hist.final, game.kappa, game.params, game.space))
    return {"kind": "sampled_lower_bound", "paths": n_paths, "stable_found": found,
            "lower_bound": None if found == 0 else best}
