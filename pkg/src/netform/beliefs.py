"""What agents believe about each other's types, and how that changes.

Three belief models share one small interface:

* ``values_for(i, game)`` -- the link value agent ``i`` attaches to every agent,
  which is all a myopic decision needs because payoffs are linear in the
  per-agent values;
* ``after(net_before, pair, link_after, net_after, game)`` -- the belief state
  once a period has been played.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import TYPE_CHECKING, Sequence

from .graph import Network, Pair, iter_bits
from .payoff import consents, payoff_from_values

if TYPE_CHECKING:
    from .dynamics import FormationHistory, Game


class InconsistentHistory(ValueError):
    """No type vector reproduces the observed formation history."""


def _full_mask(n: int) -> int:
    return ((1 << (n + 1)) - 1) & ~1


def _closure(known: Sequence[int], net: Network) -> tuple[int, ...]:
    out = list(known)
    for m in net.component_masks:
        for i in iter_bits(m):
            out[i] |= m
    return tuple(out)


@dataclass(frozen=True)
class CompleteBeliefs:
    """Everybody knows the true type vector."""

    def values_for(self, i: int, game: "Game") -> list[float]:
        return game.truth

    def after(self, net_before, pair, link_after, net_after, game) -> "CompleteBeliefs":
        return self

    def knows(self, i: int, j: int) -> bool:
        return True

    def information_complete(self, kappa=None) -> bool:
        return True

    def to_json(self, game: "Game") -> dict:
        return {"rule": "complete"}


@dataclass(frozen=True)
class SimpleBeliefs:
    """Ever-connected agents know each other's types; everything else stays at the prior.

    ``known[i]`` is a bitmask over agent ids and always contains ``i``.
    """
    known: tuple[int, ...]

    @classmethod
    def fresh(cls, n: int) -> "SimpleBeliefs":
        return cls(tuple([0] + [1 << i for i in range(1, n + 1)]))

    @property
    def n_agents(self) -> int:
        return len(self.known) - 1

    def knows(self, i: int, j: int) -> bool:
        return bool(self.known[i] >> j & 1)

    def known_set(self, i: int) -> set[int]:
        return set(iter_bits(self.known[i]))

    def values_for(self, i: int, game: "Game") -> list[float]:
        mask = self.known[i]
        truth, ef = game.truth, game.ef
        return [truth[j] if mask >> j & 1 else ef for j in range(len(truth))]

    def after(self, net_before, pair, link_after, net_after, game) -> "SimpleBeliefs":
        if net_after is net_before:
            return self
        return simple_update(self, net_after)

    def information_complete(self, kappa=None) -> bool:
        full = _full_mask(self.n_agents)
        return all(m == full for m in self.known[1:])

    def to_json(self, game: "Game" = None) -> dict:
        return {"rule": "simple",
                "known": {str(i): sorted(iter_bits(m)) for i, m in enumerate(self.known) if i}}


def simple_update(beliefs: SimpleBeliefs, net: Network) -> SimpleBeliefs:
    """Everyone learns the types of their current component; nothing is forgotten."""
    new = _closure(beliefs.known, net)
    return beliefs if new == beliefs.known else SimpleBeliefs(new)


@dataclass(frozen=True)
class BayesianBeliefs:
    """Public consistent set of type vectors plus each agent's private knowledge.

    The public part is the set of type vectors (as tuples of type indices)
    under which equilibrium play reproduces every observed period. Agent
    ``i`` additionally pins its own type and the types of everyone it has
    ever been connected to, so its posterior is the prior restricted to the
    consistent vectors agreeing with the truth on ``known[i]``.
    """
    consistent: tuple[tuple[int, ...], ...]
    known: tuple[int, ...]
    truth_idx: tuple[int, ...]
    weights: tuple[float, ...]  # prior mass of each consistent vector

    @classmethod
    def fresh(cls, game: "Game") -> "BayesianBeliefs":
        space = game.space
        n = game.params.n_agents
        h = [space.h[k] for k in space.types]
        vecs = tuple(product(range(len(space.types)), repeat=n))
        weights = tuple(math.prod(h[t] for t in v) for v in vecs)
        truth_idx = tuple(space.index(k) for k in game.kappa)
        return cls(vecs, SimpleBeliefs.fresh(n).known, truth_idx, weights)

    @property
    def n_agents(self) -> int:
        return len(self.known) - 1

    def knows(self, i: int, j: int) -> bool:
        return bool(self.known[i] >> j & 1)

    def _support(self, i: int, reference: Sequence[int]) -> list[int]:
        """Indices of consistent vectors agreeing with ``reference`` on what ``i`` knows."""
        pinned = [j - 1 for j in iter_bits(self.known[i])]
        return [s for s, v in enumerate(self.consistent) if all(v[p] == reference[p] for p in pinned)]

    def marginals(self, i: int, reference: Sequence[int] | None = None) -> list[list[float]]:
        """Posterior type probabilities per subject (0-based), from ``i``'s point of view."""
        reference = self.truth_idx if reference is None else reference
        idx = self._support(i, reference)
        total = math.fsum(self.weights[s] for s in idx)
        n_types = 1 + max(max(v) for v in self.consistent)
        n_types = max(n_types, 1 + max(reference))
        out = []
        for subj in range(self.n_agents):
            acc = [[] for _ in range(n_types)]
            for s in idx:
                acc[self.consistent[s][subj]].append(self.weights[s])
            out.append([math.fsum(a) / total for a in acc])
        return out

    def _values(self, i: int, reference: Sequence[int], f_by_idx: Sequence[float]) -> list[float]:
        idx = self._support(i, reference)
        total = math.fsum(self.weights[s] for s in idx)
        vals = [0.0]
        for subj in range(self.n_agents):
            vals.append(math.fsum(self.weights[s] * f_by_idx[self.consistent[s][subj]] for s in idx) / total)
        return vals

    def values_for(self, i: int, game: "Game") -> list[float]:
        return self._values(i, self.truth_idx, game.f_by_idx)

    def after(self, net_before: Network, pair: Pair, link_after: bool, net_after: Network,
              game: "Game") -> "BayesianBeliefs":
        i, j = pair
        d, c = game.params.delta, game.params.cost
        f_by_idx = game.f_by_idx
        cache: dict = {}

        def decision(agent, other, vec):
            key = (agent, tuple(vec[p - 1] for p in iter_bits(self.known[agent])))
            if key not in cache:
                vals = self._values(agent, vec, f_by_idx)
                cache[key] = consents(net_before, agent, other, vals, d, c)
            return cache[key]

        keep = [s for s, v in enumerate(self.consistent)
                if (decision(i, j, v) and decision(j, i, v)) == link_after]
        if not keep:
            raise InconsistentHistory(f"no type vector explains outcome {link_after} for pair {pair}")
        known = _closure(self.known, net_after)
        return BayesianBeliefs(tuple(self.consistent[s] for s in keep), known, self.truth_idx,
                               tuple(self.weights[s] for s in keep))

    def information_complete(self, kappa=None) -> bool:
        return all(len(self._support(i, self.truth_idx)) == 1 for i in range(1, self.n_agents + 1))

    def to_json(self, game: "Game") -> dict:
        out = {}
        for i in range(1, self.n_agents + 1):
            m = self.marginals(i)
            out[str(i)] = {str(s + 1): {k: m[s][t] for t, k in enumerate(game.space.types)}
                           for s in range(self.n_agents)}
        return {"rule": "bayes", "n_consistent": len(self.consistent), "marginals": out}


def bayes_update(history: "FormationHistory", game: "Game") -> BayesianBeliefs:
    """Replay a recorded history from the prior, filtering the consistent set period by period."""
    beliefs = BayesianBeliefs.fresh(game)
    net = Network.empty(game.params.n_agents)
    for rec in history.records:
        beliefs = beliefs.after(net, rec.pair, rec.outcome.link_after, rec.network, game)
        net = rec.network
    return beliefs


def expected_payoff(i: int, candidate: Network, beliefs, game: "Game") -> float:
    """Agent ``i``'s expected payoff from ``candidate`` under its current beliefs."""
    vals = beliefs.values_for(i, game)
    return payoff_from_values(candidate, i, vals, game.params.delta, game.params.cost)


def posterior_expected_f(beliefs, observer: int, subject: int, game: "Game") -> float:
    return beliefs.values_for(observer, game)[subject]


def information_complete(beliefs, kappa=None) -> bool:
    return beliefs.information_complete(kappa)
