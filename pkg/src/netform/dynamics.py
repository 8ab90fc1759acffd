"""Period-by-period link updating with bilateral consent."""
from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .beliefs import BayesianBeliefs, CompleteBeliefs, SimpleBeliefs, simple_update
from .graph import Network, Pair, all_pairs, norm_pair
from .payoff import Params, TypeSpace, consents, expected_f_prior, validate_kappa


class Mode(str, enum.Enum):
    COMPLETE = "complete"
    SIMPLE = "simple"
    BAYES = "bayes"

    @classmethod
    def parse(cls, s: str) -> "Mode":
        aliases = {"complete": cls.COMPLETE, "c": cls.COMPLETE,
                   "simple": cls.SIMPLE, "incomplete": cls.SIMPLE, "incompletesimple": cls.SIMPLE, "ic": cls.SIMPLE,
                   "bayes": cls.BAYES, "bayesian": cls.BAYES, "incompletebayes": cls.BAYES}
        try:
            return aliases[s.lower().replace("-", "").replace("_", "")]
        except KeyError:
            raise ValueError(f"unknown mode {s!r}") from None


@dataclass(frozen=True)
class Game:
    """Fixed context of a run: type space, parameters, true types and information mode."""
    space: TypeSpace
    params: Params
    kappa: tuple[str, ...]
    mode: Mode = Mode.SIMPLE

    def __post_init__(self):
        object.__setattr__(self, "kappa", validate_kappa(self.kappa, self.params.n_agents, self.space))
        object.__setattr__(self, "mode", Mode(self.mode))

    @cached_property
    def truth(self) -> list[float]:
        return [0.0] + [self.space.f[k] for k in self.kappa]

    @cached_property
    def ef(self) -> float:
        return expected_f_prior(self.space)

    @cached_property
    def f_by_idx(self) -> list[float]:
        return [self.space.f[k] for k in self.space.types]

    def with_mode(self, mode: Mode) -> "Game":
        return replace(self, mode=Mode(mode))

    def fresh_beliefs(self):
        if self.mode is Mode.COMPLETE:
            return CompleteBeliefs()
        if self.mode is Mode.SIMPLE:
            return SimpleBeliefs.fresh(self.params.n_agents)
        return BayesianBeliefs.fresh(self)


@dataclass(frozen=True)
class GameState:
    game: Game
    network: Network
    beliefs: object
    period: int = 0

    @classmethod
    def initial(cls, game: Game, network: Network | None = None) -> "GameState":
        net = network if network is not None else Network.empty(game.params.n_agents)
        beliefs = game.fresh_beliefs()
        if net.links:
            if game.mode is Mode.BAYES:
                raise ValueError("Bayesian histories start from the empty network")
            if game.mode is Mode.SIMPLE:
                beliefs = simple_update(beliefs, net)
        return cls(game, net, beliefs, 0)

    @classmethod
    def informed(cls, game: Game, network: Network) -> "GameState":
        """State in which every agent already knows every type."""
        if game.mode is Mode.COMPLETE:
            return cls(game, network, CompleteBeliefs(), 0)
        if game.mode is Mode.BAYES:
            raise ValueError("informed start is only defined for the simple rule")
        n = game.params.n_agents
        full = ((1 << (n + 1)) - 1) & ~1
        return cls(game, network, SimpleBeliefs(tuple([0] + [full] * n)), 0)

    @property
    def key(self):
        """Identity for reachability: network plus beliefs, period ignored."""
        return (self.network, self.beliefs)


@dataclass(frozen=True)
class SOEOutcome:
    a_ij: bool
    a_ji: bool
    link_before: bool

    @property
    def link_after(self) -> bool:
        return self.a_ij and self.a_ji

    @property
    def changed(self) -> bool:
        return self.link_before != self.link_after

    def to_json(self) -> dict:
        return {"a_ij": int(self.a_ij), "a_ji": int(self.a_ji),
                "link_before": self.link_before, "link_after": self.link_after}


@dataclass(frozen=True)
class PeriodRecord:
    period: int
    pair: Pair
    outcome: SOEOutcome
    network: Network

    def to_json(self) -> dict:
        return {"period": self.period, "pair": list(self.pair), **self.outcome.to_json(),
                "links": [list(p) for p in self.network.sorted_links()]}


@dataclass
class FormationHistory:
    initial: Network
    records: list[PeriodRecord] = field(default_factory=list)
    final_state: GameState | None = None

    def __len__(self):
        return len(self.records)

    def __iter__(self) -> Iterator[PeriodRecord]:
        return iter(self.records)

    @property
    def path(self) -> list[Pair]:
        return [r.pair for r in self.records]

    @property
    def final(self) -> Network:
        return self.records[-1].network if self.records else self.initial

    def networks(self) -> list[Network]:
        return [self.initial] + [r.network for r in self.records]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in self.records)


def resolve_soe(state: GameState, pair: Sequence[int]) -> SOEOutcome:
    """Each selected agent consents iff its expected payoff with the link is at least that without."""
    i, j = pair
    if i == j:
        raise ValueError("a pair needs two distinct agents")
    state.network.check_agent(i)
    state.network.check_agent(j)
    return _resolve(state, i, j)[0]


def _resolve(state: GameState, i: int, j: int) -> tuple[SOEOutcome, Network]:
    net, game = state.network, state.game
    d, c = game.params.delta, game.params.cost
    other = net.toggled(i, j)
    a_ij = consents(net, i, j, state.beliefs.values_for(i, game), d, c, other)
    a_ji = consents(net, j, i, state.beliefs.values_for(j, game), d, c, other)
    return SOEOutcome(a_ij, a_ji, net.has_link(i, j)), other


def step(state: GameState, pair: Sequence[int]) -> tuple[GameState, SOEOutcome]:
    i, j = pair
    if i == j:
        raise ValueError("a pair needs two distinct agents")
    state.network.check_agent(i)
    state.network.check_agent(j)
    out, other = _resolve(state, i, j)
    net = other if out.changed else state.network
    beliefs = state.beliefs.after(state.network, norm_pair(i, j), out.link_after, net, state.game)
    return GameState(state.game, net, beliefs, state.period + 1), out


def run(state: GameState, path: Iterable[Sequence[int]]) -> FormationHistory:
    hist = FormationHistory(state.network)
    for pair in path:
        state, out = step(state, pair)
        hist.records.append(PeriodRecord(state.period, (pair[0], pair[1]), out, state.network))
    hist.final_state = state
    return hist


def random_pair(rng: random.Random, n: int) -> Pair:
    """Uniform draw over the N(N-1)/2 unordered pairs."""
    if n < 2:
        raise ValueError("need at least two agents")
    i = rng.randrange(1, n + 1)
    j = rng.randrange(1, n)
    if j >= i:
        j += 1
    return norm_pair(i, j)


def random_path(rng: random.Random, n: int, length: int) -> list[Pair]:
    return [random_pair(rng, n) for _ in range(length)]


def default_horizon(n: int) -> int:
    return 5 * n * (n - 1)


__all__ = ["Mode", "Game", "GameState", "SOEOutcome", "PeriodRecord", "FormationHistory",
           "resolve_soe", "step", "run", "random_pair", "random_path", "default_horizon", "all_pairs"]
