"""Agent types, link values and the decayed-benefit payoff."""
from __future__ import annotations

import enum
import math
import random
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .graph import Network, iter_bits

TypeVector = tuple  # kappa: labels for agents 1..N, stored 0-based


@dataclass(frozen=True)
class TypeSpace:
    types: tuple[str, ...]
    f: Mapping[str, float]
    h: Mapping[str, float]

    def __post_init__(self):
        if not self.types:
            raise ValueError("type space must be non-empty")
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "f", dict(self.f))
        object.__setattr__(self, "h", dict(self.h))
        for k in self.types:
            if k not in self.f or k not in self.h:
                raise ValueError(f"type {k!r} needs both f and h")
            if not self.f[k] > 0:
                raise ValueError(f"f({k}) must be strictly positive")
            if self.h[k] < 0:
                raise ValueError(f"h({k}) must be non-negative")
        if abs(sum(self.h[k] for k in self.types) - 1.0) > 1e-12:
            raise ValueError("prior masses must sum to 1")

    def __hash__(self):
        return hash((self.types, tuple(self.f[k] for k in self.types), tuple(self.h[k] for k in self.types)))

    def index(self, label: str) -> int:
        try:
            return self.types.index(label)
        except ValueError:
            raise ValueError(f"unknown type label {label!r}") from None

    def to_json(self) -> dict:
        return {"types": list(self.types), "f": {k: self.f[k] for k in self.types},
                "h": {k: self.h[k] for k in self.types}}


@dataclass(frozen=True)
class Params:
    n_agents: int
    delta: float
    cost: float

    def __post_init__(self):
        if self.n_agents < 1:
            raise ValueError("n_agents must be positive")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if not self.cost > 0:
            raise ValueError("cost must be positive")
        if self.delta in (0.0, 1.0):
            warnings.warn(f"delta={self.delta} is outside the open interval (0, 1)", stacklevel=3)


class ValueClass(str, enum.Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


@dataclass(frozen=True)
class ValueCensus:
    n_low: int
    n_med: int
    n_high: int


def value_class(k: str, params: Params, space: TypeSpace) -> ValueClass:
    fk = space.f[space.types[space.index(k)]]
    c, d = params.cost, params.delta
    if fk < c:
        return ValueClass.LOW
    if (1 - d) * fk >= c:
        return ValueClass.HIGH
    return ValueClass.MEDIUM


def census(kappa: Sequence[str], params: Params, space: TypeSpace) -> ValueCensus:
    if len(kappa) == 0:
        raise ValueError("census of an empty group is undefined")
    counts = {v: 0 for v in ValueClass}
    for k in kappa:
        counts[value_class(k, params, space)] += 1
    return ValueCensus(counts[ValueClass.LOW], counts[ValueClass.MEDIUM], counts[ValueClass.HIGH])


def agents_in_class(kappa: Sequence[str], params: Params, space: TypeSpace, *classes: ValueClass) -> list[int]:
    return [i for i, k in enumerate(kappa, 1) if value_class(k, params, space) in classes]


def expected_f_prior(space: TypeSpace) -> float:
    return math.fsum(space.h[k] * space.f[k] for k in space.types)


def payoff_from_values(net: Network, i: int, values: Sequence[float], delta: float, cost: float) -> float:
    """Payoff of ``i`` when agent ``j`` is worth ``values[j]`` at distance one.

    Realized payoffs pass true link values; expected payoffs pass whatever
    the agent believes each counterpart is worth.
    """
    total = 0.0
    w = 1.0
    for layer in net.layers(i):
        s = 0.0
        for j in iter_bits(layer):
            s += values[j]
        total += w * s
        w *= delta
    return total - net.degree(i) * cost


def true_values(kappa: Sequence[str], space: TypeSpace) -> list[float]:
    return [0.0] + [space.f[k] for k in kappa]


def payoff(i: int, net: Network, kappa: Sequence[str], params: Params, space: TypeSpace) -> float:
    net.check_agent(i)
    return payoff_from_values(net, i, true_values(kappa, space), params.delta, params.cost)


def welfare(net: Network, kappa: Sequence[str], params: Params, space: TypeSpace) -> float:
    vals = true_values(kappa, space)
    return math.fsum(payoff_from_values(net, i, vals, params.delta, params.cost)
                     for i in range(1, net.n_agents + 1))


def sample_kappa(space: TypeSpace, n: int, rng: random.Random) -> tuple[str, ...]:
    weights = [space.h[k] for k in space.types]
    return tuple(rng.choices(space.types, weights=weights, k=n))


def validate_kappa(kappa: Sequence[str], n: int, space: TypeSpace) -> tuple[str, ...]:
    if len(kappa) != n:
        raise ValueError(f"type vector has {len(kappa)} entries, expected {n}")
    for k in kappa:
        space.index(k)
    return tuple(kappa)


# Canonical parameter sets. The magnitudes are chosen to satisfy the stated
# inequality regimes; each has an audit below.

@dataclass(frozen=True)
class ParamSet:
    name: str
    space: TypeSpace
    delta: float
    cost: float
    conditions: tuple[str, ...] = field(default=())

    def params(self, n: int) -> Params:
        return Params(n, self.delta, self.cost)

    def audit(self) -> dict[str, bool]:
        return audit_conditions(self)


def binary_space(fa: float, fb: float, p: float = 0.5) -> TypeSpace:
    return TypeSpace(("a", "b"), {"a": fa, "b": fb}, {"a": p, "b": 1 - p})


def _ex1_conditions(fa, fb, c, d, p):
    ef = p * fa + (1 - p) * fb
    return {
        "f(b) < c": fb < c,
        "E[f] >= c": ef >= c,
        "(1+d-d^2-d^3) f(b) >= c": (1 + d - d**2 - d**3) * fb >= c,
    }


def _ex2_conditions(fa, fb, c, d, p):
    out = _ex1_conditions(fa, fb, c, d, p)
    q = p * (1 - p) / (1 - p * p)
    out["q f(a) + (1-q) f(b) < c, q = p(1-p)/(1-p^2)"] = q * fa + (1 - q) * fb < c
    return out


def _fig3_conditions(fa, fb, c, d, p):
    return {
        "f(b) < c": fb < c,
        "f(a) >= c": fa >= c,
        "(1-d) f(a) < c": (1 - d) * fa < c,
        "c <= (1-d^2) f(a)": c <= (1 - d * d) * fa,
        "E[f] >= c": p * fa + (1 - p) * fb >= c,
    }


def _low_prior_conditions(fa, fb, c, d, p):
    return {"E[f] < c": p * fa + (1 - p) * fb < c}


_AUDITS = {"example1": _ex1_conditions, "example2": _ex2_conditions,
           "figure3": _fig3_conditions, "low_prior": _low_prior_conditions}


def audit_conditions(ps: ParamSet) -> dict[str, bool]:
    fa, fb = ps.space.f["a"], ps.space.f["b"]
    p = ps.space.h["a"]
    out = {}
    for regime in ps.conditions:
        for k, v in _AUDITS[regime](fa, fb, ps.cost, ps.delta, p).items():
            out[f"{regime}: {k}"] = v
    return out


P1 = ParamSet("P1", binary_space(2.0, 0.9), 0.5, 1.0, ("example1",))
P2 = ParamSet("P2", binary_space(1.25, 1.0), 0.5, 1.1, ("example2",))
P3 = ParamSet("P3", binary_space(2.0, 0.5), 0.5, 1.2, ("figure3",))
# E[f] = 1.25 < c: nothing ever forms under the simple rule
P0 = ParamSet("P0", binary_space(2.0, 0.5), 0.5, 1.3, ("low_prior",))

# Low enough cost that three successive form-then-sever pairings happen
# before the prior on an agent falls below c.
P4 = ParamSet("P4", binary_space(2.0, 0.5), 0.5, 0.7)
# Same regime as P1 with a strictly medium type a; the three-versus-twelve
# link picture needs it.
F2 = ParamSet("F2", binary_space(1.4, 0.9), 0.5, 1.0, ("example1",))

PRESETS = {ps.name: ps for ps in (P0, P1, P2, P3, P4, F2)}


# Payoff differences within this band count as indifference, and indifferent
# agents consent.
TIE_TOL = 1e-9


def consents(net: Network, i: int, j: int, values: Sequence[float], delta: float, cost: float,
             other: Network | None = None) -> bool:
    """Agent ``i``'s consent to having link ij, given its valuation of everyone.

    ``other`` may carry ``net`` with ij toggled when the caller already built it.
    """
    if other is None:
        other = net.toggled(i, j)
    with_ij, without_ij = (net, other) if net.has_link(i, j) else (other, net)
    gain = (payoff_from_values(with_ij, i, values, delta, cost)
            - payoff_from_values(without_ij, i, values, delta, cost))
    return gain >= -TIE_TOL
