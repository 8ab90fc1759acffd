"""Scenario files, path files and presets."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .dynamics import Game, Mode
from .graph import Network, Pair
from .payoff import PRESETS, ParamSet, TypeSpace, sample_kappa


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    preset: ParamSet
    n_agents: int
    kappa: tuple[str, ...] | None
    mode: Mode | None = None
    path: tuple[Pair, ...] | None = None
    network: Network | None = None
    expect: dict = field(default_factory=dict)

    def game(self, mode: Mode | None = None) -> Game:
        if self.kappa is None:
            raise ScenarioError("scenario has no type vector")
        m = mode or self.mode or Mode.SIMPLE
        return Game(self.preset.space, self.preset.params(self.n_agents), self.kappa, m)


def _parse_kappa(raw: Any, n: int, space: TypeSpace) -> tuple[str, ...]:
    if isinstance(raw, str):
        raw = list(raw)
    if isinstance(raw, dict):
        if set(raw) != {"sample_seed"}:
            raise ScenarioError('kappa object must be {"sample_seed": <int>}')
        return sample_kappa(space, n, random.Random(raw["sample_seed"]))
    if not isinstance(raw, list):
        raise ScenarioError("kappa must be a list of type labels, a string or {\"sample_seed\": n}")
    kappa = tuple(str(k) for k in raw)
    if len(kappa) != n:
        raise ScenarioError(f"kappa has {len(kappa)} entries, n_agents is {n}")
    for k in kappa:
        if k not in space.f:
            raise ScenarioError(f"unknown type {k!r}")
    return kappa


def _parse_pairs(raw: Any, n: int, what: str) -> tuple[Pair, ...]:
    out = []
    for k, p in enumerate(raw, 1):
        try:
            i, j = (int(x) for x in p)
        except (TypeError, ValueError):
            raise ScenarioError(f"{what} entry {k}: expected a pair of agent ids, got {p!r}") from None
        _check_pair(i, j, n, f"{what} entry {k}")
        out.append((i, j))
    return tuple(out)


def _check_pair(i: int, j: int, n: int, where: str) -> None:
    if not (1 <= i <= n and 1 <= j <= n):
        raise ScenarioError(f"{where}: agent ids must lie in 1..{n}, got {i} {j}")
    if i == j:
        raise ScenarioError(f"{where}: a pair needs two distinct agents, got {i} {j}")


def scenario_from_dict(d: dict) -> Scenario:
    if "preset" in d:
        try:
            base = PRESETS[d["preset"]]
        except KeyError:
            raise ScenarioError(f"unknown preset {d['preset']!r}; known: {', '.join(sorted(PRESETS))}") from None
    else:
        missing = [k for k in ("types", "f", "h", "delta", "cost") if k not in d]
        if missing:
            raise ScenarioError(f"missing keys: {', '.join(missing)} (or give a preset)")
        try:
            space = TypeSpace(tuple(d["types"]), dict(d["f"]), dict(d["h"]))
        except (TypeError, ValueError) as e:
            raise ScenarioError(f"bad type space: {e}") from None
        base = ParamSet(d.get("name", "custom"), space, float(d["delta"]), float(d["cost"]))
    if "n_agents" in d:
        n = int(d["n_agents"])
    elif isinstance(d.get("kappa"), (list, str)):
        n = len(d["kappa"])
    else:
        raise ScenarioError("n_agents is required unless kappa is given explicitly")
    if n < 2:
        raise ScenarioError("need at least two agents")
    kappa = _parse_kappa(d["kappa"], n, base.space) if "kappa" in d else None
    mode = Mode.parse(d["mode"]) if "mode" in d else None
    path = _parse_pairs(d["path"], n, "path") if "path" in d else None
    net = Network.from_edges(n, _parse_pairs(d["network"], n, "network")) if "network" in d else None
    return Scenario(base, n, kappa, mode, path, net, dict(d.get("expect", {})))


def load_scenario(ref: str) -> Scenario:
    """A scenario file path, or ``PRESET:KAPPA`` such as ``P1:bbbbb``."""
    p = Path(ref)
    if p.exists():
        try:
            d = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise ScenarioError(f"{ref}: invalid JSON at line {e.lineno}: {e.msg}") from None
        try:
            return scenario_from_dict(d)
        except ScenarioError as e:
            raise ScenarioError(f"{ref}: {e}") from None
    name, _, kappa = ref.partition(":")
    if name in PRESETS:
        d: dict = {"preset": name}
        if kappa:
            d["kappa"] = kappa
        else:
            raise ScenarioError(f"preset {name} needs a type vector, e.g. {name}:bbbbb")
        return scenario_from_dict(d)
    raise ScenarioError(f"{ref}: no such file and not a preset reference")


def parse_path_text(text: str, n: int) -> list[Pair]:
    """One pair per line as ``i j`` (commas allowed); ``#`` starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ScenarioError(f"line {lineno}: expected two agent ids, got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ScenarioError(f"line {lineno}: agent ids must be integers, got {line!r}") from None
        _check_pair(i, j, n, f"line {lineno}")
        out.append((i, j))
    return out


def load_path(path: str, n: int) -> list[Pair]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScenarioError(f"{path}: {e.strerror}") from None
    try:
        return parse_path_text(text, n)
    except ScenarioError as e:
        raise ScenarioError(f"{path}: {e}") from None
