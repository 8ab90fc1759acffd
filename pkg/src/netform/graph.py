"""Undirected labeled networks over agents 1..N.

Networks are immutable values. Adjacency is kept as per-agent bitmasks so that
breadth-first distance layers are cheap to compute for the small N used here.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

Pair = tuple[int, int]


def norm_pair(i: int, j: int) -> Pair:
    if i == j:
        raise ValueError(f"self-loop ({i},{j}) is not a link")
    return (i, j) if i < j else (j, i)


def all_pairs(n: int) -> list[Pair]:
    return list(combinations(range(1, n + 1), 2))


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Network:
    n_agents: int
    links: frozenset[Pair] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_agents < 1:
            raise ValueError("n_agents must be positive")
        clean = set()
        for i, j in self.links:
            p = norm_pair(i, j)
            if not (1 <= p[0] and p[1] <= self.n_agents):
                raise ValueError(f"link {p} has endpoint outside 1..{self.n_agents}")
            clean.add(p)
        object.__setattr__(self, "links", frozenset(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Network":
        return cls(n, frozenset(tuple(e) for e in edges))

    @classmethod
    def empty(cls, n: int) -> "Network":
        return cls(n, frozenset())

    @classmethod
    def ring(cls, order: list[int], n: int | None = None) -> "Network":
        n = n if n is not None else max(order)
        k = len(order)
        return cls(n, frozenset(norm_pair(order[t], order[(t + 1) % k]) for t in range(k)))

    @classmethod
    def line(cls, order: list[int], n: int | None = None) -> "Network":
        n = n if n is not None else max(order)
        return cls(n, frozenset(norm_pair(a, b) for a, b in zip(order, order[1:])))

    def __len__(self) -> int:
        return len(self.links)

    def __contains__(self, pair) -> bool:
        return norm_pair(*pair) in self.links

    def has_link(self, i: int, j: int) -> bool:
        return norm_pair(i, j) in self.links

    @classmethod
    def _trusted(cls, n: int, links: frozenset) -> "Network":
        # skips validation; callers guarantee normalized in-range pairs
        obj = object.__new__(cls)
        object.__setattr__(obj, "n_agents", n)
        object.__setattr__(obj, "links", links)
        return obj

    def with_link(self, i: int, j: int) -> "Network":
        p = norm_pair(i, j)
        if p in self.links:
            return self
        self.check_agent(i)
        self.check_agent(j)
        return Network._trusted(self.n_agents, self.links | {p})

    def without_link(self, i: int, j: int) -> "Network":
        p = norm_pair(i, j)
        if p not in self.links:
            return self
        return Network._trusted(self.n_agents, self.links - {p})

    def toggled(self, i: int, j: int) -> "Network":
        return self.without_link(i, j) if self.has_link(i, j) else self.with_link(i, j)

    def sorted_links(self) -> list[Pair]:
        return sorted(self.links)

    def check_agent(self, i: int) -> None:
        if not (isinstance(i, int) and 1 <= i <= self.n_agents):
            raise ValueError(f"invalid agent id {i!r} for N={self.n_agents}")

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbour bitmask per agent; index 0 unused."""
        adj = [0] * (self.n_agents + 1)
        for i, j in self.links:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return tuple(adj)

    def degree(self, i: int) -> int:
        return self.adjacency[i].bit_count()

    def neighbors(self, i: int) -> list[int]:
        return list(iter_bits(self.adjacency[i]))

    @cached_property
    def _layer_cache(self) -> dict:
        return {}

    def layers(self, i: int) -> list[int]:
        """Bitmasks of agents at distance 1, 2, ... from ``i``."""
        cache = self._layer_cache
        out = cache.get(i)
        if out is None:
            out = cache[i] = self._bfs_layers(i)
        return out

    def _bfs_layers(self, i: int) -> list[int]:
        adj = self.adjacency
        seen = 1 << i
        frontier = 1 << i
        out = []
        while True:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            nxt &= ~seen
            if not nxt:
                return out
            out.append(nxt)
            seen |= nxt
            frontier = nxt

    def reach_mask(self, i: int) -> int:
        m = 1 << i
        for layer in self.layers(i):
            m |= layer
        return m

    @cached_property
    def component_masks(self) -> tuple[int, ...]:
        """Members of every component with at least one link, ordered by lowest member."""
        done = 0
        out = []
        for i in range(1, self.n_agents + 1):
            if done >> i & 1 or not self.adjacency[i]:
                continue
            m = self.reach_mask(i)
            done |= m
            out.append(m)
        return tuple(out)

    def to_json(self) -> dict:
        return {"n": self.n_agents, "links": [list(p) for p in self.sorted_links()]}

    @classmethod
    def from_json(cls, data: dict) -> "Network":
        return cls.from_edges(int(data["n"]), data.get("links", []))

    def to_edgelist(self) -> str:
        return "".join(f"{i} {j}\n" for i, j in self.sorted_links())

    @classmethod
    def from_edgelist(cls, n: int, text: str) -> "Network":
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'i j', got {raw!r}")
            edges.append((int(parts[0]), int(parts[1])))
        return cls.from_edges(n, edges)

    def encode(self) -> str:
        """Canonical string key, used for deterministic ordering in reports."""
        return json.dumps(self.sorted_links(), separators=(",", ":"))

    def __repr__(self) -> str:
        body = ",".join(f"{i}{j}" if self.n_agents < 10 else f"{i}-{j}" for i, j in self.sorted_links())
        return f"Network(N={self.n_agents}, {{{body}}})"


@dataclass(frozen=True)
class Component:
    members: frozenset[int]
    links: frozenset[Pair]


def distance(net: Network, i: int, j: int) -> float | int:
    """Shortest-path link count; ``math.inf`` when unconnected."""
    net.check_agent(i)
    net.check_agent(j)
    if i == j:
        return 0
    for d, layer in enumerate(net.layers(i), 1):
        if layer >> j & 1:
            return d
    return math.inf


def component_of(net: Network, i: int) -> Component:
    net.check_agent(i)
    members = frozenset(iter_bits(net.reach_mask(i)))
    links = frozenset(p for p in net.links if p[0] in members)
    return Component(members, links)


def components(net: Network) -> list[Component]:
    return [component_of(net, min(iter_bits(m))) for m in net.component_masks]


def count_components(net: Network) -> int:
    return len(net.component_masks)


def is_connected(net: Network) -> bool:
    full = ((1 << (net.n_agents + 1)) - 1) & ~1
    return net.n_agents >= 2 and net.component_masks == (full,)


def is_minimal(net: Network) -> bool:
    """Every component is a tree: dropping any link splits its component."""
    for m in net.component_masks:
        size = m.bit_count()
        n_links = sum(1 for i, _ in net.links if m >> i & 1)
        if n_links != size - 1:
            return False
    return True


class TopologyClass(str, enum.Enum):
    EMPTY = "Empty"
    COMPLETE = "Complete"
    STAR = "Star"
    CORE_PERIPHERY = "CorePeriphery"
    TREE = "Tree"
    WHEEL = "Wheel"
    MINIMALLY_CONNECTED = "MinimallyConnected"
    CONNECTED = "Connected"
    DISCONNECTED = "Disconnected"


def _is_star(net: Network) -> bool:
    n = net.n_agents
    if n < 2 or len(net.links) != n - 1:
        return False
    return any(net.degree(i) == n - 1 for i in range(1, n + 1))


def _is_core_periphery(net: Network) -> bool:
    # periphery agents have exactly one link, and it goes into the core clique
    n = net.n_agents
    adj = net.adjacency
    agents = range(1, n + 1)
    for size in range(1, n):
        for core in combinations(agents, size):
            core_mask = sum(1 << i for i in core)
            ok = True
            for i in core:
                if (adj[i] & core_mask) != core_mask & ~(1 << i):
                    ok = False
                    break
            if not ok:
                continue
            for j in agents:
                if core_mask >> j & 1:
                    continue
                if net.degree(j) != 1 or not (adj[j] & core_mask):
                    ok = False
                    break
            if ok:
                return True
    return False


def _is_wheel(net: Network, reading: str) -> bool:
    n = net.n_agents
    degs = [net.degree(i) for i in range(1, n + 1)]
    if reading == "cycle":
        return n >= 3 and len(net.links) == n and all(d == 2 for d in degs) and is_connected(net)
    if reading == "path":
        if n == 1:
            return not net.links
        return (len(net.links) == n - 1 and is_connected(net) and max(degs) <= 2)
    raise ValueError(f"unknown wheel reading {reading!r}")


def classify(net: Network, wheel: str = "cycle") -> set[TopologyClass]:
    """Every named topology the labeled network satisfies.

    ``wheel="cycle"`` treats a wheel as an N-cycle through all agents;
    ``wheel="path"`` uses the N-1 link reading instead.
    """
    n = net.n_agents
    out: set[TopologyClass] = set()
    if not net.links:
        out.add(TopologyClass.EMPTY)
    if n >= 2 and len(net.links) == n * (n - 1) // 2:
        out.add(TopologyClass.COMPLETE)
    connected = is_connected(net)
    if connected:
        out.add(TopologyClass.CONNECTED)
        if is_minimal(net):
            out.add(TopologyClass.MINIMALLY_CONNECTED)
            out.add(TopologyClass.TREE)
    elif n >= 2:
        out.add(TopologyClass.DISCONNECTED)
    if _is_star(net):
        out.add(TopologyClass.STAR)
    if n >= 2 and _is_core_periphery(net):
        out.add(TopologyClass.CORE_PERIPHERY)
    if _is_wheel(net, wheel) and net.links:
        out.add(TopologyClass.WHEEL)
    return out
