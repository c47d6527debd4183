"""Benchmark topologies and seeded random graph models."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .graph import Graph, GraphError, is_connected

FAMILIES = ("star", "two_star", "chain", "ring", "complete",
            "watts_strogatz", "barabasi_albert", "erdos_renyi")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise GraphError(msg)


def star(n: int) -> Graph:
    _need(n >= 2, "star needs n >= 2")
    return Graph(n, [(v, 0) for v in range(1, n)])


def two_star(n: int) -> Graph:
    """Hubs 0 and 1 joined, each carrying (n-2)/2 leaves."""
    _need(n >= 4 and n % 2 == 0, "two_star needs even n >= 4")
    half = (n - 2) // 2
    edges = [(1, 0)]
    edges += [(v, 0) for v in range(2, 2 + half)]
    edges += [(v, 1) for v in range(2 + half, n)]
    return Graph(n, edges)


def chain(n: int) -> Graph:
    _need(n >= 2, "chain needs n >= 2")
    return Graph(n, [(v, v - 1) for v in range(1, n)])


def ring(n: int) -> Graph:
    _need(n >= 3, "ring needs n >= 3")
    return Graph(n, [(v, v - 1) for v in range(1, n)] + [(n - 1, 0)])


def complete(n: int) -> Graph:
    _need(n >= 1, "complete needs n >= 1")
    return Graph(n, [(i, j) for i in range(n) for j in range(i)])


def watts_strogatz(n: int, k: int, p: float, seed: int | None = None) -> Graph:
    """Ring plus chords to every node within ring distance ``k``, then each
    remaining pair added independently with probability ``p`` (no rewiring)."""
    _need(n >= 3, "watts_strogatz needs n >= 3")
    _need(k >= 1, "k must be >= 1")
    _need(0.0 <= p <= 1.0, "p must lie in [0, 1]")
    edges = set()
    for v in range(n):
        for d in range(1, k + 1):
            w = (v + d) % n
            if w != v:
                edges.add((max(v, w), min(v, w)))
    rng = np.random.default_rng(seed)
    for i in range(n):
        for j in range(i):
            if (i, j) not in edges and rng.random() < p:
                edges.add((i, j))
    return Graph(n, edges)


def barabasi_albert(n: int, m: int, seed: int | None = None) -> Graph:
    """Preferential attachment grown from a clique on ``m + 1`` nodes."""
    _need(1 <= m < n, "barabasi_albert needs 1 <= m < n")
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(m + 1) for j in range(i)]
    deg = np.zeros(n)
    deg[: m + 1] = m
    for v in range(m + 1, n):
        w = deg[:v] / deg[:v].sum()
        targets = rng.choice(v, size=m, replace=False, p=w)
        for t in sorted(int(x) for x in targets):
            edges.append((v, t))
            deg[t] += 1
        deg[v] = m
    return Graph(n, edges)


def erdos_renyi_connected(n: int, p: float, seed: int | None = None,
                          max_attempts: int = 1000) -> Graph:
    """G(n, p) resampled until connected."""
    _need(n >= 1, "n must be >= 1")
    _need(0.0 < p <= 1.0, "p must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i)]
    for _ in range(max_attempts):
        keep = rng.random(len(pairs)) < p
        g = Graph(n, [e for e, k in zip(pairs, keep) if k])
        if is_connected(g):
            return g
    raise GraphError(f"no connected G({n}, {p}) in {max_attempts} attempts")


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None

    def build(self) -> Graph:
        f, n, pr = self.family, self.n, self.params
        if f == "star":
            return star(n)
        if f == "two_star":
            return two_star(n)
        if f == "chain":
            return chain(n)
        if f == "ring":
            return ring(n)
        if f == "complete":
            return complete(n)
        if f == "watts_strogatz":
            return watts_strogatz(n, int(pr.get("k", 2)), float(pr.get("p", 0.0)), self.seed)
        if f == "barabasi_albert":
            return barabasi_albert(n, int(pr.get("m", 1)), self.seed)
        if f == "erdos_renyi":
            return erdos_renyi_connected(n, float(pr.get("p", 0.5)), self.seed)
        raise GraphError(f"unknown family {f!r}; choose from {', '.join(FAMILIES)}")

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GenSpec":
        d = dict(d)
        family = d.pop("family")
        n = int(d.pop("n"))
        seed = d.pop("seed", None)
        params = dict(d.pop("params", {}))
        params.update(d)
        return cls(family, n, params, seed)
