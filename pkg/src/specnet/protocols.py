"""Synchronous-round message passing and the distributed primitives run on it.

Nodes only talk to their current first-order neighbors. A message sent in
round ``s`` becomes readable in round ``s + 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .graph import Edge, Graph, canonical

SENTINEL_D = 1e18


class ConsensusError(RuntimeError):
    pass


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if hasattr(obj, "as_dict"):
        return _jsonable(obj.as_dict())
    return obj


class SimNetwork:
    """Round-synchronous broadcast network over a fixed graph snapshot."""

    def __init__(self, graph: Graph, seed: int = 0, record: bool = False):
        self.graph = graph
        self.seed = seed
        self.round = 0
        self._outbox: dict[int, Any] = {}
        self._inbox: list[dict[int, Any]] = [dict() for _ in range(graph.n)]
        self.record = record
        self.transcript: list[dict[str, Any]] = []

    @property
    def n(self) -> int:
        return self.graph.n

    def send(self, node: int, payload: Any) -> None:
        """Stage ``payload`` for delivery to every neighbor of ``node``."""
        self._outbox[node] = payload

    def step(self) -> None:
        """Close the current round: staged messages become readable."""
        if self.record:
            for node in sorted(self._outbox):
                self.transcript.append({"round": self.round, "node": node,
                                        "payload": _jsonable(self._outbox[node])})
        inbox: list[dict[int, Any]] = [dict() for _ in range(self.n)]
        for node, payload in self._outbox.items():
            for nb in self.graph.neighbors(node):
                inbox[nb][node] = payload
        self._inbox = inbox
        self._outbox = {}
        self.round += 1

    def receive(self, node: int) -> dict[int, Any]:
        return self._inbox[node]

    def exchange(self, payloads: Sequence[Any]) -> list[dict[int, Any]]:
        """Everyone broadcasts, one round passes, everyone reads."""
        for node, p in enumerate(payloads):
            self.send(node, p)
        self.step()
        return [self.receive(k) for k in range(self.n)]

    def dump_transcript(self, path) -> None:
        with open(path, "w") as fh:
            for rec in self.transcript:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


# -- average consensus ---------------------------------------------------------

@dataclass
class AverageResult:
    values: np.ndarray  # shape (n, dim)
    rounds: int
    spread: float


def _spread(X: np.ndarray) -> float:
    return float(np.max(X.max(axis=0) - X.min(axis=0))) if X.size else 0.0


def average_consensus(net: SimNetwork, values, tol: float = 1e-9,
                      max_rounds: int = 100_000) -> AverageResult:
    """Metropolis-weighted linear averaging until the spread drops below ``tol``."""
    X = np.array(values, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    deg = np.array(net.graph.degrees())
    rounds = 0
    spread = _spread(X)
    while spread >= tol:
        if rounds >= max_rounds:
            raise ConsensusError(f"average consensus not reached in {max_rounds} rounds "
                                 f"(spread {spread:.3e})")
        inbox = net.exchange([(int(deg[k]), X[k]) for k in range(net.n)])
        new = X.copy()
        for k in range(net.n):
            for l, (dl, xl) in sorted(inbox[k].items()):
                w = 1.0 / (1.0 + max(deg[k], dl))
                new[k] += w * (xl - X[k])
        X = new
        rounds += 1
        spread = _spread(X)
    return AverageResult(X, rounds, spread)


def exact_average(values) -> np.ndarray:
    return np.mean(np.asarray(values, dtype=float), axis=0)


# -- connectivity verification by max consensus -------------------------------

@dataclass
class DeletionCheck:
    safe: dict[int, set[Edge]]         # master -> critical edges safe to delete
    rounds: int                        # max-consensus rounds executed (tau)
    settled_round: int                 # last round in which any entry changed
    state: np.ndarray = field(repr=False)  # final x, shape (n, |critical|)


def verify_deletions(net: SimNetwork, critical: Iterable[Edge],
                     rounds: int | None = None) -> DeletionCheck:
    """Decide which critical edges can be removed without disconnecting.

    One max-consensus entry per critical edge runs on the graph with that
    edge virtually cut: its two endpoints ignore each other's value for
    that entry and nothing else. Values start distinct (``x_k = k``), so
    after ``tau >= diameter`` rounds the two endpoints agree exactly when
    they are still in the same component.
    """
    edges = sorted({canonical(*e) for e in critical})
    for e in edges:
        if not net.graph.has_edge(*e):
            raise ValueError(f"critical edge {e} not in graph")
    n = net.n
    tau = n if rounds is None else rounds
    col = {e: c for c, e in enumerate(edges)}
    X = np.repeat(np.arange(n, dtype=float)[:, None], len(edges), axis=1)
    # blocked[k][l] -> column cut between k and neighbor l
    blocked: dict[int, dict[int, int]] = {}
    for (a, b), c in col.items():
        blocked.setdefault(a, {})[b] = c
        blocked.setdefault(b, {})[a] = c

    settled = 0
    for s in range(1, tau + 1):
        inbox = net.exchange(list(X))
        new = X.copy()
        for k in range(n):
            cut = blocked.get(k, {})
            for l, xl in inbox[k].items():
                c = cut.get(l)
                if c is None:
                    np.maximum(new[k], xl, out=new[k])
                else:
                    keep = xl.copy()
                    keep[c] = -np.inf
                    np.maximum(new[k], keep, out=new[k])
        if not np.array_equal(new, X):
            settled = s
        X = new

    # master k fetches the far endpoint's entry over the physical link
    inbox = net.exchange(list(X))
    safe: dict[int, set[Edge]] = {}
    for (k, i), c in col.items():
        if X[k, c] == inbox[k][i][c]:
            safe.setdefault(k, set()).add((k, i))
    return DeletionCheck(safe, tau, settled, X)


# -- election of the globally best action ----------------------------------------

@dataclass(frozen=True)
class ActionRecord:
    master: int
    partner: int          # -1 for the "no beneficial action" record
    sd: float
    moments: tuple[float, ...]

    def key(self) -> tuple[float, int, int]:
        return (self.sd, -self.master, -self.partner)

    @property
    def is_sentinel(self) -> bool:
        return self.sd >= SENTINEL_D

    def as_dict(self) -> dict[str, Any]:
        return {"master": self.master, "partner": self.partner, "sd": self.sd,
                "moments": list(self.moments)}


def sentinel_record(master: int, moments: Sequence[float], D: float = SENTINEL_D) -> ActionRecord:
    return ActionRecord(master, -1, D, tuple(float(x) for x in moments))


def elect_global_action(net: SimNetwork, local: Sequence[ActionRecord],
                        rounds: int | None = None) -> list[ActionRecord]:
    """Min-consensus over action records; returns every node's final record.

    Order: smaller ``sd`` first, then larger master index, then larger
    partner index.
    """
    if len(local) != net.n:
        raise ValueError("need exactly one record per node")
    tau = net.n if rounds is None else rounds
    b = list(local)
    for _ in range(tau):
        inbox = net.exchange(b)
        b = [min([b[k], *inbox[k].values()], key=ActionRecord.key) for k in range(net.n)]
    return b
