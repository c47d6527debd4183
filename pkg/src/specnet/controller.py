"""Greedy decentralized topology design.

Every round each master agent scores its local edge additions and its
certified-safe deletions by the exact moment increments they cause, the
agents elect the single best action network-wide, and that one edit is
applied. The loop stops when no agent can strictly lower the moment-space
pseudodistance to the target.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Literal, Sequence

import numpy as np

from .graph import (Edge, Graph, NodeSet, bfs_distances, canonical, is_connected,
                    local_subgraph, neighborhood)
from .local_moments import node_contribution
from .perturbation import trace_delta
from .protocols import (SENTINEL_D, ActionRecord, SimNetwork, average_consensus,
                        elect_global_action, exact_average, sentinel_record,
                        verify_deletions)
from .spectra import csv_row, laplacian, moments_from_spectrum, spectral_pseudodistance

log = logging.getLogger(__name__)

SafetyRule = Literal["paper", "subgraph-reachability"]
ConsensusMode = Literal["exact", "protocol"]


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralTarget:
    moments: np.ndarray  # m_1..m_K

    @classmethod
    def from_eigenvalues(cls, eigenvalues: Sequence[float], K: int) -> "SpectralTarget":
        return cls(moments_from_spectrum(eigenvalues, K))

    @classmethod
    def from_moments(cls, moments: Sequence[float]) -> "SpectralTarget":
        return cls(np.asarray(moments, dtype=float))

    @property
    def K(self) -> int:
        return self.moments.size


@dataclass(frozen=True)
class RunConfig:
    target: SpectralTarget
    r: int = 2
    max_iters: int | None = None      # None -> 10 n
    seed: int = 0
    D: float = SENTINEL_D
    safety_rule: SafetyRule = "subgraph-reachability"
    consensus: ConsensusMode = "exact"
    consensus_tol: float = 1e-9
    order: int | None = None          # moments matched; None -> 2r + 1

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.order is not None and not 1 <= self.order <= 2 * self.r + 1:
            raise ValueError(f"order {self.order} outside 1..2r+1 = {2 * self.r + 1}")
        if self.target.K < self.K:
            raise ValueError(f"target provides {self.target.K} moments, need K={self.K}")
        if self.safety_rule not in ("paper", "subgraph-reachability"):
            raise ValueError(f"unknown safety rule {self.safety_rule!r}")
        if self.consensus not in ("exact", "protocol"):
            raise ValueError(f"unknown consensus mode {self.consensus!r}")

    @property
    def K(self) -> int:
        return 2 * self.r + 1 if self.order is None else self.order

    def iteration_cap(self, n: int) -> int:
        return 10 * n if self.max_iters is None else self.max_iters


@dataclass
class AgentState:
    id: int
    ball: NodeSet           # N_{i,r}, anchor first
    view: Graph             # G_{i,r}, indexed by ball position
    moments: np.ndarray
    sd: float
    masters_del: set[Edge]
    masters_add: set[Edge]


@dataclass
class World:
    graph: Graph
    agents: list[AgentState]
    t: int = 0
    converged: bool = False


@dataclass(frozen=True)
class TraceRow:
    t: int
    kind: str               # "add" | "delete" | "none"
    edge: tuple[int, int]   # (-1, -1) for "none"
    d_K: float
    moments: tuple[float, ...]

    def csv(self) -> str:
        i, j = self.edge
        return f"{self.t},{self.kind},{i},{j}," + csv_row([self.d_K, *self.moments])


def trace_header(K: int) -> str:
    return "t,kind,i,j,d_K," + ",".join(f"m_{k}" for k in range(1, K + 1))


# -- masters and critical edges ----------------------------------------------------

def assign_masters(g: Graph, r: int) -> list[tuple[set[Edge], set[Edge]]]:
    """Per node ``(D_i, A_i)``: edges and r-local nonedges it is master of."""
    out = []
    for i in range(g.n):
        nb = g.neighbors(i)
        dels = {(i, j) for j in nb if j < i}
        ball = bfs_distances(g, i, r)
        adds = {(i, k) for k in ball if k < i and k not in nb}
        out.append((dels, adds))
    return out


def _reachable_without(g: Graph, ball: frozenset[int], i: int, j: int) -> bool:
    """Is ``j`` reachable from ``i`` inside ``ball`` once edge (i, j) is cut?"""
    seen = {i}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if v not in ball or v in seen or (u == i and v == j):
                continue
            if v == j:
                return True
            seen.add(v)
            queue.append(v)
    return False


def critical_edges(g: Graph, r: int, rule: SafetyRule = "subgraph-reachability") -> set[Edge]:
    """Edges whose deletion the master cannot certify from its own r-ball."""
    out = set()
    balls: dict[int, frozenset[int]] = {}
    for i, j in g.edges():
        if i not in balls:
            balls[i] = frozenset(bfs_distances(g, i, r))
        ball = balls[i]
        if rule == "paper":
            if len(g.neighbors(j) & ball) == 1:
                out.add((i, j))
        elif rule == "subgraph-reachability":
            if not _reachable_without(g, ball, i, j):
                out.add((i, j))
        else:
            raise ValueError(f"unknown safety rule {rule!r}")
    return out


# -- agents ------------------------------------------------------------------------

def _agent_views(g: Graph, r: int, moments: Sequence[np.ndarray],
                 target: SpectralTarget, K: int) -> list[AgentState]:
    masters = assign_masters(g, r)
    agents = []
    for i in range(g.n):
        ball = neighborhood(g, i, r)
        m = np.array(moments[i], dtype=float)
        sd = spectral_pseudodistance(m, target.moments, K)
        dels, adds = masters[i]
        agents.append(AgentState(i, ball, local_subgraph(g, ball), m, sd, dels, adds))
    return agents


def init_world(g0: Graph, config: RunConfig) -> World:
    if not is_connected(g0):
        raise DisconnectedGraphError("initial graph must be connected")
    K = config.K
    mus = np.array([node_contribution(g0, i, config.r, K).mu for i in range(g0.n)])
    if config.consensus == "exact":
        moments = [exact_average(mus)] * g0.n
    else:
        net = SimNetwork(g0, config.seed)
        moments = list(average_consensus(net, mus, tol=config.consensus_tol).values)
    return World(g0, _agent_views(g0, config.r, moments, config.target, K))


def best_local_action(agent: AgentState, deletable: set[Edge], g: Graph, config: RunConfig,
                      rng: np.random.Generator | None = None,
                      balls: dict[int, frozenset[int]] | None = None,
                      L: np.ndarray | None = None) -> ActionRecord:
    """The master's best strictly-improving edit, or its sentinel record."""
    i, r, K, n = agent.id, config.r, config.K, g.n
    if balls is None:
        balls = {}

    def ball(v: int) -> frozenset[int]:
        if v not in balls:
            balls[v] = frozenset(bfs_distances(g, v, r))
        return balls[v]

    cands = [(e, "add") for e in sorted(agent.masters_add)]
    cands += [(e, "delete") for e in sorted(deletable)]
    best_sd = np.inf
    best: list[tuple[Edge, np.ndarray]] = []
    for (a, b), kind in cands:
        union = NodeSet.anchored(a, ball(a) | ball(b))
        dtr, _ = trace_delta(g, (a, b), kind, r, union, L)
        trial = agent.moments + dtr[:K] / n
        sd = spectral_pseudodistance(trial, config.target.moments, K)
        if sd < best_sd:
            best_sd, best = sd, [((a, b), trial)]
        elif sd == best_sd:
            best.append(((a, b), trial))
    if not best or not best_sd < agent.sd:
        return sentinel_record(i, agent.moments, config.D)
    pick = 0
    if len(best) > 1:
        rng = rng if rng is not None else np.random.default_rng()
        pick = int(rng.integers(len(best)))
    (a, b), trial = best[pick]
    return ActionRecord(a, b, float(best_sd), tuple(float(x) for x in trial))


@dataclass
class RoundInfo:
    critical: set[Edge]
    safe: dict[int, set[Edge]]
    local: list[ActionRecord]
    elected: list[ActionRecord]
    settled_round: int


def design_step(world: World, config: RunConfig, info: list[RoundInfo] | None = None,
                transcript: list[dict] | None = None) -> tuple[World, TraceRow]:
    """One full round: certify deletions, score local actions, elect, apply."""
    g = world.graph
    n, K = g.n, config.K
    if world.converged:
        a0 = world.agents[0]
        return world, TraceRow(world.t, "none", (-1, -1), a0.sd, tuple(a0.moments))
    if not is_connected(g):
        raise DisconnectedGraphError(f"G({world.t}) is disconnected")

    net = SimNetwork(g, config.seed, record=transcript is not None)
    crit = critical_edges(g, config.r, config.safety_rule)
    check = verify_deletions(net, crit)
    balls: dict[int, frozenset[int]] = {}
    L = laplacian(g)
    local = []
    for agent in world.agents:
        i = agent.id
        deletable = {e for e in agent.masters_del if e not in crit} | check.safe.get(i, set())
        rng = np.random.default_rng([config.seed, world.t, i])
        local.append(best_local_action(agent, deletable, g, config, rng, balls, L))
    elected = elect_global_action(net, local)
    if transcript is not None:
        transcript.extend({"t": world.t, **rec} for rec in net.transcript)
    if info is not None:
        info.append(RoundInfo(crit, check.safe, local, elected, check.settled_round))
    winner = elected[0]
    assert all(b == winner for b in elected), "election did not reach agreement"

    if winner.is_sentinel:
        world = replace(world, converged=True)
        a0 = world.agents[0]
        return world, TraceRow(world.t, "none", (-1, -1), a0.sd, tuple(a0.moments))

    i, j = winner.master, winner.partner
    if g.has_edge(i, j):
        kind, g2 = "delete", g.remove_edge(i, j)
    else:
        kind, g2 = "add", g.add_edge(i, j)
    if not is_connected(g2):
        raise DisconnectedGraphError(f"edit {kind} ({i}, {j}) disconnected the network")
    moments = np.array(winner.moments)
    agents = _agent_views(g2, config.r, [moments] * n, config.target, K)
    for a in agents:
        a.sd = winner.sd
    row = TraceRow(world.t + 1, kind, (i, j), winner.sd, winner.moments)
    log.debug("t=%d %s (%d, %d) d_K=%.6g", row.t, kind, i, j, winner.sd)
    return World(g2, agents, world.t + 1, False), row


@dataclass
class RunResult:
    graph: Graph
    trace: list[TraceRow]
    converged: bool
    world: World
    initial_sd: float = field(default=float("nan"))

    @property
    def final_sd(self) -> float:
        return self.trace[-1].d_K if self.trace else self.initial_sd

    def trace_csv(self, K: int) -> str:
        return "\n".join([trace_header(K)] + [row.csv() for row in self.trace]) + "\n"


def run_design(g0: Graph, config: RunConfig,
               transcript: list[dict] | None = None) -> RunResult:
    world = init_world(g0, config)
    initial_sd = world.agents[0].sd
    trace: list[TraceRow] = []
    for _ in range(config.iteration_cap(g0.n)):
        world, row = design_step(world, config, transcript=transcript)
        if world.converged:
            break
        trace.append(row)
    return RunResult(world.graph, trace, world.converged, world, initial_sd)
