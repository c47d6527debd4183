"""Immutable simple undirected graphs, r-ball neighborhoods and edits.

Edges are stored canonically as ``(i, j)`` with ``i > j``; the larger index
is the edge's master node.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator


Edge = tuple[int, int]


class GraphError(ValueError):
    pass


def canonical(i: int, j: int) -> Edge:
    if i == j:
        raise GraphError(f"self-loop ({i}, {j}) is not allowed")
    return (i, j) if i > j else (j, i)


class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    Instances are treated as immutable; ``add_edge``/``remove_edge`` return
    new graphs. All adjacency reads go through :meth:`neighbors`, which makes
    access auditing possible by subclassing.
    """

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("node count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            i, j = canonical(int(a), int(b))
            if not (0 <= j and i < n):
                raise GraphError(f"edge ({a}, {b}) out of range for n={n}")
            adj[i].add(j)
            adj[j].add(i)
        self.n = n
        self._adj = tuple(frozenset(s) for s in adj)

    @classmethod
    def _from_adj(cls, adj: tuple[frozenset[int], ...]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(adj)
        g._adj = adj
        return g

    def _check(self, i: int) -> None:
        if not 0 <= i < self.n:
            raise GraphError(f"invalid node index {i} (n={self.n})")

    def neighbors(self, i: int) -> frozenset[int]:
        self._check(i)
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and j in self.neighbors(i)

    def edges(self) -> list[Edge]:
        """All edges, canonical and sorted."""
        return sorted((i, j) for i in range(self.n) for j in self._adj[i] if i > j)

    def num_edges(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def nonedges(self) -> Iterator[Edge]:
        for i in range(self.n):
            adj = self._adj[i]
            for j in range(i):
                if j not in adj:
                    yield (i, j)

    def add_edge(self, i: int, j: int) -> "Graph":
        i, j = canonical(i, j)
        self._check(i)
        self._check(j)
        if j in self._adj[i]:
            raise GraphError(f"edge ({i}, {j}) already present")
        adj = list(self._adj)
        adj[i] = adj[i] | {j}
        adj[j] = adj[j] | {i}
        return Graph._from_adj(tuple(adj))

    def remove_edge(self, i: int, j: int) -> "Graph":
        i, j = canonical(i, j)
        self._check(i)
        self._check(j)
        if j not in self._adj[i]:
            raise GraphError(f"edge ({i}, {j}) is absent")
        adj = list(self._adj)
        adj[i] = adj[i] - {j}
        adj[j] = adj[j] - {i}
        return Graph._from_adj(tuple(adj))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges()})"


@dataclass(frozen=True)
class NodeSet:
    """Ordered node list with a position index.

    When built from a neighborhood the anchor node sits at position 0 and
    the remaining nodes follow in ascending order.
    """

    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise GraphError("duplicate node in NodeSet")

    @property
    def position(self) -> dict[int, int]:
        return {v: p for p, v in enumerate(self.nodes)}

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.nodes)

    def __contains__(self, v: object) -> bool:
        return v in self.nodes

    def as_set(self) -> frozenset[int]:
        return frozenset(self.nodes)

    @classmethod
    def anchored(cls, anchor: int, members: Iterable[int]) -> "NodeSet":
        rest = sorted(set(members) - {anchor})
        return cls((anchor, *rest))


def bfs_distances(g: Graph, source: int, radius: int | None = None) -> dict[int, int]:
    """Hop distances from ``source``, truncated at ``radius`` if given."""
    g._check(source)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if radius is not None and d >= radius:
            continue
        for v in g.neighbors(u):
            if v not in dist:
                dist[v] = d + 1
                queue.append(v)
    return dist


def neighborhood(g: Graph, i: int, r: int) -> NodeSet:
    """The r-ball around ``i`` (``i`` first)."""
    if r < 0:
        raise GraphError("radius must be >= 0")
    return NodeSet.anchored(i, bfs_distances(g, i, r))


def local_subgraph(g: Graph, s: NodeSet | Iterable[int]) -> Graph:
    """Induced subgraph on ``s``, re-indexed by position in ``s``."""
    if not isinstance(s, NodeSet):
        s = NodeSet(tuple(s))
    pos = s.position
    edges = []
    for p, v in enumerate(s.nodes):
        for w in g.neighbors(v):
            q = pos.get(w)
            if q is not None and q < p:
                edges.append((p, q))
    return Graph(len(s), edges)


def components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = sorted(bfs_distances(g, s))
        for v in comp:
            seen[v] = True
        out.append(comp)
    return out


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(bfs_distances(g, 0)) == g.n


def bridges(g: Graph) -> set[Edge]:
    """Bridges via iterative Tarjan low-link."""
    disc = [-1] * g.n
    low = [0] * g.n
    out: set[Edge] = set()
    timer = 0
    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(sorted(g.neighbors(root))))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for v in it:
                if v == parent:
                    continue
                if disc[v] == -1:
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, u, iter(sorted(g.neighbors(v)))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[v])
            if advanced:
                continue
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    out.add(canonical(u, parent))
    return out


def edit_distance_labeled(a: Graph, b: Graph) -> int:
    """Symmetric difference of edge sets (labeled graphs, same n)."""
    if a.n != b.n:
        raise GraphError("graphs differ in node count")
    return len(set(a.edges()) ^ set(b.edges()))


# -- edge-list text format ---------------------------------------------------

def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines += [f"{i} {j}" for i, j in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphError(f"line {lineno}: expected header 'n <count>'")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'i j'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise GraphError("missing 'n <count>' header")
    g = Graph(n, edges)
    if g.num_edges() != len(edges):
        raise GraphError("duplicate edges in edge list")
    return g


def read_edge_list(path) -> Graph:
    with open(path) as fh:
        try:
            return parse_edge_list(fh.read())
        except GraphError as exc:
            raise GraphError(f"{path}: {exc}") from None


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))
