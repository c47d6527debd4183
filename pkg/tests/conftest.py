import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from specnet.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_nx(h: nx.Graph) -> Graph:
    mapping = {v: k for k, v in enumerate(sorted(h.nodes()))}
    return Graph(len(mapping), [(mapping[a], mapping[b]) for a, b in h.edges()])


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    return Graph(n, [(i, j) for i in range(n) for j in range(i) if rng.random() < p])


def random_connected(n: int, p: float, seed: int) -> Graph:
    """Random graph made connected by chaining its components."""
    g = random_graph(n, p, seed)
    h = to_nx(g)
    comps = [sorted(c) for c in nx.connected_components(h)]
    for a, b in zip(comps, comps[1:]):
        h.add_edge(a[0], b[0])
    return from_nx(h)


@st.composite
def graphs(draw, min_n=1, max_n=12, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    g = Graph(n, [e for e, b in zip(pairs, bits) if b])
    if connected:
        h = to_nx(g)
        comps = [sorted(c) for c in nx.connected_components(h)]
        for a, b in zip(comps, comps[1:]):
            h.add_edge(a[0], b[0])
        g = from_nx(h)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def report_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
