import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specnet.generators import chain, ring, star
from specnet.graph import Graph, bfs_distances
from specnet.local_moments import (NodeContribution, aggregate_moments, local_moments,
                                   node_contribution)
from specnet.spectra import graph_moments, laplacian, moments_via_trace

from conftest import graphs, random_connected, random_graph


def test_contribution_degree_identities():
    g = random_graph(20, 0.3, 4)
    for i in range(g.n):
        mu = node_contribution(g, i, 1).mu
        d = g.degree(i)
        assert mu[0] == d
        assert mu[1] == d * d + d


def test_contribution_examples():
    assert node_contribution(star(10), 0, 1).mu[0] == 9
    for i in (0, 7, 19):
        assert node_contribution(ring(20), i, 1).mu.tolist() == [2, 6, 20]


def test_contribution_is_full_power_diagonal():
    g = random_graph(30, 0.12, 9)
    L = laplacian(g)
    P = np.eye(g.n)
    powers = []
    for _ in range(5):
        P = P @ L
        powers.append(np.diag(P).copy())
    for i in range(g.n):
        mu = node_contribution(g, i, 2).mu
        np.testing.assert_allclose(mu, [p[i] for p in powers], rtol=1e-12)


def test_aggregate_published_examples():
    np.testing.assert_allclose(local_moments(star(10), 2), [1.8, 10.8, 100.8, 1000.8, 10000.8],
                               rtol=1e-9)
    np.testing.assert_allclose(local_moments(chain(20), 2), [1.9, 5.6, 18.4, 63.6, 226.4],
                               rtol=1e-9)


def test_aggregate_single_node():
    assert aggregate_moments([node_contribution(Graph(1), 0, 1)]).tolist() == [0, 0, 0]


def test_aggregate_rejects_mismatch():
    with pytest.raises(ValueError):
        aggregate_moments([NodeContribution(0, np.zeros(3)), NodeContribution(1, np.zeros(5))])


def test_local_order_bound():
    with pytest.raises(ValueError, match="2r\\+1"):
        local_moments(ring(8), 1, 4)


def test_bound_is_tight_on_cycles():
    # cycle of length 2r+2 is invisible to r-balls at order 2r+2
    for r in (1, 2, 3):
        g = ring(2 * r + 2)
        K = 2 * r + 2
        local = np.mean([node_contribution(g, i, r, K).mu for i in range(g.n)], axis=0)
        exact = graph_moments(g, K)
        np.testing.assert_allclose(local[:-1], exact[:-1], rtol=1e-12)
        assert abs(local[-1] - exact[-1]) > 1e-6


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=16, connected=True), st.integers(1, 3))
def test_local_equals_global(g, r):
    K = 2 * r + 1
    np.testing.assert_allclose(local_moments(g, r), moments_via_trace(laplacian(g), K),
                               rtol=1e-8, atol=1e-12)


def test_contribution_unchanged_by_far_edits():
    g = random_connected(25, 0.1, 5)
    r = 2
    for i in range(0, 25, 6):
        before = node_contribution(g, i, r).mu
        near = bfs_distances(g, i, r + 1)
        far_pairs = [(a, b) for a in range(25) for b in range(a)
                     if a not in near and b not in near]
        h = g
        for a, b in far_pairs[:5]:
            h = h.remove_edge(a, b) if h.has_edge(a, b) else h.add_edge(a, b)
        np.testing.assert_array_equal(node_contribution(h, i, r).mu, before)
