import networkx as nx
import pytest
from hypothesis import given, settings

from specnet.generators import chain, ring, star, two_star
from specnet.graph import (Graph, GraphError, NodeSet, bridges, canonical, edit_distance_labeled,
                           format_edge_list, is_connected, local_subgraph, neighborhood,
                           parse_edge_list)

from conftest import graphs, random_graph, to_nx


def test_canonical_orientation():
    assert canonical(0, 3) == (3, 0)
    assert canonical(3, 0) == (3, 0)
    with pytest.raises(GraphError):
        canonical(2, 2)


def test_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, [(0, 3)])
    with pytest.raises(GraphError):
        Graph(3, [(1, 1)])


def test_neighborhood_star_center_sees_all():
    assert sorted(neighborhood(star(10), 0, 1)) == list(range(10))


def test_neighborhood_radius_zero():
    g = random_graph(8, 0.5, 3)
    for i in range(8):
        assert neighborhood(g, i, 0).nodes == (i,)


def test_neighborhood_anchor_first():
    s = neighborhood(ring(20), 7, 2)
    assert s.nodes[0] == 7
    assert list(s.nodes[1:]) == sorted(s.nodes[1:])


def test_neighborhood_ring_against_shortest_paths():
    g = ring(20)
    dist = dict(nx.all_pairs_shortest_path_length(to_nx(g)))
    for i in range(20):
        got = set(neighborhood(g, i, 3))
        assert got == {j for j in range(20) if dist[i][j] <= 3}
        assert len(got) == 7
        assert got == {(i + d) % 20 for d in range(-3, 4)}


def test_neighborhood_invalid_node():
    with pytest.raises(GraphError):
        neighborhood(ring(5), 5, 1)


def test_local_subgraph_pair_on_ring():
    sub = local_subgraph(ring(20), NodeSet((4, 5)))
    assert sub.n == 2 and sub.edges() == [(1, 0)]


def test_local_subgraph_star_leaves_empty():
    sub = local_subgraph(star(10), NodeSet(tuple(range(1, 10))))
    assert sub.n == 9 and sub.num_edges() == 0


def test_local_subgraph_matches_filter_oracle():
    g = random_graph(12, 0.3, 7)
    s = neighborhood(g, 0, 2)
    sub = local_subgraph(g, s)
    members = set(s)
    expected = {(a, b) for a, b in g.edges() if a in members and b in members}
    pos = s.position
    got = {(s.nodes[p], s.nodes[q]) for p, q in sub.edges()}
    assert {canonical(*e) for e in got} == expected
    assert len(pos) == sub.n


def test_add_edge_closes_triangle():
    tri = chain(3).add_edge(2, 0)
    assert tri.edges() == [(1, 0), (2, 0), (2, 1)]


def test_remove_edge_opens_ring():
    g = ring(4).remove_edge(1, 0)
    assert sorted(g.degrees()) == [1, 1, 2, 2]
    assert is_connected(g)


def test_edit_errors():
    with pytest.raises(GraphError):
        chain(3).add_edge(1, 0)
    with pytest.raises(GraphError):
        chain(3).remove_edge(2, 0)


def test_add_remove_involution():
    g = random_graph(9, 0.4, 1)
    for e in list(g.nonedges())[:10]:
        assert g.add_edge(*e).remove_edge(*e) == g
        assert edit_distance_labeled(g, g.add_edge(*e)) == 1


def test_connectivity_and_bridges_small_cases():
    p5 = chain(5)
    assert is_connected(p5)
    assert bridges(p5) == set(p5.edges())
    r5 = ring(5)
    assert is_connected(r5) and bridges(r5) == set()


def test_two_star_bridges_by_delete_and_bfs():
    g = two_star(20)
    brute = {e for e in g.edges() if not is_connected(g.remove_edge(*e))}
    assert bridges(g) == brute
    assert len(brute) == 19


def test_bridges_match_networkx():
    for seed in range(30):
        g = random_graph(15, 0.15, seed)
        ref = {canonical(a, b) for a, b in nx.bridges(to_nx(g))}
        assert bridges(g) == ref


def test_edge_list_round_trip_and_comments():
    g = two_star(8)
    text = format_edge_list(g)
    assert text.splitlines()[0] == "n 8"
    assert parse_edge_list(text) == g
    assert parse_edge_list("# header\nn 3\n1 0 # first\n\n2 1\n") == chain(3)


def test_edge_list_errors():
    with pytest.raises(GraphError):
        parse_edge_list("1 0\n")
    with pytest.raises(GraphError):
        parse_edge_list("n 3\n1 0\n0 1\n")


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_structure_invariants(g):
    for i in range(g.n):
        for j in g.neighbors(i):
            assert i in g.neighbors(j) and i != j
        assert len(neighborhood(g, i, 1)) == g.degree(i) + 1
        for r in range(3):
            assert set(neighborhood(g, i, r)) <= set(neighborhood(g, i, r + 1))
    assert parse_edge_list(format_edge_list(g)) == g


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=10, connected=True))
def test_bridge_iff_disconnecting(g):
    b = bridges(g)
    for e in g.edges():
        assert is_connected(g.remove_edge(*e)) == (e not in b)
