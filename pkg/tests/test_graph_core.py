import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bipartite_graphs
from indturan.errors import Inconclusive, InvalidArgument, ParseError
from indturan.generators import complete_bipartite, even_cycle, hedgehog, one_subdivision, w_graph
from indturan.graph_core import (
    A,
    B,
    BipartiteGraph,
    Embedding,
    GeneralGraph,
    MarkedGraph,
    are_isomorphic,
    common_neighborhood,
    induced_subgraph,
    parse_graph,
    serialize_graph,
    serialize_marked,
    to_dot,
)
from oracles import naive_common_neighborhood, naive_isomorphic


def test_invariants_enforced():
    with pytest.raises(InvalidArgument):
        BipartiteGraph(2, 2, (0b100, 0))
    with pytest.raises(InvalidArgument):
        BipartiteGraph.from_edges(2, 2, [(2, 0)])
    with pytest.raises(InvalidArgument):
        GeneralGraph.from_edges(3, [(1, 1)])
    with pytest.raises(InvalidArgument):
        MarkedGraph(BipartiteGraph.empty(2, 2), frozenset({2}))


def test_common_neighborhood_examples():
    h = hedgehog(3, 2, 1).graph
    assert common_neighborhood(h, [], A) == {0, 1, 2}
    assert len(common_neighborhood(h, [0], A)) == 2
    big = hedgehog(5, 3, 2).graph
    assert len(common_neighborhood(big, [0, 2, 4], A)) == 2
    assert common_neighborhood(h, [(B, 0), (B, 1)]) == common_neighborhood(h, [0, 1], B)


def test_common_neighborhood_rejects_mixed_parts():
    h = hedgehog(3, 2, 1).graph
    with pytest.raises(InvalidArgument):
        common_neighborhood(h, [(A, 0), (B, 0)])


@given(bipartite_graphs(), st.data())
def test_common_neighborhood_is_intersection(g, data):
    s = data.draw(st.sets(st.integers(0, max(g.n_a - 1, 0)), max_size=g.n_a)) if g.n_a else set()
    got = common_neighborhood(g, s, A)
    assert got == naive_common_neighborhood(g, s)
    expect = set(range(g.n_b))
    for u in s:
        expect &= common_neighborhood(g, [u], A)
    assert got == expect


@given(bipartite_graphs())
def test_edge_count_both_views(g):
    assert sum(bin(r).count("1") for r in g.rows_a) == sum(bin(r).count("1") for r in g.rows_b) == g.num_edges
    assert g.transpose().transpose() == g


def test_induced_subgraph_examples():
    g = w_graph(4, 3, 1).graph
    same, _, _ = induced_subgraph(g, range(g.n_a), range(g.n_b))
    assert same == g
    empty, _, _ = induced_subgraph(g, [], range(g.n_b))
    assert empty.n_a == 0 and empty.num_edges == 0
    sub, a_idx, b_idx = induced_subgraph(g, range(4), [g.n_b - 1])
    assert sub == complete_bipartite(4, 1) and sub.num_edges == 4
    assert b_idx == (g.n_b - 1,)
    with pytest.raises(InvalidArgument):
        induced_subgraph(g, [9], [])


@given(bipartite_graphs(), st.data())
def test_induced_subgraph_keeps_exact_edges(g, data):
    a_sub = data.draw(st.sets(st.integers(0, max(g.n_a - 1, 0)))) if g.n_a else set()
    b_sub = data.draw(st.sets(st.integers(0, max(g.n_b - 1, 0)))) if g.n_b else set()
    sub, a_idx, b_idx = induced_subgraph(g, a_sub, b_sub)
    for i, a in enumerate(a_idx):
        for j, b in enumerate(b_idx):
            assert sub.has_edge(i, j) == g.has_edge(a, b)


def test_isomorphism_examples():
    h = hedgehog(3, 2, 1).graph
    e = are_isomorphic(h, h)
    assert isinstance(e, Embedding)
    c6 = one_subdivision(3, [(0, 1), (0, 2), (1, 2)])
    assert isinstance(are_isomorphic(w_graph(3, 2, 0).graph, c6), Embedding)
    assert are_isomorphic(h, hedgehog(3, 2, 2).graph) is None


def test_isomorphism_budget_is_inconclusive():
    g = even_cycle(8)
    h = BipartiteGraph.from_edges(8, 8, [(i, i) for i in range(8)] + [(i, (i + 1) % 4 + 4 * (i // 4)) for i in range(8)])
    res = are_isomorphic(g, h, node_budget=3)
    assert isinstance(res, Inconclusive) or res is None


def test_isomorphism_across_sides():
    g = BipartiteGraph.from_edges(1, 2, [(0, 0), (0, 1)])
    assert are_isomorphic(g, g.transpose()) is None
    e = are_isomorphic(g, g.transpose(), respect_sides=False)
    assert isinstance(e, Embedding) and e.swapped


@given(bipartite_graphs(max_a=5, max_b=5), st.data())
def test_isomorphism_finds_relabellings(g, data):
    pa = data.draw(st.permutations(range(g.n_a)))
    pb = data.draw(st.permutations(range(g.n_b)))
    h = BipartiteGraph.from_edges(g.n_a, g.n_b, [(pa[a], pb[b]) for a, b in g.edges()])
    assert isinstance(are_isomorphic(g, h), Embedding)
    assert isinstance(are_isomorphic(h, g), Embedding)


@given(bipartite_graphs(max_a=4, max_b=4), bipartite_graphs(max_a=4, max_b=4))
def test_isomorphism_decision_matches_oracle(g, h):
    got = are_isomorphic(g, h)
    assert isinstance(got, Embedding) == naive_isomorphic(g, h)
    assert isinstance(are_isomorphic(h, g), Embedding) == isinstance(got, Embedding)


def test_parse_examples():
    g = parse_graph("p bip 2 2 1\ne 0 0\n")
    assert g.num_edges == 1 and g.has_edge(0, 0)
    h = hedgehog(3, 2, 1)
    assert parse_graph(serialize_graph(h.graph)) == h.graph
    m = parse_graph(serialize_marked(h))
    assert isinstance(m, MarkedGraph) and m.body == h.body and m.graph == h.graph


@pytest.mark.parametrize(
    "text, line",
    [
        ("p bip 2 2 1\ne 5 0\n", 2),
        ("p bip 2 2 2\ne 0 0\ne 0 0\n", 3),
        ("p bip 2 x 1\n", 1),
        ("e 0 0\n", 1),
        ("p bip 2 2 2\ne 0 0\n", None),
        ("p bip 2 2 0\np bip 2 2 0\n", 2),
        ("p gen 3 1\ne 1 1\n", 2),
    ],
)
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_graph(text)
    if line is not None:
        assert exc.value.line == line


@given(bipartite_graphs(max_a=8, max_b=8))
def test_round_trip(g):
    assert parse_graph(serialize_graph(g)) == g


def test_general_round_trip_and_dot():
    t = GeneralGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    back = parse_graph(serialize_graph(t))
    assert back.edges() == t.edges()
    dot = to_dot(hedgehog(3, 2, 1))
    assert dot.startswith("graph G {") and dot.count("--") == 6


def test_embedding_json_round_trip():
    e = Embedding((0, 2), (1,), swapped=True, induced=True, body_target=(B, frozenset({0, 2})))
    assert Embedding.from_json(e.to_json()) == e
    assert e.host_part(A) == B and not e.respects_sides
