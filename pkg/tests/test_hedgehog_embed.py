import random
from itertools import combinations

import pytest

from indturan.errors import Inconclusive, InvalidArgument
from indturan.generators import complete_bipartite, even_cycle, hedgehog, powerset_incidence, w_graph
from indturan.graph_core import A, B, BipartiteGraph, induced_subgraph, are_isomorphic, Embedding
from indturan.hedgehog_embed import (
    ConditionFailed,
    check_neighborhood_condition,
    embed_bounded_degree,
    embed_powerset,
    extract_hedgehog,
    verify_bounded,
)
from indturan.search import shatter_check, verify_embedding


def test_condition_on_hedgehog_with_slack():
    g = hedgehog(4, 2, 2).graph
    cond = check_neighborhood_condition(g, range(4), 2, 1)
    assert cond.holds and not cond.boundary
    tight = check_neighborhood_condition(g, range(4), 2, 2)
    assert not tight.holds and len(tight.boundary) == 6


def test_condition_complete_graph_all_bad():
    g = complete_bipartite(4, 6)
    cond = check_neighborhood_condition(g, range(4), 2, 1)
    assert len(cond.violations) == 6 * 2


def test_condition_single_planted_edge():
    g = hedgehog(4, 2, 3).graph
    # join body vertex 3 to one vertex of U_{0,1}
    g = g.with_edges(add=[(3, 0)])
    cond = check_neighborhood_condition(g, range(4), 2, 1)
    # |N({0,1})| = 3 so rhs = 1 and y=3 now sees 1 of it; nothing else moves
    assert [(x, y) for x, y, _, _ in cond.violations] == [((0, 1), 3)]


def test_condition_needs_k_above_d():
    with pytest.raises(InvalidArgument):
        check_neighborhood_condition(hedgehog(3, 3, 1).graph, range(3), 3, 1)


@pytest.mark.parametrize("k,d,s", [(3, 2, 1), (4, 2, 1), (5, 3, 1), (5, 2, 2)])
def test_extract_recovers_hedgehog(k, d, s):
    g = hedgehog(k, d, s + 1).graph
    e = extract_hedgehog(g, range(k), d, s)
    assert verify_embedding(g, hedgehog(k, d, s), e).ok
    blocks = [set(e.b_map[i * s:(i + 1) * s]) for i in range(len(e.b_map) // s)]
    assert all(a.isdisjoint(b) for a, b in combinations(blocks, 2))


def test_extract_ignores_high_degree_extras():
    h = hedgehog(5, 2, 6).graph
    # one extra B-vertex adjacent to all of {0,1,2}
    rows = [row | (1 << h.n_b) if a < 3 else row for a, row in enumerate(h.rows_a)]
    g = BipartiteGraph(5, h.n_b + 1, tuple(rows))
    assert check_neighborhood_condition(g, range(5), 2, 1).holds
    e = extract_hedgehog(g, range(5), 2, 1)
    assert verify_embedding(g, hedgehog(5, 2, 1), e).ok
    assert h.n_b not in e.b_map


def test_extract_refuses_failing_condition():
    with pytest.raises(ConditionFailed) as exc:
        extract_hedgehog(complete_bipartite(4, 8), range(4), 2, 1)
    assert not exc.value.condition.holds


def test_bounded_single_edge():
    res = embed_bounded_degree(BipartiteGraph.complete(1, 1), 2, 0)
    assert verify_bounded(BipartiteGraph.complete(1, 1), res)


def test_bounded_c6_minimal_k():
    c6 = even_cycle(3)
    res = embed_bounded_degree(c6, 2, 0)
    assert res.k == 3 and verify_bounded(c6, res)
    # no smaller body can host it: W(2,2,0) has only 2+1 vertices
    assert w_graph(2, 2, 0).graph.num_vertices < c6.num_vertices


def test_bounded_rejects_forbidden_biclique():
    with pytest.raises(InvalidArgument, match="biclique"):
        embed_bounded_degree(complete_bipartite(3, 2), 3, 1)
    with pytest.raises(InvalidArgument, match="degree"):
        embed_bounded_degree(complete_bipartite(4, 1), 3, 0)


def test_bounded_capacity_inconclusive():
    # many degree-1 U'-vertices on one V'-vertex force padding
    g = BipartiteGraph.from_edges(1, 12, [(0, b) for b in range(12)])
    res = embed_bounded_degree(g, 2, 0, max_k=4)
    assert isinstance(res, Inconclusive)
    ok = embed_bounded_degree(g, 2, 0)
    assert verify_bounded(g, ok)


def _random_bounded(rng, n_v, n_u, d):
    edges = []
    for u in range(n_u):
        for v in rng.sample(range(n_v), rng.randint(0, min(d, n_v))):
            edges.append((v, u))
    return BipartiteGraph.from_edges(n_v, n_u, edges)


@pytest.mark.parametrize("seed", range(12))
def test_bounded_random_restriction_is_isomorphic(seed):
    rng = random.Random(seed)
    d, r = rng.choice([(2, 0), (3, 0), (3, 1)])
    g = _random_bounded(rng, rng.randint(2, 5), rng.randint(1, 6), d)
    try:
        res = embed_bounded_degree(g, d, r)
    except InvalidArgument:
        return
    assert verify_bounded(g, res)
    host = res.host.graph
    sub, _, _ = induced_subgraph(host, res.embedding.a_map, res.embedding.b_map)
    assert isinstance(are_isomorphic(sub, g), Embedding)


def test_powerset_d3():
    res = embed_powerset(3)
    pattern = powerset_incidence(4).graph
    assert verify_bounded(pattern, res)
    assert set(res.embedding.a_map) <= res.host.body
    assert shatter_check(res.host.graph, res.embedding.a_map, A)
    with pytest.raises(InvalidArgument):
        embed_powerset(2)
