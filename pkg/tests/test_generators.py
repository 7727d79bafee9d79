from collections import Counter
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from indturan.errors import InvalidArgument
from indturan.generators import (
    HedgehogParams,
    WParams,
    complete_bipartite,
    deletion_construct,
    dsets_colex,
    even_cycle,
    gamma,
    hedgehog,
    hedgehog_block,
    powerset_incidence,
    random_bipartite,
    turan_graph,
    w_graph,
    w_y_vertices,
)
from indturan.graph_core import A, B, BipartiteGraph, Embedding, are_isomorphic, common_neighborhood
from indturan.search import find_biclique
from oracles import naive_contains


def test_hedgehog_small_cases():
    h = hedgehog(3, 2, 1)
    assert (h.graph.n_a, h.graph.n_b, h.graph.num_edges) == (3, 3, 6)
    assert set(h.graph.degrees(B)) == {2}
    big = hedgehog(HedgehogParams(5, 3, 2)).graph
    assert big.n_b == 20 and big.num_edges == 60
    assert isinstance(are_isomorphic(h.graph, even_cycle(3)), Embedding)


@pytest.mark.parametrize("k", range(1, 9))
def test_hedgehog_closed_forms(k):
    for d in range(1, k + 1):
        for j in range(1, 4):
            g = hedgehog(k, d, j).graph
            assert g.n_a + g.n_b == k + j * comb(k, d)
            assert g.num_edges == j * d * comb(k, d)


def test_hedgehog_blocks_are_private():
    k, d, j = 5, 3, 2
    g = hedgehog(k, d, j).graph
    for e in combinations(range(k), d):
        assert common_neighborhood(g, e, A) == set(hedgehog_block(k, d, j, e))
    colex = dsets_colex(4, 2)
    assert colex[:3] == ((0, 1), (0, 2), (1, 2))


@pytest.mark.parametrize("bad", [(2, 3, 1), (3, 0, 1), (3, 2, 0)])
def test_hedgehog_rejects_bad_params(bad):
    with pytest.raises(InvalidArgument):
        hedgehog(*bad)


@pytest.mark.parametrize("bad", [(3, 2, 1), (2, 3, 0), (4, 5, 0), (4, 3, -1)])
def test_w_rejects_bad_params(bad):
    with pytest.raises(InvalidArgument):
        w_graph(*bad)


def test_w_graph_examples():
    assert w_graph(3, 2, 0).graph == hedgehog(3, 2, 1).graph
    fig = w_graph(WParams(6, 6, 2)).graph
    assert fig.n_b == 3 + 2 and fig.num_edges == 2 * 6 + 3 * 6
    assert w_graph(4, 3, 1).graph.num_edges == 16
    for k in range(2, 8):
        assert w_graph(k, 2, 0).graph == hedgehog(k, 2, 1).graph


def _w_params(max_k):
    for k in range(2, max_k + 1):
        for d in range(2, k + 1):
            for r in range(0, d - 1):
                yield k, d, r


@pytest.mark.parametrize("k,d,r", list(_w_params(7)))
def test_w_graph_counts_and_degrees(k, d, r):
    g = w_graph(k, d, r).graph
    assert g.num_edges == r * k + (d - r - 1) * d * comb(k, d)
    expect = Counter({d: comb(k, d) * (d - r - 1)})
    expect[k] += r
    assert Counter(g.degrees(B)) == +expect
    ys = w_y_vertices(k, d, r)
    assert all(g.degrees(B)[y] == k for y in ys)


def test_powerset_incidence():
    p1 = powerset_incidence(1).graph
    assert (p1.n_a, p1.n_b, p1.num_edges) == (1, 2, 1)
    p4 = powerset_incidence(4).graph
    assert p4.n_b == 16 and p4.num_edges == 32
    with pytest.raises(InvalidArgument):
        powerset_incidence(0)
    with pytest.raises(InvalidArgument):
        powerset_incidence(40)


def test_turan_graphs():
    t = turan_graph(4, 2)
    assert t.num_edges == 4 and sorted(t.degrees()) == [2, 2, 2, 2]
    assert turan_graph(6, 3).num_edges == 12
    assert turan_graph(5, 5).num_edges == 10
    with pytest.raises(InvalidArgument):
        turan_graph(3, 0)


def test_gamma_values():
    assert gamma(complete_bipartite(3, 3)) == Fraction(1, 2)
    for t in range(2, 6):
        assert gamma(complete_bipartite(t, t)) == Fraction(2, t + 1)
    assert gamma(w_graph(3, 2, 0)) == Fraction(4, 5)
    for k, d, r in _w_params(6):
        g = w_graph(k, d, r).graph
        if g.num_edges < 2:
            continue
        c = comb(k, d)
        assert gamma(g) == Fraction(k + r + (d - r - 1) * c - 2, r * k + (d - r - 1) * d * c - 1)
    with pytest.raises(InvalidArgument):
        gamma(BipartiteGraph.from_edges(2, 2, [(0, 0)]))


def test_random_bipartite():
    assert random_bipartite(6, 0.0, 1).num_edges == 0
    assert random_bipartite(6, 1.0, 1) == complete_bipartite(6, 6)
    assert random_bipartite(10, 0.3, 7) == random_bipartite(10, 0.3, 7)
    with pytest.raises(InvalidArgument):
        random_bipartite(3, 1.5)


@pytest.mark.parametrize("seed", range(5))
def test_deletion_k22_free(seed):
    k22 = complete_bipartite(2, 2)
    g, rep = deletion_construct(16, [k22], seed=seed, margin=2.0)
    assert rep.status == "ok"
    assert find_biclique(g, 2, 2) is None
    assert rep.final_edges == g.num_edges == rep.sampled_edges - rep.edges_deleted


def test_deletion_family_gamma_and_freeness():
    fam = [complete_bipartite(3, 3), w_graph(3, 2, 0)]
    g, rep = deletion_construct(24, fam, seed=3, margin=1.5)
    assert rep.gamma == Fraction(4, 5)
    assert abs(rep.p - 1.5 * 24 ** -0.8) < 1e-12
    assert find_biclique(g, 3, 3) is None
    c6 = w_graph(3, 2, 0).graph
    from indturan.search import EmbedQuery, find_embedding
    assert find_embedding(g, EmbedQuery(c6, respect_sides=False)) is None


def test_deletion_small_host_oracle():
    k12 = BipartiteGraph.complete(1, 2)
    g, _ = deletion_construct(5, [k12], seed=11, margin=3.0)
    assert not naive_contains(g, k12, either_side=True)
    assert max(g.degrees(A) + g.degrees(B), default=0) <= 1


def test_deletion_partial_withholds_graph():
    g, rep = deletion_construct(30, [w_graph(3, 2, 0)], seed=0, margin=6.0, node_budget=50)
    assert g is None and rep.status == "partial"


def test_deletion_rejects_empty_family():
    with pytest.raises(InvalidArgument):
        deletion_construct(8, [])
