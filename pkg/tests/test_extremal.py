import pytest

from indturan.bounds import kst_bound
from indturan.errors import InvalidArgument
from indturan.extremal import contains_forbidden, ex_table, exact_ex
from indturan.generators import complete_bipartite, w_graph
from indturan.graph_core import BipartiteGraph, parse_graph
from oracles import naive_contains, naive_ex

K11 = complete_bipartite(1, 1)
K12 = complete_bipartite(1, 2)
K22 = complete_bipartite(2, 2)
K33 = complete_bipartite(3, 3)
MATCHING = BipartiteGraph.from_edges(2, 2, [(0, 0), (1, 1)])
C6 = w_graph(3, 2, 0).graph

CONSTRAINTS = {
    "c4": ([K22], []),
    "edge": ([K11], []),
    "ind_cherry": ([], [K12]),
    "k33_ind_c6": ([K33], [C6]),
    "c4_ind_matching": ([K22], [MATCHING]),
    "ind_matching": ([], [MATCHING]),
}


def test_examples():
    assert exact_ex(2, [K22]).max_edges == 3
    assert exact_ex(3, [K22]).max_edges == 6
    for n in range(0, 5):
        assert exact_ex(n, [K11]).max_edges == 0
        assert exact_ex(n).max_edges == n * n


@pytest.mark.parametrize("name", sorted(CONSTRAINTS))
@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_naive(name, n):
    subs, inds = CONSTRAINTS[name]
    res = exact_ex(n, subs, inds)
    assert res.exhaustive
    assert res.max_edges == naive_ex(n, subs, inds)
    assert res.witness.num_edges == res.max_edges


@pytest.mark.parametrize("name", sorted(CONSTRAINTS))
def test_witness_reverifies(name):
    subs, inds = CONSTRAINTS[name]
    for n in range(1, 5):
        res = exact_ex(n, subs, inds)
        assert not contains_forbidden(res.witness, subs, inds)
        assert not any(naive_contains(res.witness, p, False, True) for p in subs)


def test_as_given_orientation():
    # forbidding K_{1,2} with its single vertex in A caps A-degrees only
    both = exact_ex(3, [K12]).max_edges
    given = exact_ex(3, [K12], orientation="as_given").max_edges
    assert both == 3 and given == 3
    star = complete_bipartite(2, 1)
    assert exact_ex(3, [star], orientation="as_given").max_edges == 3
    assert exact_ex(2, [], [K12], orientation="as_given").max_edges == naive_ex(2, [], [K12], "as_given")


@pytest.mark.parametrize("name", sorted(CONSTRAINTS))
def test_monotone_in_n(name):
    subs, inds = CONSTRAINTS[name]
    vals = [exact_ex(n, subs, inds).max_edges for n in range(1, 6)]
    assert vals == sorted(vals)


def test_extra_induced_constraint_never_helps():
    for n in range(1, 6):
        base = exact_ex(n, [K33]).max_edges
        assert exact_ex(n, [K33], [C6]).max_edges <= base
        c4 = exact_ex(n, [K22]).max_edges
        assert exact_ex(n, [K22], [MATCHING]).max_edges <= c4


def test_below_kst():
    for t in (2, 3):
        for n in range(t, 6):
            assert exact_ex(n, [complete_bipartite(t, t)]).max_edges <= kst_bound(t, t, n, n) + 1e-9


def test_budget_gives_best_so_far():
    res = exact_ex(5, [K22], budget=50)
    assert not res.exhaustive and res.max_edges <= 12


def test_bounds_on_n():
    with pytest.raises(InvalidArgument):
        exact_ex(8)
    with pytest.raises(InvalidArgument):
        exact_ex(2, orientation="sideways")


def test_ex_table(tmp_path):
    rows, text = ex_table([2, 3], [K22], witness_dir=tmp_path)
    assert [(r.n, r.max_edges) for r in rows] == [(2, 3), (3, 6)]
    assert text.splitlines()[0].startswith("n,max_edges")
    assert parse_graph((tmp_path / "ex_n3.graph").read_text()).num_edges == 6
    rows, _ = ex_table([1, 2, 3], [], [])
    assert [r.max_edges for r in rows] == [1, 4, 9]
    rows, _ = ex_table([2, 9], [K22])
    assert rows[1].error and rows[1].max_edges is None


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_induced_cherry_table(n):
    got = exact_ex(n, [], [K12]).max_edges
    if n <= 3:
        assert got == naive_ex(n, [], [K12])
    # a perfect matching is optimal; the complete graph has induced cherries
    assert got == n
