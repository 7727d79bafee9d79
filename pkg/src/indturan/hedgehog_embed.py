"""Constructive embeddings into hedgehogs and W-graphs, and greedy hedgehog extraction."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import Inconclusive, InvalidArgument
from .generators import dsets_colex, hedgehog, hedgehog_block, powerset_incidence, w_graph, w_y_vertices
from .graph_core import A, B, BipartiteGraph, Embedding, MarkedGraph, bits, mask_of, popcount
from .search import find_biclique, verify_embedding


@dataclass
class NeighborhoodCondition:
    k: int
    d: int
    s: int
    violations: list = field(default_factory=list)  # (X, y, lhs, rhs)
    boundary: list = field(default_factory=list)  # d-sets X with |N(X)| == s

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self):
        return {
            "k": self.k,
            "d": self.d,
            "s": self.s,
            "holds": self.holds,
            "violations": [
                {"X": list(x), "y": y, "lhs": lhs, "rhs": str(rhs)} for x, y, lhs, rhs in self.violations
            ],
            "boundary": [list(x) for x in self.boundary],
        }


class ConditionFailed(InvalidArgument):
    def __init__(self, condition: NeighborhoodCondition):
        self.condition = condition
        super().__init__(f"neighbourhood condition fails at {len(condition.violations)} (X, y) pairs")


def _body_order(body):
    body = sorted(body)
    if len(set(body)) != len(body):
        raise InvalidArgument("body has repeated vertices")
    return body


def check_neighborhood_condition(g: BipartiteGraph, body, d: int, s: int) -> NeighborhoodCondition:
    """Check |N(y) ∩ N(X)| < (|N(X)| - s)/(k - d) for every d-set X of the body and y outside X."""
    body = _body_order(body)
    k = len(body)
    if k <= d:
        raise InvalidArgument("need |body| > d")
    if any(not 0 <= v < g.n_a for v in body):
        raise InvalidArgument("body must lie in part A")
    rows = g.rows_a
    cond = NeighborhoodCondition(k, d, s)
    full = (1 << g.n_b) - 1
    for xs in combinations(body, d):
        nx = full
        for x in xs:
            nx &= rows[x]
        size = popcount(nx)
        if size == s:
            cond.boundary.append(xs)
        rhs = Fraction(size - s, k - d)
        for y in body:
            if y in xs:
                continue
            lhs = popcount(rows[y] & nx)
            if not lhs < rhs:
                cond.violations.append((xs, y, lhs, rhs))
    return cond


def extract_hedgehog(g: BipartiteGraph, body, d: int, s: int) -> Embedding:
    """Induced H(k, d, s) with the given body, built greedily block by block.

    For each d-set X (colex order) the block U_X is the ``s`` lowest-indexed
    vertices of N(X) that avoid every other body vertex and every earlier
    block. The returned embedding maps hedgehog(k, d, s) into ``g`` with
    pattern body vertex ``i`` sent to the i-th smallest body vertex.
    """
    body = _body_order(body)
    cond = check_neighborhood_condition(g, body, d, s)
    if not cond.holds:
        raise ConditionFailed(cond)
    k = len(body)
    rows = g.rows_a
    full = (1 << g.n_b) - 1
    assigned = 0
    b_map = []
    for xs in dsets_colex(k, d):
        X = [body[i] for i in xs]
        nx = full
        for x in X:
            nx &= rows[x]
        outside = 0
        for y in body:
            if y not in X:
                outside |= rows[y]
        free = nx & ~outside & ~assigned
        chosen = list(bits(free))[:s]
        if len(chosen) < s:
            # unreachable while the condition holds
            raise AssertionError(f"block for {X} has only {len(chosen)} candidates")
        assigned |= mask_of(chosen)
        b_map.extend(chosen)
    emb = Embedding(tuple(body), tuple(b_map), induced=True, body_target=(A, frozenset(body)))
    return emb


@dataclass
class BoundedEmbedding:
    k: int
    r: int
    d: int
    s: int  # disjoint padding d-sets per low-degree neighbourhood
    host: MarkedGraph
    embedding: Embedding
    groups: dict = field(default_factory=dict)  # neighbourhood (tuple) -> count of U'-vertices

    def to_json(self):
        return {
            "k": self.k,
            "d": self.d,
            "r": self.r,
            "s": self.s,
            "embedding": self.embedding.to_json(),
            "groups": [{"A": list(a), "count": c} for a, c in sorted(self.groups.items())],
        }


def _min_padding(d, r, groups):
    """Smallest s with s*(d-r-1)*C(d, |A|) >= group size for every low-degree group."""
    s = 0
    per = d - r - 1
    for a, cnt in groups.items():
        if len(a) < d:
            cap = per * comb(d, len(a))
            s = max(s, -(-cnt // cap))
    return s


def embed_bounded_degree(g_prime: BipartiteGraph, d: int, r: int, k: int | None = None, max_k: int = 40):
    """Induced embedding of ``g_prime`` into W(k, d, r) with part A inside the body.

    Part A of ``g_prime`` plays V', part B plays U'. U'-vertices are grouped
    by exact neighbourhood; full d-sets go to their own block U_A, smaller
    neighbourhoods A are padded with d-sets drawn from ``s`` pairwise disjoint
    d-sets of body vertices outside V', and mapped into the blocks
    U_{A ∪ B'}. ``k`` is raised to the smallest value the padding needs.
    Returns a BoundedEmbedding, or Inconclusive when that k exceeds ``max_k``.
    """
    if not 0 <= r <= d - 2:
        raise InvalidArgument("need 0 <= r <= d-2")
    degs = g_prime.degrees(B)
    for u, du in enumerate(degs):
        if du > d:
            raise InvalidArgument(f"U'-vertex {u} has degree {du} > d={d}")
    if d - r <= g_prime.n_b and d <= g_prime.n_a:
        hit = find_biclique(g_prime.transpose(), d - r, d)
        if hit is not None:
            raise InvalidArgument(f"forbidden biclique K_{{{d - r},{d}}} present: U'={list(hit[0])}, V'={list(hit[1])}")
    n_v = g_prime.n_a
    groups: dict[tuple, list[int]] = {}
    for u in range(g_prime.n_b):
        groups.setdefault(tuple(bits(g_prime.rows_b[u])), []).append(u)
    s = _min_padding(d, r, {a: len(us) for a, us in groups.items()})
    need = max(d, n_v + s * d)
    if k is None:
        k = need
    k = max(k, need)
    if k > max_k:
        return Inconclusive(f"padding needs k={k} > max_k={max_k}")
    j = d - r - 1
    pads = [tuple(range(n_v + i * d, n_v + (i + 1) * d)) for i in range(s)]
    b_map = [0] * g_prime.n_b
    for a, us in sorted(groups.items()):
        if len(a) == d:
            block = hedgehog_block(k, d, j, a)
            targets = list(block)
        else:
            targets = []
            for pad in pads:
                for extra in combinations(pad, d - len(a)):
                    targets.extend(hedgehog_block(k, d, j, a + extra))
        # the biclique and padding checks guarantee enough targets
        assert len(targets) >= len(us), (a, len(targets), len(us))
        for u, t in zip(us, targets):
            b_map[u] = t
    host = w_graph(k, d, r)
    emb = Embedding(tuple(range(n_v)), tuple(b_map), induced=True, body_target=(A, host.body))
    return BoundedEmbedding(k, r, d, s, host, emb, {a: len(us) for a, us in groups.items()})


def embed_powerset(d: int, max_k: int = 40) -> BoundedEmbedding:
    """Induced copy of powerset_incidence(d+1) inside W(k, d, d-2), ground set in the body.

    The full set (the last B-vertex) is removed, the rest is embedded by
    ``embed_bounded_degree`` with r = d-2, and the full set goes to a Y-vertex.
    """
    if d < 3:
        raise InvalidArgument("embed_powerset needs d >= 3")
    g = powerset_incidence(d + 1).graph
    full = g.n_b - 1
    rest = BipartiteGraph(g.n_a, g.n_b - 1, tuple(row & ~(1 << full) for row in g.rows_a))
    res = embed_bounded_degree(rest, d, d - 2, max_k=max_k)
    if isinstance(res, Inconclusive):
        return res
    y = w_y_vertices(res.k, d, d - 2)[0]
    emb = Embedding(res.embedding.a_map, res.embedding.b_map + (y,), induced=True, body_target=(A, res.host.body))
    return BoundedEmbedding(res.k, d - 2, d, res.s, res.host, emb, res.groups)


def verify_bounded(pattern: BipartiteGraph, result: BoundedEmbedding) -> bool:
    return verify_embedding(result.host.graph, MarkedGraph(pattern, frozenset(range(pattern.n_a))), result.embedding).ok


__all__ = [
    "BoundedEmbedding",
    "ConditionFailed",
    "NeighborhoodCondition",
    "check_neighborhood_condition",
    "embed_bounded_degree",
    "embed_powerset",
    "extract_hedgehog",
    "hedgehog",
    "verify_bounded",
]
