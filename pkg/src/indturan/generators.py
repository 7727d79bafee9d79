"""Constructions: hedgehogs, W-graphs, incidence graphs, Turán graphs, deletion method."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import InvalidArgument
from .graph_core import BipartiteGraph, GeneralGraph, MarkedGraph, mask_of
from .matching import DEFAULT_NODE_BUDGET, Budget, Exhausted
from .search import EmbedQuery, iter_embeddings

MAX_POWERSET_M = 16


@dataclass(frozen=True)
class HedgehogParams:
    k: int
    d: int
    j: int

    def __post_init__(self):
        if not (self.k >= self.d >= 1 and self.j >= 1):
            raise InvalidArgument(f"hedgehog needs k >= d >= 1 and j >= 1, got {self}")


@dataclass(frozen=True)
class WParams:
    k: int
    d: int
    r: int

    def __post_init__(self):
        if not (0 <= self.r <= self.d - 2 <= self.k - 2):
            raise InvalidArgument(f"W needs 0 <= r <= d-2 <= k-2, got {self}")


@lru_cache(maxsize=None)
def dsets_colex(k: int, d: int) -> tuple:
    """d-subsets of range(k) in colexicographic order."""
    return tuple(sorted(combinations(range(k), d), key=lambda e: e[::-1]))


@lru_cache(maxsize=None)
def _block_index(k: int, d: int) -> dict:
    return {e: i for i, e in enumerate(dsets_colex(k, d))}


def hedgehog_block(k: int, d: int, j: int, e) -> range:
    """B-vertex indices of the block U_E of H(k, d, j)."""
    i = _block_index(k, d)[tuple(sorted(e))]
    return range(i * j, (i + 1) * j)


def hedgehog(p: HedgehogParams | int, d: int | None = None, j: int | None = None) -> MarkedGraph:
    if not isinstance(p, HedgehogParams):
        p = HedgehogParams(p, d, j)
    k, d, j = p.k, p.d, p.j
    rows = [0] * k
    b = 0
    for e in dsets_colex(k, d):
        block = ((1 << j) - 1) << b
        for v in e:
            rows[v] |= block
        b += j
    return MarkedGraph(BipartiteGraph(k, b, tuple(rows)), frozenset(range(k)))


def w_graph(p: WParams | int, d: int | None = None, r: int | None = None) -> MarkedGraph:
    """H(k, d, d-r-1) plus r B-vertices joined to the whole body (appended last)."""
    if not isinstance(p, WParams):
        p = WParams(p, d, r)
    h = hedgehog(p.k, p.d, p.d - p.r - 1).graph
    n_u = h.n_b
    y = ((1 << p.r) - 1) << n_u
    rows = tuple(row | y for row in h.rows_a)
    return MarkedGraph(BipartiteGraph(p.k, n_u + p.r, rows), frozenset(range(p.k)))


def w_y_vertices(k: int, d: int, r: int) -> range:
    n_u = (d - r - 1) * comb(k, d)
    return range(n_u, n_u + r)


def powerset_incidence(m: int) -> MarkedGraph:
    """Incidence graph of [m] against all of its subsets; B-vertex S is the bitmask S."""
    if m < 1:
        raise InvalidArgument("m must be positive")
    if m > MAX_POWERSET_M:
        raise InvalidArgument(f"2^{m} set-vertices exceeds the supported width")
    rows = tuple(mask_of(s for s in range(1 << m) if s >> i & 1) for i in range(m))
    return MarkedGraph(BipartiteGraph(m, 1 << m, rows), frozenset(range(m)))


def complete_bipartite(s: int, t: int) -> BipartiteGraph:
    return BipartiteGraph.complete(s, t)


def one_subdivision(n: int, edges) -> BipartiteGraph:
    """Subdivide every edge once: A = original vertices, B = edge midpoints."""
    edges = list(edges)
    return BipartiteGraph.from_edges(n, len(edges), [(v, i) for i, e in enumerate(edges) for v in e])


def even_cycle(half: int) -> BipartiteGraph:
    """C_{2*half}: a_i ~ b_i and a_i ~ b_{i-1}."""
    if half < 2:
        raise InvalidArgument("cycle needs half >= 2")
    return BipartiteGraph.from_edges(half, half, [(i, i) for i in range(half)] + [(i, (i - 1) % half) for i in range(half)])


def turan_graph(n: int, r: int) -> GeneralGraph:
    if r < 1 or n < r:
        raise InvalidArgument("turan_graph needs 1 <= r <= n")
    part = [i % r for i in range(n)]
    return GeneralGraph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if part[u] != part[v]])


def gamma(h) -> Fraction:
    """(|V(h)| - 2) / (|E(h)| - 1) as an exact fraction."""
    if isinstance(h, MarkedGraph):
        h = h.graph
    e = h.num_edges
    if e < 2:
        raise InvalidArgument("gamma needs at least two edges")
    return Fraction(h.num_vertices - 2, e - 1)


def random_bipartite(n: int, p: float, seed=None, n_b: int | None = None) -> BipartiteGraph:
    if not 0 <= p <= 1:
        raise InvalidArgument("p must lie in [0, 1]")
    n_b = n if n_b is None else n_b
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    m = rng.random((n, n_b)) < p
    rows = tuple(mask_of(np.flatnonzero(row).tolist()) for row in m)
    return BipartiteGraph(n, n_b, rows)


@dataclass
class DeletionReport:
    n: int
    p: float
    gamma: Fraction
    sampled_edges: int
    copies_found: int = 0
    edges_deleted: int = 0
    final_edges: int = 0
    passes: int = 0
    status: str = "ok"  # or 'partial'
    per_pattern_copies: list = field(default_factory=list)

    def to_json(self):
        return {
            "n": self.n,
            "p": self.p,
            "gamma": str(self.gamma),
            "sampled_edges": self.sampled_edges,
            "copies_found": self.copies_found,
            "edges_deleted": self.edges_deleted,
            "final_edges": self.final_edges,
            "passes": self.passes,
            "status": self.status,
            "per_pattern_copies": self.per_pattern_copies,
        }


def _copies(host, pattern, budget):
    """Distinct edge-images of side-respecting copies in either orientation."""
    pat = pattern.graph if isinstance(pattern, MarkedGraph) else pattern
    seen = set()
    out = []
    q = EmbedQuery(pat, induced=False, respect_sides=False)
    pedges = pat.edges()
    for e in iter_embeddings(host, q, budget):
        if e.swapped:
            img = frozenset((e.b_map[j], e.a_map[i]) for i, j in pedges)
        else:
            img = frozenset((e.a_map[i], e.b_map[j]) for i, j in pedges)
        if img not in seen:
            seen.add(img)
            out.append(img)
    return out


def deletion_construct(n: int, family, seed=None, margin: float = 0.5, node_budget: int = 20 * DEFAULT_NODE_BUDGET):
    """Random graph with p = margin * n^-gamma(family), minus one edge per surviving copy.

    Copies are side-respecting under both part assignments of each pattern.
    Passes repeat until a full enumeration finds nothing, so the returned
    graph is free of every family member. On budget exhaustion the graph is
    withheld (``None``) and the report status is ``partial``.
    """
    family = list(family)
    if not family:
        raise InvalidArgument("family must be non-empty")
    gam = max(gamma(h) for h in family)
    p = min(1.0, margin * n ** (-float(gam)))
    g = random_bipartite(n, p, seed)
    report = DeletionReport(n=n, p=p, gamma=gam, sampled_edges=g.num_edges)
    budget = Budget(node_budget)
    rows = list(g.rows_a)
    try:
        while True:
            report.passes += 1
            current = BipartiteGraph(n, n, tuple(rows))
            found_any = False
            counts = []
            for h in family:
                copies = _copies(current, h, budget)
                counts.append(len(copies))
                for img in copies:
                    if all(rows[a] >> b & 1 for a, b in img):
                        a, b = min(img)
                        rows[a] &= ~(1 << b)
                        report.edges_deleted += 1
                if copies:
                    found_any = True
                    current = BipartiteGraph(n, n, tuple(rows))
            if report.passes == 1:
                report.per_pattern_copies = counts
                report.copies_found = sum(counts)
            if not found_any:
                break
    except Exhausted:
        report.status = "partial"
        report.final_edges = sum(bin(r).count("1") for r in rows)
        return None, report
    out = BipartiteGraph(n, n, tuple(rows))
    report.final_edges = out.num_edges
    return out, report


def plant_pattern(pattern, n: int, noise: float, seed=None, n_b: int | None = None):
    """Random host with an induced copy of ``pattern`` planted at random positions.

    Pairs inside the planted vertex set follow the pattern exactly; every other
    pair is an edge with probability ``noise``. Returns ``(host, a_pos, b_pos)``
    where ``a_pos[i]`` / ``b_pos[j]`` are the host images of the pattern vertices.
    """
    pat = pattern.graph if isinstance(pattern, MarkedGraph) else pattern
    n_b = n if n_b is None else n_b
    if pat.n_a > n or pat.n_b > n_b:
        raise InvalidArgument("pattern larger than host")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a_pos = tuple(int(x) for x in rng.choice(n, pat.n_a, replace=False))
    b_pos = tuple(int(x) for x in rng.choice(n_b, pat.n_b, replace=False))
    m = rng.random((n, n_b)) < noise
    m[np.ix_(a_pos, b_pos)] = False
    for i, j in pat.edges():
        m[a_pos[i], b_pos[j]] = True
    rows = tuple(mask_of(np.flatnonzero(row).tolist()) for row in m)
    return BipartiteGraph(n, n_b, rows), a_pos, b_pos
