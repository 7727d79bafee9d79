"""Embedding search, verification, biclique detection, copy counting, VC-dimension."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded, Inconclusive, InvalidArgument
from .graph_core import A, B, BipartiteGraph, Embedding, MarkedGraph, bits, mask_of, popcount
from .matching import DEFAULT_NODE_BUDGET, Budget, Exhausted, degree_domains, iter_maps

MAX_SHATTER_WIDTH = 24


@dataclass
class EmbedQuery:
    pattern: BipartiteGraph | MarkedGraph
    induced: bool = False
    respect_sides: bool = True
    # (host part, allowed host vertices or None); only for patterns with a body
    body_target: tuple | None = None
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None

    def __post_init__(self):
        if self.body_target is not None:
            if not isinstance(self.pattern, MarkedGraph):
                raise InvalidArgument("body_target requires a pattern with a body")
            part, subset = self.body_target
            if part not in (A, B):
                raise InvalidArgument(f"unknown body part {part!r}")
            self.body_target = (part, frozenset(subset) if subset is not None else None)


@dataclass
class Verdict:
    ok: bool
    kind: str | None = None  # 'shape', 'range', 'injectivity', 'body', 'edge', 'non_edge'
    pair: tuple | None = None

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "kind": self.kind, "pair": [list(p) for p in self.pair] if self.pair else None}


def _split(pattern):
    if isinstance(pattern, MarkedGraph):
        return pattern.graph, pattern.body
    return pattern, None


def _orientations(q: EmbedQuery):
    if q.body_target is not None:
        return [q.body_target[0] == B]
    return [False] if q.respect_sides else [False, True]


def _domains(host, pat, body, swapped, body_target):
    doms = degree_domains(host, pat)
    if body_target is not None and body_target[1] is not None:
        allowed = mask_of(v for v in body_target[1] if v < host.part_size(body_target[0]))
        body_side = B if swapped else A
        for v in body:
            doms[(body_side, v)] &= allowed
    return doms


def _wrap(maps, swapped, q):
    a_map, b_map = maps
    if swapped:
        a_map, b_map = b_map, a_map
    return Embedding(a_map, b_map, swapped=swapped, induced=q.induced, body_target=q.body_target)


def iter_embeddings(host: BipartiteGraph, q: EmbedQuery, budget: Budget | None = None, domains=None):
    """Yield every embedding for the query (all orientations it allows).

    Raises ``Exhausted`` if the budget runs out mid-enumeration. ``domains``
    optionally overrides the per-vertex host masks in the unswapped
    orientation (used for edge-pinned searches).
    """
    pat, body = _split(q.pattern)
    budget = budget or Budget(q.node_budget, q.time_budget)
    for swapped in _orientations(q):
        p = pat.transpose() if swapped else pat
        if p.n_a > host.n_a or p.n_b > host.n_b:
            continue
        if domains is not None:
            doms = domains(swapped, p)
        else:
            doms = _domains(host, p, body or (), swapped, q.body_target)
        for maps in iter_maps(host, p, q.induced, doms, budget):
            yield _wrap(maps, swapped, q)


def find_embedding(host: BipartiteGraph, q: EmbedQuery):
    """First embedding in search order, ``None`` after exhaustive search, or ``Inconclusive``."""
    budget = Budget(q.node_budget, q.time_budget)
    try:
        for e in iter_embeddings(host, q, budget):
            return e
    except Exhausted:
        return Inconclusive("node budget exhausted", budget.used)
    return None


def verify_embedding(host: BipartiteGraph, pattern, e: Embedding) -> Verdict:
    pat, body = _split(pattern)
    if len(e.a_map) != pat.n_a or len(e.b_map) != pat.n_b:
        return Verdict(False, "shape")
    a_part, b_part = e.host_part(A), e.host_part(B)
    for side, mp, hp in ((A, e.a_map, a_part), (B, e.b_map, b_part)):
        n = host.part_size(hp)
        for i, v in enumerate(mp):
            if not 0 <= v < n:
                return Verdict(False, "range", ((side, i),))
    for side, mp in ((A, e.a_map), (B, e.b_map)):
        first = {}
        for i, v in enumerate(mp):
            if v in first:
                return Verdict(False, "injectivity", ((side, first[v]), (side, i)))
            first[v] = i
    if e.body_target is not None:
        part, subset = e.body_target
        if body is None:
            return Verdict(False, "body")
        for v in sorted(body):
            if a_part != part or (subset is not None and e.a_map[v] not in subset):
                return Verdict(False, "body", ((A, v),))
    hrows = host.rows(a_part)
    for i in range(pat.n_a):
        row = pat.rows_a[i]
        himg = hrows[e.a_map[i]]
        for j in range(pat.n_b):
            want = row >> j & 1
            have = himg >> e.b_map[j] & 1
            if want and not have:
                return Verdict(False, "edge", ((A, i), (B, j)))
            if e.induced and have and not want:
                return Verdict(False, "non_edge", ((A, i), (B, j)))
    return Verdict(True)


def find_biclique(g: BipartiteGraph, t1: int, t2: int, budget: int | None = None):
    """A ``t1``-set in A and ``t2``-set in B spanning a complete bipartite graph, else ``None``.

    Exhaustive over A-subsets in lexicographic order, pruned whenever the
    running common neighbourhood drops below ``t2``.
    """
    if t1 < 1 or t2 < 1:
        raise InvalidArgument("biclique sides must be positive")
    cands = [a for a in range(g.n_a) if popcount(g.rows_a[a]) >= t2]
    rows = g.rows_a
    chosen = []
    counter = Budget(budget or 10**12)

    def rec(start, common):
        if len(chosen) == t1:
            return common
        need = t1 - len(chosen)
        for k in range(start, len(cands) - need + 1):
            counter.spend()
            a = cands[k]
            c = common & rows[a]
            if popcount(c) < t2:
                continue
            chosen.append(a)
            got = rec(k + 1, c)
            if got is not None:
                return got
            chosen.pop()
        return None

    try:
        common = rec(0, (1 << g.n_b) - 1)
    except Exhausted:
        return Inconclusive("biclique search budget exhausted", counter.used)
    if common is None:
        return None
    return tuple(chosen), tuple(list(bits(common))[:t2])


def has_biclique_through(g: BipartiteGraph, t1: int, t2: int, a: int, b: int) -> bool:
    """Is there a K_{t1,t2} (t1 in A) using the edge (a, b)?"""
    if not g.has_edge(a, b):
        return False
    pool = [x for x in bits(g.rows_b[b]) if x != a and popcount(g.rows_a[x]) >= t2]
    base = g.rows_a[a]
    if t1 == 1:
        return popcount(base) >= t2
    rows = g.rows_a
    bbit = 1 << b

    def rec(start, common, need):
        if need == 0:
            return True
        for k in range(start, len(pool) - need + 1):
            c = common & rows[pool[k]]
            if c & bbit and popcount(c) >= t2 and rec(k + 1, c, need - 1):
                return True
        return False

    return rec(0, base, t1 - 1)


def count_copies(host: BipartiteGraph, pattern, respect_sides: bool = True, induced: bool = False,
                 node_budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Exact number of embeddings (vertex maps); never a truncated count."""
    q = EmbedQuery(pattern, induced=induced, respect_sides=respect_sides, node_budget=node_budget)
    budget = Budget(node_budget)
    n = 0
    try:
        for _ in iter_embeddings(host, q, budget):
            n += 1
    except Exhausted:
        raise BudgetExceeded(f"count_copies exceeded {node_budget} nodes", budget.used) from None
    return n


def _traces(g: BipartiteGraph, part: str):
    other = B if part == A else A
    return g.rows(other)


def shatter_check(g: BipartiteGraph, s, part: str) -> bool:
    s = sorted(set(s))
    if len(s) > MAX_SHATTER_WIDTH:
        raise InvalidArgument(f"cannot enumerate 2^{len(s)} traces")
    n = g.part_size(part)
    if any(not 0 <= v < n for v in s):
        raise InvalidArgument("vertex outside the named part")
    m = mask_of(s)
    traces = {row & m for row in _traces(g, part)}
    return len(traces) == 1 << len(s)


@dataclass
class VCReport:
    dimension: int
    witness: tuple
    realizers: dict = field(default_factory=dict)  # trace (tuple) -> realizing vertex of the other part
    exhaustive: bool = True

    def to_json(self):
        return {
            "dimension": self.dimension,
            "witness": list(self.witness),
            "realizers": [{"subset": list(k), "vertex": v} for k, v in sorted(self.realizers.items())],
            "exhaustive": self.exhaustive,
        }


def _realizers(rows, s):
    out = {}
    for v, row in enumerate(rows):
        t = tuple(x for x in s if row >> x & 1)
        out.setdefault(t, v)
    return out if len(out) == 1 << len(s) else None


def vc_dimension(g: BipartiteGraph, part: str, budget: int = 10**7) -> VCReport:
    """Largest shattered subset of ``part`` by traces of the other part's neighbourhoods.

    Level-wise: every shattered set minus its largest element is shattered,
    so level L is generated by extending shattered (L-1)-sets upward. An
    empty opposite part shatters nothing, reported as dimension -1.
    """
    if part not in (A, B):
        raise InvalidArgument(f"unknown part {part!r}")
    rows = _traces(g, part)
    n = g.part_size(part)
    if not rows:
        return VCReport(-1, (), {})
    level = [()]
    best = ()
    spent = 0
    while level:
        nxt = []
        if 1 << (len(best) + 1) > len(rows):
            break
        for s in level:
            start = s[-1] + 1 if s else 0
            for v in range(start, n):
                spent += 1
                if spent > budget:
                    return VCReport(len(best), best, _realizers(rows, best) or {}, exhaustive=False)
                t = s + (v,)
                m = mask_of(t)
                if len({row & m for row in rows}) == 1 << len(t):
                    nxt.append(t)
        if nxt:
            best = nxt[0]
        level = nxt
    return VCReport(len(best), best, _realizers(rows, best) or {})

