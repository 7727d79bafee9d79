"""Backtracking matcher shared by isomorphism, embedding search and counting.

The core works in one fixed orientation (pattern A into host A); callers that
allow a side swap transpose the pattern and translate the maps back.
"""

from __future__ import annotations

import time

from .errors import Inconclusive
from .graph_core import A, B, BipartiteGraph, Embedding, bits, popcount

DEFAULT_NODE_BUDGET = 2_000_000


class Exhausted(Exception):
    pass


class Budget:
    __slots__ = ("limit", "used", "deadline")

    def __init__(self, limit=DEFAULT_NODE_BUDGET, time_budget=None):
        self.limit = limit
        self.used = 0
        self.deadline = time.monotonic() + time_budget if time_budget else None

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise Exhausted
        if self.deadline is not None and not self.used & 1023 and time.monotonic() > self.deadline:
            raise Exhausted


def _adjacent(pattern, side, i, j):
    # j indexes the opposite side
    return bool(pattern.rows(side)[i] >> j & 1)


def search_order(pattern: BipartiteGraph) -> list[tuple[str, int]]:
    """Placement order: most already-placed neighbours first, then degree.

    The first vertex is the highest-degree one; ties go to part A and then to
    the lower index, so the order is deterministic.
    """
    deg = {(A, i): popcount(r) for i, r in enumerate(pattern.rows_a)}
    deg.update({(B, j): popcount(r) for j, r in enumerate(pattern.rows_b)})
    remaining = sorted(deg, key=lambda v: (v[0], v[1]))
    placed_mask = {A: 0, B: 0}
    order = []
    while remaining:
        best = None
        best_key = None
        for v in remaining:
            side, i = v
            other = B if side == A else A
            links = popcount(pattern.rows(side)[i] & placed_mask[other])
            key = (links, deg[v])
            if best_key is None or key > best_key:
                best, best_key = v, key
        remaining.remove(best)
        order.append(best)
        placed_mask[best[0]] |= 1 << best[1]
    return order


def iter_maps(host: BipartiteGraph, pattern: BipartiteGraph, induced: bool, domains: dict, budget: Budget):
    """Yield ``(a_map, b_map)`` for every pattern-A-to-host-A embedding.

    ``domains`` maps ``(side, index)`` to a host mask of allowed images.
    Induced-ness is enforced per placement against the already-placed
    opposite-side vertices. Raises ``Exhausted`` when the budget runs out.
    """
    order = search_order(pattern)
    n = len(order)
    if n == 0:
        yield (), ()
        return
    sides = []
    adj_prev = []
    non_prev = []
    doms = []
    for pos, (side, i) in enumerate(order):
        nb, non = [], []
        for q in range(pos):
            s2, j = order[q]
            if s2 == side:
                continue
            if _adjacent(pattern, side, i, j):
                nb.append(q)
            elif induced:
                non.append(q)
        sides.append(0 if side == A else 1)
        adj_prev.append(nb)
        non_prev.append(non)
        doms.append(domains[(side, i)])
    # opp_rows[s] holds host rows of the side opposite to s, indexed by host vertex of that side
    host_rows = (host.rows_a, host.rows_b)
    used = [0, 0]
    cur = [-1] * n
    cand = [0] * n

    def candidates(pos):
        s = sides[pos]
        m = doms[pos] & ~used[s]
        rows = host_rows[1 - s]
        for q in adj_prev[pos]:
            m &= rows[cur[q]]
            if not m:
                return 0
        for q in non_prev[pos]:
            m &= ~rows[cur[q]]
            if not m:
                return 0
        return m

    depth = 0
    cand[0] = candidates(0)
    while True:
        if cur[depth] >= 0:
            used[sides[depth]] ^= 1 << cur[depth]
            cur[depth] = -1
        m = cand[depth]
        if not m:
            if depth == 0:
                return
            depth -= 1
            continue
        low = m & -m
        cand[depth] = m ^ low
        budget.spend()
        cur[depth] = low.bit_length() - 1
        used[sides[depth]] |= low
        if depth == n - 1:
            a_map = [0] * pattern.n_a
            b_map = [0] * pattern.n_b
            for pos, (side, i) in enumerate(order):
                (a_map if side == A else b_map)[i] = cur[pos]
            yield tuple(a_map), tuple(b_map)
            continue
        depth += 1
        cand[depth] = candidates(depth)


def degree_domains(host: BipartiteGraph, pattern: BipartiteGraph, exact: bool = False) -> dict:
    """Host masks of vertices whose degree can carry each pattern vertex."""
    out = {}
    for side in (A, B):
        hdeg = host.degrees(side)
        for i, d in enumerate(pattern.degrees(side)):
            if exact:
                out[(side, i)] = sum(1 << v for v, h in enumerate(hdeg) if h == d)
            else:
                out[(side, i)] = sum(1 << v for v, h in enumerate(hdeg) if h >= d)
    return out


def find_isomorphism(g: BipartiteGraph, h: BipartiteGraph, respect_sides: bool, node_budget: int):
    budget = Budget(node_budget)
    orientations = [False] if respect_sides else [False, True]
    if g.num_edges != h.num_edges:
        return None
    for swapped in orientations:
        pat = g.transpose() if swapped else g
        if (pat.n_a, pat.n_b) != (h.n_a, h.n_b):
            continue
        if sorted(pat.degrees(A)) != sorted(h.degrees(A)) or sorted(pat.degrees(B)) != sorted(h.degrees(B)):
            continue
        doms = degree_domains(h, pat, exact=True)
        try:
            for a_map, b_map in iter_maps(h, pat, True, doms, budget):
                if swapped:
                    return Embedding(b_map, a_map, swapped=True, induced=True)
                return Embedding(a_map, b_map, swapped=False, induced=True)
        except Exhausted:
            return Inconclusive("node budget exhausted in isomorphism search", budget.used)
    return None


def all_bits(n: int) -> int:
    return (1 << n) - 1


__all__ = [
    "Budget",
    "DEFAULT_NODE_BUDGET",
    "Exhausted",
    "all_bits",
    "bits",
    "degree_domains",
    "find_isomorphism",
    "iter_maps",
    "search_order",
]
