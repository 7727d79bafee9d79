"""Almost-regular induced subgraphs by iterated low-degree vertex deletion."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidArgument
from .graph_core import A, B, BipartiteGraph, GeneralGraph, bits, general_induced_subgraph, induced_subgraph, popcount

DEFAULT_K_TARGET = 32.0


@dataclass
class DegreeStats:
    min: int
    max: int
    mean: float
    per_part: dict = field(default_factory=dict)  # part -> (min, max, mean)


def degree_stats(g) -> DegreeStats:
    if isinstance(g, GeneralGraph):
        degs = g.degrees()
        if not degs:
            return DegreeStats(0, 0, 0.0)
        return DegreeStats(min(degs), max(degs), sum(degs) / len(degs))
    per = {}
    allv = []
    for part in (A, B):
        d = g.degrees(part)
        allv += d
        per[part] = (min(d), max(d), sum(d) / len(d)) if d else (0, 0, 0.0)
    if not allv:
        return DegreeStats(0, 0, 0.0, per)
    return DegreeStats(min(allv), max(allv), sum(allv) / len(allv), per)


@dataclass
class RegularizeReport:
    status: str  # 'ok', 'hypothesis_unmet', 'empty'
    n: int
    m: int = 0
    edges: int = 0
    K_achieved: float = float("inf")
    rounds: int = 0
    met_contract: bool = False
    ratio_ok: bool = False
    density_ok: bool = False
    selected_round: int = 0
    size_guarantee: float = 0.0  # n^{(eps/2)(1-eps)/(1+eps)}, reported only
    trace: list = field(default_factory=list)  # (round, vertices, edges) per deletion

    def to_json(self):
        out = dict(self.__dict__)
        out["K_achieved"] = None if self.K_achieved == float("inf") else self.K_achieved
        out["trace"] = [list(t) for t in self.trace]
        return out


def _adjacency(g):
    """Uniform vertex view: (n, neighbour masks over a single index space)."""
    if isinstance(g, GeneralGraph):
        return g.n, list(g.rows)
    shift = g.n_a
    adj = [row << shift for row in g.rows_a] + list(g.rows_b)
    return g.n_a + g.n_b, adj


def almost_regularize(g, eps: float, c: float, K_target: float = DEFAULT_K_TARGET):
    """Return ``(subgraph or None, report, kept)``.

    Repeatedly deletes the lowest-indexed vertex whose degree is below half
    the current average degree. Every intermediate vertex set is a stage; the
    stage chosen is the densest (edges / m^(1+eps)) one with max/min degree
    <= K_target, falling back to the final stage. ``kept`` is the surviving
    vertex set: for bipartite input a pair (A-indices, B-indices).
    """
    if not 0 < eps < 1:
        raise InvalidArgument("eps must lie in (0, 1)")
    n, adj = _adjacency(g)
    e0 = sum(popcount(r) for r in adj) // 2
    report = RegularizeReport(status="ok", n=n)
    report.size_guarantee = n ** ((eps / 2) * (1 - eps) / (1 + eps)) if n else 0.0
    if n == 0 or e0 < c * n ** (1 + eps):
        report.status = "hypothesis_unmet"
        report.edges = e0
        return None, report, None

    alive = (1 << n) - 1
    deg = [popcount(r) for r in adj]
    m, edges = n, e0

    def stage_score():
        dmin = min(deg[v] for v in bits(alive))
        dmax = max(deg[v] for v in bits(alive))
        ratio = dmax / dmin if dmin > 0 else float("inf")
        return ratio, edges / m ** (1 + eps)

    best = None
    rnd = 0
    while m > 0:
        ratio, density = stage_score()
        if ratio <= K_target and (best is None or density > best[0]):
            best = (density, rnd, alive, ratio, m, edges)
        avg = 2 * edges / m
        victim = next((v for v in bits(alive) if deg[v] < avg / 2), None)
        if victim is None:
            break
        alive &= ~(1 << victim)
        for u in bits(adj[victim] & alive):
            deg[u] -= 1
        edges -= deg[victim]
        m -= 1
        rnd += 1
        report.trace.append((rnd, m, edges))
    report.rounds = rnd
    if m == 0:
        report.status = "empty"
        return None, report, None
    if best is None:
        ratio, _ = stage_score()
        best = (None, rnd, alive, ratio, m, edges)
    _, sel, alive, ratio, m, edges = best
    report.selected_round = sel
    report.m, report.edges, report.K_achieved = m, edges, ratio
    report.ratio_ok = ratio <= K_target
    report.density_ok = edges >= (2 * c / 5) * m ** (1 + eps)
    report.met_contract = report.ratio_ok and report.density_ok

    keep = list(bits(alive))
    if isinstance(g, GeneralGraph):
        sub, idx = general_induced_subgraph(g, keep)
        return sub, report, idx
    a_keep = [v for v in keep if v < g.n_a]
    b_keep = [v - g.n_a for v in keep if v >= g.n_a]
    sub, a_idx, b_idx = induced_subgraph(g, a_keep, b_keep)
    return sub, report, (a_idx, b_idx)
