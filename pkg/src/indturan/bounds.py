"""Kővári–Sós–Turán bound, density thresholds and γ maxima."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidArgument
from .generators import gamma
from .graph_core import BipartiteGraph
from .search import find_biclique

REL_SLACK = 1e-9


@dataclass(frozen=True)
class KstInput:
    y1: int
    y2: int
    Y1: int
    Y2: int

    def __post_init__(self):
        if not (1 <= self.y1 <= self.Y1 and 1 <= self.y2 <= self.Y2):
            raise InvalidArgument(f"KST needs 1 <= y1 <= Y1 and 1 <= y2 <= Y2, got {self}")


def kst_bound(inp: KstInput | int, y2=None, Y1=None, Y2=None) -> float:
    """(y2-1)^(1/y1) (Y1-y1+1) Y2^(1-1/y1) + (y1-1) Y2.

    Edge bound for a bipartite graph on parts of sizes Y1, Y2 with no complete
    bipartite subgraph having y1 vertices in the first part and y2 in the second.
    """
    if not isinstance(inp, KstInput):
        inp = KstInput(inp, y2, Y1, Y2)
    y1, y2, Y1, Y2 = inp.y1, inp.y2, inp.Y1, inp.Y2
    return (y2 - 1) ** (1 / y1) * (Y1 - y1 + 1) * Y2 ** (1 - 1 / y1) + (y1 - 1) * Y2


def density_threshold(n: int, d: int, eps: float) -> float:
    if n < 1 or d < 2 or eps <= 0:
        raise InvalidArgument("density_threshold needs n >= 1, d >= 2, eps > 0")
    return eps * n ** (2 - 1 / d)


def gamma_family(family) -> Fraction:
    family = list(family)
    if not family:
        raise InvalidArgument("family must be non-empty")
    return max(gamma(h) for h in family)


@dataclass
class KstCheck:
    hypothesis_met: bool
    edges: int
    bound: float | None = None
    margin: float | None = None
    holds: bool | None = None
    biclique: tuple | None = None

    def to_json(self):
        return {
            "hypothesis_met": self.hypothesis_met,
            "edges": self.edges,
            "bound": self.bound,
            "margin": self.margin,
            "holds": self.holds,
            "biclique": [list(s) for s in self.biclique] if self.biclique else None,
        }


def kst_validity_check(g: BipartiteGraph, y1: int, y2: int) -> KstCheck:
    """Compare |E(g)| to the KST bound when g has no K_{y1,y2} (y1 in A)."""
    hit = find_biclique(g, y1, y2) if y1 <= g.n_a and y2 <= g.n_b else None
    if hit is not None:
        return KstCheck(False, g.num_edges, biclique=hit)
    if y1 > g.n_a or y2 > g.n_b:
        # the bound's preconditions fail; KST is vacuous here
        return KstCheck(True, g.num_edges, bound=float(g.n_a * g.n_b), margin=float(g.n_a * g.n_b - g.num_edges), holds=True)
    bound = kst_bound(y1, y2, g.n_a, g.n_b)
    e = g.num_edges
    holds = e <= bound * (1 + REL_SLACK) + REL_SLACK
    return KstCheck(True, e, bound=bound, margin=bound - e, holds=holds)
