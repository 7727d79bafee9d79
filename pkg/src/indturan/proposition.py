"""d-set hypergraph machinery and the staged searches for induced hedgehogs and W-graphs.

The staged pipelines follow the structure of the existence argument (red
cliques, disjoint-neighbourhood cliques, dense r-sets, bad-vertex removal)
and fall back to exhaustive embedding search. A result is reported "absent"
only when that exhaustive search completes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import ceil, comb

from .bounds import kst_bound
from .errors import BudgetExceeded, Inconclusive, InvalidArgument
from .generators import dsets_colex, hedgehog, w_graph
from .graph_core import A, B, BipartiteGraph, Embedding, bits, induced_subgraph, mask_of, popcount
from .hedgehog_embed import check_neighborhood_condition, extract_hedgehog
from .matching import DEFAULT_NODE_BUDGET, Budget, Exhausted
from .reduction import DEFAULT_K_TARGET, almost_regularize
from .search import EmbedQuery, find_biclique, find_embedding, verify_embedding

RED, BLUE = "red", "blue"


@dataclass
class SearchConfig:
    t: int = 4
    d: int = 2
    k: int = 3
    r: int = 0
    s: int | None = None  # defaults to d - r - 1
    q: int | None = None  # red threshold and clique size; defaults to max(2s + 2, k)
    gamma_exponent: float | None = None  # defaults to min(1/(2t), (1 - 1/d)/2)
    eps: float = 0.5
    eta: float | None = None
    xi: float = 1.0
    kappa: float = 1.0
    K_target: float = DEFAULT_K_TARGET
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None
    max_dsets: int = 200_000
    max_ssets: int = 200_000
    max_x_candidates: int = 3

    def __post_init__(self):
        if self.s is None:
            self.s = self.d - self.r - 1
        if self.q is None:
            self.q = max(2 * self.s + 2, self.k)
        if self.gamma_exponent is None:
            self.gamma_exponent = min(1 / (2 * self.t), (1 - 1 / self.d) / 2)
        if not 0 <= self.gamma_exponent < 1 / self.t:
            raise InvalidArgument("need 0 <= gamma_exponent < 1/t")
        if not self.q > 2 * self.s:
            raise InvalidArgument("need q > 2s")
        if not self.r + 2 <= self.d <= self.k:
            raise InvalidArgument("need r + 2 <= d <= k")
        if self.s < 1:
            raise InvalidArgument("need s >= 1")

    def to_json(self):
        return dict(self.__dict__)


@dataclass
class HEdge:
    size: int
    color: str
    mask: int


@dataclass
class DSetHypergraph:
    ground: tuple
    d: int
    s: int
    q: int
    edges: dict = field(default_factory=dict)  # sorted d-tuple -> HEdge

    def color_of(self, xs) -> str | None:
        e = self.edges.get(tuple(sorted(xs)))
        return e.color if e else None

    def counts(self):
        red = sum(1 for e in self.edges.values() if e.color == RED)
        return {"edges": len(self.edges), "red": red, "blue": len(self.edges) - red}


def build_dset_hypergraph(g: BipartiteGraph, d: int, s: int, q: int, ground=None, max_dsets: int = 200_000) -> DSetHypergraph:
    """d-sets of A with |N| >= s; red when |N| >= q, blue otherwise."""
    ground = tuple(sorted(range(g.n_a) if ground is None else ground))
    if comb(len(ground), d) > max_dsets:
        raise BudgetExceeded(f"C({len(ground)}, {d}) d-sets exceed max_dsets={max_dsets}")
    h = DSetHypergraph(ground, d, s, q)
    rows = g.rows_a
    full = (1 << g.n_b) - 1
    for xs in combinations(ground, d):
        m = full
        for x in xs:
            m &= rows[x]
        size = popcount(m)
        if size >= s:
            h.edges[xs] = HEdge(size, RED if size >= q else BLUE, m)
    return h


def _clique_search(h: DSetHypergraph, size: int, accept_new, within=None, budget: Budget | None = None):
    """Backtracking over increasing vertex tuples; ``accept_new(S, v, new_dsets)`` filters extensions."""
    verts = [v for v in h.ground if within is None or v in within]
    d = h.d
    budget = budget or Budget(DEFAULT_NODE_BUDGET)
    chosen = []

    def rec(start):
        if len(chosen) == size:
            return tuple(chosen)
        for idx in range(start, len(verts) - (size - len(chosen)) + 1):
            budget.spend()
            v = verts[idx]
            if len(chosen) >= d - 1:
                new = [tuple(sorted(t + (v,))) for t in combinations(chosen, d - 1)]
            else:
                new = []
            if not accept_new(chosen, v, new):
                continue
            chosen.append(v)
            got = rec(idx + 1)
            if got is not None:
                return got
            chosen.pop()
            _undo(accept_new)
        return None

    return rec(0)


def _undo(fn):
    undo = getattr(fn, "undo", None)
    if undo is not None:
        undo()


def find_monochromatic_clique(h: DSetHypergraph, q_size: int, color: str, within=None, budget: Budget | None = None):
    """A q_size-set whose d-subsets are all edges of ``color``; None if none; Inconclusive on budget."""
    if q_size < h.d:
        raise InvalidArgument("q_size must be at least d")

    def accept(chosen, v, new):
        for xs in new:
            e = h.edges.get(xs)
            if e is None or e.color != color:
                return False
        return True

    budget = budget or Budget(DEFAULT_NODE_BUDGET)
    try:
        return _clique_search(h, q_size, accept, within, budget)
    except Exhausted:
        return Inconclusive("clique search budget exhausted", budget.used)


def _all_monochromatic_cliques(h: DSetHypergraph, q_size: int, color: str, budget: Budget):
    verts = list(h.ground)
    d = h.d
    out = []
    chosen = []

    def rec(start):
        if len(chosen) == q_size:
            out.append(tuple(chosen))
            return
        for idx in range(start, len(verts) - (q_size - len(chosen)) + 1):
            budget.spend()
            v = verts[idx]
            if len(chosen) >= d - 1:
                ok = True
                for t in combinations(chosen, d - 1):
                    e = h.edges.get(tuple(sorted(t + (v,))))
                    if e is None or e.color != color:
                        ok = False
                        break
                if not ok:
                    continue
            chosen.append(v)
            rec(idx + 1)
            chosen.pop()

    rec(0)
    return out


def find_disjoint_clique(h: DSetHypergraph, size: int, within=None, budget: Budget | None = None):
    """A ``size``-set all of whose d-subsets are edges with pairwise disjoint neighbourhoods."""
    used = [0]
    stack = []

    def accept(chosen, v, new):
        acc = used[0]
        for xs in new:
            e = h.edges.get(xs)
            if e is None or e.mask & acc:
                return False
            acc |= e.mask
        stack.append(used[0])
        used[0] = acc
        return True

    def undo():
        used[0] = stack.pop()

    accept.undo = undo
    budget = budget or Budget(DEFAULT_NODE_BUDGET)
    try:
        return _clique_search(h, size, accept, within, budget)
    except Exhausted:
        return Inconclusive("disjoint clique search budget exhausted", budget.used)


@dataclass
class CliqueCollection:
    cliques: list = field(default_factory=list)
    color: str = BLUE
    provenance: list = field(default_factory=list)  # S (tuple of B-vertices) per clique
    partial: bool = False
    star_count: int = 0
    s_sets_scanned: int = 0
    eq1_without_ramsey: float = 0.0

    @property
    def distinct(self) -> int:
        return len(set(self.cliques))

    def to_json(self):
        return {
            "color": self.color,
            "cliques": [list(c) for c in self.cliques],
            "provenance": [list(s) for s in self.provenance],
            "distinct": self.distinct,
            "partial": self.partial,
            "star_count": self.star_count,
            "s_sets_scanned": self.s_sets_scanned,
            "eq1_without_ramsey": self.eq1_without_ramsey,
        }


def harvest_blue_cliques(g: BipartiteGraph, h: DSetHypergraph, s: int, q_size: int,
                         max_ssets: int = 200_000, node_budget: int = DEFAULT_NODE_BUDGET) -> CliqueCollection:
    """For each s-set S of B, greedily take disjoint blue q_size-cliques inside N(S).

    Exhaustive clique search stands in for the Ramsey threshold: extraction
    from N(S) stops only when no blue clique remains among the unused vertices.
    """
    coll = CliqueCollection()
    ground = set(h.ground)
    rows = g.rows_b
    full = (1 << g.n_a) - 1
    budget = Budget(node_budget)
    for S in combinations(range(g.n_b), s):
        if coll.s_sets_scanned >= max_ssets:
            coll.partial = True
            break
        coll.s_sets_scanned += 1
        m = full
        for b in S:
            m &= rows[b]
        coll.star_count += popcount(m)
        avail = {a for a in bits(m) if a in ground}
        while len(avail) >= q_size:
            try:
                got = find_monochromatic_clique(h, q_size, BLUE, within=avail, budget=budget)
            except Exhausted:
                got = Inconclusive()
            if isinstance(got, Inconclusive):
                coll.partial = True
                break
            if got is None:
                break
            coll.cliques.append(got)
            coll.provenance.append(S)
            avail -= set(got)
        if coll.partial:
            break
    if q_size >= 1 and q_size - 1 >= s:
        coll.eq1_without_ramsey = coll.star_count / q_size / comb(q_size - 1, s)
    return coll


def _gen_binom(x: Fraction, s: int) -> Fraction:
    out = Fraction(1)
    for i in range(s):
        out *= (x - i)
    for i in range(1, s + 1):
        out /= i
    return out


def star_counts(g: BipartiteGraph, s: int) -> tuple[int, int]:
    """(sum over s-sets S of B of |N(S)|, sum over a in A of C(deg a, s)), computed independently."""
    left = 0
    full = (1 << g.n_a) - 1
    for S in combinations(range(g.n_b), s):
        m = full
        for b in S:
            m &= g.rows_b[b]
        left += popcount(m)
    right = sum(comb(d, s) for d in g.degrees(A))
    return left, right


def count_cliques_vs_bounds(collection: CliqueCollection, g: BipartiteGraph, config: SearchConfig,
                            h: DSetHypergraph | None = None) -> dict:
    """Both sides of the blue-clique upper bound and the star-count lower-bound chain."""
    d, s, q = config.d, config.s, config.q
    h = h or build_dset_hypergraph(g, d, s, q, max_dsets=config.max_dsets)
    n_a = len(h.ground)
    max_deg_b = max(g.degrees(B), default=0)
    c_qd = comb(q - 1, d) * (q - 1)
    ledger = {"n_A": n_a, "n_B": g.n_b, "edges": g.num_edges, "max_deg_B": max_deg_b, "c_qd": c_qd}
    try:
        blue = _all_monochromatic_cliques(h, q, BLUE, Budget(config.node_budget))
        ledger["blue_q_cliques"] = len(blue)
    except Exhausted:
        ledger["blue_q_cliques"] = None
    ledger["claim3_rhs_maxdeg"] = comb(n_a, q - 1) * c_qd * max_deg_b
    ledger["claim3_rhs_kappa"] = comb(n_a, q - 1) * c_qd * config.kappa * n_a
    if ledger["blue_q_cliques"] is not None:
        ledger["claim3_holds_maxdeg"] = ledger["blue_q_cliques"] <= ledger["claim3_rhs_maxdeg"]
    left, right = star_counts(g, s)
    ledger["star_sum_N"] = left
    ledger["star_sum_deg"] = right
    ledger["star_identity"] = left == right
    if g.n_a:
        avg = Fraction(g.num_edges, g.n_a)
        jensen = g.n_a * _gen_binom(avg, s)
        ledger["jensen_rhs"] = float(jensen)
        ledger["jensen_holds"] = right >= jensen
        ledger["jensen_tight"] = right == jensen
        ledger["power_rhs"] = g.num_edges ** s / (s ** s * g.n_a ** (s - 1))
    ledger["collection_size"] = collection.distinct
    ledger["eq1_without_ramsey"] = collection.eq1_without_ramsey
    return ledger


@dataclass
class PipelineResult:
    status: str  # 'found', 'absent', 'inconclusive', 'biclique'
    embedding: Embedding | None = None
    path: str | None = None
    certificate: tuple | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "status": self.status,
            "path": self.path,
            "embedding": self.embedding.to_json() if self.embedding else None,
            "certificate": [list(x) for x in self.certificate] if self.certificate else None,
            "diagnostics": jsonable(self.diagnostics),
        }


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and x != x:
        return None
    if isinstance(x, float) and x in (float("inf"), float("-inf")):
        return None
    return x


def _assemble_from_disjoint(g, body, d, s, h):
    """Hedgehog blocks straight from pairwise-disjoint neighbourhoods."""
    k = len(body)
    b_map = []
    for xs in dsets_colex(k, d):
        X = tuple(body[i] for i in xs)
        b_map.extend(list(bits(h.edges[X].mask))[:s])
    return Embedding(tuple(body), tuple(b_map), induced=True, body_target=(A, frozenset(h.ground)))


def find_induced_hedgehog(g: BipartiteGraph, config: SearchConfig, ground=None) -> PipelineResult:
    """Induced H(k, d, s) with body inside ``ground`` (default: all of A)."""
    k, d, s = config.k, config.d, config.s
    pattern = hedgehog(k, d, s)
    ground = tuple(sorted(range(g.n_a) if ground is None else ground))
    diag = {"k": k, "d": d, "s": s, "q": config.q}
    target = (A, frozenset(ground))

    def done(emb, path):
        v = verify_embedding(g, pattern, emb)
        if not v.ok:
            # a staged construction that fails verification is a bug; never report it
            diag[f"{path}_verify_failure"] = v.to_json()
            return None
        return PipelineResult("found", emb, path, diagnostics=diag)

    h = None
    if len(ground) >= k:
        try:
            h = build_dset_hypergraph(g, d, s, config.q, ground, config.max_dsets)
            diag["hypergraph"] = h.counts()
        except BudgetExceeded as exc:
            diag["hypergraph"] = str(exc)

    if h is not None:
        size = max(config.q, k)
        red = find_monochromatic_clique(h, size, RED, budget=Budget(config.node_budget))
        diag["red_clique"] = None if red is None else (red.reason if isinstance(red, Inconclusive) else list(red))
        if red is not None and not isinstance(red, Inconclusive):
            tried = 0
            for V in combinations(red, k):
                tried += 1
                if check_neighborhood_condition(g, V, d, s).holds:
                    res = done(extract_hedgehog(g, V, d, s), "claim1")
                    if res is not None:
                        diag["claim1_subsets_tried"] = tried
                        return res
            diag["claim1_subsets_tried"] = tried
        disj = find_disjoint_clique(h, k, budget=Budget(config.node_budget))
        diag["disjoint_clique"] = None if disj is None else (disj.reason if isinstance(disj, Inconclusive) else list(disj))
        if disj is not None and not isinstance(disj, Inconclusive):
            res = done(_assemble_from_disjoint(g, list(disj), d, s, h), "claim2")
            if res is not None:
                return res

    q = EmbedQuery(pattern, induced=True, body_target=target, node_budget=config.node_budget,
                   time_budget=config.time_budget)
    emb = find_embedding(g, q)
    if isinstance(emb, Inconclusive):
        diag["direct"] = "inconclusive"
        return PipelineResult("inconclusive", diagnostics=diag)
    if emb is None:
        diag["direct"] = "exhaustive"
        return PipelineResult("absent", diagnostics=diag)
    res = done(emb, "direct")
    if res is None:
        raise AssertionError("direct search returned an embedding that fails verification")
    return res


def _top_r_sets(g: BipartiteGraph, r: int, limit: int):
    """r-subsets X of B ordered by |N(X)| descending, then lexicographically."""
    scored = []
    full = (1 << g.n_a) - 1
    for X in combinations(range(g.n_b), r):
        m = full
        for b in X:
            m &= g.rows_b[b]
        scored.append((-popcount(m), X, m))
    scored.sort()
    return [(X, m) for _, X, m in scored[:limit]]


def find_induced_w(g: BipartiteGraph, config: SearchConfig) -> PipelineResult:
    """K_{t,t} certificate, induced W(k, d, r) with body in A, or a diagnosed failure."""
    k, d, r, t = config.k, config.d, config.r, config.t
    s = d - r - 1
    pattern = w_graph(k, d, r)
    stages = {}
    diag = {"stages": stages}

    bic = find_biclique(g, t, t) if t <= min(g.n_a, g.n_b) else None
    stages["biclique"] = None if bic is None else [list(x) for x in bic]
    if bic is not None and not isinstance(bic, Inconclusive):
        return PipelineResult("biclique", certificate=bic, diagnostics=diag)

    staged = _staged_w(g, config, pattern, stages)
    if staged is not None:
        return PipelineResult("found", staged, "staged", diagnostics=diag)

    q = EmbedQuery(pattern, induced=True, body_target=(A, None), node_budget=config.node_budget,
                   time_budget=config.time_budget)
    emb = find_embedding(g, q)
    if isinstance(emb, Inconclusive):
        stages["direct"] = "inconclusive"
        return PipelineResult("inconclusive", diagnostics=diag)
    if emb is None:
        stages["direct"] = "exhaustive"
        return PipelineResult("absent", diagnostics=diag)
    if not verify_embedding(g, pattern, emb).ok:
        raise AssertionError("direct search returned an embedding that fails verification")
    stages["direct"] = "found"
    return PipelineResult("found", emb, "direct", diagnostics=diag)


def _staged_w(g, config, pattern, stages):
    k, d, r, t = config.k, config.d, config.r, config.t
    s = d - r - 1
    gam = config.gamma_exponent

    # (1) almost-regular induced subgraph
    sub, rep, kept = almost_regularize(g, 1 - 1 / d, config.eps, config.K_target)
    stages["regularize"] = rep.to_json()
    if sub is None or sub.n_a < k or sub.n_b < s:
        G, a_idx, b_idx = g, tuple(range(g.n_a)), tuple(range(g.n_b))
        stages["regularize"]["used"] = False
    else:
        G, (a_idx, b_idx) = sub, kept
        stages["regularize"]["used"] = True
    K = rep.K_achieved if rep.K_achieved not in (0, float("inf")) else config.K_target
    eps_prime = 2 * config.eps / (5 * K)
    eta = config.eta if config.eta is not None else eps_prime / 4

    # (2) dense r-set X and A = N(X), truncated
    if r > 0:
        cands = _top_r_sets(G, r, config.max_x_candidates)
    else:
        cands = [((), (1 << G.n_a) - 1)]
    stage_x = []
    stages["x_candidates"] = stage_x
    for X, nx in cands:
        info = {"X": list(X), "N_X": popcount(nx)}
        stage_x.append(info)
        avail = list(bits(nx))
        if len(avail) < k:
            info["outcome"] = "N(X) smaller than k"
            continue
        if r > 0:
            target = ceil(config.xi / 2 * G.n_b ** (1 - (r + 1) / d))
            # below k the size target is meaningless at desk scale; keep all of N(X)
            size = min(len(avail), target) if target >= k else len(avail)
            info["target_size"] = target
            if 1 <= target <= G.n_a and r <= G.n_b:
                bound = kst_bound(r, target, G.n_b, G.n_a)
                info["claim1_kst_bound"] = bound
                info["claim1_margin"] = G.num_edges - bound
        else:
            size = len(avail)
        Aset = avail[:size]
        info["A_size"] = len(Aset)

        # (3) bad vertices
        thresh = len(Aset) ** (1 - gam)
        amask = mask_of(Aset)
        vbad = [b for b in range(G.n_b) if popcount(G.rows_b[b] & amask) >= thresh]
        info["V_bad"] = len(vbad)
        info["V_bad_over_A_gamma"] = len(vbad) / len(Aset) ** gam
        Bset = [b for b in range(G.n_b) if b not in set(vbad) and b not in X]
        H, ha, hb = induced_subgraph(G, Aset, Bset)
        max_deg = max(H.degrees(B), default=0)
        e_ab = H.num_edges
        nb = max(len(Bset), 1)
        info["claim3"] = {
            "A_small": len(Aset) <= config.xi * nb ** (s / d),
            "max_deg_B_ok": max_deg <= config.kappa * len(Aset),
            "dense": e_ab >= config.xi * eta * nb ** ((d + s - 1) / d),
            "edges_AB": e_ab,
        }

        # (4) induced hedgehog in G[A, B]
        hcfg = replace(config, r=0, s=s, q=max(2 * s + 2, k))
        res = find_induced_hedgehog(H, hcfg)
        info["hedgehog"] = {"status": res.status, "path": res.path}
        if res.status != "found":
            continue

        # (5) assemble W = hedgehog + X and verify in g
        e = res.embedding
        body = tuple(a_idx[ha[v]] for v in e.a_map)
        u = tuple(b_idx[hb[v]] for v in e.b_map)
        y = tuple(b_idx[x] for x in X)
        emb = Embedding(body, u + y, induced=True, body_target=(A, None))
        v = verify_embedding(g, pattern, emb)
        info["verified"] = v.ok
        if v.ok:
            return emb
        info["verify_failure"] = v.to_json()
    return None
