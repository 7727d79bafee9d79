"""Command-line front end: ``indturan <command> <subcommand> [options]``.

Exit codes: 0 success, 1 domain failure (bad input graph, failed
verification, budget exhausted), 2 usage error. ``TF_THREADS`` sets the
experiment worker count and ``TF_BUDGET_MS`` the default time budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bounds import density_threshold, gamma_family, kst_bound
from .errors import BudgetExceeded, Inconclusive, InvalidArgument, ParseError
from .experiment import ExperimentSpec, parse_pattern, run_experiment
from .extremal import ex_table, exact_ex
from .generators import (
    deletion_construct,
    hedgehog,
    powerset_incidence,
    random_bipartite,
    turan_graph,
    w_graph,
)
from .graph_core import A, B, BipartiteGraph, Embedding, MarkedGraph, parse_graph, serialize_graph, serialize_marked, to_dot
from .hedgehog_embed import embed_bounded_degree, embed_powerset, extract_hedgehog, verify_bounded
from .matching import DEFAULT_NODE_BUDGET
from .proposition import (
    SearchConfig,
    build_dset_hypergraph,
    count_cliques_vs_bounds,
    find_induced_hedgehog,
    find_induced_w,
    harvest_blue_cliques,
    jsonable,
)
from .reduction import almost_regularize
from .search import EmbedQuery, count_copies, find_biclique, find_embedding, vc_dimension, verify_embedding


class DomainFailure(Exception):
    """Raised by a handler to exit with status 1 after printing its output."""


def _time_budget(args) -> float | None:
    ms = getattr(args, "time_ms", None)
    if ms is None:
        env = os.environ.get("TF_BUDGET_MS")
        ms = float(env) if env else None
    return None if ms is None else ms / 1000.0


def _read_graph(path):
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    return parse_graph(text)


def _plain(g):
    return g.graph if isinstance(g, MarkedGraph) else g


def _write(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit(obj, args):
    _write(json.dumps(obj, indent=2, sort_keys=True) + "\n", getattr(args, "json_out", None))


def _save_graph(g, out):
    text = serialize_marked(g) if isinstance(g, MarkedGraph) else serialize_graph(g)
    _write(text, out)


# gen ----------------------------------------------------------------------

def cmd_gen(args):
    kind = args.kind
    if kind == "hedgehog":
        g = hedgehog(args.k, args.d, args.j)
    elif kind == "w":
        g = w_graph(args.k, args.d, args.r)
    elif kind == "powerset":
        g = powerset_incidence(args.m)
    elif kind == "turan":
        g = turan_graph(args.n, args.parts)
    elif kind == "random":
        g = random_bipartite(args.n, args.p, args.seed)
    elif kind == "deletion":
        family = [parse_pattern(f) for f in args.family]
        g, rep = deletion_construct(args.n, family, seed=args.seed, margin=args.margin)
        if g is not None:
            _save_graph(g, args.output)
        if args.report or args.output not in (None, "-"):
            _write(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n", args.report)
        if g is None:
            raise DomainFailure("deletion budget exhausted")
        return
    else:  # pragma: no cover - argparse restricts choices
        raise InvalidArgument(kind)
    if args.format == "dot":
        body = sorted(g.body) if isinstance(g, MarkedGraph) else ()
        _write(to_dot(_plain(g), body), args.output)
    else:
        _save_graph(g, args.output)


# search -------------------------------------------------------------------

def cmd_search(args):
    g = _plain(_read_graph(args.input))
    if not isinstance(g, BipartiteGraph):
        raise InvalidArgument("search needs a bipartite host")
    if args.kind == "biclique":
        hit = find_biclique(g, args.t1, args.t2)
        if isinstance(hit, Inconclusive):
            _emit({"found": None, "inconclusive": True}, args)
            raise DomainFailure("biclique search inconclusive")
        if hit is None:
            _emit({"found": False}, args)
        else:
            _emit({"found": True, "a_set": list(hit[0]), "b_set": list(hit[1])}, args)
    elif args.kind == "vc":
        _emit(vc_dimension(g, args.part).to_json(), args)
    elif args.kind in ("embed", "count"):
        pattern = parse_pattern(args.pattern)
        if args.kind == "count":
            n = count_copies(g, _plain(pattern), respect_sides=not args.either_side, induced=args.induced,
                             node_budget=args.budget)
            _emit({"count": n}, args)
            return
        body_target = None
        if args.body_part:
            if not isinstance(pattern, MarkedGraph):
                raise InvalidArgument("--body-part needs a pattern with a body")
            body_target = (args.body_part, None)
        q = EmbedQuery(pattern, induced=args.induced, respect_sides=not args.either_side, body_target=body_target,
                       node_budget=args.budget, time_budget=_time_budget(args))
        e = find_embedding(g, q)
        if isinstance(e, Inconclusive):
            _emit({"status": "inconclusive", "embedding": None, "nodes": e.nodes}, args)
            raise DomainFailure("search inconclusive")
        if e is None:
            _emit({"status": "absent", "embedding": None}, args)
            return
        v = verify_embedding(g, pattern, e)
        _emit({"status": "found", "embedding": e.to_json(), "verdict": v.to_json()}, args)


# embed --------------------------------------------------------------------

def cmd_embed(args):
    if args.kind == "powerset":
        res = embed_powerset(args.d, max_k=args.max_k)
        pattern = powerset_incidence(args.d + 1).graph
    elif args.kind == "bounded":
        pattern = _plain(_read_graph(args.input))
        res = embed_bounded_degree(pattern, args.d, args.r, k=args.k, max_k=args.max_k)
    else:
        g = _plain(_read_graph(args.input))
        body = [int(x) for x in args.body.split(",")]
        emb = extract_hedgehog(g, body, args.d, args.s)
        v = verify_embedding(g, hedgehog(len(body), args.d, args.s), emb)
        _emit({"embedding": emb.to_json(), "verified": v.ok}, args)
        if not v.ok:
            raise DomainFailure("extracted hedgehog failed verification")
        return
    if isinstance(res, Inconclusive):
        _emit({"status": "inconclusive", "reason": res.reason}, args)
        raise DomainFailure(res.reason)
    ok = verify_bounded(pattern, res)
    out = {"embedding": res.embedding.to_json(), "verified": ok, "k": res.k, "d": res.d, "r": res.r, "s": res.s}
    _emit(out, args)
    if not ok:
        raise DomainFailure("embedding failed verification")


# prop ---------------------------------------------------------------------

def _config(args) -> SearchConfig:
    return SearchConfig(t=args.t, d=args.d, k=args.k, r=args.r, s=args.s, q=args.q, eps=args.eps,
                        node_budget=args.budget, time_budget=_time_budget(args))


def cmd_prop(args):
    g = _plain(_read_graph(args.input))
    cfg = _config(args)
    if args.kind == "hypergraph":
        h = build_dset_hypergraph(g, cfg.d, cfg.s, cfg.q, max_dsets=cfg.max_dsets)
        coll = harvest_blue_cliques(g, h, cfg.s, cfg.q, cfg.max_ssets, cfg.node_budget)
        ledger = count_cliques_vs_bounds(coll, g, cfg, h)
        _emit({**h.counts(), "ledger": jsonable(ledger)}, args)
        return
    res = find_induced_hedgehog(g, cfg) if args.kind == "hedgehog" else find_induced_w(g, cfg)
    _emit(res.to_json(), args)
    if args.dot and res.embedding is not None:
        a_side, b_side = res.embedding.host_sets()
        Path(args.dot).write_text(to_dot(g, a_side, highlight={(B, b) for b in b_side}))
    if res.status == "inconclusive":
        raise DomainFailure("pipeline inconclusive")


# ex -----------------------------------------------------------------------

def _split_patterns(items):
    """Accept ``--forbid a b`` as well as ``--forbid a,b`` (commas inside parentheses kept)."""
    out = []
    for item in items:
        depth, cur = 0, ""
        for ch in item:
            depth += ch == "("
            depth -= ch == ")"
            if ch == "," and depth == 0:
                out.append(cur)
                cur = ""
            else:
                cur += ch
        out.append(cur)
    return [p.strip() for p in out if p.strip()]


def cmd_ex(args):
    subs = [parse_pattern(p) for p in _split_patterns(args.forbid)]
    inds = [parse_pattern(p) for p in _split_patterns(args.forbid_induced)]
    if args.n is not None:
        res = exact_ex(args.n, subs, inds, args.budget, args.orientation)
        if args.format == "csv":
            _, text = ex_table([args.n], subs, inds, args.budget, args.orientation)
            _write(text, args.json_out)
        else:
            _emit(res.to_json(), args)
        if not res.exhaustive:
            raise DomainFailure("budget exhausted before the search finished")
        return
    lo, hi = (int(x) for x in args.n_range.split(":"))
    rows, text = ex_table(range(lo, hi + 1), subs, inds, args.budget, args.orientation, args.witness_dir)
    _write(text, args.json_out)
    if any(r.error or not r.exhaustive for r in rows):
        raise DomainFailure("some rows are incomplete")


# bounds / reduce / verify / experiment ------------------------------------

def cmd_bounds(args):
    if args.kind == "kst":
        _emit({"value": kst_bound(args.y1, args.y2, args.Y1, args.Y2)}, args)
    elif args.kind == "gamma":
        g = gamma_family([parse_pattern(p) for p in args.pattern])
        _emit({"value": str(g), "float": float(g)}, args)
    else:
        _emit({"value": density_threshold(args.n, args.d, args.eps)}, args)


def cmd_reduce(args):
    g = _plain(_read_graph(args.input))
    sub, rep, kept = almost_regularize(g, args.eps, args.c, args.K)
    out = rep.to_json()
    _emit(out, args)
    if sub is not None and args.output:
        _save_graph(sub, args.output)
    if sub is None:
        raise DomainFailure(f"regularization: {rep.status}")


def cmd_verify(args):
    host = _plain(_read_graph(args.input))
    pattern = parse_pattern(args.pattern)
    emb = Embedding.from_json(json.loads(Path(args.map).read_text()))
    v = verify_embedding(host, pattern, emb)
    _emit(v.to_json(), args)
    if not v.ok:
        raise DomainFailure(f"verification failed: {v.kind}")


def cmd_experiment(args):
    spec = ExperimentSpec.from_file(args.spec)
    if spec.config.time_budget is None:
        spec.config.time_budget = _time_budget(args)
    manifest = run_experiment(spec, args.out)
    _emit({k: manifest[k] for k in ("name", "kind", "version", "outputs")} | {"config": manifest["config"]}, args)


# parser -------------------------------------------------------------------

def _budget_opts(p):
    p.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET, help="search node budget")
    p.add_argument("--time-ms", dest="time_ms", type=float, help="time budget (default: $TF_BUDGET_MS)")


def _json_out(p):
    p.add_argument("--json-out", dest="json_out", help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="indturan", description="Induced bipartite Turán workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate graphs")
    gs = g.add_subparsers(dest="kind", required=True)
    for name, extra in [("hedgehog", ("k", "d", "j")), ("w", ("k", "d", "r")), ("powerset", ("m",)),
                        ("turan", ("n", "parts")), ("random", ("n",)), ("deletion", ("n",))]:
        p = gs.add_parser(name)
        for a in extra:
            flags = ["--parts", "--r"] if name == "turan" and a == "parts" else [f"--{a}"]
            p.add_argument(*flags, dest=a, type=int, required=True)
        p.add_argument("-o", "--output")
        p.add_argument("--format", choices=["graph", "dot"], default="graph")
        if name == "random":
            p.add_argument("--p", type=float, required=True)
            p.add_argument("--seed", type=int)
        if name == "deletion":
            p.add_argument("--family", nargs="+", required=True, help="K(s,t), W(k,d,r), H(k,d,j), C(h) or files")
            p.add_argument("--seed", type=int)
            p.add_argument("--margin", type=float, default=0.5)
            p.add_argument("--report", help="JSON report path (stdout if -o is a file)")
        p.set_defaults(func=cmd_gen)

    s = sub.add_parser("search", help="embedding, biclique, VC and counting queries")
    ss = s.add_subparsers(dest="kind", required=True)
    for name in ("embed", "biclique", "vc", "count"):
        p = ss.add_parser(name)
        p.add_argument("-i", "--input", "--host", dest="input", help="host graph file (stdin if omitted)")
        _json_out(p)
        p.set_defaults(func=cmd_search)
        if name == "biclique":
            p.add_argument("--t1", type=int, required=True)
            p.add_argument("--t2", type=int, required=True)
        elif name == "vc":
            p.add_argument("--part", "--side", dest="part", choices=[A, B], default=A)
        else:
            p.add_argument("--pattern", required=True)
            p.add_argument("--induced", action="store_true")
            p.add_argument("--either-side", action="store_true", help="allow the pattern's parts to swap")
            p.add_argument("--respect-sides", action="store_true", help="the default; kept for symmetry")
            _budget_opts(p)
            if name == "embed":
                p.add_argument("--body-part", "--body-in", dest="body_part", choices=[A, B])

    e = sub.add_parser("embed", help="constructive embeddings")
    es = e.add_subparsers(dest="kind", required=True)
    p = es.add_parser("powerset")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-k", dest="max_k", type=int, default=40)
    _json_out(p)
    p = es.add_parser("bounded")
    p.add_argument("-i", "--input", "--pattern", dest="input")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--max-k", dest="max_k", type=int, default=40)
    _json_out(p)
    p = es.add_parser("hedgehog")
    p.add_argument("-i", "--input", "--host", dest="input")
    p.add_argument("--body", required=True, help="comma-separated A-vertices")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    _json_out(p)
    for p in es.choices.values():
        p.set_defaults(func=cmd_embed)

    pr = sub.add_parser("prop", help="staged hedgehog / W searches")
    ps = pr.add_subparsers(dest="kind", required=True)
    for name in ("hypergraph", "hedgehog", "w"):
        p = ps.add_parser(name)
        p.add_argument("-i", "--input")
        for a, default in (("t", 4), ("d", 2), ("k", 3), ("r", 0)):
            p.add_argument(f"--{a}", type=int, default=default)
        p.add_argument("--s", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--eps", type=float, default=0.5)
        p.add_argument("--dot", help="write a DOT drawing of the found embedding")
        _budget_opts(p)
        _json_out(p)
        p.set_defaults(func=cmd_prop)

    x = sub.add_parser("ex", help="exact induced Turán numbers at tiny n")
    grp = x.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int)
    grp.add_argument("--n-range", dest="n_range", help="lo:hi inclusive")
    x.add_argument("--forbid", nargs="*", default=[])
    x.add_argument("--forbid-induced", dest="forbid_induced", nargs="*", default=[])
    x.add_argument("--budget", type=int, default=5_000_000)
    x.add_argument("--orientation", choices=["both", "as_given"], default="both")
    x.add_argument("--format", choices=["json", "csv"], default="json")
    x.add_argument("--witness-dir", dest="witness_dir")
    _json_out(x)
    x.set_defaults(func=cmd_ex)

    b = sub.add_parser("bounds", help="KST bound, gamma, density threshold")
    bs = b.add_subparsers(dest="kind", required=True)
    p = bs.add_parser("kst")
    for a in ("y1", "y2", "Y1", "Y2"):
        p.add_argument(f"--{a}", type=int, required=True)
    p = bs.add_parser("gamma")
    p.add_argument("--pattern", "--family", dest="pattern", nargs="+", required=True)
    p = bs.add_parser("threshold")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)
    for p in bs.choices.values():
        _json_out(p)
        p.set_defaults(func=cmd_bounds)

    r = sub.add_parser("reduce", help="almost-regular induced subgraph")
    r.add_argument("-i", "--input")
    r.add_argument("--eps", type=float, required=True)
    r.add_argument("--c", type=float, required=True)
    r.add_argument("--K", type=float, default=32.0)
    r.add_argument("-o", "--output")
    _json_out(r)
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check an embedding certificate")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--pattern", required=True)
    v.add_argument("--map", required=True, help="embedding JSON")
    _json_out(v)
    v.set_defaults(func=cmd_verify)

    ex = sub.add_parser("experiment", help="run an experiment spec (INI)")
    ex.add_argument("spec")
    ex.add_argument("--out", help="output directory (overrides the spec)")
    ex.add_argument("--time-ms", dest="time_ms", type=float)
    _json_out(ex)
    ex.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except DomainFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InvalidArgument, ParseError, BudgetExceeded, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
