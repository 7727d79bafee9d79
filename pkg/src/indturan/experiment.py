"""Scripted experiment suites driven by INI spec files.

A spec file has an ``[experiment]`` section plus optional ``[search]``
(SearchConfig overrides) and ``[output]`` sections::

    [experiment]
    name = deletion-scaling
    kind = deletion            ; deletion | w_detection | ex
    family = K(3,3); W(3,2,0)
    n_grid = 32, 64, 128
    seeds = 20
    base_seed = 2024

    [output]
    dir = runs/deletion

Every (n, seed) cell gets its own generator seeded from
``SeedSequence(base_seed, spawn_key=(n, index))`` so cells are independent
of ordering and worker count. CSV outputs carry no timestamps; those live
only in ``manifest.json``.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
import math
import os
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidArgument
from .extremal import ex_table
from .generators import complete_bipartite, deletion_construct, even_cycle, hedgehog, random_bipartite, w_graph
from .graph_core import parse_graph
from .proposition import SearchConfig, find_induced_w
from .search import verify_embedding

KINDS = ("deletion", "w_detection", "ex")

_PATTERN_RE = re.compile(r"^\s*([KWHC])\s*\(([\d,\s]+)\)\s*$")


def parse_pattern(text: str):
    """``K(s,t)``, ``W(k,d,r)``, ``H(k,d,j)``, ``C(half)`` or a path to a graph file."""
    m = _PATTERN_RE.match(text)
    if m:
        kind = m.group(1)
        args = [int(x) for x in m.group(2).split(",") if x.strip()]
        want = {"K": 2, "W": 3, "H": 3, "C": 1}[kind]
        if len(args) != want:
            raise InvalidArgument(f"{kind}(...) takes {want} integers, got {text!r}")
        if kind == "K":
            return complete_bipartite(*args)
        if kind == "W":
            return w_graph(*args)
        if kind == "H":
            return hedgehog(*args)
        return even_cycle(*args)
    path = Path(text)
    if not path.exists():
        raise InvalidArgument(f"unknown pattern {text!r} (not a name and no such file)")
    return parse_graph(path.read_text())


def _int_list(text: str) -> list[int]:
    return [int(x) for x in re.split(r"[,\s]+", text.strip()) if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in re.split(r"[,\s]+", text.strip()) if x]


@dataclass
class ExperimentSpec:
    name: str
    kind: str
    n_grid: list
    seeds: int = 10
    base_seed: int = 0
    family: list = field(default_factory=list)  # pattern strings
    margin: float = 0.5
    densities: list = field(default_factory=lambda: [0.1])
    forbid: list = field(default_factory=list)
    forbid_induced: list = field(default_factory=list)
    ex_budget: int = 5_000_000
    config: SearchConfig = field(default_factory=SearchConfig)
    out_dir: str = "runs"

    def validate(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.n_grid:
            raise InvalidArgument("n_grid must be non-empty")
        if any(n < 1 for n in self.n_grid):
            raise InvalidArgument("n_grid entries must be positive")
        if self.kind != "ex" and self.seeds < 1:
            raise InvalidArgument("seeds must be positive")
        if self.kind == "deletion" and not self.family:
            raise InvalidArgument("deletion experiments need a family")
        if self.kind == "w_detection" and not self.densities:
            raise InvalidArgument("densities must be non-empty")
        for p in self.family + self.forbid + self.forbid_induced:
            parse_pattern(p)  # referenced files must exist
        return self

    @classmethod
    def from_ini(cls, text: str, base_dir: str | Path | None = None) -> "ExperimentSpec":
        cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        cp.read_string(text)
        if "experiment" not in cp:
            raise InvalidArgument("spec needs an [experiment] section")
        ex = cp["experiment"]

        def patterns(key):
            items = [p.strip() for p in ex.get(key, "").split(";") if p.strip()]
            if base_dir is not None:
                items = [p if _PATTERN_RE.match(p) or Path(p).is_absolute() else str(Path(base_dir) / p) for p in items]
            return items

        cfg = {}
        if "search" in cp:
            for key, val in cp["search"].items():
                cfg[key] = float(val) if any(c in val for c in ".e") else int(val)
        spec = cls(
            name=ex.get("name", "experiment"),
            kind=ex.get("kind", ""),
            n_grid=_int_list(ex.get("n_grid", "")),
            seeds=ex.getint("seeds", 10),
            base_seed=ex.getint("base_seed", 0),
            family=patterns("family"),
            margin=ex.getfloat("margin", 0.5),
            densities=_float_list(ex.get("densities", "0.1")),
            forbid=patterns("forbid"),
            forbid_induced=patterns("forbid_induced"),
            ex_budget=ex.getint("budget", 5_000_000),
            config=SearchConfig(**cfg),
            out_dir=cp.get("output", "dir", fallback="runs"),
        )
        return spec.validate()

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentSpec":
        path = Path(path)
        return cls.from_ini(path.read_text(), base_dir=path.parent)


def cell_seed(base: int, n: int, index: int) -> int:
    ss = np.random.SeedSequence(base, spawn_key=(n, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def fit_loglog(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if x > 0 and y > 0]
    if len(pts) < 2:
        return float("nan")
    lx, ly = np.array(pts).T
    return float(np.polyfit(lx, ly, 1)[0])


def _deletion_cell(args):
    n, index, seed, family, margin = args
    pats = [parse_pattern(p) for p in family]
    try:
        g, rep = deletion_construct(n, pats, seed=seed, margin=margin)
    except Exception as exc:
        return {"n": n, "seed": seed, "index": index, "error": f"{type(exc).__name__}: {exc}"}
    return {"n": n, "seed": seed, "index": index, "edges": rep.final_edges, "gamma": str(rep.gamma),
            "status": rep.status, "error": ""}


def _w_cell(args):
    n, index, seed, density, config = args
    try:
        g = random_bipartite(n, density, seed)
        res = find_induced_w(g, config)
        if res.status == "found" and not verify_embedding(g, w_graph(config.k, config.d, config.r), res.embedding).ok:
            raise AssertionError("pipeline returned an unverified embedding")
    except Exception as exc:
        return {"n": n, "density": density, "seed": seed, "status": "error", "error": f"{type(exc).__name__}: {exc}"}
    return {"n": n, "density": density, "seed": seed, "status": res.status, "path": res.path or "", "error": ""}


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("TF_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(fn, cells):
    workers = _workers()
    if workers == 1 or len(cells) < 2:
        return [fn(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _run_deletion(spec: ExperimentSpec):
    cells = [(n, i, cell_seed(spec.base_seed, n, i), spec.family, spec.margin)
             for n in spec.n_grid for i in range(spec.seeds)]
    results = _fan_out(_deletion_cell, cells)
    means = []
    for n in spec.n_grid:
        vals = [r["edges"] for r in results if r["n"] == n and not r["error"] and r["status"] == "ok"]
        means.append(float(np.mean(vals)) if vals else float("nan"))
    slope = fit_loglog(spec.n_grid, means)
    rows = [[r["n"], r["seed"], r.get("edges", ""), r.get("gamma", ""), f"{slope:.6f}", r.get("status", ""), r["error"]]
            for r in results]
    text = _csv(["n", "seed", "edges", "gamma", "fitted_exponent", "status", "error"], rows)
    summary = {
        "fitted_exponent": None if math.isnan(slope) else slope,
        "mean_edges": {str(n): None if math.isnan(m) else m for n, m in zip(spec.n_grid, means)},
    }
    return {"deletion.csv": text}, summary


def _run_w(spec: ExperimentSpec):
    cells = [(n, i, cell_seed(spec.base_seed, n, i), p, spec.config)
             for n in spec.n_grid for p in spec.densities for i in range(spec.seeds)]
    results = _fan_out(_w_cell, cells)
    raw = _csv(["n", "density", "seed", "status", "path", "error"],
               [[r["n"], r["density"], r["seed"], r["status"], r.get("path", ""), r["error"]] for r in results])
    summary = []
    for n in spec.n_grid:
        for p in spec.densities:
            grp = [r["status"] for r in results if r["n"] == n and r["density"] == p]
            tot = len(grp)
            rate = {s: grp.count(s) / tot for s in ("found", "absent", "inconclusive", "biclique", "error")}
            summary.append([n, p, tot] + [f"{rate[s]:.4f}" for s in ("found", "absent", "inconclusive", "biclique", "error")])
    rates = _csv(["n", "density", "trials", "found_rate", "absent_rate", "inconclusive_rate", "biclique_rate", "error_rate"],
                 summary)
    return {"w_detection_cells.csv": raw, "w_detection_rates.csv": rates}, {}


def _run_ex(spec: ExperimentSpec):
    subs = [parse_pattern(p) for p in spec.forbid]
    inds = [parse_pattern(p) for p in spec.forbid_induced]
    _, text = ex_table(spec.n_grid, subs, inds, spec.ex_budget)
    # runtime is machine-dependent; drop it so reruns are byte-identical
    lines = list(csv.reader(io.StringIO(text)))
    idx = lines[0].index("runtime")
    text = _csv([h for k, h in enumerate(lines[0]) if k != idx],
                [[v for k, v in enumerate(row) if k != idx] for row in lines[1:]])
    return {"ex.csv": text}, {}


def run_experiment(spec: ExperimentSpec, out_dir: str | Path | None = None) -> dict:
    """Run every cell, write the CSVs and a manifest; return the manifest dict."""
    spec.validate()
    out = Path(out_dir if out_dir is not None else spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.monotonic()
    runner = {"deletion": _run_deletion, "w_detection": _run_w, "ex": _run_ex}[spec.kind]
    files, extra = runner(spec)
    for name, text in files.items():
        (out / name).write_text(text)
    config = asdict(spec)
    manifest = {
        "name": spec.name,
        "kind": spec.kind,
        "version": __version__,
        "config": config,
        "outputs": sorted(files),
        "summary": extra,
        "started": started,
        "finished": datetime.now(timezone.utc).isoformat(),
        "elapsed_seconds": time.monotonic() - t0,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, default=str) + "\n")
    return manifest
