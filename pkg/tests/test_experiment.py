import csv
import io
import json
import math

import numpy as np
import pytest

from indturan.errors import InvalidArgument
from indturan.experiment import ExperimentSpec, cell_seed, fit_loglog, parse_pattern, run_experiment
from indturan.generators import complete_bipartite
from indturan.graph_core import BipartiteGraph

DELETION = """
[experiment]
name = tiny-deletion
kind = deletion
family = K(2,2)
n_grid = 8, 16
seeds = 3
base_seed = 5
"""


def test_parse_pattern(tmp_path):
    assert parse_pattern("K(2,3)") == complete_bipartite(2, 3)
    assert parse_pattern("W(3,2,0)").graph.num_edges == 6
    assert parse_pattern(" H(4, 2, 1) ").graph.n_b == 6
    assert parse_pattern("C(4)").num_edges == 8
    f = tmp_path / "p.graph"
    f.write_text("p bip 1 1 1\ne 0 0\n")
    assert parse_pattern(str(f)).num_edges == 1
    with pytest.raises(InvalidArgument):
        parse_pattern("K(2)")
    with pytest.raises(InvalidArgument):
        parse_pattern("nope.graph")


def test_empty_grid_rejected():
    with pytest.raises(InvalidArgument, match="n_grid"):
        ExperimentSpec.from_ini(DELETION.replace("n_grid = 8, 16", "n_grid ="))
    with pytest.raises(InvalidArgument):
        ExperimentSpec("x", "deletion", [], family=["K(2,2)"]).validate()


def test_missing_file_rejected():
    with pytest.raises(InvalidArgument):
        ExperimentSpec.from_ini(DELETION.replace("K(2,2)", "missing.graph"))


def test_seeds_are_split_deterministically():
    assert cell_seed(1, 8, 0) == cell_seed(1, 8, 0)
    assert len({cell_seed(1, n, i) for n in (8, 16) for i in range(5)}) == 10


def test_fit_loglog():
    xs = [10, 20, 40]
    assert fit_loglog(xs, [x ** 1.5 for x in xs]) == pytest.approx(1.5)
    assert math.isnan(fit_loglog([10], [5]))


def test_deletion_run_is_reproducible(tmp_path):
    spec = ExperimentSpec.from_ini(DELETION)
    m1 = run_experiment(spec, tmp_path / "a")
    m2 = run_experiment(spec, tmp_path / "b")
    a = (tmp_path / "a" / "deletion.csv").read_text()
    assert a == (tmp_path / "b" / "deletion.csv").read_text()
    rows = list(csv.DictReader(io.StringIO(a)))
    assert len(rows) == 6 and set(rows[0]) >= {"n", "seed", "edges", "gamma", "fitted_exponent"}
    assert all(r["gamma"] == "2/3" and not r["error"] for r in rows)
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["version"] and man["config"]["n_grid"] == [8, 16] and "started" in man
    assert m1["outputs"] == m2["outputs"] == ["deletion.csv"]


def test_worker_count_does_not_change_output(tmp_path, monkeypatch):
    spec = ExperimentSpec.from_ini(DELETION)
    run_experiment(spec, tmp_path / "serial")
    monkeypatch.setenv("TF_THREADS", "2")
    run_experiment(spec, tmp_path / "parallel")
    assert (tmp_path / "serial" / "deletion.csv").read_text() == (tmp_path / "parallel" / "deletion.csv").read_text()


def test_w_detection_rates(tmp_path):
    spec = ExperimentSpec.from_ini("""
[experiment]
name = w
kind = w_detection
n_grid = 8
densities = 0.1, 0.5
seeds = 3
[search]
t = 3
k = 3
d = 2
node_budget = 100000
""")
    run_experiment(spec, tmp_path)
    rows = list(csv.DictReader(io.StringIO((tmp_path / "w_detection_rates.csv").read_text())))
    assert len(rows) == 2
    for r in rows:
        total = sum(float(r[k]) for k in r if k.endswith("_rate"))
        assert total == pytest.approx(1.0)


def test_ex_run(tmp_path):
    spec = ExperimentSpec.from_ini("""
[experiment]
name = ex
kind = ex
n_grid = 1, 2, 3
forbid = K(2,2)
""")
    run_experiment(spec, tmp_path)
    text = (tmp_path / "ex.csv").read_text()
    assert "runtime" not in text.splitlines()[0]
    assert [l.split(",")[1] for l in text.strip().splitlines()[1:]] == ["1", "3", "6"]


def test_per_cell_errors_are_recorded(tmp_path, monkeypatch):
    import indturan.experiment as ex

    def boom(*a, **k):
        raise RuntimeError("synthetic failure")

    monkeypatch.setattr(ex, "deletion_construct", boom)
    run_experiment(ExperimentSpec.from_ini(DELETION), tmp_path)
    rows = list(csv.DictReader(io.StringIO((tmp_path / "deletion.csv").read_text())))
    assert len(rows) == 6 and all("synthetic failure" in r["error"] for r in rows)


@pytest.mark.parametrize("name", ["deletion_scaling.ini", "w_detection.ini", "ex_c4.ini"])
def test_shipped_specs_validate(name):
    from pathlib import Path

    spec = ExperimentSpec.from_file(Path(__file__).parent.parent / "scripts" / "specs" / name)
    assert spec.n_grid
