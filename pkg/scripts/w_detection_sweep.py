"""Found / absent / inconclusive rates of the staged W search on random graphs,
plus the detection rate on planted instances.

    python scripts/w_detection_sweep.py --k 3 --d 2 --r 0 --n 12 16 --densities 0.05 0.1 0.2
"""

import argparse
from collections import Counter

from indturan.experiment import ExperimentSpec, cell_seed, run_experiment
from indturan.generators import plant_pattern, w_graph
from indturan.proposition import SearchConfig, find_induced_w
from indturan.search import verify_embedding


def planted_rate(k, d, r, trials, noise, t, base_seed):
    w = w_graph(k, d, r)
    n = max(24, w.graph.n_b + 8)
    tally = Counter()
    for i in range(trials):
        g, _, _ = plant_pattern(w, n, noise, seed=cell_seed(base_seed, n, i))
        res = find_induced_w(g, SearchConfig(t=t, d=d, k=k, r=r))
        if res.embedding is not None and not verify_embedding(g, w, res.embedding).ok:
            raise AssertionError("unverified embedding")
        tally[res.status] += 1
    return tally


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--r", type=int, default=0)
    ap.add_argument("--t", type=int, default=4)
    ap.add_argument("--n", type=int, nargs="+", default=[12, 16])
    ap.add_argument("--densities", type=float, nargs="+", default=[0.05, 0.1, 0.2])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--base-seed", type=int, default=7)
    ap.add_argument("--planted", type=int, default=20, help="planted trials (0 to skip)")
    ap.add_argument("--out", default="runs/w_detection")
    args = ap.parse_args()
    cfg = SearchConfig(t=args.t, d=args.d, k=args.k, r=args.r, node_budget=200_000)
    spec = ExperimentSpec(name="w-detection", kind="w_detection", n_grid=args.n, seeds=args.seeds,
                          base_seed=args.base_seed, densities=args.densities, config=cfg, out_dir=args.out)
    run_experiment(spec)
    print(open(f"{args.out}/w_detection_rates.csv").read(), end="")
    if args.planted:
        tally = planted_rate(args.k, args.d, args.r, args.planted, 0.1, args.t, args.base_seed)
        print(f"planted W({args.k},{args.d},{args.r}), noise 0.1: {dict(tally)}")


if __name__ == "__main__":
    main()
