"""Edge counts of deletion-method graphs against n, with the fitted log-log exponent.

    python scripts/deletion_scaling.py --family "K(3,3)" "W(3,2,0)" --n 32 64 128 --seeds 20
"""

import argparse
import sys

from indturan.bounds import gamma_family
from indturan.experiment import ExperimentSpec, parse_pattern, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--family", nargs="+", default=["K(3,3)", "W(3,2,0)"])
    ap.add_argument("--n", type=int, nargs="+", default=[32, 64, 128])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--base-seed", type=int, default=2024)
    ap.add_argument("--margin", type=float, default=0.5)
    ap.add_argument("--out", default="runs/deletion_scaling")
    args = ap.parse_args()
    spec = ExperimentSpec(name="deletion-scaling", kind="deletion", n_grid=args.n, seeds=args.seeds,
                          base_seed=args.base_seed, family=args.family, margin=args.margin, out_dir=args.out)
    manifest = run_experiment(spec)
    g = gamma_family([parse_pattern(p) for p in args.family])
    slope = manifest["summary"]["fitted_exponent"]
    print(f"gamma = {g}; expected exponent 2 - gamma = {2 - float(g):.3f}; fitted = {slope:.3f}")
    for n, m in manifest["summary"]["mean_edges"].items():
        print(f"  n={n:>4}  mean edges={m:.1f}")
    print(f"CSV: {args.out}/deletion.csv", file=sys.stderr)


if __name__ == "__main__":
    main()
