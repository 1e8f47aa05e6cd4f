"""Headline experiment: 15-fold CV with the Table II settings over several seeds,
in both preprocessing modes, plus the PCA-dimension sweep.

    python scripts/paper_experiment.py --data tests/data/dataR2.csv --out runs/paper
"""
import argparse
import logging
import time
from pathlib import Path

from pcamlp.crossval import run_cv, sweep_dims, sweep_summary_csv
from pcamlp.dataio import load_bccd
from pcamlp.nn import TrainConfig

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", type=Path, required=True)
    ap.add_argument("--out", type=Path, default=Path("runs/paper"))
    ap.add_argument("--seeds", type=int, nargs="+", default=[42, 43, 44, 45, 46])
    ap.add_argument("--epochs", type=int, default=3000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--no-sweep", action="store_true")
    a = ap.parse_args()
    logging.basicConfig(level=logging.INFO)

    ds = load_bccd(a.data)
    print(f"{'mode':<18} {'seed':>5} {'mean':>7} {'std':>7} {'best':>7} {'time':>7}")
    for per_fold in (False, True):
        for seed in a.seeds:
            cfg = TrainConfig(seed=seed, epochs=a.epochs)
            t0 = time.perf_counter()
            rep = run_cv(ds, cfg, k=9, pca_per_fold=per_fold, jobs=a.jobs)
            out = a.out / rep.mode / f"seed{seed}"
            out.mkdir(parents=True, exist_ok=True)
            (out / "report.json").write_text(rep.to_json())
            print(f"{rep.mode:<18} {seed:>5} {rep.mean_accuracy:7.4f} {rep.std_accuracy:7.4f} "
                  f"{rep.best_accuracy:7.4f} {time.perf_counter() - t0:6.0f}s")

    if not a.no_sweep:
        reps = sweep_dims(ds, TrainConfig(seed=a.seeds[0], epochs=a.epochs), jobs=a.jobs)
        (a.out / "sweep_summary.csv").write_text(sweep_summary_csv(reps))
        print(sweep_summary_csv(reps))
