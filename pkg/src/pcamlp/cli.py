"""Command-line driver: ``pcamlp {cv,sweep,curves,fit-preprocess}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .crossval import run_cv, sweep_dims, sweep_summary_csv
from .dataio import DataError, load_bccd
from .nn import TrainConfig
from .preprocess import apply_scaler, fit_pca, fit_scaler, preprocess_to_json

log = logging.getLogger("pcamlp")

PCA_DIMS = range(2, 10)


def _default_seed() -> int:
    return int(os.environ.get("PCAMLP_SEED", "42"))


@dataclass
class RunConfig:
    command: str
    data_path: Path
    output_dir: Path
    pca_dim: int = 9
    stratified: bool = False
    pca_per_fold: bool = False
    jobs: int = 1
    train: TrainConfig = field(default_factory=TrainConfig)


def build_parser() -> argparse.ArgumentParser:
    d = TrainConfig()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", required=True, type=Path, help="BCCD csv file")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--pca-dim", type=int, default=9, help="PCA dimension k, 2..9")
    common.add_argument("--hidden-layers", type=int, default=d.hidden_layers,
                        help="number of 32-unit tanh hidden layers")
    common.add_argument("--seed", type=int, default=_default_seed(),
                        help="master seed (env PCAMLP_SEED overrides the default)")
    common.add_argument("--stratified", action="store_true", help="label-proportional folds")
    common.add_argument("--pca-per-fold", action="store_true",
                        help="fit scaler and PCA on each training split (no leakage)")
    common.add_argument("--epochs", type=int, default=d.epochs, help="training epochs per fold")
    common.add_argument("--batch-size", type=int, default=d.batch_size, help="mini-batch size")
    common.add_argument("--lr", type=float, default=d.learning_rate, help="Adam learning rate")
    common.add_argument("--beta1", type=float, default=d.beta1, help="Adam beta1")
    common.add_argument("--beta2", type=float, default=d.beta2, help="Adam beta2")
    common.add_argument("--epsilon", type=float, default=d.epsilon, help="Adam epsilon")
    common.add_argument("--dropout", type=float, default=d.dropout_rate, help="dropout rate")
    common.add_argument("--checkpoint-metric", choices=["val_accuracy", "val_loss"],
                        default=d.checkpoint_metric, help="metric for best-weight snapshot")
    common.add_argument("--jobs", type=int, default=1, help="parallel fold workers")
    common.add_argument("-v", "--verbose", action="store_true")

    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="pcamlp", description="PCA + MLP cross-validation on BCCD",
                                formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("cv", parents=[common], formatter_class=fmt,
                   help="15-fold CV for one PCA dimension")
    sub.add_parser("sweep", parents=[common], formatter_class=fmt,
                   help="CV for every PCA dimension 2..9")
    sub.add_parser("curves", parents=[common], formatter_class=fmt,
                   help="train fold 0 only and write its curve")
    sub.add_parser("fit-preprocess", parents=[common], formatter_class=fmt,
                   help="fit scaler + PCA on the full data and save them as JSON")
    return p


def parse_run_config(argv=None) -> tuple[RunConfig, argparse.Namespace]:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.pca_dim not in PCA_DIMS:
        parser.error(f"--pca-dim must be in 2..9, got {a.pca_dim}")
    if a.jobs < 1:
        parser.error("--jobs must be >= 1")
    if not a.data.is_file():
        parser.error(f"data file not found: {a.data}")
    try:
        train = TrainConfig(learning_rate=a.lr, beta1=a.beta1, beta2=a.beta2, epsilon=a.epsilon,
                            dropout_rate=a.dropout, batch_size=a.batch_size, epochs=a.epochs,
                            seed=a.seed, hidden_layers=a.hidden_layers,
                            checkpoint_metric=a.checkpoint_metric)
    except ValueError as e:
        parser.error(str(e))
    cfg = RunConfig(a.command, a.data, a.out, a.pca_dim, a.stratified, a.pca_per_fold, a.jobs, train)
    return cfg, a


def _write_report(report, out: Path, curves: bool = True) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json())
    (out / "summary.txt").write_text(report.summary())
    if curves:
        for f in report.folds:
            (out / f"fold_{f.fold_index}_curve.csv").write_text(f.curve_csv())


def cmd_cv(cfg: RunConfig) -> int:
    ds = load_bccd(cfg.data_path)
    report = run_cv(ds, cfg.train, cfg.pca_dim, stratified=cfg.stratified,
                    pca_per_fold=cfg.pca_per_fold, jobs=cfg.jobs)
    _write_report(report, cfg.output_dir)
    print(f"[{report.mode}] k={report.k} best={report.best_accuracy:.4f} "
          f"mean={report.mean_accuracy:.4f} std={report.std_accuracy:.4f}")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    ds = load_bccd(cfg.data_path)
    reports = sweep_dims(ds, cfg.train, PCA_DIMS, stratified=cfg.stratified,
                         pca_per_fold=cfg.pca_per_fold, jobs=cfg.jobs)
    for r in reports:
        _write_report(r, cfg.output_dir / f"k{r.k}")
        print(f"[{r.mode}] k={r.k} best={r.best_accuracy:.4f} "
              f"mean={r.mean_accuracy:.4f} std={r.std_accuracy:.4f}")
    (cfg.output_dir / "sweep_summary.csv").write_text(sweep_summary_csv(reports))
    return 0


def cmd_curves(cfg: RunConfig) -> int:
    ds = load_bccd(cfg.data_path)
    report = run_cv(ds, cfg.train, cfg.pca_dim, stratified=cfg.stratified,
                    pca_per_fold=cfg.pca_per_fold, folds=[0])
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    fold = report.folds[0]
    (cfg.output_dir / "fold_0_curve.csv").write_text(fold.curve_csv())
    print(f"fold 0: {len(fold.curve)} epochs, best val acc {fold.best_val_accuracy:.4f} "
          f"at epoch {fold.best_epoch}")
    return 0


def cmd_fit_preprocess(cfg: RunConfig) -> int:
    ds = load_bccd(cfg.data_path)
    scaler = fit_scaler(ds.features)
    pca = fit_pca(apply_scaler(scaler, ds.features), cfg.pca_dim)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    (cfg.output_dir / "preprocess.json").write_text(preprocess_to_json(scaler, pca) + "\n")
    print("explained variance:", " ".join(f"{v:.4f}" for v in pca.explained_variance))
    return 0


COMMANDS = {"cv": cmd_cv, "sweep": cmd_sweep, "curves": cmd_curves,
            "fit-preprocess": cmd_fit_preprocess}


def main(argv=None) -> int:
    cfg, args = parse_run_config(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[cfg.command](cfg)
    except DataError as e:
        print(f"pcamlp: {cfg.data_path}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
