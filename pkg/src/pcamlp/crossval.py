"""Shuffled k-fold cross-validation with best-epoch checkpointing."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .dataio import Dataset, Feature, FeatureSchema
from .metrics import ConfusionMatrix, accuracy, confusion, mean_std
from .nn import (AdamState, MlpModel, TrainConfig, adam_step, backward, bce_loss,
                 forward, init_model, predict, predict_proba)
from .preprocess import apply_scaler, fit_pca, fit_scaler, project

log = logging.getLogger(__name__)

N_FOLDS = 15
CURVE_HEADER = ["epoch", "train_loss", "train_acc", "val_acc"]
MODE_FULL = "full-dataset-pca"
MODE_PER_FOLD = "per-fold-pca"


def mix_seed(seed: int, fold: int) -> int:
    """Per-fold 64-bit seed: numpy's SeedSequence hash of the pair (seed, fold)."""
    return int(np.random.SeedSequence([int(seed), int(fold)]).generate_state(1, np.uint64)[0])


@dataclass(frozen=True, eq=False)
class FoldPlan:
    n_folds: int
    assignments: np.ndarray
    seed: int
    stratified: bool = False

    def val_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def sizes(self) -> list[int]:
        return np.bincount(self.assignments, minlength=self.n_folds).tolist()

    def digest(self) -> str:
        return hashlib.sha256(self.assignments.astype("<i8").tobytes()).hexdigest()


def shuffle_and_fold(ds: Dataset, n_folds: int = N_FOLDS, seed: int = 42,
                     stratified: bool = False) -> FoldPlan:
    """Shuffle instance indices, then deal them round-robin into folds.

    With ``stratified`` each class is shuffled separately and the classes are
    dealt one after the other, so every fold gets a near-proportional share.
    """
    n = len(ds)
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    if n_folds > n:
        raise ValueError(f"{n_folds} folds but only {n} instances")
    rng = np.random.default_rng(seed)
    if stratified:
        order = np.concatenate([rng.permutation(np.flatnonzero(ds.labels == c)) for c in (0, 1)])
    else:
        order = rng.permutation(n)
    assignments = np.empty(n, dtype=np.int64)
    assignments[order] = np.arange(n) % n_folds
    return FoldPlan(n_folds, assignments, int(seed), stratified)


@dataclass(eq=False)
class FoldResult:
    fold_index: int
    best_val_accuracy: float
    best_epoch: int
    final_train_loss: float
    curve: np.ndarray          # epochs x 3: train_loss, train_acc, val_acc
    val_loss: np.ndarray
    model: MlpModel | None = None
    val_indices: list[int] = field(default_factory=list)
    best_confusion: ConfusionMatrix | None = None

    def to_dict(self) -> dict:
        d = {"fold_index": self.fold_index, "best_val_accuracy": self.best_val_accuracy,
             "best_epoch": self.best_epoch, "final_train_loss": self.final_train_loss,
             "final_val_accuracy": float(self.curve[-1, 2]), "val_indices": self.val_indices}
        if self.best_confusion is not None:
            d["best_confusion"] = asdict(self.best_confusion)
        return d

    def curve_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CURVE_HEADER)
        for e, (loss, tacc, vacc) in enumerate(self.curve):
            w.writerow([e, repr(float(loss)), repr(float(tacc)), repr(float(vacc))])
        return buf.getvalue()


@dataclass(eq=False)
class CvReport:
    folds: list[FoldResult]
    mean_accuracy: float
    std_accuracy: float
    best_accuracy: float
    k: int
    mode: str
    plan: FoldPlan
    config: TrainConfig

    def to_dict(self) -> dict:
        return {
            "mode": self.mode, "k": self.k, "n_folds": self.plan.n_folds,
            "seed": self.config.seed, "stratified": self.plan.stratified,
            "fold_plan_sha256": self.plan.digest(), "fold_sizes": self.plan.sizes(),
            "config": asdict(self.config),
            "mean_accuracy": self.mean_accuracy, "std_accuracy": self.std_accuracy,
            "std_convention": "population (1/N)", "best_accuracy": self.best_accuracy,
            "folds": [f.to_dict() for f in self.folds],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary(self) -> str:
        return (f"mode={self.mode}\nk={self.k}\nfolds={self.plan.n_folds}\nseed={self.config.seed}\n"
                f"best={self.best_accuracy:.4f}\nmean={self.mean_accuracy:.4f}\n"
                f"std={self.std_accuracy:.4f}\n")


def _better(metric: str, acc: float, loss: float, best_acc: float, best_loss: float) -> bool:
    if metric == "val_loss":
        return loss < best_loss
    return acc > best_acc


def train_fold(train: Dataset, val: Dataset, cfg: TrainConfig, seed: int | None = None,
               fold_index: int = 0) -> FoldResult:
    """Mini-batch Adam for ``cfg.epochs`` epochs, keeping the best-validation snapshot.

    Training loss/accuracy per epoch are averaged over the mini-batches as
    they are seen (dropout active); validation runs without dropout. The last
    batch of an epoch may be smaller than ``cfg.batch_size``.
    """
    if len(train) == 0 or len(val) == 0:
        raise ValueError("train and validation splits must be non-empty")
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    Xtr, ytr = train.features, train.labels
    Xva, yva = val.features, val.labels
    model = init_model(cfg.dims(Xtr.shape[1]), rng)
    params = model.params()
    state = AdamState.zeros_like(params)
    dropout = (cfg.dropout_rate, rng) if cfg.dropout_rate > 0 else None
    n, bs = len(train), cfg.batch_size

    curve = np.empty((cfg.epochs, 3))
    val_loss = np.empty(cfg.epochs)
    best_acc, best_loss, best_epoch, best_params = -1.0, np.inf, -1, params

    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        loss_sum, correct = 0.0, 0
        for start in range(0, n, bs):
            idx = order[start:start + bs]
            cache = forward(model, Xtr[idx], dropout)
            probs = cache.probs
            loss_sum += bce_loss(probs, ytr[idx]) * idx.size
            correct += int(np.count_nonzero((probs >= 0.5) == (ytr[idx] == 1)))
            grads = backward(model, cache, ytr[idx])
            params, state = adam_step(params, grads, state, cfg)
            model = model.with_params(params)
        train_loss = loss_sum / n
        if not np.isfinite(train_loss):
            raise FloatingPointError(f"fold {fold_index}: non-finite training loss at epoch {epoch}")

        p_val = predict_proba(model, Xva)
        v_acc = accuracy((p_val >= 0.5).astype(np.int64), yva)
        v_loss = bce_loss(p_val, yva)
        curve[epoch] = (train_loss, correct / n, v_acc)
        val_loss[epoch] = v_loss
        if _better(cfg.checkpoint_metric, v_acc, v_loss, best_acc, best_loss):
            best_acc, best_loss, best_epoch, best_params = v_acc, v_loss, epoch, params

    best_model = model.with_params(best_params)
    if cfg.checkpoint_metric == "val_loss":
        best_acc = float(curve[best_epoch, 2])
    return FoldResult(
        fold_index=fold_index, best_val_accuracy=float(best_acc), best_epoch=int(best_epoch),
        final_train_loss=float(curve[-1, 0]), curve=curve, val_loss=val_loss, model=best_model,
        best_confusion=confusion(predict(best_model, Xva), yva),
    )


def _fold_data(ds: Dataset, plan: FoldPlan, fold: int, k: int, per_fold: bool,
               reduced: Dataset | None) -> tuple[Dataset, Dataset]:
    tr, va = plan.train_indices(fold), plan.val_indices(fold)
    if not per_fold:
        return reduced.subset(tr), reduced.subset(va)
    scaler = fit_scaler(ds.features[tr])
    pca = fit_pca(apply_scaler(scaler, ds.features[tr]), k)
    reduce = lambda X: project(pca, apply_scaler(scaler, X))  # noqa: E731
    train = Dataset(reduce(ds.features[tr]), ds.labels[tr], reduced_schema(k))
    val = Dataset(reduce(ds.features[va]), ds.labels[va], reduced_schema(k))
    return train, val


def reduced_schema(k: int) -> FeatureSchema:
    return FeatureSchema(tuple(Feature(f"pc{i + 1}", "") for i in range(k)))


def reduce_full(ds: Dataset, k: int) -> Dataset:
    """Scale and project the whole dataset at once (the paper-faithful, leaky order)."""
    scaler = fit_scaler(ds.features)
    pca = fit_pca(apply_scaler(scaler, ds.features), k)
    return Dataset(project(pca, apply_scaler(scaler, ds.features)), ds.labels, reduced_schema(k))


def _run_fold(args) -> FoldResult:
    ds, plan, fold, k, cfg, per_fold, reduced = args
    train, val = _fold_data(ds, plan, fold, k, per_fold, reduced)
    res = train_fold(train, val, cfg, seed=mix_seed(cfg.seed, fold), fold_index=fold)
    res.val_indices = plan.val_indices(fold).tolist()
    log.info("fold %d: best val acc %.4f at epoch %d", fold, res.best_val_accuracy, res.best_epoch)
    return res


def aggregate(folds: list[FoldResult]) -> tuple[float, float, float]:
    accs = [f.best_val_accuracy for f in folds]
    mean, std = mean_std(accs)
    return mean, std, max(accs)


def run_cv(ds: Dataset, cfg: TrainConfig, k: int, n_folds: int = N_FOLDS,
           stratified: bool = False, pca_per_fold: bool = False, jobs: int = 1,
           plan: FoldPlan | None = None, folds: list[int] | None = None) -> CvReport:
    """scale -> PCA(k) -> shuffle/fold -> train each fold -> mean/std/best.

    ``folds`` restricts training to a subset of fold indices (used for the
    single-fold curve run); the aggregates then cover only those folds.
    """
    if not 1 <= k <= ds.features.shape[1]:
        raise ValueError(f"PCA dimension must be in [1, {ds.features.shape[1]}], got {k}")
    if plan is None:
        plan = shuffle_and_fold(ds, n_folds, cfg.seed, stratified)
    reduced = None if pca_per_fold else reduce_full(ds, k)
    fold_ids = list(range(plan.n_folds)) if folds is None else list(folds)
    tasks = [(ds, plan, i, k, cfg, pca_per_fold, reduced) for i in fold_ids]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as ex:
            results = list(ex.map(_run_fold, tasks))
    else:
        results = [_run_fold(t) for t in tasks]
    results.sort(key=lambda r: r.fold_index)
    mean, std, best = aggregate(results)
    return CvReport(results, mean, std, best, k, MODE_PER_FOLD if pca_per_fold else MODE_FULL,
                    plan, cfg)


def sweep_dims(ds: Dataset, cfg: TrainConfig, k_range=range(2, 10), **kw) -> list[CvReport]:
    """One report per PCA dimension, all sharing a single fold plan."""
    plan = kw.pop("plan", None) or shuffle_and_fold(ds, kw.pop("n_folds", N_FOLDS), cfg.seed,
                                                    kw.pop("stratified", False))
    return [run_cv(ds, cfg, k, plan=plan, **kw) for k in k_range]


def sweep_summary_csv(reports: list[CvReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "mean", "std", "best"])
    for r in reports:
        w.writerow([r.k, repr(r.mean_accuracy), repr(r.std_accuracy), repr(r.best_accuracy)])
    return buf.getvalue()
