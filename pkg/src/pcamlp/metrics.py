"""Accuracy, confusion counts and fold aggregation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total


def _pair(preds, truth) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(preds).ravel()
    t = np.asarray(truth).ravel()
    if p.size == 0:
        raise ValueError("no predictions")
    if p.shape != t.shape:
        raise ValueError(f"{p.size} predictions but {t.size} labels")
    return p, t


def accuracy(preds, truth) -> float:
    p, t = _pair(preds, truth)
    return int(np.count_nonzero(p == t)) / p.size


def confusion(preds, truth) -> ConfusionMatrix:
    p, t = _pair(preds, truth)
    p, t = p == 1, t == 1
    return ConfusionMatrix(tp=int(np.sum(p & t)), tn=int(np.sum(~p & ~t)),
                           fp=int(np.sum(p & ~t)), fn=int(np.sum(~p & t)))


def mean_std(xs) -> tuple[float, float]:
    """Arithmetic mean and population (1/N) standard deviation."""
    xs = [float(x) for x in xs]
    if not xs:
        raise ValueError("mean_std of an empty sequence")
    mean = math.fsum(xs) / len(xs)
    var = math.fsum((x - mean) ** 2 for x in xs) / len(xs)
    return mean, math.sqrt(var)
