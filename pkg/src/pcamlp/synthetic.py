"""Schema-valid stand-in data with BCCD-like shape (NOT the real dataset).

Used for smoke tests and demos when the real csv is not available. Values
are drawn from loose lognormal/normal guesses with a class shift on
glucose, insulin and resistin; nothing here is measured data.
"""
from __future__ import annotations

import numpy as np

from .dataio import BCCD_SCHEMA, Dataset


def synthetic_bccd(seed: int = 0, n_healthy: int = 52, n_patient: int = 64) -> Dataset:
    rng = np.random.default_rng(seed)

    def block(n, shift):
        age = np.round(rng.uniform(24, 89, n))
        bmi = rng.normal(27.5, 5.0, n).clip(18, 39)
        glucose = np.round(rng.normal(88 + 18 * shift, 12 + 10 * shift, n)).clip(60, 201)
        insulin = rng.lognormal(np.log(6.5 + 5 * shift), 0.6, n)
        homa = glucose * insulin / 405.0
        leptin = rng.lognormal(np.log(20), 0.7, n)
        adipo = rng.lognormal(np.log(9), 0.5, n)
        resistin = rng.lognormal(np.log(11 + 6 * shift), 0.5, n)
        mcp1 = rng.lognormal(np.log(480 + 60 * shift), 0.4, n)
        return np.column_stack([age, bmi, glucose, insulin, homa, leptin, adipo, resistin, mcp1])

    X = np.vstack([block(n_healthy, 0.0), block(n_patient, 1.0)])
    y = np.r_[np.zeros(n_healthy, dtype=np.int64), np.ones(n_patient, dtype=np.int64)]
    return Dataset(X, y, BCCD_SCHEMA)
