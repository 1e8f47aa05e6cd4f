"""Standard scaling and PCA.

PCA takes the SVD of the centred data matrix with one-sided (Hestenes)
Jacobi rotations; the eigenvalues of the population covariance
(1/m) * Xc^T Xc are the squared singular values divided by m.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np

JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class ScalerParams:
    mu: np.ndarray
    sigma: np.ndarray
    constant: np.ndarray  # columns whose sigma was forced to 1

    def to_dict(self) -> dict:
        return {"mu": self.mu.tolist(), "sigma": self.sigma.tolist(),
                "constant": [bool(c) for c in self.constant]}

    @classmethod
    def from_dict(cls, d: dict) -> "ScalerParams":
        mu = np.asarray(d["mu"], dtype=float)
        return cls(mu, np.asarray(d["sigma"], dtype=float),
                   np.asarray(d.get("constant", [False] * len(mu)), dtype=bool))


@dataclass(frozen=True, eq=False)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # k x n, rows orthonormal
    explained_variance: np.ndarray

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "components": self.components.tolist(),
                "explained_variance": self.explained_variance.tolist(), "k": self.k}

    @classmethod
    def from_dict(cls, d: dict) -> "PcaModel":
        comps = np.asarray(d["components"], dtype=float).reshape(int(d["k"]), -1)
        return cls(np.asarray(d["mean"], dtype=float), comps,
                   np.asarray(d["explained_variance"], dtype=float))


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    return X


def fit_scaler(X) -> ScalerParams:
    X = _as_matrix(X)
    if X.shape[0] == 0 or X.shape[1] == 0:
        raise ValueError("cannot fit a scaler on an empty matrix")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite values in scaler input")
    mu = X.mean(axis=0)
    sigma = X.std(axis=0)  # population (ddof=0)
    constant = sigma <= 1e-12 * np.maximum(1.0, np.abs(mu))
    if constant.any():
        warnings.warn(f"constant columns {np.flatnonzero(constant).tolist()}: sigma set to 1",
                      RuntimeWarning, stacklevel=2)
        sigma = np.where(constant, 1.0, sigma)
    return ScalerParams(mu, sigma, constant)


def apply_scaler(p: ScalerParams, X) -> np.ndarray:
    X = _as_matrix(X)
    if X.shape[1] != p.mu.shape[0]:
        raise ValueError(f"scaler fitted on {p.mu.shape[0]} columns, got {X.shape[1]}")
    return (X - p.mu) / p.sigma


def jacobi_svd(A) -> tuple[np.ndarray, np.ndarray]:
    """Right singular vectors and singular values of ``A`` (unsorted).

    Returns ``(s, V)`` with ``A V = U diag(s)``. Column pairs are rotated
    until the off-diagonal Frobenius norm of ``A^T A`` drops below
    ``JACOBI_TOL`` (relative to its trace once that exceeds 1).
    """
    U = np.array(A, dtype=float, copy=True)
    n = U.shape[1]
    V = np.eye(n)
    for _ in range(MAX_SWEEPS):
        G = U.T @ U
        off = np.linalg.norm(G - np.diag(np.diag(G)))
        if off < JACOBI_TOL * max(1.0, float(np.trace(G))):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = U[:, p] @ U[:, p]
                beta = U[:, q] @ U[:, q]
                gamma = U[:, p] @ U[:, q]
                if abs(gamma) <= 1e-300 + 1e-17 * np.sqrt(alpha * beta):
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = (1.0 if zeta >= 0 else -1.0) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                up, uq = U[:, p].copy(), U[:, q]
                U[:, p] = c * up - s * uq
                U[:, q] = s * up + c * uq
                vp, vq = V[:, p].copy(), V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        warnings.warn("Jacobi SVD did not converge", RuntimeWarning, stacklevel=2)
    return np.sqrt(np.sum(U * U, axis=0)), V


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def fit_pca(X, k: int) -> PcaModel:
    X = _as_matrix(X)
    m, n = X.shape
    if m < 2:
        raise ValueError("PCA needs at least 2 rows")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    mean = X.mean(axis=0)
    s, V = jacobi_svd(X - mean)
    eig = s * s / m
    order = np.argsort(-eig, kind="stable")[:k]
    comps = np.array([_canonical_sign(V[:, j]) for j in order])
    return PcaModel(mean, comps, eig[order])


def project(model: PcaModel, X) -> np.ndarray:
    X = _as_matrix(X)
    if X.shape[1] != model.mean.shape[0]:
        raise ValueError(f"PCA fitted on {model.mean.shape[0]} columns, got {X.shape[1]}")
    return (X - model.mean) @ model.components.T


def reconstruct(model: PcaModel, Z) -> np.ndarray:
    """Map reduced coordinates back to feature space (centred, mean not added)."""
    return np.asarray(Z, dtype=float) @ model.components


def preprocess_to_json(scaler: ScalerParams, pca: PcaModel) -> str:
    doc = {**scaler.to_dict(), **pca.to_dict()}
    return json.dumps(doc, indent=2)


def preprocess_from_json(text: str) -> tuple[ScalerParams, PcaModel]:
    d = json.loads(text)
    return ScalerParams.from_dict(d), PcaModel.from_dict(d)
