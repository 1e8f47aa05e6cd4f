"""Dense tanh/sigmoid network, binary cross-entropy, backprop and Adam.

Parameters are handled as a flat list ``[W0, b0, W1, b1, ...]`` with
``W`` stored out x in, so a layer computes ``a @ W.T + b``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

ACTIVATIONS = ("tanh", "sigmoid")
PROB_CLAMP = 1e-12


def tanh_act(x):
    return np.tanh(x)


def sigmoid_act(x):
    x = np.asarray(x, dtype=float)
    e = np.exp(-np.abs(x))
    return np.where(x >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


def _activate(name: str, z: np.ndarray) -> np.ndarray:
    return np.tanh(z) if name == "tanh" else sigmoid_act(z)


def _activation_grad(name: str, h: np.ndarray) -> np.ndarray:
    # derivative expressed through the activation output h
    return 1.0 - h * h if name == "tanh" else h * (1.0 - h)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-5
    beta1: float = 0.90
    beta2: float = 0.99
    epsilon: float = 1e-8
    dropout_rate: float = 0.45
    batch_size: int = 15
    epochs: int = 3000
    seed: int = 42
    hidden_layers: int = 2
    hidden_units: int = 32
    checkpoint_metric: str = "val_accuracy"

    def __post_init__(self):
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError(f"dropout_rate must be in [0, 1), got {self.dropout_rate}")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.hidden_layers < 1 or self.hidden_units < 1:
            raise ValueError("need at least one hidden layer with at least one unit")
        if self.checkpoint_metric not in ("val_accuracy", "val_loss"):
            raise ValueError(f"unknown checkpoint metric {self.checkpoint_metric!r}")

    def dims(self, n_inputs: int) -> list[int]:
        return [n_inputs] + [self.hidden_units] * self.hidden_layers + [1]

    def with_(self, **kw) -> "TrainConfig":
        return replace(self, **kw)


@dataclass
class DenseLayer:
    weights: np.ndarray
    bias: np.ndarray
    activation: str

    def __post_init__(self):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError(f"bad layer shapes {self.weights.shape} / {self.bias.shape}")


@dataclass
class MlpModel:
    layers: list[DenseLayer]

    def __post_init__(self):
        for prev, cur in zip(self.layers, self.layers[1:]):
            if cur.weights.shape[1] != prev.weights.shape[0]:
                raise ValueError("layer dimensions do not chain")

    @property
    def dims(self) -> list[int]:
        return [self.layers[0].weights.shape[1]] + [l.weights.shape[0] for l in self.layers]

    def params(self) -> list[np.ndarray]:
        out = []
        for l in self.layers:
            out += [l.weights, l.bias]
        return out

    def with_params(self, params: list[np.ndarray]) -> "MlpModel":
        return MlpModel([DenseLayer(params[2 * i], params[2 * i + 1], l.activation)
                         for i, l in enumerate(self.layers)])

    def copy(self) -> "MlpModel":
        return self.with_params([p.copy() for p in self.params()])

    def n_params(self) -> int:
        return sum(p.size for p in self.params())

    def to_dict(self) -> dict:
        return {"layers": [{"weights": l.weights.tolist(), "bias": l.bias.tolist(),
                            "activation": l.activation} for l in self.layers]}

    @classmethod
    def from_dict(cls, d: dict) -> "MlpModel":
        return cls([DenseLayer(np.asarray(l["weights"], dtype=float),
                               np.asarray(l["bias"], dtype=float), l["activation"])
                    for l in d["layers"]])


def init_model(dims, seed) -> MlpModel:
    """Glorot-uniform weights, zero biases; tanh everywhere except a sigmoid output."""
    dims = [int(d) for d in dims]
    if len(dims) < 2 or min(dims) < 1:
        raise ValueError(f"invalid layer sizes {dims}")
    if dims[-1] != 1:
        raise ValueError("binary classifier needs a single output unit")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    layers = []
    for i, (fan_in, fan_out) in enumerate(zip(dims, dims[1:])):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        act = "sigmoid" if i == len(dims) - 2 else "tanh"
        layers.append(DenseLayer(rng.uniform(-bound, bound, size=(fan_out, fan_in)),
                                 np.zeros(fan_out), act))
    return MlpModel(layers)


@dataclass
class ForwardCache:
    inputs: list[np.ndarray]        # input to each layer (after dropout of the previous one)
    outputs: list[np.ndarray]       # activation output of each layer, before dropout
    masks: list[np.ndarray | None]  # scaled keep-masks, one per layer (None = not dropped)

    @property
    def probs(self) -> np.ndarray:
        return self.outputs[-1][:, 0]


def forward(model: MlpModel, batch, dropout: tuple[float, np.random.Generator] | None = None) -> ForwardCache:
    a = np.asarray(batch, dtype=float)
    if a.ndim != 2 or a.shape[1] != model.dims[0]:
        raise ValueError(f"model expects width {model.dims[0]}, got shape {a.shape}")
    rate, rng = dropout if dropout is not None else (0.0, None)
    inputs, outputs, masks = [], [], []
    last = len(model.layers) - 1
    for i, layer in enumerate(model.layers):
        inputs.append(a)
        h = _activate(layer.activation, a @ layer.weights.T + layer.bias)
        outputs.append(h)
        if i < last and rate > 0.0:
            mask = (rng.random(h.shape) >= rate) / (1.0 - rate)
            masks.append(mask)
            a = h * mask
        else:
            masks.append(None)
            a = h
    return ForwardCache(inputs, outputs, masks)


def bce_loss(probs, labels) -> float:
    p = np.asarray(probs, dtype=float).ravel()
    y = np.asarray(labels, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("empty batch")
    if p.shape != y.shape:
        raise ValueError(f"{p.size} probabilities but {y.size} labels")
    p = np.clip(p, PROB_CLAMP, 1.0 - PROB_CLAMP)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log1p(-p)))


def backward(model: MlpModel, cache: ForwardCache, labels) -> list[np.ndarray]:
    """Gradients of the mean BCE loss, aligned with ``model.params()``.

    The sigmoid/BCE pair is differentiated jointly: d loss / d z_out = (p - y) / m.
    """
    if model.layers[-1].activation != "sigmoid":
        raise ValueError("output layer must be sigmoid")
    y = np.asarray(labels, dtype=float).reshape(-1, 1)
    p = cache.outputs[-1]
    if p.shape != y.shape:
        raise ValueError(f"{p.shape[0]} outputs but {y.shape[0]} labels")
    delta = (p - y) / y.shape[0]
    grads: list[np.ndarray] = [None] * (2 * len(model.layers))
    for i in range(len(model.layers) - 1, -1, -1):
        grads[2 * i] = delta.T @ cache.inputs[i]
        grads[2 * i + 1] = delta.sum(axis=0)
        if i == 0:
            break
        da = delta @ model.layers[i].weights
        prev = i - 1
        if cache.masks[prev] is not None:
            da = da * cache.masks[prev]
        delta = da * _activation_grad(model.layers[prev].activation, cache.outputs[prev])
    return grads


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0

    @classmethod
    def zeros_like(cls, params) -> "AdamState":
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params], 0)


def adam_step(params, grads, state: AdamState, cfg: TrainConfig):
    """One bias-corrected Adam update; returns ``(new_params, new_state)``."""
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError("params, grads and state have different lengths")
    t = state.t + 1
    b1, b2 = cfg.beta1, cfg.beta2
    bc1, bc2 = 1.0 - b1 ** t, 1.0 - b2 ** t
    new_p, new_m, new_v = [], [], []
    for i, (p, g, m, v) in enumerate(zip(params, grads, state.m, state.v)):
        if g.shape != p.shape:
            raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        if not np.all(np.isfinite(g)):
            kind = "weights" if i % 2 == 0 else "bias"
            raise FloatingPointError(f"non-finite gradient in layer {i // 2} {kind}")
        m = b1 * m + (1.0 - b1) * g
        v = b2 * v + (1.0 - b2) * (g * g)
        new_p.append(p - cfg.learning_rate * (m / bc1) / (np.sqrt(v / bc2) + cfg.epsilon))
        new_m.append(m)
        new_v.append(v)
    return new_p, AdamState(new_m, new_v, t)


def predict_proba(model: MlpModel, X) -> np.ndarray:
    return forward(model, X).probs


def predict(model: MlpModel, X) -> np.ndarray:
    """Hard labels; a probability of exactly 0.5 maps to class 1."""
    return (predict_proba(model, X) >= 0.5).astype(np.int64)
