"""Classical predictors: the d-gram oracle, logistic regression, and small
feed-forward neural networks trained from scratch.

All three consume raw d-gram bits as 0/1 feature vectors and emit a
probability for the next bit being 1.  Fits are deterministic given their
seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bitstream import DGram


# ---------------------------------------------------------------------------
# d-gram oracle


@dataclass
class OracleModel:
    """Conditional count table over a training window plus the window's
    marginal bit frequency as the unseen-context fallback."""

    depth: int
    table: dict[tuple[int, ...], tuple[int, int]]
    zero_fraction: float

    def frequencies(self, gram: DGram) -> tuple[float, float] | None:
        counts = self.table.get(gram.bits)
        if counts is None or counts[0] + counts[1] == 0:
            return None
        total = counts[0] + counts[1]
        return counts[0] / total, counts[1] / total


def oracle_fit(window, depth: int) -> OracleModel:
    """Tabulate every follow-on bit by its preceding d-gram in one pass."""
    bits = [int(b) for b in window]
    if len(bits) < depth + 1:
        raise ValueError("window must span at least depth+1 bits")
    table: dict[tuple[int, ...], list[int]] = {}
    for t in range(depth, len(bits)):
        gram = tuple(bits[t - 1 - s] for s in range(depth))
        table.setdefault(gram, [0, 0])[bits[t]] += 1
    zero_fraction = bits.count(0) / len(bits)
    return OracleModel(
        depth=depth,
        table={g: (c[0], c[1]) for g, c in table.items()},
        zero_fraction=zero_fraction,
    )


def oracle_forecast(
    model: OracleModel,
    gram: DGram,
    mode: str = "sample",
    rng: np.random.Generator | None = None,
) -> int:
    """Infer the follow-on bit from the empirical conditional distribution.

    sample: draw from (p0, p1); argmax: return the likelier bit, ties to 0.
    Unseen grams fall back to the window's marginal distribution.
    """
    freqs = model.frequencies(gram)
    if freqs is None:
        freqs = (model.zero_fraction, 1.0 - model.zero_fraction)
    p0, p1 = freqs
    if mode == "argmax":
        return int(p1 > p0)
    if mode == "sample":
        if rng is None:
            raise ValueError("sample mode needs an rng")
        return int(rng.random() < p1)
    raise ValueError(f"unknown oracle mode {mode!r}")


def oracle_forecast_probability(model: OracleModel, gram: DGram) -> float:
    freqs = model.frequencies(gram)
    if freqs is None:
        freqs = (model.zero_fraction, 1.0 - model.zero_fraction)
    return freqs[1]


# ---------------------------------------------------------------------------
# logistic regression


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    loss_trace: list[float] = field(default_factory=list)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -60.0, 60.0)))


def _mean_log_loss(x, y, w, b):
    p = np.clip(_sigmoid(x @ w + b), 1e-12, 1.0 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def logistic_fit(
    cases: list[tuple[DGram, int]],
    learning_rate: float = 0.25,
    max_iterations: int = 5000,
    gradient_tolerance: float = 1e-6,
) -> LogisticModel:
    """Full-batch gradient ascent on the mean log-likelihood of
    sigmoid(w.x + b), stopping once the gradient norm drops below the
    tolerance."""
    if not cases:
        raise ValueError("dataset must be nonempty")
    x = np.array([gram.bits for gram, _ in cases], dtype=float)
    y = np.array([label for _, label in cases], dtype=float)
    w = np.zeros(x.shape[1])
    b = 0.0
    trace = [_mean_log_loss(x, y, w, b)]
    for _ in range(max_iterations):
        residual = y - _sigmoid(x @ w + b)
        gw = x.T @ residual / len(y)
        gb = float(residual.mean())
        if math.sqrt(float(gw @ gw) + gb * gb) < gradient_tolerance:
            break
        w = w + learning_rate * gw
        b = b + learning_rate * gb
        trace.append(_mean_log_loss(x, y, w, b))
    return LogisticModel(weights=w, bias=b, loss_trace=trace)


def logistic_forecast(model: LogisticModel, gram: DGram) -> float:
    x = np.asarray(gram.bits, dtype=float)
    return float(_sigmoid(x @ model.weights + model.bias))


# ---------------------------------------------------------------------------
# feed-forward networks


def allowed_geometries(depth: int) -> list[tuple[int, ...]]:
    """The six hidden-layer layouts swept for a given gram depth."""
    f = (2 * depth) // 3
    layouts = [(depth,), (depth, depth), (depth, depth, depth)]
    if f >= 1:
        layouts += [(f,), (f, f), (f, f, f)]
    return layouts


def _relu(z):
    return np.maximum(z, 0.0)


def _relu_grad(z, a):
    return (z > 0.0).astype(float)


def _tanh(z):
    return np.tanh(z)


def _tanh_grad(z, a):
    return 1.0 - a * a


def _logit(z):
    return _sigmoid(z)


def _logit_grad(z, a):
    return a * (1.0 - a)


_SELU_SCALE = 1.0507009873554805
_SELU_ALPHA = 1.6732632423543772


def _selu(z):
    return _SELU_SCALE * np.where(z > 0.0, z, _SELU_ALPHA * (np.exp(np.minimum(z, 0.0)) - 1.0))


def _selu_grad(z, a):
    return _SELU_SCALE * np.where(z > 0.0, 1.0, _SELU_ALPHA * np.exp(np.minimum(z, 0.0)))


ACTIVATIONS = {
    "relu": (_relu, _relu_grad),
    "tanh": (_tanh, _tanh_grad),
    "logit": (_logit, _logit_grad),
    "selu": (_selu, _selu_grad),
    "softmax": None,  # layer-wise normalized exponentials; experimental
}


@dataclass
class MlpModel:
    hidden_sizes: tuple[int, ...]
    activation: str
    weights: list[np.ndarray] = field(default_factory=list)
    biases: list[np.ndarray] = field(default_factory=list)


def _softmax_rows(z):
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _forward(model: MlpModel, x: np.ndarray):
    """Returns (pre-activations, activations) per layer; the output layer
    is a single sigmoid unit."""
    zs, acts = [], [x]
    a = x
    n_hidden = len(model.hidden_sizes)
    for layer in range(n_hidden):
        z = a @ model.weights[layer] + model.biases[layer]
        zs.append(z)
        if model.activation == "softmax":
            a = _softmax_rows(z)
        else:
            a = ACTIVATIONS[model.activation][0](z)
        acts.append(a)
    z = a @ model.weights[n_hidden] + model.biases[n_hidden]
    zs.append(z)
    acts.append(_sigmoid(z))
    return zs, acts


def mlp_fit(
    cases: list[tuple[DGram, int]],
    hidden_sizes: tuple[int, ...],
    activation: str,
    rng: np.random.Generator,
    learning_rate: float = 0.5,
    minibatch_size: int = 16,
    epochs: int = 400,
) -> MlpModel:
    """Minibatch gradient descent on the cross-entropy of a sigmoid output
    unit; hidden weights start from a symmetry-breaking random draw."""
    if not cases:
        raise ValueError("dataset must be nonempty")
    if len(hidden_sizes) > 3:
        raise ValueError("at most 3 hidden layers")
    if activation not in ACTIVATIONS:
        raise ValueError(f"unknown activation {activation!r}")
    if any(h < 1 for h in hidden_sizes):
        raise ValueError("hidden layers need at least one unit")
    x = np.array([gram.bits for gram, _ in cases], dtype=float)
    y = np.array([label for _, label in cases], dtype=float)
    sizes = [x.shape[1], *hidden_sizes, 1]
    model = MlpModel(hidden_sizes=tuple(hidden_sizes), activation=activation)
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        scale = math.sqrt(2.0 / (fan_in + fan_out))
        model.weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
        model.biases.append(np.zeros(fan_out))
    n = len(y)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, minibatch_size):
            idx = order[start : start + minibatch_size]
            xb, yb = x[idx], y[idx]
            zs, acts = _forward(model, xb)
            # output delta for sigmoid + cross-entropy
            delta = (acts[-1][:, 0] - yb)[:, None] / len(idx)
            grads_w, grads_b = [], []
            for layer in range(len(model.weights) - 1, -1, -1):
                grads_w.append(acts[layer].T @ delta)
                grads_b.append(delta.sum(axis=0))
                if layer > 0:
                    delta = delta @ model.weights[layer].T
                    z, a = zs[layer - 1], acts[layer]
                    if model.activation == "softmax":
                        a_prev = acts[layer]
                        # rows of the softmax Jacobian: diag(a) - a a^T
                        delta = a_prev * delta - a_prev * np.sum(
                            a_prev * delta, axis=1, keepdims=True
                        )
                    else:
                        delta = delta * ACTIVATIONS[model.activation][1](z, acts[layer])
            for layer, (gw, gb) in enumerate(zip(reversed(grads_w), reversed(grads_b))):
                model.weights[layer] -= learning_rate * gw
                model.biases[layer] -= learning_rate * gb
    return model


def mlp_forecast(model: MlpModel, gram: DGram) -> float:
    x = np.asarray(gram.bits, dtype=float)[None, :]
    _, acts = _forward(model, x)
    return float(acts[-1][0, 0])


# ---------------------------------------------------------------------------
# JSON checkpoints


def oracle_to_dict(model: OracleModel) -> dict:
    return {
        "kind": "oracle",
        "depth": model.depth,
        "table": {"".join(map(str, g)): list(c) for g, c in model.table.items()},
        "zero_fraction": model.zero_fraction,
    }


def oracle_from_dict(payload: dict) -> OracleModel:
    table = {
        tuple(int(ch) for ch in key): (int(c[0]), int(c[1]))
        for key, c in payload["table"].items()
    }
    return OracleModel(
        depth=int(payload["depth"]),
        table=table,
        zero_fraction=float(payload["zero_fraction"]),
    )


def logistic_to_dict(model: LogisticModel) -> dict:
    return {
        "kind": "logistic",
        "weights": [float(w) for w in model.weights],
        "bias": float(model.bias),
    }


def logistic_from_dict(payload: dict) -> LogisticModel:
    return LogisticModel(
        weights=np.asarray(payload["weights"], dtype=float),
        bias=float(payload["bias"]),
    )


def mlp_to_dict(model: MlpModel) -> dict:
    return {
        "kind": "mlp",
        "hidden_sizes": list(model.hidden_sizes),
        "activation": model.activation,
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }


def mlp_from_dict(payload: dict) -> MlpModel:
    return MlpModel(
        hidden_sizes=tuple(payload["hidden_sizes"]),
        activation=payload["activation"],
        weights=[np.asarray(w, dtype=float) for w in payload["weights"]],
        biases=[np.asarray(b, dtype=float) for b in payload["biases"]],
    )
