"""Uniform train/forecast contract over the four predictor families.

A PredictorSpec names a family plus its hyperparameters; `build` turns it
into a stateful predictor with ``fit(bits, rng)`` and
``forecast_bit(history, rng)``.  Forecasts condition on the last `depth`
bits of the supplied history (most recent first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import baselines, qtrain
from .bitstream import DGram
from .circuits import CircuitGeometry, build_polar_circuit, build_two_qubit_circuit
from .encoder import EncodingSpec

KINDS = ("oracle", "logistic", "mlp", "quantum")


@dataclass
class PredictorSpec:
    kind: str
    options: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown predictor kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "options": dict(self.options)}

    @classmethod
    def from_dict(cls, payload: dict) -> "PredictorSpec":
        return cls(kind=payload["kind"], options=dict(payload.get("options", {})))


def gram_from_history(history, depth: int) -> DGram:
    bits = [int(b) for b in history]
    if len(bits) < depth:
        raise ValueError(f"need at least {depth} history bits")
    return DGram(tuple(bits[-1 - s] for s in range(depth)))


class OraclePredictor:
    def __init__(self, depth: int, mode: str = "argmax"):
        self.depth = depth
        self.mode = mode
        self.model: baselines.OracleModel | None = None

    def fit(self, bits, rng=None):
        self.model = baselines.oracle_fit(bits, self.depth)

    def forecast_probability(self, history) -> float:
        return baselines.oracle_forecast_probability(
            self.model, gram_from_history(history, self.depth)
        )

    def forecast_bit(self, history, rng=None) -> int:
        return baselines.oracle_forecast(
            self.model, gram_from_history(history, self.depth), self.mode, rng
        )


class LogisticPredictor:
    def __init__(self, depth: int, **fit_options):
        self.depth = depth
        self.fit_options = fit_options
        self.model: baselines.LogisticModel | None = None

    def fit(self, bits, rng=None):
        cases = qtrain.dataset_from_bits(
            bits, self.depth, EncodingSpec("qubit", min(self.depth, 8))
        ).cases
        self.model = baselines.logistic_fit(cases, **self.fit_options)

    def forecast_probability(self, history) -> float:
        return baselines.logistic_forecast(
            self.model, gram_from_history(history, self.depth)
        )

    def forecast_bit(self, history, rng=None) -> int:
        return int(self.forecast_probability(history) > 0.5)


class MlpPredictor:
    """hidden="select" sweeps the allowed geometry menu and keeps the net
    with the best training score, mirroring selection-by-training-score
    in multi-model setups."""

    def __init__(
        self,
        depth: int,
        hidden: tuple[int, ...] | str | None = None,
        activation: str = "tanh",
        **fit_options,
    ):
        self.depth = depth
        if hidden is None:
            hidden = (depth, depth)
        self.hidden = hidden if hidden == "select" else tuple(hidden)
        self.activation = activation
        self.fit_options = fit_options
        self.model: baselines.MlpModel | None = None

    def fit(self, bits, rng=None):
        if rng is None:
            rng = np.random.default_rng(0)
        cases = qtrain.dataset_from_bits(
            bits, self.depth, EncodingSpec("qubit", min(self.depth, 8))
        ).cases
        if self.hidden == "select":
            candidates = baselines.allowed_geometries(self.depth)
            best, best_score = None, -1.0
            for geometry in candidates:
                model = baselines.mlp_fit(
                    cases, geometry, self.activation, rng, **self.fit_options
                )
                score = self._training_score(model, cases)
                if score > best_score:
                    best, best_score = model, score
            self.model = best
        else:
            self.model = baselines.mlp_fit(
                cases, self.hidden, self.activation, rng, **self.fit_options
            )

    @staticmethod
    def _training_score(model, cases) -> float:
        hits = [
            int((baselines.mlp_forecast(model, gram) > 0.5) == label)
            for gram, label in cases
        ]
        return sum(hits) / len(hits)

    def forecast_probability(self, history) -> float:
        return baselines.mlp_forecast(self.model, gram_from_history(history, self.depth))

    def forecast_bit(self, history, rng=None) -> int:
        return int(self.forecast_probability(history) > 0.5)


class QuantumPredictor:
    def __init__(
        self,
        depth: int,
        circuit: str = "two_qubit",
        encoding: str = "amplitude",
        blocks: int = 2,
        entangling_range: int = 1,
        tied: bool = False,
        measured_qubit: int | None = None,
        forecast: str = "threshold",
        shots: int | None = None,
        **train_options,
    ):
        self.depth = depth
        self.encoding = EncodingSpec(encoding, depth)
        if circuit == "two_qubit":
            if self.encoding.num_qubits != 2:
                raise ValueError("the trimmed 2-qubit circuit needs a 2-qubit encoding")
            self.circuit = build_two_qubit_circuit(np.zeros(8))
        elif circuit == "polar":
            geometry = CircuitGeometry(
                num_qubits=self.encoding.num_qubits,
                blocks=blocks,
                entangling_range=entangling_range,
                tied=tied,
                measured_qubit=0 if measured_qubit is None else measured_qubit,
            )
            self.circuit = build_polar_circuit(geometry)
        else:
            raise ValueError(f"unknown circuit family {circuit!r}")
        self.forecast_mode = forecast
        self.shots = shots
        self.train_options = train_options
        self.model: qtrain.TrainedModel | None = None

    def fit(self, bits, rng=None):
        dataset = qtrain.dataset_from_bits(bits, self.depth, self.encoding)
        config = qtrain.TrainConfig(**self.train_options)
        self.model = qtrain.fit_with_restarts(self.circuit, dataset, config, rng)

    def forecast_probability(self, history) -> float:
        return qtrain.forecast_probability(
            self.model.params,
            self.model.circuit,
            gram_from_history(history, self.depth),
            self.encoding,
        )

    def forecast_bit(self, history, rng=None) -> int:
        return qtrain.forecast_bit(
            self.model,
            gram_from_history(history, self.depth),
            mode=self.forecast_mode,
            shots=self.shots,
            rng=rng,
        )


def build(spec: PredictorSpec, depth: int):
    """Instantiate a predictor for the given gram depth."""
    options = dict(spec.options)
    if spec.kind == "oracle":
        return OraclePredictor(depth, **options)
    if spec.kind == "logistic":
        return LogisticPredictor(depth, **options)
    if spec.kind == "mlp":
        hidden = options.get("hidden")
        if hidden is not None and hidden != "select":
            options["hidden"] = tuple(hidden)
        return MlpPredictor(depth, **options)
    return QuantumPredictor(depth, **options)
