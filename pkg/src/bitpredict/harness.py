"""Staggered-window evaluation: draw training windows uniformly inside
each stream, train a fresh predictor per window on exactly the window's
bits, score it on the 5 bits that follow, and aggregate scores into
(mean, std) tables keyed by gram depth and window width.

Held-out forecasting is teacher forced: the forecast for held-out
position i sees the true bits up to that position (window plus the
earlier held-out bits) but the model is not retrained.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitstream import Bitstream, TrainingWindow
from .predictors import PredictorSpec, build


@dataclass
class ExperimentSpec:
    """Complete characterization of one evaluation run."""

    predictor: PredictorSpec
    depth: int
    window_width: int
    segments: int = 1000
    seed: int = 0
    label: str | None = None

    def __post_init__(self):
        if self.window_width < self.depth + 1:
            raise ValueError("window width must be at least depth+1")
        if self.segments < 1:
            raise ValueError("need at least one segment")

    @property
    def table_label(self) -> str:
        return self.label if self.label else self.predictor.kind

    def to_dict(self) -> dict:
        return {
            "predictor": self.predictor.to_dict(),
            "depth": self.depth,
            "window_width": self.window_width,
            "segments": self.segments,
            "seed": self.seed,
            "label": self.label,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentSpec":
        return cls(
            predictor=PredictorSpec.from_dict(payload["predictor"]),
            depth=int(payload["depth"]),
            window_width=int(payload["window_width"]),
            segments=int(payload.get("segments", 1000)),
            seed=int(payload.get("seed", 0)),
            label=payload.get("label"),
        )


@dataclass
class EvaluationReport:
    spec: ExperimentSpec
    scores: list[float]
    mean: float
    std: float
    corpus_id: str = ""
    timestamp: float | None = None
    error: str | None = None

    def to_dict(self, include_timestamp: bool = True) -> dict:
        payload = {
            "spec": self.spec.to_dict(),
            "scores": self.scores,
            "mean": self.mean,
            "std": self.std,
            "corpus_id": self.corpus_id,
            "error": self.error,
        }
        if include_timestamp:
            payload["timestamp"] = self.timestamp
        return payload

    def canonical_json(self) -> str:
        """Deterministic serialization: volatile metadata left out."""
        return json.dumps(self.to_dict(include_timestamp=False), sort_keys=True)


def stagger(
    corpus: list[Bitstream], window_width: int, segments: int, rng: np.random.Generator
) -> list[TrainingWindow]:
    """Draw `segments` training windows with offsets uniform over each
    chosen stream.  Streams shorter than window_width+5 are excluded."""
    eligible = [s for s in corpus if len(s) >= window_width + 5]
    if not eligible:
        raise ValueError("corpus has no stream long enough for this window width")
    windows = []
    for _ in range(segments):
        stream = eligible[int(rng.integers(0, len(eligible)))]
        max_offset = len(stream) - window_width - 5
        tau = int(rng.integers(0, max_offset + 1))
        heldout = tuple(int(b) for b in stream.bits[tau + window_width : tau + window_width + 5])
        windows.append(
            TrainingWindow(
                stream_id=stream.id, offset=tau, width=window_width, heldout=heldout
            )
        )
    return windows


def score(
    predictor,
    window: TrainingWindow,
    stream: Bitstream,
    rng: np.random.Generator,
) -> float:
    """Fraction of the 5 held-out bits the predictor forecasts correctly.

    The predictor is trained on the window bits only; each held-out
    forecast then sees the true history up to its position, without
    retraining.
    """
    training = window.training_slice(stream)
    predictor.fit(training, rng)
    history = [int(b) for b in training]
    correct = 0
    for true_bit in window.heldout:
        forecast = predictor.forecast_bit(history, rng)
        correct += int(forecast == true_bit)
        history.append(int(true_bit))
    return correct / 5.0


def aggregate(scores) -> tuple[float, float]:
    """Sample mean and sample standard deviation (n-1 denominator; 0 for a
    single score)."""
    values = np.asarray(list(scores), dtype=float)
    if values.size == 0:
        raise ValueError("cannot aggregate an empty score list")
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return mean, std


def run_experiment(spec: ExperimentSpec, corpus: list[Bitstream]) -> EvaluationReport:
    rng = np.random.default_rng(spec.seed)
    by_id = {s.id: s for s in corpus}
    windows = stagger(corpus, spec.window_width, spec.segments, rng)
    scores = []
    for window in windows:
        predictor = build(spec.predictor, spec.depth)
        scores.append(score(predictor, window, by_id[window.stream_id], rng))
    mean, std = aggregate(scores)
    return EvaluationReport(
        spec=spec,
        scores=scores,
        mean=mean,
        std=std,
        corpus_id=f"{len(corpus)} streams",
        timestamp=time.time(),
    )


def _run_guarded(args) -> EvaluationReport:
    spec, corpus = args
    try:
        return run_experiment(spec, corpus)
    except Exception as exc:  # failures are recorded, not fatal
        return EvaluationReport(
            spec=spec,
            scores=[],
            mean=float("nan"),
            std=float("nan"),
            corpus_id=f"{len(corpus)} streams",
            timestamp=time.time(),
            error=f"{type(exc).__name__}: {exc}",
        )


def _sort_key(report: EvaluationReport):
    s = report.spec
    return (s.table_label, s.depth, s.window_width, s.seed)


def run_sweep(
    grid: list[ExperimentSpec], corpus: list[Bitstream], parallelism: int = 1
) -> list[EvaluationReport]:
    """Run every experiment in the grid; order of results is deterministic
    and independent of the execution schedule."""
    if not grid:
        raise ValueError("sweep grid is empty")
    jobs = [(spec, corpus) for spec in grid]
    if parallelism <= 1:
        reports = [_run_guarded(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            reports = list(pool.map(_run_guarded, jobs))
    return sorted(reports, key=_sort_key)


def format_table(reports: list[EvaluationReport], label: str | None = None) -> str:
    """Aligned text table: one row per gram depth, one column per window
    width, cells holding (mean, std)."""
    rows = sorted({r.spec.depth for r in reports})
    cols = sorted({r.spec.window_width for r in reports})
    cells: dict[tuple[int, int], str] = {}
    for r in reports:
        cells[(r.spec.depth, r.spec.window_width)] = f"({r.mean:.3f},{r.std:.3f})"
    if label is None:
        labels = {r.spec.table_label for r in reports}
        label = labels.pop() if len(labels) == 1 else "mixed"
    header = [label] + [f"L={c}" for c in cols]
    body = [[f"d={d}"] + [cells.get((d, c), "-") for c in cols] for d in rows]
    widths = [
        max(len(row[i]) for row in [header] + body) for i in range(len(header))
    ]
    lines = []
    for row in [header] + body:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: list[EvaluationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["label", "kind", "depth", "window_width", "segments", "seed", "mean", "std", "error"]
    )
    for r in reports:
        s = r.spec
        writer.writerow(
            [
                s.table_label,
                s.predictor.kind,
                s.depth,
                s.window_width,
                s.segments,
                s.seed,
                f"{r.mean:.6f}",
                f"{r.std:.6f}",
                r.error or "",
            ]
        )
    return buf.getvalue()


def reports_to_json(reports: list[EvaluationReport], include_timestamp: bool = True) -> str:
    return json.dumps(
        [r.to_dict(include_timestamp=include_timestamp) for r in reports], indent=2
    )
