"""Bitstream data model, corpus I/O, descriptive statistics, and the
synthetic noisy-regression generator.

A bitstream is an ordered sequence of binary choices.  Corpora are stored
as UTF-8 text, one stream per line of '0'/'1' characters, each optionally
preceded by a header line ``#id=<string> source=<name>``.  Whitespace
inside a bits line is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

SOURCES = ("synthetic", "game_transcript", "simple", "external")


class CorpusFormatError(ValueError):
    """Malformed corpus file; message carries line and column."""


@dataclass
class Bitstream:
    """Ordered sequence of bits with provenance metadata."""

    bits: np.ndarray
    source: str = "external"
    id: str = ""

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 1 or self.bits.size < 1:
            raise ValueError("bitstream must be a non-empty 1-d bit sequence")
        if not np.all((self.bits == 0) | (self.bits == 1)):
            raise ValueError("bitstream elements must be 0 or 1")
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")

    def __len__(self) -> int:
        return int(self.bits.size)

    def as_list(self) -> list[int]:
        return [int(b) for b in self.bits]


@dataclass(frozen=True)
class DGram:
    """The ``d`` most recent bits before a time step, most-recent-first:
    position ``s`` holds the bit ``s+1`` steps back."""

    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if len(self.bits) < 1:
            raise ValueError("d-gram depth must be >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("d-gram bits must be 0 or 1")

    @property
    def depth(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class TrainingWindow:
    """Pointer to ``width`` consecutive training bits of a stream plus the
    5 bits immediately following them (the held-out scoring bits)."""

    stream_id: str
    offset: int
    width: int
    heldout: tuple[int, ...]

    def __post_init__(self):
        if len(self.heldout) != 5:
            raise ValueError("held-out segment must contain exactly 5 bits")
        if self.offset < 0 or self.width < 1:
            raise ValueError("invalid window geometry")

    def training_slice(self, stream: Bitstream) -> np.ndarray:
        if self.offset + self.width + 5 > len(stream):
            raise ValueError("window does not fit inside stream")
        return stream.bits[self.offset : self.offset + self.width]


@dataclass(frozen=True)
class SyntheticRule:
    """Randomized binary regression: the next bit is the XOR of selected
    history taps, flipped with a fixed probability."""

    coefficients: tuple[int, ...]
    seed_bits: tuple[int, ...]
    flip_probability: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(a) for a in self.coefficients))
        object.__setattr__(self, "seed_bits", tuple(int(b) for b in self.seed_bits))
        if len(self.coefficients) != len(self.seed_bits):
            raise ValueError("need one seed bit per coefficient")
        if any(a not in (0, 1) for a in self.coefficients + self.seed_bits):
            raise ValueError("coefficients and seed bits must be 0 or 1")
        if not 0.0 <= self.flip_probability <= 1.0:
            raise ValueError("flip probability must lie in [0, 1]")

    @property
    def order(self) -> int:
        return len(self.coefficients)


def autocorrelation(stream: Bitstream, max_lag: int) -> list[float | None]:
    """Absolute Pearson correlation between the stream and its lagged copy
    for lags 1..max_lag.

    A lag whose overlapped subsequences have zero variance is degenerate
    and reported as None instead of a number.
    """
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    n = len(stream)
    if n <= max_lag + 1:
        raise ValueError("stream too short for requested max_lag")
    x = stream.bits.astype(np.float64)
    out: list[float | None] = []
    for s in range(1, max_lag + 1):
        a, b = x[s:], x[: n - s]
        sa, sb = a.std(), b.std()
        if sa == 0.0 or sb == 0.0:
            out.append(None)
            continue
        cov = float(np.mean((a - a.mean()) * (b - b.mean())))
        out.append(min(1.0, abs(cov / (sa * sb))))
    return out


def zero_bias(stream: Bitstream) -> float:
    """Fraction of zeros in the stream."""
    return float(np.count_nonzero(stream.bits == 0)) / len(stream)


def conditional_counts(gram: DGram, window: Sequence[int]) -> tuple[int, int]:
    """Count how often each bit value immediately follows `gram` inside the
    window, scanning every position where the (d+1)-gram fits."""
    bits = np.asarray(window, dtype=np.uint8)
    d = gram.depth
    if bits.size < d + 1:
        raise ValueError("window must span at least d+1 bits")
    counts = [0, 0]
    target = gram.bits
    for t in range(d, bits.size):
        # most-recent-first: position s of the gram is the bit at t-s-1
        if all(bits[t - s - 1] == target[s] for s in range(d)):
            counts[bits[t]] += 1
    return counts[0], counts[1]


def conditional_frequencies(
    gram: DGram, window: Sequence[int]
) -> tuple[float, float] | None:
    """Empirical distribution of the follow-on bit given `gram`, or None
    when the gram never occurs in the window (unseen context)."""
    c0, c1 = conditional_counts(gram, window)
    total = c0 + c1
    if total == 0:
        return None
    return c0 / total, c1 / total


def collision_frequency(gram: DGram, window: Sequence[int]) -> float | None:
    """Collision frequency p0^2 + p1^2 of the conditional follow-on
    distribution; None for unseen contexts.

    Equals the expected in-sample accuracy of sampling the inferred bit
    from the empirical conditional distribution.
    """
    freqs = conditional_frequencies(gram, window)
    if freqs is None:
        return None
    p0, p1 = freqs
    return p0 * p0 + p1 * p1


def synthesize(
    rule: SyntheticRule, length: int, rng: np.random.Generator, stream_id: str = ""
) -> Bitstream:
    """Generate a stream from a noisy binary regression.

    The first `order` bits are the seed; afterwards each bit is the XOR of
    the coefficient-selected history taps XORed with an independent
    Bernoulli(flip_probability) noise bit.  With flip probability 0 the
    output is deterministic and eventually periodic with period at most
    2^order.
    """
    k = rule.order
    if length < k:
        raise ValueError("length must be at least the rule order")
    bits = np.empty(length, dtype=np.uint8)
    bits[:k] = rule.seed_bits
    coeffs = np.asarray(rule.coefficients, dtype=np.uint8)
    noise = (
        (rng.random(length - k) < rule.flip_probability).astype(np.uint8)
        if length > k
        else np.empty(0, dtype=np.uint8)
    )
    for t in range(k, length):
        # taps are b_{t-1}..b_{t-k}; coefficient j selects lag j+1
        history = bits[t - k : t][::-1]
        det = int(np.bitwise_xor.reduce(coeffs & history))
        bits[t] = det ^ noise[t - k]
    return Bitstream(bits=bits, source="synthetic", id=stream_id)


def _parse_header(line: str, lineno: int) -> tuple[str, str]:
    body = line[1:].strip()
    fields = dict(
        part.split("=", 1) for part in body.split() if "=" in part
    )
    stream_id = fields.get("id", "")
    source = fields.get("source", "external")
    if source not in SOURCES:
        raise CorpusFormatError(
            f"line {lineno}: unknown source {source!r} in header"
        )
    return stream_id, source


def read_corpus(path: str | Path) -> list[Bitstream]:
    """Read a corpus file.  Raises CorpusFormatError naming the offending
    line and column on any character outside {0, 1, whitespace}."""
    streams: list[Bitstream] = []
    pending: tuple[str, str] | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                pending = _parse_header(line.lstrip(), lineno)
                continue
            bits = []
            for col, ch in enumerate(line, start=1):
                if ch in "01":
                    bits.append(int(ch))
                elif ch.isspace():
                    continue
                else:
                    raise CorpusFormatError(
                        f"line {lineno}, column {col}: invalid character {ch!r}"
                    )
            if not bits:
                raise CorpusFormatError(f"line {lineno}: empty bits line")
            stream_id, source = pending if pending else ("", "external")
            pending = None
            if not stream_id:
                stream_id = f"stream-{len(streams):04d}"
            streams.append(Bitstream(bits=bits, source=source, id=stream_id))
    return streams


def write_corpus(streams: Sequence[Bitstream], path: str | Path) -> None:
    """Write streams in canonical form: a header line followed by the bits
    line, for every stream."""
    with open(path, "w", encoding="utf-8") as fh:
        for stream in streams:
            fh.write(f"#id={stream.id} source={stream.source}\n")
            fh.write("".join(str(int(b)) for b in stream.bits) + "\n")
