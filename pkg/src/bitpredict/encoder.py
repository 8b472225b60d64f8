"""Map bit-history d-grams to quantum states.

Two encodings are supported:

* qubit encoding: the gram becomes the computational basis state
  |b_{t-1} ... b_{t-d}> on d qubits;
* amplitude encoding: the gram becomes the normalized superposition
  nu * (|0> + sum_s gram_s |s>) on ceil(log2(d+1)) qubits, where the
  constant |0> term guarantees normalizability for the all-zero gram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitstream import DGram
from .qsim import QuantumState

METHODS = ("qubit", "amplitude")


@dataclass(frozen=True)
class EncodingSpec:
    method: str
    depth: int

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown encoding method {self.method!r}")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.method == "qubit" and self.depth > 8:
            raise ValueError("qubit encoding supports depth <= 8")

    @property
    def num_qubits(self) -> int:
        if self.method == "qubit":
            return self.depth
        return max(1, math.ceil(math.log2(self.depth + 1)))


def encode_amplitudes(spec: EncodingSpec, gram: DGram) -> np.ndarray:
    """Unit-norm amplitude vector for the encoded gram."""
    if gram.depth != spec.depth:
        raise ValueError(
            f"gram depth {gram.depth} does not match encoding depth {spec.depth}"
        )
    k = spec.num_qubits
    amps = np.zeros(2**k, dtype=complex)
    if spec.method == "qubit":
        index = 0
        for b in gram.bits:  # qubit 0 (= b_{t-1}) is the most significant bit
            index = (index << 1) | b
        amps[index] = 1.0
    else:
        amps[0] = 1.0
        for s, b in enumerate(gram.bits, start=1):
            amps[s] = b
        amps /= math.sqrt(1 + sum(gram.bits))
    return amps


def encode(spec: EncodingSpec, gram: DGram) -> QuantumState:
    return QuantumState(encode_amplitudes(spec, gram), spec.num_qubits)
