"""Dense statevector simulator for up to 8 qubits.

Conventions, fixed across the whole package:

* Qubit 0 is the most significant bit of the basis-state index, so for
  k qubits the basis state |b0 b1 ... b_{k-1}> has index
  sum_q b_q * 2^(k-1-q).
* Rotations are ``exp(-i * angle * P)`` for a Pauli ``P`` (no half-angle),
  so <Z> under ``exp(-i t Y)|0>`` oscillates with period pi.
* A controlled rotation acts as the identity on the control-is-0 subspace
  and as the rotation on the control-is-1 subspace.

States are treated as immutable values: every operation returns a fresh
amplitude vector.  Batched application over the *leading* axes of an
amplitude array is supported throughout so that many encoded states can
be pushed through a circuit in one call.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

_PAULIS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

NORM_TOL = 1e-12


@dataclass(frozen=True)
class Gate:
    """Single-parameter Pauli rotation, optionally controlled.

    ``control is None`` means a plain rotation ``exp(-i*angle*P)`` on the
    target qubit; otherwise the rotation is applied only on the
    control-is-1 subspace.
    """

    axis: str
    angle: float
    target: int
    control: int | None = None

    def __post_init__(self):
        if self.axis not in _PAULIS:
            raise ValueError(f"unknown Pauli axis {self.axis!r}")
        if self.control is not None and self.control == self.target:
            raise ValueError("control and target must differ")

    def inverse(self) -> "Gate":
        return Gate(self.axis, -self.angle, self.target, self.control)


@dataclass(frozen=True)
class PauliGate:
    """Raw Pauli operator on one qubit (unitary, not parameterized).

    Used in derivative branch circuits; compiled model circuits never
    contain raw Paulis.
    """

    axis: str
    target: int

    def __post_init__(self):
        if self.axis not in _PAULIS:
            raise ValueError(f"unknown Pauli axis {self.axis!r}")


@dataclass(frozen=True)
class Observable:
    """Pauli Z on a single designated qubit (eigenvalues +1 / -1)."""

    qubit: int


@dataclass
class QuantumState:
    """Complex amplitude vector over the 2^k computational basis states."""

    amplitudes: np.ndarray
    num_qubits: int

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if not 1 <= self.num_qubits <= 8:
            raise ValueError("qubit count must be between 1 and 8")
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise ValueError("amplitude vector length must be 2^k")
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} too far from 1")


def basis_state(num_qubits: int, index: int = 0) -> QuantumState:
    amps = np.zeros(2**num_qubits, dtype=complex)
    amps[index] = 1.0
    return QuantumState(amps, num_qubits)


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    """2x2 matrix of exp(-i*angle*P)."""
    p = _PAULIS[axis]
    return math.cos(angle) * np.eye(2, dtype=complex) - 1j * math.sin(angle) * p


def _apply_1q(amps: np.ndarray, k: int, target: int, mat: np.ndarray) -> np.ndarray:
    """Apply a 2x2 matrix to `target` of a (..., 2^k) amplitude array."""
    if not 0 <= target < k:
        raise IndexError(f"target qubit {target} out of range for {k} qubits")
    lead = amps.shape[:-1]
    left = 2**target
    right = 2 ** (k - 1 - target)
    v = amps.reshape(lead + (left, 2, right))
    a0 = v[..., 0, :]
    a1 = v[..., 1, :]
    out = np.empty_like(v)
    out[..., 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    out[..., 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1
    return out.reshape(amps.shape)


def _apply_controlled_1q(
    amps: np.ndarray, k: int, control: int, target: int, mat: np.ndarray
) -> np.ndarray:
    """Apply a 2x2 matrix to `target` on the control-is-1 subspace."""
    if not 0 <= control < k:
        raise IndexError(f"control qubit {control} out of range for {k} qubits")
    if not 0 <= target < k:
        raise IndexError(f"target qubit {target} out of range for {k} qubits")
    if control == target:
        raise ValueError("control and target must differ")
    lead = amps.shape[:-1]
    q_first, q_second = sorted((control, target))
    d0 = 2**q_first
    d1 = 2 ** (q_second - q_first - 1)
    d2 = 2 ** (k - 1 - q_second)
    v = amps.reshape(lead + (d0, 2, d1, 2, d2)).copy()
    if control < target:
        a0 = v[..., 1, :, 0, :]
        a1 = v[..., 1, :, 1, :]
    else:
        a0 = v[..., 0, :, 1, :]
        a1 = v[..., 1, :, 1, :]
    new0 = mat[0, 0] * a0 + mat[0, 1] * a1
    new1 = mat[1, 0] * a0 + mat[1, 1] * a1
    if control < target:
        v[..., 1, :, 0, :] = new0
        v[..., 1, :, 1, :] = new1
    else:
        v[..., 0, :, 1, :] = new0
        v[..., 1, :, 1, :] = new1
    return v.reshape(amps.shape)


def apply_ops(
    amps: np.ndarray, num_qubits: int, ops: "list[Gate | PauliGate]"
) -> np.ndarray:
    """Apply a gate sequence (in list order) to a (..., 2^k) amplitude array."""
    for op in ops:
        if isinstance(op, PauliGate):
            amps = _apply_1q(amps, num_qubits, op.target, _PAULIS[op.axis])
        elif op.control is None:
            amps = _apply_1q(
                amps, num_qubits, op.target, rotation_matrix(op.axis, op.angle)
            )
        else:
            amps = _apply_controlled_1q(
                amps, num_qubits, op.control, op.target, rotation_matrix(op.axis, op.angle)
            )
    return amps


def apply_gate(state: QuantumState, gate: Gate | PauliGate) -> QuantumState:
    """Return the state after one gate; the input is left untouched."""
    amps = apply_ops(state.amplitudes, state.num_qubits, [gate])
    return QuantumState(amps, state.num_qubits)


def z_expectations(amps: np.ndarray, num_qubits: int, qubit: int) -> np.ndarray:
    """<Z_qubit> for every row of a (..., 2^k) amplitude array."""
    lead = amps.shape[:-1]
    left = 2**qubit
    right = 2 ** (num_qubits - 1 - qubit)
    probs = (np.abs(amps) ** 2).reshape(lead + (left, 2, right))
    return np.sum(probs[..., 0, :], axis=(-2, -1)) - np.sum(
        probs[..., 1, :], axis=(-2, -1)
    )


def expectation(state: QuantumState, obs: Observable) -> float:
    """Exact <psi| Z_q |psi>."""
    return float(z_expectations(state.amplitudes, state.num_qubits, obs.qubit))


def outcome_probability(state: QuantumState, qubit: int, outcome: int) -> float:
    """Probability of measuring the given Z eigenvalue (+1 or -1) on `qubit`."""
    if outcome not in (+1, -1):
        raise ValueError("outcome must be +1 or -1")
    z = expectation(state, Observable(qubit))
    return (1.0 + outcome * z) / 2.0


def sample_measurement(
    state: QuantumState, qubit: int, rng: np.random.Generator
) -> int:
    """Draw one Z-basis measurement outcome (+1 or -1) on `qubit`."""
    p_minus = outcome_probability(state, qubit, -1)
    return -1 if rng.random() < p_minus else +1


def _apply_observable(amps: np.ndarray, num_qubits: int, obs: Observable) -> np.ndarray:
    return _apply_1q(amps, num_qubits, obs.qubit, _PAULIS["Z"])


def hadamard_test(
    state: QuantumState,
    left_circuit: "list[Gate | PauliGate]",
    right_circuit: "list[Gate | PauliGate]",
    obs: Observable,
    part: str = "real",
    shots: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Real or imaginary part of the overlap <V psi | O | W psi>.

    With ``shots=None`` the overlap is computed exactly from the
    amplitudes.  Otherwise the ancilla-extended (k+1)-qubit protocol is
    simulated: the ancilla starts in |+>, the unitary V^dagger O W is
    applied on its 1-subspace, (for the imaginary part an S^dagger phase
    is inserted,) the ancilla is rotated back through Hadamard and
    measured `shots` times; the returned value is the mean of the +/-1
    outcomes, an estimator with standard error at most 1/sqrt(shots).
    """
    if part not in ("real", "imaginary"):
        raise ValueError("part must be 'real' or 'imaginary'")
    k = state.num_qubits
    if shots is None:
        v = apply_ops(state.amplitudes, k, left_circuit)
        w = apply_ops(state.amplitudes, k, right_circuit)
        val = np.vdot(v, _apply_observable(w, k, obs))
        return float(val.real if part == "real" else val.imag)

    if shots < 1:
        raise ValueError("shots must be >= 1 in sampled mode")
    if rng is None:
        raise ValueError("sampled mode needs an rng")
    # Ancilla prepended as the new most significant qubit: the extended
    # vector splits into the ancilla-0 half followed by the ancilla-1 half.
    half = state.amplitudes / math.sqrt(2.0)  # after Hadamard on |0> ancilla
    branch = apply_ops(half, k, right_circuit)
    branch = _apply_observable(branch, k, obs)
    inverse_left = [
        op.inverse() if isinstance(op, Gate) else op for op in reversed(left_circuit)
    ]
    branch = apply_ops(branch, k, inverse_left)
    if part == "imaginary":
        branch = branch * (-1j)  # S^dagger on the ancilla-1 half
    plus = (half + branch) / math.sqrt(2.0)
    minus = (half - branch) / math.sqrt(2.0)
    p_plus = float(np.sum(np.abs(plus) ** 2))
    p_plus = min(1.0, max(0.0, p_plus))
    _ = minus  # total probability is p_plus + |minus|^2 = 1 up to rounding
    outcomes = np.where(rng.random(shots) < p_plus, 1.0, -1.0)
    return float(outcomes.mean())


def state_to_json(state: QuantumState) -> str:
    """Debug dump: JSON array of [re, im] pairs."""
    pairs = [[float(a.real), float(a.imag)] for a in state.amplitudes]
    return json.dumps(pairs)
