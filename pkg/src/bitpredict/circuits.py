"""Variational circuit construction.

The workhorse ansatz alternates layers of single-qubit rotations with a
cyclic layer of controlled rotations whose control-target stride (the
entangling range) is coprime to the qubit count; a final dressing gate
acts on the measured qubit.  Every logical gate is expanded into an X
rotation followed by a Z rotation (2 angles), so each compiled gate is a
single-parameter Pauli rotation or controlled Pauli rotation, the grammar
the coordinate-ascent trainer relies on.

Angles live in a flat parameter vector; each compiled gate slot carries
the index of the angle it reads, which is how parameter tying across
blocks is expressed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .qsim import Gate, QuantumState, apply_ops


@dataclass(frozen=True)
class CircuitGeometry:
    """Shape of the block ansatz."""

    num_qubits: int
    blocks: int
    entangling_range: int = 1
    tied: bool = False
    measured_qubit: int = 0

    def __post_init__(self):
        k, r = self.num_qubits, self.entangling_range
        if k < 2:
            raise ValueError("block ansatz needs at least 2 qubits")
        if self.blocks < 1:
            raise ValueError("need at least one entangling block")
        if not 1 <= r < k:
            raise ValueError("entangling range must satisfy 1 <= r < k")
        if math.gcd(k, r) != 1:
            raise ValueError("entangling range must be coprime to the qubit count")
        if not 0 <= self.measured_qubit < k:
            raise ValueError("measured qubit out of range")


@dataclass(frozen=True)
class GateSlot:
    """One compiled gate with a symbolic angle reference."""

    axis: str
    target: int
    param_index: int
    control: int | None = None
    block: int | None = None
    position: int | None = None


@dataclass
class ParameterVector:
    """Flat vector of rotation angles (radians)."""

    angles: np.ndarray

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        if self.angles.ndim != 1:
            raise ValueError("angles must form a flat vector")


@dataclass
class CompiledCircuit:
    """Ordered gate slots (application order) over a fixed register."""

    num_qubits: int
    slots: list[GateSlot]
    num_params: int
    measured_qubit: int
    geometry: CircuitGeometry | None = None
    angles: np.ndarray | None = None  # optional bound parameter values

    def resolve(self, params: np.ndarray | ParameterVector | None = None) -> list[Gate]:
        """Bind angles to slots, yielding a concrete gate list."""
        values = self._angle_values(params)
        return [
            Gate(s.axis, float(values[s.param_index]), s.target, s.control)
            for s in self.slots
        ]

    def _angle_values(self, params) -> np.ndarray:
        if params is None:
            if self.angles is None:
                raise ValueError("circuit has no bound angles; pass params")
            values = self.angles
        elif isinstance(params, ParameterVector):
            values = params.angles
        else:
            values = np.asarray(params, dtype=float)
        if values.shape != (self.num_params,):
            raise ValueError(
                f"parameter layout mismatch: expected {self.num_params} angles, "
                f"got {values.shape}"
            )
        return values

    def occurrences(self, param_index: int) -> list[int]:
        """Slot positions that read the given parameter."""
        return [i for i, s in enumerate(self.slots) if s.param_index == param_index]


def apply_circuit(
    circuit: CompiledCircuit,
    params: np.ndarray | ParameterVector | None,
    state: QuantumState,
) -> QuantumState:
    if state.num_qubits != circuit.num_qubits:
        raise ValueError("state width does not match circuit width")
    amps = apply_ops(state.amplitudes, circuit.num_qubits, circuit.resolve(params))
    return QuantumState(amps, circuit.num_qubits)


def circuit_unitary(
    circuit: CompiledCircuit, params: np.ndarray | ParameterVector | None = None
) -> np.ndarray:
    """Full 2^k x 2^k matrix of the compiled circuit (columns = images of
    basis states)."""
    dim = 2**circuit.num_qubits
    basis = np.eye(dim, dtype=complex)
    ops = circuit.resolve(params)
    return apply_ops(basis, circuit.num_qubits, ops).T


def build_polar_circuit(geometry: CircuitGeometry) -> CompiledCircuit:
    """Compile the block ansatz for the given geometry.

    Per block: one logical gate R_Z(a)R_X(b) on every qubit, then the
    cyclic controlled layer; the layer's product form is applied right
    factor first, i.e. the controlled gate targeting qubit (k-1)r mod k
    comes first.  After the last block a dressing gate acts on the
    measured qubit.  Untied circuits use 4k angles per block plus 2;
    tied circuits share one block's 4k angles everywhere.
    """
    k, blocks, r = geometry.num_qubits, geometry.blocks, geometry.entangling_range
    slots: list[GateSlot] = []
    for b in range(blocks):
        base = 0 if geometry.tied else 4 * k * b
        for q in range(k):
            ix = base + 2 * q
            slots.append(GateSlot("X", q, ix, block=b, position=q))
            slots.append(GateSlot("Z", q, ix + 1, block=b, position=q))
        for j in range(k - 1, -1, -1):
            target = (j * r) % k
            control = ((j + 1) * r) % k
            ix = base + 2 * k + 2 * j
            slots.append(GateSlot("X", target, ix, control=control, block=b, position=k + j))
            slots.append(GateSlot("Z", target, ix + 1, control=control, block=b, position=k + j))
    dress_base = 4 * k if geometry.tied else 4 * k * blocks
    m = geometry.measured_qubit
    slots.append(GateSlot("X", m, dress_base, block=None, position=0))
    slots.append(GateSlot("Z", m, dress_base + 1, block=None, position=0))
    num_params = dress_base + 2
    return CompiledCircuit(
        num_qubits=k,
        slots=slots,
        num_params=num_params,
        measured_qubit=m,
        geometry=geometry,
    )


def build_two_qubit_circuit(angles) -> CompiledCircuit:
    """The trimmed 8-parameter 2-qubit circuit.

    Application order: Z rotations on both qubits, X rotations on both
    qubits, an X rotation on qubit 0 controlled by qubit 1, an X rotation
    on qubit 1 controlled by qubit 0, then dressing rotations R_Z and R_X
    on the measured qubit (qubit 1).
    """
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (8,):
        raise ValueError("the trimmed 2-qubit circuit takes exactly 8 angles")
    slots = [
        GateSlot("Z", 0, 0),
        GateSlot("Z", 1, 1),
        GateSlot("X", 0, 2),
        GateSlot("X", 1, 3),
        GateSlot("X", 0, 4, control=1),
        GateSlot("X", 1, 5, control=0),
        GateSlot("Z", 1, 6),
        GateSlot("X", 1, 7),
    ]
    return CompiledCircuit(
        num_qubits=2,
        slots=slots,
        num_params=8,
        measured_qubit=1,
        angles=angles,
    )


def check_grammar(circuit: CompiledCircuit) -> None:
    """Assert every compiled gate is a single-parameter Pauli rotation or
    controlled Pauli rotation with a valid angle reference."""
    for slot in circuit.slots:
        if slot.axis not in ("X", "Y", "Z"):
            raise ValueError(f"gate outside grammar: axis {slot.axis!r}")
        if not 0 <= slot.param_index < circuit.num_params:
            raise ValueError("gate references an angle outside the layout")
        if slot.control is not None and slot.control == slot.target:
            raise ValueError("control equals target")


def circuit_to_dict(
    circuit: CompiledCircuit, params: np.ndarray | None = None
) -> dict:
    """JSON-ready description (geometry, layout, angles) for checkpoints."""
    payload: dict = {
        "num_qubits": circuit.num_qubits,
        "num_params": circuit.num_params,
        "measured_qubit": circuit.measured_qubit,
        "slots": [
            {
                "axis": s.axis,
                "target": s.target,
                "param_index": s.param_index,
                "control": s.control,
                "block": s.block,
                "position": s.position,
            }
            for s in circuit.slots
        ],
    }
    if circuit.geometry is not None:
        g = circuit.geometry
        payload["geometry"] = {
            "num_qubits": g.num_qubits,
            "blocks": g.blocks,
            "entangling_range": g.entangling_range,
            "tied": g.tied,
            "measured_qubit": g.measured_qubit,
        }
    angles = params if params is not None else circuit.angles
    if angles is not None:
        payload["angles"] = [float(a) for a in np.asarray(angles)]
    return payload


def circuit_from_dict(payload: dict) -> CompiledCircuit:
    geometry = None
    if "geometry" in payload:
        geometry = CircuitGeometry(**payload["geometry"])
    slots = [GateSlot(**s) for s in payload["slots"]]
    angles = payload.get("angles")
    return CompiledCircuit(
        num_qubits=payload["num_qubits"],
        slots=slots,
        num_params=payload["num_params"],
        measured_qubit=payload["measured_qubit"],
        geometry=geometry,
        angles=None if angles is None else np.asarray(angles, dtype=float),
    )


def circuit_to_json(circuit: CompiledCircuit, params: np.ndarray | None = None) -> str:
    return json.dumps(circuit_to_dict(circuit, params), sort_keys=True)


def circuit_from_json(text: str) -> CompiledCircuit:
    return circuit_from_dict(json.loads(text))
