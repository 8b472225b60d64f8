import math

import numpy as np
import pytest

from bitpredict.qsim import (
    Gate,
    Observable,
    PauliGate,
    QuantumState,
    apply_gate,
    apply_ops,
    basis_state,
    expectation,
    hadamard_test,
    outcome_probability,
    rotation_matrix,
    sample_measurement,
    state_to_json,
)

PAULIS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def dense_operator(gate, k):
    """Brute-force matrix of a gate via Kronecker products (independent of
    the simulator's sliced application)."""
    if isinstance(gate, PauliGate):
        mats = [PAULIS[gate.axis] if q == gate.target else np.eye(2) for q in range(k)]
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out
    rot = rotation_matrix(gate.axis, gate.angle)
    if gate.control is None:
        mats = [rot if q == gate.target else np.eye(2) for q in range(k)]
        out = mats[0]
        for m in mats[1:]:
            out = np.kron(out, m)
        return out
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    idle = [np.eye(2)] * k
    off = idle.copy()
    off[gate.control] = p0
    on = idle.copy()
    on[gate.control] = p1
    on[gate.target] = rot
    out_off, out_on = off[0], on[0]
    for m_off, m_on in zip(off[1:], on[1:]):
        out_off = np.kron(out_off, m_off)
        out_on = np.kron(out_on, m_on)
    return out_off + out_on


def random_state(k, rng):
    amps = rng.normal(size=2**k) + 1j * rng.normal(size=2**k)
    amps /= np.linalg.norm(amps)
    return QuantumState(amps, k)


def random_gates(k, n, rng, controlled_fraction=0.5):
    gates = []
    for _ in range(n):
        axis = rng.choice(["X", "Y", "Z"])
        angle = float(rng.uniform(-np.pi, np.pi))
        target = int(rng.integers(0, k))
        if rng.random() < controlled_fraction and k > 1:
            control = int(rng.integers(0, k))
            while control == target:
                control = int(rng.integers(0, k))
            gates.append(Gate(axis, angle, target, control))
        else:
            gates.append(Gate(axis, angle, target))
    return gates


class TestGateApplication:
    def test_y_rotation_on_zero(self):
        state = apply_gate(basis_state(1), Gate("Y", 0.4, 0))
        assert state.amplitudes[0] == pytest.approx(math.cos(0.4))
        assert state.amplitudes[1] == pytest.approx(math.sin(0.4))

    def test_zero_angle_is_identity(self):
        rng = np.random.default_rng(0)
        state = random_state(3, rng)
        for gate in [Gate("X", 0.0, 1), Gate("Z", 0.0, 2, control=0)]:
            out = apply_gate(state, gate)
            assert np.allclose(out.amplitudes, state.amplitudes)

    def test_controlled_gate_idle_when_control_is_zero(self):
        state = basis_state(2, 0b01)  # qubit 0 (control) is 0
        out = apply_gate(state, Gate("X", 1.1, 1, control=0))
        assert np.allclose(out.amplitudes, state.amplitudes)

    def test_matches_dense_operator_on_random_gates(self):
        rng = np.random.default_rng(1)
        for k in (2, 3, 4):
            state = random_state(k, rng)
            for gate in random_gates(k, 30, rng):
                fast = apply_gate(state, gate).amplitudes
                dense = dense_operator(gate, k) @ state.amplitudes
                assert np.max(np.abs(fast - dense)) < 1e-12
                state = QuantumState(fast, k)

    def test_norm_preserved_over_long_sequences(self):
        rng = np.random.default_rng(2)
        state = random_state(4, rng)
        amps = state.amplitudes
        for gate in random_gates(4, 2000, rng):
            amps = apply_ops(amps, 4, [gate])
        assert abs(np.sum(np.abs(amps) ** 2) - 1.0) <= 1e-12

    def test_gate_then_inverse_restores_state(self):
        rng = np.random.default_rng(3)
        state = random_state(3, rng)
        for gate in random_gates(3, 50, rng):
            there = apply_gate(state, gate)
            back = apply_gate(there, gate.inverse())
            assert np.max(np.abs(back.amplitudes - state.amplitudes)) < 1e-10

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            apply_gate(basis_state(2), Gate("X", 0.1, 5))


class TestExpectation:
    def test_z_eigenstates(self):
        assert expectation(basis_state(1, 0), Observable(0)) == pytest.approx(1.0)
        assert expectation(basis_state(1, 1), Observable(0)) == pytest.approx(-1.0)

    def test_plus_state(self):
        plus = QuantumState(np.array([1, 1]) / math.sqrt(2), 1)
        assert expectation(plus, Observable(0)) == pytest.approx(0.0)

    def test_rotated_state_period(self):
        for theta in np.linspace(-3, 3, 11):
            state = apply_gate(basis_state(1), Gate("Y", theta, 0))
            assert expectation(state, Observable(0)) == pytest.approx(
                math.cos(2 * theta), abs=1e-12
            )

    def test_probabilities_reproduce_expectation(self):
        rng = np.random.default_rng(4)
        state = random_state(3, rng)
        for q in range(3):
            p_plus = outcome_probability(state, q, +1)
            p_minus = outcome_probability(state, q, -1)
            assert p_plus + p_minus == pytest.approx(1.0)
            assert p_plus - p_minus == pytest.approx(
                expectation(state, Observable(q)), abs=1e-12
            )


class TestSampling:
    def test_basis_states_are_deterministic(self):
        rng = np.random.default_rng(5)
        assert all(sample_measurement(basis_state(1, 0), 0, rng) == 1 for _ in range(20))
        assert all(sample_measurement(basis_state(1, 1), 0, rng) == -1 for _ in range(20))

    def test_plus_state_frequency(self):
        rng = np.random.default_rng(6)
        plus = QuantumState(np.array([1, 1]) / math.sqrt(2), 1)
        shots = 100_000
        outcomes = [sample_measurement(plus, 0, rng) for _ in range(shots)]
        rate = outcomes.count(-1) / shots
        assert abs(rate - 0.5) <= 3.0 / math.sqrt(shots)


class TestHadamardTest:
    def test_trivial_identity_case(self):
        psi = basis_state(2)
        assert hadamard_test(psi, [], [], Observable(0)) == pytest.approx(1.0)

    def test_equal_circuits_reduce_to_expectation(self):
        rng = np.random.default_rng(7)
        psi = random_state(2, rng)
        circuit = random_gates(2, 6, rng)
        value = hadamard_test(psi, circuit, circuit, Observable(0))
        rotated = QuantumState(apply_ops(psi.amplitudes, 2, circuit), 2)
        assert value == pytest.approx(expectation(rotated, Observable(0)), abs=1e-12)

    def test_analytic_matches_brute_force_inner_product(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            psi = random_state(2, rng)
            left = random_gates(2, 5, rng)
            right = random_gates(2, 5, rng)
            v = psi.amplitudes.copy()
            w = psi.amplitudes.copy()
            for gate in left:
                v = dense_operator(gate, 2) @ v
            for gate in right:
                w = dense_operator(gate, 2) @ w
            obs = dense_operator(PauliGate("Z", 0), 2)
            oracle = np.vdot(v, obs @ w)
            assert hadamard_test(psi, left, right, Observable(0), "real") == pytest.approx(
                oracle.real, abs=1e-10
            )
            assert hadamard_test(
                psi, left, right, Observable(0), "imaginary"
            ) == pytest.approx(oracle.imag, abs=1e-10)

    def test_sampled_mode_converges_to_analytic(self):
        rng = np.random.default_rng(9)
        psi = random_state(3, rng)
        left = random_gates(3, 4, rng)
        right = random_gates(3, 4, rng)
        for part in ("real", "imaginary"):
            exact = hadamard_test(psi, left, right, Observable(1), part)
            for shots in (10**3, 10**4, 10**5):
                est = hadamard_test(
                    psi, left, right, Observable(1), part, shots=shots, rng=rng
                )
                assert abs(est - exact) <= 3.0 / math.sqrt(shots)

    def test_sampled_mode_requires_shots_and_rng(self):
        psi = basis_state(1)
        with pytest.raises(ValueError):
            hadamard_test(psi, [], [], Observable(0), shots=0, rng=np.random.default_rng(0))
        with pytest.raises(ValueError):
            hadamard_test(psi, [], [], Observable(0), shots=10)


class TestStateJson:
    def test_dump_shape(self):
        import json

        plus = QuantumState(np.array([1, 1j]) / math.sqrt(2), 1)
        pairs = json.loads(state_to_json(plus))
        assert pairs == [
            [pytest.approx(1 / math.sqrt(2)), 0.0],
            [0.0, pytest.approx(1 / math.sqrt(2))],
        ]


class TestGateValidation:
    def test_control_equals_target_rejected(self):
        with pytest.raises(ValueError):
            Gate("X", 0.1, 1, control=1)

    def test_unknown_axis_rejected(self):
        with pytest.raises(ValueError):
            Gate("W", 0.1, 0)
