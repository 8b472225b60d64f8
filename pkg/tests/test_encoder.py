import itertools
import math

import numpy as np
import pytest

from bitpredict.bitstream import DGram
from bitpredict.encoder import EncodingSpec, encode


class TestQubitCounts:
    def test_qubit_method_uses_one_qubit_per_bit(self):
        assert EncodingSpec("qubit", 3).num_qubits == 3
        assert EncodingSpec("qubit", 7).num_qubits == 7

    def test_amplitude_method_counts(self):
        # d+1 amplitudes are needed: 2 qubits for 3-grams, 3 for 7-grams
        assert EncodingSpec("amplitude", 3).num_qubits == 2
        assert EncodingSpec("amplitude", 7).num_qubits == 3
        assert EncodingSpec("amplitude", 1).num_qubits == 1
        assert EncodingSpec("amplitude", 4).num_qubits == 3

    def test_qubit_method_caps_depth(self):
        with pytest.raises(ValueError):
            EncodingSpec("qubit", 9)


class TestAmplitudeEncoding:
    def test_all_zero_gram_is_ground_state(self):
        state = encode(EncodingSpec("amplitude", 3), DGram((0, 0, 0)))
        expected = np.zeros(4)
        expected[0] = 1.0
        assert np.allclose(state.amplitudes, expected)

    def test_worked_example(self):
        state = encode(EncodingSpec("amplitude", 3), DGram((1, 0, 1)))
        v = 1.0 / math.sqrt(3.0)
        assert np.allclose(state.amplitudes, [v, v, 0.0, v])

    def test_unused_amplitudes_are_exactly_zero(self):
        state = encode(EncodingSpec("amplitude", 5), DGram((1, 1, 1, 1, 1)))
        assert np.all(state.amplitudes[6:] == 0.0)

    def test_unit_norm(self):
        for d in (1, 2, 3, 5):
            for bits in itertools.product((0, 1), repeat=d):
                state = encode(EncodingSpec("amplitude", d), DGram(bits))
                assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) <= 1e-12


class TestQubitEncoding:
    def test_most_recent_bit_is_most_significant(self):
        state = encode(EncodingSpec("qubit", 2), DGram((1, 0)))
        assert np.argmax(np.abs(state.amplitudes)) == 2

    def test_basis_state_positions(self):
        for bits in itertools.product((0, 1), repeat=3):
            state = encode(EncodingSpec("qubit", 3), DGram(bits))
            index = bits[0] * 4 + bits[1] * 2 + bits[2]
            expected = np.zeros(8)
            expected[index] = 1.0
            assert np.allclose(state.amplitudes, expected)


class TestInjectivity:
    @pytest.mark.parametrize("method", ["qubit", "amplitude"])
    def test_distinct_grams_map_to_distinct_states(self, method):
        for d in range(1, 8):
            spec = EncodingSpec(method, d)
            seen = {}
            for bits in itertools.product((0, 1), repeat=d):
                state = encode(spec, DGram(bits))
                key = tuple(np.round(state.amplitudes.real, 12))
                assert key not in seen, f"collision at d={d}: {bits} vs {seen[key]}"
                seen[key] = bits


class TestValidation:
    def test_depth_mismatch_rejected(self):
        with pytest.raises(ValueError):
            encode(EncodingSpec("amplitude", 3), DGram((1, 0)))

    def test_unknown_method_rejected(self):
        with pytest.raises(ValueError):
            EncodingSpec("angle", 3)
