"""Training for quantum circuit classifiers.

A labeled data case is an encoded d-gram plus the bit that followed it.
The trained circuit pushes the encoded state through the ansatz and reads
the forecast off the measured qubit: the probability of forecasting 1 is
the probability of measuring -1 there.

The utility being maximized is the summed probability mass the circuit
assigns to the correct labels,

    L(theta) = sum_t <U psi_t | Pi_{b_t} | U psi_t>
             = n/2 + 1/2 * sum_t (-1)^{b_t} <Z_m>_t,

which per data case lies in [0, 1].  Two maximizers are provided:
minibatch stochastic gradient ascent with analytic gradients assembled
from overlap evaluations, and gradient-free coordinate ascent that
reconstructs the exact trigonometric profile of the utility in one angle
and jumps to its global maximizer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bitstream import DGram
from .circuits import (
    CompiledCircuit,
    apply_circuit,
    circuit_from_dict,
    circuit_to_dict,
)
from .encoder import EncodingSpec, encode, encode_amplitudes
from .qsim import (
    Gate,
    Observable,
    _apply_1q,
    _apply_controlled_1q,
    hadamard_test,
    outcome_probability,
    rotation_matrix,
    z_expectations,
)

HALF_PI = math.pi / 2.0


@dataclass
class LabeledDataset:
    """Cases of (d-gram, follow-on bit) sharing one encoding."""

    cases: list[tuple[DGram, int]]
    encoding: EncodingSpec

    def __post_init__(self):
        for gram, label in self.cases:
            if gram.depth != self.encoding.depth:
                raise ValueError("all grams must match the encoding depth")
            if label not in (0, 1):
                raise ValueError("labels must be bits")

    def __len__(self) -> int:
        return len(self.cases)


def dataset_from_bits(
    bits, depth: int, encoding: EncodingSpec
) -> LabeledDataset:
    """Slide over a bit sequence and collect every (gram, next bit) case,
    grams in most-recent-first order."""
    bits = [int(b) for b in bits]
    cases = []
    for t in range(depth, len(bits)):
        gram = DGram(tuple(bits[t - 1 - s] for s in range(depth)))
        cases.append((gram, bits[t]))
    return LabeledDataset(cases=cases, encoding=encoding)


@dataclass(frozen=True)
class TrainConfig:
    """Knobs shared by both fitters.

    ``max_iterations`` caps SGD epochs or coordinate-ascent parameter
    passes depending on the method; None picks the per-method default
    (200 epochs, 50 passes).
    """

    method: str = "coordinate_ascent"
    learning_rate: float = 0.1
    minibatch_size: int = 8
    max_iterations: int | None = None
    tolerance: float = 1e-6
    restarts: int = 1
    seed: int = 0
    validate_fits: bool = False

    def __post_init__(self):
        if self.method not in ("sgd", "coordinate_ascent"):
            raise ValueError(f"unknown training method {self.method!r}")
        if self.learning_rate <= 0 or self.tolerance <= 0:
            raise ValueError("learning rate and tolerance must be positive")
        if self.minibatch_size < 1 or self.restarts < 1:
            raise ValueError("minibatch size and restarts must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("iteration cap must be positive")

    @property
    def iteration_cap(self) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        return 200 if self.method == "sgd" else 50


@dataclass
class TrainedModel:
    """Fit result: the circuit, its best angles, and the training record."""

    circuit: CompiledCircuit
    params: np.ndarray
    encoding: EncodingSpec
    utility: float
    restart_index: int
    trace: list[float]
    converged: bool
    seed: int | None = None


def _apply_1q_per_row(
    amps: np.ndarray,
    num_qubits: int,
    target: int,
    mats: np.ndarray,
    control: int | None,
) -> np.ndarray:
    """Apply one 2x2 matrix per leading row of a (n, ..., 2^k) batch,
    optionally controlled."""
    n = amps.shape[0]
    lead = amps.shape[1:-1]
    if control is None:
        left = 2**target
        right = 2 ** (num_qubits - 1 - target)
        v = amps.reshape((n,) + lead + (left, 2, right))
        out = np.einsum("nij,n...jr->n...ir", mats, v)
        return np.ascontiguousarray(out).reshape(amps.shape)
    q_first, q_second = sorted((control, target))
    d0 = 2**q_first
    d1 = 2 ** (q_second - q_first - 1)
    d2 = 2 ** (num_qubits - 1 - q_second)
    v = amps.reshape((n,) + lead + (d0, 2, d1, 2, d2)).copy()
    if control < target:
        sub = v[..., 1, :, :, :]  # control axis fixed to 1; target is next pair axis
        new = np.einsum("nij,n...ajr->n...air", mats, sub)
        v[..., 1, :, :, :] = new
    else:
        sub = v[..., :, :, 1, :]  # target pair axis first, control axis fixed to 1
        new = np.einsum("nij,n...jar->n...iar", mats, sub)
        v[..., :, :, 1, :] = new
    return v.reshape(amps.shape)


class _Objective:
    """Utility evaluator with distinct grams deduplicated and batched.

    Identical grams contribute identical <Z> values, so the utility
    reduces to n/2 + 1/2 * sum_g (n0_g - n1_g) <Z>_g over distinct grams.
    """

    def __init__(self, circuit: CompiledCircuit, dataset: LabeledDataset):
        if dataset.encoding.num_qubits != circuit.num_qubits:
            raise ValueError("encoding width does not match circuit width")
        counts: dict[tuple[int, ...], list[int]] = {}
        for gram, label in dataset.cases:
            counts.setdefault(gram.bits, [0, 0])[label] += 1
        grams = sorted(counts)
        self.states = np.stack(
            [encode_amplitudes(dataset.encoding, DGram(g)) for g in grams]
        )
        self.weights = np.array(
            [counts[g][0] - counts[g][1] for g in grams], dtype=float
        )
        self.num_cases = len(dataset.cases)
        self.circuit = circuit

    def value(self, angles: np.ndarray) -> float:
        c = self.circuit
        amps = self.states
        for slot in c.slots:
            mat = rotation_matrix(slot.axis, angles[slot.param_index])
            if slot.control is None:
                amps = _apply_1q(amps, c.num_qubits, slot.target, mat)
            else:
                amps = _apply_controlled_1q(
                    amps, c.num_qubits, slot.control, slot.target, mat
                )
        z = z_expectations(amps, c.num_qubits, c.measured_qubit)
        return self.num_cases / 2.0 + 0.5 * float(self.weights @ z)

    def probe_values(
        self, angles: np.ndarray, param_index: int, probes: np.ndarray
    ) -> np.ndarray:
        """Utility at every probe angle of one parameter in a single
        batched sweep; equivalent to `value` with angles[param_index]
        replaced probe by probe."""
        c = self.circuit
        n = len(probes)
        amps = np.broadcast_to(self.states, (n,) + self.states.shape).copy()
        for slot in c.slots:
            if slot.param_index == param_index:
                mats = np.stack([rotation_matrix(slot.axis, t) for t in probes])
                amps = _apply_1q_per_row(
                    amps, c.num_qubits, slot.target, mats, slot.control
                )
            else:
                mat = rotation_matrix(slot.axis, angles[slot.param_index])
                if slot.control is None:
                    amps = _apply_1q(amps, c.num_qubits, slot.target, mat)
                else:
                    amps = _apply_controlled_1q(
                        amps, c.num_qubits, slot.control, slot.target, mat
                    )
        z = z_expectations(amps, c.num_qubits, c.measured_qubit)
        return self.num_cases / 2.0 + 0.5 * (z @ self.weights)


def utility(
    params, circuit: CompiledCircuit, dataset: LabeledDataset
) -> float:
    """L(theta) evaluated through the rewritten <Z> form."""
    angles = circuit._angle_values(params)
    return _Objective(circuit, dataset).value(angles)


def utility_from_projectors(
    params, circuit: CompiledCircuit, dataset: LabeledDataset
) -> float:
    """L(theta) evaluated case by case with explicit eigenspace projectors;
    kept as an independent route for cross-checking `utility`."""
    k = circuit.num_qubits
    z_big = np.array([[1.0]], dtype=complex)
    for q in range(k):
        factor = (
            np.diag([1.0, -1.0]).astype(complex)
            if q == circuit.measured_qubit
            else np.eye(2, dtype=complex)
        )
        z_big = np.kron(z_big, factor)
    eye = np.eye(2**k, dtype=complex)
    projectors = {0: (eye + z_big) / 2.0, 1: (eye - z_big) / 2.0}
    total = 0.0
    for gram, label in dataset.cases:
        state = apply_circuit(circuit, params, encode(dataset.encoding, gram))
        psi = state.amplitudes
        total += float(np.real(np.vdot(psi, projectors[label] @ psi)))
    return total


def forecast_probability(
    params, circuit: CompiledCircuit, gram: DGram, encoding: EncodingSpec
) -> float:
    """p(next bit = 1 | gram): probability of measuring -1 on the measured
    qubit after the circuit."""
    state = apply_circuit(circuit, params, encode(encoding, gram))
    return outcome_probability(state, circuit.measured_qubit, -1)


def gradient(
    params, circuit: CompiledCircuit, batch: LabeledDataset
) -> np.ndarray:
    """dL/d(angle) per parameter, assembled from analytic overlap
    evaluations.

    The derivative of a plain rotation is the same rotation with the angle
    advanced by pi/2.  The derivative of a controlled rotation splits into
    two unitary branches combined with weights +1/2 and -1/2; the branch
    carrying a raw Pauli Z on the control is realized as a Z rotation by
    pi/2 (equal to -iZ), whose phase turns the wanted real part into the
    imaginary part of the rotated-branch overlap.  Tied parameters sum the
    contributions of all their gate occurrences.
    """
    angles = circuit._angle_values(params)
    gates = circuit.resolve(angles)
    obs = Observable(circuit.measured_qubit)
    states = [encode(batch.encoding, gram) for gram, _ in batch.cases]
    signs = [1.0 if label == 0 else -1.0 for _, label in batch.cases]
    grad = np.zeros(circuit.num_params)
    for p in range(circuit.num_params):
        total = 0.0
        for j in circuit.occurrences(p):
            slot = circuit.slots[j]
            shifted = Gate(slot.axis, gates[j].angle + HALF_PI, slot.target)
            if slot.control is None:
                left = gates[:j] + [shifted] + gates[j + 1 :]
                for state, sign in zip(states, signs):
                    total += sign * 2.0 * hadamard_test(state, left, gates, obs, "real")
            else:
                branch_i = gates[:j] + [shifted] + gates[j + 1 :]
                branch_z = (
                    gates[:j]
                    + [Gate("Z", HALF_PI, slot.control), shifted]
                    + gates[j + 1 :]
                )
                for state, sign in zip(states, signs):
                    re_plain = hadamard_test(state, branch_i, gates, obs, "real")
                    re_zctrl = hadamard_test(state, branch_z, gates, obs, "imaginary")
                    total += sign * (re_plain - re_zctrl)
        grad[p] = 0.5 * total
    return grad


def _random_angles(num_params: int, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(-math.pi, math.pi, size=num_params)


def sgd_fit(
    circuit: CompiledCircuit,
    dataset: LabeledDataset,
    config: TrainConfig,
    rng: np.random.Generator,
    init: np.ndarray | None = None,
) -> TrainedModel:
    """Minibatch stochastic gradient ascent over consecutive-case batches.

    The update adds learning_rate * sum_batch (-1)^b grad<Z>, i.e. twice
    the batch utility gradient.  Stops when the full-dataset utility
    changes by less than the tolerance between epochs; otherwise returns
    the best parameters seen with converged=False.
    """
    objective = _Objective(circuit, dataset)
    theta = (
        np.array(init, dtype=float)
        if init is not None
        else _random_angles(circuit.num_params, rng)
    )
    batches = [
        LabeledDataset(dataset.cases[i : i + config.minibatch_size], dataset.encoding)
        for i in range(0, len(dataset.cases), config.minibatch_size)
    ]
    trace: list[float] = []
    best_theta, best_value = theta.copy(), objective.value(theta)
    last = best_value
    converged = False
    for _ in range(config.iteration_cap):
        for batch in batches:
            theta = theta + config.learning_rate * 2.0 * gradient(theta, circuit, batch)
        value = objective.value(theta)
        trace.append(value)
        if value > best_value:
            best_theta, best_value = theta.copy(), value
        if abs(value - last) < config.tolerance:
            converged = True
            break
        last = value
    return TrainedModel(
        circuit=circuit,
        params=best_theta,
        encoding=dataset.encoding,
        utility=best_value,
        restart_index=0,
        trace=trace,
        converged=converged,
    )


@dataclass
class _TrigProfile:
    """Utility restricted to one angle: c0 + sum_h a_h cos(h t) + b_h sin(h t)."""

    harmonics: list[int]  # ascending, first entry 0
    coeffs: np.ndarray  # [c0, a_h1, b_h1, a_h2, b_h2, ...]

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.coeffs[0])
        for i, h in enumerate(self.harmonics[1:]):
            out = out + self.coeffs[1 + 2 * i] * np.cos(h * theta)
            out = out + self.coeffs[2 + 2 * i] * np.sin(h * theta)
        return out

    def derivative(self, theta: float) -> float:
        val = 0.0
        for i, h in enumerate(self.harmonics[1:]):
            val += -self.coeffs[1 + 2 * i] * h * math.sin(h * theta)
            val += self.coeffs[2 + 2 * i] * h * math.cos(h * theta)
        return val

    def second_derivative(self, theta: float) -> float:
        val = 0.0
        for i, h in enumerate(self.harmonics[1:]):
            val += -self.coeffs[1 + 2 * i] * h * h * math.cos(h * theta)
            val += -self.coeffs[2 + 2 * i] * h * h * math.sin(h * theta)
        return val


def _profile_layout(circuit: CompiledCircuit, param_index: int) -> tuple[list[int], np.ndarray]:
    """Harmonics present in the restricted utility and the probe angles
    that pin them down.

    A single plain rotation occurrence contributes only the even
    harmonics {0, 2}; a controlled occurrence adds the odd ones.  With m
    occurrences the degree grows to 2m.  Probes are equally spaced over
    the fundamental period, giving an exactly determined, well-conditioned
    interpolation:  {0, +-pi/3} for the 3-coefficient plain profile and
    {0, +-2pi/5, +-4pi/5} for the 5-coefficient controlled profile.
    """
    occs = circuit.occurrences(param_index)
    if not occs:
        raise ValueError(f"parameter {param_index} appears in no gate")
    m = len(occs)
    any_controlled = any(circuit.slots[j].control is not None for j in occs)
    if any_controlled:
        harmonics = list(range(0, 2 * m + 1))
        period = 2.0 * math.pi
    else:
        harmonics = list(range(0, 2 * m + 1, 2))
        period = math.pi
    n_coef = 1 + 2 * (len(harmonics) - 1)
    half = n_coef // 2
    probes = np.array([period * j / n_coef for j in range(-half, half + 1)])
    return harmonics, probes


def _fit_profile(
    harmonics: list[int], probes: np.ndarray, values: np.ndarray
) -> _TrigProfile:
    n = len(probes)
    design = np.empty((n, n))
    design[:, 0] = 1.0
    for i, h in enumerate(harmonics[1:]):
        design[:, 1 + 2 * i] = np.cos(h * probes)
        design[:, 2 + 2 * i] = np.sin(h * probes)
    coeffs = np.linalg.solve(design, values)
    return _TrigProfile(harmonics, coeffs)


def _maximize_profile(profile: _TrigProfile) -> float:
    """Global maximizer of the fitted profile in [-pi, pi)."""
    if profile.harmonics == [0, 2]:
        a, b = profile.coeffs[1], profile.coeffs[2]
        if a == 0.0 and b == 0.0:
            return 0.0
        return 0.5 * math.atan2(b, a)
    grid = np.linspace(-math.pi, math.pi, 1024, endpoint=False)
    values = profile(grid)
    theta = float(grid[int(np.argmax(values))])
    best = theta
    for _ in range(60):
        d1 = profile.derivative(theta)
        d2 = profile.second_derivative(theta)
        if d2 >= 0.0:
            break
        step = d1 / d2
        theta -= step
        if abs(step) < 1e-10:
            break
    if profile(theta) >= profile(best):
        best = theta
    return float((best + math.pi) % (2.0 * math.pi) - math.pi)


class FitResidualError(RuntimeError):
    """Restricted-profile interpolation failed to reproduce the utility,
    which means some gate fell outside the rotation grammar."""


def coordinate_ascent_fit(
    circuit: CompiledCircuit,
    dataset: LabeledDataset,
    config: TrainConfig,
    rng: np.random.Generator,
    init: np.ndarray | None = None,
) -> TrainedModel:
    """Cycle through the angles, jumping each to the global maximizer of
    its exactly reconstructed trigonometric utility profile.

    The utility never decreases across single-angle updates.  A full pass
    that improves the utility by less than the tolerance stops the fit.
    """
    objective = _Objective(circuit, dataset)
    theta = (
        np.array(init, dtype=float)
        if init is not None
        else _random_angles(circuit.num_params, rng)
    )
    current = objective.value(theta)
    trace: list[float] = []
    converged = False
    for _ in range(config.iteration_cap):
        before = current
        for p in range(circuit.num_params):
            harmonics, probes = _profile_layout(circuit, p)
            values = objective.probe_values(theta, p, probes)
            profile = _fit_profile(harmonics, probes, values)
            if config.validate_fits:
                check = 0.3183098861  # arbitrary angle away from the probes
                theta[p] = check
                actual = objective.value(theta)
                if abs(actual - float(profile(check))) > 1e-8:
                    raise FitResidualError(
                        f"parameter {p}: profile residual "
                        f"{abs(actual - float(profile(check))):.3e}"
                    )
            theta[p] = _maximize_profile(profile)
            current = float(profile(theta[p]))
        current = objective.value(theta)
        trace.append(current)
        if current - before < config.tolerance:
            converged = True
            break
    return TrainedModel(
        circuit=circuit,
        params=theta,
        encoding=dataset.encoding,
        utility=current,
        restart_index=0,
        trace=trace,
        converged=converged,
    )


def fit_with_restarts(
    circuit: CompiledCircuit,
    dataset: LabeledDataset,
    config: TrainConfig,
    rng: np.random.Generator | None = None,
) -> TrainedModel:
    """Run the configured fitter from independent uniform random starts
    and keep the model with the highest training utility."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    fitter = sgd_fit if config.method == "sgd" else coordinate_ascent_fit
    best: TrainedModel | None = None
    for index, child in enumerate(rng.spawn(config.restarts)):
        model = fitter(circuit, dataset, config, child)
        model.restart_index = index
        if best is None or model.utility > best.utility:
            best = model
    best.seed = config.seed
    return best


def required_samples(epsilon: float, delta: float) -> int:
    """Circuit reruns sufficient for the majority vote to pick the likelier
    bit with failure probability at most delta, for outcome probabilities
    separated by 2*epsilon (Hoeffding bound)."""
    if not 0.0 < epsilon <= 0.5:
        raise ValueError("epsilon must lie in (0, 0.5]")
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return math.ceil(math.log(1.0 / delta) / (2.0 * epsilon * epsilon))


def forecast_bit(
    model: TrainedModel,
    gram: DGram,
    mode: str = "threshold",
    shots: int | None = None,
    rng: np.random.Generator | None = None,
) -> int:
    """Turn the forecast distribution into a bit.

    threshold: 1 iff p(1) > 0.5 (ties go to 0, matching the small zero
    bias seen in collected streams); majority: majority of `shots`
    simulated measurements (drawn as one binomial, which is the same
    distribution); bernoulli: a single sampled measurement.
    """
    p = forecast_probability(model.params, model.circuit, gram, model.encoding)
    if mode == "threshold":
        return int(p > 0.5)
    if mode == "bernoulli":
        if rng is None:
            raise ValueError("bernoulli mode needs an rng")
        return int(rng.random() < p)
    if mode == "majority":
        if shots is None or shots < 1:
            raise ValueError("majority mode needs shots >= 1")
        if rng is None:
            raise ValueError("majority mode needs an rng")
        ones = int(rng.binomial(shots, p))
        return int(ones * 2 > shots)
    raise ValueError(f"unknown forecast mode {mode!r}")


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "circuit": circuit_to_dict(model.circuit),
        "params": [float(a) for a in model.params],
        "encoding": {"method": model.encoding.method, "depth": model.encoding.depth},
        "utility": model.utility,
        "restart_index": model.restart_index,
        "trace": [float(v) for v in model.trace],
        "converged": model.converged,
        "seed": model.seed,
    }


def model_from_dict(payload: dict) -> TrainedModel:
    return TrainedModel(
        circuit=circuit_from_dict(payload["circuit"]),
        params=np.asarray(payload["params"], dtype=float),
        encoding=EncodingSpec(**payload["encoding"]),
        utility=float(payload["utility"]),
        restart_index=int(payload["restart_index"]),
        trace=[float(v) for v in payload["trace"]],
        converged=bool(payload["converged"]),
        seed=payload.get("seed"),
    )


def model_to_json(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True)


def model_from_json(text: str) -> TrainedModel:
    return model_from_dict(json.loads(text))
