import numpy as np
from numpy.testing import assert_allclose
import pytest

import qpolar


def noiseless_replay(code, rng):
    """Oracle preparation replayed by the frame simulator."""
    bits = qpolar.prep_bit_sequence(code, "generic")
    state, outcomes = qpolar.simulate_measurement_prep(code.n, bits, rng)
    outcome = qpolar.prepare_noisy(
        code,
        "generic",
        qpolar.NoiseModel(0.0),
        rng,
        outcomes=outcomes,
        skip_levels=False,
    )
    return state, outcome


@pytest.mark.parametrize(
    "n, i",
    [(n, i) for n in [1, 2, 3] for i in range(1, 2**n + 1)],
)
def test_noiseless_equivalence(n, i):
    rng = np.random.default_rng(i)
    code = qpolar.Q1Code(n, i)
    for _ in range(20):
        state, outcome = noiseless_replay(code, rng)
        assert outcome.accepted
        assert not outcome.frame.e_x.any()
        assert not outcome.frame.e_z.any()
        expected = qpolar.apply_polar_encoding(n, outcome.u, outcome.v)
        assert qpolar.fidelity(state, expected) >= 1 - 1e-9


@pytest.mark.slow
@pytest.mark.parametrize(
    "n, i",
    [(n, i) for n in [1, 2, 3] for i in range(1, 2**n + 1)],
)
def test_noiseless_equivalence_long(n, i):
    rng = np.random.default_rng(100 + i)
    code = qpolar.Q1Code(n, i)
    for _ in range(200):
        state, outcome = noiseless_replay(code, rng)
        expected = qpolar.apply_polar_encoding(n, outcome.u, outcome.v)
        assert qpolar.fidelity(state, expected) >= 1 - 1e-9


FAULTS = [
    (3, 0, 0, "cnot1", 4),
    (3, 0, 1, "cnot1", 12),
    (3, 0, 2, "cnot1", 1),
    (3, 0, 3, "cnot1", 3),
    (3, 0, 0, "cnot1", 15),
    (3, 0, 1, "cnot2", 4),
    (3, 0, 2, "cnot2", 8),
    (3, 0, 3, "cnot2", 13),
    (3, 0, 0, "ancilla", 3),
    (3, 0, 1, "ancilla", 1),
    (3, 0, 2, "measure", 2),
    (2, 1, 1, "cnot2", 12),
    (0, 5, 0, "init", 3),
    (0, 6, 0, "init", 1),
]


@pytest.mark.parametrize("i", [1, 3, 4, 5, 8])
@pytest.mark.parametrize("fault", FAULTS)
def test_fault_replay(i, fault):
    code = qpolar.Q1Code(3, i)
    fault = qpolar.Fault(*fault)
    bits = qpolar.prep_bit_sequence(code, "generic")
    for seed in range(4):
        state, outcomes = qpolar.simulate_measurement_prep(
            3,
            bits,
            seed,
            faults=[fault],
        )
        outcome = qpolar.prepare_noisy(
            code,
            "generic",
            qpolar.NoiseModel(0.0),
            seed,
            faults=[fault],
            outcomes=outcomes,
            skip_levels=False,
            check_bound=True,
        )
        assert outcome.fault_count == 1
        if not outcome.accepted:
            continue
        expected = qpolar.apply_pauli_frame(
            qpolar.apply_polar_encoding(3, outcome.u, outcome.v),
            outcome.frame.e_x,
            outcome.frame.e_z,
        )
        assert qpolar.fidelity(state, expected) >= 1 - 1e-9


@pytest.mark.parametrize(
    "n, k",
    [(1, 0), (1, 1), (2, 1), (3, 1), (3, 2), (3, 0)],
)
@pytest.mark.parametrize("value", [0, 1])
def test_shor_product_form(n, k, value):
    i = 2**k
    u = np.zeros(i, dtype=np.uint8)
    u[-1] = value
    encoded = qpolar.apply_polar_encoding(n, u, np.zeros(2**n - i, dtype=np.uint8))
    product = qpolar.shor_logical_state(n, k, value)
    assert qpolar.fidelity(encoded, product) >= 1 - 1e-9


def test_shor_error():
    with pytest.raises(ValueError, match="'k'"):
        qpolar.shor_logical_state(2, 3, 0)


@pytest.mark.parametrize("n, i", [(2, 2), (3, 3), (3, 6)])
def test_encoded_stabilizers(n, i):
    rng = np.random.default_rng(n * i)
    code = qpolar.Q1Code(n, i)
    u = rng.integers(0, 2, i, dtype=np.uint8)
    v = rng.integers(0, 2, code.length - i, dtype=np.uint8)
    state = qpolar.apply_polar_encoding(n, u, v)
    s = qpolar.stabilizers(code, u[:-1], v)
    for support, sign in zip(s.z_generators, s.z_signs):
        expected = (-1.0) ** sign
        assert qpolar.stabilizer_expectation(state, support, "Z") == expected
    for support, sign in zip(s.x_generators, s.x_signs):
        expected = (-1.0) ** sign
        assert qpolar.stabilizer_expectation(state, support, "X") == expected
    _, z = qpolar.logical_operators(code)
    assert qpolar.stabilizer_expectation(state, z, "Z") == (-1.0) ** u[-1]


@pytest.mark.parametrize("dtype", [np.uint8, np.int64, bool])
def test_polar_encoding_minus_state(dtype):
    # |0, -> is mapped to (|00> - |11>) / sqrt(2)
    state = qpolar.apply_polar_encoding(1, np.zeros(1, dtype), np.ones(1, dtype))
    assert_allclose(state.amplitudes, np.array([1, 0, 0, -1]) / np.sqrt(2))
    assert_allclose(
        qpolar.shor_logical_state(1, 0, np.uint8(1)).amplitudes,
        np.array([0, 1, 1, 0]) / np.sqrt(2),
        atol=1e-12,
    )


def test_apply_pauli_frame():
    state = qpolar.apply_polar_encoding(1, [0, 0], [])
    flipped = qpolar.apply_pauli_frame(state, [0, 1], [0, 0])
    assert_allclose(flipped.amplitudes, [0, 1, 0, 0])
    phased = qpolar.apply_pauli_frame(flipped, [0, 0], [0, 1])
    assert_allclose(phased.amplitudes, [0, -1, 0, 0])


def test_state_vector():
    state = qpolar.StateVector([1, 0, 0, 0])
    assert state.num_qubits == 2
    assert state.tensor().shape == (2, 2)
    with pytest.raises(ValueError, match="power of two"):
        qpolar.StateVector([1, 0, 0])
    with pytest.raises(ValueError, match="norm"):
        qpolar.StateVector([1, 1])


def test_resource_bound():
    amplitudes = np.zeros(2**9)
    amplitudes[0] = 1
    with pytest.raises(qpolar.ResourceBoundError):
        qpolar.StateVector(amplitudes)
    with pytest.raises(qpolar.ResourceBoundError):
        qpolar.apply_polar_encoding(4, [0] * 8, [0] * 8)
    with pytest.raises(qpolar.ResourceBoundError):
        qpolar.simulate_measurement_prep(4, [0, 0, 0, 0])


def test_simulate_errors():
    with pytest.raises(ValueError, match="entries"):
        qpolar.simulate_measurement_prep(2, [1])
    with pytest.raises(ValueError, match="pauli_type"):
        state = qpolar.StateVector([1, 0])
        qpolar.stabilizer_expectation(state, [1], "Y")


def test_simulate_outcomes():
    state, outcomes = qpolar.simulate_measurement_prep(2, [1, 1], 0)
    assert [o.shape for o in outcomes] == [(2, 1), (1, 2)]
    # Z⊗Z measurements of |0000> are certain
    assert all(not o.any() for o in outcomes)
    assert_allclose(np.abs(state.amplitudes[0]), 1)
    fault = qpolar.Fault(1, 1, 0, "measure", 1)
    _, outcomes = qpolar.simulate_measurement_prep(2, [1, 1], 0, faults=[fault])
    assert outcomes[0].tolist() == [[0], [1]]
