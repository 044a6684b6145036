import numpy as np
import pytest

import qpolar


ERASURE_Q1 = [2, 7, 4, 23, 8, 87, 16, 343, 32, 1367]
ERASURE_SHOR = [2, 4, 4, 8, 8, 16, 16, 32, 32, 64]
DEPOLARIZING_Q1 = [4, 7, 8, 23, 16, 91]
DEPOLARIZING_SHOR = [4, 4, 8, 8, 16, 16]
# Depths where the published position is within 5 % of the optimum
FLAT_DEPTHS = [3, 4]


@pytest.fixture(scope="module")
def erasure_profiles():
    """Erasure profiles for n = 3..12 at epsilon = 1e-4."""
    # Every table entry is stable for epsilon in [1e-5, 2.4e-4]
    return {n: qpolar.reliability_profile(n, "erasure", 1e-4) for n in range(3, 13)}


@pytest.mark.parametrize(
    "n, expected_q1, expected_shor",
    list(zip(range(3, 13), ERASURE_Q1, ERASURE_SHOR)),
)
def test_construct_erasure(erasure_profiles, n, expected_q1, expected_shor):
    profile = erasure_profiles[n]
    code = qpolar.construct(n, profile, "q1", channel="erasure", p=1e-4)
    assert code.i == expected_q1
    assert code.family == "q1"
    assert code.channel == "erasure"
    code = qpolar.construct(n, profile, "shor")
    assert code.i == expected_shor
    assert code.family == "shor"


@pytest.fixture(scope="module")
def depolarizing_profiles():
    """Depolarizing profiles for n = 3..8 at p = 1e-3."""
    return {
        n: qpolar.reliability_profile(n, "depolarizing", 1e-3) for n in range(3, 9)
    }


@pytest.mark.parametrize(
    "n, expected_q1, expected_shor",
    list(zip(range(3, 9), DEPOLARIZING_Q1, DEPOLARIZING_SHOR)),
)
def test_construct_depolarizing(
    depolarizing_profiles,
    n,
    expected_q1,
    expected_shor,
):
    profile = depolarizing_profiles[n]
    ler = profile.position_ler()
    for family, expected in [("q1", expected_q1), ("shor", expected_shor)]:
        code = qpolar.construct(n, profile, family)
        if family == "q1":
            candidates = np.arange(1, 2**n + 1)
        else:
            candidates = 2 ** np.arange(n + 1)
        assert ler[code.i - 1] == pytest.approx(ler[candidates - 1].min(), rel=1e-9)
        if n in FLAT_DEPTHS:
            assert ler[expected - 1] <= 1.05 * ler[code.i - 1]
        else:
            assert code.i == expected


def test_construct_error():
    profile = qpolar.reliability_profile(3, "erasure", 1e-3)
    with pytest.raises(ValueError, match="depth"):
        qpolar.construct(4, profile)
    with pytest.raises(ValueError, match="family"):
        qpolar.construct(3, profile, "steane")


def test_construct_ties_resolve_to_smallest():
    profile = qpolar.ReliabilityProfile(2, np.zeros(4), np.zeros(4))
    assert qpolar.construct(2, profile).i == 1
    assert qpolar.construct(2, profile, "shor").i == 1


def test_construct_ranks_underflowed_probabilities():
    # All probabilities underflow, only the logarithms differ
    profile = qpolar.ReliabilityProfile(
        1,
        [0.0, 0.0],
        [0.0, 0.0],
        log_pe_z=[-1000.0, -2000.0],
        log_pe_x=[-3000.0, -3000.0],
    )
    assert qpolar.construct(1, profile).i == 2
    assert qpolar.construct(1, profile, "shor").i == 2


def test_construct_erasure_underflow():
    profile = qpolar.reliability_profile(12, "erasure", 1e-3)
    assert (profile.pe_z == 0).any()
    log_ler = profile.position_log_ler()
    assert np.isfinite(log_ler).all()
    code = qpolar.construct(12, profile)
    assert log_ler[code.i - 1] == log_ler.min()
    assert np.count_nonzero(log_ler == log_ler.min()) <= 2


@pytest.mark.parametrize(
    "n, i, expected",
    [
        (0, 1, 1),
        (1, 1, 1),
        (1, 2, 1),
        (4, 7, 4),
        (6, 23, 8),
        (12, 1367, 64),
        (12, 64, 64),
        (12, 1, 1),
    ],
)
def test_min_distance(n, i, expected):
    assert qpolar.min_distance(qpolar.Q1Code(n, i)) == expected


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_min_distance_enumerate(n):
    for i in range(1, 2**n + 1):
        code = qpolar.Q1Code(n, i)
        assert qpolar.min_distance(code, method="enumerate") == qpolar.min_distance(
            code
        )


def test_min_distance_budget():
    with pytest.raises(qpolar.ResourceBoundError):
        qpolar.min_distance(qpolar.Q1Code(5, 1), method="enumerate")
    with pytest.raises(RuntimeError):
        qpolar.min_distance(qpolar.Q1Code(3, 1), method="enumerate", budget=10)
    with pytest.raises(ValueError, match="method"):
        qpolar.min_distance(qpolar.Q1Code(3, 1), method="guess")


@pytest.mark.parametrize(
    "n, i",
    [(-1, 1), (2, 0), (2, 5)],
)
def test_code_error(n, i):
    with pytest.raises(ValueError):
        qpolar.Q1Code(n, i)


def test_code_descriptor():
    code = qpolar.Q1Code(4, 7, family="q1", channel="depolarizing", p=1e-3)
    assert code == qpolar.Q1Code(4, 7)
    assert code != qpolar.Q1Code(4, 8)
    descriptor = code.to_dict()
    assert descriptor == {
        "n": 4,
        "i": 7,
        "family": "q1",
        "channel": "depolarizing",
        "p": 1e-3,
        "construction_mode": None,
    }
    restored = qpolar.Q1Code.from_dict(descriptor)
    assert restored == code
    assert restored.channel == "depolarizing"
    assert '"i": 7' in code.to_json()


@pytest.mark.parametrize(
    "n, i",
    [(1, 1), (2, 2), (3, 3), (4, 7), (5, 16)],
)
def test_frozen_sets(n, i):
    code = qpolar.Q1Code(n, i)
    positions = np.concatenate([code.z_frozen, [i], code.x_frozen])
    assert positions.tolist() == list(range(1, code.length + 1))


@pytest.mark.parametrize(
    "n, i",
    [(1, 1), (2, 3), (3, 5), (4, 7)],
)
def test_stabilizers(n, i):
    code = qpolar.Q1Code(n, i)
    s = qpolar.stabilizers(code)
    assert s.x_generators.shape == (code.length - i, code.length)
    assert s.z_generators.shape == (i - 1, code.length)
    assert s.commute()
    x, z = qpolar.logical_operators(code)
    # Logical operators commute with all stabilizers ...
    assert np.all((s.z_generators.astype(int) @ x) % 2 == 0)
    assert np.all((s.x_generators.astype(int) @ z) % 2 == 0)
    # ... and anticommute with each other
    assert int(x.astype(int) @ z) % 2 == 1


def test_stabilizers_signs():
    code = qpolar.Q1Code(2, 2)
    s = qpolar.stabilizers(code, u=[1], v=[0, 1])
    assert s.z_signs.tolist() == [1]
    assert s.x_signs.tolist() == [0, 1]
    with pytest.raises(ValueError, match="length"):
        qpolar.stabilizers(code, u=[1, 1])


@pytest.mark.parametrize(
    "n, i, target, expected_bits, expected_positions",
    [
        (3, 3, "zero", [0, 1, 0], [1, 1, 3, 3]),
        (3, 3, "plus", [1, 0, 0], [1, 2, 2, 2]),
        (4, 7, "zero", [0, 1, 1, 0], [1, 1, 3, 7, 7]),
        (4, 7, "plus", [1, 0, 1, 0], [1, 2, 2, 6, 6]),
        (2, 1, "generic", [0, 0], [1, 1, 1]),
        (2, 4, "zero", [1, 1], [1, 2, 4]),
    ],
)
def test_prep_sequence(n, i, target, expected_bits, expected_positions):
    code = qpolar.Q1Code(n, i)
    assert qpolar.prep_bit_sequence(code, target).tolist() == expected_bits
    assert qpolar.prep_positions(code, target) == expected_positions
    assert qpolar.final_position(code, target) == expected_positions[-1]


def test_prep_sequence_error():
    with pytest.raises(ValueError, match="at least 2"):
        qpolar.prep_bit_sequence(qpolar.Q1Code(2, 1), "plus")
    with pytest.raises(ValueError, match="target"):
        qpolar.final_position(qpolar.Q1Code(2, 1), "minus")
