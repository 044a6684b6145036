import numpy as np
from numpy.testing import assert_array_equal
import pytest

import qpolar


@pytest.mark.parametrize(
    "n, i, target, u_length, v_length",
    [
        (1, 2, "zero", 2, 0),
        (3, 3, "zero", 3, 5),
        (3, 3, "plus", 2, 6),
        (3, 3, "generic", 3, 5),
        (4, 7, "zero", 7, 9),
        (4, 7, "plus", 6, 10),
        (4, 16, "zero", 16, 0),
    ],
)
def test_prepare_noiseless(n, i, target, u_length, v_length):
    code = qpolar.Q1Code(n, i)
    outcome = qpolar.prepare_noiseless(code, target, 1)
    assert outcome.accepted
    assert outcome.u.shape == (u_length,)
    assert outcome.v.shape == (v_length,)
    assert not outcome.frame.e_x.any()
    assert not outcome.frame.e_z.any()
    assert outcome.fault_count == 0
    if target == "zero":
        assert outcome.logical_value == outcome.u[-1]
    elif target == "plus":
        assert outcome.logical_value == outcome.v[0]
    else:
        assert outcome.logical_value is None


def test_prepare_noiseless_logical_values():
    # Logical Z preparations always hold value 0,
    # logical X preparations report a uniformly random sign
    code = qpolar.Q1Code(4, 7)
    noise = qpolar.NoiseModel(0.0)
    zero = qpolar.prepare_batch(code, "zero", noise, 4000, 1)
    assert zero.accepted.all()
    assert not zero.logical_value.any()
    plus = qpolar.prepare_batch(code, "plus", noise, 4000, 1)
    assert plus.accepted.all()
    assert 0.45 < plus.logical_value.mean() < 0.55


@pytest.mark.parametrize(
    "n, i, target, expected",
    [
        (4, 4, "zero", 2),
        (6, 8, "zero", 3),
        (6, 8, "plus", 0),
        (4, 7, "zero", 0),
        (4, 7, "plus", 1),
        (4, 16, "zero", 4),
        (2, 1, "zero", 0),
    ],
)
def test_leading_zz_levels_skippable(n, i, target, expected):
    code = qpolar.Q1Code(n, i)
    assert qpolar.leading_zz_levels_skippable(code, target) == expected
    batch = qpolar.prepare_batch(code, target, qpolar.NoiseModel(0.01), 10, 1)
    assert batch.levels_skipped == expected
    assert batch.component_count == qpolar.component_count(code, expected)


@pytest.mark.parametrize(
    "n, skipped, expected",
    [
        (4, 0, 144),
        (4, 1, 112),
        (6, 0, 832),
        (1, 0, 6),
    ],
)
def test_component_count(n, skipped, expected):
    assert qpolar.component_count(qpolar.Q1Code(n, 1), skipped) == expected


@pytest.mark.parametrize("target", ["zero", "plus"])
def test_prep_rate_noiseless(target):
    rate = qpolar.estimate_prep_rate(
        qpolar.Q1Code(4, 7),
        target,
        qpolar.NoiseModel(0.0),
        1000,
        batch_size=300,
    )
    assert rate.p_prep == 1.0
    assert rate.accepted == rate.attempts == 1000
    assert rate.mean_weight_x == 0
    assert rate.mean_weight_z == 0
    assert rate.ci_high == 1.0
    assert rate.ci_low < 1.0


def test_prep_rate_full_noise():
    rate = qpolar.estimate_prep_rate(
        qpolar.Q1Code(4, 7),
        "zero",
        qpolar.NoiseModel(0.5),
        500,
    )
    assert rate.p_prep < 0.1


def test_prep_rate_determinism():
    code = qpolar.Q1Code(4, 7)
    noise = qpolar.NoiseModel(0.01)
    first = qpolar.estimate_prep_rate(code, "zero", noise, 2000, 7, batch_size=500)
    second = qpolar.estimate_prep_rate(
        code,
        "zero",
        noise,
        2000,
        7,
        batch_size=500,
        num_workers=4,
    )
    assert first == second
    other = qpolar.estimate_prep_rate(code, "zero", noise, 2000, 8, batch_size=500)
    assert other != first


def test_prep_rate_error():
    with pytest.raises(ValueError, match="attempts"):
        qpolar.estimate_prep_rate(
            qpolar.Q1Code(2, 2), "zero", qpolar.NoiseModel(0.1), 0
        )
    with pytest.raises(ValueError, match="target"):
        qpolar.estimate_prep_rate(
            qpolar.Q1Code(2, 2), "minus", qpolar.NoiseModel(0.1), 10
        )
    with pytest.raises(ValueError):
        qpolar.NoiseModel(1.5)


@pytest.mark.slow
@pytest.mark.parametrize(
    "n, i, expected",
    [
        (4, 7, 0.88),
        (6, 23, 0.47),
    ],
)
def test_prep_rate_reference(n, i, expected):
    code = qpolar.Q1Code(n, i)
    rates = [
        qpolar.estimate_prep_rate(code, target, qpolar.NoiseModel(1e-3), 10**5).p_prep
        for target in ["zero", "plus"]
    ]
    assert min(abs(rate - expected) for rate in rates) < 0.03


@pytest.mark.parametrize(
    "n, i, p",
    [
        (3, 3, 0.05),
        (4, 7, 1e-2),
        (4, 8, 1e-2),
        (5, 12, 1e-2),
    ],
)
@pytest.mark.parametrize("target", ["zero", "plus", "generic"])
def test_weight_bound(n, i, p, target):
    code = qpolar.Q1Code(n, i)
    batch = qpolar.prepare_batch(
        code,
        target,
        qpolar.NoiseModel(p),
        2000,
        n * i,
        check_bound=True,
    )
    accepted = batch.select(batch.accepted)
    assert np.all(qpolar.weight(accepted.e_x) <= accepted.fault_count)
    assert np.all(qpolar.weight(accepted.e_z) <= accepted.fault_count)


@pytest.mark.slow
@pytest.mark.parametrize(
    "n, i, p",
    [(4, 7, 1e-2), (6, 23, 3e-3)],
)
@pytest.mark.parametrize("target", ["zero", "plus"])
def test_weight_bound_long(n, i, p, target):
    code = qpolar.Q1Code(n, i)
    batch, _ = qpolar.sample_accepted(
        code,
        target,
        qpolar.NoiseModel(p),
        10**4,
        1,
        batch_size=10**4,
    )
    assert np.all(qpolar.weight(batch.e_x) <= batch.fault_count)
    assert np.all(qpolar.weight(batch.e_z) <= batch.fault_count)


def test_weight_bound_noiseless():
    # Without any fault every frame has to be empty,
    # which the bound check confirms
    batch = qpolar.prepare_batch(
        qpolar.Q1Code(3, 3),
        "zero",
        qpolar.NoiseModel(0.0),
        10,
        1,
        check_bound=True,
    )
    assert batch.accepted.all()
    assert not batch.fault_count.any()


def test_injected_init_fault():
    code = qpolar.Q1Code(2, 4)
    fault = qpolar.Fault(0, 0, 0, "init", 1)
    noise = qpolar.NoiseModel(0.0)
    # The first Z⊗Z level detects the X error
    outcome = qpolar.prepare_noisy(
        code, "zero", noise, 1, faults=[fault], skip_levels=False
    )
    assert not outcome.accepted
    assert outcome.fault_count == 1
    assert outcome.frame is None
    # Skipping the Z⊗Z levels leaves the error undetected
    outcome = qpolar.prepare_noisy(code, "zero", noise, 1, faults=[fault])
    assert outcome.accepted
    assert outcome.frame.e_x.tolist() == [1, 0, 0, 0]


def test_undetected_data_error_is_tracked():
    # Z on the first data qubit after the last CNOT of a Z⊗Z level
    code = qpolar.Q1Code(1, 2)
    fault = qpolar.Fault(1, 0, 0, "cnot1", 12)
    outcome = qpolar.prepare_noisy(
        code,
        "zero",
        qpolar.NoiseModel(0.0),
        1,
        faults=[fault],
        skip_levels=False,
    )
    assert outcome.accepted
    assert outcome.frame.e_z.tolist() == [1, 0]
    assert not outcome.frame.e_x.any()


@pytest.mark.parametrize(
    "fault, skip_levels, match",
    [
        ((1, 0, 0, "measure", 1), True, "skipped"),
        ((3, 0, 0, "measure", 1), False, "exceeds"),
        ((1, 2, 0, "measure", 1), False, "out of range"),
    ],
)
def test_injected_fault_error(fault, skip_levels, match):
    with pytest.raises(ValueError, match=match):
        qpolar.prepare_noisy(
            qpolar.Q1Code(2, 4),
            "zero",
            qpolar.NoiseModel(0.0),
            faults=[qpolar.Fault(*fault)],
            skip_levels=skip_levels,
        )


@pytest.mark.parametrize(
    "fault",
    [
        (1, 0, 0, "init", 1),
        (0, 0, 0, "measure", 1),
        (1, 0, 0, "gate", 1),
        (1, 0, 0, "cnot1", 16),
        (1, 0, 0, "ancilla", 4),
        (1, 0, 0, "ancilla", 0),
    ],
)
def test_fault_validation(fault):
    with pytest.raises(ValueError):
        qpolar.Fault(*fault)


def test_outcomes_need_all_levels():
    code = qpolar.Q1Code(2, 4)
    outcomes = [np.zeros((2, 1)), np.zeros((1, 2))]
    with pytest.raises(ValueError, match="skip_levels"):
        qpolar.prepare_noisy(code, "zero", qpolar.NoiseModel(0.0), outcomes=outcomes)
    with pytest.raises(ValueError, match="shape"):
        qpolar.prepare_noisy(
            code,
            "zero",
            qpolar.NoiseModel(0.0),
            outcomes=[np.zeros((1, 2)), np.zeros((1, 2))],
            skip_levels=False,
        )


@pytest.mark.parametrize("target", ["zero", "plus"])
def test_sample_accepted(target):
    code = qpolar.Q1Code(4, 7)
    batch, attempts = qpolar.sample_accepted(
        code,
        target,
        qpolar.NoiseModel(0.02),
        300,
        1,
        batch_size=100,
    )
    assert len(batch) == 300
    assert batch.accepted.all()
    assert attempts >= 300
    assert batch.logical_value.shape == (300,)
    single = batch.outcome(0)
    assert single.accepted
    assert_array_equal(single.frame.e_x, batch.e_x[0])


def test_sample_accepted_error():
    with pytest.raises(ValueError, match="count"):
        qpolar.sample_accepted(qpolar.Q1Code(2, 2), "zero", qpolar.NoiseModel(0.0), 0)


def test_rejected_outcome():
    batch = qpolar.prepare_batch(
        qpolar.Q1Code(4, 7),
        "zero",
        qpolar.NoiseModel(0.3),
        200,
        1,
    )
    rows = np.flatnonzero(~batch.accepted)
    assert len(rows) > 0
    outcome = batch.outcome(int(rows[0]))
    assert outcome.u is None
    assert outcome.v is None
    assert outcome.logical_value is None
