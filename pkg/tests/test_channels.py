import math

import pytest

import qpolar
from qpolar.core.channels import llr_magnitude


@pytest.mark.parametrize("p", [0.0, 1e-3, 0.1, 0.75])
def test_depolarizing(p):
    channel = qpolar.depolarizing(p)
    assert channel.p_x == channel.p_y == channel.p_z == p / 3
    assert qpolar.induced_z_channel(channel).crossover == pytest.approx(2 * p / 3)
    assert qpolar.induced_x_channel(channel).crossover == pytest.approx(2 * p / 3)


@pytest.mark.parametrize("p", [-0.1, 1.1])
def test_depolarizing_error(p):
    with pytest.raises(ValueError):
        qpolar.depolarizing(p)


@pytest.mark.parametrize(
    "probabilities",
    [
        (0.5, 0.5, 0.5, 0.0),
        (0.9, 0.1, -0.1, 0.1),
    ],
)
def test_pauli_channel_error(probabilities):
    with pytest.raises(ValueError):
        qpolar.PauliChannel(*probabilities)


@pytest.mark.parametrize(
    "channel, expected_z, expected_x",
    [
        (qpolar.PauliChannel(0.7, 0.1, 0.05, 0.15), 0.15, 0.2),
        (qpolar.PauliChannel(0.9, 0.1, 0.0, 0.0), 0.1, 0.0),
        (qpolar.PauliChannel(0.9, 0.0, 0.0, 0.1), 0.0, 0.1),
    ],
)
def test_induced_channels(channel, expected_z, expected_x):
    assert qpolar.induced_z_channel(channel).crossover == pytest.approx(expected_z)
    assert qpolar.induced_x_channel(channel).crossover == pytest.approx(expected_x)


@pytest.mark.parametrize("p", [1e-3, 0.03, 0.3])
def test_extended_x_channel(p):
    channel = qpolar.depolarizing(p)
    mixture = qpolar.extended_x_channel(channel)
    (w0, q0), (w1, q1) = mixture.components
    assert w0 == pytest.approx(1 - 2 * p / 3)
    assert q0 == pytest.approx((p / 3) / (1 - 2 * p / 3))
    assert w1 == pytest.approx(2 * p / 3)
    assert q1 == pytest.approx(0.5)
    # Marginal equals the plain X basis channel
    assert mixture.crossover == pytest.approx(
        qpolar.induced_x_channel(channel).crossover
    )


def test_bsc_channel():
    assert qpolar.BscChannel(0.2).components == ((1.0, 0.2),)
    with pytest.raises(ValueError, match=r"\[0, 0.5\]"):
        qpolar.BscChannel(0.6)
    with pytest.raises(ValueError):
        qpolar.BscChannel(-0.1)


@pytest.mark.parametrize(
    "components",
    [
        ((0.5, 0.1), (0.4, 0.2)),
        ((1.2, 0.1),),
        ((1.0, 1.5),),
    ],
)
def test_bsc_mixture_error(components):
    with pytest.raises(ValueError):
        qpolar.BscMixture(components)


def test_bsc_mixture():
    mixture = qpolar.BscMixture([(0.75, 0.0), (0.25, 0.4)])
    assert mixture.components == ((0.75, 0.0), (0.25, 0.4))
    assert mixture.crossover == pytest.approx(0.1)


@pytest.mark.parametrize("epsilon", [0.0, 0.5, 1.0])
def test_erasure_channel(epsilon):
    assert qpolar.ErasureChannel(epsilon).epsilon == epsilon


def test_erasure_channel_error():
    with pytest.raises(ValueError):
        qpolar.ErasureChannel(1.5)


@pytest.mark.parametrize(
    "crossover, expected",
    [
        (0.5, 0.0),
        (0.1, math.log(9)),
        (0.9, math.log(9)),
    ],
)
def test_llr_magnitude(crossover, expected):
    assert llr_magnitude(crossover) == pytest.approx(expected)


def test_llr_magnitude_finite():
    assert math.isfinite(llr_magnitude(0.0))
