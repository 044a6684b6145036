"""Pauli and erasure channels and their induced classical channels."""

from __future__ import annotations

import dataclasses
import math

from qpolar.core.utils import check_probability


TOLERANCE = 1e-12
r"""Absolute tolerance when checking probability sums."""


@dataclasses.dataclass(frozen=True)
class PauliChannel:
    r"""Single-qubit Pauli channel.

    Applies I, X, Y, Z with probabilities
    ``p_i``, ``p_x``, ``p_y``, ``p_z``.

    Raises:
        ValueError: if a probability is outside ``[0, 1]``
            or the probabilities do not sum to 1

    """

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        for name in ["p_i", "p_x", "p_y", "p_z"]:
            check_probability(name, getattr(self, name))
        total = self.p_i + self.p_x + self.p_y + self.p_z
        if abs(total - 1) > TOLERANCE:
            raise ValueError(f"Pauli probabilities have to sum to 1, not {total}.")


@dataclasses.dataclass(frozen=True)
class BscChannel:
    r"""Binary symmetric channel.

    Raises:
        ValueError: if ``crossover`` is outside ``[0, 0.5]``

    """

    crossover: float

    def __post_init__(self):
        check_probability("crossover", self.crossover)
        if self.crossover > 0.5:
            raise ValueError(
                f"'crossover' has to be in [0, 0.5], not {self.crossover}."
            )

    @property
    def components(self) -> tuple[tuple[float, float], ...]:
        r"""Single mixture component ``(1, crossover)``."""
        return ((1.0, self.crossover),)


@dataclasses.dataclass(frozen=True)
class BscMixture:
    r"""Mixture of binary symmetric channels.

    Each use of the channel picks component ``j``
    with probability ``weight_j``
    and flips the input with probability ``crossover_j``.
    The receiver knows which component was used.

    Args:
        components: sequence of ``(weight, crossover)``

    Raises:
        ValueError: if a value is outside ``[0, 1]``
            or the weights do not sum to 1

    """

    components: tuple[tuple[float, float], ...]

    def __post_init__(self):
        components = tuple((float(w), float(q)) for w, q in self.components)
        object.__setattr__(self, "components", components)
        for w, q in components:
            check_probability("weight", w)
            check_probability("crossover", q)
        total = sum(w for w, _ in components)
        if abs(total - 1) > TOLERANCE:
            raise ValueError(f"Mixture weights have to sum to 1, not {total}.")

    @property
    def crossover(self) -> float:
        r"""Marginal crossover probability."""
        return sum(w * q for w, q in self.components)


@dataclasses.dataclass(frozen=True)
class ErasureChannel:
    r"""Quantum erasure channel.

    Raises:
        ValueError: if ``epsilon`` is outside ``[0, 1]``

    """

    epsilon: float

    def __post_init__(self):
        check_probability("epsilon", self.epsilon)


def depolarizing(p: float) -> PauliChannel:
    r"""Depolarizing channel.

    Args:
        p: physical error probability

    Returns:
        channel with :math:`p_X = p_Y = p_Z = p / 3`

    Raises:
        ValueError: if ``p`` is outside ``[0, 1]``

    Examples:
        >>> depolarizing(0.0)
        PauliChannel(p_i=1.0, p_x=0.0, p_y=0.0, p_z=0.0)

    """
    p = check_probability("p", p)
    return PauliChannel(1 - p, p / 3, p / 3, p / 3)


def induced_z_channel(channel: PauliChannel) -> BscChannel:
    r"""Classical channel seen by Z basis decoding.

    X and Y errors flip Z basis measurement outcomes.

    Args:
        channel: Pauli channel

    Returns:
        BSC with crossover :math:`p_X + p_Y`

    Examples:
        >>> induced_z_channel(PauliChannel(0.7, 0.1, 0.05, 0.15)).crossover
        0.15000000000000002

    """
    return BscChannel(channel.p_x + channel.p_y)


def induced_x_channel(channel: PauliChannel) -> BscChannel:
    r"""Classical channel seen by X basis decoding.

    Z and Y errors flip X basis measurement outcomes.

    Args:
        channel: Pauli channel

    Returns:
        BSC with crossover :math:`p_Z + p_Y`

    """
    return BscChannel(channel.p_z + channel.p_y)


def extended_x_channel(channel: PauliChannel) -> BscMixture:
    r"""X basis channel extended by the knowledge of X errors.

    If it is known whether an X type error (X or Y) occurred,
    the X basis channel splits into two BSCs:
    without X error a Z flip happens
    with probability :math:`p_Z / (p_I + p_Z)`,
    with X error a Y happened
    with probability :math:`p_Y / (p_X + p_Y)`.
    Components of zero weight are dropped.

    Args:
        channel: Pauli channel

    Returns:
        mixture of BSCs

    Examples:
        >>> extended_x_channel(depolarizing(0.0)).components
        ((1.0, 0.0),)

    """
    components = []
    weight = channel.p_i + channel.p_z
    if weight > 0:
        components.append((weight, channel.p_z / weight))
    weight = channel.p_x + channel.p_y
    if weight > 0:
        components.append((weight, channel.p_y / weight))
    # Rescale against rounding of the weights
    total = sum(w for w, _ in components)
    return BscMixture(tuple((w / total, q) for w, q in components))


def llr_magnitude(crossover: float) -> float:
    r"""Log-likelihood ratio magnitude of a BSC.

    Crossovers above 1/2 are mirrored,
    a crossover of 0 is clipped to keep the value finite.

    Examples:
        >>> llr_magnitude(0.5)
        0.0

    """
    q = min(crossover, 1 - crossover)
    q = max(q, 1e-300)
    return math.log((1 - q) / q)
