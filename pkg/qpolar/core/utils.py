from __future__ import annotations

import math
import zlib

import numpy as np


CHANNELS = ["depolarizing", "erasure"]
r"""Channels supported by code construction."""

FAMILIES = ["q1", "shor"]
r"""Code families.

``"q1"`` searches all information positions,
``"shor"`` only powers of two.

"""

MODES = ["ignore-corr", "use-corr"]
r"""Construction modes for the depolarizing channel.

``"ignore-corr"`` treats X and Z errors as independent,
``"use-corr"`` extends the X-basis channel
by the knowledge of X errors.

"""

ORDERS = ["lsb", "msb"]
r"""Polarization orders of reliability profiles.

The order names the bit of the zero-based position index
that selects the first polarization step.
``"msb"`` is the order the successive cancellation decoder
of :func:`qpolar.sc_decode` follows
and the default of depolarizing profiles.
``"lsb"`` is its bit reversal
and the index convention of the erasure construction tables.

"""

TARGETS = ["zero", "plus", "generic"]
r"""Preparation targets.

``"zero"`` prepares a logical Z basis state,
``"plus"`` a logical X basis state,
``"generic"`` a CSS polar state without logical meaning.

"""

MAX_ORACLE_QUBITS = 8
r"""Maximum number of data qubits of the statevector oracle."""

ENUMERATION_BUDGET = 2**20
r"""Maximum number of coset words enumerated by brute force."""


class ResourceBoundError(RuntimeError):
    r"""Computation exceeds a configured resource bound."""


def option_error(name: str, value: object, options: list[str]) -> Exception:
    r"""Unknown option error message.

    Args:
        name: name of argument
        value: given value
        options: supported values

    Returns:
        error message

    """
    return ValueError(f"'{name}' has to be one of {options}, not '{value}'.")


def position_error(position: int, size: int) -> Exception:
    r"""Position out of range error message.

    Args:
        position: one-based position
        size: number of positions

    Returns:
        error message

    """
    return ValueError(f"Position {position} is out of range [1, {size}].")


def power_of_two_error(length: int) -> Exception:
    r"""Length not a power of two error message.

    Args:
        length: given length

    Returns:
        error message

    """
    return ValueError(f"Length has to be a power of two, not {length}.")


def probability_error(name: str, value: float) -> Exception:
    r"""Invalid probability error message.

    Args:
        name: name of probability
        value: given value

    Returns:
        error message

    """
    return ValueError(f"'{name}' has to be a probability in [0, 1], not {value}.")


def resource_bound_error(what: str, size: int, limit: int) -> Exception:
    r"""Resource bound error message.

    Args:
        what: description of the exceeded resource
        size: requested size
        limit: allowed maximum

    Returns:
        error message

    """
    return ResourceBoundError(
        f"{what} of {size} exceeds the limit of {limit}.\n"
        "Please use a smaller code or a different method."
    )


def check_option(name: str, value: str, options: list[str]) -> str:
    r"""Raise error if value is not a supported option."""
    if value not in options:
        raise option_error(name, value, options)
    return value


def check_position(position: int, size: int) -> int:
    r"""Raise error if one-based position is out of range."""
    if not 1 <= position <= size:
        raise position_error(position, size)
    return int(position)


def check_probability(name: str, value: float) -> float:
    r"""Raise error if value is not a probability."""
    if not 0 <= value <= 1:
        raise probability_error(name, value)
    return float(value)


def log2_length(length: int) -> int:
    r"""Recursion depth of a vector length.

    Args:
        length: vector length

    Returns:
        ``n`` with ``length == 2**n``

    Raises:
        ValueError: if ``length`` is not a power of two

    Examples:
        >>> log2_length(8)
        3

    """
    if length < 1 or length & (length - 1):
        raise power_of_two_error(length)
    return length.bit_length() - 1


def rng_stream(
    seed: int,
    name: str,
    index: int = 0,
) -> np.random.Generator:
    r"""Random generator of a named and indexed substream.

    The stream only depends on ``seed``, ``name``, and ``index``,
    which makes results independent
    of the order in which shards are executed.

    Args:
        seed: master seed
        name: substream name, e.g. ``"prep"``
        index: shard or batch index

    Returns:
        random generator

    Examples:
        >>> a = rng_stream(1, "prep", 3).integers(1000)
        >>> b = rng_stream(1, "prep", 3).integers(1000)
        >>> bool(a == b)
        True

    """
    key = zlib.crc32(name.encode())
    sequence = np.random.SeedSequence(seed, spawn_key=(key, index))
    return np.random.default_rng(sequence)


def wilson_interval(
    successes: int,
    trials: int,
    z: float = 1.96,
) -> tuple[float, float]:
    r"""Wilson score interval of a binomial proportion.

    Args:
        successes: number of successes
        trials: number of trials
        z: quantile of the standard normal distribution

    Returns:
        lower and upper bound

    Examples:
        >>> lo, hi = wilson_interval(50, 100)
        >>> round(lo, 3), round(hi, 3)
        (0.404, 0.596)

    """
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denominator = 1 + z**2 / trials
    center = (phat + z**2 / (2 * trials)) / denominator
    margin = (
        z * math.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2)) / denominator
    )
    return max(0.0, center - margin), min(1.0, center + margin)
