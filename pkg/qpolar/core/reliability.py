"""Reliabilities of the virtual channels of polar codes."""

from __future__ import annotations

import dataclasses
import logging

import numpy as np
import pandas as pd

import audeer

from qpolar.core.channels import BscChannel
from qpolar.core.channels import BscMixture
from qpolar.core.channels import depolarizing
from qpolar.core.channels import extended_x_channel
from qpolar.core.channels import induced_x_channel
from qpolar.core.channels import induced_z_channel
from qpolar.core.channels import llr_magnitude
from qpolar.core.utils import CHANNELS
from qpolar.core.utils import MODES
from qpolar.core.utils import ORDERS
from qpolar.core.utils import check_option
from qpolar.core.utils import check_position
from qpolar.core.utils import check_probability
from qpolar.core.utils import rng_stream


logger = logging.getLogger(__name__)

METHODS = ["lattice", "population"]
r"""Density evolution methods.

``"lattice"`` propagates the exact densities
of the integer-valued min-sum messages,
``"population"`` propagates sampled populations.

"""


@dataclasses.dataclass(frozen=True)
class DePopulation:
    r"""Settings of population density evolution.

    The population is split into ``shards``
    independent sub-populations
    with their own random streams,
    so results do not depend on the number of workers.

    """

    population_size: int = 10**6
    rng_seed: int = 1
    shards: int = 8

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("'population_size' has to be at least 1.")
        if self.shards < 1:
            raise ValueError("'shards' has to be at least 1.")


@dataclasses.dataclass
class ReliabilityProfile:
    r"""Error probabilities of the virtual channels.

    ``pe_z[j - 1]`` is the error probability of input ``j``
    of the Z basis code (transform :math:`P_N`),
    ``pe_x[j - 1]`` the one of input ``j``
    of the X basis code in reversed qubit order
    (transform :math:`P_N^T` read through :math:`\pi(i) = N + 1 - i`).

    ``log_pe_z`` and ``log_pe_x`` hold the natural logarithms.
    They default to the logarithms of ``pe_z`` and ``pe_x``
    and are given explicitly
    when probabilities underflow in double precision.

    Raises:
        ValueError: if the arrays do not have length ``2**n``
            or contain values outside ``[0, 1]``

    """

    n: int
    pe_z: np.ndarray
    pe_x: np.ndarray
    log_pe_z: np.ndarray = None
    log_pe_x: np.ndarray = None

    def __post_init__(self):
        self.pe_z = np.asarray(self.pe_z, dtype=float)
        self.pe_x = np.asarray(self.pe_x, dtype=float)
        for name in ["pe_z", "pe_x"]:
            values = getattr(self, name)
            if values.shape != (2**self.n,):
                raise ValueError(f"'{name}' has to have length {2**self.n}.")
            if values.size and (values.min() < 0 or values.max() > 1):
                raise ValueError(f"'{name}' has to contain probabilities.")
            log_name = f"log_{name}"
            log_values = getattr(self, log_name)
            if log_values is None:
                with np.errstate(divide="ignore"):
                    log_values = np.log(values)
            log_values = np.asarray(log_values, dtype=float)
            if log_values.shape != values.shape:
                raise ValueError(f"'{log_name}' has to have length {2**self.n}.")
            setattr(self, log_name, log_values)

    @property
    def length(self) -> int:
        r"""Code length :math:`N`."""
        return 2**self.n

    def position_ler(self) -> np.ndarray:
        r"""Logical error probability for every information position."""
        return combine_errors(self.pe_z, self.pe_x[::-1])

    def position_log_ler(self) -> np.ndarray:
        r"""Natural logarithm of :meth:`position_ler`.

        Stays finite and ordered
        where :meth:`position_ler` underflows to zero.

        Examples:
            >>> profile = ReliabilityProfile(1, [0.1, 0.0], [0.0, 0.2])
            >>> np.exp(profile.position_log_ler()).round(12).tolist()
            [0.28, 0.0]

        """
        return combine_log_errors(self.log_pe_z, self.log_pe_x[::-1])

    def to_frame(self) -> pd.DataFrame:
        r"""Table with one row per position.

        Returns:
            table with columns
            ``position``, ``pe_z``, ``pe_x_at_pi``

        """
        return pd.DataFrame(
            {
                "position": np.arange(1, self.length + 1),
                "pe_z": self.pe_z,
                "pe_x_at_pi": self.pe_x[::-1],
            }
        )


def bec_reliabilities(
    n: int,
    epsilon: float,
    *,
    order: str = "lsb",
) -> np.ndarray:
    r"""Erasure probabilities of the virtual channels.

    Each polarization step maps an erasure probability :math:`z`
    to :math:`2z - z^2` (minus channel)
    and :math:`z^2` (plus channel).

    Args:
        n: recursion depth
        epsilon: erasure probability
        order: polarization order, see :data:`qpolar.core.utils.ORDERS`

    Returns:
        erasure probability per position

    Raises:
        ValueError: if ``epsilon`` is not a probability
            or ``order`` is not supported

    Examples:
        >>> bec_reliabilities(1, 0.5).tolist()
        [0.75, 0.25]
        >>> bec_reliabilities(2, 0.5).tolist()
        [0.9375, 0.4375, 0.5625, 0.0625]

    """
    check_probability("epsilon", epsilon)
    check_option("order", order, ORDERS)
    z = np.array([epsilon], dtype=float)
    for _ in range(n):
        z = _polarize(2 * z - z**2, z**2, order)
    return z


def bec_log_reliabilities(
    n: int,
    epsilon: float,
    *,
    order: str = "lsb",
) -> np.ndarray:
    r"""Natural logarithms of the erasure probabilities.

    The recursion of :func:`bec_reliabilities`
    is evaluated on :math:`\log z`:
    the minus channel adds :math:`\log(2 - z)`
    and the plus channel doubles :math:`\log z`.
    Erasure probabilities below the smallest double
    keep a finite logarithm.

    Args:
        n: recursion depth
        epsilon: erasure probability
        order: polarization order, see :data:`qpolar.core.utils.ORDERS`

    Returns:
        logarithm of the erasure probability per position

    Raises:
        ValueError: if ``epsilon`` is not a probability
            or ``order`` is not supported

    Examples:
        >>> log_z = bec_log_reliabilities(12, 1e-3)
        >>> bool(np.isfinite(log_z).all())
        True
        >>> bool((bec_reliabilities(12, 1e-3) == 0).any())
        True

    """
    check_probability("epsilon", epsilon)
    check_option("order", order, ORDERS)
    with np.errstate(divide="ignore"):
        log_z = np.log(np.array([epsilon], dtype=float))
    for _ in range(n):
        # log(2 - z) = log1p(1 - z)
        minus = log_z + np.log1p(-np.expm1(log_z))
        log_z = _polarize(minus, 2 * log_z, order)
    return log_z


def bsc_reliabilities_de(
    n: int,
    channel: BscChannel | BscMixture,
    population: DePopulation = None,
    *,
    order: str = "lsb",
    num_workers: int = 1,
    stream: str = "de",
) -> np.ndarray:
    r"""Error probabilities of min-sum decoding by population dynamics.

    A population of channel LLRs,
    conditioned on the all-zero input,
    is propagated through the polarization tree.
    Minus steps combine two samples
    by sign product and minimum magnitude,
    plus steps add them.
    The error probability of a position
    is the fraction of negative LLRs
    plus half the fraction of zeros.

    Mixture channels use the LLR magnitude of the known component,
    a BSC uses magnitude 1 as the min-sum decoder does.

    Args:
        n: recursion depth
        channel: BSC or mixture of BSCs
        population: population settings
        order: polarization order, see :data:`qpolar.core.utils.ORDERS`
        num_workers: number of parallel jobs
        stream: name of random substream

    Returns:
        estimated error probability per position

    Raises:
        ValueError: if ``order`` is not supported

    Examples:
        >>> pe = bsc_reliabilities_de(2, BscChannel(0.0), DePopulation(1000))
        >>> pe.tolist()
        [0.0, 0.0, 0.0, 0.0]

    """
    check_option("order", order, ORDERS)
    population = population or DePopulation()
    sizes = np.full(population.shards, population.population_size // population.shards)
    sizes[: population.population_size % population.shards] += 1
    params = [
        ([n, channel, int(size), population.rng_seed, shard, order, stream], {})
        for shard, size in enumerate(sizes)
        if size > 0
    ]
    logger.debug(
        "Population density evolution, n=%d, %d samples in %d shards",
        n,
        population.population_size,
        len(params),
    )
    errors = audeer.run_tasks(
        _population_shard,
        params,
        num_workers=num_workers,
    )
    return np.sum(errors, axis=0) / population.population_size


def lattice_position_error(
    n: int,
    channel: BscChannel | BscMixture,
    position: int,
    *,
    order: str = "msb",
) -> float:
    r"""Exact min-sum error probability of a single position.

    Only the densities along the path of ``position``
    through the polarization tree are computed.

    Args:
        n: recursion depth
        channel: BSC or mixture with a single non-zero LLR magnitude
        position: one-based position
        order: polarization order, see :data:`qpolar.core.utils.ORDERS`

    Returns:
        error probability with ties counted half

    Raises:
        ValueError: if ``position`` is out of range,
            ``order`` is not supported,
            or the channel has several non-zero LLR magnitudes

    Examples:
        >>> round(lattice_position_error(1, BscChannel(0.1), 2), 6)
        0.1

    """
    check_position(position, 2**n)
    check_option("order", order, ORDERS)
    density = _lattice_input(channel)
    for depth in range(n):
        if _step_is_plus(position - 1, depth, n, order):
            density = _lattice_plus(density)
        else:
            density = _lattice_minus(density)
    return _lattice_error(density)


def lattice_reliabilities(
    n: int,
    channel: BscChannel | BscMixture,
    *,
    order: str = "lsb",
) -> np.ndarray:
    r"""Exact min-sum error probabilities of all positions.

    Min-sum decoding with inputs :math:`\pm 1`
    only produces integer LLRs,
    so the message densities live on the integer lattice
    and can be propagated without sampling:
    plus steps convolve densities,
    minus steps follow from their tails.

    Args:
        n: recursion depth
        channel: BSC or mixture with a single non-zero LLR magnitude
        order: polarization order, see :data:`qpolar.core.utils.ORDERS`

    Returns:
        error probability per position with ties counted half

    Raises:
        ValueError: if ``order`` is not supported
            or the channel has several non-zero LLR magnitudes

    Examples:
        >>> pe = lattice_reliabilities(1, BscChannel(0.1))
        >>> [round(p, 6) for p in pe]
        [0.18, 0.1]

    """
    check_option("order", order, ORDERS)
    errors = np.zeros(2**n)
    stack = [(_lattice_input(channel), 0, 0)]
    while stack:
        density, depth, path = stack.pop()
        if depth == n:
            errors[_leaf_index(path, n, order)] = _lattice_error(density)
            continue
        stack.append((_lattice_plus(density), depth + 1, path | (1 << depth)))
        stack.append((_lattice_minus(density), depth + 1, path))
    return errors


def q1_position_ler(profile: ReliabilityProfile, i: int) -> float:
    r"""Logical error probability of a Q1 code with information position i.

    :math:`P_e^L(i) = 1 - (1 - P_e(W_Z^{(i)}))(1 - P_e(W_X^{(\pi(i))}))`.

    Args:
        profile: reliability profile
        i: one-based information position

    Returns:
        logical error probability

    Raises:
        ValueError: if ``i`` is out of range

    Examples:
        >>> profile = ReliabilityProfile(1, [0.1, 0.0], [0.0, 0.2])
        >>> round(q1_position_ler(profile, 1), 12)
        0.28

    """
    check_position(i, profile.length)
    return float(combine_errors(profile.pe_z[i - 1], profile.pe_x[profile.length - i]))


def combine_errors(a: float | np.ndarray, b: float | np.ndarray) -> float | np.ndarray:
    r"""Probability that at least one of two independent events occurs.

    Evaluated as :math:`a + b - ab`,
    which keeps precision for tiny probabilities.

    Examples:
        >>> combine_errors(0.5, 0.5)
        0.75

    """
    return a + b - a * b


def combine_log_errors(
    log_a: float | np.ndarray,
    log_b: float | np.ndarray,
) -> float | np.ndarray:
    r"""Logarithm of :func:`combine_errors` from logarithmic inputs.

    Evaluated as :math:`\log(h + l(1 - h))`
    with :math:`h` the larger and :math:`l` the smaller probability,
    so the result is symmetric in its arguments.

    Examples:
        >>> round(float(np.exp(combine_log_errors(np.log(0.5), np.log(0.5)))), 12)
        0.75
        >>> float(combine_log_errors(-2000.0, -2000.0)) > -2000.0
        True

    """
    high = np.maximum(log_a, log_b)
    low = np.minimum(log_a, log_b)
    with np.errstate(divide="ignore"):
        return np.logaddexp(high, low + np.log1p(-np.exp(high)))


def reliability_profile(
    n: int,
    channel: str = "depolarizing",
    p: float = 1e-3,
    *,
    mode: str = "ignore-corr",
    method: str = "lattice",
    population: DePopulation = None,
    order: str = None,
    num_workers: int = 1,
) -> ReliabilityProfile:
    r"""Reliability profile for code construction.

    For the erasure channel both bases see an erasure channel
    with erasure probability ``p``.
    For the depolarizing channel the Z basis sees a BSC
    with crossover :math:`2p/3`.
    The X basis sees the same BSC (``mode="ignore-corr"``)
    or the mixture channel that knows about X errors
    (``mode="use-corr"``).
    If both bases see the same channel
    the X basis profile is a copy of the Z basis profile.

    Without an explicit ``order``
    depolarizing profiles follow the order of the
    successive cancellation decoder (``"msb"``)
    whose error probabilities they predict,
    erasure profiles follow the index convention
    of the published erasure tables (``"lsb"``).
    Erasure profiles carry logarithms
    that stay finite where probabilities underflow.

    Args:
        n: recursion depth
        channel: channel name, see :data:`qpolar.core.utils.CHANNELS`
        p: physical error or erasure probability
        mode: construction mode, see :data:`qpolar.core.utils.MODES`
        method: density evolution method, see :data:`METHODS`
        population: settings of population density evolution
        order: polarization order, see :data:`qpolar.core.utils.ORDERS`
        num_workers: number of parallel jobs

    Returns:
        reliability profile

    Raises:
        ValueError: if an option is not supported
            or ``p`` is not a probability

    Examples:
        >>> profile = reliability_profile(1, "erasure", 0.5)
        >>> profile.pe_z.tolist()
        [0.75, 0.25]

    """
    check_option("channel", channel, CHANNELS)
    check_option("mode", mode, MODES)
    check_option("method", method, METHODS)
    if order is None:
        order = "lsb" if channel == "erasure" else "msb"
    check_option("order", order, ORDERS)
    if channel == "erasure":
        pe = bec_reliabilities(n, p, order=order)
        log_pe = bec_log_reliabilities(n, p, order=order)
        return ReliabilityProfile(n, pe, pe.copy(), log_pe, log_pe.copy())

    pauli = depolarizing(p)
    z_channel = induced_z_channel(pauli)
    if mode == "ignore-corr":
        x_channel = induced_x_channel(pauli)
    else:
        x_channel = extended_x_channel(pauli)

    def evolve(ch, stream):
        if method == "lattice":
            return lattice_reliabilities(n, ch, order=order)
        return bsc_reliabilities_de(
            n,
            ch,
            population,
            order=order,
            num_workers=num_workers,
            stream=stream,
        )

    logger.info(
        "Reliability profile n=%d, p=%g, mode=%s, method=%s", n, p, mode, method
    )
    pe_z = evolve(z_channel, "de-z")
    if x_channel.components == z_channel.components:
        pe_x = pe_z.copy()
    else:
        pe_x = evolve(x_channel, "de-x")
    return ReliabilityProfile(n, np.clip(pe_z, 0, 1), np.clip(pe_x, 0, 1))


def _channel_llrs(
    channel: BscChannel | BscMixture,
) -> list[tuple[float, float, float]]:
    r"""Components as ``(weight, crossover, LLR magnitude)``."""
    components = channel.components
    if len(components) == 1:
        _, q = components[0]
        return [(1.0, min(q, 1 - q), 1.0)]
    return [(w, min(q, 1 - q), llr_magnitude(q)) for w, q in components]


def _lattice_error(density: np.ndarray) -> float:
    center = (len(density) - 1) // 2
    return float(density[:center].sum() + 0.5 * density[center])


def _lattice_input(channel: BscChannel | BscMixture) -> np.ndarray:
    r"""Input density on the lattice ``[-1, 0, 1]``."""
    components = _channel_llrs(channel)
    magnitudes = {round(m, 9) for _, _, m in components if m > 1e-12}
    if len(magnitudes) > 1:
        raise ValueError(
            "Lattice density evolution needs a single non-zero LLR magnitude, "
            "use the population method instead."
        )
    density = np.zeros(3)
    for w, q, m in components:
        if m > 1e-12:
            density[0] += w * q
            density[2] += w * (1 - q)
        else:
            density[1] += w
    return density


def _lattice_minus(density: np.ndarray) -> np.ndarray:
    r"""Density of sign product and minimum magnitude of two samples."""
    center = (len(density) - 1) // 2
    zero = density[center]
    pos = density[center + 1 :]
    neg = density[:center][::-1]
    # Mass strictly above each magnitude
    above_pos = np.append(np.cumsum(pos[::-1])[::-1][1:], 0.0)
    above_neg = np.append(np.cumsum(neg[::-1])[::-1][1:], 0.0)
    out = np.empty_like(density)
    out[center] = zero * (2 - zero)
    out[center + 1 :] = pos**2 + 2 * pos * above_pos + neg**2 + 2 * neg * above_neg
    out[:center] = (2 * (pos * neg + pos * above_neg + neg * above_pos))[::-1]
    return out


def _lattice_plus(density: np.ndarray) -> np.ndarray:
    r"""Density of the sum of two samples."""
    return np.convolve(density, density)


def _leaf_index(path: int, n: int, order: str) -> int:
    r"""Zero-based position of a path whose bit d is the step at depth d."""
    if order == "lsb":
        return path
    return int(format(path, f"0{n}b")[::-1], 2) if n else 0


def _polarize(minus: np.ndarray, plus: np.ndarray, order: str) -> np.ndarray:
    r"""Arrange the children of one polarization step."""
    if order == "lsb":
        return np.concatenate([minus, plus])
    return np.stack([minus, plus], axis=-1).reshape(-1)


def _population_shard(
    n: int,
    channel: BscChannel | BscMixture,
    size: int,
    seed: int,
    shard: int,
    order: str,
    stream: str,
) -> np.ndarray:
    rng = rng_stream(seed, stream, shard)
    components = _channel_llrs(channel)
    weights = np.array([w for w, _, _ in components])
    crossovers = np.array([q for _, q, _ in components])
    magnitudes = np.array([m for _, _, m in components])
    which = rng.choice(len(components), size=size, p=weights / weights.sum())
    flips = rng.random(size) < crossovers[which]
    llr = np.where(flips, -magnitudes[which], magnitudes[which])

    errors = np.zeros(2**n)
    stack = [(llr, 0, 0)]
    while stack:
        llr, depth, path = stack.pop()
        if depth == n:
            errors[_leaf_index(path, n, order)] = (
                np.count_nonzero(llr < 0) + 0.5 * np.count_nonzero(llr == 0)
            )
            continue
        a = llr[rng.permutation(size)]
        b = llr[rng.permutation(size)]
        stack.append((a + b, depth + 1, path | (1 << depth)))
        stack.append(
            (
                np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b)),
                depth + 1,
                path,
            )
        )
    return errors


def _step_is_plus(index: int, depth: int, n: int, order: str) -> bool:
    r"""Whether the polarization step at ``depth`` is a plus step."""
    bit = depth if order == "lsb" else n - 1 - depth
    return bool((index >> bit) & 1)
