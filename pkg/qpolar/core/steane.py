"""Steane error correction of Q1 codes."""

from __future__ import annotations

from collections.abc import Callable
from collections.abc import Sequence
import dataclasses
import functools
import logging
import math

import numpy as np

import audeer

from qpolar.core.channels import BscChannel
from qpolar.core.code import Q1Code
from qpolar.core.decoder import DecodeTask
from qpolar.core.decoder import SCDecoder
from qpolar.core.decoder import sc_decode
from qpolar.core.gf2 import polar_transform
from qpolar.core.gf2 import polar_transform_transpose
from qpolar.core.prep import NoiseModel
from qpolar.core.prep import estimate_prep_rate
from qpolar.core.prep import sample_accepted
from qpolar.core.reliability import combine_errors
from qpolar.core.reliability import lattice_position_error
from qpolar.core.utils import check_option
from qpolar.core.utils import rng_stream
from qpolar.core.utils import wilson_interval


logger = logging.getLogger(__name__)

BASES = ["x", "z"]
r"""Corrected error types.

``"x"`` corrects X errors of a logical Z state,
``"z"`` corrects Z errors of a logical X state.

"""

METHODS = ["mc", "de"]
r"""Logical error rate estimators."""


@dataclasses.dataclass
class EcTrialRecord:
    r"""Outcome of a single error correction trial.

    ``decode1_success`` tells if the syndrome decoder
    found the logical value of the ancilla,
    ``decode2_success`` if the readout decoder
    found the logical value it was given.
    The logical value is wrong
    if exactly one of them failed.

    """

    basis: str
    decode1_success: bool
    decode2_success: bool
    logical_error: bool


@dataclasses.dataclass
class EcTrials:
    r"""Outcomes of a batch of error correction trials."""

    basis: str
    decode1_success: np.ndarray
    decode2_success: np.ndarray
    logical_error: np.ndarray

    def __len__(self) -> int:
        r"""Number of trials."""
        return len(self.logical_error)

    def record(self, row: int) -> EcTrialRecord:
        r"""Single trial of the batch."""
        return EcTrialRecord(
            self.basis,
            bool(self.decode1_success[row]),
            bool(self.decode2_success[row]),
            bool(self.logical_error[row]),
        )


@dataclasses.dataclass
class LerEstimate:
    r"""Logical error rates of X and Z error correction.

    ``p_e_l`` combines both sides as
    :math:`P_X + P_Z - P_X P_Z`.
    A side is censored
    if it reached ``max_trials`` before ``failures_target`` failures,
    its rate is then the upper bound
    of the Wilson 95% interval.

    """

    p_x_l: float
    p_z_l: float
    trials_x: int
    trials_z: int
    failures_x: int
    failures_z: int
    failures_target: int
    method: str
    censored_x: bool = False
    censored_z: bool = False

    @property
    def censored(self) -> bool:
        r"""Whether one of the sides is censored."""
        return self.censored_x or self.censored_z

    @property
    def p_e_l(self) -> float:
        r"""Combined logical error rate."""
        return float(combine_errors(self.p_x_l, self.p_z_l))


def count_trials_until_failures(
    trial_batch: Callable[[int, np.random.Generator], np.ndarray],
    failures: int,
    max_trials: int,
    seed: int,
    stream: str,
    *,
    batch_size: int = 1000,
    num_workers: int = 1,
) -> tuple[int, int, bool]:
    r"""Run trials until a number of failures is reached.

    Trials are grouped in batches of ``batch_size``,
    batch ``b`` uses the random substream ``(seed, stream, b)``.
    Batches run in waves of ``num_workers``.
    Trials are ordered by batch and position within the batch,
    and the count stops at the trial with the requested failure,
    so the result does not depend on ``num_workers``.

    Args:
        trial_batch: function returning the failure flags
            of a batch of given size for a random generator
        failures: number of failures to observe
        max_trials: maximum number of trials
        seed: master seed
        stream: name of random substream
        batch_size: trials per batch
        num_workers: number of parallel jobs

    Returns:
        observed failures,
        number of trials,
        and whether ``max_trials`` was reached first

    Raises:
        ValueError: if ``failures`` is smaller than 1

    Examples:
        >>> def always(size, rng):
        ...     return np.ones(size, dtype=bool)
        >>> count_trials_until_failures(always, 3, 100, 1, "test")
        (3, 3, False)

    """
    if failures < 1:
        raise ValueError(f"'failures' has to be at least 1, not {failures}.")
    found = 0
    trials = 0
    index = 0
    while True:
        wave = []
        for _ in range(max(num_workers, 1)):
            start = index * batch_size
            if start >= max_trials:
                break
            size = min(batch_size, max_trials - start)
            wave.append(([trial_batch, size, seed, stream, index], {}))
            index += 1
        if not wave:
            return found, trials, True
        results = audeer.run_tasks(_failure_batch, wave, num_workers=num_workers)
        for outcome in results:
            positions = np.flatnonzero(outcome)
            needed = failures - found
            if len(positions) >= needed:
                return failures, trials + int(positions[needed - 1]) + 1, False
            found += len(positions)
            trials += len(outcome)


def ec_trials(
    code: Q1Code,
    noise: NoiseModel,
    size: int,
    seed: int | np.random.Generator = None,
    basis: str = "x",
) -> EcTrials:
    r"""Batch of Steane error correction trials.

    For ``basis="x"`` a logical Z state of the data
    and a logical X state of the ancilla
    are prepared until accepted.
    After a transversal CNOT from data to ancilla
    the ancilla is measured in the Z basis,
    which gives a noisy random codeword
    with frozen values :math:`u \oplus u'`
    on the positions :math:`1, \dots, i - 1`.
    The syndrome decoder estimates its logical value :math:`\hat{a}'`,
    the data frame is corrected by
    :math:`\hat{e} = m \oplus P_N(u \oplus u', \hat{a}', 0)`,
    and the data is read out in the Z basis
    and decoded with its frozen values :math:`u`.
    CNOT errors on the data stay in its frame.

    ``basis="z"`` is the mirror image
    with a logical X state of the data,
    a logical Z state of the ancilla,
    a transversal CNOT from ancilla to data,
    X basis measurements,
    and decoding of :math:`P_N^T` codewords
    with the frozen positions :math:`i + 1, \dots, N`.

    Args:
        code: Q1 code with ``i`` of at least 2
        noise: noise model of all components
        size: number of trials
        seed: seed or random generator
        basis: see :data:`BASES`

    Returns:
        trial outcomes

    Raises:
        ValueError: if ``basis`` is not supported or ``code.i`` is 1

    """
    check_option("basis", basis, BASES)
    rng = np.random.default_rng(seed)
    if basis == "x":
        return _x_trials(code, noise, size, rng)
    return _z_trials(code, noise, size, rng)


def estimate_ler_de(
    code: Q1Code,
    noise: NoiseModel,
    runs: int = None,
    seed: int = 1,
    *,
    num_workers: int = 1,
) -> LerEstimate:
    r"""Logical error rate from density evolution.

    First the mean per-qubit X and Z error rates
    of accepted logical Z and logical X preparations
    are measured with ``runs`` attempts each.
    For X correction with data error rate :math:`p_X`
    and ancilla error rate :math:`p'_X`
    the decoders see the crossover probabilities

    .. math::

        p_1 = 1 - (1 - p_X) (1 - p'_X) (1 - 8p/15) (1 - p)

        p_2 = 1 - (1 - p'_X) (1 - 8p/15) (1 - p)^2

    where the second assumes the first decoder succeeded.
    The min-sum error probabilities :math:`o_1, o_2`
    of the information position
    follow from exact lattice density evolution,
    and :math:`P_X = o_1 + o_2 - 2 o_1 o_2`.
    Z correction is handled the same way
    with the Z error rates and reversed positions.

    Args:
        code: Q1 code with ``i`` of at least 2
        noise: noise model
        runs: preparation attempts per state,
            default ``ceil(100 / p)``
        seed: master seed
        num_workers: number of parallel jobs

    Returns:
        estimate with ``method="de"``

    Examples:
        >>> estimate_ler_de(Q1Code(2, 2), NoiseModel(0.0)).p_e_l
        0.0

    """
    p = noise.p
    if p == 0:
        return LerEstimate(0.0, 0.0, 0, 0, 0, 0, 0, "de")
    runs = runs or math.ceil(100 / p)
    rates = {}
    for target in ["zero", "plus"]:
        rate = estimate_prep_rate(
            code,
            target,
            noise,
            runs,
            seed,
            num_workers=num_workers,
            stream=f"de-prep-{target}",
        )
        rates[target] = (
            rate.mean_weight_x / code.length,
            rate.mean_weight_z / code.length,
        )
    cnot = 8 * p / 15
    sides = {}
    for basis, data, ancilla, position, part in [
        ("x", "zero", "plus", code.i, 0),
        ("z", "plus", "zero", code.length + 1 - code.i, 1),
    ]:
        p_data = rates[data][part]
        p_ancilla = rates[ancilla][part]
        p_in1 = 1 - (1 - p_data) * (1 - p_ancilla) * (1 - cnot) * (1 - p)
        p_in2 = 1 - (1 - p_ancilla) * (1 - cnot) * (1 - p) ** 2
        o1 = lattice_position_error(code.n, BscChannel(min(p_in1, 0.5)), position)
        o2 = lattice_position_error(code.n, BscChannel(min(p_in2, 0.5)), position)
        sides[basis] = o1 + o2 - 2 * o1 * o2
        logger.debug(
            "DE %s side: inputs %.3g, %.3g, outputs %.3g, %.3g",
            basis,
            p_in1,
            p_in2,
            o1,
            o2,
        )
    return LerEstimate(sides["x"], sides["z"], runs, runs, 0, 0, 0, "de")


def estimate_ler_mc(
    code: Q1Code,
    noise: NoiseModel,
    failures: int = 100,
    max_trials: int = 10**6,
    seed: int = 1,
    *,
    batch_size: int = 1000,
    num_workers: int = 1,
) -> LerEstimate:
    r"""Logical error rate from Monte-Carlo simulation.

    X and Z correction trials run independently
    until ``failures`` logical errors are observed
    after :math:`R` trials,
    which gives the rate :math:`f / R` per side.

    Args:
        code: Q1 code with ``i`` of at least 2
        noise: noise model
        failures: failure target :math:`f`
        max_trials: maximum number of trials per side
        seed: master seed
        batch_size: trials per batch
        num_workers: number of parallel jobs

    Returns:
        estimate with ``method="mc"``

    Raises:
        ValueError: if ``failures`` is smaller than 1

    """
    counts = {}
    for basis in BASES:
        trial_batch = functools.partial(_trial_failures, code, noise, basis)
        found, trials, censored = count_trials_until_failures(
            trial_batch,
            failures,
            max_trials,
            seed,
            f"ec-{basis}",
            batch_size=batch_size,
            num_workers=num_workers,
        )
        if censored:
            rate = wilson_interval(found, trials)[1]
        else:
            rate = found / trials
        counts[basis] = (rate, trials, found, censored)
        logger.info(
            "MC %s side N=%d i=%d p=%g: %d failures in %d trials",
            basis,
            code.length,
            code.i,
            noise.p,
            found,
            trials,
        )
    return LerEstimate(
        counts["x"][0],
        counts["z"][0],
        counts["x"][1],
        counts["z"][1],
        counts["x"][2],
        counts["z"][2],
        failures,
        "mc",
        counts["x"][3],
        counts["z"][3],
    )


def mc_x_trial(
    code: Q1Code,
    noise: NoiseModel,
    seed: int | np.random.Generator = None,
) -> EcTrialRecord:
    r"""Single trial of X error correction.

    See :func:`ec_trials`.

    Examples:
        >>> mc_x_trial(Q1Code(2, 2), NoiseModel(0.0), 1).logical_error
        False

    """
    return ec_trials(code, noise, 1, seed, "x").record(0)


def mc_z_trial(
    code: Q1Code,
    noise: NoiseModel,
    seed: int | np.random.Generator = None,
) -> EcTrialRecord:
    r"""Single trial of Z error correction.

    See :func:`ec_trials`.

    Examples:
        >>> mc_z_trial(Q1Code(2, 2), NoiseModel(0.0), 1).logical_error
        False

    """
    return ec_trials(code, noise, 1, seed, "z").record(0)


def pseudothreshold(
    p: Sequence[float],
    ler: Sequence[float],
) -> float | None:
    r"""Physical error rate where the logical error rate crosses ``p``.

    Finds the first sign change of :math:`\log(P_L / p)`
    along increasing ``p``
    and interpolates linearly in :math:`\log p`.
    Points with a logical error rate of 0 are ignored.

    Args:
        p: physical error rates
        ler: logical error rates

    Returns:
        crossing point or ``None`` if the curves do not cross

    Examples:
        >>> pseudothreshold([1e-3, 1e-2], [1e-4, 1e-1])
        0.0031622776601683794

    """
    points = sorted((a, b) for a, b in zip(p, ler) if a > 0 and b > 0)
    if not points:
        return None
    log_p = np.log([a for a, _ in points])
    gap = np.log([b for _, b in points]) - log_p
    if gap[0] == 0:
        return float(points[0][0])
    for j in range(1, len(points)):
        if gap[j] == 0:
            return float(points[j][0])
        if np.sign(gap[j]) != np.sign(gap[j - 1]):
            t = gap[j - 1] / (gap[j - 1] - gap[j])
            return float(np.exp(log_p[j - 1] + t * (log_p[j] - log_p[j - 1])))
    return None


def _cnot_faults(
    rng: np.random.Generator,
    p: float,
    shape: tuple[int, int],
) -> tuple[np.ndarray, np.ndarray]:
    r"""Pauli codes on data and ancilla of transversal CNOTs."""
    codes = np.where(rng.random(shape) < p, rng.integers(1, 16, shape), 0)
    return codes // 4, codes % 4


def _failure_batch(
    trial_batch: Callable[[int, np.random.Generator], np.ndarray],
    size: int,
    seed: int,
    stream: str,
    index: int,
) -> np.ndarray:
    rng = rng_stream(seed, stream, index)
    return np.asarray(trial_batch(size, rng), dtype=bool)


def _llr(bits: np.ndarray) -> np.ndarray:
    r"""Min-sum LLRs :math:`(-1)^m`."""
    return 1.0 - 2.0 * bits


def _trial_failures(
    code: Q1Code,
    noise: NoiseModel,
    basis: str,
    size: int,
    rng: np.random.Generator,
) -> np.ndarray:
    return ec_trials(code, noise, size, rng, basis).logical_error


def _x_part(codes: np.ndarray) -> np.ndarray:
    return ((codes == 1) | (codes == 2)).astype(np.uint8)


def _z_part(codes: np.ndarray) -> np.ndarray:
    return ((codes == 2) | (codes == 3)).astype(np.uint8)


def _x_trials(
    code: Q1Code,
    noise: NoiseModel,
    size: int,
    rng: np.random.Generator,
) -> EcTrials:
    i, length = code.i, code.length
    data, _ = sample_accepted(code, "zero", noise, size, rng)
    ancilla, _ = sample_accepted(code, "plus", noise, size, rng)
    data_cnot, ancilla_cnot = _cnot_faults(rng, noise.p, (size, length))
    ancilla_measure = (rng.random((size, length)) < noise.p).astype(np.uint8)
    data_measure = (rng.random((size, length)) < noise.p).astype(np.uint8)

    frozen = data.u[:, : i - 1] ^ ancilla.u
    a = rng.integers(0, 2, (size, 1), dtype=np.uint8)
    x = rng.integers(0, 2, (size, length - i), dtype=np.uint8)
    m = polar_transform(np.concatenate([frozen, a, x], axis=-1))
    m ^= data.e_x ^ ancilla.e_x ^ _x_part(ancilla_cnot) ^ ancilla_measure
    frame = data.e_x ^ _x_part(data_cnot)

    decoder = SCDecoder(code.n, code.z_frozen)
    u_hat, _ = decoder.decode(_llr(m), frozen)
    a_hat = u_hat[:, i - 1 : i]
    zeros = np.zeros((size, length - i), dtype=np.uint8)
    frame ^= m ^ polar_transform(np.concatenate([frozen, a_hat, zeros], axis=-1))

    w = data.logical_value[:, None]
    x = rng.integers(0, 2, (size, length - i), dtype=np.uint8)
    readout = polar_transform(np.concatenate([data.u[:, : i - 1], w, x], axis=-1))
    readout ^= frame ^ data_measure
    w_hat = decoder.decode(_llr(readout), data.u[:, : i - 1])[0][:, i - 1 : i]
    return _records("x", a, a_hat, w, w_hat)


def _z_trials(
    code: Q1Code,
    noise: NoiseModel,
    size: int,
    rng: np.random.Generator,
) -> EcTrials:
    n, i, length = code.n, code.i, code.length
    data, _ = sample_accepted(code, "plus", noise, size, rng)
    ancilla, _ = sample_accepted(code, "zero", noise, size, rng)
    data_cnot, ancilla_cnot = _cnot_faults(rng, noise.p, (size, length))
    ancilla_measure = (rng.random((size, length)) < noise.p).astype(np.uint8)
    data_measure = (rng.random((size, length)) < noise.p).astype(np.uint8)

    frozen = data.v[:, 1:] ^ ancilla.v
    z = rng.integers(0, 2, (size, i - 1), dtype=np.uint8)
    a = rng.integers(0, 2, (size, 1), dtype=np.uint8)
    m = polar_transform_transpose(np.concatenate([z, a, frozen], axis=-1))
    m ^= data.e_z ^ ancilla.e_z ^ _z_part(ancilla_cnot) ^ ancilla_measure
    frame = data.e_z ^ _z_part(data_cnot)

    u_hat, _ = sc_decode(DecodeTask(n, code.x_frozen, frozen, _llr(m), "reversed"))
    a_hat = u_hat[:, i - 1 : i]
    zeros = np.zeros((size, i - 1), dtype=np.uint8)
    frame ^= m ^ polar_transform_transpose(
        np.concatenate([zeros, a_hat, frozen], axis=-1)
    )

    w = data.logical_value[:, None]
    z = rng.integers(0, 2, (size, i - 1), dtype=np.uint8)
    readout = polar_transform_transpose(
        np.concatenate([z, w, data.v[:, 1:]], axis=-1)
    )
    readout ^= frame ^ data_measure
    task = DecodeTask(n, code.x_frozen, data.v[:, 1:], _llr(readout), "reversed")
    w_hat = sc_decode(task)[0][:, i - 1 : i]
    return _records("z", a, a_hat, w, w_hat)


def _records(
    basis: str,
    a: np.ndarray,
    a_hat: np.ndarray,
    w: np.ndarray,
    w_hat: np.ndarray,
) -> EcTrials:
    decode1 = (a == a_hat)[:, 0]
    decode2 = (w_hat == (w ^ a ^ a_hat))[:, 0]
    return EcTrials(basis, decode1, decode2, (w_hat != w)[:, 0])
