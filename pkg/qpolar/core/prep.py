"""Measurement based preparation of Q1 code states with error detection."""

from __future__ import annotations

from collections.abc import Sequence
import dataclasses
import logging
import math

import numpy as np

import audeer

from qpolar.core.code import Q1Code
from qpolar.core.code import final_position
from qpolar.core.code import prep_bit_sequence
from qpolar.core.gf2 import polar_transform
from qpolar.core.gf2 import polar_transform_transpose
from qpolar.core.utils import check_option
from qpolar.core.utils import check_probability
from qpolar.core.utils import rng_stream
from qpolar.core.utils import wilson_interval


logger = logging.getLogger(__name__)

LOCATIONS = ["init", "ancilla", "cnot1", "cnot2", "measure"]
r"""Fault locations of a preparation.

``"init"`` is the initialization of a data qubit at level 0,
the other locations belong to the ancilla
of a two-qubit measurement:
its initialization,
the CNOTs with the first and second data qubit,
and its measurement.

"""


@dataclasses.dataclass(frozen=True)
class Fault:
    r"""Deterministic fault injected into a preparation.

    Single-qubit locations take the Pauli codes
    ``1=X``, ``2=Y``, ``3=Z``.
    CNOT locations take the two-qubit codes ``1`` to ``15``,
    where code ``c`` applies Pauli ``c // 4`` to the data qubit
    and Pauli ``c % 4`` to the ancilla.
    Faults act after their component,
    measurement faults before the measurement.

    Args:
        level: level ``k``, 0 for data initialization
        block: zero-based block index,
            the qubit index for data initialization
        pair: zero-based pair index within the block
        location: see :data:`LOCATIONS`
        pauli: Pauli code

    Raises:
        ValueError: if ``location`` or ``pauli`` are invalid

    """

    level: int
    block: int
    pair: int
    location: str
    pauli: int

    def __post_init__(self):
        check_option("location", self.location, LOCATIONS)
        if (self.level == 0) != (self.location == "init"):
            raise ValueError("Only level 0 has 'init' faults.")
        largest = 15 if self.location.startswith("cnot") else 3
        if not 1 <= self.pauli <= largest:
            raise ValueError(f"'pauli' has to be in [1, {largest}], not {self.pauli}.")


@dataclasses.dataclass(frozen=True)
class NoiseModel:
    r"""Circuit-level noise with component failure probability ``p``.

    Initializations fail with an X error (Z error for :math:`|+\rangle`),
    measurements are preceded by an error flipping their outcome,
    and CNOTs are followed by one of the 15 non-trivial
    two-qubit Pauli errors, each with probability :math:`p / 15`.

    Raises:
        ValueError: if ``p`` is not a probability

    """

    p: float

    def __post_init__(self):
        check_probability("p", self.p)


@dataclasses.dataclass
class PauliFrame:
    r"""X and Z error supports."""

    e_x: np.ndarray
    e_z: np.ndarray


@dataclasses.dataclass
class PrepOutcome:
    r"""Result of a single preparation attempt.

    ``u``, ``v``, ``frame``, and ``logical_value``
    are ``None`` if the attempt was rejected.

    """

    accepted: bool
    u: np.ndarray | None
    v: np.ndarray | None
    frame: PauliFrame | None
    fault_count: int
    component_count: int
    levels_skipped: int
    logical_value: int | None = None


@dataclasses.dataclass
class PrepBatch:
    r"""Results of a batch of preparation attempts.

    Row ``r`` of every array belongs to attempt ``r``.
    ``logical_value`` is ``None`` for generic targets.

    """

    accepted: np.ndarray
    u: np.ndarray
    v: np.ndarray
    e_x: np.ndarray
    e_z: np.ndarray
    fault_count: np.ndarray
    component_count: int
    levels_skipped: int
    logical_value: np.ndarray | None

    def __len__(self) -> int:
        r"""Number of attempts."""
        return len(self.accepted)

    def select(self, rows: np.ndarray) -> PrepBatch:
        r"""Batch restricted to the given rows or boolean mask."""
        return PrepBatch(
            self.accepted[rows],
            self.u[rows],
            self.v[rows],
            self.e_x[rows],
            self.e_z[rows],
            self.fault_count[rows],
            self.component_count,
            self.levels_skipped,
            None if self.logical_value is None else self.logical_value[rows],
        )

    def outcome(self, row: int) -> PrepOutcome:
        r"""Single attempt of the batch."""
        accepted = bool(self.accepted[row])
        logical_value = None
        if accepted and self.logical_value is not None:
            logical_value = int(self.logical_value[row])
        return PrepOutcome(
            accepted,
            self.u[row] if accepted else None,
            self.v[row] if accepted else None,
            PauliFrame(self.e_x[row], self.e_z[row]) if accepted else None,
            int(self.fault_count[row]),
            self.component_count,
            self.levels_skipped,
            logical_value,
        )


@dataclasses.dataclass
class PrepRate:
    r"""Estimated preparation rate.

    ``mean_weight_x`` and ``mean_weight_z``
    are the mean frame weights of the accepted attempts.

    """

    p_prep: float
    ci_low: float
    ci_high: float
    accepted: int
    attempts: int
    mean_weight_x: float
    mean_weight_z: float


def component_count(code: Q1Code, levels_skipped: int = 0) -> int:
    r"""Number of noisy components of a preparation.

    :math:`N` initializations plus four components
    for each of the :math:`N/2` measurements per executed level.

    Examples:
        >>> component_count(Q1Code(4, 7))
        144

    """
    return code.length * (1 + 2 * (code.n - levels_skipped))


def estimate_prep_rate(
    code: Q1Code,
    target: str,
    noise: NoiseModel,
    attempts: int = 10**5,
    seed: int = 1,
    *,
    batch_size: int = 10**4,
    skip_levels: bool = True,
    num_workers: int = 1,
    verbose: bool = False,
    stream: str = "prep",
) -> PrepRate:
    r"""Estimate the rate of accepted preparations.

    Attempts are split into batches of ``batch_size``
    with their own random substreams,
    so the estimate does not depend on ``num_workers``.

    Args:
        code: Q1 code
        target: preparation target, see :data:`qpolar.core.utils.TARGETS`
        noise: noise model
        attempts: number of attempts
        seed: master seed
        batch_size: attempts per batch
        skip_levels: skip leading Z⊗Z levels,
            see :func:`leading_zz_levels_skippable`
        num_workers: number of parallel jobs
        verbose: show progress bar
        stream: name of random substreams

    Returns:
        preparation rate with Wilson 95% interval
        and mean frame weights

    Raises:
        ValueError: if ``attempts`` is smaller than 1

    Examples:
        >>> rate = estimate_prep_rate(Q1Code(2, 2), "zero", NoiseModel(0.0), 10)
        >>> rate.p_prep
        1.0

    """
    if attempts < 1:
        raise ValueError(f"'attempts' has to be at least 1, not {attempts}.")
    sizes = [batch_size] * (attempts // batch_size)
    if attempts % batch_size:
        sizes.append(attempts % batch_size)
    params = [
        ([code, target, noise, size, seed, stream, index, skip_levels], {})
        for index, size in enumerate(sizes)
    ]
    results = audeer.run_tasks(
        _prep_rate_batch,
        params,
        num_workers=num_workers,
        progress_bar=verbose,
        task_description=f"Prepare N={code.length}, i={code.i}",
    )
    accepted = sum(r[0] for r in results)
    weight_x = sum(r[1] for r in results)
    weight_z = sum(r[2] for r in results)
    ci_low, ci_high = wilson_interval(accepted, attempts)
    logger.info(
        "N=%d i=%d target=%s p=%g: %d of %d accepted",
        code.length,
        code.i,
        target,
        noise.p,
        accepted,
        attempts,
    )
    return PrepRate(
        accepted / attempts,
        ci_low,
        ci_high,
        accepted,
        attempts,
        weight_x / accepted if accepted else math.nan,
        weight_z / accepted if accepted else math.nan,
    )


def leading_zz_levels_skippable(code: Q1Code, target: str = "zero") -> int:
    r"""Number of leading Z⊗Z levels that act trivially.

    As long as all levels so far measured Z⊗Z,
    every block is in :math:`|0 \dots 0\rangle`
    and the measurements have the certain outcome 0.
    Those levels are not executed.
    The count follows from the bits of :math:`i(n) - 1`
    of the given target,
    which gives 0 for logical X states of Shor codes.

    Args:
        code: Q1 code
        target: preparation target, see :data:`qpolar.core.utils.TARGETS`

    Returns:
        number of skippable levels

    Examples:
        >>> leading_zz_levels_skippable(Q1Code(4, 4))
        2
        >>> leading_zz_levels_skippable(Q1Code(6, 8))
        3
        >>> leading_zz_levels_skippable(Q1Code(6, 8), "plus")
        0

    """
    count = 0
    for bit in prep_bit_sequence(code, target):
        if not bit:
            break
        count += 1
    return count


def prepare_noiseless(
    code: Q1Code,
    target: str = "zero",
    seed: int | np.random.Generator = None,
) -> PrepOutcome:
    r"""Noiseless preparation.

    Every level merges pairs of blocks
    with the frozen values
    :math:`(u_1, v_1)` and :math:`(u_2, v_2)`.
    A Z⊗Z level measures :math:`m = P_{K/2}(u', x)`
    with :math:`u' = u_1 \oplus u_2` and uniformly random :math:`x`,
    and yields the frozen values
    :math:`((u', x, u_2), v_1 \oplus v_2)`.
    An X⊗X level measures :math:`m = P_{K/2}^T(z, v')`
    with :math:`v' = v_1 \oplus v_2` and uniformly random :math:`z`,
    and yields :math:`(u_1 \oplus u_2, (v_1, z, v'))`.

    Args:
        code: Q1 code
        target: preparation target, see :data:`qpolar.core.utils.TARGETS`
        seed: seed or random generator

    Returns:
        accepted preparation with zero frame

    Examples:
        >>> outcome = prepare_noiseless(Q1Code(1, 2), "zero", 1)
        >>> outcome.u.tolist(), outcome.v.tolist()
        ([0, 0], [])

    """
    return prepare_noisy(code, target, NoiseModel(0.0), seed)


def prepare_noisy(
    code: Q1Code,
    target: str,
    noise: NoiseModel,
    seed: int | np.random.Generator = None,
    *,
    faults: Sequence[Fault] = (),
    outcomes: Sequence[np.ndarray] = None,
    skip_levels: bool = True,
    check_bound: bool = False,
) -> PrepOutcome:
    r"""Noisy preparation with error detection.

    Runs the noiseless recursion
    of :func:`prepare_noiseless`
    while sampling the faults of all components
    and tracking the resulting errors in a Pauli frame.
    A level is accepted if the observed outcomes :math:`m'`
    of every block
    reproduce the known frozen values,
    i.e. :math:`P_{K/2}(m')` restricted to the first
    :math:`i(k - 1)` positions equals :math:`u'` on Z⊗Z levels
    and :math:`P_{K/2}^T(m')` restricted to the last
    :math:`K/2 - i(k - 1)` positions equals :math:`v'` on X⊗X levels.
    The first rejected level rejects the attempt.

    The frame is the lighter of the equivalent representatives
    at every level.
    Its weights never exceed the number of faults,
    which is checked with ``check_bound=True``.

    Args:
        code: Q1 code
        target: preparation target, see :data:`qpolar.core.utils.TARGETS`
        noise: noise model
        seed: seed or random generator
        faults: injected faults in addition to sampled ones
        outcomes: observed outcomes per level
            as returned by :func:`qpolar.simulate_measurement_prep`,
            replacing the sampled outcomes
        skip_levels: skip leading Z⊗Z levels,
            see :func:`leading_zz_levels_skippable`
        check_bound: check the weight bound of accepted frames

    Returns:
        preparation outcome

    Raises:
        ValueError: if ``target`` is not supported,
            or faults or outcomes refer to skipped levels
        AssertionError: if ``check_bound`` is ``True``
            and an accepted frame violates the weight bound

    Examples:
        >>> outcome = prepare_noisy(Q1Code(2, 2), "zero", NoiseModel(0.0), 1)
        >>> outcome.accepted, outcome.fault_count
        (True, 0)

    """
    rng = np.random.default_rng(seed)
    batch = prepare_batch(
        code,
        target,
        noise,
        1,
        rng,
        faults=faults,
        outcomes=outcomes,
        skip_levels=skip_levels,
        check_bound=check_bound,
    )
    return batch.outcome(0)


def prepare_batch(
    code: Q1Code,
    target: str,
    noise: NoiseModel,
    size: int,
    seed: int | np.random.Generator = None,
    *,
    faults: Sequence[Fault] = (),
    outcomes: Sequence[np.ndarray] = None,
    skip_levels: bool = True,
    check_bound: bool = False,
) -> PrepBatch:
    r"""Batch of independent noisy preparations.

    See :func:`prepare_noisy` for the arguments.
    Injected faults and replayed outcomes
    apply to every attempt of the batch.

    Returns:
        batch of ``size`` attempts

    """
    rng = np.random.default_rng(seed)
    final = final_position(code, target)
    bits = prep_bit_sequence(code, target)
    skipped = leading_zz_levels_skippable(code, target) if skip_levels else 0
    injected = _injected_faults(faults, code.n, skipped)
    if outcomes is not None and skipped:
        raise ValueError("Replayed outcomes need 'skip_levels=False'.")
    length = code.length
    p = noise.p

    init_x = rng.random((size, length)) < p
    fault_count = init_x.sum(axis=1)
    e_x = init_x.astype(np.uint8)
    e_z = np.zeros((size, length), dtype=np.uint8)
    if (0, "init") in injected:
        codes = injected[(0, "init")]
        x, z = _pauli_parts(codes)
        e_x ^= x
        e_z ^= z
        fault_count = fault_count + np.count_nonzero(codes)

    u = np.zeros((size, length, 1), dtype=np.uint8)
    v = np.zeros((size, length, 0), dtype=np.uint8)
    accepted = np.ones(size, dtype=bool)
    for k in range(1, code.n + 1):
        half = 2 ** (k - 1)
        blocks = length // (2 * half)
        a = u.shape[-1]
        u1, u2 = u[:, 0::2], u[:, 1::2]
        v1, v2 = v[:, 0::2], v[:, 1::2]
        ex = e_x.reshape(size, blocks, 2, half)
        ez = e_z.reshape(size, blocks, 2, half)
        ex1, ex2, ez1, ez2 = ex[:, :, 0], ex[:, :, 1], ez[:, :, 0], ez[:, :, 1]

        if k <= skipped:
            u = np.concatenate([u1 ^ u2, u2], axis=-1)
            v = v1 ^ v2
            continue

        shape = (size, blocks, half)
        zz = bool(bits[k - 1])
        level = _LevelFaults.sample(rng, p, shape, injected, k, zz)
        fault_count = fault_count + level.count()
        if zz:
            flip = level.ancilla ^ ex1 ^ level.cnot1_ancilla_x ^ ex2
            flip ^= level.cnot2_ancilla_x ^ level.measure
            new_x = [ex1 ^ level.cnot1_data_x, ex2 ^ level.cnot2_data_x]
            new_z = [
                ez1 ^ level.cnot1_data_z ^ level.cnot1_ancilla_z,
                ez2 ^ level.cnot2_data_z,
            ]
            new_x = _lighter_fold(new_x, flip)
            uprime = u1 ^ u2
            if outcomes is None:
                x = rng.integers(0, 2, size=shape[:2] + (half - a,), dtype=np.uint8)
                observed = polar_transform(np.concatenate([uprime, x], axis=-1)) ^ flip
            else:
                observed = np.broadcast_to(_level_outcomes(outcomes, k, shape), shape)
            decoded = polar_transform(observed)
            accepted &= ~np.any(decoded[..., :a] ^ uprime, axis=(1, 2))
            u = np.concatenate([uprime, decoded[..., a:], u2], axis=-1)
            v = v1 ^ v2
        else:
            flip = level.ancilla ^ ez1 ^ level.cnot1_ancilla_z ^ ez2
            flip ^= level.cnot2_ancilla_z ^ level.measure
            new_x = [
                ex1 ^ level.cnot1_data_x ^ level.cnot1_ancilla_x,
                ex2 ^ level.cnot2_data_x,
            ]
            new_z = [ez1 ^ level.cnot1_data_z, ez2 ^ level.cnot2_data_z]
            new_z = _lighter_fold(new_z, flip)
            vprime = v1 ^ v2
            if outcomes is None:
                z = rng.integers(0, 2, size=shape[:2] + (a,), dtype=np.uint8)
                observed = (
                    polar_transform_transpose(np.concatenate([z, vprime], axis=-1))
                    ^ flip
                )
            else:
                observed = np.broadcast_to(_level_outcomes(outcomes, k, shape), shape)
            decoded = polar_transform_transpose(observed)
            accepted &= ~np.any(decoded[..., a:] ^ vprime, axis=(1, 2))
            u = u1 ^ u2
            v = np.concatenate([v1, decoded[..., :a], vprime], axis=-1)
        e_x = np.stack(new_x, axis=2).reshape(size, length)
        e_z = np.stack(new_z, axis=2).reshape(size, length)
        logger.debug(
            "Level %d (%s): %d of %d attempts still accepted",
            k,
            "ZZ" if zz else "XX",
            accepted.sum(),
            size,
        )

    u = u[:, 0]
    v = v[:, 0]
    fault_count = np.asarray(fault_count, dtype=np.int64)
    if check_bound:
        _check_weight_bound(accepted, e_x, e_z, fault_count)
    if target == "zero":
        logical_value = u[:, final - 1].copy()
    elif target == "plus":
        logical_value = v[:, 0].copy()
    else:
        logical_value = None
    return PrepBatch(
        accepted,
        u,
        v,
        e_x,
        e_z,
        fault_count,
        component_count(code, skipped),
        skipped,
        logical_value,
    )


def sample_accepted(
    code: Q1Code,
    target: str,
    noise: NoiseModel,
    count: int,
    seed: int | np.random.Generator = None,
    *,
    batch_size: int = None,
    skip_levels: bool = True,
) -> tuple[PrepBatch, int]:
    r"""Repeat preparations until enough are accepted.

    Args:
        code: Q1 code
        target: preparation target, see :data:`qpolar.core.utils.TARGETS`
        noise: noise model
        count: number of accepted preparations
        seed: seed or random generator
        batch_size: attempts per round,
            default ``count``
        skip_levels: skip leading Z⊗Z levels,
            see :func:`leading_zz_levels_skippable`

    Returns:
        ``count`` accepted preparations
        and the number of attempts it took

    Raises:
        ValueError: if ``count`` is smaller than 1

    Examples:
        >>> batch, attempts = sample_accepted(Q1Code(2, 2), "zero", NoiseModel(0.0), 5)
        >>> len(batch), attempts
        (5, 5)

    """
    if count < 1:
        raise ValueError(f"'count' has to be at least 1, not {count}.")
    rng = np.random.default_rng(seed)
    batch_size = batch_size or max(count, 1)
    collected = []
    have = 0
    attempts = 0
    while have < count:
        batch = prepare_batch(
            code,
            target,
            noise,
            batch_size,
            rng,
            skip_levels=skip_levels,
        )
        rows = np.flatnonzero(batch.accepted)[: count - have]
        if have + len(rows) == count and len(rows):
            attempts += int(rows[-1]) + 1
        else:
            attempts += batch_size
        collected.append(batch.select(rows))
        have += len(rows)
    return _concatenate(collected), attempts


@dataclasses.dataclass
class _LevelFaults:
    r"""Sampled and injected faults of one level, split into X and Z parts."""

    ancilla: np.ndarray
    cnot1_data_x: np.ndarray
    cnot1_data_z: np.ndarray
    cnot1_ancilla_x: np.ndarray
    cnot1_ancilla_z: np.ndarray
    cnot2_data_x: np.ndarray
    cnot2_data_z: np.ndarray
    cnot2_ancilla_x: np.ndarray
    cnot2_ancilla_z: np.ndarray
    measure: np.ndarray
    faults: np.ndarray

    def count(self) -> np.ndarray:
        return self.faults.sum(axis=(1, 2))

    @classmethod
    def sample(
        cls,
        rng: np.random.Generator,
        p: float,
        shape: tuple[int, int, int],
        injected: dict,
        level: int,
        zz: bool,
    ) -> _LevelFaults:
        r"""Sample the faults of all components of a level.

        The ancilla initialization and measurement faults
        are stored as outcome flips,
        they are X errors for Z⊗Z and Z errors for X⊗X levels.
        Other parts of injected ancilla faults
        act on both data qubits as the measured stabilizer
        and are not tracked.

        """
        ancilla = rng.random(shape) < p
        cnot1 = np.where(rng.random(shape) < p, rng.integers(1, 16, shape), 0)
        cnot2 = np.where(rng.random(shape) < p, rng.integers(1, 16, shape), 0)
        measure = rng.random(shape) < p
        faults = (
            ancilla.astype(np.int64)
            + (cnot1 > 0)
            + (cnot2 > 0)
            + measure.astype(np.int64)
        )
        ancilla = ancilla.astype(np.uint8)
        measure = measure.astype(np.uint8)
        cnot1 = cnot1.astype(np.int64)
        cnot2 = cnot2.astype(np.int64)
        for location in LOCATIONS[1:]:
            codes = injected.get((level, location))
            if codes is None:
                continue
            faults = faults + (codes > 0)
            if location == "cnot1":
                cnot1 = _compose(cnot1, codes)
            elif location == "cnot2":
                cnot2 = _compose(cnot2, codes)
            else:
                x, z = _pauli_parts(codes)
                flip = x if zz else z
                if location == "ancilla":
                    ancilla = ancilla ^ flip
                else:
                    measure = measure ^ flip
        data1_x, data1_z = _pauli_parts(cnot1 // 4)
        ancilla1_x, ancilla1_z = _pauli_parts(cnot1 % 4)
        data2_x, data2_z = _pauli_parts(cnot2 // 4)
        ancilla2_x, ancilla2_z = _pauli_parts(cnot2 % 4)
        return cls(
            ancilla,
            data1_x,
            data1_z,
            ancilla1_x,
            ancilla1_z,
            data2_x,
            data2_z,
            ancilla2_x,
            ancilla2_z,
            measure,
            faults,
        )


def _check_weight_bound(
    accepted: np.ndarray,
    e_x: np.ndarray,
    e_z: np.ndarray,
    fault_count: np.ndarray,
):
    violated = accepted & (
        (np.count_nonzero(e_x, axis=-1) > fault_count)
        | (np.count_nonzero(e_z, axis=-1) > fault_count)
    )
    if violated.any():
        row = int(np.flatnonzero(violated)[0])
        raise AssertionError(
            f"Frame weights ({np.count_nonzero(e_x[row])}, "
            f"{np.count_nonzero(e_z[row])}) exceed "
            f"{fault_count[row]} faults in attempt {row}."
        )


def _compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    r"""Product of two-qubit Pauli codes up to phase."""
    a_data_x, a_data_z = _pauli_parts(a // 4)
    a_anc_x, a_anc_z = _pauli_parts(a % 4)
    b_data_x, b_data_z = _pauli_parts(b // 4)
    b_anc_x, b_anc_z = _pauli_parts(b % 4)
    return 4 * _pauli_code(a_data_x ^ b_data_x, a_data_z ^ b_data_z) + _pauli_code(
        a_anc_x ^ b_anc_x, a_anc_z ^ b_anc_z
    )


def _concatenate(batches: list[PrepBatch]) -> PrepBatch:
    first = batches[0]
    logical_value = None
    if first.logical_value is not None:
        logical_value = np.concatenate([b.logical_value for b in batches])
    return PrepBatch(
        np.concatenate([b.accepted for b in batches]),
        np.concatenate([b.u for b in batches]),
        np.concatenate([b.v for b in batches]),
        np.concatenate([b.e_x for b in batches]),
        np.concatenate([b.e_z for b in batches]),
        np.concatenate([b.fault_count for b in batches]),
        first.component_count,
        first.levels_skipped,
        logical_value,
    )


def _injected_faults(
    faults: Sequence[Fault],
    n: int,
    skipped: int,
) -> dict[tuple[int, str], np.ndarray]:
    r"""Pauli codes of injected faults per level and location."""
    length = 2**n
    injected = {}
    for fault in faults:
        if fault.level > n:
            raise ValueError(f"Fault at level {fault.level} exceeds n={n}.")
        if 0 < fault.level <= skipped:
            raise ValueError(f"Fault at skipped level {fault.level}.")
        if fault.level == 0:
            shape = (length,)
            index = (fault.block,)
        else:
            half = 2 ** (fault.level - 1)
            shape = (length // (2 * half), half)
            index = (fault.block, fault.pair)
        if any(not 0 <= i < s for i, s in zip(index, shape)):
            raise ValueError(f"Fault position {index} is out of range {shape}.")
        codes = injected.setdefault(
            (fault.level, fault.location),
            np.zeros(shape, dtype=np.int64),
        )
        if fault.location.startswith("cnot"):
            codes[index] = _compose(np.asarray(codes[index]), np.asarray(fault.pauli))
        else:
            x, z = _pauli_parts(np.asarray([codes[index], fault.pauli]))
            codes[index] = _pauli_code(x[0] ^ x[1], z[0] ^ z[1])
    return injected


def _level_outcomes(
    outcomes: Sequence[np.ndarray],
    level: int,
    shape: tuple[int, int, int],
) -> np.ndarray:
    observed = np.asarray(outcomes[level - 1], dtype=np.uint8)
    if observed.shape != shape[1:]:
        raise ValueError(
            f"Outcomes of level {level} have to have shape {shape[1:]}, "
            f"not {observed.shape}."
        )
    return observed


def _lighter_fold(halves: list[np.ndarray], flip: np.ndarray) -> list[np.ndarray]:
    r"""Add ``flip`` to the half giving the lighter frame, per block."""
    first = np.count_nonzero(halves[0] ^ flip, axis=-1) + np.count_nonzero(
        halves[1], axis=-1
    )
    second = np.count_nonzero(halves[0], axis=-1) + np.count_nonzero(
        halves[1] ^ flip, axis=-1
    )
    to_first = (first <= second)[..., None]
    return [
        np.where(to_first, halves[0] ^ flip, halves[0]),
        np.where(to_first, halves[1], halves[1] ^ flip),
    ]


def _pauli_code(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    r"""Single-qubit Pauli code from X and Z parts."""
    x = np.asarray(x, dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    return np.where(x & z, 2, np.where(x, 1, np.where(z, 3, 0)))


def _pauli_parts(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r"""X and Z parts of single-qubit Pauli codes."""
    codes = np.asarray(codes)
    x = ((codes == 1) | (codes == 2)).astype(np.uint8)
    z = ((codes == 2) | (codes == 3)).astype(np.uint8)
    return x, z


def _prep_rate_batch(
    code: Q1Code,
    target: str,
    noise: NoiseModel,
    size: int,
    seed: int,
    stream: str,
    index: int,
    skip_levels: bool,
) -> tuple[int, int, int]:
    rng = rng_stream(seed, stream, index)
    batch = prepare_batch(code, target, noise, size, rng, skip_levels=skip_levels)
    accepted = batch.accepted
    return (
        int(accepted.sum()),
        int(np.count_nonzero(batch.e_x[accepted])),
        int(np.count_nonzero(batch.e_z[accepted])),
    )
