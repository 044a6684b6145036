"""Q1 codes: quantum polar codes with a single information position."""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from qpolar.core.gf2 import polar_transform
from qpolar.core.gf2 import polar_transform_transpose
from qpolar.core.reliability import ReliabilityProfile
from qpolar.core.utils import ENUMERATION_BUDGET
from qpolar.core.utils import FAMILIES
from qpolar.core.utils import TARGETS
from qpolar.core.utils import check_option
from qpolar.core.utils import check_position
from qpolar.core.utils import resource_bound_error


DISTANCE_METHODS = ["recursive", "enumerate"]
r"""Methods of :func:`min_distance`."""


@dataclasses.dataclass(frozen=True)
class Q1Code:
    r"""Q1 code descriptor.

    The code has length :math:`N = 2^n`,
    Z-frozen positions :math:`\{1, \dots, i - 1\}`
    and X-frozen positions :math:`\{i + 1, \dots, N\}`.
    ``family``, ``channel``, ``p``, and ``mode``
    record how the code was constructed
    and do not take part in comparisons.

    Args:
        n: recursion depth
        i: one-based information position
        family: code family, see :data:`qpolar.core.utils.FAMILIES`
        channel: channel used for construction
        p: error probability used for construction
        mode: construction mode

    Raises:
        ValueError: if ``n`` is negative or ``i`` is out of range

    Examples:
        >>> code = Q1Code(3, 3)
        >>> code.length
        8
        >>> code.z_frozen.tolist(), code.x_frozen.tolist()
        ([1, 2], [4, 5, 6, 7, 8])

    """

    n: int
    i: int
    family: str = dataclasses.field(default="q1", compare=False)
    channel: str | None = dataclasses.field(default=None, compare=False)
    p: float | None = dataclasses.field(default=None, compare=False)
    mode: str | None = dataclasses.field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"'n' has to be non-negative, not {self.n}.")
        check_position(self.i, 2**self.n)
        check_option("family", self.family, FAMILIES)

    @property
    def length(self) -> int:
        r"""Number of qubits :math:`N`."""
        return 2**self.n

    @property
    def x_frozen(self) -> np.ndarray:
        r"""One-based X-frozen positions."""
        return np.arange(self.i + 1, self.length + 1)

    @property
    def z_frozen(self) -> np.ndarray:
        r"""One-based Z-frozen positions."""
        return np.arange(1, self.i)

    def to_dict(self) -> dict:
        r"""Serializable descriptor.

        Returns:
            dictionary with keys
            ``n``, ``i``, ``family``, ``channel``, ``p``, ``construction_mode``

        """
        return {
            "n": self.n,
            "i": self.i,
            "family": self.family,
            "channel": self.channel,
            "p": self.p,
            "construction_mode": self.mode,
        }

    def to_json(self) -> str:
        r"""Descriptor as JSON string.

        Examples:
            >>> Q1Code(2, 2).to_json()[:16]
            '{"n": 2, "i": 2,'

        """
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, descriptor: dict) -> Q1Code:
        r"""Create code from a descriptor of :meth:`to_dict`."""
        return cls(
            descriptor["n"],
            descriptor["i"],
            family=descriptor.get("family", "q1"),
            channel=descriptor.get("channel"),
            p=descriptor.get("p"),
            mode=descriptor.get("construction_mode"),
        )


@dataclasses.dataclass(frozen=True)
class StabilizerSet:
    r"""Stabilizer generators of a CSS code.

    Row ``r`` of ``x_generators`` is the support
    of an X-type generator with sign :math:`(-1)^{x_{signs}[r]}`,
    row ``r`` of ``z_generators`` the support
    of a Z-type generator with sign :math:`(-1)^{z_{signs}[r]}`.

    """

    x_generators: np.ndarray
    z_generators: np.ndarray
    x_signs: np.ndarray
    z_signs: np.ndarray

    def commute(self) -> bool:
        r"""Whether all X-type generators commute with all Z-type generators."""
        overlap = self.x_generators.astype(np.int64) @ self.z_generators.T
        return bool(np.all(overlap % 2 == 0))


def construct(
    n: int,
    profile: ReliabilityProfile,
    family: str = "q1",
    *,
    channel: str = None,
    p: float = None,
    mode: str = None,
) -> Q1Code:
    r"""Construct the Q1 code with the lowest logical error probability.

    The information position minimizes
    :func:`qpolar.q1_position_ler`,
    ranked by the logarithms of the profile
    so positions stay ordered where probabilities underflow,
    over all positions (``family="q1"``)
    or over powers of two (``family="shor"``).
    Ties resolve to the smallest position.

    Args:
        n: recursion depth
        profile: reliability profile of depth ``n``
        family: code family, see :data:`qpolar.core.utils.FAMILIES`
        channel: channel name stored in the descriptor
        p: error probability stored in the descriptor
        mode: construction mode stored in the descriptor

    Returns:
        code

    Raises:
        ValueError: if ``profile`` does not match ``n``
            or ``family`` is not supported

    Examples:
        >>> from qpolar.core.reliability import reliability_profile
        >>> profile = reliability_profile(3, "erasure", 1e-3)
        >>> construct(3, profile).i
        2
        >>> construct(3, profile, "shor").i
        2

    """
    check_option("family", family, FAMILIES)
    if profile.n != n:
        raise ValueError(f"Profile has depth {profile.n}, expected {n}.")
    ler = profile.position_log_ler()
    if family == "q1":
        candidates = np.arange(1, 2**n + 1)
    else:
        candidates = 2 ** np.arange(n + 1)
    best = candidates[np.argmin(ler[candidates - 1])]
    return Q1Code(n, int(best), family=family, channel=channel, p=p, mode=mode)


def logical_operators(code: Q1Code) -> tuple[np.ndarray, np.ndarray]:
    r"""Supports of the logical X and Z operators.

    Args:
        code: Q1 code

    Returns:
        supports :math:`P_N e_i` and :math:`P_N^T e_i`

    Examples:
        >>> x, z = logical_operators(Q1Code(1, 1))
        >>> x.tolist(), z.tolist()
        ([1, 0], [1, 1])

    """
    indicator = np.zeros(code.length, dtype=np.uint8)
    indicator[code.i - 1] = 1
    return polar_transform(indicator), polar_transform_transpose(indicator)


def min_distance(
    code: Q1Code,
    *,
    method: str = "recursive",
    budget: int = ENUMERATION_BUDGET,
) -> int:
    r"""Minimum weight of the logical X and Z operators.

    The logical X coset contains all words :math:`P_N u`
    with :math:`u_j = 0` for :math:`j < i` and :math:`u_i = 1`.
    As :math:`P_K(a, b) = (P_{K/2}(a \oplus b), P_{K/2}(b))`,
    positions in the first half keep
    the minimum weight of the half length code
    and positions in the second half double it.
    The logical Z coset is the logical X coset
    of position :math:`N + 1 - i` in reversed qubit order.

    With ``method="enumerate"``
    all words of both cosets are enumerated.

    Args:
        code: Q1 code
        method: ``"recursive"`` or ``"enumerate"``
        budget: maximum number of enumerated words

    Returns:
        minimum distance

    Raises:
        ValueError: if ``method`` is not supported
        ResourceBoundError: if the enumeration exceeds ``budget``

    Examples:
        >>> min_distance(Q1Code(4, 7))
        4
        >>> min_distance(Q1Code(4, 7), method="enumerate")
        4

    """
    check_option("method", method, DISTANCE_METHODS)
    if method == "recursive":
        return min(
            _coset_min_weight(code.i - 1, code.n),
            _coset_min_weight(code.length - code.i, code.n),
        )

    words = 2 ** (code.length - code.i) + 2 ** (code.i - 1)
    if words > budget:
        raise resource_bound_error("Coset enumeration", words, budget)
    x_weight = _enumerate_coset(code.length, code.i)
    # Logical Z coset in reversed order
    z_weight = _enumerate_coset(code.length, code.length + 1 - code.i)
    return min(x_weight, z_weight)


def prep_bit_sequence(code: Q1Code, target: str = "zero") -> np.ndarray:
    r"""Measurement types of the preparation levels.

    Returns the bits :math:`b_1, \dots, b_n`
    of :math:`i(n) - 1` with :math:`b_n` the most significant bit.
    :math:`b_k = 1` selects Z⊗Z measurements at level :math:`k`,
    :math:`b_k = 0` selects X⊗X measurements.
    :math:`i(n)` is ``i`` for the targets ``"zero"`` and ``"generic"``
    and ``i - 1`` for ``"plus"``.

    Args:
        code: Q1 code
        target: preparation target, see :data:`qpolar.core.utils.TARGETS`

    Returns:
        bits ``b_1`` to ``b_n``

    Raises:
        ValueError: if ``target`` is not supported
            or ``target="plus"`` with ``i=1``

    Examples:
        >>> prep_bit_sequence(Q1Code(3, 3)).tolist()
        [0, 1, 0]

    """
    final = final_position(code, target)
    return ((final - 1) >> np.arange(code.n)) & 1


def prep_positions(code: Q1Code, target: str = "zero") -> list[int]:
    r"""Position of the first non Z-frozen input at every level.

    Starts with :math:`i(0) = 1` and applies
    :math:`i(k) = i(k - 1) + 2^{k - 1}` on Z⊗Z levels,
    while X⊗X levels keep the position.

    Examples:
        >>> prep_positions(Q1Code(3, 3))
        [1, 1, 3, 3]

    """
    positions = [1]
    for k, bit in enumerate(prep_bit_sequence(code, target), start=1):
        positions.append(positions[-1] + int(bit) * 2 ** (k - 1))
    return positions


def final_position(code: Q1Code, target: str = "zero") -> int:
    r"""Position :math:`i(n)` the preparation ends at.

    Raises:
        ValueError: if ``target`` is not supported
            or ``target="plus"`` with ``i=1``

    """
    check_option("target", target, TARGETS)
    if target == "plus":
        if code.i < 2:
            raise ValueError("Logical X preparation needs 'i' of at least 2.")
        return code.i - 1
    return code.i


def stabilizers(
    code: Q1Code,
    u: np.ndarray = None,
    v: np.ndarray = None,
) -> StabilizerSet:
    r"""Stabilizer generators of a Q1 code.

    X-type generators have supports :math:`P_N e_j`
    for X-frozen :math:`j`,
    Z-type generators have supports :math:`P_N^T e_j`
    for Z-frozen :math:`j`.

    Args:
        code: Q1 code
        u: values of the Z-frozen positions, default all zero
        v: values of the X-frozen positions, default all zero

    Returns:
        stabilizer set

    Raises:
        ValueError: if ``u`` or ``v`` have the wrong length

    Examples:
        >>> s = stabilizers(Q1Code(1, 1))
        >>> s.x_generators.tolist(), s.z_generators.tolist()
        ([[1, 1]], [])

    """
    identity = np.eye(code.length, dtype=np.uint8)
    x_generators = polar_transform(identity[code.x_frozen - 1])
    z_generators = polar_transform_transpose(identity[code.z_frozen - 1])
    x_signs = _frozen_values("v", v, len(code.x_frozen))
    z_signs = _frozen_values("u", u, len(code.z_frozen))
    return StabilizerSet(
        x_generators.reshape(-1, code.length),
        z_generators.reshape(-1, code.length),
        x_signs,
        z_signs,
    )


def _coset_min_weight(index: int, n: int) -> int:
    r"""Minimum weight of the coset of zero-based position ``index``."""
    if n == 0:
        return 1
    half = 2 ** (n - 1)
    if index < half:
        return _coset_min_weight(index, n - 1)
    return 2 * _coset_min_weight(index - half, n - 1)


def _enumerate_coset(length: int, position: int) -> int:
    r"""Brute-force minimum weight of the logical X coset of ``position``."""
    free = length - position
    best = length
    chunk = 2**16
    for start in range(0, 2**free, chunk):
        values = np.arange(start, min(start + chunk, 2**free))
        u = np.zeros((len(values), length), dtype=np.uint8)
        u[:, position - 1] = 1
        if free:
            u[:, position:] = (values[:, None] >> np.arange(free)) & 1
        best = min(best, int(np.count_nonzero(polar_transform(u), axis=-1).min()))
    return best


def _frozen_values(name: str, values: np.ndarray, size: int) -> np.ndarray:
    if values is None:
        return np.zeros(size, dtype=np.uint8)
    values = np.asarray(values, dtype=np.uint8)
    if values.shape != (size,):
        raise ValueError(f"'{name}' has to have length {size}, not {len(values)}.")
    return values
