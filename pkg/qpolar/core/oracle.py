"""Statevector simulation of small polar code states."""

from __future__ import annotations

from collections.abc import Iterable
from collections.abc import Sequence
import dataclasses

import numpy as np

from qpolar.core.gf2 import as_bits
from qpolar.core.prep import Fault
from qpolar.core.utils import MAX_ORACLE_QUBITS
from qpolar.core.utils import check_option
from qpolar.core.utils import resource_bound_error


NORM_TOLERANCE = 1e-10
r"""Allowed deviation of a state norm from 1."""


@dataclasses.dataclass
class StateVector:
    r"""Pure state of ``N`` qubits.

    Amplitudes are ordered big-endian,
    i.e. qubit 1 is the most significant bit
    of the amplitude index.

    Raises:
        ValueError: if the number of amplitudes is not a power of two
            or the norm deviates from 1
        ResourceBoundError: if the state has more than
            :data:`qpolar.core.utils.MAX_ORACLE_QUBITS` qubits

    """

    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        size = len(self.amplitudes)
        if size < 1 or size & (size - 1):
            raise ValueError("Number of amplitudes has to be a power of two.")
        _check_size(self.num_qubits)
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise ValueError(f"State has norm {norm}, expected 1.")

    @property
    def num_qubits(self) -> int:
        r"""Number of qubits."""
        return len(self.amplitudes).bit_length() - 1

    def tensor(self) -> np.ndarray:
        r"""Amplitudes with one axis per qubit."""
        return self.amplitudes.reshape((2,) * self.num_qubits)


def apply_pauli_frame(
    state: StateVector,
    e_x: Iterable[int] | np.ndarray,
    e_z: Iterable[int] | np.ndarray,
) -> StateVector:
    r"""Apply :math:`X^{e_x} Z^{e_z}` to a state.

    Args:
        state: state
        e_x: support of X errors
        e_z: support of Z errors

    Returns:
        new state

    """
    psi = state.tensor().copy()
    for q, bit in enumerate(as_bits(e_z)):
        if bit:
            psi = _apply_z(psi, q)
    for q, bit in enumerate(as_bits(e_x)):
        if bit:
            psi = _apply_x(psi, q)
    return StateVector(psi)


def apply_polar_encoding(
    n: int,
    u: Iterable[int] | np.ndarray,
    v: Iterable[int] | np.ndarray,
) -> StateVector:
    r"""Polar code state :math:`Q_N |u, \bar{v}\rangle`.

    The first ``len(u)`` qubits start in the Z basis states ``u``,
    the remaining qubits in the X basis states ``v``.
    :math:`Q_N` is the CNOT network
    acting as :math:`|x\rangle \mapsto |P_N x\rangle`
    on Z basis states,
    built from :math:`Q_2 |a, b\rangle = |a \oplus b, b\rangle`.

    Args:
        n: recursion depth
        u: Z basis values
        v: X basis values

    Returns:
        state

    Raises:
        ValueError: if ``len(u) + len(v)`` is not ``2**n``
        ResourceBoundError: if ``2**n`` exceeds
            :data:`qpolar.core.utils.MAX_ORACLE_QUBITS`

    Examples:
        >>> state = apply_polar_encoding(1, [0], [0])
        >>> np.round(state.amplitudes.real, 4).tolist()
        [0.7071, 0.0, 0.0, 0.7071]

    """
    u = as_bits(u)
    v = as_bits(v)
    length = 2**n
    _check_size(length)
    if len(u) + len(v) != length:
        raise ValueError(f"'u' and 'v' have to have {length} values in total.")
    psi = np.ones((1,), dtype=complex)
    for bit in u:
        psi = np.kron(psi, _basis_state("Z", bit))
    for bit in v:
        psi = np.kron(psi, _basis_state("X", bit))
    psi = psi.reshape((2,) * length)
    step = 1
    while step < length:
        for start in range(0, length, 2 * step):
            for j in range(start, start + step):
                psi = _apply_cnot(psi, j + step, j)
        step *= 2
    return StateVector(psi)


def fidelity(a: StateVector, b: StateVector) -> float:
    r"""Overlap :math:`|\langle a | b \rangle|^2` of two pure states.

    Examples:
        >>> a = apply_polar_encoding(1, [0], [0])
        >>> round(fidelity(a, a), 10)
        1.0

    """
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def shor_logical_state(n: int, k: int, value: int) -> StateVector:
    r"""Logical state of the Shor code in product form.

    The ``2**n`` qubits are arranged
    as a :math:`2^k \times 2^{n - k}` matrix.
    Row ``r`` holds the qubits ``q`` with ``q mod 2**k == r``
    (zero-based)
    and is in the state
    :math:`(|+ \dots +\rangle + (-1)^{value} |- \dots -\rangle) / \sqrt{2}`.

    Args:
        n: recursion depth
        k: logarithm of the number of rows
        value: logical value

    Returns:
        state

    Raises:
        ValueError: if ``k`` is not in ``[0, n]``
        ResourceBoundError: if ``2**n`` exceeds
            :data:`qpolar.core.utils.MAX_ORACLE_QUBITS`

    Examples:
        >>> state = shor_logical_state(1, 1, 1)
        >>> np.round(state.amplitudes.real, 4).tolist()
        [0.0, 0.0, 0.0, 1.0]

    """
    if not 0 <= k <= n:
        raise ValueError(f"'k' has to be in [0, {n}], not {k}.")
    length = 2**n
    _check_size(length)
    rows = 2**k
    columns = length // rows
    plus = np.ones((1,), dtype=complex)
    minus = np.ones((1,), dtype=complex)
    for _ in range(columns):
        plus = np.kron(plus, _basis_state("X", 0))
        minus = np.kron(minus, _basis_state("X", 1))
    row_state = (plus + _sign(value) * minus) / np.sqrt(2)
    psi = np.ones((1,), dtype=complex)
    for _ in range(rows):
        psi = np.kron(psi, row_state)
    # Axes are ordered (row, column), qubit index is column * rows + row
    psi = psi.reshape((2,) * length)
    order = [r * columns + c for c in range(columns) for r in range(rows)]
    return StateVector(np.transpose(psi, order))


def simulate_measurement_prep(
    n: int,
    bits: Sequence[int],
    seed: int | np.random.Generator = None,
    *,
    faults: Sequence[Fault] = (),
) -> tuple[StateVector, list[np.ndarray]]:
    r"""Gate-level simulation of the measurement based preparation.

    All qubits start in :math:`|0\rangle`.
    At level ``k`` the qubits form blocks of :math:`K = 2^k`
    consecutive qubits
    and qubits ``j`` and ``j + K/2`` of every block
    are measured with Z⊗Z (``bits[k - 1] == 1``)
    or X⊗X (``bits[k - 1] == 0``).
    Every measurement uses an ancilla:
    prepared in :math:`|0\rangle`, target of two CNOTs,
    and measured in the Z basis for Z⊗Z,
    prepared in :math:`|+\rangle`, control of two CNOTs,
    and measured in the X basis for X⊗X.
    Injected faults are applied after their component,
    measurement faults before the measurement.

    Args:
        n: recursion depth
        bits: measurement types of levels 1 to ``n``
        seed: seed or random generator for the Born rule
        faults: injected faults

    Returns:
        post-measurement state
        and observed outcomes per level
        as arrays of shape ``(N / K, K / 2)``

    Raises:
        ValueError: if ``bits`` does not have ``n`` entries
        ResourceBoundError: if ``2**n`` exceeds
            :data:`qpolar.core.utils.MAX_ORACLE_QUBITS`

    Examples:
        >>> state, outcomes = simulate_measurement_prep(1, [1], 0)
        >>> outcomes[0].tolist()
        [[0]]

    """
    length = 2**n
    _check_size(length)
    if len(bits) != n:
        raise ValueError(f"'bits' has to have {n} entries, not {len(bits)}.")
    rng = np.random.default_rng(seed)
    injected = {}
    for fault in faults:
        injected.setdefault(
            (fault.level, fault.block, fault.pair, fault.location), []
        ).append(fault.pauli)

    psi = np.zeros((2,) * length, dtype=complex)
    psi[(0,) * length] = 1
    for q in range(length):
        for pauli in injected.get((0, q, 0, "init"), []):
            psi = _apply_single(psi, q, pauli)

    outcomes = []
    for k in range(1, n + 1):
        size = 2**k
        half = size // 2
        zz = bool(bits[k - 1])
        level_outcomes = np.zeros((length // size, half), dtype=np.uint8)
        for block in range(length // size):
            for pair in range(half):
                first = block * size + pair
                second = first + half

                def faults_at(location):
                    return injected.get((k, block, pair, location), [])

                psi, outcome = _measure_pair(psi, first, second, zz, faults_at, rng)
                level_outcomes[block, pair] = outcome
        outcomes.append(level_outcomes)
    return StateVector(psi), outcomes


def stabilizer_expectation(
    state: StateVector,
    support: Iterable[int] | np.ndarray,
    pauli_type: str,
) -> float:
    r"""Expectation value of a tensor product of X or Z operators.

    Args:
        state: state
        support: qubits carrying the operator
        pauli_type: ``"X"`` or ``"Z"``

    Returns:
        :math:`\langle \psi | P | \psi \rangle`

    Raises:
        ValueError: if ``pauli_type`` is not supported

    Examples:
        >>> state = apply_polar_encoding(1, [0], [0])
        >>> stabilizer_expectation(state, [1, 1], "X")
        1.0
        >>> stabilizer_expectation(state, [1, 0], "Z")
        0.0

    """
    check_option("pauli_type", pauli_type, ["X", "Z"])
    psi = state.tensor()
    applied = psi
    apply = _apply_x if pauli_type == "X" else _apply_z
    for q, bit in enumerate(as_bits(support)):
        if bit:
            applied = apply(applied, q)
    return float(np.round(np.vdot(psi, applied).real, 12))


def _apply_cnot(psi: np.ndarray, control: int, target: int) -> np.ndarray:
    psi = psi.copy()
    index = [slice(None)] * psi.ndim
    index[control] = 1
    index = tuple(index)
    axis = target if target < control else target - 1
    psi[index] = np.flip(psi[index], axis=axis)
    return psi


def _apply_h(psi: np.ndarray, q: int) -> np.ndarray:
    a = np.take(psi, 0, axis=q)
    b = np.take(psi, 1, axis=q)
    return np.stack([(a + b) / np.sqrt(2), (a - b) / np.sqrt(2)], axis=q)


def _apply_single(psi: np.ndarray, q: int, pauli: int) -> np.ndarray:
    r"""Apply Pauli ``1=X``, ``2=Y``, ``3=Z`` up to global phase."""
    if pauli in (2, 3):
        psi = _apply_z(psi, q)
    if pauli in (1, 2):
        psi = _apply_x(psi, q)
    return psi


def _apply_x(psi: np.ndarray, q: int) -> np.ndarray:
    return np.flip(psi, axis=q).copy()


def _apply_z(psi: np.ndarray, q: int) -> np.ndarray:
    psi = psi.copy()
    index = [slice(None)] * psi.ndim
    index[q] = 1
    psi[tuple(index)] *= -1
    return psi


def _basis_state(basis: str, bit: int) -> np.ndarray:
    if basis == "Z":
        state = np.zeros(2, dtype=complex)
        state[bit] = 1
        return state
    return np.array([1, _sign(bit)], dtype=complex) / np.sqrt(2)


def _check_size(num_qubits: int):
    if num_qubits > MAX_ORACLE_QUBITS:
        raise resource_bound_error("Statevector size", num_qubits, MAX_ORACLE_QUBITS)


def _measure_pair(
    psi: np.ndarray,
    first: int,
    second: int,
    zz: bool,
    faults_at,
    rng: np.random.Generator,
) -> tuple[np.ndarray, int]:
    r"""Measure Z⊗Z or X⊗X of two qubits with an ancilla."""
    ancilla = psi.ndim
    extended = np.zeros(psi.shape + (2,), dtype=complex)
    if zz:
        extended[..., 0] = psi
    else:
        extended[..., 0] = psi / np.sqrt(2)
        extended[..., 1] = psi / np.sqrt(2)
    psi = extended
    for pauli in faults_at("ancilla"):
        psi = _apply_single(psi, ancilla, pauli)
    for location, data in [("cnot1", first), ("cnot2", second)]:
        if zz:
            psi = _apply_cnot(psi, data, ancilla)
        else:
            psi = _apply_cnot(psi, ancilla, data)
        for pauli in faults_at(location):
            psi = _apply_single(psi, data, pauli // 4)
            psi = _apply_single(psi, ancilla, pauli % 4)
    for pauli in faults_at("measure"):
        psi = _apply_single(psi, ancilla, pauli)
    if not zz:
        psi = _apply_h(psi, ancilla)
    probability_one = float(np.sum(np.abs(psi[..., 1]) ** 2))
    outcome = int(rng.random() < probability_one)
    probability = probability_one if outcome else 1 - probability_one
    psi = psi[..., outcome] / np.sqrt(probability)
    return psi, outcome


def _sign(bit: int) -> int:
    r"""Sign :math:`(-1)^{bit}` of a bit of any integer type."""
    # Negative powers of unsigned numpy integers overflow
    return 1 - 2 * int(bit)
