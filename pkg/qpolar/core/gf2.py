"""Bit vectors over GF(2) and the polar transform."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from qpolar.core.utils import check_position
from qpolar.core.utils import log2_length


def as_bits(v: Iterable[int] | np.ndarray) -> np.ndarray:
    r"""Convert to bit vector.

    Bit vectors are ``uint8`` arrays of zeros and ones.
    Leading dimensions are allowed
    and hold batches of vectors.

    Args:
        v: values in ``{0, 1}``

    Returns:
        bit vector

    Raises:
        ValueError: if ``v`` contains values other than 0 and 1

    Examples:
        >>> as_bits([1, 0, 1]).tolist()
        [1, 0, 1]

    """
    x = np.asarray(v)
    if x.size and (x.min() < 0 or x.max() > 1):
        raise ValueError("Bit vectors can only contain 0 and 1.")
    return x.astype(np.uint8)


def index_set(positions: Iterable[int], size: int) -> np.ndarray:
    r"""Sorted set of one-based positions.

    Args:
        positions: one-based positions
        size: number of positions ``N``

    Returns:
        sorted positions without duplicates

    Raises:
        ValueError: if a position is outside ``[1, size]``

    Examples:
        >>> index_set([4, 2, 2], 4).tolist()
        [2, 4]

    """
    s = np.unique(np.asarray(list(positions), dtype=np.int64))
    for position in s:
        check_position(int(position), size)
    return s


def polar_transform(v: Iterable[int] | np.ndarray) -> np.ndarray:
    r"""Polar transform :math:`P_N v`.

    :math:`P_N` is the ``n``-fold Kronecker power
    of :math:`P_2 = \begin{pmatrix} 1 & 1 \\ 0 & 1 \end{pmatrix}`,
    i.e. :math:`P_2 (u_1, u_2) = (u_1 \oplus u_2, u_2)`
    and :math:`P_K(a, b) = (P_{K/2}(a \oplus b), P_{K/2}(b))`.
    The transform is its own inverse.

    Args:
        v: bit vector of length :math:`N = 2^n`,
            or batch of those along the last axis

    Returns:
        transformed bit vector

    Raises:
        ValueError: if the length is not a power of two

    Examples:
        >>> polar_transform([0, 1]).tolist()
        [1, 1]
        >>> polar_transform([1, 0, 0, 1]).tolist()
        [0, 1, 1, 1]

    """
    x = as_bits(v).copy()
    length = x.shape[-1]
    log2_length(length)
    step = 1
    while step < length:
        y = x.reshape(x.shape[:-1] + (length // (2 * step), 2, step))
        y[..., 0, :] ^= y[..., 1, :]
        step *= 2
    return x


def polar_transform_transpose(v: Iterable[int] | np.ndarray) -> np.ndarray:
    r"""Transposed polar transform :math:`P_N^T v`.

    Follows :math:`P_K^T(a, b) = (P_{K/2}^T(a), P_{K/2}^T(a) \oplus P_{K/2}^T(b))`
    with :math:`P_2^T (u_1, u_2) = (u_1, u_1 \oplus u_2)`.
    :math:`P_N^T` equals :math:`P_N`
    conjugated by the reversal of positions.

    Args:
        v: bit vector of length :math:`N = 2^n`,
            or batch of those along the last axis

    Returns:
        transformed bit vector

    Raises:
        ValueError: if the length is not a power of two

    Examples:
        >>> polar_transform_transpose([1, 0]).tolist()
        [1, 1]

    """
    x = as_bits(v).copy()
    length = x.shape[-1]
    log2_length(length)
    step = 1
    while step < length:
        y = x.reshape(x.shape[:-1] + (length // (2 * step), 2, step))
        y[..., 1, :] ^= y[..., 0, :]
        step *= 2
    return x


def polar_matrix(n: int, *, transpose: bool = False) -> np.ndarray:
    r"""Dense matrix :math:`P_N` built as Kronecker power.

    Args:
        n: recursion depth
        transpose: if ``True`` return :math:`P_N^T`

    Returns:
        matrix of shape ``(2**n, 2**n)``

    Examples:
        >>> polar_matrix(1).tolist()
        [[1, 1], [0, 1]]

    """
    kernel = np.array([[1, 1], [0, 1]], dtype=np.uint8)
    matrix = np.ones((1, 1), dtype=np.uint8)
    for _ in range(n):
        matrix = np.kron(matrix, kernel)
    return matrix.T.copy() if transpose else matrix


def restrict(v: Iterable[int] | np.ndarray, positions: Iterable[int]) -> np.ndarray:
    r"""Sub-vector at one-based positions.

    Args:
        v: bit vector of length ``N``,
            or batch of those along the last axis
        positions: one-based positions

    Returns:
        entries of ``v`` at ``positions`` in ascending order

    Raises:
        ValueError: if a position is outside ``[1, N]``

    Examples:
        >>> restrict([1, 0, 1, 1], [2, 4]).tolist()
        [0, 1]

    """
    x = as_bits(v)
    s = index_set(positions, x.shape[-1])
    return x[..., s - 1]


def reverse(v: Iterable[int] | np.ndarray) -> np.ndarray:
    r"""Reverse positions, i.e. apply :math:`\pi(i) = N + 1 - i`.

    Examples:
        >>> reverse([1, 1, 0]).tolist()
        [0, 1, 1]

    """
    return as_bits(v)[..., ::-1].copy()


def weight(v: Iterable[int] | np.ndarray) -> int | np.ndarray:
    r"""Hamming weight.

    Args:
        v: bit vector,
            or batch of those along the last axis

    Returns:
        number of ones

    Examples:
        >>> weight([1, 0, 1, 1])
        3

    """
    x = as_bits(v)
    w = np.count_nonzero(x, axis=-1)
    if x.ndim <= 1:
        return int(w)
    return w
