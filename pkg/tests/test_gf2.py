from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
from numpy.testing import assert_array_equal
import pytest

import qpolar
from qpolar.core.gf2 import as_bits
from qpolar.core.gf2 import index_set


@st.composite
def bit_vectors(draw, max_n=8, count=1):
    """Strategy for bit vectors of power of two length."""
    n = draw(st.integers(0, max_n))
    shape = (count, 2**n) if count > 1 else (2**n,)
    return draw(arrays(np.uint8, shape, elements=st.integers(0, 1)))


@given(bit_vectors())
def test_involution(v):
    assert_array_equal(qpolar.polar_transform(qpolar.polar_transform(v)), v)
    assert_array_equal(
        qpolar.polar_transform_transpose(qpolar.polar_transform_transpose(v)),
        v,
    )


@given(bit_vectors(count=2))
def test_linearity(pair):
    a, b = pair
    assert_array_equal(
        qpolar.polar_transform(a ^ b),
        qpolar.polar_transform(a) ^ qpolar.polar_transform(b),
    )


@given(bit_vectors(count=2))
def test_weight_triangle_inequality(pair):
    a, b = pair
    assert qpolar.weight(a ^ b) <= qpolar.weight(a) + qpolar.weight(b)


@given(bit_vectors())
def test_transpose_is_reversal_conjugate(v):
    expected = qpolar.reverse(qpolar.polar_transform(qpolar.reverse(v)))
    assert_array_equal(qpolar.polar_transform_transpose(v), expected)


@settings(max_examples=20)
@given(bit_vectors(max_n=6))
def test_dense_matrix(v):
    n = len(v).bit_length() - 1
    matrix = qpolar.polar_matrix(n).astype(int)
    assert_array_equal(qpolar.polar_transform(v), matrix @ v % 2)
    transpose = qpolar.polar_matrix(n, transpose=True).astype(int)
    assert_array_equal(qpolar.polar_transform_transpose(v), transpose @ v % 2)


@pytest.mark.parametrize("n", [0, 1, 5, 12])
def test_batch(n):
    rng = np.random.default_rng(n)
    v = rng.integers(0, 2, (7, 3, 2**n), dtype=np.uint8)
    y = qpolar.polar_transform(v)
    assert y.shape == v.shape
    assert y.dtype == np.uint8
    for row in range(7):
        assert_array_equal(y[row, 1], qpolar.polar_transform(v[row, 1]))
    assert_array_equal(qpolar.polar_transform(y), v)


def test_input_not_modified():
    v = np.array([1, 0, 0, 1], dtype=np.uint8)
    qpolar.polar_transform(v)
    qpolar.polar_transform_transpose(v)
    assert_array_equal(v, [1, 0, 0, 1])


@pytest.mark.parametrize(
    "v, expected",
    [
        ([1], [1]),
        ([0, 1], [1, 1]),
        ([1, 0, 0, 0], [1, 0, 0, 0]),
        ([0, 0, 0, 1], [1, 1, 1, 1]),
        ([0, 1, 0, 0], [1, 1, 0, 0]),
    ],
)
def test_polar_transform(v, expected):
    assert qpolar.polar_transform(v).tolist() == expected


@pytest.mark.parametrize("length", [0, 3, 6, 12])
def test_polar_transform_length(length):
    with pytest.raises(ValueError, match="power of two"):
        qpolar.polar_transform(np.zeros(length, dtype=np.uint8))


def test_as_bits():
    with pytest.raises(ValueError, match="0 and 1"):
        as_bits([0, 2])
    assert as_bits([]).dtype == np.uint8


@pytest.mark.parametrize(
    "positions, size, expected",
    [
        ([], 4, []),
        ([3, 1, 3], 4, [1, 3]),
        ([8], 8, [8]),
    ],
)
def test_index_set(positions, size, expected):
    assert index_set(positions, size).tolist() == expected


@pytest.mark.parametrize("positions", [[0], [5], [-1, 2]])
def test_index_set_out_of_range(positions):
    with pytest.raises(ValueError):
        index_set(positions, 4)


@pytest.mark.parametrize(
    "v, positions, expected",
    [
        ([1, 0, 1, 1], [1, 2], [1, 0]),
        ([1, 0, 1, 1], [], []),
        ([[1, 0], [0, 1]], [2], [[0], [1]]),
    ],
)
def test_restrict(v, positions, expected):
    assert qpolar.restrict(v, positions).tolist() == expected


@pytest.mark.parametrize(
    "v, expected",
    [
        ([], 0),
        ([0, 0], 0),
        ([1, 1, 0, 1], 3),
    ],
)
def test_weight(v, expected):
    assert qpolar.weight(v) == expected


def test_weight_batch():
    assert qpolar.weight([[1, 1], [0, 1]]).tolist() == [2, 1]
