"""Min-sum successive cancellation decoding of polar codes."""

from __future__ import annotations

from collections.abc import Iterable
import dataclasses

import numpy as np

from qpolar.core.gf2 import as_bits
from qpolar.core.gf2 import index_set
from qpolar.core.gf2 import polar_transform
from qpolar.core.utils import check_option


ORIENTATIONS = ["standard", "reversed"]
r"""Transform orientations of a decode task.

``"standard"`` decodes codewords :math:`P_N u`,
``"reversed"`` decodes codewords :math:`P_N^T u`.

"""


@dataclasses.dataclass
class DecodeTask:
    r"""Successive cancellation decode task.

    ``llr`` and ``frozen_values`` may carry a leading batch dimension,
    in which case all decodes of the batch share the frozen set.

    Args:
        n: recursion depth
        frozen_set: one-based frozen positions
        frozen_values: values of the frozen positions
            in ascending position order
        llr: channel LLRs of length ``2**n``,
            positive values favour bit 0
        orientation: see :data:`ORIENTATIONS`

    Raises:
        ValueError: if the lengths do not match
            or ``orientation`` is not supported

    """

    n: int
    frozen_set: Iterable[int]
    frozen_values: Iterable[int] | np.ndarray
    llr: np.ndarray
    orientation: str = "standard"

    def __post_init__(self):
        check_option("orientation", self.orientation, ORIENTATIONS)
        length = 2**self.n
        self.frozen_set = index_set(self.frozen_set, length)
        self.llr = np.asarray(self.llr, dtype=float)
        if self.llr.shape[-1] != length:
            raise ValueError(
                f"'llr' has to have length {length}, not {self.llr.shape[-1]}."
            )
        self.frozen_values = as_bits(self.frozen_values)
        if self.frozen_values.shape[-1:] != (len(self.frozen_set),):
            raise ValueError(
                f"'frozen_values' has to have length {len(self.frozen_set)}."
            )


class SCDecoder:
    r"""Min-sum successive cancellation decoder.

    Decodes codewords :math:`x = P_N u`
    where the inputs at the frozen positions are known.
    Inputs are estimated in ascending position order
    following :math:`P_K(a, b) = (P_{K/2}(a \oplus b), P_{K/2}(b))`:
    the first half is decoded from the check node messages
    :math:`\text{sign}(L_1) \text{sign}(L_2) \min(|L_1|, |L_2|)`,
    the second half from the variable node messages
    :math:`L_2 + (-1)^{\hat{x}_a} L_1`.
    A message of zero decides for 0.

    All decodes of a batch are processed together.

    Args:
        n: recursion depth
        frozen_set: one-based frozen positions

    Raises:
        ValueError: if a frozen position is out of range

    Examples:
        >>> decoder = SCDecoder(1, [1])
        >>> u, x = decoder.decode([-1.0, -1.0], [0])
        >>> u.tolist(), x.tolist()
        ([0, 1], [1, 1])

    """

    def __init__(self, n: int, frozen_set: Iterable[int]):
        self.n = n
        self.length = 2**n
        self.frozen_set = index_set(frozen_set, self.length)
        self.frozen_mask = np.zeros(self.length, dtype=bool)
        self.frozen_mask[self.frozen_set - 1] = True

    def decode(
        self,
        llr: Iterable[float] | np.ndarray,
        frozen_values: Iterable[int] | np.ndarray,
    ) -> tuple[np.ndarray, np.ndarray]:
        r"""Decode a single word or a batch of words.

        Args:
            llr: channel LLRs of shape ``(N,)`` or ``(B, N)``
            frozen_values: values of shape ``(F,)`` or ``(B, F)``
                for the ``F`` frozen positions

        Returns:
            estimated inputs and re-encoded codeword

        Raises:
            ValueError: if the shapes do not match

        """
        llr = np.asarray(llr, dtype=float)
        single = llr.ndim == 1
        llr = np.atleast_2d(llr)
        if llr.shape[-1] != self.length:
            raise ValueError(f"'llr' has to have length {self.length}.")
        frozen_values = as_bits(frozen_values)
        if frozen_values.shape[-1:] != (len(self.frozen_set),):
            raise ValueError(
                f"'frozen_values' has to have length {len(self.frozen_set)}."
            )
        values = np.zeros(llr.shape, dtype=np.uint8)
        values[:, self.frozen_set - 1] = frozen_values
        u, x = _decode(llr, self.frozen_mask, values)
        if single:
            return u[0], x[0]
        return u, x


def reversed_decode_adapter(task: DecodeTask) -> tuple[np.ndarray, np.ndarray]:
    r"""Decode codewords of the transposed transform.

    As :math:`P_N^T = R P_N R` with the reversal :math:`R`,
    the task is solved by reversing the LLRs,
    mapping frozen positions through :math:`\pi(i) = N + 1 - i`,
    decoding with :class:`SCDecoder`,
    and reversing the results.

    Args:
        task: decode task, its orientation is ignored

    Returns:
        estimated inputs and re-encoded codeword :math:`P_N^T \hat{u}`

    Examples:
        >>> task = DecodeTask(1, [2], [0], [-1.0, -1.0], "reversed")
        >>> u, x = reversed_decode_adapter(task)
        >>> u.tolist(), x.tolist()
        ([1, 0], [1, 1])

    """
    length = 2**task.n
    decoder = SCDecoder(task.n, length + 1 - task.frozen_set)
    u, x = decoder.decode(task.llr[..., ::-1], task.frozen_values[..., ::-1])
    return u[..., ::-1].copy(), x[..., ::-1].copy()


def sc_decode(task: DecodeTask) -> tuple[np.ndarray, np.ndarray]:
    r"""Min-sum successive cancellation decoding.

    Args:
        task: decode task

    Returns:
        estimated inputs :math:`\hat{u}`
        and re-encoded codeword,
        :math:`P_N \hat{u}` or :math:`P_N^T \hat{u}`
        depending on the orientation

    Examples:
        >>> task = DecodeTask(2, [1, 2, 3], [0, 0, 0], [1.0, -1.0, -1.0, -1.0])
        >>> u, x = sc_decode(task)
        >>> u.tolist(), x.tolist()
        ([0, 0, 0, 1], [1, 1, 1, 1])

    """
    if task.orientation == "reversed":
        return reversed_decode_adapter(task)
    decoder = SCDecoder(task.n, task.frozen_set)
    return decoder.decode(task.llr, task.frozen_values)


def _decode(
    llr: np.ndarray,
    frozen: np.ndarray,
    values: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    r"""Depth-first schedule over the decoding tree.

    ``messages[d]`` holds the LLRs of the node at depth ``d``
    that is currently visited,
    so the buffers hold :math:`2N` values per word in total.
    Frames are ``(depth, start, stage)``
    with stage 0 entering a node,
    stage 1 after its first half
    and stage 2 after its second half.
    Fully frozen nodes are re-encoded without visiting their leaves.

    """
    length = frozen.size
    u = np.zeros(llr.shape, dtype=np.uint8)
    x = np.zeros(llr.shape, dtype=np.uint8)
    messages = [llr] + [None] * (length.bit_length() - 1)
    frames = [(0, 0, 0)]
    while frames:
        depth, start, stage = frames.pop()
        size = length >> depth
        half = size // 2
        node = slice(start, start + size)
        if stage == 0:
            if frozen[node].all():
                u[:, node] = values[:, node]
                x[:, node] = polar_transform(values[:, node])
                continue
            if size == 1:
                u[:, start] = messages[depth][:, 0] < 0
                x[:, start] = u[:, start]
                continue
            first = messages[depth][:, :half]
            second = messages[depth][:, half:]
            messages[depth + 1] = (
                np.sign(first)
                * np.sign(second)
                * np.minimum(np.abs(first), np.abs(second))
            )
            frames.append((depth, start, 1))
            frames.append((depth + 1, start, 0))
        elif stage == 1:
            first = messages[depth][:, :half]
            second = messages[depth][:, half:]
            sign = 1 - 2 * x[:, start : start + half].astype(float)
            messages[depth + 1] = second + sign * first
            frames.append((depth, start, 2))
            frames.append((depth + 1, start + half, 0))
        else:
            x[:, start : start + half] ^= x[:, start + half : start + size]
    return u, x
