"""
Deterministic pairwise summation.

The reduction tree is fixed: the input is zero-padded to a power of two and
adjacent pairs are added level by level. Work split across threads uses
power-of-two aligned blocks, so every block is a subtree of the serial tree
and the result is bit-identical for any worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np


def _next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def _fold(values: np.ndarray) -> complex:
    a = values
    while a.size > 1:
        a = a[0::2] + a[1::2]
    return complex(a[0])


def pairwise_sum(values: Sequence[complex], jobs: int = 1) -> complex:
    """
    Sum values along a fixed balanced binary tree.

    Args:
        values: Terms in their canonical order
        jobs: Worker threads; does not change the result

    Returns:
        The sum as a Python complex
    """
    arr = np.asarray(values, dtype=np.complex128).ravel()
    if arr.size == 0:
        return 0j
    size = _next_pow2(arr.size)
    padded = np.zeros(size, dtype=np.complex128)
    padded[:arr.size] = arr

    blocks = min(_next_pow2(max(jobs, 1)), size)
    if blocks <= 1:
        return _fold(padded)

    width = size // blocks
    chunks = [padded[i * width:(i + 1) * width] for i in range(blocks)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        partial = list(pool.map(_fold, chunks))
    return _fold(np.asarray(partial, dtype=np.complex128))
