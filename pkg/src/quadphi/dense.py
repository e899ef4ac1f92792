"""Dense square-matrix substrate.

Matrices are plain ``numpy.ndarray`` values of dtype float64.  Every function
here returns a fresh, read-only array so that callers can hold on to old
values without defensive copies.

All matrix-matrix products in the package go through :func:`matmul`, which is
what :func:`count_products` instruments.
"""
from __future__ import annotations

import threading
from contextlib import contextmanager
from typing import Iterator

import numpy as np

DenseMatrix = np.ndarray


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


class ProductCounter:
    """Number of matrix-matrix products seen while the counter is active."""

    def __init__(self) -> None:
        self.count = 0

    def __repr__(self) -> str:
        return f"ProductCounter(count={self.count})"


_lock = threading.Lock()
_active: list[ProductCounter] = []


@contextmanager
def count_products() -> Iterator[ProductCounter]:
    """Count calls to :func:`matmul` made inside the ``with`` block.

    Counters nest; an inner block's products are also seen by outer blocks.
    """
    counter = ProductCounter()
    with _lock:
        _active.append(counter)
    try:
        yield counter
    finally:
        with _lock:
            _active.remove(counter)


def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_matrix(a) -> DenseMatrix:
    """Validate ``a`` as a finite square real matrix and return a float64 copy."""
    arr = np.array(a, dtype=np.float64, order="C")
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return _freeze(arr)


def _check_pair(a: DenseMatrix, b: DenseMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Matrix product ``a @ b``; counted by any active :func:`count_products`."""
    _check_pair(a, b)
    out = np.matmul(a, b)
    if _active:
        with _lock:
            for counter in _active:
                counter.count += 1
    return _freeze(out)


def one_norm(a: DenseMatrix) -> float:
    """Maximum absolute column sum."""
    if a.size == 0:
        return 0.0
    return float(np.abs(a).sum(axis=0).max())


def scale(a: DenseMatrix, c: float) -> DenseMatrix:
    return _freeze(np.multiply(a, c))


def add(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    _check_pair(a, b)
    return _freeze(np.add(a, b))


def identity(n: int) -> DenseMatrix:
    if n < 1:
        raise DimensionError("dimension must be positive")
    return _freeze(np.eye(n))


def naive_matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Triple-loop product used as a reference in tests; never counted."""
    _check_pair(a, b)
    n = a.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out
