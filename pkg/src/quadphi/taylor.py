"""Truncated Taylor polynomials of the phi functions, Paterson-Stockmeyer style.

The degree-m truncation of ``phi_j`` is

    T_{j,m}(X) = sum_{k=0}^{m} (-1)^k X^k / (2k+j)!

and all of ``T_{0,m} .. T_{L,m}`` are assembled from one shared set of powers
``X, X^2, .., X^q`` with ``q = ceil(sqrt(m))``.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from .dense import DenseMatrix, DimensionError, matmul
from .family import PhiFamily

#: Degrees for which Paterson-Stockmeyer evaluation is cheapest, capped at 20.
DEGREES = (1, 2, 4, 6, 9, 12, 16, 20)


def ps_shape(m: int) -> tuple[int, int]:
    """Return ``(q, r)``: number of stored powers and number of Horner blocks."""
    q = math.isqrt(m - 1) + 1
    return q, m // q


@lru_cache(maxsize=None)
def _coeff_row(j: int, m: int) -> tuple[float, ...]:
    c = 1.0
    for i in range(1, j + 1):
        c /= i
    row = [c]
    for k in range(m):
        c = -c / ((2 * k + j + 1) * (2 * k + j + 2))
        row.append(c)
    return tuple(row)


def taylor_coeff(j: int, k: int) -> float:
    """``(-1)^k / (2k+j)!`` by multiplicative recurrence (no large factorials)."""
    if j < 0 or k < 0:
        raise ValueError("indices must be nonnegative")
    return _coeff_row(j, k)[k]


def coefficient_table(m: int, L: int) -> np.ndarray:
    """``(L+1, m+1)`` array with entry ``[j, k] = taylor_coeff(j, k)``."""
    return np.array([_coeff_row(j, m) for j in range(L + 1)])


def block_indices(m: int) -> list[list[int]]:
    """Coefficient indices consumed by each block, top block first."""
    q, r = ps_shape(m)
    blocks = [list(range(m - q, m + 1))]
    for k in range(r - 2, -1, -1):
        blocks.append(list(range(q * k, q * k + q)))
    return blocks


def _lincomb(coeffs, powers: Sequence[DenseMatrix]) -> np.ndarray:
    # powers[0] is the identity and is added on the diagonal only
    n = powers[1].shape[0]
    out = np.zeros((n, n))
    for c, p in zip(coeffs[1:], powers[1:]):
        out += c * p
    out[np.diag_indices(n)] += coeffs[0]
    return out


def ps_eval_family(m: int, L: int, powers: Sequence[DenseMatrix]) -> PhiFamily:
    """Evaluate ``T_{j,m}(X)`` for j = 0..L from ``powers = [X, X^2, .., X^q]``.

    Uses ``(L+1)*(r-1)`` matrix products on top of the supplied powers, where
    ``r = m // q``.  ``m`` must be one of :data:`DEGREES`.
    """
    if m not in DEGREES:
        raise ValueError(f"degree {m} not in {DEGREES}")
    if L < 0:
        raise ValueError("L must be nonnegative")
    q, r = ps_shape(m)
    if len(powers) != q:
        raise ValueError(f"degree {m} needs {q} powers, got {len(powers)}")
    n = powers[0].shape[0]
    for p in powers:
        if p.shape != (n, n):
            raise DimensionError("powers must share one square shape")

    allp = [None, *powers]
    coeffs = coefficient_table(m, L)
    members = []
    for j in range(L + 1):
        c = coeffs[j]
        t = _lincomb(c[m - q:m + 1], allp)
        for k in range(r - 2, -1, -1):
            t = matmul(t, allp[q]) + _lincomb(c[q * k:q * k + q], allp[:q])
        t.flags.writeable = False
        members.append(t)
    return PhiFamily(0, members)


def horner(coeffs: Sequence[float], x: DenseMatrix) -> np.ndarray:
    """Plain Horner evaluation of ``sum coeffs[k] x^k``; a test reference."""
    n = x.shape[0]
    out = coeffs[-1] * np.eye(n)
    for c in reversed(coeffs[:-1]):
        out = out @ x + c * np.eye(n)
    return out
