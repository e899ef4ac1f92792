"""Choice of Taylor degree ``m`` and scaling exponent ``s``.

The degree-m truncation error of every ``phi_j`` at X is bounded by
``h_m(eta)`` with

    h_m(theta) = sum_{k>m} theta^k / (2k)!

and ``eta`` a power-norm surrogate no larger than ``||X||_1``.  ``theta_m`` is
the largest argument with ``h_m(theta_m) <= tol``; the matrix is scaled by
``4**-s`` until its surrogate drops below some ``theta_m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np
from mpmath import mp, mpf

from .dense import DenseMatrix, as_matrix, matmul, one_norm, scale
from .taylor import ps_shape

UNIT_ROUNDOFF = 2.0**-53
DEFAULT_NU = 150
_H_PREC = 160


class BracketError(RuntimeError):
    """The theta solver could not bracket a root."""


def _h_mp(m: int, theta, nu: int):
    theta = mpf(theta)
    if theta == 0:
        return mpf(0)
    term = mpf(1)
    for k in range(m + 1):
        # term_k = theta^k / (2k)!; advance to k+1
        term = term * theta / ((2 * k + 1) * (2 * k + 2))
    total = mpf(0)
    for k in range(m + 1, m + nu + 1):
        total += term
        term = term * theta / ((2 * k + 1) * (2 * k + 2))
    return total


def h_m_truncated(m: int, theta: float, nu: int = DEFAULT_NU) -> float:
    """``sum_{k=m+1}^{m+nu} theta^k/(2k)!`` in 160-bit arithmetic, rounded to float."""
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    if nu < 1:
        raise ValueError("nu must be at least 1")
    with mp.workprec(_H_PREC):
        return float(_h_mp(m, theta, nu))


def solve_theta(m: int, tol: float = UNIT_ROUNDOFF, nu: int = DEFAULT_NU,
                rtol: float = 1e-9) -> float:
    """Largest theta with truncated ``h_m(theta) <= tol``, by bisection.

    The returned value satisfies ``h(theta) <= tol < h(theta * (1 + rtol))``.
    The initial bracket is [0, 100]; the upper end is doubled while it still
    satisfies the tolerance, which only happens for loose ``tol``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not (tol > 0 and math.isfinite(tol)):
        raise BracketError(f"tolerance must be positive and finite, got {tol}")
    with mp.workprec(_H_PREC):
        target = mpf(tol)
        lo, hi = 0.0, 100.0
        while _h_mp(m, hi, nu) <= target:
            lo, hi = hi, 2.0 * hi
            if hi > 1e12:
                raise BracketError(f"no bracket for m={m}, tol={tol}")
        while hi > lo * (1.0 + rtol):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _h_mp(m, mid, nu) <= target:
                lo = mid
            else:
                hi = mid
        if not (_h_mp(m, lo, nu) <= target < _h_mp(m, lo * (1.0 + rtol), nu)):
            raise BracketError(f"bisection did not close for m={m}")
    return lo


@dataclass(frozen=True)
class ThetaTable:
    thetas: Mapping[int, float]
    tol: float = UNIT_ROUNDOFF
    nu: int = DEFAULT_NU

    def __post_init__(self):
        object.__setattr__(self, "thetas", MappingProxyType(dict(self.thetas)))
        values = [self.thetas[m] for m in sorted(self.thetas)]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("theta values must increase with m")

    def __getitem__(self, m: int) -> float:
        return self.thetas[m]

    @classmethod
    def regenerate(cls, tol: float = UNIT_ROUNDOFF, nu: int = DEFAULT_NU,
                   max_degree: int = 20) -> "ThetaTable":
        return cls({m: solve_theta(m, tol, nu) for m in range(1, max_degree + 1)}, tol, nu)

    def rows(self):
        return sorted(self.thetas.items())


# Output of ThetaTable.regenerate() with the defaults, frozen for startup.
THETA_TABLE = ThetaTable({
    1: 5.161913648257799e-08,
    2: 4.307719974061541e-05,
    3: 0.0014545576320301734,
    4: 0.013213746092333167,
    5: 0.06131971713330131,
    6: 0.19214924614061601,
    7: 0.46845791475789156,
    8: 0.9625107537431177,
    9: 1.749801512050908,
    10: 2.904562147159595,
    11: 4.497025097953156,
    12: 6.59200768568553,
    13: 9.248374623712152,
    14: 12.519035011064261,
    15: 16.451238305307925,
    16: 21.087018598336726,
    17: 26.463695615530014,
    18: 32.614379562437534,
    19: 39.568451000377536,
    20: 47.3520019557327,
})


@dataclass(frozen=True)
class ScalingPlan:
    m: int
    s: int
    scaled_powers: tuple[DenseMatrix, ...] = field(repr=False)
    eta: float

    @property
    def q(self) -> int:
        return len(self.scaled_powers)


def select_parameters(a, table: ThetaTable = THETA_TABLE) -> ScalingPlan:
    """Pick ``(m, s)`` and return the scaled powers ``A^i / 4^(i s)``, i <= ceil(sqrt m).

    Powers are formed lazily, and norms of powers not yet formed are bounded by
    products of norms already known, so no product is spent on norm estimation
    beyond the powers that the polynomial evaluation needs anyway.
    """
    a = as_matrix(a)
    th = table.thetas
    powers = [a]
    d1 = one_norm(a)

    def plan(m, eta, s=0):
        q, _ = ps_shape(m)
        if s == 0:
            scaled = tuple(powers[:q])
        else:
            scaled = tuple(scale(p, 4.0 ** (-(i + 1) * s)) for i, p in enumerate(powers[:q]))
        return ScalingPlan(m, s, scaled, float(eta))

    if d1 <= th[1]:
        return plan(1, d1)

    powers.append(matmul(a, a))
    d2 = one_norm(powers[1])
    alpha2 = max(d2 ** 0.5, (d1 * d2) ** (1 / 3))
    eta = alpha2
    if eta <= th[2]:
        return plan(2, eta)
    if eta <= th[4]:
        return plan(4, eta)

    powers.append(matmul(powers[0], powers[1]))
    d3 = one_norm(powers[2])
    d4 = min(d1 * d3, d2 * d2)
    alpha2 = max(d2 ** 0.5, d3 ** (1 / 3))
    alpha3 = max(d3 ** (1 / 3), d4 ** 0.25)
    eta = min(alpha2, alpha3)
    if eta <= th[6]:
        return plan(6, eta)
    if eta <= th[9]:
        return plan(9, eta)

    powers.append(matmul(powers[1], powers[1]))
    d4 = one_norm(powers[3])
    d5 = min(d1 * d4, d2 * d3)
    alpha3 = max(d3 ** (1 / 3), d4 ** 0.25)
    alpha4 = max(d4 ** 0.25, d5 ** 0.2)
    eta = min(alpha2, alpha3, alpha4)
    if eta <= th[12]:
        return plan(12, eta)
    if eta <= th[16]:
        return plan(16, eta)

    powers.append(matmul(powers[0], powers[3]))
    d5 = one_norm(powers[4])
    d6 = min(d1 * d5, d2 * d4, d3 * d3)
    alpha4 = max(d4 ** 0.25, d5 ** 0.2)
    alpha5 = max(d5 ** 0.2, d6 ** (1 / 6))
    eta = min(alpha2, alpha3, alpha4, alpha5)
    if eta <= th[20]:
        return plan(20, eta)

    s = math.ceil(0.5 * math.log2(eta / th[20]))
    return plan(20, eta, s)
