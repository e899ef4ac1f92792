"""Independent references for checking :func:`quadphi.core.quadphi`.

* :func:`scalar_phi` - closed forms in terms of cos and sin of sqrt(x).
* :func:`series_reference` - the defining power series summed in mpmath
  arithmetic whose precision grows with the cancellation the series suffers.
* :func:`ode_action_oracle` / :func:`homogeneous_action_oracle` - classical
  fourth-order Runge-Kutta on the second-order problem whose solution at t=1
  is an action of a phi function.
"""
from __future__ import annotations

import math

import numpy as np
from mpmath import mp, mpf

from .dense import as_matrix
from .family import PhiFamily

MAX_NORM = 1e4
MAX_DIM = 16
# extended arithmetic never drops below this many bits
BASE_PREC = 128
_REL_STOP = mpf(2) ** -120
_ABS_STOP = mpf(2) ** -240


# -- scalar closed forms ------------------------------------------------------

def _scalar_series(l: int, x: float, terms: int) -> float:
    c = 1.0 / math.factorial(l)
    total = c
    for k in range(terms - 1):
        c = -c * x / ((2 * k + l + 1) * (2 * k + l + 2))
        total += c
    return total


def scalar_phi(l: int, x: float) -> float:
    """phi_l(x) for l <= 3 and x >= 0 from cos/sin of sqrt(x)."""
    if l < 0 or l > 3:
        raise ValueError("closed forms cover l = 0..3; use series_reference for more")
    if x < 0:
        raise ValueError("x must be nonnegative")
    r = math.sqrt(x)
    if l == 0:
        return math.cos(r)
    if l == 1:
        if x < 1e-8:
            return _scalar_series(1, x, 5)
        return math.sin(r) / r
    if l == 2:
        if x < 1e-8:
            return _scalar_series(2, x, 5)
        # 1 - cos r = 2 sin^2(r/2) avoids the cancellation
        h = math.sin(0.5 * r)
        return 2.0 * h * h / x
    # r - sin r cancels badly for small r
    if x < 1.0:
        return _scalar_series(3, x, 14)
    return (r - math.sin(r)) / (x * r)


# -- extended-precision series ------------------------------------------------

def _log2_peak_term(norm: float) -> float:
    """log2 of max_k norm^k / (2k)!."""
    if norm <= 0:
        return 0.0
    best, log_t, k = 0.0, 0.0, 0
    ln = math.log2(norm)
    while True:
        k += 1
        log_t += ln - math.log2((2 * k - 1) * (2 * k))
        best = max(best, log_t)
        if k * k > norm and log_t < best - 1:
            return best


def _to_mp(a) -> np.ndarray:
    a = np.asarray(a)
    return np.vectorize(mpf, otypes=[object])(a) if a.dtype != object else a.copy()


def _norm1_mp(a: np.ndarray):
    return max(sum(abs(v) for v in col) for col in a.T)


def series_reference_ext(a, L: int):
    """Sum the phi_0..phi_L series in extended precision.

    ``a`` may hold floats or mpmath numbers.  Returns ``(members, prec)`` where
    ``members`` are object arrays of ``mpf`` valid at ``prec`` bits; evaluate
    any further arithmetic on them inside ``mp.workprec(prec)``.
    """
    if L < 0:
        raise ValueError("L must be nonnegative")
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix")
    n = arr.shape[0]
    norm = float(np.abs(arr.astype(float)).sum(axis=0).max())
    if n > MAX_DIM or norm > MAX_NORM * (1 + 1e-12):
        raise ValueError(f"series oracle limited to n <= {MAX_DIM}, ||A||_1 <= {MAX_NORM:g}")
    if not math.isfinite(norm):
        raise ValueError("matrix has non-finite entries")

    prec = BASE_PREC + 16 + int(math.ceil(_log2_peak_term(norm))) + n.bit_length()
    with mp.workprec(prec):
        A = _to_mp(arr)
        normA = _norm1_mp(A)
        eye = np.array([[mpf(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
        coeffs = [mpf(1) / math.factorial(l) for l in range(L + 1)]
        sums = [c * eye for c in coeffs]
        power = eye
        bound = mpf(1)
        k = 0
        while True:
            k += 1
            power = power.dot(A)
            for l in range(L + 1):
                coeffs[l] = -coeffs[l] / ((2 * k + l - 1) * (2 * k + l))
                sums[l] = sums[l] + coeffs[l] * power
            bound = bound * normA / ((2 * k - 1) * (2 * k))
            if k * k <= normA:
                continue
            # the next omitted term (and all after it) is below this bound
            nxt = bound * normA / ((2 * k + 1) * (2 * k + 2))
            smallest = min(_norm1_mp(s) for s in sums)
            if nxt <= _REL_STOP * smallest or nxt <= _ABS_STOP:
                break
    return sums, prec


def series_reference(a, L: int) -> PhiFamily:
    """phi_0(A)..phi_L(A) from the power series, rounded to double precision."""
    sums, _ = series_reference_ext(a, L)
    members = [np.array(s.tolist(), dtype=float).reshape(s.shape) for s in sums]
    return PhiFamily(0, members)


def recurrence_residual_ext(a, sums, prec) -> list:
    """``||S_l - (I/l! - A S_{l+2})||_1 / max(1, ||S_l||_1)`` in extended precision."""
    out = []
    with mp.workprec(prec):
        A = _to_mp(np.asarray(a))
        n = A.shape[0]
        for l in range(len(sums) - 2):
            r = sums[l] + A.dot(sums[l + 2])
            for i in range(n):
                r[i, i] -= mpf(1) / math.factorial(l)
            out.append(_norm1_mp(r) / max(mpf(1), _norm1_mp(sums[l])))
    return out


# -- Runge-Kutta action oracles -----------------------------------------------

def _rk4(a: np.ndarray, y: np.ndarray, v: np.ndarray, steps: int, forcing):
    h = 1.0 / steps

    def f(t, y, v):
        acc = -(a @ y)
        if forcing is not None:
            acc = acc + forcing(t)
        return v, acc

    t = 0.0
    for i in range(steps):
        k1y, k1v = f(t, y, v)
        k2y, k2v = f(t + 0.5 * h, y + 0.5 * h * k1y, v + 0.5 * h * k1v)
        k3y, k3v = f(t + 0.5 * h, y + 0.5 * h * k2y, v + 0.5 * h * k2v)
        k4y, k4v = f(t + h, y + h * k3y, v + h * k3v)
        y = y + (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        t = (i + 1) * h
    return y, v


def ode_action_oracle(a, u, L: int, steps: int = 10_000) -> np.ndarray:
    """phi_L(A) u as y(1) for y'' + A y = t^(L-2)/(L-2)! u, y(0) = y'(0) = 0."""
    if L < 2:
        raise ValueError("forced problem needs L >= 2; use homogeneous_action_oracle")
    if steps < 100:
        raise ValueError("use at least 100 steps")
    a = as_matrix(a)
    u = np.asarray(u, dtype=float)
    if u.shape != (a.shape[0],):
        raise ValueError("vector length does not match matrix size")
    scale = 1.0 / math.factorial(L - 2)
    p = L - 2
    y, _ = _rk4(a, np.zeros_like(u), np.zeros_like(u), steps,
                lambda t: (scale * t ** p) * u)
    return y


def homogeneous_action_oracle(a, y0, y0p, steps: int = 10_000):
    """``(y(1), y'(1))`` for y'' + A y = 0; ``y(1) = phi_0(A) y0 + phi_1(A) y0p``."""
    a = as_matrix(a)
    y0 = np.asarray(y0, dtype=float)
    y0p = np.asarray(y0p, dtype=float)
    if y0.shape != (a.shape[0],) or y0p.shape != y0.shape:
        raise ValueError("vector length does not match matrix size")
    return _rk4(a, y0, y0p, steps, None)
