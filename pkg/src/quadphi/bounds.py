"""Forward error bounds for the quadruple-angle restoring recurrence.

These propagate an assumed initial (Taylor) error through ``s`` restoring
steps.  They hold only under the hypothesis that the relative error in the
phi_0 and phi_1 approximations stays below 5% at every level, which cannot be
checked at runtime, and the norms fed in are those of the computed family.
Treat the numbers as diagnostics rather than certificates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .params import UNIT_ROUNDOFF

GROWTH = 4.1
OFFSET = 0.25


def _check(norms: Sequence[Sequence[float]], e0: float, L: int) -> None:
    if not norms:
        raise ValueError("norm table is empty")
    if any(len(row) < L + 1 for row in norms):
        raise ValueError(f"every level needs norms for k = 0..{L}")
    if not e0 > 0:
        raise ValueError("initial error must be positive")


def forward_bound(norms: Sequence[Sequence[float]], e0: float, L: int,
                  s: Optional[int] = None) -> list[float]:
    """Bound on ``||E_{k,s}||`` for k = 0..L.

    ``norms[i][k]`` holds ``||C_{k,i}||`` for levels i = 0..s (level s itself
    is not used).  ``s`` defaults to ``len(norms) - 1``.
    """
    _check(norms, e0, L)
    if s is None:
        s = len(norms) - 1
    out = []
    for k in range(L + 1):
        factor = 1.0
        for i in range(s):
            cmax = max(norms[i][: k + 1])
            factor *= GROWTH * cmax if k <= 1 else GROWTH * cmax + OFFSET
        out.append(factor * e0)
    return out


def psd_bound(e0: float, L: int, s: int) -> list[float]:
    """Simplified bound when every ``||C_{k,i}||_2 <= 1`` (A positive semidefinite)."""
    return [(GROWTH if k <= 1 else GROWTH + OFFSET) ** s * e0 for k in range(L + 1)]


def exact_leading_bound(norms: Sequence[Sequence[float]], e0: float, L: int,
                        s: Optional[int] = None) -> list[float]:
    """Bound assuming phi_0 and phi_1 at the scaled argument are exact."""
    _check(norms, e0, L)
    if s is None:
        s = len(norms) - 1
    out = []
    for k in range(L + 1):
        if k <= 1:
            out.append(0.0)
            continue
        factor = 1.0
        for i in range(s):
            factor *= 0.25 * (max(norms[i][0], norms[i][1]) + 1.0)
        out.append(factor * e0)
    return out


@dataclass(frozen=True)
class ErrorBoundReport:
    level_norms: tuple[tuple[float, ...], ...]
    initial_error: float
    bounds: tuple[float, ...]
    psd_bound: Optional[tuple[float, ...]] = None
    # Bounds rely on the unverifiable 5% relative-error hypothesis.
    conditional: bool = True

    @property
    def s(self) -> int:
        return len(self.level_norms) - 1

    def rows(self):
        for k, b in enumerate(self.bounds):
            yield k, b, (self.psd_bound[k] if self.psd_bound is not None else None)


def report_for_run(run, e0: Optional[float] = None, psd: bool = False) -> ErrorBoundReport:
    """Build a report from a :class:`quadphi.core.QuadPhiRun`.

    The default initial error is ``u * (1 + max_j ||T_{j,m}||_1)`` with
    ``u = 2**-53``.
    """
    norms = run.level_norms
    L = len(norms[0]) - 1
    if e0 is None:
        e0 = UNIT_ROUNDOFF * (1.0 + max(norms[0]))
    bounds = forward_bound(norms, e0, L)
    pb = tuple(psd_bound(e0, L, len(norms) - 1)) if psd else None
    return ErrorBoundReport(norms, e0, tuple(bounds), pb)
