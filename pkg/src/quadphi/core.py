"""Scaling and restoring driver for the phi family.

``quadphi`` evaluates Taylor approximations of phi_0..phi_L at ``4**-s A`` and
undoes the scaling with ``s`` applications of the quadruple-angle recurrence

    C0+ = 2 C0^2 - I
    C1+ = C0 C1
    Ck+ = 2^-k (C0 Ck + C1 C(k-1) + sum_{j=2..k} Cj / (k-j)!),   k >= 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dense import DenseMatrix, as_matrix, matmul, one_norm
from .family import PhiFamily
from .params import THETA_TABLE, ScalingPlan, ThetaTable, select_parameters
from .taylor import ps_eval_family


@lru_cache(maxsize=None)
def _weights(L: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    inv_fact = [1.0]
    for i in range(1, L + 1):
        inv_fact.append(inv_fact[-1] / i)
    halves = tuple(2.0 ** -k for k in range(L + 1))
    return tuple(inv_fact), halves


def quad_step(fam: PhiFamily) -> PhiFamily:
    """Map the family at level i to level i+1.

    Every right-hand side reads the input family; nothing is updated in place.
    """
    c = fam.members
    L = fam.L
    n = fam.n
    inv_fact, halves = _weights(L)
    diag = np.diag_indices(n)

    c0sq = matmul(c[0], c[0])
    new0 = 2.0 * c0sq
    new0[diag] -= 1.0
    out = [new0]
    if L >= 1:
        out.append(np.array(matmul(c[0], c[1])))
    for k in range(2, L + 1):
        acc = matmul(c[0], c[k]) + matmul(c[1], c[k - 1])
        for j in range(2, k + 1):
            acc += inv_fact[k - j] * c[j]
        acc *= halves[k]
        out.append(acc)
    for m in out:
        m.flags.writeable = False
    return PhiFamily(fam.level + 1, out)


@dataclass(frozen=True)
class QuadPhiRun:
    """Result of :func:`quadphi_run`.

    ``level_norms[i][k]`` is the 1-norm of the computed ``C_{k,i}``, for
    levels i = 0..s; the level-0 family is the Taylor approximation.
    """

    family: PhiFamily
    plan: ScalingPlan
    level_norms: tuple[tuple[float, ...], ...]

    @property
    def taylor_norms(self) -> tuple[float, ...]:
        return self.level_norms[0]


def quadphi_run(a, L: int, table: ThetaTable = THETA_TABLE) -> QuadPhiRun:
    if L < 0:
        raise ValueError("L must be nonnegative")
    a = as_matrix(a)
    plan = select_parameters(a, table)
    fam = ps_eval_family(plan.m, L, plan.scaled_powers)
    norms = [tuple(one_norm(c) for c in fam)]
    for _ in range(plan.s):
        fam = quad_step(fam)
        norms.append(tuple(one_norm(c) for c in fam))
    return QuadPhiRun(fam, plan, tuple(norms))


def quadphi(a, L: int, table: ThetaTable = THETA_TABLE) -> PhiFamily:
    """Approximate ``phi_0(A), .., phi_L(A)``.  The result's ``level`` is ``s``."""
    return quadphi_run(a, L, table).family


def phi_action(a, b, L: int) -> np.ndarray:
    """``phi_L(A) @ b`` via the full matrix function."""
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != a.shape[0]:
        raise ValueError(f"vector length {b.shape[0]} does not match matrix size {a.shape[0]}")
    return quadphi(a, L)[L] @ b


def zero_family(n: int, L: int) -> PhiFamily:
    """Exact values at A = 0: ``I / k!``."""
    inv_fact, _ = _weights(L)
    return PhiFamily(0, [f * np.eye(n) for f in inv_fact])
