"""Invariant suites shared by the ``verify`` command and the acceptance tests.

Each suite returns :class:`Check` rows; a suite passes when every row does.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from . import mmio
from .bounds import forward_bound, psd_bound
from .core import QuadPhiRun, phi_action, quad_step, quadphi, quadphi_run
from .dense import one_norm
from .family import PhiFamily
from .gallery import DEFAULT_SUITE, GallerySpec, generate, is_psd
from .oracle import ode_action_oracle, scalar_phi, series_reference, series_reference_ext
from .params import UNIT_ROUNDOFF, select_parameters
from .taylor import DEGREES

L_MAX = 7

ORACLE_RTOL = 1e-11
PYTHAGOREAN_TOL = 1e-12
RECURRENCE_TOL = 1e-11
QUADRUPLE_RTOL = 1e-11
ADDITION_TOL = 1e-12
ACTION_ATOL = 1e-8


@dataclass(frozen=True)
class Check:
    case: str
    metric: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.threshold)

    def row(self):
        return (self.case, self.metric, float(self.value), float(self.threshold),
                "true" if self.passed else "false")


CSV_HEADER = ("case", "metric", "value", "threshold", "pass")


def all_passed(checks: Iterable[Check]) -> bool:
    return all(c.passed for c in checks)


def rel_err(x: np.ndarray, ref: np.ndarray) -> float:
    d = one_norm(x - ref)
    r = one_norm(ref)
    return d / r if r > 0 else d


# -- seeded random instances --------------------------------------------------

# Spectrum on or near the nonnegative real axis (the oscillatory regime) up to
# norm 1e3, plus general dense matrices up to norm 1e2.  General matrices of
# larger norm make phi grow like cosh(sqrt|lambda|) and an absolute residual
# tolerance is then out of reach in double precision.
_IDENTITY_FAMILIES = (("symmetric-psd", 1e3), ("nonnormal-triangular", 1e3), ("random-dense", 1e2))


def identity_instances(trials: int = 100, seed: int = 0, n: int = 8):
    for i in range(trials):
        name, top = _IDENTITY_FAMILIES[i % len(_IDENTITY_FAMILIES)]
        frac = i / max(trials - 1, 1)
        norm = min(top, 10.0 ** (-3 + 6 * frac))
        yield GallerySpec(name, n, seed + i, {"norm": norm})


def dense_instances(trials: int, seed: int, n: int, max_norm: float, decades: float):
    for i in range(trials):
        frac = i / max(trials - 1, 1)
        yield GallerySpec("random-dense", n, seed + i, {"norm": max_norm * 10.0 ** (-decades * frac)})


# -- cached oracle values for the gallery ------------------------------------

@lru_cache(maxsize=None)
def gallery_reference(spec: GallerySpec) -> PhiFamily:
    return series_reference(generate(spec), L_MAX)


@lru_cache(maxsize=None)
def gallery_run(spec: GallerySpec) -> QuadPhiRun:
    return quadphi_run(generate(spec), L_MAX)


# -- suites -------------------------------------------------------------------

def identity_checks(a: np.ndarray, fam: PhiFamily, case: str) -> list[Check]:
    n = a.shape[0]
    na = one_norm(a)
    c0, c1 = fam[0], fam[1]
    pyth = one_norm(c0 @ c0 + a @ (c1 @ c1) - np.eye(n))
    out = [Check(case, "pythagorean", pyth, PYTHAGOREAN_TOL * (1 + na * na))]
    cmax = max(one_norm(c) for c in fam)
    worst = 0.0
    for l in range(fam.L - 1):
        r = one_norm(fam[l] - (np.eye(n) / math.factorial(l) - a @ fam[l + 2]))
        worst = max(worst, r)
    out.append(Check(case, "recurrence", worst, RECURRENCE_TOL * (1 + na) * cmax))
    return out


def suite_identities(seed: int = 0, trials: int = 100) -> list[Check]:
    checks = []
    for spec in identity_instances(trials, seed):
        a = generate(spec)
        checks += identity_checks(a, quadphi(a, L_MAX + 2), spec.label)
    for spec in DEFAULT_SUITE:
        a = generate(spec)
        fam = quadphi(a, L_MAX + 2)
        if one_norm(fam[0]) < 1e3:
            checks += identity_checks(a, fam, "gallery:" + spec.label)
    return checks


def suite_oracle(seed: int = 0, trials: int = 0) -> list[Check]:
    checks = []
    for spec in DEFAULT_SUITE:
        fam = gallery_run(spec).family
        ref = gallery_reference(spec)
        for k in range(L_MAX + 1):
            checks.append(Check(spec.label, f"rel_err_phi{k}", rel_err(fam[k], ref[k]), ORACLE_RTOL))
    return checks


def nominal_initial_error(run: QuadPhiRun) -> float:
    """``u * (1 + max_j ||T_{j,m}||_1)``."""
    return UNIT_ROUNDOFF * (1.0 + max(run.taylor_norms))


def measured_initial_error(run: QuadPhiRun, a: np.ndarray) -> float:
    """``max_j ||T_{j,m}(X) - phi_j(X)||_1`` at the scaled argument, from the oracle."""
    from .taylor import ps_eval_family

    L = len(run.taylor_norms) - 1
    x = np.asarray(a) * 4.0 ** (-run.plan.s)
    taylor = ps_eval_family(run.plan.m, L, run.plan.scaled_powers)
    ref = series_reference(x, L)
    return max(one_norm(taylor[k] - ref[k]) for k in range(L + 1))


def bound_checks(spec: GallerySpec, e0_mode: str = "nominal") -> list[Check]:
    run = gallery_run(spec)
    ref = gallery_reference(spec)
    a = generate(spec)
    if e0_mode == "nominal":
        e0 = nominal_initial_error(run)
    else:
        e0 = max(measured_initial_error(run, a), UNIT_ROUNDOFF * 1e-3)
    s = run.plan.s
    bounds = forward_bound(run.level_norms, e0, L_MAX)
    # equality is reached when s = 0 and e0 is measured; allow for rounding
    slack = 1.0 + 1e-9
    checks = []
    for k in range(L_MAX + 1):
        obs = one_norm(run.family[k] - ref[k])
        checks.append(Check(spec.label, f"{e0_mode}_bound_phi{k}", obs, bounds[k] * slack))
    if is_psd(spec):
        pb = psd_bound(e0, L_MAX, s)
        for k in range(L_MAX + 1):
            obs = np.linalg.norm(run.family[k] - ref[k], 2)
            checks.append(Check(spec.label, f"{e0_mode}_psd_bound_phi{k}", obs, pb[k] * slack))
    return checks


def suite_bounds(seed: int = 0, trials: int = 0, modes=("nominal", "measured")) -> list[Check]:
    checks = []
    for mode in modes:
        for spec in DEFAULT_SUITE:
            checks += bound_checks(spec, mode)
    return checks


def suite_gallery(seed: int = 0, trials: int = 0, workdir=None) -> list[Check]:
    import tempfile
    from pathlib import Path

    checks = []
    seen = set()
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        for spec in DEFAULT_SUITE:
            a = generate(spec)
            plan = select_parameters(a)
            seen.add((plan.m, plan.s > 0))
            path = Path(tmp) / f"{spec.label}.mtx"
            mmio.write_mtx(path, a)
            back = mmio.read_mtx(path)
            same = back.shape == a.shape and np.array_equal(back.view(np.uint64), a.view(np.uint64))
            checks.append(Check(spec.label, "mtx_roundtrip_mismatch", 0.0 if same else 1.0, 0.0))
            again = generate(spec)
            checks.append(Check(spec.label, "regenerate_mismatch",
                                0.0 if np.array_equal(a, again) else 1.0, 0.0))
    for m in DEGREES:
        checks.append(Check(f"branch m={m} s=0", "missing", 0.0 if (m, False) in seen else 1.0, 0.0))
    checks.append(Check("branch s>=1", "missing", 0.0 if (20, True) in seen else 1.0, 0.0))
    checks.append(Check("suite", "size_shortfall", max(0, 30 - len(DEFAULT_SUITE)), 0.0))
    return checks


def suite_action(seed: int = 0, trials: int = 20, steps: int = 10_000) -> list[Check]:
    checks = []
    for i, spec in enumerate(dense_instances(trials, seed + 200, 6, 50.0, 2.0)):
        a = generate(spec)
        L = 2 + i % 6
        b = np.ones(6)
        err = float(np.abs(phi_action(a, b, L) - ode_action_oracle(a, b, L, steps)).max())
        checks.append(Check(spec.label, f"action_abs_err_L{L}", err, ACTION_ATOL))
    return checks


def suite_quadruple(seed: int = 0, trials: int = 50) -> list[Check]:
    checks = []
    for spec in dense_instances(trials, seed + 100, 6, 50.0, 3.0):
        a = generate(spec)
        direct = quadphi(4.0 * a, L_MAX)
        stepped = quad_step(quadphi(a, L_MAX))
        worst = max(rel_err(stepped[k], direct[k]) for k in range(L_MAX + 1))
        checks.append(Check(spec.label, "quadruple_rel_err", worst, QUADRUPLE_RTOL))
    return checks


# -- addition formula -----------------------------------------------------------

def addition_residuals(phi: Callable[[float], list], a_coef: float, b_coef: float, A, l: int):
    """Relative residuals of both addition identities for one ``l >= 2``.

    ``phi(t)`` must return the family ``phi_0..phi_l`` evaluated at ``t * A``
    (matrices, or 1x1 matrices in the scalar case).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    ab = a_coef + b_coef
    full = phi(ab * ab)
    fa = phi(a_coef * a_coef)
    fb = phi(b_coef * b_coef)
    lhs1 = ab ** l * full[l]
    rhs1 = a_coef ** l * fb[0] @ fa[l] + a_coef ** (l - 1) * b_coef * fb[1] @ fa[l - 1]
    lhs2 = ab ** (l - 1) * full[l - 1]
    rhs2 = -a_coef ** l * b_coef * A @ fb[1] @ fa[l] + a_coef ** (l - 1) * fb[0] @ fa[l - 1]
    for k in range(2, l + 1):
        w = a_coef ** (l - k) / math.factorial(l - k)
        rhs1 = rhs1 + w * b_coef ** k * fb[k]
        rhs2 = rhs2 + w * b_coef ** (k - 1) * fb[k - 1]
    r1 = one_norm(lhs1 - rhs1) / max(1.0, one_norm(lhs1))
    r2 = one_norm(lhs2 - rhs2) / max(1.0, one_norm(lhs2))
    return r1, r2


ADDITION_PAIRS = ((0.7, 0.3), (1.5, -0.5))


def suite_addition(seed: int = 0, trials: int = 3) -> list[Check]:
    checks = []
    scalars = (0.1, 1.0, 10.0)

    for x in scalars:
        A = np.array([[x]])

        def closed(t, x=x):
            return [np.array([[scalar_phi(k, t * x)]]) for k in range(4)]

        for a_coef, b_coef in ADDITION_PAIRS:
            for l in (2, 3):
                r1, r2 = addition_residuals(closed, a_coef, b_coef, A, l)
                case = f"scalar x={x} a={a_coef} b={b_coef}"
                checks.append(Check(case, f"closed_form_l{l}", max(r1, r2), ADDITION_TOL))

    cases = [(f"scalar x={x}", np.array([[x]])) for x in scalars]
    cases += [(s.label, generate(s)) for s in dense_instances(trials, seed + 300, 3, 5.0, 1.0)]
    for case, A in cases:
        for label, fn in (("series", series_reference), ("quadphi", quadphi)):
            cache = {}

            def phi(t, A=A, fn=fn, cache=cache):
                if t not in cache:
                    cache[t] = fn(t * A, L_MAX)
                return cache[t]

            for a_coef, b_coef in ADDITION_PAIRS:
                worst = 0.0
                for l in range(2, L_MAX + 1):
                    worst = max(worst, *addition_residuals(phi, a_coef, b_coef, A, l))
                checks.append(Check(f"{case} a={a_coef} b={b_coef}", f"{label}_addition", worst, ADDITION_TOL))
    return checks


SUITES = {
    "identities": suite_identities,
    "oracle": suite_oracle,
    "bounds": suite_bounds,
    "gallery": suite_gallery,
    "action": suite_action,
}
