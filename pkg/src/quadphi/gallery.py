"""Small deterministic test matrices.

Randomized members draw from Philox4x64-10 keyed directly by the integer
seed (``numpy.random.Philox(key=seed)``: key words ``(seed, 0)``, first block
at counter ``(1, 0, 0, 0)``, the four output words of each block used in
order).  Each raw 64-bit output ``x`` becomes the double
``(x >> 11) * 2**-53`` in [0, 1) and then ``2*u - 1`` in [-1, 1); entries are
filled row-major.  Nothing else in the stream is used, so the construction is
easy to reproduce elsewhere.

Every generator is normalized to an exact target 1-norm where that makes
sense (``norm`` parameter), then returned as a read-only float64 array.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .dense import DenseMatrix, as_matrix, one_norm

MAX_DIM = 32


@dataclass(frozen=True)
class GallerySpec:
    name: str
    n: int
    seed: int = 0
    params: Mapping[str, float] = field(default_factory=dict)

    def __hash__(self) -> int:
        return hash((self.name, self.n, self.seed, tuple(sorted(self.params.items()))))

    @property
    def label(self) -> str:
        extra = "".join(f"_{k}{v:g}" for k, v in sorted(self.params.items()))
        return f"{self.name}_n{self.n}_s{self.seed}{extra}"


def uniform_stream(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in [-1, 1) from the documented Philox stream."""
    raw = np.random.Philox(key=seed).random_raw(count)
    u = (np.asarray(raw, dtype=np.uint64) >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return 2.0 * u - 1.0


def _uniform(spec: GallerySpec) -> np.ndarray:
    return uniform_stream(spec.seed, spec.n * spec.n).reshape(spec.n, spec.n)


def _normalize(a: np.ndarray, spec: GallerySpec, default: float = 1.0) -> np.ndarray:
    target = spec.params.get("norm", default)
    nrm = one_norm(a)
    return a if nrm == 0 else a * (target / nrm)


def _zero(spec):
    return np.zeros((spec.n, spec.n))


def _identity_scaled(spec):
    return spec.params.get("c", 1.0) * np.eye(spec.n)


def _diag_logspace(spec):
    lo = spec.params.get("lo", 1e-3)
    hi = spec.params.get("hi", 1e3)
    return np.diag(np.logspace(np.log10(lo), np.log10(hi), spec.n))


def _jordan_block(spec):
    lam = spec.params.get("lam", 1.0)
    return lam * np.eye(spec.n) + np.eye(spec.n, k=1)


def _symmetric_psd(spec):
    b = _uniform(spec)
    return _normalize(b @ b.T, spec)


def _symmetric_indefinite(spec):
    b = _uniform(spec)
    return _normalize(0.5 * (b + b.T), spec)


def _nonnormal_triangular(spec):
    b = _uniform(spec)
    coupling = spec.params.get("coupling", 1.0)
    a = coupling * np.triu(b, 1) + np.diag(0.5 * (np.diag(b) + 1.0))
    return _normalize(a, spec)


def _random_dense(spec):
    return _normalize(_uniform(spec), spec)


def _nilpotent(spec):
    return _normalize(np.triu(_uniform(spec), 1), spec)


def _rotation_like(spec):
    n = spec.n
    freqs = 0.5 * (uniform_stream(spec.seed, n // 2) + 1.0) + 0.1
    a = np.zeros((n, n))
    for i, w in enumerate(freqs):
        a[2 * i, 2 * i + 1] = w
        a[2 * i + 1, 2 * i] = -w
    return _normalize(a, spec)


GENERATORS: Mapping[str, Callable[[GallerySpec], np.ndarray]] = {
    "zero": _zero,
    "identity-scaled": _identity_scaled,
    "diag-logspace": _diag_logspace,
    "jordan-block": _jordan_block,
    "symmetric-psd": _symmetric_psd,
    "symmetric-indefinite": _symmetric_indefinite,
    "nonnormal-triangular": _nonnormal_triangular,
    "random-dense": _random_dense,
    "nilpotent": _nilpotent,
    "rotation-like": _rotation_like,
}

#: Members whose matrices are symmetric positive semidefinite by construction.
PSD_FAMILIES = {"zero", "diag-logspace", "symmetric-psd"}


def is_psd(spec: GallerySpec) -> bool:
    if spec.name == "identity-scaled":
        return spec.params.get("c", 1.0) >= 0
    if spec.name == "diag-logspace":
        return spec.params.get("lo", 1e-3) >= 0
    return spec.name in PSD_FAMILIES


def generate(spec: GallerySpec) -> DenseMatrix:
    try:
        gen = GENERATORS[spec.name]
    except KeyError:
        raise ValueError(f"unknown gallery matrix {spec.name!r}; known: {sorted(GENERATORS)}") from None
    if not 1 <= spec.n <= MAX_DIM:
        raise ValueError(f"dimension must be in 1..{MAX_DIM}")
    return as_matrix(gen(spec))


def _g(name, n, seed=0, **params):
    return GallerySpec(name, n, seed, params)


# Norms run from 1e-6 to 1e4; the first block pins each (m, s) branch of
# parameter selection, the rest cover structure.
DEFAULT_SUITE: tuple[GallerySpec, ...] = (
    _g("zero", 4),
    _g("identity-scaled", 5, c=3e-8),
    _g("identity-scaled", 6, c=2e-5),
    _g("random-dense", 8, 1, norm=1e-3),
    _g("symmetric-psd", 8, 2, norm=0.1),
    _g("random-dense", 8, 3, norm=1.0),
    _g("symmetric-indefinite", 10, 4, norm=5.0),
    _g("symmetric-psd", 10, 5, norm=15.0),
    _g("identity-scaled", 3, c=40.0),
    _g("identity-scaled", 8, c=1000.0),
    _g("diag-logspace", 5, lo=1e-3, hi=1e3),
    _g("diag-logspace", 12, lo=1e-6, hi=1e4),
    _g("jordan-block", 3, lam=2.0),
    _g("jordan-block", 6, lam=-3.0),
    _g("jordan-block", 8, lam=50.0),
    _g("symmetric-psd", 16, 6, norm=1e4),
    _g("symmetric-psd", 4, 7, norm=1e-6),
    _g("symmetric-psd", 12, 8, norm=300.0),
    _g("symmetric-indefinite", 6, 9, norm=100.0),
    _g("symmetric-indefinite", 16, 10, norm=1e3),
    _g("nonnormal-triangular", 8, 11, norm=10.0, coupling=1.0),
    _g("nonnormal-triangular", 10, 12, norm=200.0, coupling=5.0),
    _g("nonnormal-triangular", 6, 13, norm=1e-4, coupling=0.5),
    _g("random-dense", 4, 14, norm=30.0),
    _g("random-dense", 12, 15, norm=500.0),
    _g("random-dense", 16, 16, norm=2e3),
    _g("nilpotent", 6, 17, norm=1.0),
    _g("nilpotent", 10, 18, norm=1e3),
    _g("rotation-like", 4, 19, norm=2.0),
    _g("rotation-like", 8, 20, norm=80.0),
    _g("rotation-like", 7, 21, norm=1e3),
    _g("diag-logspace", 16, lo=1.0, hi=5e3),
)


def default_suite() -> list[tuple[GallerySpec, DenseMatrix]]:
    return [(spec, generate(spec)) for spec in DEFAULT_SUITE]
