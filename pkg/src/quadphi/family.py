from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dense import DenseMatrix, DimensionError


@dataclass(frozen=True)
class PhiFamily:
    """Approximations ``members[k] ~ phi_k(4**level * X)`` for k = 0..L."""

    level: int
    members: tuple[DenseMatrix, ...]

    def __init__(self, level: int, members: Sequence[DenseMatrix]):
        members = tuple(members)
        if not members:
            raise ValueError("a family needs at least phi_0")
        shape = members[0].shape
        for c in members:
            if c.ndim != 2 or c.shape != shape or shape[0] != shape[1]:
                raise DimensionError("family members must be square and of equal size")
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "members", members)

    @property
    def L(self) -> int:
        return len(self.members) - 1

    @property
    def n(self) -> int:
        return self.members[0].shape[0]

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, k: int) -> DenseMatrix:
        return self.members[k]

    def __iter__(self):
        return iter(self.members)

    def stack(self) -> np.ndarray:
        """Members as one ``(L+1, n, n)`` array."""
        return np.stack(self.members)
