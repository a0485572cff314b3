"""The ZPoint type: a symmetric matrix of pairwise values ``z_ij`` in ``[0, 2]``."""
from __future__ import annotations

import numpy as np

from .graphs import pairs

SYMMETRY_TOL = 1e-12
RANGE_TOL = 1e-9


class ZPoint:
    """Point of the relaxation: ``z_ij = 1 - <v_i, v_j>``, zero diagonal.

    The matrix is stored read-only.  Values within ``RANGE_TOL`` outside
    ``[0, 2]`` are clipped (they arise from inner products of unit vectors).
    """

    __slots__ = ("_z",)

    def __init__(self, z, *, sym_tol: float = SYMMETRY_TOL):
        a = np.array(z, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.allclose(a, a.T, rtol=0.0, atol=sym_tol):
            raise ValueError("z must be symmetric")
        if np.max(np.abs(np.diag(a))) > sym_tol:
            raise ValueError("z must have a zero diagonal")
        if a.min() < -RANGE_TOL or a.max() > 2 + RANGE_TOL:
            raise ValueError("entries of z must lie in [0, 2]")
        a = np.clip((a + a.T) / 2, 0.0, 2.0)
        np.fill_diagonal(a, 0.0)
        a.setflags(write=False)
        self._z = a

    @classmethod
    def from_vector(cls, n: int, vec) -> "ZPoint":
        """Build from the upper-triangle values in ``pairs(n)`` order."""
        v = np.asarray(vec, dtype=float)
        if v.shape != (n * (n - 1) // 2,):
            raise ValueError(f"expected {n * (n - 1) // 2} pair values, got shape {v.shape}")
        a = np.zeros((n, n))
        iu = np.triu_indices(n, 1)
        a[iu] = v
        return cls(a + a.T)

    @classmethod
    def zeros(cls, n: int) -> "ZPoint":
        return cls(np.zeros((n, n)))

    @classmethod
    def from_pairs(cls, n: int, values: dict) -> "ZPoint":
        a = np.zeros((n, n))
        for (i, j), val in values.items():
            a[i, j] = a[j, i] = val
        return cls(a)

    @property
    def n(self) -> int:
        return self._z.shape[0]

    @property
    def d(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def z(self) -> np.ndarray:
        return self._z

    @property
    def vector(self) -> np.ndarray:
        return self._z[np.triu_indices(self.n, 1)]

    def __getitem__(self, ij):
        return self._z[ij]

    def gram(self) -> np.ndarray:
        """The matrix ``1 - Z`` (all-ones minus Z) whose PSD-ness defines P."""
        return 1.0 - self._z

    def pair_sum(self) -> float:
        return float(self.vector.sum())

    def as_pairs(self) -> dict:
        return {p: float(self._z[p]) for p in pairs(self.n)}

    def __eq__(self, other):
        if not isinstance(other, ZPoint):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._z, other._z)

    def __hash__(self):
        return hash((self.n, self._z.tobytes()))

    def __repr__(self):
        return f"ZPoint(n={self.n}, vector={np.array2string(self.vector, precision=4)})"
