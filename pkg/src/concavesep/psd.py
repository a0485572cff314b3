"""The PSD constraint ``1 - Z >= 0`` and the +/-1 matrix characterization.

Eigenvalues come from a cyclic Jacobi rotation scheme written here so that
membership in P has an oracle independent of LAPACK.  It works on stacks of
matrices, which is what the exhaustive checks need.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .exceptions import ConvergenceError, PropertyViolation
from .graphs import Graph, PartialClique, is_complete_bipartite, pairs
from .points import ZPoint

PSD_TOL = 1e-8
JACOBI_TOL = 1e-12
MAX_SWEEPS = 60


def jacobi_eigenvalues(m, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues (ascending) of a symmetric matrix or a stack ``(..., n, n)``.

    Sweeps stop once every off-diagonal magnitude is below
    ``min(tol, 1e-12) * (1 + max|m|)``; the eigenvalue error is then at most
    ``n`` times that bound.
    """
    a = np.array(m, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = a.shape[-1]
    batch_shape = a.shape[:-2]
    a = a.reshape(-1, n, n)
    scale = np.abs(a).max(axis=(1, 2), initial=0.0)
    asym = np.abs(a - a.transpose(0, 2, 1)).max(axis=(1, 2), initial=0.0)
    if np.any(asym > 1e-12 * (1.0 + scale)):
        raise ValueError("matrix is not symmetric")
    a = (a + a.transpose(0, 2, 1)) / 2
    thresh = min(tol, JACOBI_TOL) * (1.0 + scale)
    offmask = ~np.eye(n, dtype=bool)

    def off(x):
        return np.abs(x[:, offmask]).max(axis=1, initial=0.0)

    for _ in range(max_sweeps):
        active = np.nonzero(off(a) > thresh)[0]
        if active.size == 0:
            break
        sub = a[active]
        for p, q in combinations(range(n), 2):
            apq = sub[:, p, q]
            nz = apq != 0.0
            if not nz.any():
                continue
            safe = np.where(nz, apq, 1.0)
            theta = (sub[:, q, q] - sub[:, p, p]) / (2.0 * safe)
            t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            cp, sp = c[:, None], s[:, None]
            colp = sub[:, :, p].copy()
            colq = sub[:, :, q].copy()
            sub[:, :, p] = cp * colp - sp * colq
            sub[:, :, q] = sp * colp + cp * colq
            rowp = sub[:, p, :].copy()
            rowq = sub[:, q, :].copy()
            sub[:, p, :] = cp * rowp - sp * rowq
            sub[:, q, :] = sp * rowp + cp * rowq
            sub[:, p, q] = np.where(nz, 0.0, sub[:, p, q])
            sub[:, q, p] = sub[:, p, q]
        a[active] = sub
    else:
        if np.any(off(a) > thresh):
            raise ConvergenceError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    ev = np.sort(np.diagonal(a, axis1=1, axis2=2), axis=1)
    return ev.reshape(batch_shape + (n,))


def eig_min(m, tol: float = JACOBI_TOL):
    """Smallest eigenvalue of a symmetric matrix (or of each matrix in a stack)."""
    ev = jacobi_eigenvalues(m, tol)
    out = ev[..., 0]
    return float(out) if np.ndim(out) == 0 else out


def is_in_P(zp: ZPoint, tol: float = PSD_TOL) -> bool:
    """Whether ``1 - Z`` is positive semidefinite up to ``-tol``."""
    return eig_min(zp.gram()) >= -tol


def in_P_batch(zs, tol: float = PSD_TOL) -> np.ndarray:
    """Vectorized membership in P for a stack of z matrices ``(B, n, n)``."""
    zs = np.asarray(zs, dtype=float)
    return eig_min(1.0 - zs) >= -tol


@dataclass(frozen=True)
class PMOneMatrix:
    """Symmetric matrix with entries in {+1, -1}."""

    a: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        if not np.all(np.abs(a) == 1):
            raise ValueError("entries must be exactly +1 or -1")
        if not np.array_equal(a, a.T):
            raise ValueError("matrix must be symmetric")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @classmethod
    def from_graph(cls, g: Graph) -> "PMOneMatrix":
        """The matrix whose -1 entries are exactly the edges of ``g``."""
        return cls(1 - 2 * g.adjacency().astype(np.int64))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def graph(self) -> Graph:
        """Graph with edge ij iff ``a_ij = -1`` (i != j)."""
        return Graph(self.n, [(i, j) for i, j in pairs(self.n) if self.a[i, j] == -1])

    def quadratic_form(self, x) -> int:
        x = np.asarray(x, dtype=np.int64)
        return int(x @ self.a @ x)


def is_psd_pm1(a: PMOneMatrix) -> bool:
    """Combinatorial PSD test: +1 diagonal and a complete bipartite -1 graph."""
    if np.any(np.diag(a.a) != 1):
        return False
    return is_complete_bipartite(a.graph()) is not None


def sos_witness(a: PMOneMatrix) -> Optional[np.ndarray]:
    """Signs ``b`` with ``a = b b^T``, so ``x^T a x = (sum b_i x_i)^2``; None if not PSD."""
    if not is_psd_pm1(a):
        return None
    s1, _ = is_complete_bipartite(a.graph())
    b = -np.ones(a.n, dtype=np.int64)
    b[list(s1)] = 1
    if not np.array_equal(np.outer(b, b), a.a):
        raise PropertyViolation("sign vector does not reproduce the matrix", evidence=b)
    return b


@dataclass(frozen=True)
class NegativeWitness:
    indices: tuple[int, ...]
    x: np.ndarray
    value: int


def bad_triple_witness(a: PMOneMatrix) -> Optional[NegativeWitness]:
    """Explicit ``x`` with ``x^T a x < 0``, or None when ``a`` is PSD.

    For a +1 diagonal the witness lives on a triple whose three entries
    multiply to -1 (all -1, or two +1 and one -1) and gives value -3.
    """
    if is_psd_pm1(a):
        return None
    n = a.n
    diag = np.diag(a.a)
    if np.any(diag != 1):
        i = int(np.argmax(diag != 1))
        x = np.zeros(n, dtype=np.int64)
        x[i] = 1
        return NegativeWitness((i,), x, a.quadratic_form(x))
    m = a.a
    for i, j, k in combinations(range(n), 3):
        if m[i, j] * m[j, k] * m[i, k] != -1:
            continue
        x = np.zeros(n, dtype=np.int64)
        x[[i, j, k]] = 1
        if m[i, j] + m[j, k] + m[i, k] == 1:
            # one -1 entry; the apex is the vertex outside that pair
            apex = {(i, j): k, (j, k): i, (i, k): j}[
                next(p for p in ((i, j), (j, k), (i, k)) if m[p] == -1)
            ]
            x[apex] = -1
        return NegativeWitness((i, j, k), x, a.quadratic_form(x))
    raise PropertyViolation("matrix is not PSD yet has no sign-inconsistent triple")


def biclique_gram(b, lam: float) -> np.ndarray:
    """Unit vectors ``u_i`` (rows) with ``<u_i, u_j> = 1 - lam * [ij is an edge of b]``.

    ``b`` must be a spanning complete bipartite graph (a Graph or
    PartialClique); one shared vector per side.
    """
    g = b.graph() if isinstance(b, PartialClique) else b
    if not 0.0 <= lam <= 2.0:
        raise ValueError(f"lam must lie in [0, 2], got {lam}")
    parts = is_complete_bipartite(g)
    if parts is None:
        raise ValueError("graph is not a spanning complete bipartite graph")
    cos = 1.0 - lam
    n1 = np.array([1.0, 0.0])
    n2 = np.array([cos, np.sqrt(max(0.0, 1.0 - cos * cos))])
    out = np.tile(n1, (g.n, 1))
    out[list(parts[1])] = n2
    return out


def partial_clique_psd_threshold(
    b: PartialClique, tol: float = PSD_TOL, iterations: int = 64, samples: int = 9
) -> float:
    """Largest ``lam`` in [0, 2] with ``lam * 1_B`` inside P, by bisection.

    ``lam -> eig_min(1 - lam * A)`` is concave (minimum of linear functions),
    so the feasible set is an interval containing 0.  That shape is still
    spot-checked on ``samples`` points to either side of the answer.
    """
    adj = b.graph().adjacency().astype(float)
    ones = np.ones_like(adj)

    def feasible(lams):
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        return eig_min(ones[None] - lams[:, None, None] * adj[None]) >= -tol

    if feasible(2.0)[0]:
        lam_k = 2.0
    else:
        lo, hi = 0.0, 2.0
        for _ in range(iterations):
            mid = (lo + hi) / 2
            if feasible(mid)[0]:
                lo = mid
            else:
                hi = mid
        lam_k = lo
    below = np.linspace(0.0, lam_k, samples)
    above = np.linspace(lam_k, 2.0, samples + 1)[1:]
    above = above[above > lam_k + 1e-6]
    if not feasible(below).all() or (above.size and feasible(above).any()):
        raise PropertyViolation("PSD feasibility along the ray is not an interval", evidence=lam_k)
    return lam_k


def cube_edge_membership(endpoint: ZPoint, coordinate, tol: float = PSD_TOL) -> tuple[bool, bool, bool]:
    """Membership in P at ``t = 0, 1, 2`` along a cube edge varying one coordinate."""
    i, j = sorted(coordinate)
    if i == j:
        raise ValueError("coordinate must be an off-diagonal pair")
    z = np.array(endpoint.z)
    mask = np.ones_like(z, dtype=bool)
    mask[i, j] = mask[j, i] = False
    np.fill_diagonal(mask, False)
    if not np.all(np.isin(z[mask], (0.0, 2.0))):
        raise ValueError("fixed coordinates of a cube edge must be 0 or 2")
    stack = np.repeat(z[None], 3, axis=0)
    for k, t in enumerate((0.0, 1.0, 2.0)):
        stack[k, i, j] = stack[k, j, i] = t
    flags = in_P_batch(stack, tol)
    return tuple(bool(f) for f in flags)


def cube_edge_in_P(endpoint: ZPoint, coordinate, tol: float = PSD_TOL) -> bool:
    """Whether a cube edge lies in P, checking the claim that it is all-in or all-out.

    Raises PropertyViolation, carrying the three sampled memberships, when
    the endpoints and midpoint disagree.
    """
    flags = cube_edge_membership(endpoint, coordinate, tol)
    if len(set(flags)) != 1:
        raise PropertyViolation(
            f"cube edge along {tuple(sorted(coordinate))} is partly inside P: "
            f"membership at t=0,1,2 is {flags}",
            evidence=flags,
        )
    return flags[0]
