"""Regions T, H, P, F of the relaxation and the linear triangle polytope R.

R is the part of the cube ``[0, 2]^d`` (``d = n(n-1)/2``) cut out by the
*linear* triangle inequalities ``z_ik <= z_ij + z_jk``.  T is the region of
the exponent-``p/2`` inequalities; for ``p = 2`` the two coincide inside the
cube.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exceptions import EnumerationLimitError, InfeasibleError, PropertyViolation
from .graphs import (
    DEFAULT_ENUMERATION_LIMIT,
    Graph,
    PartialClique,
    enumerate_partial_cliques,
    is_biclique,
    pair_index,
)
from .points import ZPoint
from .psd import PSD_TOL, is_in_P

ACTIVE_TOL = 1e-9
RANK_TOL = 1e-9
TRIANGLE_TOL = 1e-9


@dataclass(frozen=True)
class ConstraintSystem:
    """Constraint data for one ``(n, c, p)``.

    ``strict_balance`` doubles the balance bound to ``2c(1-c)n^2``, the value
    obtained from the squared-distance form of the balance constraint.
    """

    n: int
    c: float
    p: float = 1.0
    strict_balance: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.c <= 0.5:
            raise ValueError(f"balance parameter c must lie in (0, 1/2], got {self.c}")
        if not 0.0 < self.p <= 2.0:
            raise ValueError(f"exponent p must lie in (0, 2], got {self.p}")

    @property
    def balance_bound(self) -> float:
        return (2.0 if self.strict_balance else 1.0) * self.c * (1.0 - self.c) * self.n**2


def triangle_slack(zs, p: float = 2.0) -> np.ndarray:
    """Smallest ``w_ij + w_jk - w_ik`` over ordered triples, ``w = z^(p/2)``.

    Works on one matrix or a stack; negative slack means a violated inequality.
    """
    zs = np.asarray(zs, dtype=float)
    single = zs.ndim == 2
    zs = zs.reshape((-1,) + zs.shape[-2:])
    out = np.empty(zs.shape[0])
    chunk = max(1, 2_000_000 // max(1, zs.shape[1] ** 3))
    for s in range(0, zs.shape[0], chunk):
        w = np.clip(zs[s:s + chunk], 0.0, None) ** (p / 2.0)
        via = np.min(w[:, :, :, None] + w[:, None, :, :], axis=2)  # min_j w_ij + w_jk
        out[s:s + chunk] = np.min(via - w, axis=(1, 2))
    return out[0] if single else out


def satisfies_triangle(zp: ZPoint, p: float = 1.0, tol: float = TRIANGLE_TOL) -> bool:
    """``z_ik^(p/2) <= z_ij^(p/2) + z_jk^(p/2) + tol`` for every ordered triple."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return bool(triangle_slack(zp.z, p) >= -tol)


def satisfies_balance(zp: ZPoint, c: float, strict_balance: bool = False) -> bool:
    bound = ConstraintSystem(zp.n, c, strict_balance=strict_balance).balance_bound
    return zp.pair_sum() >= bound


@dataclass(frozen=True)
class Membership:
    in_T: bool
    in_H: bool
    in_P: bool

    @property
    def in_F(self) -> bool:
        return self.in_T and self.in_H and self.in_P


def membership(
    zp: ZPoint, sys: ConstraintSystem, tol: float = TRIANGLE_TOL, psd_tol: float = PSD_TOL
) -> Membership:
    """Membership flags for T, H and P.

    At ``p = 1`` every point of P must lie in T (the square roots of
    ``z_ij = |v_i - v_j|^2 / 2`` form a metric).  That is asserted with the
    slack ``2 * sqrt(psd_tol)`` a ``-psd_tol`` eigenvalue can cause.
    """
    if zp.n != sys.n:
        raise ValueError(f"point has n={zp.n}, system has n={sys.n}")
    in_T = satisfies_triangle(zp, sys.p, tol)
    in_H = zp.pair_sum() >= sys.balance_bound
    in_P = is_in_P(zp, psd_tol)
    if sys.p == 1.0 and in_P and not satisfies_triangle(zp, 1.0, 2 * math.sqrt(psd_tol) + tol):
        raise PropertyViolation("point lies in P but violates the square-root triangle inequalities")
    return Membership(in_T, in_H, in_P)


def scaled_indicator(b: PartialClique, lam: float) -> ZPoint:
    """``z_ij = lam`` on the edges of ``b``, 0 elsewhere."""
    if not 0.0 <= lam <= 2.0:
        raise ValueError(f"lam must lie in [0, 2], got {lam}")
    z = np.zeros((b.n, b.n))
    for i, j in b.edges:
        z[i, j] = z[j, i] = lam
    return ZPoint(z)


def blend(u: PartialClique, v: PartialClique, lam: float) -> ZPoint:
    """The point ``lam * 2*1_u + (1 - lam) * 2*1_v`` built class by class.

    Pairs only in ``u`` get ``2 lam``, only in ``v`` get ``2(1 - lam)``, in
    both get 2, in neither 0.
    """
    if u.n != v.n:
        raise ValueError("partial-cliques must share the vertex set")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    eu, ev = set(u.edges), set(v.edges)
    z = np.zeros((u.n, u.n))
    for e in eu | ev:
        if e in eu and e in ev:
            val = 2.0
        elif e in eu:
            val = 2.0 * lam
        else:
            val = 2.0 * (1.0 - lam)
        z[e] = z[e[::-1]] = val
    return ZPoint(z)


def weight_classes(u: PartialClique, v: PartialClique) -> tuple[Graph, Graph]:
    """The u-only and v-only edge subgraphs of the blend."""
    eu, ev = set(u.edges), set(v.edges)
    return Graph(u.n, eu - ev), Graph(u.n, ev - eu)


def is_edge_of_R(u: PartialClique, v: PartialClique) -> bool:
    """Combinatorial edge test: both weight classes of the blend are bi-cliques."""
    if u == v:
        raise ValueError("an edge needs two distinct endpoints")
    only_u, only_v = weight_classes(u, v)
    return is_biclique(only_u) and is_biclique(only_v)


@lru_cache(maxsize=None)
def linear_constraints(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(A, b)`` with R = {z : A z <= b}: triangle rows then cube facets."""
    idx = pair_index(n)
    d = n * (n - 1) // 2
    rows, rhs = [], []
    for i, j, k in combinations(range(n), 3):
        e = [idx[(i, j)], idx[(i, k)], idx[(j, k)]]
        for t in range(3):
            r = np.zeros(d)
            r[e] = -1.0
            r[e[t]] = 1.0
            rows.append(r)
            rhs.append(0.0)
    for k in range(d):
        r = np.zeros(d)
        r[k] = -1.0
        rows.append(r)
        rhs.append(0.0)
        r = np.zeros(d)
        r[k] = 1.0
        rows.append(r)
        rhs.append(2.0)
    a = np.array(rows).reshape(-1, d)
    b = np.array(rhs)
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b


def rank_full_pivot(m, thresh: float = RANK_TOL) -> int:
    """Matrix rank by Gaussian elimination with full pivoting."""
    a = np.array(m, dtype=float)
    if a.size == 0:
        return 0
    rows, cols = a.shape
    r = 0
    while r < min(rows, cols):
        sub = np.abs(a[r:, r:])
        pi, pj = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[pi, pj] <= thresh:
            break
        pi += r
        pj += r
        a[[r, pi]] = a[[pi, r]]
        a[:, [r, pj]] = a[:, [pj, r]]
        a[r + 1:] -= np.outer(a[r + 1:, r] / a[r, r], a[r])
        r += 1
    return r


def active_constraints(zp: ZPoint, tol: float = ACTIVE_TOL) -> np.ndarray:
    a, b = linear_constraints(zp.n)
    resid = a @ zp.vector - b
    if np.any(resid > tol):
        raise InfeasibleError(f"point violates a linear constraint of R by {resid.max():.3g}")
    return a[np.abs(resid) <= tol]


def polytope_face_rank(zp: ZPoint, tol: float = ACTIVE_TOL) -> int:
    """Rank of the active constraint normals of R at ``zp``.

    The point is a vertex of R when the rank is ``d`` and lies in the
    relative interior of an edge when it is ``d - 1``.
    """
    return rank_full_pivot(active_constraints(zp, tol))


def vertices_of_R(n: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[ZPoint]:
    """The 0/2 partial-clique indicators, each confirmed a vertex by the rank oracle."""
    d = n * (n - 1) // 2
    out = []
    for b in enumerate_partial_cliques(n, limit):
        zp = scaled_indicator(b, 2.0)
        if polytope_face_rank(zp) != d:
            raise PropertyViolation(f"indicator of {b.removed_sets} is not a vertex of R")
        out.append(zp)
    return out


BASIS_VERTEX_LIMIT = 4


def basis_vertices(n: int) -> list[ZPoint]:
    """All vertices of R found by solving every ``d``-subset of constraints.

    Independent of any graph theory: a basic solution that satisfies all
    constraints is a vertex.  Cost is ``C(|rows|, d)`` solves, so ``n <= 4``.
    """
    if n > BASIS_VERTEX_LIMIT:
        raise EnumerationLimitError(f"basis enumeration is limited to n <= {BASIS_VERTEX_LIMIT}")
    if n < 2:
        return [ZPoint.zeros(n)]
    a, b = linear_constraints(n)
    d = a.shape[1]
    combos = np.array(list(combinations(range(a.shape[0]), d)))
    sub_a = a[combos]
    sub_b = b[combos]
    det = np.linalg.det(sub_a)
    ok = np.abs(det) > 0.5  # integer matrices: determinant is an integer
    sol = np.linalg.solve(sub_a[ok], sub_b[ok][..., None])[..., 0]
    feasible = np.all(sol @ a.T <= b + ACTIVE_TOL, axis=1)
    pts = np.unique(np.round(sol[feasible], 9), axis=0)
    return [ZPoint.from_vector(n, p) for p in pts]
