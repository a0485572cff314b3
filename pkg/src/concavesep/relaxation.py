"""The relaxation family, its objective, and numerical concavity certificates.

After substituting ``z_ij = 1 - <v_i, v_j>`` the program reads

    min   2^(-p/2) * sum_{ij in E} z_ij^(p/2)
    s.t.  z_ij^(p/2) + z_jk^(p/2) >= z_ik^(p/2)
          sum_{i<j} z_ij >= c(1-c) n^2
          z_ii = 0,  1 - Z PSD

which minimizes a concave function over a convex set when ``0 < p < 2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .graphs import Graph
from .points import ZPoint
from .polytope import ConstraintSystem
from .psd import PSD_TOL, in_P_batch

UNIT_TOL = 1e-9
STANDARD_GRID = (0.25, 0.5, 1.0, 2.0)
STANDARD_Q = (1.01, 1.5, 2.0, 3.0, 4.0)


def exact_fraction(x: float) -> Fraction:
    """The rational a user meant by a decimal float (``0.3 -> 3/10``)."""
    return Fraction(repr(float(x)))


def balance_window(n: int, c: float) -> range:
    """Side sizes ``s`` with ``cn < s < (1-c)n`` (strict, as in the problem)."""
    cq = exact_fraction(c)
    lo = math.floor(cq * n) + 1
    hi = math.ceil((1 - cq) * n) - 1
    return range(lo, max(lo, hi + 1))


@dataclass(frozen=True)
class ProgramInstance:
    graph: Graph
    c: float = 0.3
    p: float = 1.0
    strict_balance: bool = False

    def __post_init__(self):
        if self.graph.n < 2:
            raise ValueError("instance needs at least two vertices")
        self.system  # validates c and p
        if len(self.window) == 0:
            warnings.warn(
                f"balance window {self.c}*n < |S| < {1 - self.c}*n is empty for n={self.graph.n}",
                stacklevel=2,
            )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def system(self) -> ConstraintSystem:
        return ConstraintSystem(self.graph.n, self.c, self.p, self.strict_balance)

    @property
    def window(self) -> range:
        return balance_window(self.graph.n, self.c)


def objective(zp: ZPoint, g: Graph, p: float = 1.0) -> float:
    """``2^(-p/2) * sum over edges of z_ij^(p/2)``, written as ``(z/2)^(p/2)``.

    The second form is exact on cut embeddings: every cut edge contributes 1.0.
    """
    if zp.n != g.n:
        raise ValueError(f"point has n={zp.n}, graph has n={g.n}")
    if not g.edges:
        return 0.0
    e = np.array(g.edges)
    vals = zp.z[e[:, 0], e[:, 1]]
    return float(np.sum((vals / 2.0) ** (p / 2.0)))


def cut_embedding(s: Iterable[int], n: int) -> ZPoint:
    """``z_ij = 2`` across ``(S, V \\ S)`` and 0 inside: side ``S`` at ``+u``, the rest at ``-u``."""
    side = set(int(v) for v in s)
    if not side or len(side) >= n or not side <= set(range(n)):
        raise ValueError("cut side must be a non-empty proper subset of the vertices")
    ind = np.array([1.0 if v in side else 0.0 for v in range(n)])
    return ZPoint(2.0 * (ind[:, None] != ind[None, :]))


def vectors_to_z(vs) -> ZPoint:
    """``z_ij = 1 - <v_i, v_j>`` for unit vectors given as rows."""
    v = np.atleast_2d(np.asarray(vs, dtype=float))
    norms = np.linalg.norm(v, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise ValueError("all vectors must have unit length")
    z = 1.0 - v @ v.T
    sq = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=2)
    assert np.allclose(sq, 2.0 * z, atol=1e-8), "|v_i - v_j|^2 != 2 z_ij"
    np.fill_diagonal(z, 0.0)
    return ZPoint(z)


def _check_hessian_args(x, y, q):
    if x <= 0 or y <= 0:
        raise ValueError("derivatives exist only for x, y > 0")
    if q <= 1:
        raise ValueError("q = 2/p must exceed 1")


def f_pow(x, y, q):
    """``(x^(1/q) + y^(1/q))^q``; its hypograph is the triangle region."""
    return (x ** (1.0 / q) + y ** (1.0 / q)) ** q


def hessian_closed_form(x: float, y: float, q: float) -> np.ndarray:
    """Closed-form Hessian of ``f(x, y) = (x^(1/q) + y^(1/q))^q``.

    With ``a = x^(1/q)``, ``b = y^(1/q)``, ``k = (q-1)/q``::

        f_xx = -k (1 + b/a)^(q-2) * b / x^((q+1)/q)
        f_yy = -k (1 + a/b)^(q-2) * a / y^((q+1)/q)
        f_xy =  k (1/a + 1/b)^(q-2) / (a b)
    """
    _check_hessian_args(x, y, q)
    k = (q - 1.0) / q
    a = x ** (1.0 / q)
    b = y ** (1.0 / q)
    fxx = -k * (1.0 + b / a) ** (q - 2.0) * b / x ** ((q + 1.0) / q)
    fyy = -k * (1.0 + a / b) ** (q - 2.0) * a / y ** ((q + 1.0) / q)
    fxy = k * (1.0 / a + 1.0 / b) ** (q - 2.0) / (a * b)
    return np.array([[fxx, fxy], [fxy, fyy]])


def hessian_quadratic_form(x: float, y: float, q: float, alpha: float, beta: float) -> float:
    """Factored value of ``[alpha beta] H [alpha beta]^T``; vanishes on ``(alpha, beta) ~ (x, y)``."""
    _check_hessian_args(x, y, q)
    a = x ** (1.0 / q)
    b = y ** (1.0 / q)
    k = (q - 1.0) / q
    return -k * (a + b) ** (q - 2.0) * (a * b) ** (1.0 - 2.0 * q) * (alpha * y - beta * x) ** 2


def hessian_finite_difference(x: float, y: float, q: float, h: Optional[float] = None) -> np.ndarray:
    """Central second differences with step ``1e-4 * max(1, coordinate)``."""
    hx = h if h is not None else 1e-4 * max(1.0, x)
    hy = h if h is not None else 1e-4 * max(1.0, y)
    f = lambda u, v: f_pow(u, v, q)  # noqa: E731
    f0 = f(x, y)
    fxx = (f(x + hx, y) - 2 * f0 + f(x - hx, y)) / hx**2
    fyy = (f(x, y + hy) - 2 * f0 + f(x, y - hy)) / hy**2
    fxy = (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) / (4 * hx * hy)
    return np.array([[fxx, fxy], [fxy, fyy]])


def max_eigenvalue_2x2(h: np.ndarray) -> float:
    a, b, d = h[0, 0], h[0, 1], h[1, 1]
    return float((a + d) / 2 + math.hypot((a - d) / 2, b))


@dataclass(frozen=True)
class HessianSample:
    q: float
    x: float
    y: float
    closed_form: np.ndarray
    finite_difference: np.ndarray
    max_eigenvalue: float

    @property
    def relative_error(self) -> float:
        cf, fd = self.closed_form, self.finite_difference
        return float(np.max(np.abs(fd - cf) / np.maximum(np.abs(cf), 1e-300)))


@dataclass
class CertificateReport:
    q: float
    tol: float
    rel_tol: float
    samples: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def worst_relative_error(self) -> float:
        return max((s.relative_error for s in self.samples), default=0.0)

    @property
    def worst_max_eigenvalue(self) -> float:
        return max((s.max_eigenvalue for s in self.samples), default=-math.inf)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "tol": self.tol,
            "rel_tol": self.rel_tol,
            "passed": self.passed,
            "worst_relative_error": self.worst_relative_error,
            "worst_max_eigenvalue": self.worst_max_eigenvalue,
            "points": [
                {"x": s.x, "y": s.y, "relative_error": s.relative_error, "max_eigenvalue": s.max_eigenvalue}
                for s in self.samples
            ],
            "failures": list(self.failures),
        }


def concavity_certificate(
    q: float, grid: Sequence[float] = STANDARD_GRID, tol: float = 1e-9, rel_tol: float = 1e-4
) -> CertificateReport:
    """Check the closed-form Hessian against finite differences and its sign.

    Every grid point ``(x, y)`` must have closed form and central
    differences agreeing to ``rel_tol`` and a largest Hessian eigenvalue
    at most ``tol``.
    """
    report = CertificateReport(q=q, tol=tol, rel_tol=rel_tol)
    for x in grid:
        for y in grid:
            cf = hessian_closed_form(x, y, q)
            s = HessianSample(q, x, y, cf, hessian_finite_difference(x, y, q), max_eigenvalue_2x2(cf))
            report.samples.append(s)
            if s.relative_error > rel_tol:
                report.failures.append({"x": x, "y": y, "reason": "finite-difference mismatch",
                                        "relative_error": s.relative_error})
            if s.max_eigenvalue > tol:
                report.failures.append({"x": x, "y": y, "reason": "positive Hessian eigenvalue",
                                        "max_eigenvalue": s.max_eigenvalue})
    return report


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def in_power_region(pts: np.ndarray, p: float, tol: float = 0.0) -> np.ndarray:
    r = p / 2.0
    return pts[..., 0] ** r + pts[..., 1] ** r >= pts[..., 2] ** r - tol


def region_convexity_check(p: float, samples: int = 100_000, rng=0, midpoint_tol: float = 1e-12) -> int:
    """Count pairs in ``{x^(p/2) + y^(p/2) >= z^(p/2)} ∩ [0,2]^3`` whose midpoint leaves the region."""
    if not 0.0 < p <= 2.0:
        raise ValueError("p must lie in (0, 2]")
    gen = _rng(rng)
    need = 2 * samples
    found = []
    have = 0
    while have < need:
        cand = gen.uniform(0.0, 2.0, size=(need, 3))
        cand = cand[in_power_region(cand, p)]
        found.append(cand)
        have += len(cand)
    pts = np.concatenate(found)[:need].reshape(samples, 2, 3)
    mid = pts.mean(axis=1)
    return int(np.count_nonzero(~in_power_region(mid, p, midpoint_tol)))


def psd_segment_check(z1: ZPoint, z2: ZPoint, samples: int = 11, tol: float = PSD_TOL) -> bool:
    """Whether every sampled convex combination of two points of P stays in P."""
    if z1.n != z2.n:
        raise ValueError("points must have the same n")
    lams = np.linspace(0.0, 1.0, samples)
    stack = lams[:, None, None] * z1.z[None] + (1.0 - lams)[:, None, None] * z2.z[None]
    return bool(np.all(in_P_batch(stack, tol)))
