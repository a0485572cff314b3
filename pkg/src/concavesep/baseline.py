"""Brute-force exact answers and end-to-end comparison reports."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .exceptions import EnumerationLimitError, InfeasibleError, PropertyViolation
from .graphs import DEFAULT_ENUMERATION_LIMIT, Graph
from .polytope import linear_constraints, triangle_slack
from .psd import PSD_TOL, in_P_batch
from .relaxation import ProgramInstance, balance_window, exact_fraction
from .rounding import CutResult, hyperplane_round
from .solver import SolveResult, optimize_over_vertices

EXACT_LIMIT = 20
GAP_LIMIT = 12
RELAXATION_SLACK = 1e-9


def _cut_sizes(g: Graph, masks: np.ndarray) -> np.ndarray:
    sizes = np.zeros(masks.shape, dtype=np.int64)
    for u, v in g.edges:
        sizes += ((masks >> u) ^ (masks >> v)) & 1
    return sizes


def _popcount(masks: np.ndarray, n: int) -> np.ndarray:
    return sum((masks >> i) & 1 for i in range(n))


def exact_min_balanced_cut(g: Graph, c: float) -> tuple[tuple[int, ...], int]:
    """Minimum ``|E(S, V\\S)|`` over ``cn < |S| < (1-c)n`` by full enumeration.

    Among minimizers the lexicographically smallest sorted ``S`` is returned.
    """
    n = g.n
    if n > EXACT_LIMIT:
        raise EnumerationLimitError(f"exact enumeration is limited to n <= {EXACT_LIMIT}")
    win = balance_window(n, c)
    if len(win) == 0:
        raise InfeasibleError(f"no side size s satisfies {c}*{n} < s < {1 - c}*{n}")
    masks = np.arange(1 << n, dtype=np.int64)
    pc = _popcount(masks, n)
    masks = masks[(pc >= win.start) & (pc < win.stop)]
    sizes = _cut_sizes(g, masks)
    best = int(sizes.min())
    winners = masks[sizes == best]
    sides = [tuple(i for i in range(n) if m >> i & 1) for m in winners.tolist()]
    return min(sides), best


@dataclass
class GridCheckResult:
    p: float
    c: float
    step: float
    with_psd: bool
    grid_point: tuple
    grid_value: float
    nearest_candidate: tuple
    distance: float
    candidates: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.distance <= self.step + 1e-12

    def to_dict(self) -> dict:
        return {
            "p": self.p, "c": self.c, "step": self.step, "with_psd": self.with_psd,
            "grid_point": list(self.grid_point), "grid_value": self.grid_value,
            "nearest_candidate": list(self.nearest_candidate), "distance": self.distance,
            "passed": self.passed,
        }


def _three_variable_candidates(c: float, with_psd: bool) -> np.ndarray:
    """Basic feasible solutions of R intersected with the balance half-space, n = 3.

    Every 3-subset of the rows (linear triangle, cube facets, balance) is
    solved; feasible solutions are the extreme points of the slice.  With
    ``with_psd`` the ones outside P are dropped.
    """
    cq = exact_fraction(c)
    bound = float(cq * (1 - cq) * 9)
    a, b = linear_constraints(3)
    a = np.vstack([a, -np.ones((1, 3))])
    b = np.append(b, -bound)
    combos = np.array(list(combinations(range(len(a)), 3)))
    sub_a, sub_b = a[combos], b[combos]
    ok = np.abs(np.linalg.det(sub_a)) > 1e-9
    pts = np.linalg.solve(sub_a[ok], sub_b[ok][..., None])[..., 0]
    pts = pts[np.all(pts @ a.T <= b + 1e-9, axis=1)]
    pts = np.unique(np.round(pts, 9), axis=0) + 0.0
    return pts[_feasible3(pts, bound, with_psd, tol=1e-9)]


def _as_matrices(v: np.ndarray) -> np.ndarray:
    z = np.zeros((len(v), 3, 3))
    z[:, 0, 1] = z[:, 1, 0] = v[:, 0]
    z[:, 0, 2] = z[:, 2, 0] = v[:, 1]
    z[:, 1, 2] = z[:, 2, 1] = v[:, 2]
    return z


def _feasible3(v: np.ndarray, bound: float, with_psd: bool, tol: float) -> np.ndarray:
    ok = v.sum(axis=1) >= bound - tol
    ok &= triangle_slack(_as_matrices(v), 2.0) >= -tol
    if with_psd and ok.any():
        idx = np.nonzero(ok)[0]
        ok[idx] = in_P_batch(_as_matrices(v[idx]), PSD_TOL)
    return ok


def three_variable_grid_check(p: float, c: float = 0.3, step: float = 0.02, with_psd: bool = True) -> GridCheckResult:
    """Grid-minimize ``z_01^p + z_02^p + z_12^p`` over the three-variable feasible set.

    The set is the linear triangle region intersected with the balance
    half-space (bound ``9c(1-c)``), the cube ``[0, 2]^3`` and optionally P.
    Passes when the grid minimizer lies within ``step`` (per coordinate) of
    an enumerated candidate extreme point.
    """
    if not 0.0 < p < 0.5:
        raise ValueError("the three-variable claim concerns 0 < p < 1/2")
    if not 0.0 < step <= 0.05:
        raise ValueError("grid step must lie in (0, 0.05]")
    cq = exact_fraction(c)
    bound = float(cq * (1 - cq) * 9)
    axis = np.round(np.arange(0.0, 2.0 + step / 2, step), 12)
    axis = axis[axis <= 2.0]
    g = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    g = g[g.sum(axis=1) >= bound]
    g = g[_feasible3(g, bound, with_psd, tol=1e-12)]
    vals = np.sum(g**p, axis=1)
    k = int(np.argmin(vals))
    gp = g[k]
    cands = _three_variable_candidates(c, with_psd)
    dist = np.max(np.abs(cands - gp[None]), axis=1)
    j = int(np.argmin(dist))
    return GridCheckResult(p, c, step, with_psd, tuple(float(x) for x in gp), float(vals[k]),
                        tuple(float(x) for x in cands[j]), float(dist[j]),
                        [tuple(float(x) for x in row) for row in cands])


@dataclass(frozen=True)
class GapReport:
    instance: ProgramInstance
    exact_side: tuple[int, ...]
    exact_value: int
    solve: SolveResult
    rounded: CutResult
    rounded_from: str

    @property
    def solver_value(self) -> float:
        return self.solve.value

    @property
    def window_value(self) -> Optional[float]:
        return self.solve.window_value

    def ratios(self) -> dict:
        ex = self.exact_value
        return {
            "solver_over_exact": None if ex == 0 else self.solver_value / ex,
            "rounded_over_exact": None if ex == 0 else self.rounded.cut_size / ex,
        }

    def to_dict(self) -> dict:
        return {
            "exact": {"side": list(self.exact_side), "value": self.exact_value},
            "solver_value": self.solver_value,
            "window_value": self.window_value,
            "rounded": dict(self.rounded.to_dict(), source=self.rounded_from),
            "ratios": self.ratios(),
        }


def gap_report(inst: ProgramInstance, trials: int = 100, seed: int = 0,
               limit: int = DEFAULT_ENUMERATION_LIMIT, solve: Optional[SolveResult] = None) -> GapReport:
    """Exact optimum, vertex-search value and a rounded cut for one instance.

    Rounding starts from the best candidate whose bipartition lies in the
    balance window, falling back to the overall best.  Raises
    PropertyViolation if the search value exceeds the exact optimum.
    """
    if inst.n > GAP_LIMIT:
        raise EnumerationLimitError(f"gap reports are limited to n <= {GAP_LIMIT}")
    side, exact = exact_min_balanced_cut(inst.graph, inst.c)
    res = solve if solve is not None else optimize_over_vertices(inst, limit)
    if res.value > exact + RELAXATION_SLACK:
        raise PropertyViolation(
            f"vertex-search value {res.value} exceeds the exact balanced cut {exact}",
            evidence={"value": res.value, "exact": exact},
        )
    src, cand = ("window_best", res.window_best) if res.window_best is not None else ("best", res.best)
    rounded = hyperplane_round(cand.point, inst.graph, inst.c, trials, seed)
    return GapReport(inst, side, exact, res, rounded, src)
