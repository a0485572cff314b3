"""Enumerate the characterized extreme-point candidates and rank them.

Candidates come in two kinds:

* ``type1``: a bi-clique ray ``lam * 1_B`` (B complete bipartite) cut by the
  balance hyperplane ``sum z = c(1-c)n^2``, at ``lam* = bound / |E(B)|``;
* ``type2``: a cube vertex inside H and P, i.e. a cut embedding
  ``2 * 1_{E(S, V\\S)}`` whose pair sum ``2|S||V\\S|`` meets the bound.

``gamma_points`` gives the wider family of rays over all partial-cliques;
type-1 points are the ones whose ray is a bi-clique.  The minimum over the
candidates is a *characterized-vertex optimum*: an upper bound on the
program value, not a certified global optimum.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import InfeasibleError, PropertyViolation
from .graphs import (
    DEFAULT_ENUMERATION_LIMIT,
    Graph,
    PartialClique,
    enumerate_partial_cliques,
    unique_partial_clique_completion,
)
from .points import ZPoint
from .polytope import scaled_indicator
from .psd import PSD_TOL, in_P_batch
from .relaxation import ProgramInstance, cut_embedding, exact_fraction, objective
from .validation import check_balance, check_exponent, check_graph, check_limit

logger = logging.getLogger(__name__)

H_STAR_TOL = 1e-9
KINDS = ("type1", "type2")


def exact_balance_bound(inst: ProgramInstance) -> Fraction:
    c = exact_fraction(inst.c)
    return (2 if inst.strict_balance else 1) * c * (1 - c) * inst.n**2


@dataclass(frozen=True)
class VertexCandidate:
    kind: str
    source: PartialClique
    lam: float
    point: ZPoint
    value: float

    @property
    def side(self) -> Optional[tuple[int, ...]]:
        """Block holding vertex 0 when the source is a bipartition, else None."""
        blocks = self.source.blocks()
        if len(blocks) != 2:
            return None
        return blocks[0] if 0 in blocks[0] else blocks[1]

    def sort_key(self):
        return (self.value, tuple(self.point.vector))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lam": self.lam,
            "value": self.value,
            "removed_sets": [list(b) for b in self.source.removed_sets],
            "side": list(self.side) if self.side is not None else None,
        }


def _sides(n: int):
    """Proper subsets containing vertex 0, by size then lexicographically."""
    rest = range(1, n)
    for k in range(0, n - 1):
        for extra in combinations(rest, k):
            yield (0,) + extra


def gamma_points(inst: ProgramInstance, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[VertexCandidate]:
    """Every partial-clique ray ``lam * 1_B`` meeting the balance hyperplane at ``lam* <= 2``."""
    check_limit(inst.n, limit)
    bound = exact_balance_bound(inst)
    out = []
    for b in enumerate_partial_cliques(inst.n, limit):
        m = b.num_edges
        if m == 0:
            continue
        lam = bound / m
        if lam > 2:
            continue
        pt = scaled_indicator(b, float(lam))
        out.append(VertexCandidate("gamma", b, float(lam), pt, objective(pt, inst.graph, inst.p)))
    return out


def _assert_in_P(cands: list[VertexCandidate], what: str) -> None:
    if not cands:
        return
    ok = in_P_batch(np.stack([c.point.z for c in cands]), PSD_TOL)
    if not ok.all():
        bad = cands[int(np.argmin(ok))]
        raise PropertyViolation(f"{what} candidate {bad.source.removed_sets} lies outside P")


def type1_vertices(inst: ProgramInstance, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[VertexCandidate]:
    """Bi-clique rays on the balance hyperplane; membership in P is asserted."""
    check_limit(inst.n, limit)
    n = inst.n
    bound = exact_balance_bound(inst)
    out = []
    for side in _sides(n):
        b = PartialClique.cut(n, side)
        lam = bound / (len(side) * (n - len(side)))
        if lam > 2:
            continue
        pt = scaled_indicator(b, float(lam))
        if abs(pt.pair_sum() - float(bound)) > H_STAR_TOL * max(1.0, float(bound)):
            raise PropertyViolation("type-1 point is off the balance hyperplane")
        out.append(VertexCandidate("type1", b, float(lam), pt, objective(pt, inst.graph, inst.p)))
    _assert_in_P(out, "type-1")
    return out


def type2_vertices(inst: ProgramInstance, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[VertexCandidate]:
    """Cut embeddings whose pair sum ``2|S||V\\S|`` meets the balance bound."""
    check_limit(inst.n, limit)
    n = inst.n
    bound = exact_balance_bound(inst)
    out = []
    for side in _sides(n):
        if 2 * len(side) * (n - len(side)) < bound:
            continue
        pt = cut_embedding(side, n)
        out.append(VertexCandidate("type2", PartialClique.cut(n, side), 2.0, pt,
                                   objective(pt, inst.graph, inst.p)))
    _assert_in_P(out, "type-2")
    return out


@dataclass(frozen=True)
class SolveResult:
    instance: ProgramInstance
    limit: int
    candidates: tuple[VertexCandidate, ...]
    best: VertexCandidate
    window_best: Optional[VertexCandidate]
    completion_checked: bool

    label = "characterized-vertex optimum"

    @property
    def value(self) -> float:
        return self.best.value

    @property
    def window_value(self) -> Optional[float]:
        return None if self.window_best is None else self.window_best.value

    @property
    def counts(self) -> dict:
        return {k: sum(c.kind == k for c in self.candidates) for k in KINDS}

    def to_dict(self) -> dict:
        inst = self.instance
        return {
            "label": self.label,
            "instance": {
                "n": inst.n,
                "edges": [list(e) for e in inst.graph.edges],
                "c": inst.c,
                "p": inst.p,
                "strict_balance": inst.strict_balance,
                "balance_bound": inst.system.balance_bound,
                "window": [inst.window.start, inst.window.stop - 1] if len(inst.window) else None,
            },
            "limit": self.limit,
            "value": self.value,
            "window_value": self.window_value,
            "best": dict(self.best.to_dict(), point=[float(v) for v in self.best.point.vector]),
            "window_best": None if self.window_best is None else self.window_best.to_dict(),
            "counts": self.counts,
            "completion_checked": self.completion_checked,
            "candidates": [c.to_dict() for c in self.candidates],
        }


def _completion_consistent(g: Graph, cand: VertexCandidate) -> bool:
    """The candidate's partition must coarsen the canonical completion of its kept edges."""
    src_edges = set(cand.source.edges)
    keep = [e for e in g.edges if e in src_edges]
    comp = unique_partial_clique_completion(g, keep)
    if comp is None:
        return False
    label = {v: k for k, blk in enumerate(cand.source.blocks()) for v in blk}
    return all(len({label[v] for v in blk}) == 1 for blk in comp.blocks())


def optimize_over_vertices(inst: ProgramInstance, limit: int = DEFAULT_ENUMERATION_LIMIT) -> SolveResult:
    """Rank all type-1 and type-2 candidates; ties go to the lexicographically smallest point."""
    cands = type1_vertices(inst, limit) + type2_vertices(inst, limit)
    if not cands:
        raise InfeasibleError(
            f"no candidate satisfies the balance bound {inst.system.balance_bound:g} for n={inst.n}"
        )
    cands.sort(key=VertexCandidate.sort_key)
    checked = inst.graph.m > 0 and inst.graph.is_connected()
    if checked:
        for cand in cands:
            if not _completion_consistent(inst.graph, cand):
                raise PropertyViolation(f"candidate {cand.source.removed_sets} disagrees with its completion")
    win = inst.window
    in_window = [c for c in cands if c.side is not None and len(c.side) in win]
    return SolveResult(
        instance=inst,
        limit=limit,
        candidates=tuple(cands),
        best=cands[0],
        window_best=in_window[0] if in_window else None,
        completion_checked=checked,
    )


class VertexSearchSolver(BaseEstimator):
    """Estimator wrapper around :func:`optimize_over_vertices`.

    ``fit`` takes a graph (a :class:`Graph`, an adjacency matrix, or
    ``(n, edges)``); ``labels_`` marks the side of the best candidate's
    bipartition that holds vertex 0.
    """

    def __init__(self, c=0.3, p=1.0, limit=DEFAULT_ENUMERATION_LIMIT, strict_balance=False):
        self.c = c
        self.p = p
        self.limit = limit
        self.strict_balance = strict_balance

    def fit(self, X, y=None):
        g = check_graph(X)
        inst = ProgramInstance(g, check_balance(self.c), check_exponent(self.p), self.strict_balance)
        if self.limit > DEFAULT_ENUMERATION_LIMIT:
            logger.warning("enumeration limit raised to %d; cost grows exponentially in n", self.limit)
        self.result_ = optimize_over_vertices(inst, self.limit)
        self.value_ = self.result_.value
        self.window_value_ = self.result_.window_value
        self.best_point_ = self.result_.best.point
        side = set(self.result_.best.side or ())
        self.labels_ = np.array([int(v in side) for v in range(g.n)])
        self.n_vertices_ = g.n
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).labels_
