"""Random-hyperplane rounding of a feasible point to a cut.

Trial ``t`` draws its Gaussian direction from
``np.random.default_rng(np.random.SeedSequence(seed).spawn(trials)[t])``, so
trials are independent and can be evaluated in any order with the same
outcome.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import InfeasibleError
from .graphs import Graph
from .points import ZPoint
from .psd import PSD_TOL, eig_min
from .validation import check_balance, check_graph, check_positive_int, check_zpoint


@dataclass(frozen=True)
class CutResult:
    side: tuple[int, ...]
    cut_size: int
    balance: float
    trials_used: int
    balanced_trials: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "side": list(self.side),
            "cut_size": self.cut_size,
            "balance": self.balance,
            "trials_used": self.trials_used,
            "balanced_trials": self.balanced_trials,
            "seed": self.seed,
        }


def gram_vectors(zp: ZPoint, tol: float = PSD_TOL) -> np.ndarray:
    """Unit vectors (rows) whose inner products reproduce ``1 - Z``.

    Eigenvalues of ``1 - Z`` in ``[-tol, 0)`` are clipped to zero and rows
    renormalized; a more negative eigenvalue is an error.
    """
    x = zp.gram()
    if eig_min(x) < -tol:
        raise InfeasibleError("1 - Z is not positive semidefinite; point is outside P")
    w, q = np.linalg.eigh(x)
    v = q * np.sqrt(np.clip(w, 0.0, None))[None, :]
    norms = np.linalg.norm(v, axis=1)
    return v / norms[:, None]


def hyperplane_cut(vectors, rng) -> tuple[int, ...]:
    """``{i : <g, v_i> >= 0}`` for a standard normal ``g``; an empty side is reported as V."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    if v.shape[0] == 0:
        raise ValueError("need at least one vector")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    g = gen.standard_normal(v.shape[1])
    side = tuple(int(i) for i in np.nonzero(v @ g >= 0.0)[0])
    return side or tuple(range(v.shape[0]))


def _trial_rngs(seed: int, trials: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def hyperplane_round(zp: ZPoint, g: Graph, c: float, trials: int = 100, seed: int = 0,
                     tol: float = PSD_TOL) -> CutResult:
    """Best cut over ``trials`` hyperplanes.

    Preference order: reaching balance ``>= c``, then smaller cut, then larger
    balance.  ``balanced_trials`` counts trials that reached balance ``c``.
    """
    if zp.n != g.n:
        raise ValueError(f"point has n={zp.n}, graph has n={g.n}")
    check_positive_int(trials, "trials")
    vecs = gram_vectors(zp, tol)
    n = g.n
    best = None
    best_key = None
    balanced = 0
    for rng in _trial_rngs(seed, trials):
        side = hyperplane_cut(vecs, rng)
        bal = min(len(side), n - len(side)) / n
        size = g.cut_size(side)
        ok = bal >= c
        balanced += ok
        key = (not ok, size, -bal, side)
        if best_key is None or key < best_key:
            best_key, best = key, (side, size, bal)
    side, size, bal = best
    return CutResult(side, size, bal, trials, balanced, seed)


class HyperplaneRounding(BaseEstimator):
    """Estimator form of :func:`hyperplane_round`.

    ``fit(Z, graph)`` takes a feasible point and the graph whose cut is
    measured; ``labels_`` marks the chosen side.
    """

    def __init__(self, c=0.3, trials=100, random_state=0, tol=PSD_TOL):
        self.c = c
        self.trials = trials
        self.random_state = random_state
        self.tol = tol

    def fit(self, Z, graph):
        g = check_graph(graph)
        zp = check_zpoint(Z, g.n)
        self.cut_ = hyperplane_round(zp, g, check_balance(self.c), self.trials,
                                     int(self.random_state), self.tol)
        self.vectors_ = gram_vectors(zp, self.tol)
        self.labels_ = np.array([int(v in self.cut_.side) for v in range(g.n)])
        return self

    def fit_predict(self, Z, graph):
        return self.fit(Z, graph).labels_
