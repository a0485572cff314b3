"""Input coercion and checks shared by the estimators and the CLI."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import EnumerationLimitError
from .graphs import Graph
from .points import ZPoint


def check_graph(X) -> Graph:
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a Graph, a square adjacency array, or an ``(n, edges)`` pair.
    """
    if isinstance(X, Graph):
        return X
    if isinstance(X, tuple) and len(X) == 2 and isinstance(X[0], numbers.Integral):
        return Graph(int(X[0]), [tuple(e) for e in X[1]])
    a = np.asarray(X)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a Graph, (n, edges) or square adjacency matrix; got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(a)):
        raise ValueError("adjacency matrix has self-loops")
    return Graph.from_adjacency(a)


def check_zpoint(Z, n=None) -> ZPoint:
    zp = Z if isinstance(Z, ZPoint) else ZPoint(np.asarray(Z, dtype=float))
    if n is not None and zp.n != n:
        raise ValueError(f"point has n={zp.n}, expected {n}")
    return zp


def check_balance(c) -> float:
    c = float(c)
    if not 0.0 < c <= 0.5:
        raise ValueError(f"balance parameter c must lie in (0, 1/2], got {c}")
    return c


def check_exponent(p) -> float:
    p = float(p)
    if not 0.0 < p <= 2.0:
        raise ValueError(f"exponent p must lie in (0, 2], got {p}")
    return p


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_limit(n: int, limit: int) -> None:
    if n > limit:
        raise EnumerationLimitError(
            f"graph has n={n} vertices, above the enumeration limit {limit}; "
            "pass a larger limit (e.g. --limit) if the cost is acceptable"
        )
