"""Text formats for graphs, points and +-1 matrices; report serialization."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .exceptions import GraphFormatError
from .graphs import Graph
from .points import SYMMETRY_TOL, ZPoint
from .psd import PMOneMatrix

PathLike = Union[str, Path]


def _lines(text: str) -> list[tuple[int, list[str]]]:
    """Non-blank lines split into tokens, with 1-based line numbers; '#' starts a comment."""
    out = []
    for k, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if toks:
            out.append((k, toks))
    return out


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {tok!r}", lineno) from None


def parse_graph(text: str) -> Graph:
    """``n m`` header then ``m`` lines ``u v`` (0-indexed)."""
    lines = _lines(text)
    if not lines:
        raise GraphFormatError("empty input; expected header 'n m'", 1)
    k0, head = lines[0]
    if len(head) != 2:
        raise GraphFormatError("header must be 'n m'", k0)
    n, m = _int(head[0], k0, "n"), _int(head[1], k0, "m")
    if n < 1 or m < 0:
        raise GraphFormatError(f"need n >= 1 and m >= 0, got n={n}, m={m}", k0)
    body = lines[1:]
    if len(body) != m:
        last = body[-1][0] if body else k0
        raise GraphFormatError(f"header declares {m} edges, found {len(body)}", last)
    edges = []
    for k, toks in body:
        if len(toks) != 2:
            raise GraphFormatError("edge line must be 'u v'", k)
        u, v = _int(toks[0], k, "u"), _int(toks[1], k, "v")
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", k)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"endpoint out of range [0, {n}): {u} {v}", k)
        edges.append((u, v))
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    return "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"


def _square(text: str, conv, what: str) -> np.ndarray:
    lines = _lines(text)
    if not lines:
        raise GraphFormatError(f"empty input; expected {what} size n", 1)
    k0, head = lines[0]
    if len(head) != 1:
        raise GraphFormatError("first line must hold n alone", k0)
    n = _int(head[0], k0, "n")
    if n < 1:
        raise GraphFormatError(f"n must be >= 1, got {n}", k0)
    rows = lines[1:]
    if len(rows) != n:
        last = rows[-1][0] if rows else k0
        raise GraphFormatError(f"expected {n} rows, found {len(rows)}", last)
    out = np.empty((n, n), dtype=float)
    for r, (k, toks) in enumerate(rows):
        if len(toks) != n:
            raise GraphFormatError(f"row has {len(toks)} entries, expected {n}", k)
        for c, tok in enumerate(toks):
            out[r, c] = conv(tok, k)
    return out


def _float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise GraphFormatError(f"not a number: {tok!r}", lineno) from None


def parse_zpoint(text: str) -> ZPoint:
    """``n`` then ``n`` rows of ``n`` decimals; symmetric with zero diagonal to 1e-12."""
    z = _square(text, _float, "point")
    try:
        return ZPoint(z, sym_tol=SYMMETRY_TOL)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_zpoint(zp: ZPoint) -> str:
    rows = [" ".join(repr(float(x)) for x in row) for row in zp.z]
    return "\n".join([str(zp.n)] + rows) + "\n"


def parse_pm1_matrix(text: str) -> PMOneMatrix:
    """``n`` then ``n`` rows; every entry must be exactly ``1`` or ``-1``."""

    def conv(tok, k):
        v = _int(tok, k, "entry")
        if v not in (1, -1):
            raise GraphFormatError(f"entry must be exactly 1 or -1, got {tok}", k)
        return v

    a = _square(text, conv, "matrix")
    try:
        return PMOneMatrix(a.astype(np.int64))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_pm1_matrix(a: PMOneMatrix) -> str:
    return "\n".join([str(a.n)] + [" ".join(str(int(x)) for x in row) for row in a.a]) + "\n"


def read_text(path: PathLike) -> str:
    return Path(path).read_text()


def dumps_json(doc) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(to_plain(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def format_key_values(doc, prefix: str = "") -> str:
    """Flatten a nested document to ``key: value`` lines (dotted keys)."""
    return "\n".join(_kv(to_plain(doc), prefix)) + "\n"


def _kv(doc, prefix: str) -> Iterable[str]:
    if isinstance(doc, dict):
        for k in sorted(doc):
            yield from _kv(doc[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(doc, list) and doc and any(isinstance(x, (dict, list)) for x in doc):
        for i, x in enumerate(doc):
            yield from _kv(x, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {json.dumps(doc)}"


def to_plain(doc):
    """Recursively convert tuples, numpy scalars and arrays to JSON-native types."""
    if isinstance(doc, dict):
        return {str(k): to_plain(v) for k, v in doc.items()}
    if isinstance(doc, (list, tuple)):
        return [to_plain(x) for x in doc]
    if isinstance(doc, np.ndarray):
        return to_plain(doc.tolist())
    if isinstance(doc, np.generic):
        return doc.item()
    return doc
