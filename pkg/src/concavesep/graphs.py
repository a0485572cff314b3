"""Graphs, partial-cliques and the combinatorial recognition routines.

A *partial-clique* on ``V = {0..n-1}`` is the complete graph minus the edges of
cliques on pairwise disjoint vertex sets ``S_1..S_r``.  Equivalently it is a
complete multipartite graph, and its 0/1 adjacency vector is exactly a 0/1
point satisfying every linear triangle inequality ``z_ik <= z_ij + z_jk``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .exceptions import EnumerationLimitError

DEFAULT_ENUMERATION_LIMIT = 9


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Unordered vertex pairs in lexicographic order (the coordinate order of z)."""
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


def _norm_edge(u, v) -> tuple[int, int]:
    u, v = int(u), int(v)
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Edges are deduplicated and stored sorted, so iteration order is
    deterministic.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {self.n}")
        seen = set()
        for e in self.edges:
            u, v = _norm_edge(*e)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u < 0 or v >= n:
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            seen.add((u, v))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, pairs(n))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, ())

    @classmethod
    def from_adjacency(cls, adj) -> "Graph":
        a = np.asarray(adj)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = a.shape[0]
        return cls(n, [(i, j) for i, j in pairs(n) if a[i, j] or a[j, i]])

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Graph":
        """Graph whose edge set is encoded as a bitmask over ``pairs(n)``."""
        return cls(n, [p for k, p in enumerate(pairs(n)) if mask >> k & 1])

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def mask(self) -> int:
        idx = pair_index(self.n)
        out = 0
        for e in self.edges:
            out |= 1 << idx[e]
        return out

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edge_set

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def neighbors(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return nb

    def complement(self) -> "Graph":
        es = self.edge_set
        return Graph(self.n, [p for p in pairs(self.n) if p not in es])

    def is_connected(self) -> bool:
        return len(_components(self.n, self.neighbors())) == 1

    def cut_size(self, side: Iterable[int]) -> int:
        s = set(side)
        return sum((u in s) != (v in s) for u, v in self.edges)


def _components(n: int, nb: Sequence[set[int]]) -> list[tuple[int, ...]]:
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in nb[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(tuple(sorted(comp)))
    out.sort(key=lambda c: c[0])
    return out


def components(g: Graph) -> list[tuple[int, ...]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    return _components(g.n, g.neighbors())


def complement_components(g: Graph) -> list[tuple[int, ...]]:
    """Connected components of the complement of ``g``."""
    full = set(range(g.n))
    nb = g.neighbors()
    cnb = [full - nb[v] - {v} for v in range(g.n)]
    return _components(g.n, cnb)


@dataclass(frozen=True)
class PartialClique:
    """``K_n`` minus the cliques on pairwise disjoint ``removed_sets``.

    The canonical form keeps only removed sets of size >= 2 (a singleton
    removes no edge), each sorted, ordered by smallest element.
    """

    n: int
    removed_sets: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError(f"vertex count must be >= 1, got {self.n}")
        blocks = []
        used: set[int] = set()
        for s in self.removed_sets:
            b = tuple(sorted(int(v) for v in s))
            if len(set(b)) != len(b):
                raise ValueError(f"repeated vertex in removed set {b}")
            if len(b) < 2:
                raise ValueError(f"removed set {b} has fewer than two vertices")
            if b[0] < 0 or b[-1] >= n:
                raise ValueError(f"removed set {b} out of range for n={n}")
            if used & set(b):
                raise ValueError("removed sets must be pairwise disjoint")
            used |= set(b)
            blocks.append(b)
        blocks.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "removed_sets", tuple(blocks))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "PartialClique":
        """Build from any disjoint family, silently dropping singletons."""
        return cls(n, [tuple(b) for b in blocks if len(tuple(b)) >= 2])

    @classmethod
    def cut(cls, n: int, side: Iterable[int]) -> "PartialClique":
        """The complete bipartite graph ``K_{S, V\\S}`` as a partial-clique."""
        s = set(side)
        return cls.from_blocks(n, [sorted(s), sorted(set(range(n)) - s)])

    def blocks(self) -> list[tuple[int, ...]]:
        """All parts of the multipartite structure, singletons included."""
        covered = {v for b in self.removed_sets for v in b}
        out = list(self.removed_sets) + [(v,) for v in range(self.n) if v not in covered]
        return sorted(out)

    @property
    def is_multi_clique(self) -> bool:
        """True when the (non-singleton) removed sets cover every vertex."""
        return sum(len(b) for b in self.removed_sets) == self.n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        label = list(range(self.n))
        for b in self.removed_sets:
            for v in b:
                label[v] = b[0]
        return tuple(p for p in pairs(self.n) if label[p[0]] != label[p[1]])

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def mask(self) -> int:
        idx = pair_index(self.n)
        out = 0
        for e in self.edges:
            out |= 1 << idx[e]
        return out

    def graph(self) -> Graph:
        return Graph(self.n, self.edges)


def as_partial_clique(g: Graph) -> Optional[PartialClique]:
    """Canonical partial-clique representation of ``g``, or None.

    ``g`` is a partial-clique iff every connected component of its complement
    is a clique of the complement, i.e. spans no edge of ``g``.
    """
    es = g.edge_set
    for comp in complement_components(g):
        for p in combinations(comp, 2):
            if p in es:
                return None
    return PartialClique.from_blocks(g.n, complement_components(g))


def _nonadjacent_paths(a: np.ndarray) -> np.ndarray:
    na = 1 - a.astype(np.int64)
    return na @ na


def satisfies_triangle_binary(g: Graph) -> bool:
    """Direct check of ``z_ik <= z_ij + z_jk`` over all triples, z = 0/1 adjacency."""
    a = g.adjacency()
    # j = i or j = k never violates since z_ii = 0.
    return not bool(np.any((a == 1) & (_nonadjacent_paths(a) > 0)))


def triangle_violation(g: Graph) -> Optional[tuple[int, int, int]]:
    """A triple ``(i, j, k)`` with ij an edge but neither ik nor jk an edge."""
    a = g.adjacency()
    bad = (a == 1) & (_nonadjacent_paths(a) > 0)
    for i, j in pairs(g.n):
        if bad[i, j]:
            for k in range(g.n):
                if k not in (i, j) and not a[i, k] and not a[j, k]:
                    return (i, j, k)
    return None


def is_complete_bipartite(g: Graph) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Spanning bipartition ``(S1, S2)`` with ``E(g) = S1 x S2``, or None.

    ``S1`` holds vertex 0.  The edgeless graph is the degenerate ``(V, ())``.
    """
    if g.m == 0:
        return tuple(range(g.n)), ()
    nb = g.neighbors()
    color = [-1] * g.n
    color[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in nb[u]:
            if color[w] < 0:
                color[w] = 1 - color[u]
                queue.append(w)
            elif color[w] == color[u]:
                return None
    if min(color) < 0:
        return None
    s1 = tuple(v for v in range(g.n) if color[v] == 0)
    s2 = tuple(v for v in range(g.n) if color[v] == 1)
    if g.m != len(s1) * len(s2):
        return None
    return s1, s2


def support(g: Graph) -> tuple[int, ...]:
    return tuple(sorted({v for e in g.edges for v in e}))


def is_biclique(b) -> bool:
    """Whether the graph, restricted to its non-isolated vertices, is complete bipartite.

    Accepts a :class:`PartialClique` or a :class:`Graph`; the edgeless graph
    counts as a degenerate bi-clique.
    """
    g = b.graph() if isinstance(b, PartialClique) else b
    sup = support(g)
    if not sup:
        return True
    relabel = {v: k for k, v in enumerate(sup)}
    h = Graph(len(sup), [(relabel[u], relabel[v]) for u, v in g.edges])
    return is_complete_bipartite(h) is not None


def unique_partial_clique_completion(g: Graph, keep: Iterable) -> Optional[PartialClique]:
    """The partial-clique ``G*`` keeping ``keep`` and dropping ``E(g) \\ keep``.

    Each component of ``(V, E \\ keep)`` must sit inside one removed clique,
    so the candidate removes exactly those components.  It is the unique
    edge-maximal valid completion; every other valid completion merges some
    of its removed sets.  Returns None when the candidate loses a kept edge.
    """
    if not g.is_connected():
        raise ValueError("completion requires a connected graph")
    kept = {_norm_edge(*e) for e in keep}
    if not kept <= g.edge_set:
        raise ValueError("keep must be a subset of the graph's edges")
    dropped = Graph(g.n, [e for e in g.edges if e not in kept])
    cand = PartialClique.from_blocks(g.n, components(dropped))
    es = set(cand.edges)
    if not kept <= es:
        return None
    assert not (set(dropped.edges) & es)
    return cand


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def enumerate_partial_cliques(n: int, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[PartialClique]:
    """Every partial-clique on ``n`` vertices exactly once.

    These correspond one-to-one with set partitions of ``V`` (Bell(n) of
    them).  Ordered by number of covered vertices, then lexicographically by
    removed sets, so the empty family (``K_n``) comes first.
    """
    if n > limit:
        raise EnumerationLimitError(
            f"n={n} exceeds the enumeration limit {limit}; raise the limit explicitly "
            "(partial-clique counts grow as the Bell numbers)"
        )
    out = [PartialClique.from_blocks(n, p) for p in _set_partitions(list(range(n)))]
    out.sort(key=lambda pc: (sum(len(b) for b in pc.removed_sets), pc.removed_sets))
    return out
