"""Acceptance suites, shared by ``concavesep selftest`` and the test-suite.

Each ``check_*`` function runs one acceptance criterion and returns a
:class:`SuiteResult` made of named parts; the criterion passes only when
every part passes.  ``level="full"`` runs the stated sizes and tolerances,
``level="quick"`` a reduced version (n <= 5, fewer samples).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from .baseline import exact_min_balanced_cut, three_variable_grid_check
from .graphs import (
    Graph,
    PartialClique,
    as_partial_clique,
    enumerate_partial_cliques,
    is_biclique,
    satisfies_triangle_binary,
    unique_partial_clique_completion,
)
from .polytope import ConstraintSystem, basis_vertices, blend, is_edge_of_R, membership, polytope_face_rank, scaled_indicator
from .psd import PMOneMatrix, bad_triple_witness, eig_min, is_psd_pm1, partial_clique_psd_threshold, sos_witness
from .relaxation import (
    STANDARD_GRID,
    STANDARD_Q,
    ProgramInstance,
    concavity_certificate,
    cut_embedding,
    objective,
    region_convexity_check,
)
from .rounding import gram_vectors, hyperplane_cut, _trial_rngs
from .solver import optimize_over_vertices

LEVELS = ("quick", "full")


@dataclass
class SuiteResult:
    criterion: int
    name: str
    parts: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.parts.values())

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in self.parts.items())
        return f"[{status}] criterion {self.criterion}: {self.name} ({parts}) {self.seconds:.2f}s"

    def to_dict(self) -> dict:
        return {"criterion": self.criterion, "name": self.name, "passed": self.passed,
                "parts": dict(self.parts), "details": self.details}


def _level(level: str) -> bool:
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    return level == "full"


def _timed(fn: Callable[..., SuiteResult]):
    def wrapper(level: str = "full") -> SuiteResult:
        t = time.perf_counter()
        res = fn(_level(level))
        res.seconds = time.perf_counter() - t
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_recognition(full: bool) -> SuiteResult:
    """Partial-clique recognition agrees with the 0/1 triangle test on every graph."""
    n = 6 if full else 5
    d = n * (n - 1) // 2
    t = time.perf_counter()
    bad = []
    for mask in range(1 << d):
        g = Graph.from_mask(n, mask)
        pc = as_partial_clique(g)
        if (pc is not None) != satisfies_triangle_binary(g) or (pc is not None and pc.mask != mask):
            bad.append(mask)
    elapsed = time.perf_counter() - t
    return SuiteResult(1, f"partial-clique recognition, all graphs n={n}",
                       {"agreement": not bad, "runtime<10s": elapsed < 10.0},
                       {"graphs": 1 << d, "discrepancies": bad[:10], "runtime": elapsed})


def _pm1_stack(n: int) -> np.ndarray:
    iu = np.triu_indices(n, 1)
    d = len(iu[0])
    bits = (np.arange(1 << d)[:, None] >> np.arange(d)[None]) & 1
    a = np.ones((1 << d, n, n), dtype=np.int64)
    a[:, iu[0], iu[1]] = 1 - 2 * bits
    a[:, iu[1], iu[0]] = 1 - 2 * bits
    return a


@_timed
def check_pm1_psd(full: bool) -> SuiteResult:
    """Combinatorial PSD test for +-1 matrices against eigenvalues, with exact witnesses."""
    top = 6 if full else 5
    disagree, bad_cert, counts = [], [], {}
    for n in range(1, top + 1):
        stack = _pm1_stack(n)
        lam = eig_min(stack.astype(float))
        psd = 0
        for a_arr, ev in zip(stack, lam):
            a = PMOneMatrix(a_arr)
            comb = is_psd_pm1(a)
            psd += comb
            if comb != (ev >= -1e-8):
                disagree.append(a_arr.tolist())
            b, w = sos_witness(a), bad_triple_witness(a)
            if (b is None) == (w is None):
                bad_cert.append(a_arr.tolist())
            elif b is not None and not np.array_equal(np.outer(b, b), a_arr):
                bad_cert.append(a_arr.tolist())
            elif w is not None and (a.quadratic_form(w.x) >= 0 or w.value != a.quadratic_form(w.x)):
                bad_cert.append(a_arr.tolist())
        counts[n] = {"matrices": len(stack), "psd": psd}
    return SuiteResult(2, f"+-1 PSD characterization, n<={top}",
                       {"agreement": not disagree, "certificates": not bad_cert},
                       {"counts": counts, "disagreements": disagree[:5], "bad_certificates": bad_cert[:5]})


def _completion_cases(n: int):
    """Connected graphs on n vertices with every subset of their edges."""
    d = n * (n - 1) // 2
    for mask in range(1, 1 << d):
        g = Graph.from_mask(n, mask)
        if not g.is_connected():
            continue
        sub = mask
        while True:
            yield g, mask, sub
            if sub == 0:
                break
            sub = (sub - 1) & mask


@_timed
def check_completion(full: bool) -> SuiteResult:
    """Completion against brute force over all partial-cliques, connected graphs n <= 5.

    ``uniqueness`` is the literal claim that at most one partial-clique
    keeps ``keep`` and drops the rest of ``E``; ``maximal`` is the weaker
    statement that the edge-maximal valid one is unique and every valid one
    coarsens it.
    """
    top = 5 if full else 4
    t = time.perf_counter()
    stats = {"cases": 0, "exists": 0, "multiple": 0}
    bad_exist, bad_value, bad_max, multiple = [], [], [], []
    for n in range(2, top + 1):
        pcs = enumerate_partial_cliques(n)
        pmasks = np.array([p.mask for p in pcs], dtype=np.int64)
        sizes = np.array([p.num_edges for p in pcs])
        for g, emask, kmask in _completion_cases(n):
            stats["cases"] += 1
            drop = emask & ~kmask
            ok = ((pmasks & kmask) == kmask) & ((pmasks & drop) == 0)
            idx = np.nonzero(ok)[0]
            keep = [e for k, e in enumerate(_pairs_of(n)) if kmask >> k & 1]
            got = unique_partial_clique_completion(g, keep)
            if (got is not None) != bool(len(idx)):
                bad_exist.append((n, emask, kmask))
                continue
            if got is None:
                continue
            stats["exists"] += 1
            top_size = sizes[idx].max()
            tops = idx[sizes[idx] == top_size]
            if len(tops) != 1 or pcs[tops[0]].mask != got.mask:
                bad_value.append((n, emask, kmask))
            for i in idx:
                blk_of = {v: b for b, blk in enumerate(pcs[i].blocks()) for v in blk}
                if any(len({blk_of[v] for v in blk}) != 1 for blk in got.blocks()):
                    bad_max.append((n, emask, kmask))
                    break
            if len(idx) > 1:
                stats["multiple"] += 1
                if len(multiple) < 5:
                    multiple.append({"n": n, "edges": list(g.edges), "keep": keep,
                                     "valid": [pcs[i].removed_sets for i in idx]})
    elapsed = time.perf_counter() - t
    return SuiteResult(3, f"unique partial-clique completion, connected graphs n<={top}",
                       {"existence": not bad_exist, "value": not bad_value, "maximal": not bad_max,
                        "uniqueness": not multiple, "runtime<120s": elapsed < 120.0},
                       {"stats": stats, "existence_mismatch": bad_exist[:5], "value_mismatch": bad_value[:5],
                        "non_unique_examples": multiple, "runtime": elapsed})


def _pairs_of(n: int):
    return list(combinations(range(n), 2))


@_timed
def check_polytope(full: bool) -> SuiteResult:
    """Vertices of R and the combinatorial edge test against the rank oracle, n = 3, 4."""
    vert_bad, edge_bad, info = {}, {}, {}
    for n in (3, 4):
        d = n * (n - 1) // 2
        pcs = enumerate_partial_cliques(n)
        ind = {tuple(scaled_indicator(p, 2.0).vector) for p in pcs}
        ranks_ok = all(polytope_face_rank(scaled_indicator(p, 2.0)) == d for p in pcs)
        found = {tuple(z.vector) for z in basis_vertices(n)}
        vert_bad[n] = {"extra": sorted(found - ind), "missing": sorted(ind - found), "rank_ok": ranks_ok}
        mism = []
        pairs_checked = 0
        for u, v in combinations(pcs, 2):
            pairs_checked += 1
            comb = is_edge_of_R(u, v)
            oracle = polytope_face_rank(blend(u, v, 0.5)) == d - 1
            if comb != oracle:
                mism.append({"u": u.removed_sets, "v": v.removed_sets, "combinatorial": comb, "rank": oracle})
        edge_bad[n] = mism
        info[n] = {"vertex_pairs": pairs_checked, "edge_discrepancies": len(mism)}
    vertices_ok = all(not v["extra"] and not v["missing"] and v["rank_ok"] for v in vert_bad.values())
    return SuiteResult(4, "vertices and edges of the linear triangle polytope, n=3,4",
                       {"vertex_set": vertices_ok, "edge_test": all(not m for m in edge_bad.values())},
                       {"vertex_check": {n: {k: (len(v) if isinstance(v, list) else v) for k, v in x.items()}
                                         for n, x in vert_bad.items()},
                        "extra_vertices": {n: [list(p) for p in x["extra"]] for n, x in vert_bad.items()},
                        "edges": info, "edge_examples": {n: m[:3] for n, m in edge_bad.items()}})


@_timed
def check_certificates(full: bool) -> SuiteResult:
    """Hessian certificates on the standard grid and convexity of the power triangle region."""
    reports = [concavity_certificate(q, STANDARD_GRID, tol=1e-9, rel_tol=1e-4) for q in STANDARD_Q]
    samples = 100_000 if full else 10_000
    viol = {p: region_convexity_check(p, samples, rng=0) for p in (0.5, 1.0, 1.5)}
    return SuiteResult(5, "concavity certificates and region convexity",
                       {"hessian": all(r.passed for r in reports), "convexity": not any(viol.values())},
                       {"worst_relative_error": max(r.worst_relative_error for r in reports),
                        "worst_max_eigenvalue": max(r.worst_max_eigenvalue for r in reports),
                        "samples": samples, "violations": {str(k): v for k, v in viol.items()}})


@_timed
def check_thresholds(full: bool) -> SuiteResult:
    """PSD thresholds: 2 for every bi-clique, n/(n-1) for K_n."""
    top = 6 if full else 5
    bad_bi, bad_k, count = [], [], 0
    for n in range(2, top + 1):
        for p in enumerate_partial_cliques(n):
            if p.num_edges and is_biclique(p):
                count += 1
                lam = partial_clique_psd_threshold(p)
                if abs(lam - 2.0) > 1e-6:
                    bad_bi.append((n, p.removed_sets, lam))
    for n in range(3, top + 1):
        lam = partial_clique_psd_threshold(PartialClique(n, ()))
        if abs(lam - n / (n - 1)) > 1e-6:
            bad_k.append((n, lam))
    return SuiteResult(6, f"PSD thresholds along partial-clique rays, n<={top}",
                       {"biclique": not bad_bi, "complete": not bad_k},
                       {"bicliques": count, "biclique_failures": bad_bi[:5], "complete_failures": bad_k})


def random_instances(count: int = 100, ns=range(6, 11), cs=(0.25, 0.3, 0.4), prob: float = 0.5):
    """Seeded random instances: seed ``i`` fixes n, c and the G(n, prob) edge draw."""
    ns, cs = list(ns), list(cs)
    out = []
    for i in range(count):
        rng = np.random.default_rng(i)
        n = ns[i % len(ns)]
        c = cs[i % len(cs)]
        edges = [e for e in combinations(range(n), 2) if rng.random() < prob]
        out.append((i, ProgramInstance(Graph(n, edges), c, 1.0)))
    return out


def _balanced_sides(inst: ProgramInstance):
    """One side per balanced cut (the side holding vertex 0); the window is symmetric."""
    for k in inst.window:
        for rest in combinations(range(1, inst.n), k - 1):
            yield (0,) + rest


@_timed
def check_soundness(full: bool) -> SuiteResult:
    """Cut embeddings are feasible with objective equal to the cut; search value <= exact."""
    insts = random_instances(100) if full else random_instances(20, ns=range(4, 6), cs=(0.25, 0.3))
    infeasible, wrong_obj, above = [], [], []
    for seed, inst in insts:
        g = inst.graph
        sys = inst.system
        for side in _balanced_sides(inst):
            zp = cut_embedding(side, inst.n)
            if not membership(zp, sys).in_F:
                infeasible.append((seed, side))
            if objective(zp, g, inst.p) != g.cut_size(side):
                wrong_obj.append((seed, side))
        res = optimize_over_vertices(inst, limit=max(inst.n, 9))
        _, exact = exact_min_balanced_cut(g, inst.c)
        if res.value > exact + 1e-9:
            above.append((seed, res.value, exact))
    return SuiteResult(7, f"relaxation soundness on {len(insts)} seeded random graphs",
                       {"feasible": not infeasible, "objective": not wrong_obj, "value<=exact": not above},
                       {"instances": len(insts), "infeasible": infeasible[:5], "objective_mismatch": wrong_obj[:5],
                        "above_exact": above[:5]})


@_timed
def check_rounding(full: bool) -> SuiteResult:
    """Hyperplane rounding recovers embedded cuts; solve-then-round on K4."""
    from .pipeline import BalancedSeparator

    trials = 100
    cases = [(4, (0, 1)), (6, (0, 2, 4)), (7, (1, 2)), (8, (0, 1, 2, 3))]
    misses = []
    for n, side in cases:
        g = Graph.complete(n)
        vecs = gram_vectors(cut_embedding(side, n))
        want = {frozenset(side), frozenset(set(range(n)) - set(side))}
        for t, rng in enumerate(_trial_rngs(0, trials)):
            got = hyperplane_cut(vecs, rng)
            if frozenset(got) not in want or g.cut_size(got) != g.cut_size(side):
                misses.append((n, side, t))
    sep = BalancedSeparator(c=0.3, trials=100, random_state=0).fit(Graph.complete(4))
    _, exact = exact_min_balanced_cut(Graph.complete(4), 0.3)
    cut = sep.cut_
    return SuiteResult(8, "rounding fidelity and K4 pipeline",
                       {"embedded_cuts": not misses, "k4_exact": exact == 4,
                        "k4_balanced": cut.balance >= 0.3, "k4_size": cut.cut_size == 4},
                       {"trials": trials * len(cases), "misses": misses[:5],
                        "k4": dict(cut.to_dict(), exact=exact, source=sep.rounded_from_)})


@_timed
def check_three_variable(full: bool) -> SuiteResult:
    """Three-variable grid minimum sits at an enumerated extreme point."""
    step = 0.02 if full else 0.05
    parts, details = {}, {}
    for p in (0.25, 0.4):
        for with_psd in (True, False):
            r = three_variable_grid_check(p, 0.3, step, with_psd)
            key = f"p={p},{'with' if with_psd else 'without'}_P"
            parts[key] = r.passed
            details[key] = r.to_dict()
    return SuiteResult(9, f"three-variable extreme-point grid check, step {step}", parts, details)


@_timed
def check_determinism(full: bool) -> SuiteResult:
    """Two identical solve runs produce byte-identical JSON."""
    from .cli import SolveConfig, solve_report

    rng = np.random.default_rng(7)
    g10 = Graph(10, [e for e in combinations(range(10), 2) if rng.random() < 0.5])
    graphs = {"K4": Graph.complete(4), "G(10,0.5)": g10} if full else {"K4": Graph.complete(4)}
    parts = {}
    for name, g in graphs.items():
        cfg = SolveConfig(limit=max(9, g.n))
        a = solve_report(g, cfg, fmt="json")
        b = solve_report(g, cfg, fmt="json")
        parts[name] = a == b
    return SuiteResult(10, "deterministic solve reports", parts, {})


ALL_CHECKS = (
    check_recognition,
    check_pm1_psd,
    check_completion,
    check_polytope,
    check_certificates,
    check_thresholds,
    check_soundness,
    check_rounding,
    check_three_variable,
    check_determinism,
)


def run_all(level: str = "quick", echo: Callable[[str], None] = print) -> list[SuiteResult]:
    out = []
    for fn in ALL_CHECKS:
        try:
            res = fn(level)
        except Exception as exc:  # report and keep going; one broken suite must not hide the rest
            res = SuiteResult(ALL_CHECKS.index(fn) + 1, fn.__name__, {"completed": False},
                              {"error": f"{type(exc).__name__}: {exc}"})
        out.append(res)
        echo(res.line())
    return out
