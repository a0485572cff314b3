"""Command-line interface: ``concavesep <command> ...``.

Exit codes: 0 success, 1 failed assertion or certificate, 2 input error.
Every report embeds the configuration (seed and tolerances included).
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
import warnings
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from . import io
from .baseline import GAP_LIMIT, gap_report
from .exceptions import InfeasibleError, PropertyViolation
from .graphs import (
    DEFAULT_ENUMERATION_LIMIT,
    Graph,
    as_partial_clique,
    components,
    triangle_violation,
    unique_partial_clique_completion,
)
from .polytope import ConstraintSystem, membership, polytope_face_rank
from .psd import PSD_TOL, bad_triple_witness, eig_min, is_psd_pm1, sos_witness
from .relaxation import STANDARD_GRID, STANDARD_Q, ProgramInstance, concavity_certificate, region_convexity_check
from .rounding import hyperplane_round
from .solver import optimize_over_vertices

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class SolveConfig:
    c: float = 0.3
    p: float = 1.0
    trials: int = 100
    seed: int = 0
    limit: int = DEFAULT_ENUMERATION_LIMIT
    tol_psd: float = PSD_TOL


def _fmt_set(s) -> str:
    return "{" + ",".join(str(v) for v in s) + "}"


def _removed_text(sets) -> str:
    return " ".join(_fmt_set(s) for s in sets) if sets else "(none)"


def solve_document(g: Graph, cfg: SolveConfig, timing: bool = False) -> dict:
    """Vertex search, rounding and (for ``n <= 12``) the exact optimum."""
    t0 = time.perf_counter()
    inst = ProgramInstance(g, cfg.c, cfg.p)
    res = optimize_over_vertices(inst, cfg.limit)
    t1 = time.perf_counter()
    doc = {"solve": res.to_dict()}
    if g.n <= GAP_LIMIT and len(inst.window):
        rep = gap_report(inst, cfg.trials, cfg.seed, cfg.limit, solve=res)
        doc["exact"] = {"side": list(rep.exact_side), "value": rep.exact_value}
        doc["rounding"] = dict(rep.rounded.to_dict(), source=rep.rounded_from)
        doc["ratios"] = rep.ratios()
    else:
        src, cand = ("window_best", res.window_best) if res.window_best is not None else ("best", res.best)
        cut = hyperplane_round(cand.point, g, cfg.c, cfg.trials, cfg.seed, cfg.tol_psd)
        doc["exact"] = None
        doc["rounding"] = dict(cut.to_dict(), source=src)
    if timing:
        doc["timing"] = {"solve_seconds": t1 - t0, "total_seconds": time.perf_counter() - t0}
    return doc


def solve_report(g: Graph, cfg: SolveConfig, fmt: str = "json", timing: bool = False,
                 extra_config: Optional[dict] = None) -> str:
    doc = {"config": dict(asdict(cfg), command="solve", **(extra_config or {}))}
    doc.update(solve_document(g, cfg, timing))
    if fmt == "json":
        return io.dumps_json(doc)
    s = doc["solve"]
    lines = [
        f"{s['label']}: {s['value']:.10g}",
        f"window-restricted value: {s['window_value']}",
        f"candidates: type1={s['counts']['type1']} type2={s['counts']['type2']}",
    ]
    if doc["exact"] is not None:
        lines.append(f"exact balanced cut: {doc['exact']['value']} side {_fmt_set(doc['exact']['side'])}")
    r = doc["rounding"]
    lines.append(f"rounded cut: {r['cut_size']} side {_fmt_set(r['side'])} balance {r['balance']:.4g} "
                 f"({r['balanced_trials']}/{r['trials_used']} balanced trials, from {r['source']})")
    return "\n".join(lines) + "\n" + io.format_key_values(doc)


def _config(args, **extra) -> dict:
    keys = ("command", "input", "c", "p", "trials", "seed", "limit", "tol_psd", "format")
    cfg = {k: getattr(args, k) for k in keys if hasattr(args, k)}
    cfg.update(extra)
    return cfg


def _emit(args, doc: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(io.dumps_json(doc))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")
        sys.stdout.write(io.format_key_values({"config": doc["config"]}))


def cmd_recognize(args) -> int:
    g = io.parse_graph(io.read_text(args.input))
    pc = as_partial_clique(g)
    doc = {"config": _config(args), "partial_clique": pc is not None}
    if pc is not None:
        doc["removed_sets"] = pc.removed_sets
        text = f"partial-clique: removed {_removed_text(pc.removed_sets)}"
    else:
        tri = triangle_violation(g)
        doc["violating_triple"] = tri
        text = f"not a partial-clique: violating triple ({tri[0]},{tri[1]},{tri[2]})"
    _emit(args, doc, text)
    return EXIT_OK


def _parse_keep(items: Sequence[str]) -> list[tuple[int, int]]:
    out = []
    for it in items:
        for tok in it.replace(";", " ").split():
            parts = tok.replace("-", ",").split(",")
            if len(parts) != 2:
                raise ValueError(f"keep edge must look like u,v or u-v, got {tok!r}")
            out.append((int(parts[0]), int(parts[1])))
    return out


def cmd_complete(args) -> int:
    g = io.parse_graph(io.read_text(args.input))
    keep = _parse_keep(args.keep)
    got = unique_partial_clique_completion(g, keep)
    kept = {tuple(sorted(e)) for e in keep}
    dropped = Graph(g.n, [e for e in g.edges if e not in kept])
    comps = [c for c in components(dropped) if len(c) > 1]
    trace = {"dropped_components": comps}
    if got is not None:
        es = set(got.edges)
        trace["keep_contained"] = kept <= es
        trace["dropped_excluded"] = not (set(dropped.edges) & es)
    doc = {"config": _config(args, keep=sorted(kept)), "completion": None if got is None else got.removed_sets,
           "trace": trace}
    text = "completion: none" if got is None else f"completion: removed {_removed_text(got.removed_sets)}"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_solve(args) -> int:
    g = io.parse_graph(io.read_text(args.input))
    cfg = SolveConfig(args.c, args.p, args.trials, args.seed, args.limit, args.tol_psd)
    out = solve_report(g, cfg, args.format, args.timing, {"input": args.input, "format": args.format})
    sys.stdout.write(out)
    return EXIT_OK


def cmd_psd(args) -> int:
    a = io.parse_pm1_matrix(io.read_text(args.input))
    comb = is_psd_pm1(a)
    lam = float(eig_min(a.a.astype(float)))
    doc = {"config": _config(args), "psd": comb, "eig_min": lam}
    if comb:
        b = sos_witness(a)
        doc["sign_vector"] = b
        text = f"PSD: yes, a = b b^T with b = {b.tolist()}"
    else:
        w = bad_triple_witness(a)
        doc["witness"] = {"indices": w.indices, "x": w.x, "value": w.value}
        text = f"PSD: no, x = {w.x.tolist()} gives x^T a x = {w.value}"
    agree = comb == (lam >= -args.tol_psd)
    doc["eigen_agrees"] = agree
    _emit(args, doc, text + f"\neig_min: {lam:.6g}")
    return EXIT_OK if agree else EXIT_FAIL


def cmd_check_point(args) -> int:
    zp = io.parse_zpoint(io.read_text(args.input))
    sys_ = ConstraintSystem(zp.n, args.c, args.p)
    mem = membership(zp, sys_, psd_tol=args.tol_psd)
    doc = {"config": _config(args), "in_T": mem.in_T, "in_H": mem.in_H, "in_P": mem.in_P, "in_F": mem.in_F,
           "pair_sum": zp.pair_sum(), "balance_bound": sys_.balance_bound}
    try:
        doc["face_rank_R"] = polytope_face_rank(zp)
    except InfeasibleError:
        doc["face_rank_R"] = None
    text = " ".join(f"{k}={doc[k]}" for k in ("in_T", "in_H", "in_P", "in_F"))
    _emit(args, doc, text)
    return EXIT_OK


def cmd_certify(args) -> int:
    reports = [concavity_certificate(q, STANDARD_GRID) for q in STANDARD_Q]
    viol = {str(p): region_convexity_check(p, args.samples, rng=args.seed) for p in (0.5, 1.0, 1.5)}
    ok = all(r.passed for r in reports) and not any(viol.values())
    doc = {"config": _config(args, samples=args.samples), "passed": ok,
           "hessian": [r.to_dict() for r in reports], "convexity_violations": viol}
    lines = [f"q={r.q}: {'PASS' if r.passed else 'FAIL'} worst rel err {r.worst_relative_error:.3g}, "
             f"max eigenvalue {r.worst_max_eigenvalue:.3g}" for r in reports]
    lines += [f"region p={p}: {v} violations" for p, v in viol.items()]
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .suites import run_all

    results = run_all(args.level, echo=lambda s: None if args.format == "json" else print(s))
    doc = {"config": _config(args, level=args.level), "results": [r.to_dict() for r in results]}
    if args.format == "json":
        sys.stdout.write(io.dumps_json(doc))
    else:
        print(io.format_key_values({"config": doc["config"]}), end="")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--c", type=float, default=0.3, help="balance parameter (default 0.3)")
    common.add_argument("--p", type=float, default=1.0, help="exponent p (default 1)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-psd", dest="tol_psd", type=float, default=PSD_TOL)

    parser = argparse.ArgumentParser(prog="concavesep", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recognize", parents=[common], help="partial-clique recognition of a graph file")
    p.add_argument("input")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("complete", parents=[common], help="unique partial-clique completion")
    p.add_argument("input")
    p.add_argument("--keep", nargs="*", default=[], help="kept edges as u,v or u-v")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("solve", parents=[common], help="vertex search, rounding and exact comparison")
    p.add_argument("input")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_LIMIT)
    p.add_argument("--timing", action="store_true", help="add wall-clock timings (breaks byte-identity)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("psd", parents=[common], help="PSD test of a +-1 matrix file")
    p.add_argument("input")
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("check-point", parents=[common], help="region membership of a point file")
    p.add_argument("input")
    p.set_defaults(func=cmd_check_point)

    p = sub.add_parser("certify", parents=[common], help="concavity and convexity certificates")
    p.add_argument("--samples", type=int, default=100_000)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suites")
    p.add_argument("level", choices=("quick", "full"))
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore" if args.format == "json" else "default")
            return args.func(args)
    except PropertyViolation as exc:
        print(f"error: property violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
