"""Command-line front end: ``folner optimize | verify | brute | lattice | peelcheck``.

Machine output is JSON with sorted keys (CSV for ``lattice``); rationals are
always written as ``"p/q"``.  Exit codes: 0 success, 2 validation failure,
3 engine disagreement, 4 resource guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path

from .brute import DEFAULT_CAP, enumerate_max_fr
from .cooling import CoolingFunction, cooling_norm, folner_ratio, heat_losses, heat_map
from .engines import optimize
from .exceptions import EngineDisagreementError, FolnerError, NoCoolingFunctionError, ResourceGuardError
from .formats import load_graph, parse_vertex_token, read_subset, to_dot, vertex_to_json
from .graph import FreeGroupGraph, free_group_ball, sort_vertices, subset_context
from .lattice import ball, fr_formula, k0, rectangle, truncated
from .peeling import is_peeling, split
from .rational import format_rational, parse_rational

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_DISAGREE = 3
EXIT_GUARD = 4


class UsageError(Exception):
    pass


_SHORT = {
    "ball": re.compile(r"^ball:(\d+)$"),
    "box": re.compile(r"^box:(\d+)x(\d+)$"),
    "trunc": re.compile(r"^trunc:(\d+),(\d+)$"),
    "fball": re.compile(r"^fball:(\d+)$"),
}


def resolve_subset(spec: str, graph) -> list:
    """A subset file path, or one of ``ball:N``, ``box:MxN``, ``trunc:N,K``, ``fball:R``."""
    for kind, pat in _SHORT.items():
        m = pat.match(spec)
        if not m:
            continue
        a = [int(x) for x in m.groups()]
        if kind == "ball":
            return sorted(ball(a[0]))
        if kind == "box":
            return sorted(rectangle(a[0], a[1]))
        if kind == "trunc":
            return sorted(truncated(a[0], a[1]))
        if not isinstance(graph, FreeGroupGraph):
            raise UsageError("fball:R needs a free-group graph")
        return free_group_ball(graph.rank, a[0])
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"subset file not found: {spec}")
    return read_subset(path)


def parse_h0(spec):
    """``None``, a constant ``p/q``, or a file of ``<vertex> <p/q>`` lines."""
    if spec is None:
        return None
    try:
        return parse_rational(spec)
    except ValueError:
        pass
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"--h0 is neither a rational nor a file: {spec}")
    out = {}
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok, _, val = line.rpartition(" ")
        out[parse_vertex_token(tok)] = parse_rational(val.strip())
    return out


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _context(args):
    graph = load_graph(args.graph)
    S = resolve_subset(args.subset, graph)
    if not S:
        raise UsageError("the subset is empty")
    return subset_context(graph, S)


def _with_approx(doc: dict, args) -> dict:
    if getattr(args, "approx", False) and "N" in doc:
        doc["N_approx"] = float(parse_rational(doc["N"]))
    return doc


def cmd_optimize(args, out) -> int:
    ctx = _context(args)
    h0 = parse_h0(args.h0)
    try:
        res = optimize(ctx, args.engine, h0, validate=not args.no_validate)
    except EngineDisagreementError as exc:
        a, b = exc.results
        out.write(_dump({
            "error": "engine disagreement",
            "simplex": a.to_json(trace=args.trace),
            "flow": b.to_json(trace=args.trace),
        }))
        return EXIT_DISAGREE
    if args.engine == "both":
        a, b = res
        doc = a.to_json(trace=args.trace)
        doc["engine"] = "both"
        doc["S0_agree"] = a.S0 == b.S0
        doc["flow"] = b.to_json(trace=args.trace)
        main = a
    else:
        doc = res.to_json(trace=args.trace)
        main = res
    if args.dot:
        Path(args.dot).write_text(to_dot(main.cooling, highlight=main.S0))
    out.write(_dump(_with_approx(doc, args)))
    return EXIT_OK


def _load_cooling(ctx, path):
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        if "cooling" not in data:
            raise UsageError("cooling JSON object has no 'cooling' field")
        data = data["cooling"]
    return CoolingFunction.from_json(ctx, data)


def verify_report(c: CoolingFunction, h0=None, norm=None) -> dict:
    """Per-vertex and per-edge pass/fail for ``c`` against ``h0`` and an optional norm."""
    ctx = c.ctx
    need = heat_map(ctx.vertices, h0)
    losses = heat_losses(c)
    failing = {v for v in ctx.vertices if losses[v] < need[v]}
    vertices = [
        {
            "vertex": vertex_to_json(v),
            "loss": format_rational(losses[v]),
            "required": format_rational(need[v]),
            "ok": v not in failing,
        }
        for v in ctx.vertices
    ]
    edges = []
    for e, x in c.items():
        ok = norm is None or abs(x) <= norm
        edges.append({
            "edge": [vertex_to_json(e.i), vertex_to_json(e.t)],
            "value": format_rational(x),
            "ok": ok,
            "touches_failing_vertex": e.i in failing or e.t in failing,
        })
    actual = cooling_norm(c)
    norm_ok = norm is None or actual == norm
    return {
        "ok": not failing and all(r["ok"] for r in edges) and norm_ok,
        "norm": format_rational(actual),
        "expected_norm": None if norm is None else format_rational(norm),
        "norm_ok": norm_ok,
        "failed_vertices": [vertex_to_json(v) for v in sort_vertices(failing)],
        "failed_edges": [r["edge"] for r in edges if not r["ok"]],
        "vertices": vertices,
        "edges": edges,
    }


def cmd_verify(args, out) -> int:
    ctx = _context(args)
    c = _load_cooling(ctx, args.cooling)
    norm = parse_rational(args.norm) if args.norm is not None else None
    rep = verify_report(c, parse_h0(args.h0), norm)
    out.write(_dump(rep))
    return EXIT_OK if rep["ok"] else EXIT_INVALID


def cmd_brute(args, out) -> int:
    ctx = _context(args)
    res = enumerate_max_fr(ctx, parse_h0(args.h0), cap=args.cap)
    doc = {
        "schema": "folner-brute/1",
        "N": format_rational(res.N),
        "optimal": [[vertex_to_json(v) for v in sort_vertices(T)] for T in res.optimal],
        "union": [vertex_to_json(v) for v in sort_vertices(res.union)],
        "visited": res.visited,
    }
    out.write(_dump(_with_approx(doc, args)))
    return EXIT_OK


def lattice_rows(n_min: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(n_min, n_max + 1):
        top = k0(n)
        for k in range(0, (n + 1) // 2 + 1):
            rows.append({
                "n": n,
                "k": k,
                "size": 2 * n * n + 2 * n + 1 - 4 * k * k,
                "boundary": 8 * n + 4 - 8 * k,
                "FR": fr_formula(n, k),
                "k0": k == top,
            })
    return rows


def cmd_lattice(args, out) -> int:
    if args.n_min < 0 or args.n_max < args.n_min:
        raise UsageError("need 0 <= n-min <= n-max")
    rows = lattice_rows(args.n_min, args.n_max)
    if args.format == "json":
        recs = []
        for r in rows:
            rec = dict(r, FR=format_rational(r["FR"]))
            if args.approx:
                rec["FR_approx"] = float(r["FR"])
            recs.append(rec)
        out.write(_dump(recs))
        return EXIT_OK
    buf = io.StringIO()
    cols = ["n", "k", "size", "boundary", "FR", "k0"] + (["FR_approx"] if args.approx else [])
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        line = [r["n"], r["k"], r["size"], r["boundary"], format_rational(r["FR"]), "*" if r["k0"] else ""]
        if args.approx:
            line.append(f"{float(r['FR']):.6f}")
        w.writerow(line)
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_peelcheck(args, out) -> int:
    ctx = _context(args)
    P = read_subset(args.peel)
    if not P:
        raise UsageError("the peel file lists no vertices")
    h0 = parse_h0(args.h0)
    sg = split(ctx, P)
    T = sg.T
    ok = is_peeling(ctx, P, h0)
    doc = {
        "peeling": ok,
        "P": [vertex_to_json(v) for v in sort_vertices(sg.P)],
        "P_prime_size": len(sg.P_prime),
        "FR_T": format_rational(folner_ratio(subset_context(ctx.graph, T), T, h0)),
    }
    out.write(_dump(doc))
    return EXIT_OK


def _common(p, subset=True):
    p.add_argument("--graph", default="grid2", help="grid<d>, free<r>, a JSON descriptor or an edge-list file")
    if subset:
        p.add_argument("--subset", required=True, help="subset file, or ball:N, box:MxN, trunc:N,K, fball:R")
    p.add_argument("--h0", default=None, help="initial heat: a constant p/q or a file of '<vertex> <p/q>' lines")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="folner", description="Cooling norms and Følner-optimal subsets.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="minimum cooling norm, optimal subset and cooling function")
    _common(p)
    p.add_argument("--engine", choices=["simplex", "flow", "both"], default="simplex")
    p.add_argument("--trace", action="store_true", help="include the per-step trace")
    p.add_argument("--dot", default=None, help="also write a DOT rendering to this file")
    p.add_argument("--approx", action="store_true", help="add a decimal N for humans")
    p.add_argument("--no-validate", action="store_true", help="skip per-step simplex invariant checks")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("verify", help="check a cooling function file")
    _common(p)
    p.add_argument("--cooling", required=True, help="cooling JSON (a result file or its 'cooling' list)")
    p.add_argument("--norm", default=None, help="expected norm p/q; edges above it fail")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brute", help="exhaustive maximum Følner ratio")
    _common(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_brute)

    p = sub.add_parser("lattice", help="table of |B(n,k)|, |dE| and FR on Z^2")
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--approx", action="store_true")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("peelcheck", help="decide whether a vertex set is a peeling")
    _common(p)
    p.add_argument("--peel", required=True, help="subset file listing P")
    p.set_defaults(func=cmd_peelcheck)
    return ap


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"folner {args.command}: usage error: {exc}\n")
        return EXIT_INVALID
    except NoCoolingFunctionError as exc:
        comp = sort_vertices(exc.component or ())
        err.write(f"folner {args.command}: {exc}\n")
        err.write(_dump({"error": "no cooling function", "component": [vertex_to_json(v) for v in comp]}))
        return EXIT_INVALID
    except ResourceGuardError as exc:
        err.write(f"folner {args.command}: {exc}\n")
        return EXIT_GUARD
    except (FolnerError, ValueError, KeyError, TypeError, OSError) as exc:
        err.write(f"folner {args.command}: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
