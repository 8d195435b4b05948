"""Command-line surface: generate / triangulate / spt / partition / verify /
bench, plus the polygon file format, CSV metrics, and SVG figure emission.

Exit codes: 0 ok, 1 invalid input, 2 budget exceeded (strict), 3 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from typing import List, Optional, Tuple

from . import oracle
from .errors import (BudgetExceededError, InternalInvariantError,
                     PolygonInputError, UsageError)
from .partition import partition, piece_vertex_lists
from .spt import spt
from .triangulate import (AdjacencySink, CollectingSink, KAPPA_DEFAULT,
                          required_budget, triangulate_polygon)
from .workspace import BasePolygon, MeterMode, RunStats

L_DEFAULT = 64


# ---------------------------------------------------------------------------
# polygon file format: line 1 n, then n lines "x y"; '#' comments ignored

def load_polygon(path: str, validate: bool = True) -> BasePolygon:
    try:
        with open(path) as fh:
            tokens: List[str] = []
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    tokens.append(line)
    except OSError as exc:
        raise PolygonInputError(f"cannot read {path}: {exc}")
    if not tokens:
        raise PolygonInputError(f"{path} is empty")
    try:
        n = int(tokens[0])
        pts = []
        for line in tokens[1:n + 1]:
            xs, ys = line.split()
            pts.append((int(xs), int(ys)))
    except ValueError as exc:
        raise PolygonInputError(f"{path}: {exc}")
    if len(pts) != n:
        raise PolygonInputError(f"{path}: expected {n} vertices, got {len(pts)}")
    poly = _normalize_clockwise(pts)
    if validate:
        rep = oracle.check_simple(poly.points())
        if not rep.ok:
            raise PolygonInputError(f"{path}: {rep.errors[0]}")
    return poly


def _normalize_clockwise(pts: List[Tuple[int, int]]) -> BasePolygon:
    poly = BasePolygon(pts)
    if poly.signed_area2() > 0:
        poly = BasePolygon([pts[0]] + pts[:0:-1])
    return poly


def save_polygon(poly: BasePolygon, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(f"{poly.n}\n")
        for x, y in poly.points():
            fh.write(f"{x} {y}\n")


# ---------------------------------------------------------------------------
# SVG rendering: the polygon outline plus result segments, nothing interactive

def write_svg(path: str, poly: BasePolygon, segments, seg_color="crimson"):
    xs = [p[0] for p in poly.points()]
    ys = [p[1] for p in poly.points()]
    pad = max(2, (max(xs) - min(xs) + max(ys) - min(ys)) // 50)
    x0, y0 = min(xs) - pad, min(ys) - pad
    w = max(xs) - min(xs) + 2 * pad
    h = max(ys) - min(ys) + 2 * pad
    stroke = max(w, h) / 600.0

    def pt(p):
        return f"{p[0] - x0},{y0 + h - (p[1] - y0)}"

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}">']
    ring = " ".join(pt(p) for p in poly.points())
    lines.append(f'<polygon points="{ring}" fill="none" stroke="black" '
                 f'stroke-width="{stroke * 1.5}"/>')
    for (a, b) in segments:
        pa = poly.vertex(a) if isinstance(a, int) else a
        pb = poly.vertex(b) if isinstance(b, int) else b
        lines.append(f'<line x1="{pt(pa).split(",")[0]}" '
                     f'y1="{pt(pa).split(",")[1]}" '
                     f'x2="{pt(pb).split(",")[0]}" '
                     f'y2="{pt(pb).split(",")[1]}" '
                     f'stroke="{seg_color}" stroke-width="{stroke}"/>')
    lines.append("</svg>\n")
    with open(path, "w") as fh:
        fh.write("\n".join(lines))


# ---------------------------------------------------------------------------
# commands

def _metrics_line(name, poly, s, ms, meter, stats):
    print(f"{name}: n={poly.n} s={s} ms={ms:.1f} peak_words={meter.peak_words} "
          f"depth={stats.depth} links={stats.links} farcases={stats.far_calls}",
          file=sys.stderr)


def _mode(args) -> MeterMode:
    return MeterMode.STRICT if args.mode == "strict" else MeterMode.PERMISSIVE


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("POLYWS_SEED")
    return int(env) if env else 0


def cmd_generate(args) -> int:
    poly = oracle.generate(args.kind, args.n, _seed(args))
    if args.out:
        save_polygon(poly, args.out)
    else:
        sys.stdout.write(f"{poly.n}\n")
        for x, y in poly.points():
            sys.stdout.write(f"{x} {y}\n")
    return 0


def cmd_triangulate(args) -> int:
    poly = load_polygon(args.input, validate=not args.no_validate)
    s = args.s if args.s else required_budget(poly.n)
    stats = RunStats()
    t0 = time.perf_counter()
    if args.format == "triangles-adjacency":
        sink = AdjacencySink()
    else:
        sink = CollectingSink()
    sink, meter, stats = triangulate_polygon(
        poly, s, sink=sink, mode=_mode(args), L=args.L, kappa=args.kappa,
        seed=_seed(args), stats=stats)
    ms = (time.perf_counter() - t0) * 1000
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "edges":
            for a, b in sink.diagonals:
                out.write(f"{a} {b}\n")
        elif args.format == "triangles-adjacency":
            for tid, (i, j, k), (n1, n2, n3) in sink.records:
                out.write(f"T {tid} {i} {j} {k}  {n1} {n2} {n3}\n")
        else:
            payload = {"n": poly.n, "s": s,
                       "diagonals": [list(d) for d in sink.diagonals]}
            if isinstance(sink, AdjacencySink):
                payload["triangles"] = [
                    {"id": tid, "corners": list(c), "neighbors": list(nb)}
                    for tid, c, nb in sink.records]
            json.dump(payload, out, indent=1)
            out.write("\n")
    finally:
        if args.out:
            out.close()
    if args.svg:
        write_svg(args.svg, poly, sink.diagonals)
    _metrics_line("triangulate", poly, s, ms, meter, stats)
    return 0


def cmd_spt(args) -> int:
    poly = load_polygon(args.input, validate=not args.no_validate)
    s = args.s if args.s else required_budget(poly.n)
    if "," in args.root:
        x, y = args.root.split(",")
        root = (int(x), int(y))
    else:
        root = int(args.root)
    t0 = time.perf_counter()
    sink, meter, stats = spt(poly, root, s, mode=_mode(args), L=args.L,
                             kappa=args.kappa, seed=_seed(args))
    ms = (time.perf_counter() - t0) * 1000
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "json":
            json.dump({"n": poly.n, "root": args.root,
                       "edges": [list(e) for e in sorted(sink.edge_set())]},
                      out, indent=1)
            out.write("\n")
        else:
            for a, b in sink.edges:
                out.write(f"{a} {b}\n")
    finally:
        if args.out:
            out.close()
    if args.svg:
        segs = [(a, b) for a, b in sink.edges if a != 0]
        if isinstance(root, tuple):
            segs += [(root, poly.vertex(b)) for a, b in sink.edges if a == 0]
        write_svg(args.svg, poly, segs, seg_color="steelblue")
    _metrics_line("spt", poly, s, ms, meter, stats)
    return 0


def cmd_partition(args) -> int:
    poly = load_polygon(args.input, validate=not args.no_validate)
    s = args.s if args.s else max(1, math.isqrt(poly.n))
    t0 = time.perf_counter()
    pieces, diagonals, meter, stats, _rounds = partition(
        poly, s, mode=_mode(args), L=args.L, kappa=args.kappa,
        seed=_seed(args))
    ms = (time.perf_counter() - t0) * 1000
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "json":
            json.dump({"n": poly.n, "s": s,
                       "diagonals": [list(d) for d in diagonals],
                       "pieces": piece_vertex_lists(pieces)}, out, indent=1)
            out.write("\n")
        else:
            for a, b in diagonals:
                out.write(f"{a} {b}\n")
            for ring in piece_vertex_lists(pieces):
                out.write("P " + " ".join(map(str, ring)) + "\n")
    finally:
        if args.out:
            out.close()
    if args.svg:
        write_svg(args.svg, poly, diagonals, seg_color="darkorange")
    _metrics_line("partition", poly, s, ms, meter, stats)
    return 0


def cmd_verify(args) -> int:
    poly = load_polygon(args.input)
    what = args.what
    with open(args.against) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
        lines = [ln for ln in lines if ln]
    if what == "triangulation":
        diagonals = []
        for ln in lines:
            if ln.startswith(("T ", "P ")):
                continue
            a, b = ln.split()
            diagonals.append((int(a), int(b)))
        rep = oracle.validate_triangulation(poly, diagonals)
    elif what == "spt":
        edges = set()
        for ln in lines:
            a, b = ln.split()
            edges.add((int(a), int(b)))
        r = int(args.root) if args.root is not None else None
        if r is None:
            # infer the root: the vertex that never appears as a child
            children = {b for _a, b in edges}
            cands = [v for v in range(1, poly.n + 1) if v not in children]
            if len(cands) != 1:
                raise PolygonInputError("cannot infer the tree root; use --root")
            r = cands[0]
        rep = oracle.validate_spt(poly, r, edges)
    elif what == "partition":
        if args.s is None:
            raise PolygonInputError("verify partition needs --s")
        diagonals = []
        pieces = []
        for ln in lines:
            if ln.startswith("P "):
                pieces.append([int(x) for x in ln.split()[1:]])
            else:
                a, b = ln.split()
                diagonals.append((int(a), int(b)))
        rep = oracle.validate_partition(poly, diagonals, pieces, args.s)
    else:
        raise PolygonInputError(f"unknown verification target {what!r}")
    if rep.ok:
        print("OK", file=sys.stderr)
        return 0
    for err in rep.errors[:20]:
        print(f"FAIL: {err}", file=sys.stderr)
    return 1


def cmd_bench(args) -> int:
    out = open(args.csv, "w") if args.csv else sys.stdout
    try:
        out.write("kind,n,s,ms,peak_words,depth,links,farcases\n")
        for s_str in args.s.split(","):
            s = int(s_str)
            poly = oracle.generate(args.kind, args.n, _seed(args))
            stats = RunStats()
            t0 = time.perf_counter()
            sink, meter, stats = triangulate_polygon(
                poly, s, mode=_mode(args), L=args.L, kappa=args.kappa,
                seed=_seed(args), stats=stats, audit=False)
            ms = (time.perf_counter() - t0) * 1000
            out.write(f"{args.kind},{args.n},{s},{ms:.1f},{meter.peak_words},"
                      f"{stats.depth},{stats.links},{stats.far_calls}\n")
    finally:
        if args.csv:
            out.close()
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polyws",
        description="memory-budgeted triangulation, shortest-path trees, and "
                    "balanced partitions of simple polygons")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="polygon file (line 1: n; then 'x y')")
        p.add_argument("--s", type=int, default=None, help="workspace words")
        p.add_argument("--L", type=int, default=L_DEFAULT,
                       help="budget constant: budget = L*s")
        p.add_argument("--kappa", type=float, default=KAPPA_DEFAULT,
                       help="per-level workspace decay, in (0.6, 1)")
        p.add_argument("--mode", choices=("strict", "permissive"),
                       default="strict")
        p.add_argument("--seed", type=int, default=None,
                       help="rng seed (fallback: POLYWS_SEED)")
        p.add_argument("--svg", default=None, help="write a figure here")
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--no-validate", action="store_true",
                       help="skip input validation")

    g = sub.add_parser("generate", help="emit a test polygon")
    g.add_argument("--kind", default="random",
                   choices=("random", "convex", "comb", "spiral", "monotone"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("triangulate", help="stream a triangulation")
    common(t)
    t.add_argument("--format", choices=("edges", "triangles-adjacency", "json"),
                   default="edges")
    t.set_defaults(func=cmd_triangulate)

    sp = sub.add_parser("spt", help="shortest-path tree from a root")
    common(sp)
    sp.add_argument("--root", default="1",
                    help="vertex index, or 'x,y' for an interior point")
    sp.add_argument("--format", choices=("edges", "json"), default="edges")
    sp.set_defaults(func=cmd_spt)

    pa = sub.add_parser("partition", help="balanced diagonal partition")
    common(pa)
    pa.add_argument("--format", choices=("text", "json"), default="text")
    pa.set_defaults(func=cmd_partition)

    v = sub.add_parser("verify", help="check an output file against its input")
    v.add_argument("input")
    v.add_argument("--against", required=True)
    v.add_argument("--what", choices=("triangulation", "spt", "partition"),
                   default="triangulation")
    v.add_argument("--root", default=None)
    v.add_argument("--s", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="triangulation metrics across budgets")
    b.add_argument("--kind", default="comb",
                   choices=("random", "convex", "comb", "spiral", "monotone"))
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--s", required=True, help="comma-separated budgets")
    b.add_argument("--L", type=int, default=L_DEFAULT)
    b.add_argument("--kappa", type=float, default=KAPPA_DEFAULT)
    b.add_argument("--mode", choices=("strict", "permissive"),
                   default="permissive")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--csv", default=None)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PolygonInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except (InternalInvariantError, UsageError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
