#!/usr/bin/env python3
"""Walkthrough: triangulating a polygon under a word budget.

Generates a spiral (deep reflex chains make the geodesic walk work hard),
triangulates it at a deliberately tight budget, checks the output against the
unrestricted-memory validator, and renders the result to SVG.  Watch the
metrics: the meter peak stays under 64*s while the polygon itself is twenty
times larger than the budget.
"""
import os

from polyws.cli import write_svg
from polyws.oracle import generate, validate_triangulation
from polyws.triangulate import triangulate_polygon
from polyws.workspace import MeterMode, RunStats

OUT = os.path.join(os.path.dirname(__file__), "out")


def main():
    os.makedirs(OUT, exist_ok=True)
    n, s = 600, 30
    poly = generate("spiral", n, seed=11)
    print(f"spiral polygon: n={n}, workspace s={s} words (budget {64 * s})")

    stats = RunStats()
    sink, meter, stats = triangulate_polygon(
        poly, s, mode=MeterMode.PERMISSIVE, seed=1, stats=stats)

    print(f"diagonals emitted : {len(sink.diagonals)} (need n-3 = {n - 3})")
    print(f"meter peak        : {meter.peak_words} words "
          f"(<= {64 * s}? {meter.peak_words <= 64 * s})")
    print(f"recursion depth   : {stats.depth}")
    print(f"geodesic links    : {stats.links}, far-case splits: {stats.far_calls}")
    print("per-level peaks   :", meter.level_peaks[:stats.depth + 1])

    rep = validate_triangulation(poly, sink.diagonals)
    print(f"validator         : {'accepted' if rep.ok else rep.errors[:3]}")

    svg = os.path.join(OUT, "triangulation.svg")
    write_svg(svg, poly, sink.diagonals)
    print(f"figure            : {svg}")


if __name__ == "__main__":
    main()
