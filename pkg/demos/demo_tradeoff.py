#!/usr/bin/env python3
"""Walkthrough: the time/space trade-off curve.

Triangulates one big comb at a ladder of budgets and tabulates how the meter
peak, recursion depth, geodesic-link count, and wall time respond.  More
workspace means fewer, shallower walks; past s = n/10 the whole polygon fits
in memory and the streaming machinery never engages.
"""
import time

from polyws.oracle import generate
from polyws.triangulate import triangulate_polygon
from polyws.workspace import MeterMode, RunStats


def main():
    n = 6000
    poly = generate("comb", n, seed=6)
    print(f"comb polygon n={n}")
    print(f"{'s':>6} {'ms':>8} {'peak_words':>11} {'depth':>6} "
          f"{'links':>7} {'farcases':>9}")
    for s in (64, 128, 256, 512, 1024, n // 10):
        stats = RunStats()
        t0 = time.perf_counter()
        sink, meter, stats = triangulate_polygon(
            poly, s, mode=MeterMode.PERMISSIVE, seed=2, stats=stats,
            audit=False)
        ms = (time.perf_counter() - t0) * 1000
        assert len(sink.diagonals) == n - 3
        print(f"{s:>6} {ms:>8.1f} {meter.peak_words:>11} {stats.depth:>6} "
              f"{stats.links:>7} {stats.far_calls:>9}")


if __name__ == "__main__":
    main()
