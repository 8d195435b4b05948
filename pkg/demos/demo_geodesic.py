#!/usr/bin/env python3
"""Walkthrough: the pausable geodesic cursor.

The cursor yields one shortest-path vertex at a time, recomputing each link
from scratch with the randomized cone search, so its stored state stays a
handful of words no matter how long the path is.  Pausing it, doing other
work, and resuming cannot change what it yields.
"""
from polyws.geodesic import GeodesicCursor
from polyws.oracle import generate, ref_geodesic
from polyws.workspace import RunStats, SubpolygonView
import random


def main():
    n = 300
    poly = generate("spiral", n, seed=4)
    view = SubpolygonView.whole(poly)
    source, target = 1, n // 2

    stats = RunStats()
    cursor = GeodesicCursor(view, source, target, random.Random(9), stats)
    path = [source]
    print(f"walking the geodesic {source} -> {target} in a {n}-gon, "
          "pausing after every vertex:")
    while not cursor.done:
        path.append(cursor.next_vertex())
        if len(path) % 25 == 0:
            print(f"  ...paused at vertex {path[-1]} "
                  f"({len(path) - 1} links so far)")

    print(f"path bends        : {len(path) - 2}")
    print(f"cone rounds/link  : {stats.rounds / stats.links:.2f} "
          f"(expected to stay logarithmic in n)")
    oracle = ref_geodesic(poly, source, target)
    print(f"matches oracle    : {path == oracle}")


if __name__ == "__main__":
    main()
