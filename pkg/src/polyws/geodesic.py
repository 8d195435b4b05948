"""Streaming geodesic provider.

A cursor yields the vertices of the shortest path between two vertices of a
view one at a time and can be paused and resumed freely: each link is
recomputed from scratch by a randomized cone-shrinking search that keeps only
a constant number of words between rounds.  Reflex-vertex membership in the
cone is recomputed by an O(m) scan every round and never stored.
"""
from __future__ import annotations

import random
from typing import Optional, Tuple

import numpy as np

from . import geom
from .errors import InternalInvariantError, PolygonInputError, UsageError
from .workspace import RunStats


class Cone:
    """Open angular sector at a vertex, swept counterclockwise from direction
    `a` to direction `b`.  The flags record whether a bound still coincides
    with the polygon edge it started on (the only directions on which a
    geodesic may leave the apex exactly)."""

    __slots__ = ("a", "b", "a_edge", "b_edge")

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.a_edge = True
        self.b_edge = True

    def contains(self, d) -> bool:
        ca = geom.cross(self.a[0], self.a[1], d[0], d[1])
        cb = geom.cross(d[0], d[1], self.b[0], self.b[1])
        cab = geom.cross(self.a[0], self.a[1], self.b[0], self.b[1])
        if cab > 0:
            return ca > 0 and cb > 0
        if cab < 0:
            return ca > 0 or cb > 0
        # opposite bounds: exactly a half-plane
        dot = self.a[0] * self.b[0] + self.a[1] * self.b[1]
        if dot < 0:
            return ca > 0
        raise InternalInvariantError("cone bounds collapsed to one direction")


def _neighbors(m: int, q: int) -> Tuple[int, int]:
    return 1 + (q - 2) % m, 1 + q % m


def _initial_cone(view, q: int) -> Cone:
    m = view.m
    vq = view.point(q)
    prv, nxt = _neighbors(m, q)
    pp = view.point(prv)
    pn = view.point(nxt)
    return Cone((pp[0] - vq[0], pp[1] - vq[1]), (pn[0] - vq[0], pn[1] - vq[1]))


def _candidate_scan_scalar(view, q: int, cone: Cone, pick: Optional[int]):
    """Count reflex candidates in the cone, or return the pick-th (0-based).

    Candidates in ascending local order: a vertex is a candidate when it is
    reflex and either strictly inside the cone or the boundary neighbor still
    flagged on a cone bound.
    """
    m = view.m
    pts = view.scan_points()
    qx, qy = pts[q - 1]
    prv, nxt = _neighbors(m, q)
    ax, ay = cone.a
    bx, by = cone.b
    cab = ax * by - ay * bx
    half = None
    if cab == 0:
        if ax * bx + ay * by >= 0:
            raise InternalInvariantError("cone bounds collapsed to one direction")
        half = True
    count = 0
    px, py = pts[m - 1]
    cx, cy = pts[0]
    for i in range(1, m + 1):
        nx, ny = pts[i % m]
        if i != q:
            # reflex: counterclockwise turn along the clockwise ring
            if (cx - px) * (ny - py) - (cy - py) * (nx - px) > 0:
                if i == prv:
                    ok = cone.a_edge
                elif i == nxt:
                    ok = cone.b_edge
                else:
                    ok = False
                if not ok:
                    dx = cx - qx
                    dy = cy - qy
                    ca = ax * dy - ay * dx
                    if half is not None:
                        ok = ca > 0
                    elif cab > 0:
                        ok = ca > 0 and dx * by - dy * bx > 0
                    else:
                        ok = ca > 0 or dx * by - dy * bx > 0
                if ok:
                    if pick is not None and count == pick:
                        return i
                    count += 1
        px, py, cx, cy = cx, cy, nx, ny
    if pick is not None:
        raise InternalInvariantError("cone candidate pick out of range")
    return count


def _candidate_scan_bulk(view, q: int, cone: Cone, pick: Optional[int]):
    xs, ys = view.coord_arrays()
    vqx, vqy = view.point(q)
    dx = xs - vqx
    dy = ys - vqy
    ax, ay = cone.a
    bx, by = cone.b
    ca = ax * dy - ay * dx
    cb = dx * by - dy * bx
    cab = ax * by - ay * bx
    if cab > 0:
        inside = (ca > 0) & (cb > 0)
    elif cab < 0:
        inside = (ca > 0) | (cb > 0)
    else:
        if ax * bx + ay * by >= 0:
            raise InternalInvariantError("cone bounds collapsed to one direction")
        inside = ca > 0
    px = np.roll(xs, 1)
    py = np.roll(ys, 1)
    nx = np.roll(xs, -1)
    ny = np.roll(ys, -1)
    reflex = (xs - px) * (ny - py) - (ys - py) * (nx - px) > 0
    cand = inside & reflex
    m = view.m
    prv, nxt = _neighbors(m, q)
    if cone.a_edge and reflex[prv - 1]:
        cand[prv - 1] = True
    if cone.b_edge and reflex[nxt - 1]:
        cand[nxt - 1] = True
    cand[q - 1] = False
    if pick is None:
        return int(np.count_nonzero(cand))
    idx = np.nonzero(cand)[0]
    return int(idx[pick]) + 1


def _scan_candidates(view, q, cone, pick=None):
    if view.all_int and view.m >= geom.BULK_MIN_M:
        return _candidate_scan_bulk(view, q, cone, pick)
    return _candidate_scan_scalar(view, q, cone, pick)


def _pick_candidate(view, q, cone, rng) -> Optional[int]:
    """One uniformly random cone candidate, or None when there is none.

    The bulk path counts then picks (one rng draw); the scalar path fuses the
    two scans with reservoir sampling (one draw per candidate seen).
    """
    if view.all_int and view.m >= geom.BULK_MIN_M:
        count = _candidate_scan_bulk(view, q, cone, None)
        if count == 0:
            return None
        return _candidate_scan_bulk(view, q, cone, rng.randrange(count))
    return _candidate_reservoir_scalar(view, q, cone, rng)


def _candidate_reservoir_scalar(view, q, cone, rng) -> Optional[int]:
    m = view.m
    pts = view.scan_points()
    qx, qy = pts[q - 1]
    prv, nxt = _neighbors(m, q)
    ax, ay = cone.a
    bx, by = cone.b
    cab = ax * by - ay * bx
    half = None
    if cab == 0:
        if ax * bx + ay * by >= 0:
            raise InternalInvariantError("cone bounds collapsed to one direction")
        half = True
    chosen = None
    count = 0
    px, py = pts[m - 1]
    cx, cy = pts[0]
    for i in range(1, m + 1):
        nx, ny = pts[i % m]
        if i != q:
            if (cx - px) * (ny - py) - (cy - py) * (nx - px) > 0:
                if i == prv:
                    ok = cone.a_edge
                elif i == nxt:
                    ok = cone.b_edge
                else:
                    ok = False
                if not ok:
                    dx = cx - qx
                    dy = cy - qy
                    ca = ax * dy - ay * dx
                    if half is not None:
                        ok = ca > 0
                    elif cab > 0:
                        ok = ca > 0 and dx * by - dy * bx > 0
                    else:
                        ok = ca > 0 or dx * by - dy * bx > 0
                if ok:
                    count += 1
                    if rng.randrange(count) == 0:
                        chosen = i
        px, py, cx, cy = cx, cy, nx, ny
    return chosen


def first_link(view, q: int, t: int, rng: random.Random,
               stats: Optional[RunStats] = None) -> int:
    """Second vertex of the geodesic from q to t (t itself when q sees t).

    Each round: pick a reflex vertex r uniformly among those inside the cone,
    shoot the ray q->r, and either certify r (target hidden behind it), or
    halve the cone to the side whose component contains t.  Expected rounds
    logarithmic in the candidate count; O(1) words retained between rounds.
    """
    m = view.m
    if q == t:
        raise PolygonInputError("first_link needs distinct endpoints")
    if (t - q) % m == 1 or (q - t) % m == 1:
        return t  # boundary edges are trivially geodesics
    cone = _initial_cone(view, q)
    guard = 4 * m + 16
    for _ in range(guard):
        if stats is not None:
            stats.rounds += 1
        r = _pick_candidate(view, q, cone, rng)
        if r is None:
            return t
        hit = geom.ray_scan_light(view, q, r)
        if hit is None:
            raise InternalInvariantError(
                "ray from boundary vertex escaped the polygon")
        kind, cut_idx, num, den = hit
        if kind == "vertex" and cut_idx == t:
            # the ray reaches t exactly: the open segment q..t is clear
            return t
        f_r = (r - q) % m
        # forward offset of the boundary cut made by the ray: a vertex hit
        # cuts exactly there, an edge hit cuts between the edge's endpoints
        f_cut = (cut_idx - q) % m
        t_off = (t - q) % m
        if num > den:  # q sees r: three components, one hidden behind r
            if r == t:
                return t
            if f_r <= f_cut:
                if f_r < t_off <= f_cut:
                    return r  # t hidden
                next_side = t_off < f_r
            else:
                if f_cut < t_off < f_r:
                    return r  # t hidden
                next_side = t_off <= f_cut
        else:
            next_side = t_off <= f_cut
        vq = view.point(q)
        vr = view.point(r)
        ray_dir = (vr[0] - vq[0], vr[1] - vq[1])
        if next_side:
            cone.a = ray_dir
            cone.a_edge = False
        else:
            cone.b = ray_dir
            cone.b_edge = False
    raise InternalInvariantError("cone search failed to terminate")


class GeodesicCursor:
    """Pausable stream of geodesic vertices from `source` toward `target`.

    Stored state is O(1) words beyond the view: the current vertex, the
    target, and the generator seed.  Iteration yields each vertex of the
    path after the source, ending with the target.
    """

    WORDS = 16

    def __init__(self, view, source: int, target: int,
                 rng: Optional[random.Random] = None,
                 stats: Optional[RunStats] = None):
        if source == target:
            raise PolygonInputError("cursor endpoints must differ")
        self.view = view
        self.current = source
        self.target = target
        self.rng = rng if rng is not None else random.Random(0)
        self.stats = stats
        self.done = False

    def next_vertex(self) -> int:
        if self.done:
            raise UsageError("cursor is exhausted")
        nxt = first_link(self.view, self.current, self.target, self.rng,
                         self.stats)
        if self.stats is not None:
            self.stats.links += 1
        self.current = nxt
        if nxt == self.target:
            self.done = True
        return nxt

    def __iter__(self):
        return self

    def __next__(self) -> int:
        if self.done:
            raise StopIteration
        return self.next_vertex()
