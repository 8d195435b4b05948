"""Recursive workspace-bounded triangulation.

The driver walks the geodesic from the view's start vertex toward its midpoint
vertex, cutting the polygon at alternating diagonals as they appear (or are
manufactured after tau steps), recursing on the pieces with a geometrically
shrinking workspace allowance, and streaming every diagonal to a write-only
sink exactly once.  Small pieces are triangulated in memory by ear clipping.
"""
from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import geom
from .errors import InternalInvariantError, PolygonInputError
from .geodesic import GeodesicCursor
from .workspace import (BasePolygon, MeterMode, RunStats, SubpolygonView,
                        WorkspaceMeter, is_alternating, null_meter)

KAPPA_DEFAULT = 0.9          # workspace decay per recursion level
IN_MEMORY_FACTOR = 10        # fits in memory when 10*tau >= m
TAU_FLOOR = 10               # below this the recursion has run out of space
C0_LOG = 8                   # strict-mode precondition: s >= 8*ceil(log2 n)
WALK_SCALARS = 8             # per-level loop state charged to the meter

# expensive self-checks (visibility of produced diagonals etc.) are skipped
# above this view size; cheap structural asserts always run
AUDIT_MAX_M = 4096


def required_budget(n: int) -> int:
    return C0_LOG * max(1, (n - 1).bit_length())


# ---------------------------------------------------------------------------
# sinks

class TriangulationSink:
    """Write-only consumer of triangulation output.  Emitted records are never
    read back by the algorithm."""

    adjacency = False

    def emit_diagonal(self, a: int, b: int) -> None:
        raise NotImplementedError

    def finish(self) -> None:
        pass


class NullSink(TriangulationSink):
    def emit_diagonal(self, a: int, b: int) -> None:
        pass


class CollectingSink(TriangulationSink):
    """Keeps diagonals in emission order (tests, validators, CLI)."""

    def __init__(self):
        self.diagonals: List[Tuple[int, int]] = []

    def emit_diagonal(self, a: int, b: int) -> None:
        self.diagonals.append((min(a, b), max(a, b)))


class Triangle:
    __slots__ = ("tid", "corners", "neighbors", "missing")

    def __init__(self, tid, corners):
        self.tid = tid
        self.corners = corners            # base indices, boundary order
        self.neighbors = [None, None, None]  # tid | 0 (polygon boundary)
        self.missing = 0


class PendingAdjacency:
    """Half-records for diagonals whose second side has not been built yet.

    One constant-size entry per live delimiting diagonal; entries die when the
    neighboring subproblem reports its triangle.
    """

    ENTRY_WORDS = 5

    def __init__(self, meter: WorkspaceMeter):
        self.meter = meter
        self.half: Dict[Tuple[int, int], Tuple[int, int]] = {}
        self.peak = 0

    def deposit_or_join(self, key, tid, slot):
        """Returns the partner (tid, slot) when this completes the pair."""
        if key in self.half:
            other = self.half.pop(key)
            self.meter.release(self.ENTRY_WORDS, level=0)
            if other[0] == tid:
                raise InternalInvariantError(
                    f"diagonal {key} deposited twice by one triangle")
            return other
        self.half[key] = (tid, slot)
        self.meter.alloc(self.ENTRY_WORDS, level=0)
        self.peak = max(self.peak, len(self.half))
        return None


class AdjacencySink(TriangulationSink):
    """Collects triangles with neighbor references; a record is released as
    soon as every neighbor id is known.  Cross-subproblem sides wait in a
    PendingAdjacency keyed by the shared diagonal."""

    RECORD_WORDS = 8
    adjacency = True

    def __init__(self, meter: Optional[WorkspaceMeter] = None):
        self.meter = meter if meter is not None else null_meter()
        self.pending = PendingAdjacency(self.meter)
        self._hold: Dict[int, Triangle] = {}
        self.records: List[Tuple] = []      # (tid, corners, neighbors)
        self.diagonals: List[Tuple[int, int]] = []
        self._next = 1

    def emit_diagonal(self, a: int, b: int) -> None:
        self.diagonals.append((min(a, b), max(a, b)))

    def alloc_id(self) -> int:
        tid = self._next
        self._next += 1
        return tid

    def add_triangle(self, tid: int, corners, sides) -> None:
        """sides[k] covers (corners[k], corners[k+1]): an int neighbor tid,
        0 for a polygon edge, or ('cut', key) for a shared diagonal."""
        tri = Triangle(tid, corners)
        for k, side in enumerate(sides):
            if side == 0 or isinstance(side, int):
                tri.neighbors[k] = side
            else:
                key = side[1]
                other = self.pending.deposit_or_join(key, tid, k)
                if other is None:
                    tri.missing += 1
                else:
                    oid, oslot = other
                    tri.neighbors[k] = oid
                    holder = self._hold.get(oid)
                    if holder is None:
                        raise InternalInvariantError(
                            f"partner triangle {oid} already finalized")
                    holder.neighbors[oslot] = tid
                    holder.missing -= 1
                    if holder.missing == 0:
                        self._flush(holder)
        if tri.missing == 0:
            self.records.append((tri.tid, tri.corners, tuple(tri.neighbors)))
        else:
            self._hold[tid] = tri
            self.meter.alloc(self.RECORD_WORDS, level=0)

    def _flush(self, tri: Triangle) -> None:
        del self._hold[tri.tid]
        self.meter.release(self.RECORD_WORDS, level=0)
        self.records.append((tri.tid, tri.corners, tuple(tri.neighbors)))

    def finish(self) -> None:
        if self.pending.half or self._hold:
            raise InternalInvariantError(
                f"{len(self.pending.half)} pending diagonals and "
                f"{len(self._hold)} buffered triangles at finish")


# ---------------------------------------------------------------------------
# in-memory base case: ear clipping

def ear_clip(view) -> List[Tuple[int, int, int]]:
    """Triangles of the view as (a, b, c) local triples in pop order.

    Only reflex (or straight) vertices can block an ear, so containment is
    tested against those alone.  Exact arithmetic throughout; straight
    vertices are never chosen as ear apexes.
    """
    m = view.m
    if m == 3:
        return [(1, 2, 3)]
    if view.all_int and m >= 256:
        return _ear_clip_bulk(view)
    return _ear_clip_scalar(view)


def _ear_clip_scalar(view):
    m = view.m
    pts = [None] + [view.point(i) for i in range(1, m + 1)]
    nxt = list(range(1, m + 2))
    prv = list(range(-1, m))
    nxt[m] = 1
    prv[1] = m
    dead = [False] * (m + 1)

    def turn(i):
        return geom.orient(pts[prv[i]], pts[i], pts[nxt[i]])

    reflexish = {i for i in range(1, m + 1)
                 if turn(i) != geom.CLOCKWISE}

    def is_ear(v):
        if v in reflexish:
            return False
        a, b, c = pts[prv[v]], pts[v], pts[nxt[v]]
        for x in reflexish:
            if x in (prv[v], nxt[v]):
                continue
            p = pts[x]
            if geom.orient(a, b, p) <= 0 and geom.orient(b, c, p) <= 0 \
                    and geom.orient(c, a, p) <= 0:
                return False
        return True

    out = []
    alive = m
    stack = list(range(m, 0, -1))
    alive_at_rescan = m + 1
    while alive > 3:
        if not stack:
            if alive == alive_at_rescan:
                raise InternalInvariantError("ear clipping stalled")
            alive_at_rescan = alive
            stack = [v for v in range(m, 0, -1) if not dead[v]]
        v = stack.pop()
        if dead[v]:
            continue
        if not is_ear(v):
            continue
        p, n = prv[v], nxt[v]
        out.append((p, v, n))
        nxt[p] = n
        prv[n] = p
        dead[v] = True
        reflexish.discard(v)
        alive -= 1
        for u in (p, n):
            if turn(u) == geom.CLOCKWISE:
                reflexish.discard(u)
            else:
                reflexish.add(u)
            stack.append(u)
    v = next(i for i in range(1, m + 1) if not dead[i])
    out.append((prv[v], v, nxt[v]))
    return out


def _ear_clip_bulk(view):
    m = view.m
    xs, ys = view.coord_arrays()
    nxt = np.roll(np.arange(m, dtype=np.int64), -1)
    prv = np.roll(np.arange(m, dtype=np.int64), 1)

    def turn0(i):
        p, n = prv[i], nxt[i]
        return (xs[i] - xs[p]) * (ys[n] - ys[p]) - (ys[i] - ys[p]) * (xs[n] - xs[p])

    blockish = np.array([turn0(i) >= 0 for i in range(m)], dtype=bool)

    def is_ear0(v):
        if blockish[v]:
            return False
        p, n = prv[v], nxt[v]
        ax, ay = xs[p], ys[p]
        bx, by = xs[v], ys[v]
        cx, cy = xs[n], ys[n]
        cand = np.nonzero(blockish)[0]
        if cand.size == 0:
            return True
        px = xs[cand]
        py = ys[cand]
        o1 = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        o2 = (cx - bx) * (py - by) - (cy - by) * (px - bx)
        o3 = (ax - cx) * (py - cy) - (ay - cy) * (px - cx)
        inside = (o1 <= 0) & (o2 <= 0) & (o3 <= 0)
        inside &= (cand != p) & (cand != n)
        return not bool(inside.any())

    out = []
    alive = m
    stack = list(range(m - 1, -1, -1))
    alive_at_rescan = m + 1
    dead = np.zeros(m, dtype=bool)
    while alive > 3:
        if not stack:
            if alive == alive_at_rescan:
                raise InternalInvariantError("ear clipping stalled")
            alive_at_rescan = alive
            stack = [v for v in range(m - 1, -1, -1) if not dead[v]]
        v = stack.pop()
        if dead[v]:
            continue
        if not is_ear0(v):
            continue
        p, n = int(prv[v]), int(nxt[v])
        out.append((p + 1, v + 1, n + 1))
        nxt[p] = n
        prv[n] = p
        dead[v] = True
        blockish[v] = False
        alive -= 1
        for u in (p, n):
            blockish[u] = turn0(u) >= 0
            stack.append(u)
    v = int(np.nonzero(~dead)[0][0])
    out.append((int(prv[v]) + 1, v + 1, int(nxt[v]) + 1))
    return out


def _in_memory_words(m: int) -> int:
    return 4 * m + 16


def triangulate_in_memory(view, sink: TriangulationSink,
                          meter: Optional[WorkspaceMeter] = None) -> None:
    """Ear-clip the whole view, emitting diagonals (and triangles with
    adjacency when the sink collects them)."""
    meter = meter if meter is not None else null_meter()
    m = view.m
    with meter.scoped(_in_memory_words(m)):
        tris = ear_clip(view)
        _emit_base_case(view, tris, sink)


def _emit_base_case(view, tris, sink: TriangulationSink) -> None:
    m = view.m
    n = view.base.n

    def emit_diag(a, b):
        if (b - a) % m in (1, m - 1):
            return
        ra = view.base_ref(a)
        rb = view.base_ref(b)
        if ra is None or rb is None:
            raise InternalInvariantError("virtual vertex in a diagonal")
        sink.emit_diagonal(ra, rb)

    for (a, _v, c) in tris[:-1]:
        emit_diag(a, c)
    if not sink.adjacency:
        return
    # resolve local adjacency, then report records with global ids
    ids = [sink.alloc_id() for _ in tris]
    local: Dict[Tuple[int, int], Tuple[int, int]] = {}
    sides_of = []
    for t, (a, b, c) in enumerate(tris):
        sides = []
        for (u, v) in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            if (v - u) % m in (1, m - 1):
                ru = view.base_ref(u)
                rv = view.base_ref(v)
                if (rv - ru) % n in (1, n - 1):
                    sides.append(0)  # polygon edge
                else:
                    sides.append(("cut", (min(ru, rv), max(ru, rv))))
            else:
                other = local.get(key)
                if other is None:
                    local[key] = (t, len(sides))
                    sides.append(("local", key))
                else:
                    sides.append(ids[other[0]])
                    sides_of[other[0]][other[1]] = ids[t]
        sides_of.append(sides)
    for t, (a, b, c) in enumerate(tris):
        sides = sides_of[t]
        for k, s in enumerate(sides):
            if isinstance(s, tuple) and s[0] == "local":
                raise InternalInvariantError(f"unpaired local diagonal {s[1]}")
        corners = (view.base_ref(a), view.base_ref(b), view.base_ref(c))
        sink.add_triangle(ids[t], corners, sides)


# ---------------------------------------------------------------------------
# far case: manufacture an alternating diagonal after tau steps

def find_alternating_diagonal(view, u_prime: Optional[int], w: Sequence[int],
                              stats: Optional[RunStats] = None,
                              audit: bool = True) -> int:
    """Vertex u such that (u, w[-1]) is an alternating interior diagonal.

    `w` holds the walked same-type convex chain (w[0]..w[tau]); `u_prime` is
    the far endpoint of the current alternating diagonal, or None while it is
    still degenerate.  Three boundary scans: one ray shot, one visibility
    test, and (only when needed) one reflex search.
    """
    m = view.m
    tau = len(w) - 1
    if tau < 2:
        raise PolygonInputError("far case needs at least two walked steps")
    wt = w[-1]
    wp = w[-2]
    a = view.point(wp)
    b = view.point(wt)
    chain_sign = geom.orient(a, b, view.point(w[-3]))
    if chain_sign == geom.COLLINEAR:
        raise InternalInvariantError("walked chain is not strictly convex")
    scans = 0
    toward_prev = True
    if u_prime is not None:
        su = geom.orient(a, b, view.point(u_prime))
        if su == -chain_sign:
            toward_prev = False
    if toward_prev:
        hit = geom.ray_shoot(view, wt, wp)
        scans += 1
        if hit.ray_t <= 1:
            raise InternalInvariantError("walk edge blocked inside the polygon")
    else:
        hit = geom.ray_shoot(view, wt, u_prime)
        scans += 1
        if hit.vertex == u_prime or hit.ray_t > 1:
            if stats is not None:
                stats.far_scan_max = max(stats.far_scan_max, scans)
            return u_prime  # the ray reaches u_prime: directly visible
    if hit.edge is None:
        raise InternalInvariantError(
            "far-case ray crossed the boundary at a vertex (general position?)")
    e1 = hit.edge
    e2 = 1 + e1 % m
    s1 = geom.orient(a, b, view.point(e1))
    s2 = geom.orient(a, b, view.point(e2))
    want = -chain_sign
    if s1 == want and s2 == want:
        # both endpoints beyond the line: take the farther one
        c1 = abs((b[0] - a[0]) * (view.point(e1)[1] - a[1])
                 - (b[1] - a[1]) * (view.point(e1)[0] - a[0]))
        c2 = abs((b[0] - a[0]) * (view.point(e2)[1] - a[1])
                 - (b[1] - a[1]) * (view.point(e2)[0] - a[0]))
        p_n = e1 if c1 >= c2 else e2
    elif s1 == want:
        p_n = e1
    elif s2 == want:
        p_n = e2
    elif s1 == 0:
        p_n = e1
    elif s2 == 0:
        p_n = e2
    else:
        raise InternalInvariantError("hit edge lies on the walked chain's side")
    scans += 1
    if geom.is_visible(view, wt, p_n):
        u = p_n
    else:
        scans += 1
        u = geom.max_angle_reflex_in_triangle(view, wt, p_n, hit.point)
        if audit and not geom.is_visible(view, wt, u):
            raise InternalInvariantError("reflex repair produced a hidden vertex")
    if stats is not None:
        stats.far_scan_max = max(stats.far_scan_max, scans)
    if not is_alternating(u, wt, m):
        raise InternalInvariantError(
            "manufactured diagonal is not alternating")
    return u


# ---------------------------------------------------------------------------
# the recursion

class WalkState:
    """Per-level walk bookkeeping: the current alternating diagonal (possibly
    degenerate), its endpoint on the walked path, and the stored path buffer."""

    __slots__ = ("v_c", "u_other", "reg_lo", "reg_hi", "walked", "w")

    def __init__(self, m: int):
        self.v_c = 1
        self.u_other: Optional[int] = None   # degenerate start diagonal
        self.reg_lo = 1                      # untriangulated region lo..hi
        self.reg_hi = m
        self.walked = 1
        self.w: List[int] = []


def _interval_len(lo, hi, m):
    return (hi - lo) % m + 1


def _in_interval(x, lo, hi, m):
    return (x - lo) % m <= (hi - lo) % m


def _piece_from_segs(view, segs, start):
    child = view.subview(segs)
    if start != 1:
        # rotate so the designated start vertex is local 1
        k = None
        for i in range(1, child.m + 1):
            if child.base_ref(i) == view.base_ref(start) \
                    and child.point(i) == view.point(start):
                k = i
                break
        if k is None:
            raise InternalInvariantError("start vertex missing from piece")
        if k != 1:
            child = child.subview([("range", k, 1 + (k - 2) % child.m)])
    return child


def _segs_with_skips(lo, hi, m, skips):
    """Boundary segments for [lo..hi] jumping over the given sub-intervals
    (each (a, b) with interior strictly inside [lo..hi])."""
    segs = []
    cur = lo
    for (a, b) in skips:
        if a != cur:
            segs.append(("range", cur, a))
        else:
            segs.append(("pos", a))
        cur = b
    if cur != hi:
        segs.append(("range", cur, hi))
    else:
        segs.append(("pos", hi))
    return segs


class _Run:
    """Shared immutable configuration of one triangulation run."""

    __slots__ = ("sink", "meter", "stats", "rng", "kappa", "audit")

    def __init__(self, sink, meter, stats, rng, kappa, audit):
        self.sink = sink
        self.meter = meter
        self.stats = stats
        self.rng = rng
        self.kappa = kappa
        self.audit = audit


def triangulate(view, start: int, tau: float, sink: TriangulationSink,
                meter: Optional[WorkspaceMeter] = None, *,
                rng: Optional[random.Random] = None,
                stats: Optional[RunStats] = None,
                kappa: float = KAPPA_DEFAULT,
                audit: Optional[bool] = None) -> RunStats:
    """Triangulate a view, starting the geodesic walk at local vertex `start`.

    Emits exactly m-3 interior diagonals to the sink (plus triangles with
    adjacency when the sink collects them).  `tau` is the workspace parameter
    of the top level; strict meters enforce the configured word budget.
    """
    if not 0.6 < kappa < 1:
        raise PolygonInputError("kappa must lie in (0.6, 1)")
    if tau < TAU_FLOOR:
        raise PolygonInputError(f"tau must be at least {TAU_FLOOR}")
    meter = meter if meter is not None else null_meter()
    stats = stats if stats is not None else RunStats()
    rng = rng if rng is not None else random.Random(0)
    audit = (view.m <= AUDIT_MAX_M) if audit is None else audit
    run = _Run(sink, meter, stats, rng, kappa, audit)
    root = view if start == 1 else _piece_from_segs(
        view, [("range", start, 1 + (start - 2) % view.m)], 1)
    with meter.scoped(root.descriptor_words):
        _triangulate_rec(root, tau, run, 0)
    sink.finish()
    return stats


def _triangulate_rec(view, tau: float, run: _Run, level: int) -> None:
    m = view.m
    if m < 3:
        return
    run.stats.depth = max(run.stats.depth, level)
    meter = run.meter
    with meter.frame():
        if IN_MEMORY_FACTOR * tau >= m:
            with meter.scoped(_in_memory_words(m)):
                tris = ear_clip(view)
                _emit_base_case(view, tris, run.sink)
            return
        if tau <= TAU_FLOOR:
            # unreachable when s >= 8*ceil(log2 n); permissive runs fall back
            if meter.mode is MeterMode.STRICT:
                raise InternalInvariantError(
                    f"recursion ran out of workspace (tau={tau:.1f}, m={m})")
            meter.overage_flag = True
            with meter.scoped(_in_memory_words(m)):
                tris = ear_clip(view)
                _emit_base_case(view, tris, run.sink)
            return
        _walk_level(view, int(tau), run, level)


def _walk_level(view, tau: int, run: _Run, level: int) -> None:
    m = view.m
    mid = m // 2
    meter = run.meter
    stats = run.stats
    st = WalkState(m)
    cursor_rng = random.Random(run.rng.getrandbits(64))
    with meter.scoped(GeodesicCursor.WORDS + WALK_SCALARS):
        cursor = GeodesicCursor(view, 1, mid, cursor_rng, stats)
        while st.walked != mid:
            w = [st.v_c]
            meter.alloc(1)
            i = 0
            far = False
            while True:
                nxt = cursor.next_vertex()
                w.append(nxt)
                meter.alloc(1)
                i += 1
                if is_alternating(w[i - 1], w[i], m):
                    break
                if i == tau:
                    far = True
                    break
            try:
                if far:
                    stats.far_calls += 1
                    u_new = find_alternating_diagonal(
                        view, st.u_other, w, stats, audit=run.audit)
                    a_new = (w[i], u_new)
                else:
                    u_new = w[i - 1]
                    a_new = (w[i - 1], w[i])
                _emit_walk_diagonals(view, w, i, far, a_new, st, run)
                pieces = _split_iteration(view, st, w, i, far, a_new, run)
                for child, words in pieces:
                    stats.pieces += 1
                    with meter.scoped(words):
                        _triangulate_rec(child, tau * run.kappa, run, level + 1)
            finally:
                meter.release(len(w))
            st.u_other = a_new[1] if a_new[0] == w[i] else a_new[0]
            st.v_c = w[i]
            st.walked = w[i]
        # the walk reached the midpoint: the remaining region is one piece
        lo, hi = st.reg_lo, st.reg_hi
        if _interval_len(lo, hi, m) >= 3:
            segs = [("range", lo, hi)]
            child = _piece_from_segs(view, segs, st.walked)
            if run.audit:
                assert child.m <= -(-m // 2) + 1, "terminal piece too large"
            stats.pieces += 1
            with meter.scoped(child.descriptor_words):
                _triangulate_rec(child, tau * run.kappa, run, level + 1)


def _emit_walk_diagonals(view, w, i, far, a_new, st: WalkState, run: _Run):
    a_c = (st.v_c, st.u_other) if st.u_other is not None else None
    for j in range(1, i + 1):
        _maybe_emit(view, w[j - 1], w[j], a_c, run)
    if far:
        _maybe_emit(view, a_new[1], a_new[0], a_c, run)


def _maybe_emit(view, a, b, a_c, run: _Run):
    m = view.m
    if (b - a) % m in (1, m - 1):
        return  # boundary element of the view: polygon edge or parent cut
    if a_c is not None and {a, b} == {a_c[0], a_c[1]}:
        return  # the current alternating diagonal was emitted previously
    ra = view.base_ref(a)
    rb = view.base_ref(b)
    if ra is None or rb is None:
        raise InternalInvariantError("virtual vertex in emitted diagonal")
    if run.audit:
        n = view.base.n
        if (rb - ra) % n in (1, n - 1):
            raise InternalInvariantError("emitted diagonal is a base edge")
        if not geom.is_visible(view, a, b):
            raise InternalInvariantError("emitted diagonal leaves the polygon")
    run.sink.emit_diagonal(ra, rb)


def _split_iteration(view, st: WalkState, w, i, far, a_new, run: _Run):
    """Build the recursion pieces for one walk iteration and advance the
    untriangulated-region interval.  Returns (child, start, words) triples in
    recursion order (R first, then the pockets)."""
    m = view.m
    mid = m // 2
    lo, hi = st.reg_lo, st.reg_hi
    off = lambda p: (p - lo) % m
    ulen = _interval_len(lo, hi, m)
    if run.audit:
        for v in w:
            assert off(v) < ulen, "walked vertex left the open region"

    x, y = a_new
    if {x, y} == {lo, hi} and st.u_other is not None:
        # the walk stepped onto the far endpoint of the current diagonal:
        # nothing is split off, the region merely re-anchors
        st.reg_lo, st.reg_hi = lo, hi
        if run.audit:
            assert i == 1
        return []
    # order the cut endpoints along the region, then pick the side of the cut
    # that keeps the midpoint; a tie (cut incident to the midpoint) takes the
    # smaller side so the terminal piece obeys the half bound
    if off(x) > off(y):
        x, y = y, x
    in_fwd = _in_interval(mid, x, y, m)
    in_bwd = _in_interval(mid, y, x, m)
    if in_fwd and in_bwd:
        take_fwd = _interval_len(x, y, m) <= _interval_len(y, x, m)
    elif in_fwd:
        take_fwd = True
    elif in_bwd:
        take_fwd = False
        if run.audit:
            assert ulen == m, "midpoint outside the forward side of the cut"
    else:
        raise InternalInvariantError("midpoint vanished from both cut sides")
    if take_fwd:
        nxt_lo, nxt_hi = x, y
        # both cut endpoints stay on R's ring even when they coincide with
        # the region endpoints (then the part is a single vertex)
        r_parts = [(lo, x), (y, hi)]
    else:
        nxt_lo, nxt_hi = y, x
        r_parts = [(x, y)]

    # every walked edge cuts off a pocket; in the near case the last edge is
    # the new alternating diagonal itself, whose far side is the next region
    pockets = []
    for j in range(i if far else i - 1):
        pa, pb = w[j], w[j + 1]
        if off(pa) > off(pb):
            pa, pb = pb, pa
        if (pb - pa) % m >= 2:
            pockets.append((pa, pb, w[j]))
    segs = []
    for (plo, phi) in r_parts:
        if plo == phi:
            segs.append(("pos", plo))
            continue
        skips = sorted(((a, b) for a, b, _s in pockets
                        if _in_interval(a, plo, phi, m)
                        and _in_interval(b, plo, phi, m)),
                       key=lambda p: (p[0] - plo) % m)
        segs.extend(_segs_with_skips(plo, phi, m, skips))

    pieces = []
    r_start = a_new[1] if far else w[i - 1]
    r_size = sum((_interval_len(s[1], s[2], m) if s[0] == "range" else 1)
                 for s in segs)
    if r_size >= 3:
        child = _piece_from_segs(view, segs, r_start)
        if run.audit:
            # a boundary-edge cut splits off nothing, so only the 6/10 decay
            # binds; a proper alternating diagonal obeys the half+k bound
            # (+2 because closed components share the diagonal endpoints)
            if (a_new[1] - a_new[0]) % m not in (1, m - 1):
                bound = -(-m // 2) + i + 2
                assert child.m <= bound, \
                    f"R size {child.m} breaks the split bound {bound}"
            assert child.m <= 0.6 * m + 3, "R size breaks the 6/10 decay"
        pieces.append((child, child.descriptor_words))
    for (pa, pb, s) in pockets:
        psize = _interval_len(pa, pb, m)
        if psize >= 3:
            child = _piece_from_segs(view, [("range", pa, pb)], s)
            if run.audit:
                assert child.m <= -(-m // 2) + 1, "pocket breaks the half bound"
                assert child.m <= 0.6 * m + 2, "pocket breaks the 6/10 decay"
            pieces.append((child, child.descriptor_words))
    st.reg_lo, st.reg_hi = nxt_lo, nxt_hi
    return pieces


# ---------------------------------------------------------------------------
# public wrapper

def triangulate_polygon(polygon: BasePolygon, s: int,
                        sink: Optional[TriangulationSink] = None, *,
                        start: int = 1,
                        mode: MeterMode = MeterMode.STRICT,
                        L: int = 64,
                        kappa: float = KAPPA_DEFAULT,
                        seed: int = 0,
                        stats: Optional[RunStats] = None,
                        meter: Optional[WorkspaceMeter] = None,
                        audit: Optional[bool] = None):
    """Triangulate a whole polygon under an s-word workspace regime.

    Returns (sink, meter, stats).  In strict mode s must satisfy
    s >= 8*ceil(log2 n) so the recursion cannot run out of space.
    """
    n = polygon.n
    if s > n:
        s = n
    if mode is MeterMode.STRICT and s < required_budget(n) \
            and IN_MEMORY_FACTOR * s < n:
        raise PolygonInputError(
            f"strict mode requires s >= {required_budget(n)} for n={n}")
    if sink is None:
        sink = CollectingSink()
    if meter is None:
        meter = WorkspaceMeter(L * s, mode)
    if stats is None:
        stats = RunStats()
    view = SubpolygonView.whole(polygon, start=start)
    triangulate(view, 1, max(s, TAU_FLOOR), sink, meter,
                rng=random.Random(seed), stats=stats, kappa=kappa, audit=audit)
    return sink, meter, stats
