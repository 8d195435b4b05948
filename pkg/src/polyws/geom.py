"""Exact planar geometry: orientation predicates and O(m) boundary scans.

Everything here is computed in exact integer (or rational) arithmetic; there is
no tolerance parameter anywhere in the package.  Input coordinates are limited
to |x|, |y| <= 2**26, which keeps every 3-point orientation determinant within
2**55, so the bulk scans can run on int64 arrays without overflow.  Ratio
comparisons (nearest ray hit) are resolved in Python bigints on the few
candidates that survive the vectorized filter.

Boundary scans accept any "view" object exposing

    m            -- vertex count
    point(i)     -- exact coordinates of local vertex i (1-based, clockwise)
    all_int      -- True when every vertex has integer coordinates
    coord_arrays() -- (xs, ys) int64 arrays, index 0 holding local vertex 1

Views with rational (derived) vertices take the scalar path automatically.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np

from .errors import InternalInvariantError, PolygonInputError

COORD_LIMIT = 1 << 26

CLOCKWISE = -1
COLLINEAR = 0
COUNTERCLOCKWISE = 1

# below this vertex count the scalar loop beats numpy call overhead
BULK_MIN_M = 96

Coord = Union[int, Fraction]
Pt = Tuple[Coord, Coord]


class Point(NamedTuple):
    x: Coord
    y: Coord


class DerivedPoint(NamedTuple):
    """A boundary point in the interior of an edge, kept exactly.

    `edge` is the local edge index (edge k joins local vertices k and k+1) of
    the view the point was created on; `t` is the exact parameter along that
    edge with 0 < t < 1.  t = 0 or 1 is normalized away to a plain vertex by
    the constructors in this module.
    """

    edge: int
    t: Fraction
    x: Fraction
    y: Fraction


class RayHit(NamedTuple):
    """First proper boundary crossing of a ray.

    Exactly one of `edge` / `vertex` is set: `edge` for a crossing in the
    interior of a boundary edge (with `point` the exact crossing point and
    `edge_t` its parameter along the edge), `vertex` when the boundary crosses
    the ray exactly at a vertex (possible only in derived views).
    `ray_t` is the exact parameter along the ray (direction = unit of `toward`).
    """

    edge: Optional[int]
    vertex: Optional[int]
    ray_t: Fraction
    point: Pt
    edge_t: Fraction


def check_coord(v) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise PolygonInputError(f"coordinate {v!r} is not an integer")
    if abs(v) > COORD_LIMIT:
        raise PolygonInputError(f"coordinate {v} outside |x| <= 2^26")
    return v


def orient(a: Pt, b: Pt, c: Pt) -> int:
    """Sign of (b-a) x (c-a): +1 counterclockwise, -1 clockwise, 0 collinear."""
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    if d > 0:
        return COUNTERCLOCKWISE
    if d < 0:
        return CLOCKWISE
    return COLLINEAR


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def segments_properly_intersect(a: Pt, b: Pt, c: Pt, d: Pt) -> bool:
    """True iff open segments ab and cd share exactly one interior point.

    Endpoint touching and collinear overlap both return False.
    """
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 * o4 < 0


def on_closed_segment(p: Pt, a: Pt, b: Pt) -> bool:
    """True iff p lies on the closed segment ab (exact)."""
    if orient(a, b, p) != COLLINEAR:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def is_reflex(view, i: int) -> bool:
    """Interior angle at local vertex i exceeds 180 degrees (clockwise views)."""
    m = view.m
    p = view.point(1 + (i - 2) % m)
    v = view.point(i)
    n = view.point(1 + i % m)
    return orient(p, v, n) == COUNTERCLOCKWISE


# ---------------------------------------------------------------------------
# point in polygon

def point_in_closed(view, p: Pt) -> bool:
    """True iff p lies inside or on the boundary of the view's polygon."""
    if view.all_int and isinstance(p[0], int) and isinstance(p[1], int) \
            and view.m >= BULK_MIN_M:
        return _point_in_closed_bulk(view, p)
    return _point_in_closed_scalar(view, p)


def _point_in_closed_scalar(view, p: Pt) -> bool:
    m = view.m
    px, py = p
    inside = False
    ax, ay = view.point(m)
    for k in range(1, m + 1):
        bx, by = view.point(k)
        # on-edge counts as inside
        cr = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        if cr == 0 and min(ax, bx) <= px <= max(ax, bx) \
                and min(ay, by) <= py <= max(ay, by):
            return True
        if (ay > py) != (by > py):
            if (cr > 0) == (by > ay):
                inside = not inside
        ax, ay = bx, by
    return inside


def _point_in_closed_bulk(view, p: Pt) -> bool:
    xs, ys = view.coord_arrays()
    px, py = p
    ax, ay = xs, ys
    bx, by = np.roll(xs, -1), np.roll(ys, -1)
    cr = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    on = (cr == 0) & (np.minimum(ax, bx) <= px) & (px <= np.maximum(ax, bx)) \
        & (np.minimum(ay, by) <= py) & (py <= np.maximum(ay, by))
    if on.any():
        return True
    straddle = (ay > py) != (by > py)
    hit = straddle & ((cr > 0) == (by > ay))
    return bool(np.count_nonzero(hit) & 1)


# ---------------------------------------------------------------------------
# visibility

def is_visible(view, i: int, j: int) -> bool:
    """True iff local vertices i and j see each other within the view.

    The segment may graze the boundary (closed-set visibility): touching a
    vertex without crossing does not block.  O(m) scan, O(1) retained state.
    """
    if i == j:
        raise PolygonInputError("is_visible requires distinct vertices")
    m = view.m
    if (j - i) % m == 1 or (i - j) % m == 1:
        return True  # boundary edge
    if view.all_int and view.m >= BULK_MIN_M:
        res = _visible_bulk(view, i, j)
        if res is not None:
            return res
    return _visible_scalar(view, i, j)


def _visible_scalar(view, i: int, j: int) -> bool:
    m = view.m
    pts = view.scan_points()
    a = pts[i - 1]
    b = pts[j - 1]
    ax, ay = a
    ux = b[0] - ax
    uy = b[1] - ay
    px, py = pts[m - 1]
    ps = ux * (py - ay) - uy * (px - ax)
    for k in range(1, m + 1):
        cx, cy = pts[k - 1]
        cs = ux * (cy - ay) - uy * (cx - ax)
        if cs == 0 and k != i and k != j:
            # crossing exactly at vertex k: neighbors strictly opposite
            if _strictly_between(a, b, (cx, cy)):
                kp = pts[k - 2]
                kn = pts[k % m]
                sp = ux * (kp[1] - ay) - uy * (kp[0] - ax)
                sn = ux * (kn[1] - ay) - uy * (kn[0] - ax)
                if (sp > 0 and sn < 0) or (sp < 0 and sn > 0):
                    return False
        elif (ps > 0 and cs < 0) or (ps < 0 and cs > 0):
            # edge (k-1, k) straddles the segment's line: proper test
            ex = cx - px
            ey = cy - py
            o3 = ex * (ay - py) - ey * (ax - px)
            o4 = ex * (b[1] - py) - ey * (b[0] - px)
            if (o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0):
                return False
        px, py, ps = cx, cy, cs
    mid = ((a[0] + b[0]), (a[1] + b[1]))
    return _midpoint_inside(view, mid)


def _strictly_between(a: Pt, b: Pt, p: Pt) -> bool:
    # assumes p collinear with ab
    if a[0] != b[0]:
        return min(a[0], b[0]) < p[0] < max(a[0], b[0])
    return min(a[1], b[1]) < p[1] < max(a[1], b[1])


def _midpoint_inside(view, doubled: Pt) -> bool:
    """Point-in-closed test for (x, y) given as doubled coordinates."""
    if view.all_int and isinstance(doubled[0], int) and isinstance(doubled[1], int):
        return _point_in_closed_scalar(_DoubledView(view), doubled) \
            if view.m < BULK_MIN_M else _point_in_closed_bulk_doubled(view, doubled)
    return _point_in_closed_scalar(
        _FracView(view), (Fraction(doubled[0], 2), Fraction(doubled[1], 2)))


class _DoubledView:
    """Scalar adapter presenting a view with doubled coordinates."""

    def __init__(self, view):
        self._v = view
        self.m = view.m
        self.all_int = view.all_int

    def point(self, i):
        x, y = self._v.point(i)
        return (2 * x, 2 * y)


class _FracView:
    def __init__(self, view):
        self._v = view
        self.m = view.m
        self.all_int = False

    def point(self, i):
        return self._v.point(i)


def _point_in_closed_bulk_doubled(view, doubled: Pt) -> bool:
    xs, ys = view.coord_arrays()
    xs = xs * 2
    ys = ys * 2
    px, py = doubled
    ax, ay = xs, ys
    bx, by = np.roll(xs, -1), np.roll(ys, -1)
    cr = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    on = (cr == 0) & (np.minimum(ax, bx) <= px) & (px <= np.maximum(ax, bx)) \
        & (np.minimum(ay, by) <= py) & (py <= np.maximum(ay, by))
    if on.any():
        return True
    straddle = (ay > py) != (by > py)
    hit = straddle & ((cr > 0) == (by > ay))
    return bool(np.count_nonzero(hit) & 1)


def _visible_bulk(view, i: int, j: int) -> Optional[bool]:
    """Vectorized visibility; returns None to request the scalar fallback."""
    xs, ys = view.coord_arrays()
    ax, ay = int(xs[i - 1]), int(ys[i - 1])
    bx, by = int(xs[j - 1]), int(ys[j - 1])
    s = np.sign((bx - ax) * (ys - ay) - (by - ay) * (xs - ax)).astype(np.int64)
    # any third vertex exactly on the open segment -> rare, resolve scalar
    col = (s == 0)
    col[i - 1] = False
    col[j - 1] = False
    if col.any():
        cx = xs[col]
        cy = ys[col]
        if ax != bx:
            between = (np.minimum(ax, bx) < cx) & (cx < np.maximum(ax, bx))
        else:
            between = (np.minimum(ay, by) < cy) & (cy < np.maximum(ay, by))
        if between.any():
            return None
    s2 = np.roll(s, -1)
    straddle = s * s2 < 0
    if straddle.any():
        vx1, vy1 = xs, ys
        vx2, vy2 = np.roll(xs, -1), np.roll(ys, -1)
        o3 = np.sign((vx2 - vx1) * (ay - vy1) - (vy2 - vy1) * (ax - vx1))
        o4 = np.sign((vx2 - vx1) * (by - vy1) - (vy2 - vy1) * (bx - vx1))
        if ((o3 * o4 < 0) & straddle).any():
            return False
    return _point_in_closed_bulk_doubled(view, (ax + bx, ay + by))


def point_sees_vertex(view, p: Pt, j: int) -> bool:
    """Closed-set visibility between an interior/boundary point p and vertex j."""
    m = view.m
    b = view.point(j)
    if p == b:
        return True
    pv = view.point(m)
    for k in range(1, m + 1):
        cv = view.point(k)
        if k != j and cv != p:
            if orient(p, b, cv) == COLLINEAR and on_closed_segment(cv, p, b) \
                    and cv != b:
                kp = view.point(1 + (k - 2) % m)
                kn = view.point(1 + k % m)
                if orient(p, b, kp) * orient(p, b, kn) < 0:
                    return False
        if segments_properly_intersect(p, b, pv, cv):
            return False
        pv = cv
    mid = (Fraction(p[0] + b[0], 2), Fraction(p[1] + b[1], 2))
    return point_in_closed(view, mid)


# ---------------------------------------------------------------------------
# ray shooting

def ray_shoot(view, origin: int, toward) -> RayHit:
    """First proper boundary crossing of the ray from vertex `origin`.

    `toward` is a local vertex index or an exact point; it only fixes the ray
    direction.  Edges incident to the origin are never reported (they touch the
    ray at its apex).  Grazing a vertex does not stop the ray; crossing the
    boundary exactly at a vertex (derived views only) is reported as a vertex
    hit.  Raises InternalInvariantError when nothing is hit, which cannot
    happen for a ray entering the interior of a simple polygon.
    """
    hit = _ray_scan(view, origin, toward)
    if hit is None:
        raise InternalInvariantError("ray from boundary vertex escaped the polygon")
    return hit


def _ray_scan(view, origin: int, toward) -> Optional[RayHit]:
    O = view.point(origin)
    if isinstance(toward, int):
        T = view.point(toward)
    else:
        T = toward
    dx = T[0] - O[0]
    dy = T[1] - O[1]
    if dx == 0 and dy == 0:
        raise PolygonInputError("ray direction is degenerate")
    if view.all_int and isinstance(dx, int) and isinstance(dy, int) \
            and view.m >= BULK_MIN_M:
        res = _ray_scan_bulk(view, origin, O, (dx, dy), toward)
        if res is not NotImplemented:
            return res
    return _ray_scan_scalar(view, origin, O, (dx, dy))


def _make_edge_hit(view, k: int, O: Pt, D: Pt, t: Fraction) -> RayHit:
    m = view.m
    a = view.point(k)
    b = view.point(1 + k % m)
    px = O[0] + t * D[0]
    py = O[1] + t * D[1]
    if b[0] != a[0]:
        et = Fraction(px - a[0], b[0] - a[0])
    else:
        et = Fraction(py - a[1], b[1] - a[1])
    if et == 0:
        return RayHit(None, k, t, a, Fraction(0))
    if et == 1:
        return RayHit(None, 1 + k % m, t, b, Fraction(0))
    return RayHit(k, None, t, (px, py), et)


def ray_scan_light(view, origin: int, toward):
    """First boundary crossing of the ray, without exact-point materialization.

    Returns (kind, index, num, den) with kind 'edge' (index = edge start) or
    'vertex', and the ray parameter num/den normalized to den > 0 — enough
    for the cone search, which only compares the parameter against 1.
    Returns None when nothing is crossed.
    """
    O = view.point(origin)
    T = view.point(toward) if isinstance(toward, int) else toward
    D = (T[0] - O[0], T[1] - O[1])
    if D == (0, 0):
        raise PolygonInputError("ray direction is degenerate")
    if view.all_int and isinstance(D[0], int) and isinstance(D[1], int) \
            and view.m >= BULK_MIN_M:
        res = _ray_scan_bulk(view, origin, O, D, toward, light=True)
        if res is not NotImplemented:
            return res
    return _ray_scan_scalar(view, origin, O, D, light=True)


def _ray_scan_scalar(view, origin: int, O: Pt, D: Pt,
                     light: bool = False):
    m = view.m
    pts = view.scan_points()
    best_num = best_den = None   # den normalized positive
    best_edge = None
    best_vertex = None
    ox, oy = O
    dx, dy = D
    px, py = pts[m - 1]
    ps = dx * (py - oy) - dy * (px - ox)
    for k in range(1, m + 1):
        cx, cy = pts[k - 1]
        cs = dx * (cy - oy) - dy * (cx - ox)
        # proper interior crossing of edge (k-1, k)
        if (ps > 0 and cs < 0) or (ps < 0 and cs > 0):
            ex = cx - px
            ey = cy - py
            num = (px - ox) * ey - (py - oy) * ex
            den = dx * ey - dy * ex
            if (num > 0) == (den > 0) and num != 0:
                if den < 0:
                    num, den = -num, -den
                if best_num is None or num * best_den < best_num * den:
                    best_num, best_den = num, den
                    best_edge = 1 + (k - 2) % m
                    best_vertex = None
        # boundary crossing exactly at vertex k (forward side of the ray)
        elif cs == 0 and k != origin \
                and dx * (cx - ox) + dy * (cy - oy) > 0:
            kpx, kpy = px, py
            knx, kny = pts[k % m]
            sp = dx * (kpy - oy) - dy * (kpx - ox)
            sn = dx * (kny - oy) - dy * (knx - ox)
            if (sp > 0 and sn < 0) or (sp < 0 and sn > 0):
                num, den = (cx - ox, dx) if dx != 0 else (cy - oy, dy)
                if den < 0:
                    num, den = -num, -den
                if best_num is None or num * best_den < best_num * den:
                    best_num, best_den = num, den
                    best_edge = None
                    best_vertex = k
        px, py, ps = cx, cy, cs
    if best_num is None:
        return None
    if light:
        if best_vertex is not None:
            return ("vertex", best_vertex, best_num, best_den)
        return ("edge", best_edge, best_num, best_den)
    t = Fraction(best_num, best_den)
    if best_vertex is not None:
        return RayHit(None, best_vertex, t, pts[best_vertex - 1], Fraction(0))
    return _make_edge_hit(view, best_edge, O, D, t)


def _ray_scan_bulk(view, origin: int, O: Pt, D: Pt, toward, light=False):
    xs, ys = view.coord_arrays()
    ox, oy = O
    dx, dy = D
    rx = xs - ox
    ry = ys - oy
    s = np.sign(dx * ry - dy * rx).astype(np.int64)
    fwd = dx * rx + dy * ry > 0
    col = (s == 0) & fwd
    col[origin - 1] = False
    aim_hit = None
    if isinstance(toward, int):
        col[toward - 1] = False
        # boundary may cross the ray exactly at the aimed vertex (a spike
        # tip pointed at the origin); its neighbors then straddle the ray
        m = view.m
        sp = s[(toward - 2) % m]
        sn = s[toward % m]
        if sp * sn < 0:
            aim_hit = ("vertex", toward, 1, 1) if light else \
                RayHit(None, toward, Fraction(1), view.point(toward),
                       Fraction(0))
    if col.any():
        return NotImplemented  # potential vertex crossing: exact scalar path
    s2 = np.roll(s, -1)
    straddle = s * s2 < 0
    idx = np.nonzero(straddle)[0]
    if idx.size == 0:
        return aim_hit
    ax = xs[idx]
    ay = ys[idx]
    bx = np.roll(xs, -1)[idx]
    by = np.roll(ys, -1)[idx]
    ex = bx - ax
    ey = by - ay
    num = (ax - ox) * ey - (ay - oy) * ex
    den = dx * ey - dy * ex
    tpos = ((num > 0) == (den > 0)) & (num != 0)
    if not tpos.any():
        return aim_hit
    idx = idx[tpos]
    num = num[tpos]
    den = den[tpos]
    # float prefilter, exact bigint resolution among near-minimal candidates
    tf = num.astype(np.float64) / den.astype(np.float64)
    tmin = tf.min()
    near = tf <= tmin * (1 + 1e-9) + 1e-12
    cand = []
    for q in np.nonzero(near)[0]:
        n_, d_, k_ = int(num[q]), int(den[q]), int(idx[q])
        if d_ < 0:
            n_, d_ = -n_, -d_
        cand.append((n_, d_, k_))
    bn, bd, bk = cand[0]
    for n_, d_, k_ in cand[1:]:
        if n_ * bd < bn * d_:
            bn, bd, bk = n_, d_, k_
    if aim_hit is not None and bn >= bd:  # aimed-vertex crossing (t=1) first
        return aim_hit
    if light:
        # array slot k holds local vertex k+1; the edge starts there
        return ("edge", bk + 1, bn, bd)
    t = Fraction(bn, bd)
    return _make_edge_hit(view, bk + 1, O, D, t)


# ---------------------------------------------------------------------------
# reflex search inside a triangle

def max_angle_reflex_in_triangle(view, apex: int, p_n, hit_point: Pt) -> int:
    """Reflex vertex strictly inside triangle (apex, p_n, hit_point) whose
    angle at the apex, measured from the apex->p_n direction, is largest.

    `p_n` is a local vertex index or an exact point.  Angles are compared with
    exact cross-sign tests only.  Raises InternalInvariantError when the
    triangle contains no reflex vertex, which contradicts blocked visibility
    in a simple polygon.
    """
    A = view.point(apex)
    P = view.point(p_n) if isinstance(p_n, int) else p_n
    H = hit_point
    ot = orient(A, P, H)
    if ot == COLLINEAR:
        raise PolygonInputError("degenerate reflex-search triangle")
    best = None
    best_dir = None
    m = view.m
    if view.all_int and m >= BULK_MIN_M:
        indices = _triangle_candidates_prefilter(view, A, P, H)
    else:
        indices = range(1, m + 1)
    for k in indices:
        if k == apex or (isinstance(p_n, int) and k == p_n):
            continue
        X = view.point(k)
        if orient(A, P, X) != ot or orient(P, H, X) != ot \
                or orient(H, A, X) != ot:
            continue
        if not is_reflex(view, k):
            continue
        dx = X[0] - A[0]
        dy = X[1] - A[1]
        if best is None:
            best, best_dir = k, (dx, dy)
        else:
            c = cross(best_dir[0], best_dir[1], dx, dy)
            if (c > 0 and ot > 0) or (c < 0 and ot < 0):
                best, best_dir = k, (dx, dy)
    if best is None:
        raise InternalInvariantError(
            "no reflex vertex inside the blocking triangle")
    return best


# absolute slack covering float64 rounding of orientation values built from
# coordinates below 2**27 (max |product| ~ 7e16, ulp 16, plus input rounding)
_TRI_FILTER_MARGIN = 4096.0


def _triangle_candidates_prefilter(view, A, P, H):
    """Superset of the reflex vertices inside triangle (A, P, H).

    Float filter with a conservative margin; every returned index is
    re-verified exactly by the caller.  Works for rational P/H too.
    """
    xs, ys = view.coord_arrays()
    xf = xs.astype(np.float64)
    yf = ys.astype(np.float64)
    ax, ay = float(A[0]), float(A[1])
    px, py = float(P[0]), float(P[1])
    hx, hy = float(H[0]), float(H[1])
    o1 = (px - ax) * (yf - ay) - (py - ay) * (xf - ax)
    o2 = (hx - px) * (yf - py) - (hy - py) * (xf - px)
    o3 = (ax - hx) * (yf - hy) - (ay - hy) * (xf - hx)
    ot = float(np.sign((px - ax) * (hy - ay) - (py - ay) * (hx - ax)))
    mg = _TRI_FILTER_MARGIN
    maybe_inside = (ot * o1 > -mg) & (ot * o2 > -mg) & (ot * o3 > -mg)
    if not maybe_inside.any():
        return []
    pxs = np.roll(xs, 1)
    pys = np.roll(ys, 1)
    nxs = np.roll(xs, -1)
    nys = np.roll(ys, -1)
    reflex = (xs - pxs) * (nys - pys) - (ys - pys) * (nxs - pxs) > 0
    sel = maybe_inside & reflex
    return [int(k) + 1 for k in np.nonzero(sel)[0]]
