"""Unrestricted-memory reference implementations, validators, and polygon
generators.  Everything here defines ground truth for the tests; nothing is
metered and numpy is used freely.
"""
from __future__ import annotations

import heapq
import math
import random
from decimal import Decimal, getcontext
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import geom
from .errors import InternalInvariantError, PolygonInputError
from .workspace import BasePolygon, SubpolygonView


class Report:
    """Validator outcome: ok flag plus the list of violations found."""

    def __init__(self):
        self.errors: List[str] = []

    def fail(self, msg: str):
        self.errors.append(msg)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return "Report(ok)" if self.ok else f"Report({self.errors!r})"


# ---------------------------------------------------------------------------
# visibility graph and geodesics

class VisibilityGraph:
    """Boolean vertex-visibility matrix of a polygon, plus an optional free
    point (used for shortest-path-tree roots off the vertex set)."""

    def __init__(self, polygon: BasePolygon, extra_point=None):
        self.polygon = polygon
        self.view = SubpolygonView.whole(polygon)
        n = polygon.n
        self.n = n
        self.extra = extra_point
        size = n + (1 if extra_point is not None else 0)
        self.vis = np.zeros((size + 1, size + 1), dtype=bool)  # 1-based
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                v = geom.is_visible(self.view, i, j)
                self.vis[i, j] = v
                self.vis[j, i] = v
        if extra_point is not None:
            p = n + 1
            for j in range(1, n + 1):
                v = geom.point_sees_vertex(self.view, extra_point, j)
                self.vis[p, j] = v
                self.vis[j, p] = v

    def coords(self, i: int):
        if i <= self.n:
            return self.polygon.vertex(i)
        return self.extra


def _sq_dist(a, b) -> Fraction:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return Fraction(dx * dx + dy * dy)


def _length_close(d1: float, d2: float) -> bool:
    scale = max(1.0, abs(d1), abs(d2))
    return abs(d1 - d2) <= 1e-7 * scale


def _decimal_len(sq_terms: Sequence[Fraction], digits: int) -> Decimal:
    getcontext().prec = digits
    total = Decimal(0)
    for q in sq_terms:
        total += (Decimal(q.numerator) / Decimal(q.denominator)).sqrt()
    return total


def _compare_paths_exact(terms_a, terms_b) -> int:
    """-1/0/+1 comparison of two sums of square roots, escalating precision.

    Agreement to 390 digits at these coordinate magnitudes means the sums are
    genuinely equal (a collinear pass-through split, e.g. a root point aligned
    with two vertices); callers break such ties toward fewer segments."""
    if sorted(terms_a) == sorted(terms_b):
        return 0
    for digits in (50, 120, 400):
        da = _decimal_len(terms_a, digits)
        db = _decimal_len(terms_b, digits)
        eps = Decimal(10) ** (-(digits - 10))
        if da - db > eps:
            return 1
        if db - da > eps:
            return -1
    return 0


class _ShortestPaths:
    """Dijkstra over a visibility graph from one source, with exact tie
    refinement.  Parents give the unique geodesic tree."""

    def __init__(self, vg: VisibilityGraph, src: int):
        self.vg = vg
        self.src = src
        size = vg.vis.shape[0] - 1
        dist = [math.inf] * (size + 1)
        parent = [0] * (size + 1)
        terms: List[List[Fraction]] = [[] for _ in range(size + 1)]
        dist[src] = 0.0
        pq = [(0.0, src)]
        done = [False] * (size + 1)
        while pq:
            d, u = heapq.heappop(pq)
            if done[u]:
                continue
            done[u] = True
            cu = vg.coords(u)
            row = vg.vis[u]
            for v in range(1, size + 1):
                if not row[v] or done[v]:
                    continue
                sq = _sq_dist(cu, vg.coords(v))
                nd = d + math.sqrt(float(sq))
                if nd < dist[v] - 1e-7 * max(1.0, nd):
                    dist[v] = nd
                    parent[v] = u
                    terms[v] = terms[u] + [sq]
                    heapq.heappush(pq, (nd, v))
                elif _length_close(nd, dist[v]) and parent[v] != u:
                    cand = terms[u] + [sq]
                    cmp = _compare_paths_exact(cand, terms[v])
                    if cmp < 0 or (cmp == 0 and len(cand) < len(terms[v])):
                        dist[v] = nd
                        parent[v] = u
                        terms[v] = cand
                        heapq.heappush(pq, (nd, v))
        self.parent = parent
        self.dist = dist

    def path_to(self, t: int) -> List[int]:
        out = [t]
        while t != self.src:
            t = self.parent[t]
            if t == 0:
                raise InternalInvariantError("unreachable vertex in geodesic oracle")
            out.append(t)
        out.reverse()
        return out


def _spt_cache(polygon: BasePolygon) -> Dict:
    cache = getattr(polygon, "_oracle_cache", None)
    if cache is None:
        cache = {"vg": None, "sp": {}}
        polygon._oracle_cache = cache
    return cache


def _vis_graph(polygon: BasePolygon) -> VisibilityGraph:
    cache = _spt_cache(polygon)
    if cache["vg"] is None:
        cache["vg"] = VisibilityGraph(polygon)
    return cache["vg"]


def _paths_from(polygon: BasePolygon, src: int) -> _ShortestPaths:
    cache = _spt_cache(polygon)
    if src not in cache["sp"]:
        cache["sp"][src] = _ShortestPaths(_vis_graph(polygon), src)
    return cache["sp"][src]


def _strip_straight(polygon: BasePolygon, path: List[int]) -> List[int]:
    # canonical form: drop interior vertices that the path passes through
    # without bending (cannot occur under strict general position)
    out = [path[0]]
    for k in range(1, len(path) - 1):
        a = polygon.vertex(out[-1])
        b = polygon.vertex(path[k])
        c = polygon.vertex(path[k + 1])
        if geom.orient(a, b, c) == geom.COLLINEAR:
            continue
        out.append(path[k])
    out.append(path[-1])
    return out


def ref_geodesic(polygon: BasePolygon, a: int, b: int) -> List[int]:
    """Vertex sequence of the unique shortest path between vertices a and b."""
    if a == b:
        return [a]
    path = _paths_from(polygon, a).path_to(b)
    return _strip_straight(polygon, path)


def ref_spt(polygon: BasePolygon, p) -> set:
    """Edge set of the shortest-path tree from p as (parent, child) pairs.

    p is a 1-based vertex index, or an exact point inside the polygon (then
    parents referencing p use the sentinel 0).
    """
    if isinstance(p, int):
        sp = _paths_from(polygon, p)
        return {(sp.parent[v], v) for v in range(1, polygon.n + 1) if v != p}
    vg = VisibilityGraph(polygon, extra_point=p)
    sp = _ShortestPaths(vg, polygon.n + 1)
    edges = set()
    for v in range(1, polygon.n + 1):
        par = sp.parent[v]
        edges.add((0 if par == polygon.n + 1 else par, v))
    return edges


# ---------------------------------------------------------------------------
# validators

def _noncrossing_by_intervals(n: int, diagonals) -> Optional[Tuple]:
    """None when the index intervals nest; otherwise one offending pair.

    For interior diagonals of a simple polygon, straight-segment crossing is
    equivalent to endpoint interleaving along the boundary circle.
    """
    ivs = sorted(((min(a, b), max(a, b)) for a, b in diagonals),
                 key=lambda iv: (iv[0], -iv[1]))
    stack: List[Tuple[int, int]] = []
    for a, b in ivs:
        while stack and stack[-1][1] <= a:
            stack.pop()
        if stack and b > stack[-1][1]:
            return (a, b), stack[-1]
        stack.append((a, b))
    return None


def validate_triangulation(polygon: BasePolygon, diagonals) -> Report:
    """Accepts exactly the diagonal sets that triangulate the polygon:
    n-3 distinct interior diagonals, pairwise non-crossing."""
    rep = Report()
    n = polygon.n
    view = SubpolygonView.whole(polygon)
    diags = list(diagonals)
    if len(diags) != n - 3:
        rep.fail(f"expected {n - 3} diagonals, got {len(diags)}")
    seen = set()
    clean = []
    for d in diags:
        a, b = d
        if not (1 <= a <= n and 1 <= b <= n) or a == b:
            rep.fail(f"diagonal {d} out of range")
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            rep.fail(f"duplicate diagonal {key}")
            continue
        seen.add(key)
        if (b - a) % n in (1, n - 1):
            rep.fail(f"{key} is a polygon edge, not a diagonal")
            continue
        clean.append(key)
    for key in clean:
        if not geom.is_visible(view, key[0], key[1]):
            rep.fail(f"diagonal {key} is not an interior sightline")
    bad = _noncrossing_by_intervals(n, clean)
    if bad is not None:
        rep.fail(f"diagonals {bad[0]} and {bad[1]} cross")
    return rep


def validate_spt(polygon: BasePolygon, p, edges) -> Report:
    rep = Report()
    expect = ref_spt(polygon, p)
    got = set(edges)
    if got != expect:
        missing = expect - got
        extra = got - expect
        rep.fail(f"spt mismatch: missing {sorted(missing)[:5]}, "
                 f"extra {sorted(extra)[:5]}")
    return rep


def validate_partition(polygon: BasePolygon, diagonals, pieces, s: int) -> Report:
    """Checks Theta(s)-partition output: piece sizes within [floor(t/6), t+2]
    with t = max(ceil(n/s), 3), piece count within [n/(t+2), 6n/t + 2],
    non-crossing interior diagonals, and piece/diagonal bookkeeping."""
    rep = Report()
    n = polygon.n
    view = SubpolygonView.whole(polygon)
    t = max(-(-n // s), 3)
    lo, hi = t // 6, t + 2
    sizes = []
    covered = set()
    for piece in pieces:
        verts = list(piece)
        sizes.append(len(verts))
        covered.update(verts)
        if not lo <= len(verts) <= hi:
            rep.fail(f"piece size {len(verts)} outside [{lo}, {hi}]")
    if covered != set(range(1, n + 1)):
        rep.fail("pieces do not cover every vertex")
    count = len(sizes)
    if not (n / (t + 2) - 1e-9 <= count <= 6 * n / t + 2 + 1e-9):
        rep.fail(f"piece count {count} outside [{n / (t + 2):.2f}, "
                 f"{6 * n / t + 2:.2f}]")
    diags = [(min(a, b), max(a, b)) for a, b in diagonals]
    if len(set(diags)) != len(diags):
        rep.fail("duplicate partition diagonal")
    for a, b in diags:
        if (b - a) % n in (1, n - 1):
            rep.fail(f"partition cut ({a},{b}) is a polygon edge")
        elif not geom.is_visible(view, a, b):
            rep.fail(f"partition cut ({a},{b}) is not interior")
    bad = _noncrossing_by_intervals(n, diags)
    if bad is not None:
        rep.fail(f"partition cuts {bad[0]} and {bad[1]} cross")
    total = sum(sizes)
    if total != n + 2 * len(diags):
        rep.fail(f"piece sizes sum to {total}, expected {n + 2 * len(diags)}")
    return rep


def check_simple(points: Sequence[Tuple[int, int]],
                 general_position: bool = True,
                 gp_limit: int = 2048) -> Report:
    """Simplicity (and optionally strict general position) of a vertex ring."""
    rep = Report()
    n = len(points)
    if n < 3:
        rep.fail("fewer than 3 vertices")
        return rep
    if len(set(points)) != n:
        rep.fail("duplicate vertices")
        return rep
    xs = np.array([p[0] for p in points], dtype=np.int64)
    ys = np.array([p[1] for p in points], dtype=np.int64)
    ax, ay = xs, ys
    bx, by = np.roll(xs, -1), np.roll(ys, -1)
    if ((ax == bx) & (ay == by)).any():
        rep.fail("zero-length edge")
        return rep
    # vertex strictly inside another edge
    for k in range(n):
        ex, ey = bx[k] - ax[k], by[k] - ay[k]
        cr = ex * (ys - ay[k]) - ey * (xs - ax[k])
        on = (cr == 0) \
            & (np.minimum(ax[k], bx[k]) <= xs) & (xs <= np.maximum(ax[k], bx[k])) \
            & (np.minimum(ay[k], by[k]) <= ys) & (ys <= np.maximum(ay[k], by[k]))
        on[k] = False
        on[(k + 1) % n] = False
        if on.any():
            rep.fail(f"vertex {int(np.nonzero(on)[0][0]) + 1} lies on edge {k + 1}")
            return rep
    # pairwise proper crossings (adjacent pairs share exactly one endpoint,
    # covered by the on-edge test above plus general position)
    for k in range(n):
        o1 = np.sign((bx[k] - ax[k]) * (ys - ay[k]) - (by[k] - ay[k]) * (xs - ax[k]))
        o2 = np.sign((bx[k] - ax[k]) * (by - ay[k]) - (by[k] - ay[k]) * (bx - ax[k]))
        o3 = np.sign((bx - ax) * (ay[k] - ay) - (by - ay) * (ax[k] - ax))
        o4 = np.sign((bx - ax) * (by[k] - ay) - (by - ay) * (bx[k] - ax))
        crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
        crossing[k] = False
        hit = np.nonzero(crossing)[0]
        hit = hit[hit > k]
        if hit.size:
            rep.fail(f"edges {k + 1} and {int(hit[0]) + 1} cross")
            return rep
    if general_position and n <= gp_limit:
        col = _collinear_triple(xs, ys)
        if col is not None:
            rep.fail(f"vertices {col} are collinear")
    return rep


def _collinear_triple(xs, ys) -> Optional[Tuple[int, int, int]]:
    """Any three collinear vertices, by per-vertex primitive-direction sort."""
    n = len(xs)
    for i in range(n):
        dx = np.delete(xs - xs[i], i)
        dy = np.delete(ys - ys[i], i)
        neg = (dx < 0) | ((dx == 0) & (dy < 0))
        dx = np.where(neg, -dx, dx)
        dy = np.where(neg, -dy, dy)
        g = np.gcd(np.abs(dx), np.abs(dy))
        g[g == 0] = 1
        dx //= g
        dy //= g
        pairs = dx * (1 << 32) + dy  # dx >= 0, |dy| < 2^27: injective
        uniq, counts = np.unique(pairs, return_counts=True)
        if (counts > 1).any():
            dup = uniq[np.argmax(counts > 1)]
            others = [k for k in range(n) if k != i]
            hits = [others[k] for k in np.nonzero(pairs == dup)[0][:2]]
            return (i + 1, hits[0] + 1, hits[1] + 1)
    return None


# ---------------------------------------------------------------------------
# generators

def generate(kind: str, n: int, seed: int) -> BasePolygon:
    """Deterministic simple polygon in strict general position, clockwise."""
    if n < 3:
        raise PolygonInputError("n must be at least 3")
    makers = {
        "random": _gen_random,
        "convex": _gen_convex,
        "comb": _gen_comb,
        "spiral": _gen_spiral,
        "monotone": _gen_monotone,
    }
    if kind not in makers:
        raise PolygonInputError(f"unknown generator kind {kind!r}")
    for attempt in range(40):
        pts = makers[kind](n, seed + 1000003 * attempt)
        if pts is None:
            continue
        pts = _to_clockwise(pts)
        rep = check_simple(pts, general_position=True)
        if rep.ok:
            poly = BasePolygon(pts)
            poly.kind = kind
            return poly
    raise PolygonInputError(f"could not generate {kind} polygon n={n} "
                            f"seed={seed} after 40 attempts")


def _to_clockwise(pts):
    s = 0
    n = len(pts)
    for k in range(n):
        x1, y1 = pts[k]
        x2, y2 = pts[(k + 1) % n]
        s += x1 * y2 - x2 * y1
    if s > 0:
        pts = [pts[0]] + pts[:0:-1]
    return pts


def _gen_convex(n: int, seed: int):
    """Integer Valtr construction: random vector set summing to zero, sorted
    by angle.  Distinct primitive directions give strict convexity, which
    makes any three vertices non-collinear."""
    rng = random.Random(seed)
    r = min(geom.COORD_LIMIT // 4, max(256, 4 * n * n))
    xs = sorted(rng.randrange(-r, r + 1) for _ in range(n))
    ys = sorted(rng.randrange(-r, r + 1) for _ in range(n))

    def deltas(vals):
        lo, hi = vals[0], vals[-1]
        last_a, last_b = lo, lo
        out = []
        for v in vals[1:-1]:
            if rng.getrandbits(1):
                out.append(v - last_a)
                last_a = v
            else:
                out.append(last_b - v)
                last_b = v
        out.append(hi - last_a)
        out.append(last_b - hi)
        return out

    vx = deltas(xs)
    vy = deltas(ys)
    rng.shuffle(vy)
    vecs = list(zip(vx, vy))
    if any(v == (0, 0) for v in vecs):
        return None
    prim = set()
    for dx, dy in vecs:
        g = math.gcd(abs(dx), abs(dy))
        key = (dx // g, dy // g)
        if key in prim:
            return None  # parallel edges would create a straight vertex
        prim.add(key)
    vecs.sort(key=lambda v: math.atan2(v[1], v[0]))
    pts = []
    x = y = 0
    for dx, dy in vecs:
        pts.append((x, y))
        x += dx
        y += dy
    if (x, y) != (0, 0):
        return None
    return pts


def _gen_random(n: int, seed: int):
    """Random point set untangled into a simple polygon by 2-opt moves."""
    rng = random.Random(seed)
    r = min(geom.COORD_LIMIT, max(4 * n, 64) * max(4 * n, 64))
    pts = set()
    while len(pts) < n:
        pts.add((rng.randrange(0, r), rng.randrange(0, r)))
    pts = list(pts)
    rng.shuffle(pts)
    xs = np.array([p[0] for p in pts], dtype=np.int64)
    ys = np.array([p[1] for p in pts], dtype=np.int64)
    if _collinear_triple(xs, ys) is not None:
        return None
    order = np.arange(n)
    for _ in range(50 * n * n):
        pair = _first_crossing(xs[order], ys[order])
        if pair is None:
            return [pts[k] for k in order]
        i, j = pair
        order[i + 1:j + 1] = order[i + 1:j + 1][::-1]
    return None


def _first_crossing(xs, ys) -> Optional[Tuple[int, int]]:
    n = len(xs)
    ax, ay = xs, ys
    bx, by = np.roll(xs, -1), np.roll(ys, -1)
    for k in range(n - 2):
        o1 = np.sign((bx[k] - ax[k]) * (ys - ay[k]) - (by[k] - ay[k]) * (xs - ax[k]))
        o2 = np.sign((bx[k] - ax[k]) * (by - ay[k]) - (by[k] - ay[k]) * (bx - ax[k]))
        o3 = np.sign((bx - ax) * (ay[k] - ay) - (by - ay) * (ax[k] - ax))
        o4 = np.sign((bx - ax) * (by[k] - ay) - (by - ay) * (bx[k] - ax))
        crossing = (o1 * o2 < 0) & (o3 * o4 < 0)
        crossing[:k + 1] = False
        hit = np.nonzero(crossing)[0]
        if hit.size:
            return k, int(hit[0])
    return None


def _strict_chain(rng: random.Random, count: int, concave: bool) -> List[int]:
    """y-values over consecutive integer gap indices whose slopes are strictly
    monotone (a single peak or valley), so no three points are collinear."""
    gaps = count - 1
    steps = [rng.choice((1, 2)) for _ in range(gaps)]
    slope = sum(steps) // 2 + 1
    if not concave:
        slope = -slope
    ys = [0]
    for d in steps:
        ys.append(ys[-1] + slope)
        slope += -d if concave else d
    base = -min(ys)
    return [y + base for y in ys]


def _gen_comb(n: int, seed: int):
    """Deep rectangular notches cut into the top edge of a box; the last notch
    opens toward the right wall.  For n = 4k+2 this gives exactly 2k-1 reflex
    vertices (the notch bottoms).  Tooth tops lie on a strictly concave chain
    and notch bottoms on a strictly convex one, so neither chain contains a
    collinear triple, and the chains are separated by the notch depth."""
    if n < 10:
        return _gen_convex(n, seed)
    rng = random.Random(seed)
    k = (n - 2) // 4
    extra = n - (4 * k + 2)          # 0..3 spare vertices on the left wall
    tops = _strict_chain(rng, 2 * k, concave=True)       # x = 0,2,...,4k-2
    bots = _strict_chain(rng, 2 * k - 1, concave=False)  # notch bottoms
    H = max(tops) + max(bots) + 4000     # tops sit well above every bottom
    top_y = [H + t - max(tops) for t in tops]            # peak at H
    bot_y = [b - max(bots) for b in bots]                # valley at <= 0
    y_floor = min(bot_y) - 5000
    width = 4 * k + 3
    pts: List[Tuple[int, int]] = [(0, y_floor)]
    # optional left-wall bulge (convex by increasing height gaps)
    h = y_floor
    gap = max(1000, (top_y[0] - y_floor) // 8)
    for e in range(extra):
        h += gap * (e + 1)
        pts.append((-1 - e, h))
    pts.append((0, top_y[0]))        # top-left corner
    ti = 1
    bi = 0
    for j in range(1, k + 1):
        x1 = 4 * j - 2
        x2 = 4 * j
        pts.append((x1, top_y[ti])); ti += 1
        pts.append((x1, bot_y[bi])); bi += 1
        if j < k:
            pts.append((x2, bot_y[bi])); bi += 1
            pts.append((x2, top_y[ti])); ti += 1
        else:
            # merged final notch: convex step-down to the bottom-right corner
            pts.append((x2, bot_y[bi - 1] - 500))
            pts.append((width, y_floor - 3))
    return pts


def _gen_spiral(n: int, seed: int):
    """Spiral corridor: an outward arm and a parallel inner arm walked back,
    leaving a channel that winds through every turn.  The inner-arm vertices
    form one long reflex chain, so geodesics along the corridor bend at
    nearly half the vertices."""
    if n < 12:
        return _gen_convex(n, seed)
    rng = random.Random(seed)
    n_out = (n + 1) // 2
    n_in = n - n_out
    turns = max(1.0, n / 64.0)
    pitch = 24000
    corridor = 9000
    r_end = corridor + 15000
    sweep = 2 * math.pi * turns
    c = pitch / (2 * math.pi)

    def arm(count, radius_shift, angle_shift):
        out = []
        for i in range(count):
            th = sweep * i / (count - 1) + angle_shift
            r = r_end + c * (sweep - (th - angle_shift)) + radius_shift
            x = int(round(r * math.cos(th))) + rng.randrange(-61, 62)
            y = int(round(r * math.sin(th))) + rng.randrange(-61, 62)
            out.append((x, y))
        return out

    outer = arm(n_out, 0, 0.0)
    inner = arm(n_in, -corridor, 0.02)
    return outer + inner[::-1]


def _gen_monotone(n: int, seed: int):
    """x-monotone polygon: distinct x's split into an upper and lower chain.

    The y span grows with n^2 so random collinear triples stay rare enough
    for the resample loop."""
    rng = random.Random(seed)
    rx = max(8 * n, 256)
    ry = min(geom.COORD_LIMIT // 2, max(4 * n * n, 256))
    xs = rng.sample(range(rx), n)
    xs.sort()
    upper = [xs[0]]
    lower = []
    for x in xs[1:-1]:
        (upper if rng.getrandbits(1) else lower).append(x)
    upper.append(xs[-1])
    pts_u = [(x, ry + rng.randrange(ry)) for x in upper]
    pts_l = [(x, -rng.randrange(ry)) for x in lower]
    return pts_u + pts_l[::-1]
