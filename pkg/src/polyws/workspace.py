"""The bounded-workspace model: read-only polygon accessors, composable
subpolygon views with O(1) indexed access, vertex-type classification, and the
word-counting budget meter.

Conventions used throughout the package:

  * vertices are 1-based and clockwise; edge k joins local vertices k and k+1;
  * every view is built "start first": local vertex 1 is the designated start
    of whatever walk runs on it, and the midpoint target is local floor(m/2);
  * the meter counts abstract words of *stored* state (buffers, descriptors,
    cursors, pending records).  Read-only accesses to the base polygon are
    free, as are transient scan temporaries that die before an operation
    returns.
"""
from __future__ import annotations

import enum
from bisect import bisect_right
from contextlib import contextmanager
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import geom
from .errors import (BudgetExceededError, InternalInvariantError,
                     PolygonInputError, UsageError)

FRAME_WORDS = 8       # implicit cost of one live recursion frame
CURSOR_WORDS = 16     # a geodesic cursor's whole state
L_DEFAULT = 64        # budget_words = L * s


class VertexType(enum.Enum):
    SOURCE_ENDPOINT = "source"
    MID_ENDPOINT = "mid"
    TOP = "top"
    BOTTOM = "bottom"


def classify(i: int, m: int) -> VertexType:
    """Position class of local vertex i in an m-vertex view (start = 1)."""
    if m < 3 or not 1 <= i <= m:
        raise PolygonInputError(f"classify: index {i} out of range for m={m}")
    mid = m // 2
    if i == 1:
        return VertexType.SOURCE_ENDPOINT
    if i == mid:
        return VertexType.MID_ENDPOINT
    if i < mid:
        return VertexType.TOP
    return VertexType.BOTTOM


def is_alternating(i: int, j: int, m: int) -> bool:
    """True iff {i, j} joins a top and a bottom vertex or touches an endpoint."""
    ci = classify(i, m)
    cj = classify(j, m)
    if ci in (VertexType.SOURCE_ENDPOINT, VertexType.MID_ENDPOINT):
        return True
    if cj in (VertexType.SOURCE_ENDPOINT, VertexType.MID_ENDPOINT):
        return True
    return ci != cj


def separates(i: int, j: int, m: int) -> bool:
    """True iff vertices 1 and floor(m/2) fall in different components of the
    boundary split at i and j.  Pure index arithmetic."""
    mid = m // 2
    if i in (1, mid) or j in (1, mid):
        raise PolygonInputError("separates: diagonal touches an endpoint")
    inside = 0
    for special in (1, mid):
        off = (special - i) % m
        if 0 < off < (j - i) % m:
            inside += 1
    return inside == 1


def component_sizes(i: int, j: int, m: int) -> Tuple[int, int]:
    """Vertex counts of the two closed components of the boundary split at a
    diagonal (i, j); the endpoints belong to both, so the counts sum to m+2."""
    d = (j - i) % m
    return d + 1, m - d + 1


class MeterMode(enum.Enum):
    STRICT = "strict"
    PERMISSIVE = "permissive"


class RunStats:
    """Instrumentation counters for one run (not charged to the meter)."""

    __slots__ = ("links", "rounds", "far_calls", "far_scan_max", "depth",
                 "pieces", "wall_ms")

    def __init__(self):
        self.links = 0          # geodesic vertices pulled from cursors
        self.rounds = 0         # cone-shrinking rounds across all links
        self.far_calls = 0      # alternating-diagonal searches
        self.far_scan_max = 0   # worst boundary-scan count in one search
        self.depth = 0          # deepest recursion level reached
        self.pieces = 0         # recursive subproblems created
        self.wall_ms = 0.0

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__slots__}


class WorkspaceMeter:
    """Word-granularity allocation ledger with per-level peak tracking.

    Strict mode refuses allocations that would exceed the budget and leaves
    the ledger untouched; permissive mode lets them through and raises the
    overage flag.
    """

    def __init__(self, budget_words: int, mode: MeterMode = MeterMode.STRICT):
        if budget_words < 0:
            raise PolygonInputError("budget must be non-negative")
        self.budget_words = budget_words
        self.mode = mode
        self.current_words = 0
        self.peak_words = 0
        self.overage_flag = False
        self._level = 0
        self.level_current: List[int] = [0]
        self.level_peaks: List[int] = [0]

    @property
    def level(self) -> int:
        return self._level

    def alloc(self, words: int, level: Optional[int] = None) -> None:
        if words < 0:
            raise PolygonInputError("cannot allocate a negative word count")
        if self.mode is MeterMode.STRICT \
                and self.current_words + words > self.budget_words:
            raise BudgetExceededError(
                words, self.budget_words - self.current_words, self._level)
        lvl = self._level if level is None else level
        self.current_words += words
        if self.current_words > self.budget_words:
            self.overage_flag = True
        if self.current_words > self.peak_words:
            self.peak_words = self.current_words
        self.level_current[lvl] += words
        if self.level_current[lvl] > self.level_peaks[lvl]:
            self.level_peaks[lvl] = self.level_current[lvl]

    def release(self, words: int, level: Optional[int] = None) -> None:
        if words < 0:
            raise PolygonInputError("cannot release a negative word count")
        if words > self.current_words:
            raise InternalInvariantError("meter release exceeds current words")
        lvl = self._level if level is None else level
        self.current_words -= words
        self.level_current[lvl] -= words

    @contextmanager
    def scoped(self, words: int, level: Optional[int] = None):
        lvl = self._level if level is None else level
        self.alloc(words, lvl)
        try:
            yield
        finally:
            self.release(words, lvl)

    def enter_frame(self) -> None:
        self._level += 1
        if len(self.level_current) <= self._level:
            self.level_current.append(0)
            self.level_peaks.append(0)
        self.alloc(FRAME_WORDS)

    def exit_frame(self) -> None:
        if self._level == 0:
            raise InternalInvariantError("exit_frame below level 0")
        self.release(FRAME_WORDS)
        if self.level_current[self._level] != 0:
            raise InternalInvariantError(
                f"level {self._level} exits with "
                f"{self.level_current[self._level]} words still charged")
        self._level -= 1

    @contextmanager
    def frame(self):
        self.enter_frame()
        try:
            yield self._level
        finally:
            self.exit_frame()


def null_meter() -> WorkspaceMeter:
    """An effectively unbounded permissive meter (oracles, tests, defaults)."""
    return WorkspaceMeter(1 << 60, MeterMode.PERMISSIVE)


class BasePolygon:
    """Read-only, constant-time vertex access to a simple polygon, clockwise.

    Doubles as the canonical coordinate store: scalar code reads python ints
    via vertex(); bulk scans slice the int64 arrays.
    """

    def __init__(self, points: Sequence[Tuple[int, int]], validate_range: bool = True):
        pts = [(int(x), int(y)) for x, y in points]
        if len(pts) < 3:
            raise PolygonInputError("a polygon needs at least 3 vertices")
        if validate_range:
            for x, y in pts:
                geom.check_coord(x)
                geom.check_coord(y)
        self._pts = tuple(pts)
        self.n = len(pts)
        self.xs = np.array([p[0] for p in pts], dtype=np.int64)
        self.ys = np.array([p[1] for p in pts], dtype=np.int64)

    def size(self) -> int:
        return self.n

    def vertex(self, i: int) -> Tuple[int, int]:
        if not 1 <= i <= self.n:
            raise PolygonInputError(f"vertex index {i} out of range")
        return self._pts[i - 1]

    def signed_area2(self) -> int:
        s = 0
        for k in range(self.n):
            x1, y1 = self._pts[k]
            x2, y2 = self._pts[(k + 1) % self.n]
            s += x1 * y2 - x2 * y1
        return s

    def points(self) -> Tuple[Tuple[int, int], ...]:
        return self._pts


class CutVertex:
    """An explicitly stored view vertex: an original vertex (by base index) or
    a derived/free exact point that exists only inside the recursion."""

    __slots__ = ("base", "point", "virtual")

    def __init__(self, base: Optional[int], point=None, virtual: bool = False):
        self.base = base          # 1-based base index, or None
        self.point = point        # exact (x, y) when base is None
        self.virtual = virtual    # True: never emitted to any sink

    def __repr__(self):
        if self.base is not None:
            return f"CutVertex(base={self.base})"
        return f"CutVertex(point={self.point}, virtual={self.virtual})"


# view descriptor items
_ARC = 0   # (ARC, start_base_1based, length)
_CUT = 1   # (CUT, CutVertex)


class SubpolygonView:
    """A window over a base polygon: ordered boundary items, each a contiguous
    base-index arc or a single stored cut vertex.  Local indices 1..m follow
    the boundary in clockwise order starting at the designated start vertex;
    lookup is O(1) through a prefix table of one entry per item.
    """

    __slots__ = ("base", "items", "prefix", "m", "all_int", "_starts")

    def __init__(self, base: BasePolygon, items):
        self.base = base
        norm = []
        for it in items:
            if it[0] == _ARC:
                _, start, length = it
                if length <= 0:
                    continue
                if norm and norm[-1][0] == _ARC:
                    ps, pl = norm[-1][1], norm[-1][2]
                    if (ps - 1 + pl) % base.n + 1 == start and pl + length <= base.n:
                        norm[-1] = (_ARC, ps, pl + length)
                        continue
                norm.append((_ARC, start, length))
            else:
                norm.append(it)
        self.items = tuple(norm)
        prefix = [0]
        all_int = True
        for it in self.items:
            if it[0] == _ARC:
                prefix.append(prefix[-1] + it[2])
            else:
                prefix.append(prefix[-1] + 1)
                cv = it[1]
                if cv.base is None:
                    px, py = cv.point
                    if not (isinstance(px, int) and isinstance(py, int)):
                        all_int = False
        self.prefix = tuple(prefix)
        self.m = prefix[-1]
        self.all_int = all_int
        self._starts = None
        if self.m < 3:
            raise PolygonInputError(f"view with {self.m} vertices is degenerate")

    @classmethod
    def whole(cls, base: BasePolygon, start: int = 1) -> "SubpolygonView":
        n = base.n
        if start == 1:
            return cls(base, [(_ARC, 1, n)])
        return cls(base, [(_ARC, start, n - start + 1), (_ARC, 1, start - 1)])

    # -- lookup -------------------------------------------------------------

    def _locate(self, i: int) -> Tuple[int, int]:
        if not 1 <= i <= self.m:
            raise PolygonInputError(f"local index {i} out of range (m={self.m})")
        slot = bisect_right(self.prefix, i - 1) - 1
        return slot, i - 1 - self.prefix[slot]

    def point(self, i: int):
        slot, off = self._locate(i)
        it = self.items[slot]
        if it[0] == _ARC:
            b = (it[1] - 1 + off) % self.base.n + 1
            return self.base.vertex(b)
        cv = it[1]
        if cv.base is not None:
            return self.base.vertex(cv.base)
        return cv.point

    def base_ref(self, i: int) -> Optional[int]:
        slot, off = self._locate(i)
        it = self.items[slot]
        if it[0] == _ARC:
            return (it[1] - 1 + off) % self.base.n + 1
        return it[1].base

    def is_virtual(self, i: int) -> bool:
        slot, _ = self._locate(i)
        it = self.items[slot]
        return it[0] == _CUT and it[1].virtual

    def is_cut(self, i: int) -> bool:
        """True for explicitly stored cut vertices (shared with a neighboring
        piece or created by a split); chain vertices return False."""
        slot, _ = self._locate(i)
        return self.items[slot][0] == _CUT

    def cut_count(self) -> int:
        return sum(1 for it in self.items if it[0] == _CUT)

    @property
    def descriptor_words(self) -> int:
        """Stored size of this descriptor: 2 words per arc (start, length),
        2 per cut vertex, 1 per prefix entry, plus a constant."""
        arcs = sum(1 for it in self.items if it[0] == _ARC)
        cuts = len(self.items) - arcs
        return 2 * arcs + 2 * cuts + len(self.prefix) + 4

    def scan_points(self):
        """Transient ring of exact points for one O(m) scan (index 0 holds
        local vertex 1).  Views made of a single arc alias the base tuple, so
        the common case costs nothing per vertex."""
        items = self.items
        if len(items) == 1 and items[0][0] == _ARC:
            _, start, length = items[0]
            base = self.base._pts
            s0 = start - 1
            end = s0 + length
            if end <= self.base.n:
                return base[s0:end]
            return base[s0:] + base[:end - self.base.n]
        return tuple(self.point(i) for i in range(1, self.m + 1))

    def coord_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.all_int:
            raise InternalInvariantError("coord_arrays on a rational view")
        xs = np.empty(self.m, dtype=np.int64)
        ys = np.empty(self.m, dtype=np.int64)
        n = self.base.n
        pos = 0
        for it in self.items:
            if it[0] == _ARC:
                _, start, length = it
                s0 = start - 1
                if s0 + length <= n:
                    xs[pos:pos + length] = self.base.xs[s0:s0 + length]
                    ys[pos:pos + length] = self.base.ys[s0:s0 + length]
                else:
                    head = n - s0
                    xs[pos:pos + head] = self.base.xs[s0:]
                    ys[pos:pos + head] = self.base.ys[s0:]
                    xs[pos + head:pos + length] = self.base.xs[:length - head]
                    ys[pos + head:pos + length] = self.base.ys[:length - head]
                pos += length
            else:
                cv = it[1]
                x, y = (self.base.vertex(cv.base) if cv.base is not None
                        else cv.point)
                xs[pos] = x
                ys[pos] = y
                pos += 1
        return xs, ys

    def materialize(self) -> List[Tuple]:
        return [self.point(i) for i in range(1, self.m + 1)]

    # -- slicing ------------------------------------------------------------

    def slice_positions(self, lo: int, hi: int) -> List[tuple]:
        """Descriptor items for the closed local range lo..hi (cyclic)."""
        count = (hi - lo) % self.m + 1
        out = []
        i = lo
        remaining = count
        while remaining > 0:
            slot, off = self._locate(i)
            it = self.items[slot]
            if it[0] == _ARC:
                take = min(remaining, it[2] - off)
                b = (it[1] - 1 + off) % self.base.n + 1
                out.append((_ARC, b, take))
            else:
                take = 1
                out.append(it)
            remaining -= take
            i = (i - 1 + take) % self.m + 1
        return out

    def subview(self, segs) -> "SubpolygonView":
        """Build a child view from ordered boundary segments.

        Each segment is ('range', lo, hi) for the closed local interval
        lo..hi, ('pos', i) for a single local vertex, ('cutpos', i) for a
        local vertex stored as an explicit cut vertex, or ('cut', CutVertex)
        for a new explicit vertex.  The child references the base polygon
        directly, so nesting never deepens indirection.
        """
        items = []
        for seg in segs:
            if seg[0] == "range":
                items.extend(self.slice_positions(seg[1], seg[2]))
            elif seg[0] == "pos":
                items.extend(self.slice_positions(seg[1], seg[1]))
            elif seg[0] == "cutpos":
                got = self.slice_positions(seg[1], seg[1])[0]
                if got[0] == _CUT:
                    items.append(got)
                else:
                    base_idx = got[1]
                    items.append((_CUT, CutVertex(base_idx)))
            elif seg[0] == "cut":
                items.append((_CUT, seg[1]))
            else:
                raise UsageError(f"unknown segment kind {seg[0]!r}")
        return SubpolygonView(self.base, items)


def make_view(parent: SubpolygonView, diagonals, selector) -> SubpolygonView:
    """Component of `parent` split by pairwise non-crossing diagonals.

    `diagonals` is an iterable of local index pairs.  `selector` is
    ('vertex', v) naming a component by a contained local vertex, or
    ('excludes', (a, b)) asking for the component whose vertex list contains
    neither.  Raises UsageError when the selector matches zero or several
    components.
    """
    m = parent.m
    diags = []
    for i, j in diagonals:
        if i == j or (j - i) % m in (1, m - 1):
            raise UsageError("degenerate diagonal")
        diags.append((i, j))
    regions = split_regions(m, diags)
    if selector[0] == "vertex":
        matches = [r for r in regions if selector[1] in r]
    elif selector[0] == "excludes":
        a, b = selector[1]
        matches = [r for r in regions if a not in r and b not in r]
    else:
        raise UsageError(f"unknown selector {selector[0]!r}")
    if len(matches) != 1:
        raise UsageError(
            f"selector {selector!r} matched {len(matches)} components")
    segs = _positions_to_segs(matches[0], m)
    return parent.subview(segs)


def _positions_to_segs(positions: List[int], m: int):
    segs = []
    k = 0
    while k < len(positions):
        j = k
        while j + 1 < len(positions) \
                and positions[j + 1] == positions[j] % m + 1:
            j += 1
        segs.append(("range", positions[k], positions[j]))
        k = j + 1
    return segs


def split_regions(m: int, diags) -> List[List[int]]:
    """All components of a cycle 1..m cut by pairwise non-crossing chords,
    each as a list of local indices in boundary order.

    Chords normalized to intervals [a, b] with a < b are pairwise nested or
    disjoint (interleaved endpoints would force the chords to cross inside any
    simple polygon), so a laminar sweep recovers every face.
    """
    intervals = sorted(set((min(i, j), max(i, j)) for i, j in diags))
    for x in range(len(intervals)):
        a1, b1 = intervals[x]
        for y in range(x + 1, len(intervals)):
            a2, b2 = intervals[y]
            if a1 < a2 < b1 < b2:
                raise UsageError("diagonals cross")

    def maximal_within(lo, hi, pool):
        """Maximal intervals of `pool` inside [lo, hi], excluding [lo, hi]."""
        inside = sorted((iv for iv in pool
                         if lo <= iv[0] and iv[1] <= hi and iv != (lo, hi)),
                        key=lambda iv: (iv[0], -iv[1]))
        out: List[Tuple[int, int]] = []
        for iv in inside:
            if out and iv[0] >= out[-1][0] and iv[1] <= out[-1][1]:
                continue
            out.append(iv)
        return out

    regions: List[List[int]] = []

    def emit(lo, hi, pool):
        kids = maximal_within(lo, hi, pool)
        face = []
        pos = lo
        for (a, b) in kids:
            face.extend(range(pos, a + 1))
            pos = b
        face.extend(range(pos, hi + 1))
        regions.append(face)
        for (a, b) in kids:
            emit(a, b, [iv for iv in pool
                        if a <= iv[0] and iv[1] <= b and iv != (a, b)])

    # outer face spans the whole cycle once, jumping over maximal chords;
    # a chord (1, m) cannot occur (adjacent on the cycle, rejected earlier)
    emit(1, m, intervals)
    return regions
