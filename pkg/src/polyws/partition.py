"""Balanced partitioning: split a polygon by pairwise non-crossing diagonals
into pieces of roughly n/s vertices each.

Each round triangulates every oversized piece, streaming the diagonals into a
filter that keeps the first balanced cut (neither side below a sixth of the
piece) and abandons the rest of the stream.  A piece never survives a round
unsplit, so sizes decay geometrically until they fit the target.
"""
from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .errors import InternalInvariantError, PolygonInputError
from .triangulate import (KAPPA_DEFAULT, TriangulationSink, required_budget,
                          triangulate)
from .workspace import (BasePolygon, MeterMode, RunStats, SubpolygonView,
                        WorkspaceMeter, component_sizes)


class _CutFound(Exception):
    def __init__(self, diagonal):
        self.diagonal = diagonal


class BalancedCutFilter(TriangulationSink):
    """Write-only sink that aborts the stream at the first balanced cut.

    Retains O(1) state: the piece reference and the threshold.  Diagonals
    arrive as base-index pairs and are mapped back to piece-local indices
    through the descriptor's arc arithmetic.
    """

    def __init__(self, piece: SubpolygonView):
        self.piece = piece
        self.need = -(-piece.m // 6)

    def emit_diagonal(self, a: int, b: int) -> None:
        la = local_of_base(self.piece, a)
        lb = local_of_base(self.piece, b)
        s1, s2 = component_sizes(la, lb, self.piece.m)
        if s1 >= self.need and s2 >= self.need:
            raise _CutFound((a, b))


def local_of_base(piece: SubpolygonView, ref: int) -> int:
    """Piece-local index of a base vertex, through the arc descriptor."""
    n = piece.base.n
    pos = 0
    for it in piece.items:
        if it[0] == 0:  # arc
            _, start, length = it
            offset = (ref - start) % n
            if offset < length:
                return pos + offset + 1
            pos += length
        else:
            cv = it[1]
            if cv.base == ref:
                return pos + 1
            pos += 1
    raise InternalInvariantError(f"base vertex {ref} not on the piece")


def balanced_cut_filter(piece: SubpolygonView, diagonal_stream) -> Tuple[int, int]:
    """First streamed diagonal that splits the piece with both sides at least
    ceil(m/6) vertices.  Raises when the stream runs dry, which contradicts
    the existence of a balanced cut in every triangulation."""
    filt = BalancedCutFilter(piece)
    try:
        for (a, b) in diagonal_stream:
            filt.emit_diagonal(a, b)
    except _CutFound as found:
        return found.diagonal
    raise InternalInvariantError("triangulation stream held no balanced cut")


def _find_cut(piece: SubpolygonView, s: int, meter, rng, stats,
              kappa) -> Tuple[int, int]:
    tau = max(s, required_budget(piece.m), 10)
    filt = BalancedCutFilter(piece)
    try:
        triangulate(piece, 1, tau, filt, meter, rng=rng, stats=stats,
                    kappa=kappa)
    except _CutFound as found:
        return found.diagonal
    raise InternalInvariantError("triangulation stream held no balanced cut")


def _split_piece(piece: SubpolygonView, diagonal) -> List[SubpolygonView]:
    a, b = diagonal
    la = local_of_base(piece, a)
    lb = local_of_base(piece, b)
    if la > lb:
        la, lb = lb, la
    side1 = piece.subview([("range", la, lb)])
    side2 = piece.subview([("range", lb, la)])
    return [side1, side2]


def partition(polygon: BasePolygon, s: int,
              sink: Optional[TriangulationSink] = None, *,
              mode: MeterMode = MeterMode.PERMISSIVE,
              L: int = 64, kappa: float = KAPPA_DEFAULT, seed: int = 0,
              stats: Optional[RunStats] = None,
              meter: Optional[WorkspaceMeter] = None):
    """Split the polygon by non-crossing diagonals into pieces of between
    floor(t/6) and t+2 vertices, t = max(ceil(n/s), 3).

    Returns (pieces, diagonals, meter, stats, round_maxima); pieces are views
    over the input polygon, diagonals base-index pairs (also streamed to the
    sink when given).  Any 1 <= s <= n is accepted; per-piece triangulations
    raise their workspace to the level their own size requires.
    """
    n = polygon.n
    if not 1 <= s <= n:
        raise PolygonInputError("partition needs 1 <= s <= n")
    t = max(-(-n // s), 3)
    if meter is None:
        meter = WorkspaceMeter(L * max(s, required_budget(n)), mode)
    if stats is None:
        stats = RunStats()
    rng = random.Random(seed)
    pieces: List[SubpolygonView] = [SubpolygonView.whole(polygon)]
    charged = pieces[0].descriptor_words
    meter.alloc(charged)
    diagonals: List[Tuple[int, int]] = []
    round_maxima: List[int] = []
    guard = 0
    try:
        while any(p.m > t for p in pieces):
            guard += 1
            if guard > 4 * n:
                raise InternalInvariantError("partition failed to converge")
            nxt: List[SubpolygonView] = []
            for piece in pieces:
                if piece.m <= t:
                    nxt.append(piece)
                    continue
                cut = _find_cut(piece, s, meter, rng, stats, kappa)
                diagonals.append(cut)
                if sink is not None:
                    sink.emit_diagonal(*cut)
                halves = _split_piece(piece, cut)
                meter.alloc(sum(h.descriptor_words for h in halves))
                meter.release(piece.descriptor_words)
                charged += sum(h.descriptor_words for h in halves) \
                    - piece.descriptor_words
                nxt.extend(halves)
            pieces = nxt
            round_maxima.append(max(p.m for p in pieces))
    finally:
        meter.release(charged)
    if sink is not None:
        sink.finish()
    return pieces, diagonals, meter, stats, round_maxima


def piece_vertex_lists(pieces: List[SubpolygonView]) -> List[List[int]]:
    """Base-index rings of the pieces (validators, serialization)."""
    return [[p.base_ref(i) for i in range(1, p.m + 1)] for p in pieces]
