"""Streaming geodesic cursor vs. the visibility-graph oracle."""
import math
import random

import pytest

from polyws import geom
from polyws.errors import UsageError
from polyws.geodesic import GeodesicCursor, first_link
from polyws.oracle import generate, ref_geodesic
from polyws.workspace import BasePolygon, RunStats, SubpolygonView

SQUARE = [(0, 0), (0, 2), (2, 2), (2, 0)]
LPOLY = [(0, 0), (0, 3), (1, 3), (1, 1), (3, 1), (3, 0)]


def test_first_link_square_direct():
    v = SubpolygonView.whole(BasePolygon(SQUARE))
    assert first_link(v, 1, 3, random.Random(0)) == 3


def test_first_link_lpolygon_bend():
    v = SubpolygonView.whole(BasePolygon(LPOLY))
    for seed in range(10):
        assert first_link(v, 2, 6, random.Random(seed)) == 4


def test_cursor_square():
    v = SubpolygonView.whole(BasePolygon(SQUARE))
    cur = GeodesicCursor(v, 1, 3, random.Random(1))
    assert list(cur) == [3]
    with pytest.raises(UsageError):
        cur.next_vertex()


def test_cursor_lpolygon():
    v = SubpolygonView.whole(BasePolygon(LPOLY))
    cur = GeodesicCursor(v, 2, 6, random.Random(1))
    assert list(cur) == [4, 6]


def test_first_link_matches_oracle_all_pairs():
    for seed in range(12):
        poly = generate("random", 40, seed)
        v = SubpolygonView.whole(poly)
        rng = random.Random(seed * 17 + 1)
        for q in range(1, 41):
            for t in range(1, 41):
                if q == t:
                    continue
                path = ref_geodesic(poly, q, t)
                assert first_link(v, q, t, rng) == path[1], (seed, q, t)


def test_cursor_sequence_matches_oracle():
    for kind, seed in [("random", 3), ("spiral", 1), ("comb", 2), ("monotone", 4)]:
        poly = generate(kind, 60, seed)
        v = SubpolygonView.whole(poly)
        rng = random.Random(99 + seed)
        for q, t in [(1, 30), (5, 55), (12, 40), (60, 20)]:
            cur = GeodesicCursor(v, q, t, rng)
            assert [q] + list(cur) == ref_geodesic(poly, q, t), (kind, q, t)


def test_yielded_interior_vertices_are_reflex():
    for seed in range(6):
        poly = generate("spiral", 50, seed)
        v = SubpolygonView.whole(poly)
        cur = GeodesicCursor(v, 1, 25, random.Random(seed))
        seq = list(cur)
        for w in seq[:-1]:
            assert geom.is_reflex(v, w)


def test_pause_resume_determinism():
    # interleaving unrelated work (other cursors, rng draws) between next()
    # calls must not change the yielded sequence
    for seed in range(10):
        poly = generate("random", 50, seed)
        v = SubpolygonView.whole(poly)
        plain = list(GeodesicCursor(v, 1, 25, random.Random(7)))
        noisy_rng = random.Random(12345)
        cur = GeodesicCursor(v, 1, 25, random.Random(7))
        out = []
        other = GeodesicCursor(v, 3, 20, random.Random(8))
        while not cur.done:
            out.append(cur.next_vertex())
            noisy_rng.random()
            if not other.done:
                other.next_vertex()
        assert out == plain


def test_round_complexity_logarithmic():
    # empirical surrogate: mean cone rounds per link <= 4*log2(n)
    for kind in ("random", "spiral", "comb"):
        for n, seed in [(60, 1), (200, 2)]:
            poly = generate(kind, n, seed)
            v = SubpolygonView.whole(poly)
            stats = RunStats()
            rng = random.Random(5)
            pairs = [(1, n // 2), (2, n - 5), (n // 3, 1 + 2 * n // 3)]
            for q, t in pairs:
                cur = GeodesicCursor(v, q, t, rng, stats)
                list(cur)
            assert stats.links > 0
            assert stats.rounds / stats.links <= 4 * math.log2(n), (kind, n)


def test_cursor_state_is_constant_words():
    # a cursor's whole stored state fits the charged constant regardless of
    # the view size or path length
    assert GeodesicCursor.WORDS <= 16
    poly = generate("spiral", 200, 1)
    v = SubpolygonView.whole(poly)
    cur = GeodesicCursor(v, 1, 100, random.Random(0))
    for _ in range(5):
        cur.next_vertex()
    state = [cur.current, cur.target, cur.done]
    assert len(state) + 2 <= GeodesicCursor.WORDS  # + view ref and rng seed


def test_bulk_and_scalar_candidate_scans_agree():
    from polyws.geodesic import (_candidate_scan_bulk, _candidate_scan_scalar,
                                 _initial_cone)
    for seed in range(5):
        poly = generate("random", 150, seed)  # above the bulk threshold
        v = SubpolygonView.whole(poly)
        for q in (1, 40, 99):
            cone = _initial_cone(v, q)
            ns = _candidate_scan_scalar(v, q, cone, None)
            nb = _candidate_scan_bulk(v, q, cone, None)
            assert ns == nb
            for k in range(min(ns, 8)):
                assert (_candidate_scan_scalar(v, q, cone, k)
                        == _candidate_scan_bulk(v, q, cone, k))
