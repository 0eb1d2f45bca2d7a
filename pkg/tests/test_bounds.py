from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from combicache.bounds import (
    REFERENCE_VALUES,
    TradeoffPoint,
    anchors,
    claimed_dominance,
    curve_rows,
    cutset_bound,
    lower_convex_envelope,
    remark1_check,
    routing_load,
    thm1_points,
    thm2_optimality_check,
    thm3_points,
    zewail_curve,
    zewail_memory,
)
from combicache.errors import ParameterError


def _hull_oracle(points):
    """A point is on the lower envelope iff no chord between two other points
    lies on or below it (up to collinear interior points)."""
    pts = {}
    for p in points:
        pts[p.M] = min(pts.get(p.M, p.R), p.R)
    items = sorted(pts.items())
    keep = []
    for i, (m, r) in enumerate(items):
        dominated = False
        for (m1, r1), (m2, r2) in combinations(items, 2):
            if m1 < m < m2:
                chord = r1 + (r2 - r1) * (m - m1) / (m2 - m1)
                if chord <= r:
                    dominated = True
                    break
        if not dominated:
            keep.append((m, r))
    return keep


def test_coded_point_h4_r2():
    pts = thm1_points(4, 2, 6)
    p = next(p for p in pts if p.g == 2)
    assert (p.M, p.R) == (Fraction(6, 5), Fraction(3, 5))
    p3 = next(p for p in pts if p.g == 3)
    assert (p3.M, p3.R) == (Fraction(3), Fraction(1, 4))


def test_uncoded_point_h5_r3():
    p = next(p for p in thm1_points(5, 3, 10) if p.g == 6)
    assert (p.M, p.R) == (7, Fraction(1, 10))


def test_improved_never_above_coded():
    for H in range(3, 8):
        for r in range(2, H):
            a = {p.g: p for p in thm1_points(H, r, 5) if not p.anchor}
            b = {p.g: p for p in thm3_points(H, r, 5) if not p.anchor}
            for g in a:
                assert b[g].M <= a[g].M and b[g].R >= a[g].R or b[g].M < a[g].M


def test_routing_and_cutset():
    assert routing_load(4, 2, 6, 0) == Fraction(6, 4)
    assert routing_load(4, 2, 6, 6) == 0
    assert cutset_bound(4, 2, 6, 3) == Fraction(1, 4)
    with pytest.raises(ParameterError):
        cutset_bound(4, 2, 6, 7)
    assert [(p.M, p.R) for p in anchors(4, 2, 6)] == [(0, Fraction(3, 2)), (6, 0)]


def test_no_gain_points():
    assert thm1_points(3, 3, 4) == []
    assert thm1_points(4, 1, 4) == []


@pytest.mark.parametrize("H,r,N", [(4, 2, 6), (6, 2, 15), (5, 3, 10), (7, 3, 4), (8, 4, 2)])
def test_envelope_matches_oracle(H, r, N):
    for pts in (thm1_points(H, r, N), thm3_points(H, r, N),
                zewail_curve(H, r, N) + anchors(H, r, N)):
        env = lower_convex_envelope(pts, N)
        assert [(p.M, p.R) for p in env.points] == _hull_oracle(pts)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.fractions(0, 10, max_denominator=12),
                          st.fractions(0, 10, max_denominator=12)), min_size=1, max_size=12))
def test_envelope_random(raw):
    pts = [TradeoffPoint(Fraction(m), Fraction(r), "x") for m, r in raw]
    env = lower_convex_envelope(pts)
    assert [(p.M, p.R) for p in env.points] == _hull_oracle(pts)
    for p in pts:
        assert env.value_at(p.M) <= p.R


def test_envelope_errors():
    with pytest.raises(ParameterError):
        lower_convex_envelope([])
    with pytest.raises(ParameterError):
        lower_convex_envelope([TradeoffPoint(Fraction(7), Fraction(0), "x")], N=6)
    with pytest.raises(ParameterError):
        TradeoffPoint(Fraction(-1), Fraction(0), "x")


def test_value_at():
    env = lower_convex_envelope(thm1_points(4, 2, 6), 6)
    assert env.value_at(Fraction(6, 5)) == Fraction(3, 5)
    assert env.value_at(Fraction(6)) == 0
    with pytest.raises(ValueError):
        env.value_at(Fraction(7))


def test_zewail():
    assert zewail_memory(4, 2, 6, 2) == 2
    assert zewail_memory(6, 2, 15, 2) == 3
    curve = zewail_curve(4, 2, 1)
    assert all(p.M <= 1 for p in curve)
    assert [p.g for p in zewail_curve(4, 2, 6)] == [2, 3]


def test_baseline_comparison_r2():
    for H in range(3, 11):
        rep = remark1_check(H, 2)
        assert rep.ok and all(row.claimed for row in rep.rows)


def test_baseline_comparison_tie_h4_r3():
    rep = remark1_check(4, 3)
    assert not rep.ok
    [row] = rep.failures
    assert row.g == 2 and row.proposed == row.baseline == Fraction(1, 3)


def test_claimed_dominance_range():
    # K'=6 for (5,3): claimed for g >= 6 - 2 + 1 = 5
    assert [g for g in range(2, 7) if claimed_dominance(5, 3, g)] == [5, 6]


@pytest.mark.parametrize("H", range(2, 9))
def test_corner_optimality(H):
    for r in range(1, H + 1):
        rep = thm2_optimality_check(H, r, 3)
        assert rep.ok, rep


def test_curve_rows_h6_r2():
    rows = curve_rows(6, 2, 15, ["thm1", "routing", "cutset"])
    names = {row["scheme"] for row in rows}
    assert names == {"thm1", "thm1_envelope", "routing", "cutset"}
    assert {"scheme": "thm1", "g": 5, "M": Fraction(10), "R": Fraction(1, 6)} in rows
    with pytest.raises(ParameterError):
        curve_rows(6, 2, 15, ["bogus"])


def test_reference_values_present():
    assert REFERENCE_VALUES["baseline_load_H4_r2_N6_M6/5"]["value"] == Fraction(9, 10)
    assert REFERENCE_VALUES["enhanced_cutset_H4_r2_N6_M6/5"]["value"] == Fraction(3, 5)
