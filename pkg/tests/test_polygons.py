from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dworkslopes.exact import INF, is_prime
from dworkslopes.polygons import (
    compare_polygons,
    gap_and_transfer,
    hodge_polygon,
    lower_hull,
    polygon_from_slopes,
    predict_theorem1,
    predict_theorem2,
)

VALID = [(d, p) for d in range(2, 9) for p in range(3, 80) if is_prime(p) and (p + 1) % d == 0 and d % p]


def test_hull_examples():
    assert lower_hull([(0, 0), (1, 0), (2, F(1, 2)), (3, 1)]).slopes == (0, F(1, 2), F(1, 2))
    assert lower_hull([(0, 0), (1, 5), (2, 1)]).slopes == (F(1, 2), F(1, 2))
    poly = lower_hull([(0, 0), (1, INF), (2, 1)])
    assert poly.slopes == (F(1, 2), F(1, 2))
    assert all(v is not INF for _, v in poly.vertices)


def test_hull_rejects_duplicate_indices():
    with pytest.raises(ValueError):
        lower_hull([(0, 0), (0, 1)])


points = st.dictionaries(st.integers(0, 12), st.fractions(min_value=0, max_value=10, max_denominator=12), min_size=2)


@settings(max_examples=60)
@given(points, st.randoms())
def test_hull_idempotent_and_order_free(pts, rnd):
    items = list(pts.items())
    poly = lower_hull(items)
    rnd.shuffle(items)
    assert lower_hull(items) == lower_hull(sorted(items))
    again = lower_hull(poly.vertices)
    assert again.vertices == poly.vertices and again.slopes == poly.slopes
    # strict convexity and multiplicity count
    vs = poly.vertices
    seg = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(vs, vs[1:])]
    assert all(a < b for a, b in zip(seg, seg[1:]))
    assert len(poly.slopes) == vs[-1][0] - vs[0][0]
    for x, y in items:
        assert y >= poly.ordinate(x)


def test_order_p_prediction_examples():
    assert predict_theorem1(3, 5).slopes == (0, F(1, 2), F(1, 2))
    assert predict_theorem1(4, 7).slopes == (0, F(1, 3), F(1, 2), F(2, 3))
    assert predict_theorem1(5, 19).slopes == (0, F(2, 9), F(4, 9), F(5, 9), F(7, 9))
    assert predict_theorem1(3, 5).hypotheses_hold


def test_order_p_hypothesis_failures():
    names = {h.name: h.passed for h in predict_theorem1(3, 7).hypotheses}
    assert names["p_congruent_minus_one_mod_d"] is False
    # N(6) = 39/4 exceeds p = 5
    names = {h.name: h.passed for h in predict_theorem1(6, 5).hypotheses}
    assert names["p_above_N(d)"] is False


def test_higher_order_prediction_examples():
    assert predict_theorem2(3, 5, 1, 1).slopes == predict_theorem1(3, 5).slopes
    want = [0, F(1, 10), F(1, 10), F(1, 5), F(3, 10), F(3, 10), F(2, 5), F(1, 2), F(1, 2),
            F(3, 5), F(7, 10), F(7, 10), F(4, 5), F(9, 10), F(9, 10)]
    assert list(predict_theorem2(3, 5, 1, 2).slopes) == want
    hyp = {h.name: h for h in predict_theorem2(3, 5, 6, 2).hypotheses}
    assert hyp["p_above_transfer_bound"].passed is False
    assert "5" in hyp["p_above_transfer_bound"].detail


@pytest.mark.parametrize("d,p", VALID)
def test_slope_sum_and_partial_bounds(d, p):
    w = predict_theorem1(d, p).slopes
    assert sum(w) == F(d - 1, 2)
    extra = F(d * d - 1, 4 * d * (p - 1))
    for s in range(d):
        assert sum(w[: s + 1]) <= F(s * (s + 1), 2 * d) + extra


@pytest.mark.parametrize("d,p", VALID)
@pytest.mark.parametrize("M", [2, 3])
def test_higher_order_slopes_in_unit_interval(d, p, M):
    pred = predict_theorem2(d, p, 1, M)
    D = p ** (M - 1) * d
    assert len(pred.slopes) == D
    assert all(0 <= s < 1 for s in pred.slopes)
    # sum over i, j of (i + w_j)/P with P = p^(M-1) telescopes to (D - 1)/2
    assert sum(pred.slopes) == F(D - 1, 2)


def test_hodge_polygon():
    poly = hodge_polygon(3, 3)
    assert poly.vertices == ((0, 0), (1, 0), (2, F(1, 3)), (3, 1))
    assert poly.slopes == (0, F(1, 3), F(2, 3))
    assert hodge_polygon(1, 2).slopes == (0, 1)
    for k, s in enumerate(hodge_polygon(7, 6).slopes):
        assert s == F(k, 7)


@pytest.mark.parametrize("d,p", VALID)
def test_gap_within_bound(d, p):
    rep = gap_and_transfer(predict_theorem1(d, p), d, p, 1)
    assert rep.bound == F(d * d - 1, 4 * d * (p - 1))
    assert rep.within_bound and rep.gap <= rep.bound
    assert rep.transfer_ok


def test_gap_d3_p5():
    rep = gap_and_transfer(predict_theorem1(3, 5), 3, 5, 1)
    assert rep.bound == F(1, 6)
    assert rep.gap <= F(1, 6)
    assert rep.transfer_ok


@pytest.mark.parametrize("d,p", VALID)
def test_prediction_above_hodge(d, p):
    pred = predict_theorem1(d, p).polygon()
    hp = hodge_polygon(d, d)
    for x in range(d + 1):
        assert pred.ordinate(x) >= hp.ordinate(x)


def test_compare_exact():
    a = polygon_from_slopes([0, F(1, 2), F(1, 2)])
    b = polygon_from_slopes([0, F(1, 3), F(2, 3)])
    assert compare_polygons(a, a).match
    v = compare_polygons(a, b)
    assert not v.match and v.first_divergence == 1


def test_compare_prefix():
    pred = predict_theorem2(3, 5, 1, 2).polygon()
    partial = [(i, pred.ordinate(i)) for i in range(9)]
    partial[2] = (2, pred.ordinate(2) + 1)  # a non-vertex point above the polygon is allowed
    assert compare_polygons(pred, lower_hull(partial), prefix_upto=8).match
    partial[1] = (1, pred.ordinate(1) + F(1, 100))  # vertex ordinate wrong
    v = compare_polygons(pred, lower_hull(partial), prefix_upto=8)
    assert not v.match and v.first_divergence == 1
