"""Newton polygons, the Hodge polygon, closed-form slope predictions for
f(x) = x^d + a x^{d-1} with p = -1 mod d, and the gap/transfer criterion.

Everything is exact: ordinates and slopes are Fractions, and a point with
valuation INF (a vanishing coefficient) never becomes a vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import INF, is_prime


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple
    vertices: tuple
    slopes: tuple

    def ordinate(self, x) -> Fraction:
        """Value of the piecewise-linear hull at abscissa ``x``."""
        vs = self.vertices
        if not vs or x < vs[0][0] or x > vs[-1][0]:
            raise ValueError(f"{x} outside the polygon's support")
        for (x0, y0), (x1, y1) in zip(vs, vs[1:]):
            if x0 <= x <= x1:
                return y0 + (y1 - y0) * Fraction(x - x0, x1 - x0)
        return vs[0][1]

    @property
    def length(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0] if self.vertices else 0


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points) -> NewtonPolygon:
    """Lower convex hull of (index, valuation) pairs, slopes with multiplicity."""
    pts = sorted((int(i), v if v is INF else Fraction(v)) for i, v in points)
    xs = [i for i, _ in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("indices must be distinct")
    finite = [(i, v) for i, v in pts if v is not INF]
    hull = []
    for pt in finite:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    slopes = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        slopes.extend([(y1 - y0) / (x1 - x0)] * (x1 - x0))
    return NewtonPolygon(tuple(pts), tuple(hull), tuple(slopes))


def polygon_from_slopes(slopes, start=(0, Fraction(0))) -> NewtonPolygon:
    """Polygon through the cumulative sums of sorted slopes."""
    slopes = sorted(Fraction(s) for s in slopes)
    pts = [start]
    for s in slopes:
        x, y = pts[-1]
        pts.append((x + 1, y + s))
    return lower_hull(pts)


# ---------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class Hypothesis:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SlopePrediction:
    d: int
    p: int
    h: int
    M: int
    slopes: tuple
    hypotheses: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(c.passed for c in self.hypotheses)

    def polygon(self) -> NewtonPolygon:
        return polygon_from_slopes(self.slopes)


def hodge_bound(d: int, h: int) -> Fraction:
    """N(d): (d^2 + 3)/4 over the prime field, d^2/2 otherwise."""
    return Fraction(d * d + 3, 4) if h == 1 else Fraction(d * d, 2)


def theorem1_slopes(d: int, p: int) -> tuple:
    out = []
    for i in range(d):
        if 2 * i < d:
            w = Fraction((p + 1) * i, d * (p - 1))
        elif 2 * i == d:
            w = Fraction((p + 1) * i - d, d * (p - 1))
        else:
            w = Fraction((p + 1) * i - 2 * d, d * (p - 1))
        out.append(w)
    return tuple(sorted(out))


def _base_hypotheses(d, p, h):
    nd = hodge_bound(d, h)
    return [
        Hypothesis("p_prime", is_prime(p), f"p = {p}"),
        Hypothesis("p_not_dividing_d", is_prime(p) and d % p != 0, f"d = {d}"),
        Hypothesis("p_congruent_minus_one_mod_d", (p + 1) % d == 0, f"p mod d = {p % d}"),
        Hypothesis("p_above_N(d)", p > nd, f"N(d) = {nd}"),
    ]


def predict_theorem1(d: int, p: int, h: int = 1) -> SlopePrediction:
    """Slopes w_0..w_{d-1} of the q-adic Newton polygon of L*(f, t)."""
    return SlopePrediction(d, p, h, 1, theorem1_slopes(d, p), _base_hypotheses(d, p, h))


def predict_theorem2(d: int, p: int, h: int, M: int) -> SlopePrediction:
    """Slopes p^{1-M}(i + w_j), 0 <= i < p^{M-1}, for a character of order p^M."""
    if M < 1:
        raise ValueError("M must be positive")
    if M == 1:
        return predict_theorem1(d, p, h)
    w = theorem1_slopes(d, p)
    scale = Fraction(1, p ** (M - 1))
    slopes = tuple(sorted(scale * (i + wj) for i in range(p ** (M - 1)) for wj in w))
    hyps = _base_hypotheses(d, p, h)
    bound = Fraction(h * (d * d - 1), 4 * d) + 1
    hyps.append(Hypothesis("p_above_transfer_bound", p > bound, f"h(d^2-1)/(4d)+1 = {bound}"))
    return SlopePrediction(d, p, h, M, slopes, hyps)


def hodge_polygon(d: int, upto: int) -> NewtonPolygon:
    """Vertices (k, k(k-1)/(2d)) for k = 0..upto."""
    return lower_hull((k, Fraction(k * (k - 1), 2 * d)) for k in range(upto + 1))


@dataclass(frozen=True)
class GapReport:
    gap: Fraction
    bound: Fraction
    within_bound: bool
    transfer_ok: bool


def gap_and_transfer(prediction: SlopePrediction, d: int, p: int, h: int) -> GapReport:
    """gap(f) = max(NP - HP) over one period [0, d], and the test gap < 1/h.

    NP has slopes i + w_j, so NP - HP is d-periodic; both are linear between
    integers, so integer abscissae suffice.
    """
    w = sorted(prediction.slopes)[:d] if prediction.M == 1 else theorem1_slopes(d, p)
    gap = Fraction(0)
    partial = Fraction(0)
    for k in range(d + 1):
        gap = max(gap, partial - Fraction(k * (k - 1), 2 * d))
        if k < d:
            partial += w[k]
    bound = Fraction(d * d - 1, 4 * d * (p - 1))
    return GapReport(gap, bound, gap <= bound, gap < Fraction(1, h))


# ---------------------------------------------------------------------------
# comparison


@dataclass(frozen=True)
class Verdict:
    match: bool
    mode: str
    first_divergence: Optional[int] = None
    detail: str = ""


def compare_polygons(expected: NewtonPolygon, observed: NewtonPolygon, prefix_upto=None) -> Verdict:
    """Exact slope-multiset equality, or (with ``prefix_upto``) agreement of a
    partially known polygon with a predicted one.

    Prefix mode: every vertex of ``expected`` at index <= prefix_upto must be
    an observed point with the same ordinate, and every other finite observed
    point must lie on or above ``expected``.
    """
    if prefix_upto is None:
        a, b = list(expected.slopes), list(observed.slopes)
        for i, (x, y) in enumerate(zip(a, b)):
            if x != y:
                return Verdict(False, "exact", i, f"slope {i}: {x} != {y}")
        if len(a) != len(b):
            i = min(len(a), len(b))
            return Verdict(False, "exact", i, f"slope counts differ: {len(a)} vs {len(b)}")
        return Verdict(True, "exact")
    obs = dict(observed.points)
    vertex_x = {x for x, _ in expected.vertices}
    for x in sorted(set(obs) | {x for x in vertex_x if x <= prefix_upto}):
        if x > prefix_upto:
            continue
        want = expected.ordinate(x)
        got = obs.get(x)
        if got is None:
            return Verdict(False, "prefix", x, f"no observed point at vertex {x}")
        if x in vertex_x and got != want:
            return Verdict(False, "prefix", x, f"vertex {x}: observed {got}, expected {want}")
        if got is not INF and got < want:
            return Verdict(False, "prefix", x, f"point {x}: {got} below polygon {want}")
    return Verdict(True, "prefix")
