"""Dwork's side of the comparison: the Artin-Hasse root gamma, the splitting
coefficients gamma_m, the power-series coefficients F_i of
theta(x^d) theta(a x^{d-1}), the nuclear matrix A_1 and its principal minors,
truncated Fredholm determinants, Frobenius products A_h, and Zhu's hypothesis.

A_1 has entries F_{p i - j} gamma^{(j-i)/d}.  The fractional powers are never
formed: A_1 = D^{-1} C D with D = diag(gamma^{j/d}) and C = (F_{p i - j}), and
principal minors are invariant under that conjugation, so everything is done
with C inside Z_q[pi].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil

from .eisenstein import EisensteinElt, EisensteinRing, PrecisionError
from .exact import INF, reciprocal_factorial, vp_rational
from .finite_rings import teichmuller_lift
from .lfunction import CurveConfig
from .polygons import lower_hull

logger = logging.getLogger(__name__)


class TruncationError(ValueError):
    """The matrix truncation cannot hold every index set the pruning keeps."""


@lru_cache(maxsize=None)
def artin_hasse_coeffs(p: int, count: int) -> tuple:
    """e_0..e_count of E(t) = exp(sum_m t^{p^m}/p^m), via n e_n = sum_{p^m <= n} e_{n-p^m}."""
    e = [Fraction(1)]
    for n in range(1, count + 1):
        acc = Fraction(0)
        pm = 1
        while pm <= n:
            acc += e[n - pm]
            pm *= p
        e.append(acc / n)
        if e[-1].denominator % p == 0:
            raise ArithmeticError(f"Artin-Hasse coefficient e_{n} is not {p}-integral")
    return tuple(e)


def solve_gamma(ring: EisensteinRing) -> EisensteinElt:
    """The root gamma = pi u, u = 1 mod pi, of sum_m t^{p^m}/p^m.

    Dividing the equation by pi leaves sum_m s_m u^{p^m} = 0 with the integer
    s_m = pi^{p^m - 1}/p^m = (-1)^{q_m} p^{q_m - m}, q_m = (p^m - 1)/(p - 1);
    its derivative at u = 1 is a unit, so Newton's method converges.
    """
    p, N = ring.p, ring.N
    terms = []  # (m, s_m)
    m = 0
    while True:
        qm = (p**m - 1) // (p - 1)
        if qm - m >= N:
            break
        terms.append((m, (-1) ** qm * p ** (qm - m)))
        m += 1

    def G_and_dG(u):
        g, dg = ring.zero(), ring.zero()
        power = u  # u^{p^m}
        for m, s in terms:
            if m:
                power = power**p
            g = g + power * s
            dg = dg + power * (s * p**m)
        return g, dg * u.inverse()

    u = ring.one()
    for _ in range(4 * (N * ring.e).bit_length() + 8):
        g, dg = G_and_dG(u)
        if g.is_zero():
            break
        u = u - g * dg.inverse()
    else:
        raise PrecisionError("Newton iteration for gamma did not converge")
    return ring.pi() * u


def _zpi_mul(x, y, p):
    """Exact product in Z[pi]/(pi^{p-1} + p) (integer coefficient lists)."""
    e = p - 1
    out = [0] * (2 * e - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                out[i + j] += a * b
    for k in range(2 * e - 2, e - 1, -1):
        out[k - e] -= p * out[k]
    return out[:e]


def artin_hasse_residual(gamma: EisensteinElt):
    """Valuation of sum_m gamma^{p^m}/p^m, computed exactly over Q.

    The representative of gamma with coefficients in [0, p^N) is raised to
    p^m in Z[pi] without any modulus and divided exactly by p^m; terms whose
    valuation p^m/(p-1) - m is beyond the precision are omitted.
    """
    ring = gamma.ring
    if ring.h != 1:
        raise ValueError("gamma lives in Z_p[pi]; use an h = 1 ring")
    p, N = ring.p, ring.N
    base = list(gamma.c)
    total = [Fraction(0)] * ring.e
    power = base
    m = 0
    last = 0
    while Fraction(p**last, p - 1) - last < N + 1:
        last += 1
    while m <= last:
        if m:
            acc = [1] + [0] * (ring.e - 1)
            for _ in range(p):
                acc = _zpi_mul(acc, power, p)
            power = acc
        total = [t + Fraction(c, p**m) for t, c in zip(total, power)]
        m += 1
    vals = [vp_rational(c, p) + Fraction(i, ring.e) for i, c in enumerate(total) if c]
    return min(vals) if vals else INF


def theta_at_one(gamma: EisensteinElt) -> EisensteinElt:
    """E(gamma) = sum_n e_n gamma^n, a primitive p-th root of unity."""
    ring = gamma.ring
    count = ring.N * ring.e + 1
    e = artin_hasse_coeffs(ring.p, count)
    total, power = ring.zero(), ring.one()
    for n in range(count + 1):
        total = total + power * ring.from_rational(e[n])
        power = power * gamma
    return total


def splitting_coeffs(gamma: EisensteinElt, count: int) -> list:
    """gamma_m = e_m gamma^m for m = 0..count (coefficients of E(gamma t))."""
    ring = gamma.ring
    p = ring.p
    e = artin_hasse_coeffs(p, count)
    out = []
    power = ring.one()
    for m in range(count + 1):
        gm = power * ring.from_rational(e[m])
        if m <= p - 1 and e[m] != reciprocal_factorial(m):
            raise AssertionError(f"e_{m} != 1/{m}!")
        v = gm.valuation()
        if ring.reliable(v) and v < Fraction(m, p - 1):
            raise AssertionError(f"v(gamma_{m}) = {v} < {m}/{p - 1}")
        out.append(gm)
        power = power * gamma
    return out


@dataclass
class DworkData:
    """Everything the matrix entries need for one configuration."""

    config: CurveConfig
    ring: EisensteinRing
    gamma: EisensteinElt
    a_hat: EisensteinElt
    _gammas: list = field(default_factory=list)
    _a_powers: list = field(default_factory=list)
    _F: dict = field(default_factory=dict)

    def gamma_m(self, m: int) -> EisensteinElt:
        if m >= len(self._gammas):
            self._gammas = splitting_coeffs(self.gamma, max(m, 2 * len(self._gammas), 8))
        return self._gammas[m]

    def a_power(self, n: int) -> EisensteinElt:
        if not self._a_powers:
            self._a_powers = [self.ring.one()]
        while len(self._a_powers) <= n:
            self._a_powers.append(self._a_powers[-1] * self.a_hat)
        return self._a_powers[n]


def dwork_setup(config: CurveConfig, N: int, guard: int = 6) -> DworkData:
    if config.M != 1:
        raise ValueError("the Dwork route handles the order-p character only")
    ring = EisensteinRing(config.p, N, config.field, guard)
    gamma = solve_gamma(ring)
    a_hat = ring.from_zq(teichmuller_lift(config.a, N).coeffs)
    return DworkData(config, ring, gamma, a_hat)


def f_coeff(data: DworkData, i: int) -> EisensteinElt:
    """F_i = sum over d m + (d-1) n = i of gamma_m gamma_n a^n."""
    if i < 0:
        return data.ring.zero()
    cached = data._F.get(i)
    if cached is not None:
        return cached
    d = data.config.d
    ring = data.ring
    total = ring.zero()
    for n in range(i // (d - 1) + 1):
        rest = i - (d - 1) * n
        if rest % d:
            continue
        term = data.gamma_m(rest // d) * data.gamma_m(n)
        if not term.is_zero():
            total = total + term * data.a_power(n)
    v = total.valuation()
    p = data.config.p
    if ring.reliable(v) and v < Fraction(i, d * (p - 1)):
        raise AssertionError(f"v(F_{i}) = {v} below i/(d(p-1))")
    data._F[i] = total
    return total


@dataclass
class DworkMatrix:
    """Core grid C[i][j] = F_{p i - j}, 0 <= i, j < n (or a Frobenius product).

    The true matrix entry is core[i][j] * gamma^{tick(i, j)/d}.
    """

    data: DworkData
    n: int
    core: list
    h: int = 1

    @staticmethod
    def tick(i: int, j: int) -> int:
        return j - i

    @property
    def ring(self) -> EisensteinRing:
        return self.data.ring


def build_matrix(data: DworkData, n: int) -> DworkMatrix:
    if n < 1:
        raise ValueError("truncation must be positive")
    p, d = data.config.p, data.config.d
    core = [[f_coeff(data, p * i - j) for j in range(n)] for i in range(n)]
    ring = data.ring
    for i in range(n):
        for j in range(n):
            v = core[i][j].valuation()
            # v(F) + (j - i)/(d(p-1)) >= i/d
            if ring.reliable(v) and v + Fraction(j - i, d * (p - 1)) < Fraction(i, d):
                raise AssertionError(f"row bound fails at ({i}, {j})")
    return DworkMatrix(data, n, core)


# ---------------------------------------------------------------------------
# determinants


def determinant(rows) -> EisensteinElt:
    """Division-free Laplace expansion over column subsets (O(2^s s) products)."""
    s = len(rows)
    if s == 0:
        raise ValueError("empty matrix")
    ring = rows[0][0].ring
    layer = {0: ring.one()}
    for r in range(s):
        nxt = {}
        row = rows[r]
        for mask, acc in layer.items():
            if acc.is_zero():
                continue
            for c in range(s):
                bit = 1 << c
                if mask & bit or row[c].is_zero():
                    continue
                term = acc * row[c]
                if bin(mask >> (c + 1)).count("1") % 2:
                    term = -term
                key = mask | bit
                nxt[key] = nxt[key] + term if key in nxt else term
        layer = nxt
    return layer.get((1 << s) - 1, ring.zero())


def principal_minor(matrix: DworkMatrix, indices) -> EisensteinElt:
    idx = list(indices)
    if any(t >= matrix.n or t < 0 for t in idx):
        raise TruncationError(f"indices {idx} outside the {matrix.n}x{matrix.n} truncation")
    return determinant([[matrix.core[i][j] for j in idx] for i in idx])


def principal_minor_valuation(matrix: DworkMatrix, indices):
    """Valuation of det A(t_0, ..., t_{s-1}) (the gamma^{1/d} twists cancel)."""
    return principal_minor(matrix, indices).checked_valuation(f"minor {list(indices)}")


def _index_sets(size, limit, n, start=0):
    """Increasing tuples of ``size`` indices in [start, n) with sum <= limit."""
    if size == 0:
        yield ()
        return
    t = start
    # the smallest completion of t is t + (t+1) + ... + (t+size-1)
    while t < n and size * t + size * (size - 1) // 2 <= limit:
        for rest in _index_sets(size - 1, limit - t, n, t + 1):
            yield (t,) + rest
        t += 1


def hodge_cutoff(d: int, s: int, h: int = 1) -> Fraction:
    """p-adic valuation beyond which Fredholm terms are pruned: h (s(s-1)/(2d) + 1)."""
    return h * (Fraction(s * (s - 1), 2 * d) + 1)


def required_truncation(d: int, s_max: int, h: int = 1) -> int:
    """Smallest n containing every index set kept by the pruning for s <= s_max."""
    need = 1
    for s in range(1, s_max + 1):
        limit = d * hodge_cutoff(d, s, h)
        biggest = int(limit) - (s - 1) * (s - 2) // 2
        need = max(need, biggest + 1)
    return need


def default_truncation(d: int) -> int:
    return ceil(d * (d + 3) / 2)


@dataclass(frozen=True)
class FredholmCoeff:
    s: int
    valuation: object  # Fraction, p-adic
    exact: bool
    terms: int


def fredholm_coeffs(matrix: DworkMatrix, upto: int) -> list:
    """v(c_s), s = 1..upto, for det(I - t A) = sum c_s t^s.

    c_s = (-1)^s sum of s x s principal minors.  A minor on T has valuation at
    least sum(T)/d (row i of A_h has valuations >= i/d), so index sets with
    sum(T)/d above the cutoff are skipped; if the kept sum has valuation at or
    below the cutoff it equals v(c_s), otherwise only v(c_s) > cutoff is known.
    """
    d = matrix.data.config.d
    h = matrix.h
    ring = matrix.ring
    out = []
    for s in range(1, upto + 1):
        cutoff = hodge_cutoff(d, s, h)
        limit = int(d * cutoff)
        top = limit - (s - 1) * (s - 2) // 2
        if top >= matrix.n:
            raise TruncationError(f"s = {s} needs indices up to {top}, truncation is {matrix.n}")
        if not ring.reliable(cutoff):
            raise PrecisionError(f"cutoff {cutoff} for s = {s} is beyond the precision horizon {ring.horizon}")
        total = ring.zero()
        count = 0
        for T in _index_sets(s, limit, matrix.n):
            total = total + principal_minor(matrix, T)
            count += 1
        if s % 2:
            total = -total
        v = total.valuation()
        if v is not INF and v <= cutoff:
            out.append(FredholmCoeff(s, v, True, count))
        else:
            out.append(FredholmCoeff(s, cutoff, False, count))
    return out


def fredholm_polygon(coeffs, h: int = 1):
    """Lower hull of (s, v_q(c_s)) over the exactly known coefficients."""
    pts = [(0, Fraction(0))] + [(c.s, c.valuation / h) for c in coeffs if c.exact]
    return lower_hull(pts)


def slopes_below_one(coeffs, h: int = 1) -> tuple:
    return tuple(s for s in fredholm_polygon(coeffs, h).slopes if s < 1)


# ---------------------------------------------------------------------------
# Zhu's hypothesis


@dataclass(frozen=True)
class ZhuCheck:
    i: int
    lower: Fraction
    value: Fraction
    upper: Fraction

    @property
    def passed(self) -> bool:
        return self.lower <= self.value <= self.upper


@dataclass
class ZhuReport:
    checks: list
    row_bound_ok: bool

    @property
    def passed(self) -> bool:
        return self.row_bound_ok and all(c.passed for c in self.checks)


def check_zhu_hypothesis(matrix: DworkMatrix, k: int) -> ZhuReport:
    """With beta_s = s/d: sum_{s<i} beta_s <= v(det A[i]) <= (beta_i - beta_{i-1})/2 + sum_{s<i} beta_s."""
    d, p = matrix.data.config.d, matrix.data.config.p
    checks = []
    for i in range(1, k + 1):
        lower = Fraction(i * (i - 1), 2 * d)
        upper = lower + Fraction(1, 2 * d)
        value = principal_minor_valuation(matrix, range(i))
        checks.append(ZhuCheck(i, lower, value, upper))
    ring = matrix.ring
    row_ok = True
    for i in range(matrix.n):
        for j in range(matrix.n):
            v = matrix.core[i][j].valuation()
            if ring.reliable(v) and v + Fraction(j - i, d * (p - 1)) < Fraction(i, d):
                row_ok = False
    return ZhuReport(checks, row_ok)


# ---------------------------------------------------------------------------
# Frobenius products


def frobenius_power(x: EisensteinElt, r: int) -> EisensteinElt:
    for _ in range(r % x.ring.h):
        x = x.frobenius()
    return x


def matrix_product_frobenius(matrix: DworkMatrix, h: int) -> DworkMatrix:
    """Core of A_h = A_1 phi(A_1) ... phi^{h-1}(A_1), truncated to the same n.

    Row i of C vanishes beyond column p i, so row i of the partial product
    C phi(C) ... phi^{r-1}(C) vanishes beyond p^r i and every inner sum is finite.
    """
    if h < 1:
        raise ValueError("h must be positive")
    if h == 1:
        return matrix
    data, n = matrix.data, matrix.n
    p = data.config.p
    ring = data.ring
    width = p * (n - 1) + 1
    prod = [[f_coeff(data, p * i - j) for j in range(width)] for i in range(n)]
    for r in range(1, h):
        last = r == h - 1
        new_width = n if last else p ** (r + 1) * (n - 1) + 1
        phi_cache = {}

        def phi_entry(k, j):
            key = (k, j)
            if key not in phi_cache:
                phi_cache[key] = frobenius_power(f_coeff(data, p * k - j), r)
            return phi_cache[key]

        nxt = []
        for i in range(n):
            row = prod[i]
            reach = min(len(row), p**r * i + 1)
            new_row = []
            for j in range(new_width):
                acc = ring.zero()
                for k in range(reach):
                    if not row[k].is_zero():
                        acc = acc + row[k] * phi_entry(k, j)
                new_row.append(acc)
            nxt.append(new_row)
        prod = nxt
    return DworkMatrix(data, n, [row[:n] for row in prod], h)
