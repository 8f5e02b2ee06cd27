"""Exact checks of the determinant identity for the s x s matrix

    M(s)_{ij} = a^{i+j} / ((k i - i - j)! (i + j)!),   1 <= i, j <= s,

with p = d k - 1, together with the factorization chain used to evaluate it.
Indices in this module are 1-based as in the matrices they describe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod

from .exact import falling_factorial, reciprocal_factorial, require_prime, vp_rational


class RationalMatrix(list):
    """A square list-of-lists of Fractions."""

    @property
    def dim(self) -> int:
        return len(self)

    def __matmul__(self, other):
        n, m, r = len(self), len(other), len(other[0])
        return RationalMatrix(
            [[sum((self[i][k] * other[k][j] for k in range(m)), Fraction(0)) for j in range(r)] for i in range(n)]
        )


def _k(d, p):
    if (p + 1) % d:
        raise ValueError(f"p = {p} is not -1 mod d = {d}")
    k = (p + 1) // d
    if k < 2:
        raise ValueError(f"p = {p} gives k = 1; (k i - i - 1)! needs p > d")
    return k


def _check(d, p, a, s):
    require_prime(p)
    k = _k(d, p)
    if not 1 <= s <= d - 1:
        raise ValueError(f"s must lie in [1, {d - 1}]")
    if a % p == 0:
        raise ValueError("a must be a p-adic unit")
    return k


def build_M(d: int, p: int, a: int, s: int) -> RationalMatrix:
    k = _check(d, p, a, s)
    return RationalMatrix(
        [
            [
                Fraction(a) ** (i + j) * reciprocal_factorial(k * i - i - j) * reciprocal_factorial(i + j)
                for j in range(1, s + 1)
            ]
            for i in range(1, s + 1)
        ]
    )


def det(m) -> Fraction:
    """Determinant by Gaussian elimination over Q."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    result = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if a[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = -result
        result *= a[c][c]
        inv = 1 / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return result


def det_and_valuation(m, p: int):
    value = det(m)
    return value, vp_rational(value, p)


def c0(j: int, k: int) -> int:
    """((1 - k) j - 1)[j - 1]: the constant term of the basis expansion."""
    return falling_factorial((1 - k) * j - 1, j - 1)


def closed_form_det(d: int, p: int, a: int, s: int) -> Fraction:
    k = _check(d, p, a, s)
    sign = -1 if (s // 2) % 2 else 1
    value = Fraction(a) ** (s * (s + 1)) * sign
    for i in range(1, s + 1):
        value *= Fraction(i ** (s - i) * c0(i, k), factorial(k * i - i - 1) * factorial(i + s))
    return value


def basis_coeffs(j: int, k: int) -> list:
    """c_0(j)..c_{j-1}(j) with ((k-1)x - 1)[j-1] = sum_t c_t(j) (x + j)[t].

    Solved at x = -j + r, r = 0..j-1, where (x + j)[t] = r[t] vanishes for t > r,
    so the system is lower triangular.
    """
    coeffs = []
    for r in range(j):
        x = -j + r
        lhs = falling_factorial((k - 1) * x - 1, j - 1)
        rest = sum(coeffs[t] * falling_factorial(r, t) for t in range(r))
        q, rem = divmod(lhs - rest, falling_factorial(r, r))
        if rem:
            raise ArithmeticError("basis coefficients are not integral")
        coeffs.append(q)
    return coeffs


def stirling_coeffs(n: int) -> list:
    """c'_0(n)..c'_n(n) with x[n] = sum_t c'_t(n) x^t."""
    poly = [1]
    for i in range(n):
        nxt = [0] * (len(poly) + 1)
        for t, c in enumerate(poly):
            nxt[t + 1] += c
            nxt[t] -= i * c
        poly = nxt
    return poly


@dataclass
class FactorizationReport:
    d: int
    p: int
    a: int
    s: int
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name, passed, detail=""):
        self.checks[name] = passed
        if not passed:
            self.failures.append(f"{name}: {detail}")


def _first_difference(x, y):
    for i, (rx, ry) in enumerate(zip(x, y)):
        for j, (u, v) in enumerate(zip(rx, ry)):
            if u != v:
                return f"entry ({i + 1}, {j + 1}): {u} != {v}"
    return ""


def verify_factorizations(d: int, p: int, a: int, s: int) -> FactorizationReport:
    """Build M', M'', M1, M2, M11, M12 and check every identity of the chain."""
    k = _check(d, p, a, s)
    rep = FactorizationReport(d, p, a, s)
    rng = range(1, s + 1)

    M = build_M(d, p, a, s)
    M1a = build_M(d, p, 1, s)
    D = RationalMatrix([[Fraction(a) ** i if i == j else Fraction(0) for j in rng] for i in rng])
    DMD = D @ M1a @ D
    rep.record("M = D M' D", DMD == M, _first_difference(DMD, M))

    Mpp = RationalMatrix(
        [[factorial(k * i - i - 1) * factorial(i + s) * M1a[i - 1][j - 1] for j in rng] for i in rng]
    )
    M1 = RationalMatrix([[Fraction(falling_factorial(i + s, s - t)) for t in rng] for i in rng])
    cs = {j: basis_coeffs(j, k) for j in rng}
    M2 = RationalMatrix([[Fraction(cs[j][j - t]) if t <= j else Fraction(0) for j in rng] for t in rng])
    prod12 = M1 @ M2
    rep.record("M'' = M1 M2", prod12 == Mpp, _first_difference(prod12, Mpp))

    M11 = RationalMatrix([[Fraction((i + s) ** (t - 1)) for t in rng] for i in rng])
    st = {n: stirling_coeffs(n) for n in range(s)}
    M12 = RationalMatrix(
        [[Fraction(st[s - j][t - 1]) if t - 1 <= s - j else Fraction(0) for j in rng] for t in rng]
    )
    prod1112 = M11 @ M12
    rep.record("M1 = M11 M12", prod1112 == M1, _first_difference(prod1112, M1))

    d11, want11 = det(M11), prod(t ** (s - t) for t in rng)
    rep.record("det M11", d11 == want11, f"{d11} != {want11}")
    d12, want12 = det(M12), (-1) ** (s // 2)
    rep.record("det M12", d12 == want12, f"{d12} != {want12}")
    d2, want2 = det(M2), prod(c0(i, k) for i in rng)
    rep.record("det M2", d2 == want2, f"{d2} != {want2}")

    dm, v = det_and_valuation(M, p)
    cf = closed_form_det(d, p, a, s)
    rep.record("det M = closed form", dm == cf, f"{dm} != {cf}")
    rep.record("v(det M) = 0", v == 0, f"v = {v}")
    for j in rng:
        x_values = range(0, s + 1)
        ok = all(
            sum(c * falling_factorial(x + j, t) for t, c in enumerate(cs[j]))
            == falling_factorial((k - 1) * x - 1, j - 1)
            for x in x_values
        )
        rep.record(f"basis expansion j={j}", ok, "re-evaluation mismatch")
        rep.record(f"v(c0({j})) = 0", vp_rational(c0(j, k), p) == 0, f"c0 = {c0(j, k)}")
    return rep


def valid_primes(d: int, count: int = 2) -> list:
    """The smallest primes p = -1 mod d with p > d (so that k >= 2)."""
    from .exact import is_prime

    out, p = [], d + 1
    while len(out) < count:
        if is_prime(p) and (p + 1) % d == 0:
            out.append(p)
        p += 1
    return out
