"""Exact arithmetic in Z[zeta] for zeta a primitive p^M-th root of unity.

zeta is the class of t modulo the cyclotomic polynomial
Phi_{p^M}(t) = sum_{i<p} t^{i p^{M-1}}.  Valuations are read off the norm,
computed as a resultant against Phi_{p^M}; p is totally ramified in
Q(zeta), so v(x) = v_p(N(x)) / phi(p^M).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .exact import INF, Valuation, require_prime, vp_int


@lru_cache(maxsize=None)
def cyclotomic_poly(p: int, M: int) -> tuple:
    """Coefficients of Phi_{p^M}, low degree first."""
    step = p ** (M - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for i in range(p):
        coeffs[i * step] = 1
    return tuple(coeffs)


class CyclotomicInt:
    __slots__ = ("p", "M", "coeffs")

    def __init__(self, p: int, M: int, coeffs=()):
        self.p = p
        self.M = M
        self.coeffs = _reduce(p, M, coeffs)

    @property
    def degree_bound(self) -> int:
        return (self.p - 1) * self.p ** (self.M - 1)

    @classmethod
    def from_int(cls, p, M, n):
        return cls(p, M, (n,))

    def _check(self, other):
        if not isinstance(other, CyclotomicInt):
            return CyclotomicInt.from_int(self.p, self.M, other)
        if (other.p, other.M) != (self.p, self.M):
            raise ValueError("cyclotomic integers of different levels")
        return other

    def __add__(self, other):
        o = self._check(other)
        return _raw(self.p, self.M, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return _raw(self.p, self.M, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return _raw(self.p, self.M, tuple(other * x for x in self.coeffs))
        o = self._check(other)
        n = len(self.coeffs)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicInt(self.p, self.M, prod)

    __rmul__ = __mul__

    def exact_div(self, n: int) -> "CyclotomicInt":
        """Divide by an integer; the power basis is integral, so every
        coordinate must be divisible."""
        out = []
        for x in self.coeffs:
            q, r = divmod(x, n)
            if r:
                raise ArithmeticError(f"{self!r} is not divisible by {n}")
            out.append(q)
        return _raw(self.p, self.M, tuple(out))

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.from_int(self.p, self.M, other)
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return (self.p, self.M, self.coeffs) == (other.p, other.M, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.M, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def galois(self, u: int) -> "CyclotomicInt":
        """Image under zeta -> zeta^u (u prime to p)."""
        if u % self.p == 0:
            raise ValueError("u must be prime to p")
        order = self.p**self.M
        out = [0] * (order)
        for i, x in enumerate(self.coeffs):
            out[i * u % order] += x
        return CyclotomicInt(self.p, self.M, out)

    def __repr__(self):
        terms = [f"{c}*z^{i}" if i else str(c) for i, c in enumerate(self.coeffs) if c]
        return f"CyclotomicInt(p={self.p}, M={self.M}: {' + '.join(terms) or '0'})"


def _raw(p, M, coeffs):
    x = CyclotomicInt.__new__(CyclotomicInt)
    x.p, x.M, x.coeffs = p, M, coeffs
    return x


def _reduce(p, M, coeffs):
    """Reduce a coefficient list modulo Phi_{p^M}: first fold t^{p^M} = 1, then
    eliminate t^k for k >= phi(p^M) using t^{(p-1)s} = -sum_{i<p-1} t^{i s}."""
    order = p**M
    step = p ** (M - 1)
    n = (p - 1) * step
    folded = [0] * order
    for i, c in enumerate(coeffs):
        folded[i % order] += int(c)
    for k in range(order - 1, n - 1, -1):
        c = folded[k]
        if c:
            base = k - n
            for i in range(p - 1):
                folded[base + i * step] -= c
            folded[k] = 0
    return tuple(folded[:n])


def character_value(c: int, p: int, M: int) -> CyclotomicInt:
    """zeta^c: the value at c of the fixed character Z_p -> mu_{p^M}."""
    order = p**M
    coeffs = [0] * order
    coeffs[c % order] = 1
    return CyclotomicInt(p, M, coeffs)


def from_counts(counts, p: int, M: int) -> CyclotomicInt:
    """sum_c counts[c] * zeta^c."""
    return CyclotomicInt(p, M, [int(x) for x in counts])


def resultant(f, g) -> int:
    """Exact resultant of two integer polynomials (coefficient lists, low degree
    first) by the Euclidean algorithm over Q."""
    f = [Fraction(x) for x in f]
    g = [Fraction(x) for x in g]
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    if not f and not g:
        raise ValueError("resultant of two zero polynomials")
    if not f or not g:
        return 0
    res = Fraction(1)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return _as_int(res * g[0] ** df)
        if df == 0:
            return _as_int(res * f[0] ** dg)
        if df < dg:
            f, g = g, f
            if (df * dg) % 2:
                res = -res
            continue
        # Res(f, g) = (-1)^{df dg} lc(g)^{df - dr} Res(g, r) with r = f mod g
        r = list(f)
        lead = g[-1]
        while len(r) >= len(g):
            c = r[-1] / lead
            shift = len(r) - len(g)
            for j, y in enumerate(g):
                r[shift + j] -= c * y
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        if not r:
            return 0
        dr = len(r) - 1
        res *= lead ** (df - dr)
        if (df * dg) % 2:
            res = -res
        f, g = g, r


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError("resultant of integer polynomials must be an integer")
    return x.numerator


def norm(x: CyclotomicInt) -> int:
    return resultant(cyclotomic_poly(x.p, x.M), x.coeffs)


def cyclo_valuation(x: CyclotomicInt) -> Valuation:
    """p-adic valuation normalized by v(p) = 1."""
    if x.is_zero():
        return INF
    require_prime(x.p)
    return Fraction(vp_int(norm(x), x.p)) / x.degree_bound
