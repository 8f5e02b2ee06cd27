"""Finite fields F_{p^n}, the unramified rings Z_{p^n}/p^N, Teichmuller lifts,
traces to the base and the Frobenius lift.

Elements are value objects over a shared :class:`FieldDesc`.  Coefficient
vectors are in the power basis ``1, g, ..., g^{n-1}`` of the generator ``g``
(the class of ``t`` modulo the canonical modulus), low degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import _vec
from .exact import require_prime


# ---------------------------------------------------------------------------
# polynomial helpers over Z/m (coefficient lists, low degree first)


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a, b, modulus, m):
    """Product of two residues modulo (m, modulus); modulus monic."""
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1) if n else [0]
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, n - 1, -1):
        top = prod[k] % m
        if top:
            for j in range(n):
                prod[k - n + j] -= top * modulus[j]
        prod[k] = 0
    return tuple(c % m for c in prod[:n])


def _poly_divmod_p(a, b, p):
    """Division with remainder in F_p[t]."""
    a = _trim(x % p for x in a)
    b = _trim(x % p for x in b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        a = _trim(a)
    return q, a


def _poly_gcd_p(a, b, p):
    a, b = _trim(x % p for x in a), _trim(x % p for x in b)
    while b:
        _, r = _poly_divmod_p(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _x_pow_mod(e, modulus, p):
    """t^e modulo (p, modulus) by square-and-multiply."""
    n = len(modulus) - 1
    result = (1,) + (0,) * (n - 1)
    base = (0, 1) + (0,) * (n - 2) if n > 1 else ((-modulus[0]) % p,)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, modulus, p)
        e >>= 1
        if e:
            base = poly_mulmod(base, base, modulus, p)
    return result


def is_irreducible(modulus, p) -> bool:
    """Monic ``modulus`` over F_p is irreducible iff gcd(t^{p^k} - t, modulus) = 1
    for every k <= deg/2."""
    n = len(modulus) - 1
    if n <= 0 or modulus[-1] % p != 1:
        return False
    if n == 1:
        return True
    for k in range(1, n // 2 + 1):
        xp = list(_x_pow_mod(p**k, modulus, p))
        xp[1] = (xp[1] - 1) % p
        if len(_poly_gcd_p(list(modulus), xp, p)) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class FieldDesc:
    """F_{p^degree} = F_p[t]/(modulus)."""

    p: int
    degree: int
    modulus: tuple

    @property
    def order(self) -> int:
        return self.p**self.degree

    def element(self, coeffs) -> "FqElt":
        coeffs = tuple(int(c) % self.p for c in coeffs)
        coeffs = coeffs + (0,) * (self.degree - len(coeffs))
        if len(coeffs) != self.degree:
            raise ValueError("too many coefficients")
        return FqElt(self, coeffs)

    def from_rank(self, r: int) -> "FqElt":
        """Element whose coefficients are the base-p digits of ``r``."""
        digits = []
        for _ in range(self.degree):
            r, c = divmod(r, self.p)
            digits.append(c)
        return FqElt(self, tuple(digits))

    def zero(self) -> "FqElt":
        return FqElt(self, (0,) * self.degree)

    def one(self) -> "FqElt":
        return self.element((1,))

    def gen(self) -> "FqElt":
        if self.degree == 1:
            return self.element(((-self.modulus[0]) % self.p,))
        return self.element((0, 1))

    def elements(self):
        for r in range(self.order):
            yield self.from_rank(r)


@lru_cache(maxsize=None)
def make_extension(p: int, degree: int) -> FieldDesc:
    """F_{p^degree} with the first irreducible monic modulus, scanning
    coefficient vectors with the constant term varying fastest."""
    require_prime(p)
    if degree < 1:
        raise ValueError("degree must be positive")
    for low in product(range(p), repeat=degree):
        modulus = tuple(reversed(low)) + (1,)
        if is_irreducible(modulus, p):
            return FieldDesc(p, degree, modulus)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class FqElt:
    field: FieldDesc
    coeffs: tuple

    def _coerce(self, other):
        if isinstance(other, FqElt):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field.element((other,))

    def __add__(self, other):
        o = self._coerce(other)
        p = self.field.p
        return FqElt(self.field, tuple((x + y) % p for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElt(self.field, tuple((-x) % p for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        f = self.field
        return FqElt(f, poly_mulmod(self.coeffs, o.coeffs, f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "FqElt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self ** (self.field.order - 2)

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ValueError("zero has no multiplicative order")
        n = self.field.order - 1
        order = n
        for q in _prime_factors(n):
            while order % q == 0 and (self ** (order // q)) == self.field.one():
                order //= q
        return order

    @property
    def rank(self) -> int:
        return sum(c * self.field.p**j for j, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"FqElt({list(self.coeffs)} mod {self.field.p}, {list(self.field.modulus)})"


def _prime_factors(n):
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class ZqElt:
    """Element of Z_p[t]/(G) modulo p^N, G the lifted canonical modulus."""

    field: FieldDesc
    N: int
    coeffs: tuple

    @property
    def modulus_int(self) -> int:
        return self.field.p**self.N

    @classmethod
    def make(cls, field, N, coeffs):
        m = field.p**N
        coeffs = tuple(int(c) % m for c in coeffs)
        return cls(field, N, coeffs + (0,) * (field.degree - len(coeffs)))

    def _coerce(self, other):
        if isinstance(other, ZqElt):
            if other.field != self.field or other.N != self.N:
                raise ValueError("incompatible unramified rings")
            return other
        return ZqElt.make(self.field, self.N, (other,))

    def __add__(self, other):
        o = self._coerce(other)
        m = self.modulus_int
        return ZqElt(self.field, self.N, tuple((x + y) % m for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        m = self.modulus_int
        return ZqElt(self.field, self.N, tuple((-x) % m for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return ZqElt(
            self.field, self.N, poly_mulmod(self.coeffs, o.coeffs, self.field.modulus, self.modulus_int)
        )

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ZqElt.make(self.field, self.N, (1,)), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def residue(self) -> FqElt:
        return self.field.element(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def inverse(self) -> "ZqElt":
        """Newton iteration y <- y(2 - xy) from the residue-field inverse."""
        r = self.residue()
        y = ZqElt.make(self.field, self.N, r.inverse().coeffs)
        for _ in range(self.N.bit_length() + 1):
            y = y * (2 - self * y)
        return y


# ---------------------------------------------------------------------------
# Teichmuller, trace, Frobenius


def teichmuller_lift(x: FqElt, N: int) -> ZqElt:
    """The unique y = x mod p with y^Q = y mod p^N, Q the size of x's field."""
    if N < 1:
        raise ValueError("precision must be positive")
    y = ZqElt.make(x.field, N, x.coeffs)
    Q = x.field.order
    for _ in range(N):
        nxt = y**Q
        if nxt == y:
            break
        y = nxt
    return y


@lru_cache(maxsize=None)
def trace_vector(field: FieldDesc, N: int) -> tuple:
    """Traces of the basis elements g^i, i < n, in Z/p^N.

    Computed from the regular representation: Tr(g^i) is the sum over j of the
    g^j-coefficient of g^i * g^j.
    """
    n, m = field.degree, field.p**N
    basis = [tuple(1 if k == j else 0 for k in range(n)) for j in range(n)]
    if n == 1:
        return (1 % m,)
    out = []
    for i in range(n):
        out.append(sum(poly_mulmod(basis[i], basis[j], field.modulus, m)[j] for j in range(n)) % m)
    return tuple(out)


def trace_to_base(y: ZqElt) -> int:
    tv = trace_vector(y.field, y.N)
    return sum(c * t for c, t in zip(y.coeffs, tv)) % y.modulus_int


def fq_trace(x: FqElt) -> int:
    tv = trace_vector(x.field, 1)
    return sum(c * t for c, t in zip(x.coeffs, tv)) % x.field.p


@lru_cache(maxsize=None)
def frobenius_generator_image(field: FieldDesc, N: int) -> ZqElt:
    """The root of the lifted modulus congruent to g^p mod p (Hensel/Newton)."""
    g = ZqElt.make(field, N, field.gen().coeffs)
    r = g**field.p
    G = field.modulus
    dG = [j * G[j] for j in range(1, len(G))]

    def horner(coeffs, x):
        acc = ZqElt.make(field, N, (0,))
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    for _ in range(N.bit_length() + 2):
        deriv = horner(dG, r)
        if deriv.residue().is_zero():
            raise ArithmeticError("modulus is not separable mod p; corrupted field descriptor")
        r = r - horner(G, r) * deriv.inverse()
    if not horner(G, r).is_zero():
        raise ArithmeticError("Hensel lift of the Frobenius image did not converge")
    return r


@lru_cache(maxsize=None)
def _frobenius_columns(field: FieldDesc, N: int) -> tuple:
    r = frobenius_generator_image(field, N)
    cols, power = [], ZqElt.make(field, N, (1,))
    for _ in range(field.degree):
        cols.append(power.coeffs)
        power = power * r
    return tuple(cols)


def frobenius_coeffs(field: FieldDesc, N: int, coeffs) -> tuple:
    """Apply the Frobenius lift to a raw coefficient vector mod p^N."""
    cols = _frobenius_columns(field, N)
    m = field.p**N
    out = [0] * field.degree
    for c, col in zip(coeffs, cols):
        if c:
            for k, x in enumerate(col):
                out[k] += c * x
    return tuple(x % m for x in out)


def frobenius_lift(y: ZqElt) -> ZqElt:
    """phi(y), the ring automorphism reducing to x -> x^p."""
    return ZqElt(y.field, y.N, frobenius_coeffs(y.field, y.N, y.coeffs))


# ---------------------------------------------------------------------------
# embedding F_{p^h} into F_{p^n}, h | n


@lru_cache(maxsize=None)
def embedding_root(small: FieldDesc, big: FieldDesc) -> FqElt:
    """A root of ``small.modulus`` inside ``big`` (the image of small's generator).

    Candidates x^e with e = (p^n - 1)/(p^h - 1) land in the subfield; they are
    scanned in rank order of x, so the choice is deterministic.  Any root
    gives a Galois-conjugate embedding, which leaves traces unchanged.
    """
    if small.p != big.p or big.degree % small.degree:
        raise ValueError("no embedding between these fields")
    if small.degree == big.degree and small.modulus == big.modulus:
        return big.gen()
    p, n = big.p, big.degree
    e = (big.order - 1) // (small.order - 1)
    chunk = 4096
    start = 1
    while start < big.order:
        stop = min(start + chunk, big.order)
        xs = _vec.ranks_to_coeffs(np.arange(start, stop), p, n)
        ys = _vec.powmod(xs, e, big.modulus, p)
        acc = np.zeros_like(ys)
        for c in reversed(small.modulus):
            acc = _vec.mulmod(acc, ys, big.modulus, p)
            acc[:, 0] = (acc[:, 0] + c) % p
        hits = np.flatnonzero(~acc.any(axis=1))
        if hits.size:
            return big.element(tuple(int(c) for c in ys[hits[0]]))
        start = stop
    raise AssertionError("subfield root not found")  # pragma: no cover


def embed(x: FqElt, big: FieldDesc) -> FqElt:
    """Image of x under the canonical embedding F_{p^h} -> F_{p^n}."""
    if x.field == big:
        return x
    if x.field.degree == 1:
        return big.element(x.coeffs)
    root = embedding_root(x.field, big)
    acc = big.zero()
    for c in reversed(x.coeffs):
        acc = acc * root + c
    return acc
