"""The ring Z_q[pi]/(pi^{p-1} + p) modulo p^N.

This is Z_q[zeta_p] presented with the uniformizer pi, v(pi) = 1/(p-1).  An
element is a flat tuple of integers mod p^N; entry ``i*h + j`` is the
coefficient of pi^i t^j, where t generates Z_q over Z_p.  Since every element
is known only modulo p^N, valuations at or above N are indistinguishable from
zero; callers decide what is reliable via :meth:`EisensteinRing.reliable`.

Multiplication packs both operands into one big integer (Kronecker
substitution), multiplies once, and unpacks.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil

from .exact import INF, rational_mod, vp_int
from .finite_rings import FieldDesc, frobenius_coeffs, make_extension


class PrecisionError(ArithmeticError):
    """A valuation reached the precision guard band."""


class EisensteinRing:
    def __init__(self, p: int, N: int, field: FieldDesc = None, guard: int = 6):
        self.p = p
        self.N = N
        self.field = field if field is not None else make_extension(p, 1)
        self.h = self.field.degree
        self.guard = guard
        self.e = p - 1
        self.mod = p**N
        self.length = self.e * self.h
        self._stride = 2 * self.h - 1
        bound = self.e * self.h * (self.mod - 1) ** 2
        self._wb = (bound.bit_length() + 8) // 8
        self._nslots = (2 * self.e - 1) * self._stride
        self._zero_slot = bytes(self._wb)
        self._pad = self._zero_slot * (self.h - 1)

    def __repr__(self):
        return f"EisensteinRing(p={self.p}, h={self.h}, N={self.N})"

    # -- construction -------------------------------------------------------

    def element(self, coeffs) -> "EisensteinElt":
        m = self.mod
        c = tuple(int(x) % m for x in coeffs)
        return EisensteinElt(self, c + (0,) * (self.length - len(c)))

    def zero(self):
        return EisensteinElt(self, (0,) * self.length)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        return self.element((n,))

    def from_rational(self, x):
        return self.from_int(rational_mod(Fraction(x), self.mod, self.p))

    def from_zq(self, coeffs):
        """A Z_q element (coefficients in the basis 1, t, ..., t^{h-1})."""
        return self.element(tuple(coeffs)[: self.h])

    def pi(self):
        if self.e == 1:
            return self.from_int(-self.p)
        c = [0] * self.length
        c[self.h] = 1
        return EisensteinElt(self, tuple(c))

    # -- precision ----------------------------------------------------------

    @property
    def horizon(self) -> Fraction:
        """Valuations at or beyond this are not trustworthy."""
        return Fraction(self.N * self.e - self.guard, self.e)

    def reliable(self, v) -> bool:
        return v is not INF and v < self.horizon

    # -- arithmetic kernels -------------------------------------------------

    def _pack(self, c) -> int:
        wb = self._wb
        if self.h == 1:
            return int.from_bytes(b"".join(x.to_bytes(wb, "little") for x in c), "little")
        parts = []
        h = self.h
        for i in range(self.e):
            parts.extend(x.to_bytes(wb, "little") for x in c[i * h : (i + 1) * h])
            if i < self.e - 1:
                parts.append(self._pad)
        return int.from_bytes(b"".join(parts), "little")

    def _mul(self, x, y) -> tuple:
        wb, p, m, e, h = self._wb, self.p, self.mod, self.e, self.h
        z = x._packed_value() * y._packed_value()
        raw = z.to_bytes(self._nslots * wb, "little")
        slots = [int.from_bytes(raw[k * wb : (k + 1) * wb], "little") for k in range(self._nslots)]
        if h == 1:
            out = slots[:e]
            for i in range(e, 2 * e - 1):
                out[i - e] -= p * slots[i]
            return tuple(v % m for v in out)
        stride = self._stride
        G = self.field.modulus
        out = [0] * self.length
        for i in range(2 * e - 1):
            block = slots[i * stride : (i + 1) * stride]
            if not any(block):
                continue
            reduced = _reduce_t(block, G, m, h)
            if i < e:
                for j in range(h):
                    out[i * h + j] += reduced[j]
            else:
                base = (i - e) * h
                for j in range(h):
                    out[base + j] -= p * reduced[j]
        return tuple(v % m for v in out)


def _reduce_t(block, G, m, h):
    block = list(block)
    for k in range(len(block) - 1, h - 1, -1):
        top = block[k] % m
        if top:
            for j in range(h):
                block[k - h + j] -= top * G[j]
        block[k] = 0
    return [v % m for v in block[:h]]


class EisensteinElt:
    __slots__ = ("ring", "c", "_packed")

    def __init__(self, ring: EisensteinRing, c: tuple):
        self.ring = ring
        self.c = c
        self._packed = None

    def _packed_value(self):
        if self._packed is None:
            self._packed = self.ring._pack(self.c)
        return self._packed

    def _coerce(self, other):
        if isinstance(other, EisensteinElt):
            if other.ring is not self.ring:
                raise ValueError("elements of different Eisenstein rings")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return self.ring.from_rational(other)

    def __add__(self, other):
        o = self._coerce(other)
        m = self.ring.mod
        return EisensteinElt(self.ring, tuple((a + b) % m for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        m = self.ring.mod
        return EisensteinElt(self.ring, tuple((-a) % m for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        m = self.ring.mod
        return EisensteinElt(self.ring, tuple((a - b) % m for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            m = self.ring.mod
            return EisensteinElt(self.ring, tuple(a * other % m for a in self.c))
        o = self._coerce(other)
        if not any(self.c) or not any(o.c):
            return self.ring.zero()
        return EisensteinElt(self.ring, self.ring._mul(self, o))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, EisensteinElt):
            return NotImplemented
        return self.ring is other.ring and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def valuation(self):
        """min over pi-digits of i/(p-1) + v_p(coefficient); INF when zero mod p^N."""
        ring = self.ring
        h, e, p = ring.h, ring.e, ring.p
        best = None
        for i in range(e):
            block = self.c[i * h : (i + 1) * h]
            vs = [vp_int(x, p) for x in block if x]
            if vs:
                v = min(vs) + Fraction(i, e)
                if best is None or v < best:
                    best = v
        return INF if best is None else best

    def checked_valuation(self, what: str = "value"):
        v = self.valuation()
        if not self.ring.reliable(v):
            raise PrecisionError(f"{what}: valuation {v} reaches the precision horizon {self.ring.horizon}")
        return v

    def residue_coeffs(self) -> tuple:
        return tuple(x % self.ring.p for x in self.c[: self.ring.h])

    def inverse(self) -> "EisensteinElt":
        ring = self.ring
        res = ring.field.element(self.residue_coeffs())
        if res.is_zero():
            raise ZeroDivisionError("element is not a unit")
        y = ring.from_zq(res.inverse().coeffs)
        for _ in range(ceil((ring.N * ring.e).bit_length()) + 2):
            y = y * (2 - self * y)
        return y

    def frobenius(self) -> "EisensteinElt":
        """Apply the Frobenius lift to the Z_q coefficients; pi is fixed."""
        ring = self.ring
        if ring.h == 1:
            return self
        h = ring.h
        out = []
        for i in range(ring.e):
            out.extend(frobenius_coeffs(ring.field, ring.N, self.c[i * h : (i + 1) * h]))
        return EisensteinElt(ring, tuple(out))

    def __repr__(self):
        return f"EisensteinElt({list(self.c)}, v={self.valuation()})"
