"""Exact integer/rational helpers and p-adic valuations of rationals.

Valuations are either a :class:`fractions.Fraction` or the singleton
:data:`INF`, which stands for the valuation of zero.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Union


class _Infinity:
    """Valuation of zero: absorbing for addition, larger than every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("dworkslopes.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True


INF = _Infinity()

Valuation = Union[Fraction, _Infinity]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


def falling_factorial(x: int, n: int) -> int:
    """Return ``x (x-1) ... (x-n+1)``; the empty product 1 when ``n == 0``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1
    for i in range(n):
        out *= x - i
    return out


@lru_cache(maxsize=None)
def reciprocal_factorial(n: int) -> Fraction:
    """``1/n!`` for ``n >= 0`` and exactly zero for negative ``n``."""
    if n < 0:
        return Fraction(0)
    return Fraction(1, factorial(n))


def vp_int(n: int, p: int) -> Valuation:
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return Fraction(v)


def vp_rational(x, p: int) -> Valuation:
    """Exponent of ``p`` in the rational ``x``; ``INF`` for zero."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def rational_mod(x, modulus: int, p: int) -> int:
    """Image of a p-integral rational in ``Z/modulus`` (``modulus`` a power of ``p``)."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, modulus) % modulus
