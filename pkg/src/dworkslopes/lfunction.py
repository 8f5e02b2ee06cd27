"""Brute-force exponential sums S*_m(f, chi) and the L-polynomial L*(f, chi, t)
for f(x) = x^d + a x^{d-1} over F_q, q = p^h.

The character chi of order p^M sends c in Z_p to zeta^{c mod p^M}.  S*_m is a
sum over the nonzero elements of F_{q^m} of chi(Tr(f^(w(x)))), w the
Teichmuller lift; it is accumulated as a histogram of traces mod p^M, which
makes any partition of the enumeration give identical results.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _vec
from .cyclotomic import CyclotomicInt, cyclo_valuation, from_counts
from .exact import require_prime
from .finite_rings import FieldDesc, FqElt, embed, make_extension, teichmuller_lift, trace_vector

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 200_000_000
DEFAULT_CHUNK = 1 << 18


class BudgetExceeded(RuntimeError):
    """The requested field is larger than the enumeration cap."""


class DegreeError(ArithmeticError):
    pass


@dataclass(frozen=True)
class CurveConfig:
    p: int
    h: int
    d: int
    a: FqElt
    M: int = 1

    def __post_init__(self):
        require_prime(self.p)
        if self.h < 1 or self.M < 1:
            raise ValueError("h and M must be positive")
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.d % self.p == 0:
            raise ValueError(f"p = {self.p} divides d = {self.d}")
        if self.a.field != make_extension(self.p, self.h):
            raise ValueError("a must lie in the canonical F_q")
        if self.a.is_zero():
            raise ValueError("a must be nonzero")

    @classmethod
    def make(cls, p, h, d, a, M=1):
        """``a`` is an int (h = 1) or a coefficient sequence in the canonical basis."""
        field = make_extension(p, h)
        coeffs = (a,) if isinstance(a, int) else tuple(a)
        return cls(p, h, d, field.element(coeffs), M)

    @property
    def field(self) -> FieldDesc:
        return self.a.field

    @property
    def q(self) -> int:
        return self.p**self.h

    @property
    def degree(self) -> int:
        """Degree p^{M-1} d of L*(f, chi, t)."""
        return self.p ** (self.M - 1) * self.d

    def cache_key(self, m: int) -> tuple:
        return (self.p, self.h, self.field.modulus, self.d, self.a.coeffs, self.M, m)


@dataclass
class LPolynomial:
    config: Optional[CurveConfig]
    coeffs: list

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def valuations(self, h: int = 1) -> list:
        """q-adic valuations (v(q) = 1) of the coefficients."""
        return [cyclo_valuation(c) / h if not c.is_zero() else cyclo_valuation(c) for c in self.coeffs]


def _histogram_chunk(args):
    p, n, modulus, N, a_hat, d, tr_vec, start, stop = args
    m = p**N
    x = _vec.ranks_to_coeffs(np.arange(start, stop, dtype=np.int64), p, n)
    for _ in range(N - 1):
        # one application of y -> y^Q, Q = p^n
        for _ in range(n):
            x = _vec.powmod(x, p, modulus, m)
    xd1 = _vec.powmod(x, d - 1, modulus, m)
    xd = _vec.mulmod(xd1, x, modulus, m)
    val = (xd + _vec.scale(xd1, a_hat, modulus, m)) % m
    tr = (val @ np.asarray(tr_vec, dtype=np.int64)) % m
    return np.bincount(tr, minlength=m)


def _chunks(total, chunk):
    start = 1
    while start < total:
        stop = min(start + chunk, total)
        yield start, stop
        start = stop


def exp_sum(
    config: CurveConfig,
    m: int,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
    cache=None,
) -> CyclotomicInt:
    """S*_m(f, chi): exhaustive sum over the nonzero elements of F_{q^m}.

    ``cache`` is any object with ``load(key)`` / ``store(key, value)``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    key = config.cache_key(m)
    if cache is not None:
        hit = cache.load(key)
        if hit is not None:
            return hit
    p, N = config.p, config.M
    n = config.h * m
    size = p**n
    if size - 1 > cap:
        raise BudgetExceeded(f"F_{{{p}^{n}}} has {size - 1} nonzero elements, cap is {cap}")
    big = make_extension(p, n)
    a_hat = teichmuller_lift(embed(config.a, big), N).coeffs
    tr_vec = trace_vector(big, N)
    jobs = [
        (p, n, big.modulus, N, a_hat, config.d, tr_vec, start, stop)
        for start, stop in _chunks(size, chunk)
    ]
    logger.info("S_%d over F_%d^%d in %d chunks", m, p, n, len(jobs))
    counts = np.zeros(p**N, dtype=np.int64)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_histogram_chunk, jobs):
                counts += part
    else:
        for job in jobs:
            counts += _histogram_chunk(job)
    value = from_counts(counts.tolist(), p, N)
    if cache is not None:
        cache.store(key, value)
    return value


def l_coefficients(sums) -> list:
    """c_0..c_K of exp(sum_m S_m t^m / m) from S_1..S_K.

    Uses n c_n = sum_{m=1}^n S_m c_{n-m}; each division by n must be exact.
    """
    if not sums:
        raise ValueError("need at least one exponential sum")
    p, M = sums[0].p, sums[0].M
    coeffs = [CyclotomicInt.from_int(p, M, 1)]
    for n in range(1, len(sums) + 1):
        acc = CyclotomicInt(p, M)
        for m in range(1, n + 1):
            acc = acc + sums[m - 1] * coeffs[n - m]
        try:
            coeffs.append(acc.exact_div(n))
        except ArithmeticError as exc:
            raise ArithmeticError(f"L-coefficient c_{n} is not integral") from exc
    return coeffs


def l_from_sums(sums, D: int, config: Optional[CurveConfig] = None) -> LPolynomial:
    """The full L-polynomial of degree D; any extra sums beyond S_D are used to
    confirm that c_{D+1}, c_{D+2}, ... vanish."""
    if len(sums) < D:
        raise ValueError(f"need S_1..S_{D}, got {len(sums)} sums")
    coeffs = l_coefficients(sums)
    for n in range(D + 1, len(coeffs)):
        if not coeffs[n].is_zero():
            raise DegreeError(f"c_{n} = {coeffs[n]!r} is nonzero but the degree is {D}")
    if coeffs[D].is_zero():
        raise DegreeError(f"c_{D} vanishes; degree is below {D}")
    return LPolynomial(config, coeffs[: D + 1])


def partial_l(config: CurveConfig, upto: int, **kwargs) -> list:
    """First ``upto + 1`` coefficients, needing only S_1..S_upto."""
    if upto < 0 or upto > config.degree:
        raise ValueError(f"upto must lie in [0, {config.degree}]")
    if upto == 0:
        return [CyclotomicInt.from_int(config.p, config.M, 1)]
    sums = [exp_sum(config, m, **kwargs) for m in range(1, upto + 1)]
    return l_coefficients(sums)


def compute_l(config: CurveConfig, extra: int = 0, **kwargs) -> LPolynomial:
    """Full L*(f, chi, t); ``extra`` more sums check the degree."""
    D = config.degree
    sums = [exp_sum(config, m, **kwargs) for m in range(1, D + extra + 1)]
    return l_from_sums(sums, D, config)
