"""Batched arithmetic in (Z/m)[t]/(G) on numpy arrays of shape (count, n).

Moduli here are small (at most a few thousand), so int64 never overflows:
products are reduced after every multiply-accumulate row.
"""

from __future__ import annotations

import numpy as np


def ranks_to_coeffs(ranks: np.ndarray, p: int, n: int) -> np.ndarray:
    """Base-p digits of ``ranks``; digit j is the coefficient of t^j."""
    out = np.empty((ranks.shape[0], n), dtype=np.int64)
    r = ranks.astype(np.int64, copy=True)
    for j in range(n):
        out[:, j] = r % p
        r //= p
    return out


def mulmod(a: np.ndarray, b: np.ndarray, modulus: tuple, m: int) -> np.ndarray:
    """Row-wise product of two batches of residues modulo (m, G)."""
    n = a.shape[1]
    prod = np.zeros((a.shape[0], 2 * n - 1), dtype=np.int64)
    for i in range(n):
        ai = a[:, i : i + 1]
        prod[:, i : i + n] += ai * b
        prod[:, i : i + n] %= m
    return reduce_poly(prod, modulus, m)


def reduce_poly(prod: np.ndarray, modulus: tuple, m: int) -> np.ndarray:
    n = len(modulus) - 1
    low = [(-c) % m for c in modulus[:n]]  # t^n = -(g_0 + ... + g_{n-1} t^{n-1})
    for k in range(prod.shape[1] - 1, n - 1, -1):
        top = prod[:, k]
        if not top.any():
            continue
        for j, c in enumerate(low):
            if c:
                prod[:, k - n + j] = (prod[:, k - n + j] + top * c) % m
        prod[:, k] = 0
    return prod[:, :n] % m


def powmod(a: np.ndarray, e: int, modulus: tuple, m: int) -> np.ndarray:
    result = np.zeros_like(a)
    result[:, 0] = 1 % m
    base = a % m
    while e:
        if e & 1:
            result = mulmod(result, base, modulus, m)
        e >>= 1
        if e:
            base = mulmod(base, base, modulus, m)
    return result


def scale(a: np.ndarray, c: tuple, modulus: tuple, m: int) -> np.ndarray:
    """Multiply every row by the fixed residue ``c`` (a coefficient tuple)."""
    b = np.broadcast_to(np.asarray(c, dtype=np.int64), a.shape)
    return mulmod(a, b, modulus, m)
