import itertools

import pytest
from hypothesis import given, settings, strategies as st

from dworkslopes.finite_rings import (
    ZqElt,
    _poly_gcd_p,
    _x_pow_mod,
    embed,
    fq_trace,
    frobenius_lift,
    is_irreducible,
    make_extension,
    teichmuller_lift,
    trace_to_base,
)


def _brute_irreducible(modulus, p):
    """No root-free factorization check: search all monic factors of degree <= n/2."""
    n = len(modulus) - 1
    for k in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            f = list(tail) + [1]
            # polynomial remainder of modulus by f
            r = list(modulus)
            while len(r) >= len(f):
                c = r[-1]
                shift = len(r) - len(f)
                for j, y in enumerate(f):
                    r[shift + j] = (r[shift + j] - c * y) % p
                r.pop()
            if not any(r):
                return False
    return True


def test_canonical_moduli():
    assert make_extension(5, 1).modulus == (0, 1)
    assert make_extension(5, 2).modulus == (2, 0, 1)
    assert make_extension(7, 4).modulus == (1, 1, 0, 0, 1)


def test_quadratic_modulus_is_first_irreducible():
    # scan order: constant term fastest, then the linear term
    first = None
    for b in range(5):
        for c in range(5):
            if _brute_irreducible((c, b, 1), 5):
                first = (c, b, 1)
                break
        if first:
            break
    assert make_extension(5, 2).modulus == first


def test_degree_four_modulus_has_no_small_factor():
    G = list(make_extension(7, 4).modulus)
    for k in (1, 2):
        xp = list(_x_pow_mod(7**k, G, 7))
        xp[1] = (xp[1] - 1) % 7
        assert len(_poly_gcd_p(G, xp, 7)) == 1
    assert is_irreducible(tuple(G), 7)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (5, 2), (5, 3), (7, 2)])
def test_irreducibility_agrees_with_factor_search(p, n):
    for tail in itertools.product(range(p), repeat=n):
        mod = tuple(tail) + (1,)
        assert is_irreducible(mod, p) == _brute_irreducible(mod, p)


def test_field_axioms_f25():
    F = make_extension(5, 2)
    els = list(F.elements())
    assert len(els) == 25
    for x in els:
        if not x.is_zero():
            assert x * x.inverse() == F.one()
            assert x ** 24 == F.one()
    g = F.gen()
    assert g * g == F.element((3,))  # t^2 = -2


def test_rank_roundtrip():
    F = make_extension(3, 3)
    assert [F.from_rank(r).rank for r in range(27)] == list(range(27))


def test_teichmuller_examples():
    F = make_extension(5, 1)
    assert teichmuller_lift(F.element((2,)), 2).coeffs == (7,)
    assert pow(7, 4, 25) == 1
    F2 = make_extension(5, 2)
    assert teichmuller_lift(F2.one(), 4).coeffs == (1, 0)
    assert teichmuller_lift(F2.zero(), 4).coeffs == (0, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 24), st.integers(0, 24), st.integers(1, 4))
def test_teichmuller_multiplicative(i, j, N):
    F = make_extension(5, 2)
    x, y = F.from_rank(i), F.from_rank(j)
    lhs = teichmuller_lift(x * y, N)
    rhs = teichmuller_lift(x, N) * teichmuller_lift(y, N)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 26), st.integers(1, 3))
def test_teichmuller_fixed_by_q_power(r, N):
    F = make_extension(3, 3)
    y = teichmuller_lift(F.from_rank(r), N)
    assert y ** 27 == y
    assert y.residue() == F.from_rank(r)


def test_trace_examples():
    F = make_extension(5, 3)
    N = 3
    one = ZqElt.make(F, N, (1,))
    assert trace_to_base(one) == 3
    assert trace_to_base(ZqElt.make(F, N, (7,))) == 21
    g = ZqElt.make(F, N, (0, 1))
    assert trace_to_base(g) == (-F.modulus[-2]) % 125


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 124), min_size=3, max_size=3))
def test_trace_galois_invariant(coeffs):
    F = make_extension(5, 3)
    y = ZqElt.make(F, 3, coeffs)
    assert trace_to_base(frobenius_lift(y)) == trace_to_base(y)


def test_frobenius_fixes_base_and_has_order_n():
    F1 = make_extension(7, 1)
    y = ZqElt.make(F1, 3, (100,))
    assert frobenius_lift(y) == y
    F = make_extension(5, 2)
    for coeffs in [(3, 11), (24, 1), (0, 7)]:
        z = ZqElt.make(F, 3, coeffs)
        assert frobenius_lift(frobenius_lift(z)) == z


def test_frobenius_on_teichmuller_is_pth_power():
    F = make_extension(5, 2)
    for r in range(1, 25):
        x = F.from_rank(r)
        assert frobenius_lift(teichmuller_lift(x, 2)) == teichmuller_lift(x**5, 2)


def test_frobenius_is_ring_map():
    F = make_extension(3, 3)
    x = ZqElt.make(F, 4, (5, 17, 40))
    y = ZqElt.make(F, 4, (2, 70, 9))
    assert frobenius_lift(x * y) == frobenius_lift(x) * frobenius_lift(y)
    assert frobenius_lift(x + y) == frobenius_lift(x) + frobenius_lift(y)


def test_embedding_is_homomorphism():
    small, big = make_extension(5, 2), make_extension(5, 4)
    els = [small.from_rank(r) for r in range(0, 25, 3)]
    for x in els:
        for y in els:
            assert embed(x * y, big) == embed(x, big) * embed(y, big)
            assert embed(x + y, big) == embed(x, big) + embed(y, big)
    # the image of F_25 is fixed by x -> x^25
    for x in els:
        assert embed(x, big) ** 25 == embed(x, big)


def test_prime_field_embedding():
    F5, big = make_extension(5, 1), make_extension(5, 3)
    assert embed(F5.element((3,)), big) == big.element((3,))


def test_fq_trace_linear_and_surjective():
    F = make_extension(3, 2)
    traces = [fq_trace(x) for x in F.elements()]
    assert sorted(set(traces)) == [0, 1, 2]
    assert all(traces.count(c) == 3 for c in range(3))
