"""Cyclotomic field arithmetic: canonical form, field laws, square roots."""

import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from spininv.cyclotomic import (
    Cyclotomic,
    IncompatibleOrder,
    NotASquare,
    cyc_arith,
    cyclotomic_poly,
    format_scalar,
    numeric,
    parse_scalar,
    reduce_order,
    root_of_unity,
    sqrt_in_field,
    totient,
    zeta,
)

ORDERS = [1, 3, 4, 5, 8, 12, 15, 24]


def element(m):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.lists(coeff, min_size=totient(m), max_size=totient(m)).map(lambda c: Cyclotomic(m, c))


any_order = st.sampled_from(ORDERS).flatmap(element)


def close(a, z, tol=1e-9):
    return abs(numeric(a) - z) < tol


@pytest.mark.parametrize("m", range(1, 40))
def test_cyclotomic_poly_matches_sympy(m):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(m)) == [int(c) for c in expected]
    assert totient(m) == sympy.totient(m)


@pytest.mark.parametrize("m", [3, 5, 7, 8, 9, 12])
def test_sum_of_primitive_roots_is_mobius(m):
    s = sum((zeta(m, k) for k in range(m) if math.gcd(k, m) == 1), Cyclotomic.rational(0, m))
    assert s == int(sympy.mobius(m))


def test_zeta_powers_wrap():
    assert zeta(12) ** 12 == 1
    assert zeta(12, 5) * zeta(12, 7) == 1
    assert zeta(4) ** 2 == -1
    assert zeta(3) + zeta(3, 2) == -1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(lambda m: st.tuples(element(m), element(m), element(m))))
def test_field_laws(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@settings(max_examples=60, deadline=None)
@given(any_order, any_order)
def test_arith_agrees_with_complex(a, b):
    za, zb = numeric(a), numeric(b)
    assert close(a + b, za + zb)
    assert close(a * b, za * zb)
    assert close(a.conjugate(), za.conjugate())


@settings(max_examples=40, deadline=None)
@given(any_order)
def test_promote_preserves_value(a):
    big = a.promote(a.m * 6)
    assert big == a
    assert close(big, numeric(a))
    assert reduce_order(big) == a
    assert reduce_order(big).m <= a.m or a.m % 4 == 2


@settings(max_examples=40, deadline=None)
@given(any_order)
def test_text_roundtrip(a):
    assert parse_scalar(format_scalar(a)) == a


def test_hash_ignores_order():
    a = zeta(3) + Fraction(1, 2)
    assert hash(a) == hash(a.promote(12))
    assert len({a, a.promote(12), a.promote(15)}) == 1


def test_incompatible_order():
    with pytest.raises(IncompatibleOrder):
        cyc_arith(zeta(3), zeta(4), "add", auto_promote=False)
    assert cyc_arith(zeta(3), zeta(4), "add").m == 12
    with pytest.raises(IncompatibleOrder):
        zeta(4).promote(6)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        zeta(5) / Cyclotomic.rational(0, 5)


@pytest.mark.parametrize("q", [2, 3, 5, 6, 7, 10, Fraction(1, 3), Fraction(8, 5), -1, -2, -3, -Fraction(7, 2)])
def test_sqrt_of_rationals(q):
    r = sqrt_in_field(q)
    assert r * r == q
    z = numeric(r)
    # chosen root lies in the half plane arg in [0, pi)
    assert z.imag > -1e-12 and not (abs(z.imag) < 1e-12 and z.real < 0)
    assert abs(z - cmath.sqrt(complex(q))) < 1e-9


def test_gauss_sum_sqrt_small_orders():
    z5 = zeta(5)
    assert sqrt_in_field(5) == 1 + 2 * (z5 + z5**4)
    assert sqrt_in_field(4) == 2
    assert reduce_order(sqrt_in_field(-3)).m == 3
    assert reduce_order(sqrt_in_field(2)).m == 8
    w = sqrt_in_field(zeta(3))
    assert w * w == zeta(3) and w in (zeta(6, 1), -zeta(6, 1))


@pytest.mark.parametrize("m,k", [(3, 1), (5, 2), (8, 3), (12, 7), (7, 3)])
def test_sqrt_of_roots_of_unity(m, k):
    v = zeta(m, k)
    r = sqrt_in_field(v)
    assert r * r == v


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS), st.integers(0, 23), st.fractions(min_value=-9, max_value=9, max_denominator=7))
def test_sqrt_of_scaled_roots_of_unity(m, k, q):
    v = zeta(m, k) * q
    r = sqrt_in_field(v)
    assert r * r == v


@settings(max_examples=40, deadline=None)
@given(any_order)
def test_sqrt_contract(a):
    # either a correct root or NotASquare; never a wrong answer
    v = a * a
    try:
        r = sqrt_in_field(v)
    except NotASquare:
        return
    assert r * r == v


def test_non_square_raises():
    with pytest.raises(NotASquare):
        sqrt_in_field(1 + zeta(5))


@pytest.mark.parametrize("q", [Fraction(1, 3), Fraction(5, 12), Fraction(-1, 8), Fraction(7, 4)])
def test_root_of_unity(q):
    assert close(root_of_unity(q), cmath.exp(2j * math.pi * q))
    assert root_of_unity(q).m == (q % 1).denominator


def test_numeric_high_precision():
    a = sqrt_in_field(2)
    assert abs(numeric(a, 30) - math.sqrt(2)) < 1e-15


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ORDERS).flatmap(lambda m: st.tuples(element(m), element(m))))
def test_conjugate_is_involutive_homomorphism(ab):
    a, b = ab
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert close(a * a.conjugate(), abs(numeric(a)) ** 2)
    assert Cyclotomic.rational(Fraction(3, 2), a.m).conjugate() == Fraction(3, 2)


def test_conjugate_examples():
    assert (1 + 2 * zeta(3)).conjugate() == 1 + 2 * zeta(3, 2)
    assert (zeta(8) * zeta(8).conjugate()) == 1
