from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lgcy.cyclotomic import CycNum
from lgcy.nilpotent import ExpPoly, LamZPoly, NilPoly, nil_exp, todd_series


def test_invert_one_plus_h():
    p = NilPoly(3, [1, 1])
    assert p.invert() == NilPoly(3, [1, -1, 1])


def test_invert_identity():
    p = NilPoly(5, [1])
    assert p.invert() == p


def test_invert_two_minus_h():
    p = NilPoly(2, [2, -1])
    inv = p.invert()
    assert inv == NilPoly(2, [Fraction(1, 2), Fraction(1, 4)])
    assert p * inv == NilPoly.const(2, 1)


def test_nilpotent_only_unit_raises():
    with pytest.raises(ZeroDivisionError, match="nilpotent-only unit"):
        NilPoly(3, [0, 1]).invert()


def test_h_cap_truncation():
    h = NilPoly.h_power(3, 1)
    assert (h * h * h).is_zero()
    assert not (h * h).is_zero()


@given(st.integers(1, 6), st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_inversion_roundtrip(cap, coeffs):
    coeffs = [Fraction(c) for c in coeffs]
    if coeffs[0] == 0:
        coeffs[0] = Fraction(1)
    p = NilPoly(cap, coeffs)
    assert p * p.invert() == NilPoly.const(cap, 1)


def test_nil_exp_cyclotomic_scalar():
    xi = CycNum.root_of_unity(5, 1)
    e = nil_exp(3, xi)
    assert e.coeffs[0] == 1
    assert e.coeffs[1] == xi
    assert e.coeffs[2] == xi * xi * Fraction(1, 2)


def test_todd_series_bernoulli():
    # (-5H)/(1 - e^(5H)) = 1 - (5/2)H + (25/12)H^2 - ...
    t = todd_series(4, -5)
    assert t.coeffs[:3] == [Fraction(1), Fraction(-5, 2), Fraction(25, 12)]
    assert t.coeffs[3] == 0  # odd Bernoulli vanishes beyond B_1


def test_exppoly_arithmetic_and_equality():
    cap = 3
    a = ExpPoly(cap, {1: nil_exp(cap, 1)})
    b = ExpPoly(cap, {2: nil_exp(cap, 2)})
    assert a * a == ExpPoly(cap, {2: nil_exp(cap, 1) * nil_exp(cap, 1)})
    assert (a * a) == ExpPoly(cap, {2: nil_exp(cap, 2)})  # e^H e^H = e^2H
    assert a != b


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4))
def test_exppoly_vandermonde_separation(pairs):
    """Equality iff evaluation at enough distinct rational u = e^lam agrees."""
    cap = 2
    terms = {}
    for k, c in pairs:
        p = NilPoly(cap, [Fraction(c), Fraction(c, 2)])
        terms[k] = terms.get(k, NilPoly(cap)) + p
    a = ExpPoly(cap, terms)
    span = max((abs(k) for k in a.terms), default=0)
    npoints = cap + 2 * span + 1
    points = [Fraction(i + 1) for i in range(npoints)]
    vanishes = all(a.eval_u(u).is_zero() for u in points)
    assert vanishes == a.is_zero()


def test_lamzpoly_degrees_and_eval():
    cap = 2
    p = LamZPoly(cap, {(1, 0): NilPoly.const(cap, Fraction(2)),
                       (0, 1): NilPoly.h_power(cap, 1, Fraction(3))})
    assert p.euler_degrees() == {Fraction(1), Fraction(2)}
    import mpmath
    v = p.eval_numeric(mpmath.mpf(2), mpmath.mpf(1), h=0)
    assert v == 4  # 2*lam at lam=2; the H-term drops at h=0


def test_lamzpoly_shift_and_mul():
    cap = 1
    a = LamZPoly(cap, {(1, 0): NilPoly.const(cap, Fraction(1))})
    b = LamZPoly(cap, {(0, -1): NilPoly.const(cap, Fraction(2))})
    assert (a * b).terms == LamZPoly(cap, {(1, -1): NilPoly.const(cap, Fraction(2))}).terms
    assert a.shift_z(3).euler_degrees() == {Fraction(4)}
