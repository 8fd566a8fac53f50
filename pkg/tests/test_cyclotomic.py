import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wedgelab.arith import mobius_sieve
from wedgelab.cyclotomic import CycNumber, as_cyc, cyclotomic_polynomial


# -- oracles ------------------------------------------------------------------

def embed_oracle(order, coeffs):
    z = cmath.exp(2j * cmath.pi / order)
    return sum(float(c) * z**i for i, c in enumerate(coeffs))


def poly_eval(coeffs, x):
    return sum(c * x**i for i, c in enumerate(coeffs))


ORDERS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 24]

cyc = st.sampled_from(ORDERS).flatmap(
    lambda m: st.lists(st.integers(-20, 20), min_size=m, max_size=m).map(lambda v: CycNumber(m, v))
)


# -- tests --------------------------------------------------------------------

@pytest.mark.parametrize("m", ORDERS)
def test_cyclotomic_polynomial_vanishes_at_primitive_root(m):
    phi = cyclotomic_polynomial(m)
    assert abs(poly_eval(phi, cmath.exp(2j * cmath.pi / m))) < 1e-9
    assert phi[-1] == 1


def test_known_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("m", ORDERS)
def test_sum_of_primitive_roots_is_mobius(m):
    # Ramanujan sum c_m(1) = mu(m)
    from math import gcd

    s = CycNumber.zero()
    for e in range(m):
        if gcd(e, m) == 1:
            s = s + CycNumber.root_of_unity(m, e)
    assert s.is_rational()
    assert s.to_rational() == mobius_sieve(m)[m]


@given(cyc, cyc)
@settings(max_examples=200)
def test_ring_operations_match_embedding(a, b):
    za, zb = embed_oracle(a.order, a.coeffs), embed_oracle(b.order, b.coeffs)
    assert abs((a + b).embed() - (za + zb)) < 1e-7 * (1 + abs(za) + abs(zb))
    assert abs((a * b).embed() - za * zb) < 1e-7 * (1 + abs(za * zb))
    assert abs((a - b).embed() - (za - zb)) < 1e-7 * (1 + abs(za) + abs(zb))


@given(cyc, cyc, cyc)
@settings(max_examples=100)
def test_ring_axioms_exact(a, b, c):
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == CycNumber.zero()


@given(cyc)
@settings(max_examples=200)
def test_conjugate_and_signs(a):
    z = a.embed()
    assert abs(a.conjugate().embed() - z.conjugate()) < 1e-7 * (1 + abs(z))
    if abs(z.real) > 1e-6:
        assert a.real_sign() == (1 if z.real > 0 else -1)
    if abs(z.imag) > 1e-6:
        assert a.imag_sign() == (1 if z.imag > 0 else -1)
    assert (a * a.conjugate()).imag_sign() == 0


def test_exact_zero_sign_on_cancelling_sum():
    # zeta_5 + zeta_5^4 is real: 2 cos(2 pi / 5)
    x = CycNumber.root_of_unity(5, 1) + CycNumber.root_of_unity(5, 4)
    assert x.imag_sign() == 0
    assert x.real_sign() == 1


@given(cyc, st.integers(1, 4))
@settings(max_examples=100)
def test_lift_preserves_value(a, factor):
    assert a.lift(a.order * factor) == a


def test_root_of_unity_power_cycle():
    z = CycNumber.root_of_unity(12, 1)
    assert z**12 == CycNumber.one()
    assert z**6 == CycNumber.rational(-1)
    assert z.rotate(11) == CycNumber.one()


def test_rational_round_trip_and_division():
    x = CycNumber.rational(Fraction(3, 4))
    assert x.to_rational() == Fraction(3, 4)
    assert (x / 3).to_rational() == Fraction(1, 4)
    assert as_cyc(5) == CycNumber.rational(5)
    assert CycNumber.root_of_unity(3).is_rational() is False


def test_to_rational_rejects_irrational():
    with pytest.raises(ValueError):
        CycNumber.root_of_unity(4).to_rational()


def test_unhashable():
    with pytest.raises(TypeError):
        hash(CycNumber.one())
