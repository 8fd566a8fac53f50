import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wedgelab.arith import primes_up_to
from wedgelab.cyclotomic import CycNumber
from wedgelab.hecke import (
    Tj_as_polynomial,
    apply_Tj,
    check_twisted_average,
    degeneracy_scan,
    euler_roots,
    generating_residual,
    hecke_eigenvalue,
    operator_discrepancy,
    pj_power_series,
    pj_subsequence,
    power_sum_eigenvalue,
    prime_power_sequence,
    upsilon,
)
from wedgelab.series import PrecisionError


# -- oracles ------------------------------------------------------------------

def tj_oracle(f, p, j, n):
    """Coefficient n of T_j(p) f straight from a(p^j n) + chi^j(p) p^{j(k-1)} a(n / p^j)."""
    v = f.a(p**j * n)
    if n % p**j == 0:
        v = v + f.chi(p) ** j * p ** (j * (f.k - 1)) * f.a(n // p**j)
    return v


def tau_recurrence(p, count):
    """tau(p^m) from the classical Hecke relation, plain integers."""
    from wedgelab.catalog import load_form

    tp = int(load_form("delta", p + 1).a(p).to_rational())
    seq = [1, tp]
    while len(seq) < count:
        seq.append(tp * seq[-1] - p**11 * seq[-2])
    return seq


def ints(xs):
    return [int(x.to_rational()) for x in xs]


# -- operators ----------------------------------------------------------------

@pytest.mark.parametrize("p,j", [(2, 1), (2, 2), (3, 1), (3, 3), (5, 2), (7, 1)])
def test_apply_Tj_matches_oracle(delta, p, j):
    g = apply_Tj(delta, p, j)
    assert g.precision == (delta.precision - 1) // p**j + 1
    for n in range(g.precision):
        assert g.coeff(n) == tj_oracle(delta, p, j, n)


def test_apply_Tj_with_character(eta4_6):
    for p in (3, 5, 7):
        g = apply_Tj(eta4_6, p, 2)
        for n in range(g.precision):
            assert g.coeff(n) == tj_oracle(eta4_6, p, 2, n)


@pytest.mark.parametrize("name", ["delta", "eta11", "eta4_6"])
def test_eigenforms_under_T_p(name, request):
    f = request.getfixturevalue(name)
    for p in primes_up_to(13):
        lam, ok = hecke_eigenvalue(f, p)
        assert ok
        if f.level % p:
            assert lam == f.a(p)


def test_j0_and_j1_routes_agree(delta, eta11):
    for f in (delta, eta11):
        for p in (2, 3, 5):
            for j in (0, 1):
                assert not operator_discrepancy(f, p, j)


@pytest.mark.parametrize("name", ["delta", "eta11", "eta4_6"])
def test_routes_differ_only_off_p_power_multiples(name, request):
    f = request.getfixturevalue(name)
    for p in (2, 3, 5, 7):
        if f.level % p == 0:
            continue
        for j in range(2, 5):
            if p**j >= f.precision:
                continue
            diff = operator_discrepancy(f, p, j)
            assert all(n % p ** (j - 1) for n in diff)


def test_delta_is_not_eigen_for_coefficient_formula_at_j2(delta):
    # T_2(2) by the coefficient formula sends Delta to a non-multiple of Delta
    lam, ok = hecke_eigenvalue(delta, 2, 2, "formula")
    assert int(lam.to_rational()) == -1472 and not ok
    lam, ok = hecke_eigenvalue(delta, 2, 2, "polynomial")
    assert ok and int(lam.to_rational()) == 24**2 - 2 * 2**11


def test_polynomial_eigenvalue_is_power_sum(delta):
    for p in (2, 3, 5):
        for j in range(1, 5):
            if p**j >= delta.precision:
                continue
            lam, ok = hecke_eigenvalue(delta, p, j, "polynomial")
            assert ok
            assert lam == power_sum_eigenvalue(delta.a(p), delta.hecke_norm(p), j)


def test_Tj_precision_errors(delta):
    with pytest.raises(PrecisionError):
        apply_Tj(delta, 2, 11)
    with pytest.raises(ValueError):
        apply_Tj(delta, 4, 1)
    with pytest.raises(ValueError):
        Tj_as_polynomial(2, -1, delta)


# -- p-power sequences --------------------------------------------------------

def test_recurrence_path_matches_integer_oracle(delta):
    assert ints(prime_power_sequence(delta, 2, 25)) == tau_recurrence(2, 25)
    assert ints(prime_power_sequence(delta, 3, 12)) == tau_recurrence(3, 12)


def test_direct_and_recurrence_paths_agree(delta):
    direct = pj_power_series(delta, 2, 1, 11)
    assert direct == prime_power_sequence(delta, 2, 11)
    with pytest.raises(PrecisionError):
        pj_power_series(delta, 2, 1, 12)


def test_tau_multiplicativity_oracle(delta):
    assert delta.a(4) == delta.a(2) ** 2 - 2**11
    assert delta.a(6) == delta.a(2) * delta.a(3)
    assert delta.a(9) == delta.a(3) ** 2 - 3**11


def test_generating_identity_j1(delta, eta11, eta4_6):
    for f in (delta, eta11, eta4_6):
        for p in (2, 3):
            seq = pj_subsequence(f, p, 1, 21)
            res = generating_residual(seq, f.a(p), p, 1, f.k, f.chi(p))
            assert all(r.is_zero() for r in res)


@pytest.mark.parametrize("j", [2, 3, 5])
def test_generating_identity_with_power_sum_and_numerator(delta, j):
    # sum a(p^{jn}) X^n = (1 + c a(p^{j-2}) X) / (1 - (alpha^j + beta^j) X + c^j X^2)
    p = 2
    c = delta.hecke_norm(p)
    seq = pj_subsequence(delta, p, j, 21)
    s = power_sum_eigenvalue(delta.a(p), c, j)
    res = generating_residual(seq, s, p, j, 12, delta.chi(p))
    assert res[1] == c * prime_power_sequence(delta, p, j - 1)[j - 2]
    assert all(r.is_zero() for r in res[2:])


# -- local factors ------------------------------------------------------------

def test_euler_roots_delta_deligne(delta):
    for p in primes_up_to(100):
        ef = euler_roots(delta.a(p), 12, delta.chi(p), p)
        assert ef.moduli_match
        assert abs(ef.alpha + ef.beta - complex(delta.a(p).embed())) < 1e-9 * p**5.5
        assert ef.alpha.imag >= 0


def test_euler_roots_linear_factor(eta4_6):
    ef = euler_roots(eta4_6.a(2), 3, eta4_6.chi(2), 2)
    assert ef.beta is None and ef.degree == 1


@pytest.mark.parametrize("p,j", [(2, 1), (2, 3), (3, 5), (5, 3)])
def test_twisted_average(delta, p, j):
    ef = euler_roots(delta.a(p), 12, delta.chi(p), p)
    terms = 60 // j
    off, rel = check_twisted_average(ef, j, terms, pj_subsequence(delta, p, j, terms))
    assert off < 1e-9 and rel < 1e-9


def test_degeneracy_scan_delta_empty(delta):
    for p in primes_up_to(100):
        ef = euler_roots(delta.a(p), 12, delta.chi(p), p)
        for j in (1, 3, 5, 7, 9):
            assert degeneracy_scan(ef, j).hits == []


def test_degeneracy_double_root():
    ef = euler_roots(CycNumber.rational(2 * 3), 3, 1, 3)
    assert degeneracy_scan(ef, 1).hits == [0]


def test_upsilon_vanishes_for_even_j_and_odd_character():
    chi = CycNumber.rational(-1)
    assert upsilon(chi, 2, 0).is_zero() and upsilon(chi, 2, 1).is_zero()
    assert not upsilon(chi, 3, 1).is_zero()
    assert not upsilon(CycNumber.one(), 2, 0).is_zero()


@given(st.integers(2, 50), st.integers(1, 12))
@settings(max_examples=50)
def test_power_sum_matches_numeric_roots(ap, k):
    p = 5
    ap = min(ap, int(2 * p ** ((k - 1) / 2)))
    ef = euler_roots(CycNumber.rational(ap), k, 1, p)
    for j in range(1, 6):
        s = power_sum_eigenvalue(ap, p ** (k - 1), j)
        assert math.isclose(float(s.to_rational()), (ef.alpha**j + ef.beta**j).real, rel_tol=1e-9, abs_tol=1e-6 * p ** (j * (k - 1) / 2))
