from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wedgelab.arith import euler_phi, factorize
from wedgelab.characters import (
    DirichletCharacter,
    TwistedCharacter,
    all_characters,
    chi_tN,
    kronecker,
)
from wedgelab.cyclotomic import CycNumber


# -- oracles ------------------------------------------------------------------

def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker_oracle(a, n):
    """Kronecker symbol by its definition over the factorization of n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    for p, e in factorize(n) if n > 1 else ():
        if p == 2:
            if a % 2 == 0:
                v = 0
            else:
                v = 1 if a % 8 in (1, 7) else -1
        else:
            v = legendre(a, p)
        result *= v**e
    return result


# -- tests --------------------------------------------------------------------

@given(st.integers(-500, 500), st.integers(-500, 500))
@settings(max_examples=500)
def test_kronecker_matches_definition(a, n):
    assert kronecker(a, n) == kronecker_oracle(a, n)


@pytest.mark.parametrize("N", range(1, 41))
def test_character_group_size_and_orthogonality(N):
    chars = all_characters(N)
    assert len(chars) == euler_phi(N)
    # sum over characters of chi(n) is phi(N) at n = 1 and 0 elsewhere on units
    for n in range(1, N + 1):
        if gcd(n, N) != 1:
            continue
        s = CycNumber.zero()
        for c in chars:
            s = s + c(n)
        assert s == CycNumber.rational(euler_phi(N) if n % N == 1 % N else 0)


@pytest.mark.parametrize("N", [3, 8, 15, 28, 35])
def test_multiplicative_and_periodic(N):
    for chi in all_characters(N):
        for m in range(1, 2 * N):
            for n in range(1, 2 * N, 3):
                assert chi(m * n) == chi(m) * chi(n)
            assert chi(m) == chi(m + N)
        assert chi(1) == CycNumber.one()


def test_from_kronecker():
    chi = DirichletCharacter.from_kronecker(-4)
    assert chi.modulus == 4
    assert [chi(n).to_rational() for n in range(1, 8)] == [1, 0, -1, 0, 1, 0, -1]
    assert not chi.is_even()
    chi = DirichletCharacter.from_kronecker(5)
    assert [chi(n).to_rational() for n in range(1, 6)] == [kronecker_oracle(5, n) for n in range(1, 6)]


def test_json_round_trip():
    chi = all_characters(28)[5]
    back = DirichletCharacter.from_json(chi.to_json())
    assert back == chi
    assert DirichletCharacter.from_json({"kronecker": -3}) == DirichletCharacter.from_kronecker(-3)


def test_order_and_powers():
    for chi in all_characters(21):
        r = chi.order()
        assert (chi**r).is_principal()
        assert r == 1 or not (chi ** (r // 2 if r % 2 == 0 else 1)).is_principal() or r == 1


@given(st.integers(1, 6), st.sampled_from([1, 2, 3, 5, 6, 7]), st.integers(0, 5))
@settings(max_examples=50, deadline=None)
def test_chi_tN_pointwise(Nq, t, k):
    N = 4 * Nq
    for chi in all_characters(N)[:4]:
        tw = chi_tN(chi, k, N, t)
        D = (-1) ** k * N * N * t
        for n in range(1, 80):
            want = chi(n) * kronecker_oracle(D, n)
            assert tw(n) == want


def test_chi_tN_level_power_switch():
    chi = DirichletCharacter.principal(12)
    two = chi_tN(chi, 1, 12, 1, level_power=2)
    one = chi_tN(chi, 1, 12, 1, level_power=1)
    assert isinstance(two, TwistedCharacter)
    # (-144/n) vs (-12/n) on n coprime to 12 differ at n = 5
    assert two(5) != one(5)


def test_chi_tN_rejects_bad_t():
    with pytest.raises(ValueError):
        chi_tN(DirichletCharacter.principal(4), 1, 4, 4)
    with pytest.raises(ValueError):
        chi_tN(DirichletCharacter.principal(4), 1, 4, 0)


def test_generators_must_be_basis():
    with pytest.raises(ValueError):
        DirichletCharacter(8, [(3, 1)], 2)
