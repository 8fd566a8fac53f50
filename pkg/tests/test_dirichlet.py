import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wedgelab.characters import DirichletCharacter
from wedgelab.dirichlet import DirichletSeriesView, L_chi, abscissa_estimate, partial_sum, verify_product_identity
from wedgelab.shimura import HalfIntegralContext, halfintegral_euler_series, lift, synthetic_context


CATALAN = 0.915965594177219015054603514932


def test_partial_sum_small_cases():
    v = DirichletSeriesView(list(range(1, 11)))
    assert partial_sum(v, 0, 10) == 55
    z = partial_sum(DirichletSeriesView([1] * 1000), 2, 1000)
    assert abs(z - math.pi**2 / 6) <= 1 / 1000


@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=200), st.data())
@settings(max_examples=100)
def test_partial_sum_additive(values, data):
    v = DirichletSeriesView(values)
    M = len(values)
    cut = data.draw(st.integers(1, M - 1))
    whole = partial_sum(v, 1.5, M)
    split = partial_sum(v, 1.5, cut) + partial_sum(v, 1.5, M, start=cut + 1)
    assert abs(whole - split) <= 1e-12 * (1 + sum(abs(x) for x in values))


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=100))
def test_absolute_prefix_nondecreasing(values):
    p = DirichletSeriesView(values).prefix_sums(absolute=True)
    assert all(b.real >= a.real for a, b in zip(p, p[1:]))


def test_abscissa_constant_one():
    est = abscissa_estimate(DirichletSeriesView([1] * 100_000), "convergence")
    assert abs(est.estimate - 1.0) <= 0.1


def test_abscissa_alternating():
    v = DirichletSeriesView([(-1) ** (n + 1) for n in range(1, 5001)])
    c, a = abscissa_estimate(v, "convergence"), abscissa_estimate(v, "absolute")
    assert abs(c.estimate) < 0.1 and abs(a.estimate - 1) < 0.1
    assert a.estimate >= c.estimate - c.uncertainty


def test_abscissa_power_growth():
    v = DirichletSeriesView([n**2.5 for n in range(1, 20_001)])
    assert abs(abscissa_estimate(v, "absolute").estimate - 3.5) < 0.1


def test_abscissa_degenerate():
    assert abscissa_estimate(DirichletSeriesView([0] * 200)).estimate == -math.inf
    with pytest.raises(ValueError):
        abscissa_estimate(DirichletSeriesView([1] * 50))


def test_L_values():
    z, tail = L_chi(DirichletCharacter.principal(1), 2, 10_000)
    assert abs(z - math.pi**2 / 6) <= tail
    c, tail = L_chi(DirichletCharacter.from_kronecker(-4), 2, 10_000)
    assert abs(c - CATALAN) <= tail
    assert L_chi(DirichletCharacter.from_kronecker(5), 3, 1)[0] == 1
    with pytest.raises(ValueError):
        L_chi(DirichletCharacter.principal(1), 1, 10)


def test_verify_product_identity_synthetic():
    chi = DirichletCharacter.principal(4)
    ctx = synthetic_context(3, 4, chi, terms=2000, seed=3)
    L = lift(ctx, 2000)
    rep = verify_product_identity(ctx, L, 6, 2000)
    assert rep.passed and rep.residual < 1e-8


def test_verify_product_identity_residual_shrinks():
    chi = DirichletCharacter.principal(4)
    ctx = synthetic_context(2, 4, chi, terms=4000, seed=5)
    L = lift(ctx, 4000)
    r = [verify_product_identity(ctx, L, 3.0, M).residual for M in (500, 1000, 2000, 4000)]
    assert r[-1] < r[0]


def test_verify_product_identity_zero_and_range():
    chi = DirichletCharacter.principal(4)
    ctx = HalfIntegralContext(2, 4, chi, 1, [0] * 100)
    assert verify_product_identity(ctx, lift(ctx, 100), 5, 100).residual == 0
    with pytest.raises(ValueError):
        verify_product_identity(ctx, lift(ctx, 100), 2.5, 100)


def test_single_prime_support_reduces_to_local_identity():
    # b supported on powers of 3: the truncated product is the local Euler identity
    chi = DirichletCharacter.principal(4)
    k, p, terms = 2, 3, 7
    lam = 5
    tw = 1 if (-16 % 3) == 1 else -1  # ((-1)^k 16 / 3) = (16 / 3) = 1
    series = halfintegral_euler_series(1, lam, chi, tw, p, k, terms)
    b = {n: 0 for n in range(1, 3**6 + 1)}
    for nu in range(terms):
        b[p**nu] = series[nu]
    ctx = HalfIntegralContext(k, 4, chi, 1, b)
    L = lift(ctx, 3**6)
    rep = verify_product_identity(ctx, L, 6, 3**6)
    assert rep.passed and rep.residual <= 1e-10
