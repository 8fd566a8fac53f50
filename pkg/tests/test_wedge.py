import cmath
import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wedgelab.cyclotomic import CycNumber
from wedgelab.wedge import Wedge, contains, merge, normalize_rotation, rotate, scan


# -- oracles ------------------------------------------------------------------

def contains_oracle(t1, t2, z):
    """Membership by testing angles theta with the same direction as z."""
    if z == 0:
        return True
    a = cmath.phase(z)
    for shift in (-2, -1, 0, 1, 2):
        th = a + 2 * math.pi * shift
        if t1 - 1e-12 <= th <= t2 + 1e-12:
            return True
    return False


def sign_changes_oracle(values):
    nz = [(i, v) for i, v in values if v != 0]
    return [(a[0], b[0]) for a, b in zip(nz, nz[1:]) if (a[1] > 0) != (b[1] > 0)]


angle = st.floats(-10, 10, allow_nan=False)
coord = st.floats(-1e6, 1e6, allow_subnormal=False).map(lambda x: 0.0 if abs(x) < 1e-200 else x)
point = st.builds(complex, coord, coord)


# -- tests --------------------------------------------------------------------

@given(angle, st.floats(0, math.pi - 1e-6), point)
@settings(max_examples=500)
def test_contains_matches_oracle(t1, width, z):
    w = Wedge(t1, t1 + width)
    if z != 0:
        d = (cmath.phase(z) - w.theta1) % (2 * math.pi)
        assume(min(abs(d - width), d, 2 * math.pi - d) > 1e-9)
    assert contains(w, z) == contains_oracle(t1, t1 + width, z)


@given(angle, st.floats(0, 3.0), point, st.floats(1e-3, 1e3), angle)
@settings(max_examples=300)
def test_scale_and_rotation_invariance(t1, width, z, r, psi):
    w = Wedge(t1, t1 + width)
    if z != 0:
        d = (cmath.phase(z) - w.theta1) % (2 * math.pi)
        assume(min(abs(d - width), d, 2 * math.pi - d) > 1e-8)
    inside = contains(w, z)
    assert contains(w, r * z) == inside
    assert contains(rotate(w, psi), z * cmath.exp(1j * psi)) == inside


def test_width_limits():
    with pytest.raises(ValueError):
        Wedge(0, math.pi)
    with pytest.raises(ValueError):
        Wedge(1, 0.5)
    assert Wedge(7, 7.5).theta1 == pytest.approx(7 - 2 * math.pi)


def test_zero_membership_flag():
    w = Wedge(0.1, 0.2)
    assert contains(w, 0)
    assert not contains(w, 0, strict=True)
    assert contains(w, CycNumber.zero())


def test_normalize_rotation_centres():
    w = Wedge(0.3, 1.3)
    rot = normalize_rotation(w)
    assert rot.phi == pytest.approx(0.5)
    z = cmath.exp(1j * 0.4) * 3
    assert (z * rot.factor).real >= rot.gamma * abs(z) - 1e-12


def test_real_sequence_escapes_are_negatives():
    rng = random.Random(0)
    seq = [rng.randint(-3, 3) for _ in range(500)]
    rep = scan(seq, Wedge.symmetric(1.0))
    assert rep.escapes == [i + 1 for i, v in enumerate(seq) if v < 0]


def test_sign_changes_skip_zeros():
    rep = scan([3, 0, -2, 0, 0, -1, 4], Wedge.symmetric(0.5))
    assert rep.re_changes == [(1, 3), (6, 7)]


@given(st.lists(st.integers(-4, 4), max_size=60))
def test_sign_changes_match_oracle(seq):
    rep = scan(seq, Wedge.symmetric(0.5))
    assert rep.re_changes == sign_changes_oracle(list(enumerate(seq, 1)))


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), max_size=50), st.data())
@settings(max_examples=200)
def test_merge_equals_concatenation(pairs, data):
    seq = [complex(a, b) for a, b in pairs]
    cut = data.draw(st.integers(0, len(seq)))
    w = Wedge(-0.2, 1.0)
    whole = scan(seq, w)
    parts = merge(scan(seq[:cut], w), scan(list(enumerate(seq, 1))[cut:], w))
    assert parts.to_json() == whole.to_json()


def test_exact_signs_for_cyclotomic_values():
    z = CycNumber.root_of_unity(4)  # i: real part exactly 0
    rep = scan([CycNumber.one(), z, CycNumber.rational(-1)], Wedge.symmetric(0.5))
    assert rep.re_changes == [(1, 3)]
    assert rep.escapes == [2, 3]


def test_tau_power_scan(delta):
    from wedgelab.hecke import prime_power_sequence

    seq = prime_power_sequence(delta, 2, 21)
    rep = scan(seq, Wedge(-0.5, 0.5), start=0)
    oracle = [1, -24]
    while len(oracle) < 21:
        oracle.append(-24 * oracle[-1] - 2**11 * oracle[-2])
    assert rep.escapes == [n for n, v in enumerate(oracle) if v < 0]
    assert rep.re_changes[:4] == [(0, 1), (2, 3), (4, 5), (5, 6)]
