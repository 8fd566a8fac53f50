import json
from fractions import Fraction

import pytest

from wedgelab.catalog import CATALOG, FormSpec, eta_character, eta_level, load_form, load_spec_file, self_check
from wedgelab.characters import DirichletCharacter
from wedgelab.hecke import FormContext
from wedgelab.series import EtaSpec
from wedgelab.shimura import HalfIntegralContext


# oracle: levels and characters of well-known eta-quotient newforms
KNOWN = {
    ((1, 24),): (12, 1, None),
    ((1, 2), (11, 2)): (2, 11, None),
    ((4, 6),): (3, 16, -4),
    ((2, 3), (6, 3)): (3, 12, -3),
    ((1, 8), (2, 8)): (8, 2, None),
    ((1, 4), (2, 2), (4, 4)): (5, 4, -4),
}


@pytest.mark.parametrize("factors", list(KNOWN))
def test_eta_invariants(factors):
    k, N, D = KNOWN[factors]
    spec = EtaSpec(factors)
    assert spec.weight == k
    assert eta_level(spec) == N
    chi = eta_character(spec, N)
    if D is None:
        assert chi.is_principal()
    else:
        want = DirichletCharacter.from_kronecker(D, N)
        assert all(chi(n) == want(n) for n in range(1, 3 * N))


@pytest.mark.parametrize("name", ["delta", "eta11", "eta4_6"])
def test_named_forms(name):
    f = load_form(name, 60)
    assert isinstance(f, FormContext)
    assert f.a(1).to_rational() == 1
    assert all(self_check(f).values())


def test_delta_facts():
    f = load_form("delta", 30)
    assert (f.k, f.level) == (12, 1) and f.character.is_principal()
    assert f.a(2).to_rational() == -24


def test_eta4_6_character():
    f = load_form("eta4_6", 30)
    assert f.k == 3
    assert [f.chi(n).to_rational() for n in (1, 3, 5, 7)] == [1, -1, 1, -1]


def test_every_entry_self_checks():
    for name, e in CATALOG.items():
        ctx = load_form(name, 300)
        if isinstance(ctx, FormContext):
            assert all(self_check(ctx).values()), name
        else:
            assert isinstance(ctx, HalfIntegralContext)


def test_spec_loader_and_cross_checks(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"kind": "eta_quotient", "factors": [[1, 2], [11, 2]], "weight": 2, "level": 11}))
    f = load_form(load_spec_file(path), 20)
    assert f.a(2).to_rational() == -2
    with pytest.raises(ValueError):
        load_form({"kind": "eta_quotient", "factors": [[1, 2], [11, 2]], "weight": 4}, 20)
    with pytest.raises(ValueError):
        load_form({"kind": "eta_quotient", "factors": [[1, 1]]}, 20)
    with pytest.raises(ValueError):
        FormSpec.from_json({"kind": "modular_symbols"})


def test_declared_character_mismatch():
    spec = {"kind": "eta_quotient", "factors": [[4, 6]], "character": {"modulus": 16}}
    with pytest.raises(ValueError):
        load_form(spec, 20)


def test_synthetic_spec():
    spec = {"kind": "synthetic_eigen", "k": 2, "level": 12, "t": 3, "seed": 9, "weight": "5/2"}
    ctx = load_form(spec, 50)
    assert ctx.provenance == "synthetic" and ctx.dense_terms == 49
    assert FormSpec.from_json(spec).weight == Fraction(5, 2)
