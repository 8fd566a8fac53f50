"""Built-in forms and the JSON form-spec loader.

Eta quotients get weight, level and character from the standard
Gordon-Hughes-Newman conditions; every built-in eigenform is then checked
against T(p) f = a(p) f for small primes p not dividing the level, which is
the safety net for those formulas.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from pathlib import Path

from .arith import factorize, is_squarefree, lcm, primes_up_to
from .characters import DirichletCharacter, kronecker, unit_group_generators
from .hecke import FormContext, hecke_eigenvalue
from .series import EtaSpec, eta_quotient, unary_theta
from .shimura import HalfIntegralContext, synthetic_context

__all__ = [
    "FormSpec",
    "CatalogEntry",
    "CATALOG",
    "eta_level",
    "eta_character",
    "load_form",
    "load_spec_file",
    "get_entry",
    "self_check",
    "catalog_names",
]

log = logging.getLogger(__name__)

KINDS = ("eta_quotient", "unary_theta", "synthetic_eigen")


@dataclass(frozen=True)
class FormSpec:
    kind: str
    payload: dict
    weight: Fraction | None = None
    level: int | None = None
    character: dict | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown form kind {self.kind!r}")

    @classmethod
    def from_json(cls, obj: dict) -> "FormSpec":
        obj = dict(obj)
        kind = obj.pop("kind", None)
        if kind not in KINDS:
            raise ValueError(f"unknown form kind {kind!r}")
        weight = obj.pop("weight", None)
        return cls(
            kind,
            obj,
            None if weight is None else Fraction(weight),
            obj.pop("level", None),
            obj.pop("character", None),
        )

    def to_json(self) -> dict:
        out = {"kind": self.kind, **self.payload}
        if self.weight is not None:
            w = self.weight
            out["weight"] = int(w) if w.denominator == 1 else str(w)
        if self.level is not None:
            out["level"] = self.level
        if self.character is not None:
            out["character"] = self.character
        return out


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: FormSpec
    newform: bool = True
    eigenform: bool = True
    notes: str = ""
    facts: dict = field(default_factory=dict)


# -- eta quotient invariants --------------------------------------------------


def eta_level(spec: EtaSpec, bound: int = 10_000) -> int:
    """Smallest N, a multiple of every d, with sum d r_d = 0 and sum (N/d) r_d = 0 mod 24."""
    if sum(d * r for d, r in spec.factors) % 24:
        raise ValueError("sum d r_d is not divisible by 24; not on any Gamma0(N)")
    base = lcm(*(d for d, _ in spec.factors))
    N = base
    while N <= bound:
        if sum((N // d) * r for d, r in spec.factors) % 24 == 0:
            return N
        N += base
    raise ValueError(f"no level up to {bound}")


def _squarefree_part(n: int) -> int:
    out = 1
    for p, e in factorize(n):
        if e % 2:
            out *= p
    return out


def eta_character(spec: EtaSpec, level: int) -> DirichletCharacter:
    """n -> ((-1)^k prod d^{r_d} / n) on units mod the level (integral weight k)."""
    w = spec.weight
    if w.denominator != 1:
        raise ValueError("eta character formula needs integral weight")
    num = Fraction(1)
    for d, r in spec.factors:
        num *= Fraction(d) ** r
    sq = _squarefree_part(num.numerator) * _squarefree_part(num.denominator)
    D = (-1) ** int(w) * sq
    if D == 1:
        return DirichletCharacter.principal(level)
    if D % 4 != 1:
        D *= 4
    return _character_from_kronecker(D, level)


def _character_from_kronecker(D: int, level: int) -> DirichletCharacter:
    # (D/.) on units mod level; D must be a fundamental-type discriminant dividing into level
    return DirichletCharacter.from_kronecker(D, level)


def _product_character(level: int, psi: DirichletCharacter, D: int) -> DirichletCharacter:
    """psi * (D/.) as a character mod level (psi's modulus divides the level)."""
    if level % psi.modulus:
        raise ValueError("psi modulus must divide the level")
    m = lcm(psi.value_order, 2)
    gens = []
    for g, _ in unit_group_generators(level):
        e = psi.exponent(g)
        k = kronecker(D, g)
        if e is None or k == 0:
            raise ValueError(f"character not defined at unit {g} mod {level}")
        e = e * (m // psi.value_order) + (0 if k == 1 else m // 2)
        gens.append((g, e % m))
    return DirichletCharacter(level, gens, m)


# -- loading ------------------------------------------------------------------


def _declared_character(obj, level):
    if obj is None:
        return None
    chi = DirichletCharacter.from_json(obj)
    if chi.modulus != level:
        if level % chi.modulus:
            raise ValueError("declared character modulus must divide the level")
        # lift to the level
        chi = _product_character(level, chi, 1)
    return chi


def _characters_agree(a: DirichletCharacter, b: DirichletCharacter) -> bool:
    N = lcm(a.modulus, b.modulus)
    return all(a(n) == b(n) for n in range(1, N + 1) if gcd(n, N) == 1)


def load_form(spec: FormSpec | dict | str, precision: int, name: str = ""):
    """Materialize ``spec`` with coefficients a(n) for 0 <= n < precision.

    Returns a :class:`FormContext` for integral weight and a
    :class:`HalfIntegralContext` (b(n) = a(t n^2)) for half-integral kinds.
    ``spec`` may also be the name of a built-in entry.
    """
    if isinstance(spec, str):
        entry = get_entry(spec)
        spec, name = entry.spec, entry.name
        newform = entry.newform
    else:
        newform = None
    if isinstance(spec, dict):
        spec = FormSpec.from_json(spec)
    if precision < 2:
        raise ValueError("precision must be at least 2")
    if spec.kind == "eta_quotient":
        return _load_eta(spec, precision, name, newform)
    if spec.kind == "unary_theta":
        return _load_theta(spec, precision)
    return _load_synthetic(spec, precision)


def _load_eta(spec: FormSpec, precision: int, name: str, newform):
    eta = EtaSpec(tuple(tuple(x) for x in spec.payload["factors"]))
    w = eta.weight
    if spec.weight is not None and spec.weight != w:
        raise ValueError(f"declared weight {spec.weight} but sum r_d / 2 = {w}")
    if w.denominator != 1:
        raise ValueError(f"half-integral eta quotient (weight {w}) is not supported as an integral form")
    if eta.offset.denominator != 1:
        raise ValueError(f"q-offset {eta.offset} is not integral")
    if eta.offset < 0:
        raise ValueError("negative q-offset: not a holomorphic cusp form")
    level = eta_level(eta)
    if spec.level is not None:
        if spec.level % level:
            raise ValueError(f"declared level {spec.level} is not a multiple of {level}")
        level = spec.level
    chi = eta_character(eta, level)
    declared = _declared_character(spec.character, level)
    if declared is not None and not _characters_agree(chi, declared):
        raise ValueError("declared character disagrees with the eta-quotient character")
    h = int(eta.offset)
    terms = max(precision - h, 1)
    series = eta_quotient(eta, terms).normalized()
    if newform is None:
        newform = bool(spec.payload.get("newform", False))
    return FormContext(int(w), level, chi, series, newform and h == 1, name)


def _load_theta(spec: FormSpec, precision: int) -> HalfIntegralContext:
    p = spec.payload
    psi = DirichletCharacter.from_json(p["psi"])
    nu = int(p.get("nu", 0))
    t = int(p.get("t", 1))
    level = spec.level or 4 * psi.modulus**2 * t
    chi = _declared_character(spec.character, level)
    if chi is None:
        D = t if nu == 0 else -t
        if D % 4 != 1:
            D *= 4
        chi = _product_character(level, psi, D)
    series = unary_theta(psi, nu, t, precision)
    b = {}
    n = 1
    while t * n * n < precision:
        b[n] = series.coeff(t * n * n)
        n += 1
    return HalfIntegralContext(nu, level, chi, t, b, provenance="unary_theta", claimed_in_S_star=False)


def _load_synthetic(spec: FormSpec, precision: int) -> HalfIntegralContext:
    p = spec.payload
    level = spec.level
    if level is None:
        raise ValueError("synthetic_eigen needs a level")
    chi = _declared_character(spec.character or {"modulus": level}, level)
    k = int(p["k"])
    if spec.weight is not None and spec.weight != Fraction(2 * k + 1, 2):
        raise ValueError("declared weight must be k + 1/2")
    t = int(p.get("t", 1))
    if not is_squarefree(t):
        raise ValueError("t must be squarefree")
    return synthetic_context(
        k,
        level,
        chi,
        t=t,
        a_t=p.get("a_t", 1),
        terms=precision - 1,
        lambdas={int(q): v for q, v in p.get("lambdas", {}).items()},
        seed=int(p.get("seed", 0)),
        chains={int(q): int(v) for q, v in p.get("chains", {}).items()} or None,
        level_power=int(p.get("level_power", 2)),
    )


def load_spec_file(path) -> FormSpec:
    return FormSpec.from_json(json.loads(Path(path).read_text()))


# -- self checks --------------------------------------------------------------


def self_check(ctx: FormContext, max_prime: int = 13) -> dict:
    """{p: is_eigen} for T(p), p <= max_prime, p not dividing the level."""
    out = {}
    for p in primes_up_to(max_prime):
        if ctx.level % p == 0 or ctx.precision <= p:
            continue
        _, ok = hecke_eigenvalue(ctx, p, 1)
        out[p] = ok
    return out


# -- built-in entries ---------------------------------------------------------


def _eta(name, factors, notes="", **facts):
    return CatalogEntry(name, FormSpec("eta_quotient", {"factors": [list(x) for x in factors]}), notes=notes, facts=facts)


_BUILTIN = [
    _eta("delta", [(1, 24)], "Ramanujan Delta, weight 12, level 1"),
    _eta("eta11", [(1, 2), (11, 2)], "weight 2, level 11"),
    _eta("eta14", [(1, 1), (2, 1), (7, 1), (14, 1)], "weight 2, level 14"),
    _eta("eta15", [(1, 1), (3, 1), (5, 1), (15, 1)], "weight 2, level 15"),
    _eta("eta20", [(2, 2), (10, 2)], "weight 2, level 20"),
    _eta("eta24", [(2, 1), (4, 1), (6, 1), (12, 1)], "weight 2, level 24"),
    _eta("eta27", [(3, 2), (9, 2)], "weight 2, level 27"),
    _eta("eta32", [(4, 2), (8, 2)], "weight 2, level 32"),
    _eta("eta36", [(6, 4)], "weight 2, level 36"),
    _eta("eta2_3_6_3", [(2, 3), (6, 3)], "weight 3, level 12, character (-3/.)"),
    _eta("eta4_6", [(4, 6)], "weight 3, level 16, character (-4/.)"),
    _eta("eta1_2_3_6", [(1, 2), (2, 2), (3, 2), (6, 2)], "weight 4, level 6"),
    _eta("eta2_4_4_4", [(2, 4), (4, 4)], "weight 4, level 8"),
    _eta("eta3_8", [(3, 8)], "weight 4, level 9"),
    _eta("eta1_4_2_2_4_4", [(1, 4), (2, 2), (4, 4)], "weight 5, level 4, character (-4/.)"),
    _eta("eta2_12", [(2, 12)], "weight 6, level 4"),
    _eta("eta1_6_3_6", [(1, 6), (3, 6)], "weight 6, level 3"),
    _eta("eta1_8_2_8", [(1, 8), (2, 8)], "weight 8, level 2"),
    CatalogEntry(
        "theta_8_3",
        FormSpec("unary_theta", {"psi": {"kronecker": -4}, "nu": 1, "t": 1}),
        newform=False,
        eigenform=False,
        notes="sum (-4/n) n q^(n^2) = eta(8z)^3, weight 3/2, level 64 (unary theta)",
    ),
    CatalogEntry(
        "synth_k6",
        FormSpec("synthetic_eigen", {"k": 6, "t": 1, "seed": 1}, level=4, character={"modulus": 4}),
        newform=False,
        notes="synthetic eigen-data, weight 13/2, level 4, principal character",
    ),
    CatalogEntry(
        "synth_k3_28",
        FormSpec(
            "synthetic_eigen",
            {"k": 3, "t": 5, "seed": 2},
            level=28,
            character={"modulus": 28, "generators": [[15, 0], [17, 1]], "valueOrder": 3},
        ),
        newform=False,
        notes="synthetic eigen-data, weight 7/2, level 28, order-3 character, t = 5",
    ),
]

_CHECK_PRECISION = 200


def _validated(entries):
    out = {}
    for e in entries:
        if e.spec.kind == "eta_quotient":
            ctx = load_form(e.spec, _CHECK_PRECISION, e.name)
            results = self_check(ctx)
            if not all(results.values()):
                log.warning("dropping %s: T(p) self-check failed at %s", e.name, [p for p, ok in results.items() if not ok])
                continue
            e = CatalogEntry(
                e.name, e.spec, e.newform, e.eigenform, e.notes,
                {**e.facts, "k": ctx.k, "level": ctx.level, "character_order": ctx.character.order()},
            )
        out[e.name] = e
    return out


_catalog_cache: dict | None = None


def _catalog() -> dict:
    global _catalog_cache
    if _catalog_cache is None:
        _catalog_cache = _validated(_BUILTIN)
    return _catalog_cache


class _CatalogView:
    def __getitem__(self, name):
        return _catalog()[name]

    def __iter__(self):
        return iter(_catalog())

    def __len__(self):
        return len(_catalog())

    def __contains__(self, name):
        return name in _catalog()

    def values(self):
        return _catalog().values()

    def items(self):
        return _catalog().items()


CATALOG = _CatalogView()


def get_entry(name: str) -> CatalogEntry:
    try:
        return _catalog()[name]
    except KeyError:
        raise KeyError(f"unknown catalog form {name!r}; known: {', '.join(_catalog())}") from None


def catalog_names(kind: str | None = None) -> list[str]:
    return [n for n, e in _catalog().items() if kind is None or e.spec.kind == kind]
