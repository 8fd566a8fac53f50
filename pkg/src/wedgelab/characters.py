"""Dirichlet characters with exact root-of-unity values, and Kronecker symbols.

A character mod N is stored by the images of a basis of generators of
(Z/NZ)^*: ``chi(g_i) = zeta_m ** e_i`` where ``m`` is ``value_order``.
Evaluation goes through a discrete-log table built once per character.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property

from .arith import factorize, is_squarefree, lcm
from .cyclotomic import CycNumber

__all__ = [
    "kronecker",
    "DirichletCharacter",
    "TwistedCharacter",
    "unit_group_generators",
    "all_characters",
    "chi_tN",
]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _primitive_root(p: int) -> int:
    phi = p - 1
    qs = [q for q, _ in factorize(phi)] if phi > 1 else []
    for g in range(2, p + 1):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    return 1  # p == 2


def _crt_lift(residue: int, modulus: int, N: int) -> int:
    """x = residue mod modulus, x = 1 mod N/modulus."""
    other = N // modulus
    if other == 1:
        return residue % N
    # x = 1 + other * s, other * s = residue - 1 (mod modulus)
    s = (residue - 1) * pow(other, -1, modulus) % modulus
    return (1 + other * s) % N


def _mult_order(g: int, N: int) -> int:
    if N == 1:
        return 1
    x, k = g % N, 1
    while x != 1:
        x = x * g % N
        k += 1
    return k


def unit_group_generators(N: int) -> list[tuple[int, int]]:
    """A basis (generator, order) of (Z/NZ)^* as a direct product of cyclic groups."""
    if N < 1:
        raise ValueError("modulus must be positive")
    gens: list[tuple[int, int]] = []
    if N == 1:
        return gens
    for p, e in factorize(N):
        q = p**e
        if p == 2:
            if e >= 2:
                gens.append((_crt_lift(-1, q, N), 2))
            if e >= 3:
                gens.append((_crt_lift(5, q, N), 2 ** (e - 2)))
        else:
            g = _primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            gens.append((_crt_lift(g, q, N), (p - 1) * p ** (e - 1)))
    return gens


class DirichletCharacter:
    """A Dirichlet character mod ``modulus`` with exact values in mu_m and 0.

    ``generators`` is a sequence of ``(g, e)``: chi(g) = zeta_m ** e.
    The generators must form a basis of the unit group (checked).
    """

    def __init__(self, modulus: int, generators, value_order: int):
        if modulus < 1 or value_order < 1:
            raise ValueError("modulus and value order must be positive")
        self.modulus = modulus
        self.value_order = value_order
        self.generators = tuple((int(g) % modulus, int(e) % value_order) for g, e in generators)
        self._check()

    def _check(self):
        N, m = self.modulus, self.value_order
        size = 1
        for g, e in self.generators:
            if math.gcd(g, N) != 1:
                raise ValueError(f"generator {g} is not a unit mod {N}")
            o = _mult_order(g, N)
            if (o * e) % m:
                raise ValueError(f"image zeta_{m}^{e} of {g} has order not dividing {o}")
            size *= o
        if size != _phi(N) or len(self._table) != size:
            raise ValueError(f"generators {[g for g, _ in self.generators]} are not a basis mod {N}")

    @cached_property
    def _table(self) -> dict[int, int]:
        N, m = self.modulus, self.value_order
        table = {1 % N: 0}
        for g, e in self.generators:
            o = _mult_order(g, N)
            new = {}
            for r, x in table.items():
                y, ex = r, x
                for _ in range(o):
                    new[y] = ex
                    y = y * g % N
                    ex = (ex + e) % m
            table = new
        return table

    # -- constructors -------------------------------------------------------

    @classmethod
    def principal(cls, N: int) -> "DirichletCharacter":
        return cls(N, [(g, 0) for g, _ in unit_group_generators(N)], 1)

    @classmethod
    def from_exponents(cls, N: int, exponents, value_order: int) -> "DirichletCharacter":
        """Character taking the standard generators to zeta_m ** exponents[i]."""
        gens = unit_group_generators(N)
        if len(exponents) != len(gens):
            raise ValueError(f"modulus {N} has {len(gens)} standard generators")
        return cls(N, [(g, e) for (g, _), e in zip(gens, exponents)], value_order)

    @classmethod
    def from_kronecker(cls, D: int, N: int | None = None) -> "DirichletCharacter":
        """The character n -> (D/n) as a character mod N.

        N defaults to |D| (or 4|D| when D = 2, 3 mod 4). Raises if (D/.) is
        not periodic mod N on units.
        """
        if D == 0:
            raise ValueError("D must be nonzero")
        if N is None:
            N = abs(D) if D % 4 in (0, 1) else 4 * abs(D)
        gens = unit_group_generators(N)
        pairs = []
        for g, _ in gens:
            v = kronecker(D, g)
            if v == 0:
                raise ValueError(f"(D/.) vanishes at unit {g} mod {N}")
            pairs.append((g, 0 if v == 1 else 1))
        chi = cls(N, pairs, 2)
        for n in range(1, 2 * N + 1):
            if math.gcd(n, N) == 1 and chi.exponent(n) != (0 if kronecker(D, n) == 1 else 1):
                raise ValueError(f"({D}/.) is not a character mod {N}")
        return chi

    @classmethod
    def from_json(cls, obj: dict) -> "DirichletCharacter":
        if "kronecker" in obj:
            return cls.from_kronecker(int(obj["kronecker"]), obj.get("modulus"))
        if "generators" not in obj:
            return cls.principal(int(obj["modulus"]))
        return cls(int(obj["modulus"]), [tuple(x) for x in obj["generators"]], int(obj["valueOrder"]))

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "generators": [list(x) for x in self.generators],
            "valueOrder": self.value_order,
        }

    # -- evaluation ---------------------------------------------------------

    def exponent(self, n: int) -> int | None:
        """e with chi(n) = zeta_m ** e, or None when gcd(n, N) > 1."""
        return self._table.get(n % self.modulus)

    def __call__(self, n: int) -> CycNumber:
        e = self.exponent(n)
        if e is None:
            return CycNumber.zero()
        if self.value_order <= 2:
            return CycNumber.rational(1 if e == 0 else -1)
        return CycNumber.root_of_unity(self.value_order, e)

    evaluate = __call__

    def order(self) -> int:
        m = self.value_order
        g = m
        for _, e in self.generators:
            g = math.gcd(g, e)
        return m // g

    def is_principal(self) -> bool:
        return self.order() == 1

    def is_even(self) -> bool:
        return self.exponent(-1) == 0

    def __pow__(self, r: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, [(g, e * r) for g, e in self.generators], self.value_order)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ValueError("characters must share a modulus (use TwistedCharacter)")
        m = lcm(self.value_order, other.value_order)
        sa, sb = m // self.value_order, m // other.value_order
        return DirichletCharacter(
            self.modulus,
            [(g, e * sa + (other.exponent(g) or 0) * sb) for g, e in self.generators],
            m,
        )

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        m = lcm(self.value_order, other.value_order)
        return all(
            (self.exponent(g) * (m // self.value_order) - other.exponent(g) * (m // other.value_order)) % m == 0
            for g, _ in self.generators
        )

    def __hash__(self):
        std = unit_group_generators(self.modulus)
        return hash((self.modulus, tuple(Fraction(self.exponent(g), self.value_order) for g, _ in std)))

    def __repr__(self):
        return f"DirichletCharacter(mod {self.modulus}, {list(self.generators)}, zeta_{self.value_order})"


def _phi(N: int) -> int:
    out = N
    if N > 1:
        for p, _ in factorize(N):
            out = out // p * (p - 1)
    return out


def all_characters(N: int) -> list[DirichletCharacter]:
    """Every Dirichlet character mod N."""
    gens = unit_group_generators(N)
    m = lcm(*(o for _, o in gens)) if gens else 1
    chars = [[]]
    for _, o in gens:
        step = m // o
        chars = [c + [step * i] for c in chars for i in range(o)]
    return [DirichletCharacter.from_exponents(N, c, m) for c in chars]


class TwistedCharacter:
    """Pointwise product n -> chi(n) * (D/n), not reduced to a primitive modulus.

    The recorded modulus is lcm(N_chi, period of (D/.)); vanishing follows the
    factors. This is how the Shimura twist chi_{t,N} is represented.
    """

    def __init__(self, chi: DirichletCharacter, D: int):
        if D == 0:
            raise ValueError("D must be nonzero")
        self.chi = chi
        self.D = D
        period = abs(D) if D % 4 in (0, 1) else 4 * abs(D)
        self.modulus = lcm(chi.modulus, period)
        self.value_order = lcm(chi.value_order, 2)

    def exponent(self, n: int) -> int | None:
        e = self.chi.exponent(n)
        if e is None:
            return None
        s = kronecker(self.D, n)
        if s == 0:
            return None
        m = self.value_order
        e = e * (m // self.chi.value_order)
        return e if s == 1 else (e + m // 2) % m

    def __call__(self, n: int) -> CycNumber:
        e = self.exponent(n)
        if e is None:
            return CycNumber.zero()
        if self.value_order == 2:
            return CycNumber.rational(1 if e == 0 else -1)
        return CycNumber.root_of_unity(self.value_order, e)

    evaluate = __call__

    @cached_property
    def _order(self) -> int:
        m = self.value_order
        g = m
        for n in range(1, self.modulus + 1):
            e = self.exponent(n)
            if e is not None:
                g = math.gcd(g, e)
                if g == 1:
                    break
        return m // g

    def order(self) -> int:
        return self._order

    def __repr__(self):
        return f"TwistedCharacter({self.chi!r} * ({self.D}/.))"


def chi_tN(chi: DirichletCharacter, k: int, N: int, t: int, level_power: int = 2) -> TwistedCharacter:
    """The twist d -> chi(d) * (((-1)^k N^level_power t) / d) of the Shimura lift.

    ``level_power`` defaults to 2; setting it to 1 gives the variant with N in
    place of N^2 so the two conventions can be compared.
    """
    if t <= 0:
        raise ValueError("t must be a positive integer")
    if not is_squarefree(t):
        raise ValueError("t must be squarefree")
    return TwistedCharacter(chi, (-1) ** k * N**level_power * t)
