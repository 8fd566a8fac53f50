"""Exact elements of cyclotomic fields Q(zeta_m).

A :class:`CycNumber` of order ``m`` stores a dense length-``m`` vector of
rationals ``c`` and denotes ``sum(c[i] * zeta_m**i)``. The vector is *not*
kept reduced: multiplication is a cyclic convolution modulo ``x**m - 1`` and
reduction modulo the ``m``-th cyclotomic polynomial happens only when a
canonical form is needed (equality, zero tests, rationality).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .arith import divisors, lcm

__all__ = ["CycNumber", "cyclotomic_polynomial", "as_cyc"]


def _norm(x):
    # keep integers as int; Fractions with denominator 1 collapse to int
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return _norm(Fraction(x.numerator, x.denominator))
    raise TypeError(f"expected a rational coefficient, got {type(x).__name__}")


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("order must be positive")
    # x^m - 1 divided by every Phi_d with d | m, d < m
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d == m:
            continue
        num = _exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dl = len(den) - 1
    quo = [0] * (len(num) - dl)
    for i in range(len(num) - 1, dl - 1, -1):
        q = num[i]  # den is monic
        quo[i - dl] = q
        if q:
            for t in range(dl + 1):
                num[i - dl + t] -= q * den[t]
    if any(num[:dl]):
        raise ArithmeticError("inexact polynomial division")
    return quo


@lru_cache(maxsize=None)
def _roots_table(m: int) -> tuple[complex, ...]:
    return tuple(cmath.exp(2j * math.pi * i / m) for i in range(m))


class CycNumber:
    """An exact element ``sum(coeffs[i] * zeta_order**i)`` of Q(zeta_order)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        coeffs = tuple(_norm(c) for c in coeffs)
        if order < 1 or len(coeffs) != order:
            raise ValueError(f"need exactly {order} coefficients, got {len(coeffs)}")
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> "CycNumber":
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, value) -> "CycNumber":
        return cls._raw(1, (_norm(value),))

    @classmethod
    def zero(cls) -> "CycNumber":
        return cls._raw(1, (0,))

    @classmethod
    def one(cls) -> "CycNumber":
        return cls._raw(1, (1,))

    @classmethod
    def root_of_unity(cls, m: int, e: int = 1) -> "CycNumber":
        """zeta_m ** e."""
        if m < 1:
            raise ValueError("order must be positive")
        coeffs = [0] * m
        coeffs[e % m] = 1
        return cls._raw(m, tuple(coeffs))

    # -- structure ----------------------------------------------------------

    def lift(self, m: int) -> "CycNumber":
        """The same number written in Q(zeta_m); ``self.order`` must divide m."""
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"order {self.order} does not divide {m}")
        step = m // self.order
        coeffs = [0] * m
        for i, c in enumerate(self.coeffs):
            if c:
                coeffs[i * step] = c
        return CycNumber._raw(m, tuple(coeffs))

    def reduced(self) -> tuple:
        """Canonical coordinates in the power basis 1, z, ..., z^(phi(m)-1)."""
        phi = cyclotomic_polynomial(self.order)
        deg = len(phi) - 1
        c = list(self.coeffs)
        for i in range(len(c) - 1, deg - 1, -1):
            q = c[i]
            if q:
                for t in range(deg + 1):
                    c[i - deg + t] -= q * phi[t]
        return tuple(_norm(x) for x in c[:deg])

    def is_zero(self) -> bool:
        if not any(self.coeffs):
            return True
        if self.order == 1:
            return False
        return not any(self.reduced())

    def is_rational(self) -> bool:
        if self.order == 1:
            return True
        red = self.reduced()
        return not any(red[1:])

    def to_rational(self):
        """The value as int/Fraction; raises if it is not rational."""
        if self.order == 1:
            return self.coeffs[0]
        red = self.reduced()
        if any(red[1:]):
            raise ValueError(f"{self!r} is not rational")
        return red[0]

    def conjugate(self) -> "CycNumber":
        m = self.order
        return CycNumber._raw(m, tuple(self.coeffs[(-i) % m] for i in range(m)))

    def embed(self) -> complex:
        """Complex value under zeta_m -> exp(2 pi i / m)."""
        if self.order == 1:
            return complex(self.coeffs[0])
        roots = _roots_table(self.order)
        return sum((c * roots[i] for i, c in enumerate(self.coeffs) if c), 0j)

    __complex__ = embed

    def real_sign(self) -> int:
        """Exact sign test for the real part (zero decided exactly)."""
        if self.order == 1:
            v = self.coeffs[0]
            return (v > 0) - (v < 0)
        if (self + self.conjugate()).is_zero():
            return 0
        return 1 if self.embed().real > 0 else -1

    def imag_sign(self) -> int:
        if self.order == 1:
            return 0
        if (self - self.conjugate()).is_zero():
            return 0
        return 1 if self.embed().imag > 0 else -1

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other: "CycNumber"):
        if self.order == other.order:
            return self.coeffs, other.coeffs, self.order
        m = lcm(self.order, other.order)
        return self.lift(m).coeffs, other.lift(m).coeffs, m

    def __add__(self, other):
        other = as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return CycNumber._raw(1, (_norm(self.coeffs[0] + other.coeffs[0]),))
        a, b, m = self._common(other)
        return CycNumber._raw(m, tuple(_norm(x + y) for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycNumber._raw(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.order == 1:
            return self.scale(other.coeffs[0])
        if self.order == 1:
            return other.scale(self.coeffs[0])
        a, b, m = self._common(other)
        out = [0] * m
        nzb = [(j, y) for j, y in enumerate(b) if y]
        for i, x in enumerate(a):
            if x:
                for j, y in nzb:
                    out[(i + j) % m] += x * y
        return CycNumber._raw(m, tuple(_norm(v) for v in out))

    __rmul__ = __mul__

    def scale(self, r) -> "CycNumber":
        """Multiply by a rational scalar."""
        return CycNumber._raw(self.order, tuple(_norm(c * r) for c in self.coeffs))

    def rotate(self, e: int) -> "CycNumber":
        """Multiply by zeta_order ** e (a cyclic shift of the coefficients)."""
        m = self.order
        e %= m
        if e == 0:
            return self
        return CycNumber._raw(m, self.coeffs[-e:] + self.coeffs[:-e])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / other)
        other = as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_rational():
            return self.scale(Fraction(1) / Fraction(other.to_rational()))
        return NotImplemented

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = CycNumber.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = as_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return self.coeffs[0] == other.coeffs[0]
        return (self - other).is_zero()

    __hash__ = None  # equal values may carry different orders

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.order == 1:
            return f"CycNumber({self.coeffs[0]})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                z = f"z{self.order}" + (f"^{i}" if i > 1 else "")
                terms.append(z if c == 1 else f"-{z}" if c == -1 else f"{c}*{z}")
        body = " + ".join(terms) if terms else "0"
        return f"CycNumber({body.replace('+ -', '- ')})"


def as_cyc(x) -> CycNumber:
    """Coerce ints/rationals to CycNumber; NotImplemented for anything else."""
    if isinstance(x, CycNumber):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return CycNumber._raw(1, (_norm(x),))
    if isinstance(x, bool):
        return CycNumber._raw(1, (int(x),))
    return NotImplemented
