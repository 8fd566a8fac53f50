"""Exact truncated q-series, eta quotients and unary theta series.

A :class:`QSeries` is ``sum(c[n] * q**(offset + n) for 0 <= n < precision)``
with exact :class:`CycNumber` coefficients stored sparsely. Precision always
travels with the value: every operation takes the minimum over its operands,
and asking for a coefficient at or beyond the precision raises
:class:`PrecisionError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import bigconv
from .arith import lcm
from .characters import DirichletCharacter
from .cyclotomic import CycNumber, as_cyc

__all__ = [
    "PrecisionError",
    "QSeries",
    "EtaSpec",
    "eta_quotient",
    "euler_product",
    "partition_series",
    "unary_theta",
]

_ZERO = CycNumber.zero()

# products with at most this many term pairs use the sparse double loop
_SPARSE_LIMIT = 200_000


class PrecisionError(ValueError):
    """A coefficient beyond the known precision was requested."""


class QSeries:
    """Immutable truncated q-series with exact cyclotomic coefficients."""

    __slots__ = ("offset", "_coeffs", "precision")

    def __init__(self, coeffs, precision: int, offset=0):
        if precision < 0:
            raise ValueError("precision must be non-negative")
        offset = Fraction(offset)
        if 24 % offset.denominator:
            raise ValueError(f"offset {offset} must have denominator dividing 24")
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        store = {}
        for n, c in items:
            if n < 0:
                raise ValueError("coefficient indices must be non-negative")
            if n >= precision:
                continue
            c = as_cyc(c)
            if c is NotImplemented:
                raise TypeError(f"unsupported coefficient {c!r}")
            if any(c.coeffs):
                store[n] = c
        self.offset = offset
        self._coeffs = store
        self.precision = precision

    @classmethod
    def _from_store(cls, store: dict, precision: int, offset) -> "QSeries":
        obj = object.__new__(cls)
        obj.offset = Fraction(offset)
        obj._coeffs = store
        obj.precision = precision
        return obj

    @classmethod
    def from_ints(cls, values: list[int], offset=0, precision: int | None = None) -> "QSeries":
        if precision is None:
            precision = len(values)
        store = {n: CycNumber._raw(1, (v,)) for n, v in enumerate(values[:precision]) if v}
        return cls._from_store(store, precision, offset)

    # -- access -------------------------------------------------------------

    def coeff(self, n: int) -> CycNumber:
        """Coefficient of q^(offset + n)."""
        if n < 0:
            return _ZERO
        if n >= self.precision:
            raise PrecisionError(f"coefficient {n} requested, precision is {self.precision}")
        return self._coeffs.get(n, _ZERO)

    __getitem__ = coeff

    def coefficients(self, start: int = 0, stop: int | None = None) -> list[CycNumber]:
        stop = self.precision if stop is None else stop
        if stop > self.precision:
            raise PrecisionError(f"coefficients up to {stop} requested, precision is {self.precision}")
        get = self._coeffs.get
        return [get(n, _ZERO) for n in range(start, stop)]

    def items(self):
        """Sorted (n, coefficient) pairs of the nonzero coefficients."""
        return sorted(self._coeffs.items())

    def support(self) -> list[int]:
        return sorted(self._coeffs)

    @property
    def is_integral(self) -> bool:
        """True when the exponent offset is an integer (a genuine q-expansion)."""
        return self.offset.denominator == 1

    def is_integer_valued(self) -> bool:
        return all(c.order == 1 and isinstance(c.coeffs[0], int) for c in self._coeffs.values())

    def normalized(self) -> "QSeries":
        """Absorb an integral offset into the indices, so index n is q^n."""
        if not self.is_integral:
            raise ValueError(f"offset {self.offset} is not integral")
        s = int(self.offset)
        if s < 0:
            raise ValueError("negative offsets cannot be normalized")
        if s == 0:
            return self
        store = {n + s: c for n, c in self._coeffs.items()}
        return QSeries._from_store(store, self.precision + s, 0)

    def truncate(self, precision: int) -> "QSeries":
        precision = min(precision, self.precision)
        store = {n: c for n, c in self._coeffs.items() if n < precision}
        return QSeries._from_store(store, precision, self.offset)

    def stretch(self, d: int) -> "QSeries":
        """Substitute q -> q^d."""
        if d < 1:
            raise ValueError("stretch factor must be positive")
        store = {n * d: c for n, c in self._coeffs.items()}
        return QSeries._from_store(store, self.precision * d, self.offset * d)

    def agrees_with(self, other: "QSeries") -> bool:
        """Exact equality on the shared precision (offsets must match)."""
        if self.offset != other.offset:
            return False
        P = min(self.precision, other.precision)
        keys = {n for n in self._coeffs if n < P} | {n for n in other._coeffs if n < P}
        return all(self.coeff(n) == other.coeff(n) for n in keys)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.precision == other.precision and self.agrees_with(other)

    __hash__ = None

    def __repr__(self):
        terms = []
        for n, c in self.items()[:6]:
            e = self.offset + n
            terms.append(f"({c.coeffs[0] if c.order == 1 else c})*q^{e}")
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body} + O(q^{self.offset + self.precision}))"

    # -- arithmetic ---------------------------------------------------------

    def _align(self, other: "QSeries"):
        delta = other.offset - self.offset
        if delta.denominator != 1:
            raise ValueError("offsets differ by a non-integer")
        lo = min(self.offset, other.offset)
        top = min(self.offset + self.precision, other.offset + other.precision)
        prec = max(int(top - lo), 0)
        sa, sb = int(self.offset - lo), int(other.offset - lo)
        return lo, prec, sa, sb

    def __add__(self, other):
        if not isinstance(other, QSeries):
            c = as_cyc(other)
            if c is NotImplemented:
                return NotImplemented
            other = QSeries._from_store({0: c} if any(c.coeffs) else {}, self.precision, 0)
        lo, prec, sa, sb = self._align(other)
        store = {n + sa: c for n, c in self._coeffs.items() if n + sa < prec}
        for n, c in other._coeffs.items():
            m = n + sb
            if m >= prec:
                continue
            v = store[m] + c if m in store else c
            if any(v.coeffs) and not v.is_zero():
                store[m] = v
            else:
                store.pop(m, None)
        return QSeries._from_store(store, prec, lo)

    __radd__ = __add__

    def __neg__(self):
        return QSeries._from_store({n: -c for n, c in self._coeffs.items()}, self.precision, self.offset)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return self + (-other)
        c = as_cyc(other)
        if c is NotImplemented:
            return NotImplemented
        return self + (-c)

    def scale(self, c) -> "QSeries":
        c = as_cyc(c)
        store = {}
        for n, v in self._coeffs.items():
            w = v * c
            if any(w.coeffs):
                store[n] = w
        return QSeries._from_store(store, self.precision, self.offset)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            if as_cyc(other) is NotImplemented:
                return NotImplemented
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, r: int):
        if not isinstance(r, int):
            return NotImplemented
        if r < 0:
            raise ValueError("negative powers are not supported; use eta_quotient for negative eta exponents")
        result = QSeries._from_store({0: CycNumber.one()}, self.precision, 0)
        base = self
        while r:
            if r & 1:
                result = result * base
            r >>= 1
            if r:
                base = base * base
        return result


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product; precision min(a.precision, b.precision)."""
    prec = min(a.precision, b.precision)
    offset = a.offset + b.offset
    if not a._coeffs or not b._coeffs or prec == 0:
        return QSeries._from_store({}, prec, offset)
    if len(a._coeffs) * len(b._coeffs) <= _SPARSE_LIMIT:
        return QSeries._from_store(_sparse_product(a._coeffs, b._coeffs, prec), prec, offset)
    return QSeries._from_store(_dense_product(a._coeffs, b._coeffs, prec), prec, offset)


def _sparse_product(a: dict, b: dict, prec: int) -> dict:
    out: dict[int, CycNumber] = {}
    bi = sorted(b.items())
    for n, x in a.items():
        if n >= prec:
            continue
        for m, y in bi:
            k = n + m
            if k >= prec:
                break
            v = x * y
            out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _components(store: dict, order: int, prec: int):
    """Split into integer series per power of zeta, with a common denominator."""
    den = 1
    for c in store.values():
        for x in c.coeffs:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
    comps = [[0] * prec for _ in range(order)]
    for n, c in store.items():
        if n >= prec:
            continue
        cl = c.lift(order).coeffs
        for i, x in enumerate(cl):
            if x:
                comps[i][n] = int(x * den)
    return comps, den


def _dense_product(a: dict, b: dict, prec: int) -> dict:
    order = lcm(*(c.order for c in a.values()), *(c.order for c in b.values()))
    ca, da = _components(a, order, prec)
    cb, db = _components(b, order, prec)
    acc = [[0] * prec for _ in range(order)]
    for i, xa in enumerate(ca):
        if not any(xa):
            continue
        for j, xb in enumerate(cb):
            if not any(xb):
                continue
            prod = bigconv.convolve(xa, xb, prec)
            tgt = acc[(i + j) % order]
            for n, v in enumerate(prod):
                if v:
                    tgt[n] += v
    den = da * db
    out = {}
    for n in range(prec):
        vec = tuple(acc[i][n] for i in range(order))
        if any(vec):
            c = CycNumber._raw(order, vec) if den == 1 else CycNumber(order, [Fraction(v, den) for v in vec])
            if order == 1 or not c.is_zero():
                out[n] = c
    return out


# -- eta quotients ------------------------------------------------------------


@dataclass(frozen=True)
class EtaSpec:
    """prod over (d, r) of eta(d z) ** r."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        factors = tuple((int(d), int(r)) for d, r in self.factors)
        if not factors:
            raise ValueError("empty eta quotient")
        ds = [d for d, _ in factors]
        if any(d < 1 for d in ds) or len(set(ds)) != len(ds):
            raise ValueError("eta scales must be distinct positive integers")
        if not any(r for _, r in factors):
            raise ValueError("eta quotient needs at least one nonzero exponent")
        object.__setattr__(self, "factors", factors)

    @property
    def offset(self) -> Fraction:
        return Fraction(sum(d * r for d, r in self.factors), 24)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)


@lru_cache(maxsize=32)
def _euler_ints(prec: int) -> tuple[int, ...]:
    # pentagonal number theorem
    out = [0] * prec
    k = 0
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 >= prec:
            break
        s = -1 if k % 2 else 1
        out[g1] += s
        if k:
            g2 = k * (3 * k + 1) // 2
            if g2 < prec:
                out[g2] += s
        k += 1
    return tuple(out)


@lru_cache(maxsize=32)
def _partition_ints(prec: int) -> tuple[int, ...]:
    p = [0] * prec
    if prec:
        p[0] = 1
    for n in range(1, prec):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            s = 1 if k % 2 else -1
            total += s * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += s * p[n - g2]
            k += 1
        p[n] = total
    return tuple(p)


def euler_product(precision: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) to the given precision."""
    return QSeries.from_ints(list(_euler_ints(precision)))


def partition_series(precision: int) -> QSeries:
    """1 / prod_{n>=1} (1 - q^n), the partition generating function."""
    return QSeries.from_ints(list(_partition_ints(precision)))


def _int_power(base: list[int], r: int, prec: int) -> list[int]:
    result = [1] + [0] * (prec - 1)
    while r:
        if r & 1:
            result = bigconv.convolve(result, base, prec)
        r >>= 1
        if r:
            base = bigconv.convolve(base, base, prec)
    return result


def eta_quotient(spec: EtaSpec, precision: int) -> QSeries:
    """q^offset * prod_d prod_{n>=1} (1 - q^{d n})^{r_d}, ``precision`` terms.

    The result has integer coefficients. Its offset is sum(d r_d)/24, which
    is flagged through :attr:`QSeries.is_integral` when it is fractional.
    """
    if not isinstance(spec, EtaSpec):
        spec = EtaSpec(tuple(spec))
    if precision < 1:
        raise ValueError("precision must be at least 1")
    total = [1] + [0] * (precision - 1)
    for d, r in spec.factors:
        if r == 0:
            continue
        inner = (precision - 1) // d + 1
        base = list(_euler_ints(inner) if r > 0 else _partition_ints(inner))
        powered = _int_power(base, abs(r), inner)
        stretched = [0] * precision
        for n, v in enumerate(powered):
            stretched[n * d] = v
        total = bigconv.convolve(total, stretched, precision)
    return QSeries.from_ints(total, offset=spec.offset, precision=precision)


def unary_theta(psi: DirichletCharacter, nu: int, t: int, precision: int) -> QSeries:
    """sum_{n>=1} psi(n) n^nu q^(t n^2), exponents below ``precision``.

    For nu = 0 the sum starts at n = 1, so the constant term of the classical
    weight-1/2 theta series (and the doubling from +-n) is not included.
    """
    if nu not in (0, 1):
        raise ValueError("nu must be 0 or 1")
    if t < 1:
        raise ValueError("t must be positive")
    store = {}
    n = 1
    while t * n * n < precision:
        v = psi(n)
        if not v.is_zero():
            store[t * n * n] = v.scale(n) if nu else v
        n += 1
    return QSeries._from_store(store, precision, 0)

