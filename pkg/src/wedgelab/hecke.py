"""Generalized Hecke operators T_j(p) on q-expansions and their local data.

``T_j(p)`` sends ``sum a(n) q^n`` to ``sum (a(p^j n) + p^{j(k-1)} chi^j(p) a(n/p^j)) q^n``
with ``a(n/p^j) = 0`` unless ``p^j | n``. Two routes are provided for the
j-th operator: the coefficient formula (:func:`apply_Tj`) and the degree-j
polynomial in ``T(p)`` built by the three-term recurrence
(:func:`Tj_as_polynomial`). They coincide for j <= 1 and whenever
``chi(p) = 0``; for j >= 2 and ``chi(p) != 0`` they differ on coefficients
n with ``p^(j-1)`` not dividing n, which :func:`operator_discrepancy` measures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .characters import DirichletCharacter
from .cyclotomic import CycNumber, as_cyc
from .series import PrecisionError, QSeries

__all__ = [
    "FormContext",
    "EulerFactor",
    "DegeneracyReport",
    "apply_Tj",
    "Tj_as_polynomial",
    "hecke_eigenvalue",
    "power_sum_eigenvalue",
    "pj_power_series",
    "prime_power_sequence",
    "pj_subsequence",
    "generating_residual",
    "operator_discrepancy",
    "euler_roots",
    "twisted_average",
    "check_twisted_average",
    "degeneracy_scan",
    "upsilon",
]


@dataclass(frozen=True)
class FormContext:
    """A q-expansion together with its weight, level and character."""

    k: int
    level: int
    character: DirichletCharacter
    coeffs: QSeries
    newform: bool = False
    name: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("weight must be positive")
        if not self.coeffs.is_integral:
            raise ValueError(f"q-offset {self.coeffs.offset} is not integral")
        if self.coeffs.offset:
            object.__setattr__(self, "coeffs", self.coeffs.normalized())
        if self.character.modulus != self.level and self.level % self.character.modulus:
            raise ValueError("character modulus must divide the level")
        if self.newform and self.coeffs.precision > 1 and self.a(1) != 1:
            raise ValueError("a normalized newform needs a(1) = 1")

    @property
    def precision(self) -> int:
        return self.coeffs.precision

    def a(self, n: int) -> CycNumber:
        return self.coeffs.coeff(n)

    def chi(self, n: int) -> CycNumber:
        return self.character(n)

    def hecke_norm(self, p: int) -> CycNumber:
        """chi(p) p^(k-1), the constant term of the local factor."""
        return self.character(p).scale(p ** (self.k - 1))

    def with_coeffs(self, coeffs: QSeries) -> "FormContext":
        return FormContext(self.k, self.level, self.character, coeffs, self.newform, self.name)


def _check_prime(p: int):
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")


def _hecke_series(series: QSeries, p: int, j: int, k: int, chi_p: CycNumber) -> QSeries:
    M = series.precision
    pj = p**j
    out_prec = (M - 1) // pj + 1 if M else 0
    twist = chi_p**j * p ** (j * (k - 1))
    twist_zero = twist.is_zero()
    get = series._coeffs.get
    store = {}
    for n in range(out_prec):
        v = get(pj * n)
        if not twist_zero and n % pj == 0:
            w = get(n // pj)
            if w is not None:
                w = w * twist
                v = w if v is None else v + w
        if v is not None and any(v.coeffs) and not v.is_zero():
            store[n] = v
    return QSeries._from_store(store, out_prec, 0)


def apply_Tj(f: FormContext, p: int, j: int) -> QSeries:
    """T_j(p) f by the coefficient formula; output precision ceil(M / p^j)."""
    if j < 0:
        raise ValueError("j must be non-negative")
    _check_prime(p)
    if j > 0 and f.precision <= p**j:
        raise PrecisionError(f"precision {f.precision} cannot give any coefficient of T_{j}({p})")
    return _hecke_series(f.coeffs, p, j, f.k, f.chi(p))


def Tj_as_polynomial(p: int, j: int, f: FormContext) -> QSeries:
    """T_j(p) f as the monic degree-j polynomial in T(p) fixed by the recurrence

    ``T_0 = 2``, ``T_1 = T(p)``, ``T_{i+1} = T(p) T_i - p^{k-1} chi(p) T_{i-1}``,
    evaluated using only the single operator T(p).
    """
    if j < 0:
        raise ValueError("j must be non-negative")
    _check_prime(p)
    if j > 0 and f.precision <= p**j:
        raise PrecisionError(f"precision {f.precision} cannot give any coefficient of T_{j}({p})")
    chi_p = f.chi(p)
    c = f.hecke_norm(p)
    prev = f.coeffs.scale(2)
    if j == 0:
        return prev
    cur = _hecke_series(f.coeffs, p, 1, f.k, chi_p)
    for _ in range(j - 1):
        prev, cur = cur, _hecke_series(cur, p, 1, f.k, chi_p) - prev.scale(c)
    return cur


def hecke_eigenvalue(f: FormContext, p: int, j: int = 1, route: str = "formula"):
    """(lambda, is_eigen): the T_j(p) eigenvalue read off at n = 1, and whether
    T_j(p) f = lambda f holds on every shared coefficient.

    ``route`` selects the coefficient formula or the recurrence polynomial.
    A failed verification returns is_eigen = False instead of raising.
    """
    if route == "formula":
        g = apply_Tj(f, p, j)
    elif route == "polynomial":
        g = Tj_as_polynomial(p, j, f)
    else:
        raise ValueError(f"unknown route {route!r}")
    a1 = f.a(1)
    if a1.is_zero():
        raise ValueError("a(1) = 0; eigenvalue cannot be read off at n = 1")
    if not a1.is_rational():
        raise ValueError("a(1) must be rational")
    lam = g.coeff(1) / a1.to_rational()
    return lam, g.agrees_with(f.coeffs.truncate(g.precision).scale(lam))


def power_sum_eigenvalue(a_p, norm, j: int) -> CycNumber:
    """alpha^j + beta^j from alpha + beta = a_p and alpha beta = norm (exact)."""
    a_p, norm = as_cyc(a_p), as_cyc(norm)
    prev, cur = CycNumber.rational(2), a_p
    if j == 0:
        return prev
    for _ in range(j - 1):
        prev, cur = cur, a_p * cur - norm * prev
    return cur


def pj_power_series(f: FormContext, p: int, j: int, terms: int) -> list[CycNumber]:
    """a(p^{jn}) for 0 <= n < terms, read from the expansion itself."""
    if terms < 1:
        raise ValueError("terms must be positive")
    need = p ** (j * (terms - 1))
    if f.precision <= need:
        raise PrecisionError(f"need precision > {need}, have {f.precision}")
    return [f.a(p ** (j * n)) for n in range(terms)]


def prime_power_sequence(f: FormContext, p: int, count: int) -> list[CycNumber]:
    """a(p^m) for 0 <= m < count.

    Powers inside the expansion are read directly. Beyond it the values come
    from the T(p) eigen-relation a(p^{m+1}) = a(p) a(p^m) - chi(p) p^{k-1} a(p^{m-1}),
    which is first checked on the expansion (T(p) f = a(p) f) and then against
    every directly readable power.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if f.a(1) != 1:
        raise ValueError("the recurrence path needs a normalized form")
    direct = []
    m = 0
    while m < count and p**m < f.precision:
        direct.append(f.a(p**m))
        m += 1
    if len(direct) == count:
        return direct
    if len(direct) < 2:
        raise PrecisionError(f"precision {f.precision} does not reach a({p})")
    lam, ok = hecke_eigenvalue(f, p, 1)
    if not ok:
        raise ValueError(f"form is not a T({p}) eigenfunction; recurrence path unavailable")
    c = f.hecke_norm(p)
    seq = [CycNumber.one(), lam]
    while len(seq) < count:
        seq.append(lam * seq[-1] - c * seq[-2])
    for i, v in enumerate(direct):
        if seq[i] != v:
            raise ArithmeticError(f"recurrence disagrees with expansion at a({p}^{i})")
    return seq


def pj_subsequence(f: FormContext, p: int, j: int, terms: int) -> list[CycNumber]:
    """a(p^{jn}) for 0 <= n < terms via :func:`prime_power_sequence`."""
    if j < 1:
        raise ValueError("j must be positive")
    seq = prime_power_sequence(f, p, j * (terms - 1) + 1)
    return seq[::j]


def generating_residual(seq, lam, p: int, j: int, k: int, chi_p, a1=1) -> list[CycNumber]:
    """Coefficients of (1 - lam X + p^{j(k-1)} chi^j(p) X^2) * sum seq[n] X^n - a1
    modulo X^len(seq). All zero exactly when the generating identity holds."""
    lam = as_cyc(lam)
    tail = as_cyc(chi_p) ** j * p ** (j * (k - 1))
    out = []
    for n in range(len(seq)):
        v = seq[n]
        if n >= 1:
            v = v - lam * seq[n - 1]
        if n >= 2:
            v = v + tail * seq[n - 2]
        if n == 0:
            v = v - a1
        out.append(v)
    return out


def operator_discrepancy(f: FormContext, p: int, j: int) -> dict[int, CycNumber]:
    """Nonzero coefficients of Tj_as_polynomial(f) - apply_Tj(f), by index."""
    diff = Tj_as_polynomial(p, j, f) - apply_Tj(f, p, j)
    return dict(diff.items())


# -- local factors ------------------------------------------------------------


@dataclass(frozen=True)
class EulerFactor:
    """1 - trace X + norm X^2 = (1 - alpha X)(1 - beta X), with numeric roots.

    alpha has non-negative imaginary part (ties: larger real part). A factor
    with norm 0 is linear; then beta is None and no modulus check is made.
    """

    p: int
    k: int
    trace: CycNumber
    chi_p: CycNumber
    norm: CycNumber
    alpha: complex
    beta: complex | None
    expected_modulus: float
    moduli_match: bool | None

    @property
    def degree(self) -> int:
        return 1 if self.beta is None else 2


def _embed(x) -> complex:
    if isinstance(x, CycNumber):
        return x.embed()
    return complex(x)


def _exactify(x):
    if isinstance(x, CycNumber):
        return x
    c = as_cyc(x)
    return None if c is NotImplemented else c


def _quadratic_roots(s: complex, n: complex) -> tuple[complex, complex]:
    # roots of Y^2 - s Y + n, with the cancellation-free pairing
    disc = cmath.sqrt(s * s - 4 * n)
    big = (s + disc) / 2 if abs(s + disc) >= abs(s - disc) else (s - disc) / 2
    if big == 0:
        return 0j, 0j
    return big, n / big


def _order_roots(r1: complex, r2: complex) -> tuple[complex, complex]:
    def key(z):
        return (z.imag >= 0, z.real)

    return (r1, r2) if key(r1) >= key(r2) else (r2, r1)


def euler_roots(a_p, k: int, chi_p, p: int, tol: float = 1e-9) -> EulerFactor:
    """Roots of 1 - a(p) X + chi(p) p^{k-1} X^2, reported as alpha, beta with
    alpha + beta = a(p) and alpha beta = chi(p) p^{k-1}."""
    trace_exact = _exactify(a_p)
    chi_exact = _exactify(chi_p)
    s = _embed(a_p)
    chi_c = _embed(chi_p)
    expected = p ** ((k - 1) / 2)
    norm_exact = chi_exact.scale(p ** (k - 1)) if chi_exact is not None else None
    norm_zero = chi_exact.is_zero() if chi_exact is not None else chi_c == 0
    if norm_zero:
        return EulerFactor(p, k, trace_exact, chi_exact, norm_exact, s, None, expected, None)
    n = chi_c * p ** (k - 1)
    alpha, beta = _order_roots(*_quadratic_roots(s, n))
    ok = abs(abs(alpha) - expected) <= tol * expected and abs(abs(beta) - expected) <= tol * expected
    return EulerFactor(p, k, trace_exact, chi_exact, norm_exact, alpha, beta, expected, ok)


def twisted_average(ef: EulerFactor, j: int, terms: int, dps: int = 50) -> list:
    """Power-series coefficients, X^0 .. X^{j*terms - 1}, of

        (1/j) sum_{mu<j} 1 / ((1 - zeta^mu alpha X)(1 - zeta^mu beta X)),  zeta = e^{2 pi i/j}.

    Values are mpmath complex numbers (they overflow doubles quickly).
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    total = j * terms
    with mpmath.workdps(dps):
        alpha = mpmath.mpc(ef.alpha)
        beta = mpmath.mpc(ef.beta) if ef.beta is not None else mpmath.mpc(0)
        acc = [mpmath.mpc(0)] * total
        for mu in range(j):
            z = mpmath.expjpi(mpmath.mpf(2 * mu) / j)
            u, v = z * alpha, z * beta
            s, prod = u + v, u * v
            h_prev, h = mpmath.mpc(0), mpmath.mpc(1)
            for m in range(total):
                acc[m] += h
                h_prev, h = h, s * h - prod * h_prev
        return [x / j for x in acc]


def check_twisted_average(ef: EulerFactor, j: int, terms: int, exact) -> tuple[float, float]:
    """(worst off-multiple magnitude, worst relative error at multiples of j).

    Off-multiple coefficients are measured against the natural size
    max(|alpha|, |beta|)^m of the X^m coefficient; ``exact[n]`` is a(p^{jn}).
    """
    coeffs = twisted_average(ef, j, terms)
    R = max(abs(ef.alpha), abs(ef.beta) if ef.beta is not None else 0.0)
    with mpmath.workdps(50):
        R = mpmath.mpf(R)
        off, rel = mpmath.mpf(0), mpmath.mpf(0)
        for m, c in enumerate(coeffs):
            if m % j:
                off = max(off, abs(c) / R**m)
            else:
                x = exact[m // j]
                xv = mpmath.mpc(*_mp_parts(x))
                scale = abs(xv) if xv != 0 else R**m
                rel = max(rel, abs(c - xv) / scale)
        return float(off), float(rel)


def _mp_parts(x):
    if isinstance(x, CycNumber) and x.order == 1:
        v = x.coeffs[0]
        return (mpmath.mpf(v) if isinstance(v, int) else mpmath.mpf(v.numerator) / v.denominator, 0)
    z = _embed(x)
    return (z.real, z.imag)


@dataclass
class DegeneracyReport:
    """mu values for which alpha zeta^mu or beta zeta^mu is real (within tol),
    and mu values whose upsilon_mu = zeta^-mu + chi(p) zeta^mu vanishes exactly."""

    p: int
    j: int
    hits: list[int] = field(default_factory=list)
    vanishing_upsilon: list[int] = field(default_factory=list)
    skipped: bool = False


def upsilon(chi_p: CycNumber, j: int, mu: int) -> CycNumber:
    """zeta_j^(-mu) + chi(p) zeta_j^mu, exactly."""
    return CycNumber.root_of_unity(j, -mu) + as_cyc(chi_p) * CycNumber.root_of_unity(j, mu)


def degeneracy_scan(ef: EulerFactor, j: int, tol: float = 1e-9) -> DegeneracyReport:
    """Find twists zeta^mu that make an Euler root real (a real pole of the
    twisted average). Linear factors (p | N) are skipped."""
    if j < 1:
        raise ValueError("j must be at least 1")
    rep = DegeneracyReport(ef.p, j)
    if ef.beta is None:
        rep.skipped = True
        return rep
    for mu in range(j):
        z = cmath.exp(2j * math.pi * mu / j)
        for root in (ef.alpha, ef.beta):
            w = root * z
            if abs(w.imag) <= tol * abs(root):
                rep.hits.append(mu)
                break
        if ef.chi_p is not None and upsilon(ef.chi_p, j, mu).is_zero():
            rep.vanishing_upsilon.append(mu)
    return rep


def deligne_ratio(a_p, k: int, p: int) -> float:
    """|a(p)| / (2 p^{(k-1)/2}); at most 1 under the Ramanujan bound."""
    if isinstance(a_p, CycNumber) and a_p.order == 1:
        v = a_p.coeffs[0]
        return float(Fraction(abs(v)) / 2) / p ** ((k - 1) / 2)
    return abs(_embed(a_p)) / (2 * p ** ((k - 1) / 2))
