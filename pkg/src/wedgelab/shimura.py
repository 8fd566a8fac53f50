"""Coefficient-level Shimura correspondence.

Everything here works on the square-class subsequence ``b(n) = a(t n^2)`` of a
half-integral weight form. The lift is the Dirichlet convolution

    A(n) = sum_{d | n} chi_{t,N}(d) d^{k-1} b(n/d),

inverted by twisting with the Moebius function. Synthetic eigen-data builds
``b`` from prescribed Hecke eigenvalues through the local p-power identity and
multiplicativity, so every identity can be exercised without a half-integral
expansion engine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import divisors, is_squarefree, mobius_sieve, primes_up_to, smallest_prime_factors
from .characters import DirichletCharacter, TwistedCharacter, chi_tN
from .cyclotomic import CycNumber, as_cyc
from .hecke import _order_roots, _quadratic_roots
from .series import PrecisionError

__all__ = [
    "HalfIntegralContext",
    "LiftResult",
    "lift",
    "lift_value",
    "invert_lift",
    "halfintegral_euler_series",
    "eigen_transfer_check",
    "chi_square_degeneracy",
    "synthetic_context",
    "random_lambda",
]


@dataclass
class HalfIntegralContext:
    """b(n) = a(t n^2) for a form of weight k + 1/2, level N, character chi.

    ``coeffs_t`` maps n >= 1 to b(n); it need not be dense (p-power chains far
    beyond the dense range are allowed). ``witness`` is an index with
    b(witness) != 0, which makes the lift nonzero. ``hecke_eigenvalues`` is
    filled for synthetic data (or when known) and keyed by prime.
    """

    k: int
    level: int
    character: DirichletCharacter
    t: int
    coeffs_t: dict
    hecke_eigenvalues: dict = field(default_factory=dict)
    provenance: str = "form"
    claimed_in_S_star: bool = False
    level_power: int = 2

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if self.level % 4:
            raise ValueError("half-integral level must be divisible by 4")
        if self.t < 1 or not is_squarefree(self.t):
            raise ValueError("t must be a squarefree positive integer")
        if isinstance(self.coeffs_t, (list, tuple)):
            self.coeffs_t = {n + 1: v for n, v in enumerate(self.coeffs_t)}
        store = {}
        for n, v in self.coeffs_t.items():
            if n < 1:
                raise ValueError("b is indexed from 1")
            store[n] = as_cyc(v)
        self.coeffs_t = store
        self.twist = chi_tN(self.character, self.k, self.level, self.t, self.level_power)

    def b(self, n: int) -> CycNumber:
        try:
            return self.coeffs_t[n]
        except KeyError:
            raise PrecisionError(f"b({n}) = a({self.t}*{n}^2) is not known") from None

    @property
    def a_t(self) -> CycNumber:
        return self.b(1)

    @property
    def dense_terms(self) -> int:
        n = 0
        while n + 1 in self.coeffs_t:
            n += 1
        return n

    @property
    def witness(self) -> int | None:
        """Smallest known n with a(t n^2) != 0."""
        for n in sorted(self.coeffs_t):
            if not self.coeffs_t[n].is_zero():
                return n
        return None

    def with_coeffs(self, coeffs: dict) -> "HalfIntegralContext":
        return HalfIntegralContext(
            self.k, self.level, self.character, self.t, coeffs,
            dict(self.hecke_eigenvalues), self.provenance, self.claimed_in_S_star, self.level_power,
        )


@dataclass
class LiftResult:
    A: dict
    chi_tN: TwistedCharacter
    k: int
    level: int
    t: int

    def __getitem__(self, n: int) -> CycNumber:
        return self.A[n]

    def sequence(self, terms: int | None = None) -> list[CycNumber]:
        terms = len(self.A) if terms is None else terms
        return [self.A[n] for n in range(1, terms + 1)]


def _convolve(twist: TwistedCharacter, k: int, source, terms: int, mobius: bool) -> dict:
    m = twist.value_order
    mu = mobius_sieve(terms) if mobius else None
    acc = {}
    for d in range(1, terms + 1):
        e = twist.exponent(d)
        if e is None or (mu is not None and mu[d] == 0):
            continue
        w = Fraction(d) ** (k - 1)
        if w.denominator == 1:
            w = w.numerator
        if mu is not None:
            w = -w if mu[d] < 0 else w
        for q in range(1, terms // d + 1):
            src = source(q)
            if not any(src.coeffs):
                continue
            v = src.lift(_lcm(src.order, m)).rotate(e * (_lcm(src.order, m) // m)).scale(w)
            n = d * q
            acc[n] = v if n not in acc else acc[n] + v
    zero = CycNumber.zero()
    return {n: acc.get(n, zero) for n in range(1, terms + 1)}


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def lift(ctx: HalfIntegralContext, terms: int) -> LiftResult:
    """A_t(n) = sum_{d|n} chi_{t,N}(d) d^{k-1} a(t n^2/d^2) for 1 <= n <= terms."""
    for n in range(1, terms + 1):
        if n not in ctx.coeffs_t:
            raise PrecisionError(f"b({n}) is needed for {terms} lift terms")
    A = _convolve(ctx.twist, ctx.k, ctx.b, terms, mobius=False)
    return LiftResult(A, ctx.twist, ctx.k, ctx.level, ctx.t)


def lift_value(ctx: HalfIntegralContext, n: int) -> CycNumber:
    """A_t(n) for a single n, using only the b(n/d) it needs."""
    total = CycNumber.zero()
    for d in divisors(n):
        w = ctx.twist(d)
        if w.is_zero():
            continue
        total = total + w * ctx.b(n // d) * Fraction(d) ** (ctx.k - 1)
    return total


def invert_lift(L: LiftResult, terms: int) -> list[CycNumber]:
    """b(n) = sum_{d|n} mu(d) chi_{t,N}(d) d^{k-1} A(n/d), for 1 <= n <= terms."""
    if terms > len(L.A):
        raise PrecisionError(f"only {len(L.A)} lift terms available")
    out = _convolve(L.chi_tN, L.k, L.A.__getitem__, terms, mobius=True)
    return [out[n] for n in range(1, terms + 1)]


def halfintegral_euler_series(a_t, lambda_p, chi: DirichletCharacter, chi_tN_p, p: int, k: int, terms: int):
    """a(t p^{2 nu}) for 0 <= nu < terms from

        sum_nu a(t p^{2 nu}) X^nu = a(t) (1 - chi_{t,N}(p) p^{k-1} X) / (1 - lambda_p X + chi^2(p) p^{2k-1} X^2).
    """
    if terms < 1:
        raise ValueError("terms must be at least 1")
    a_t, lam = as_cyc(a_t), as_cyc(lambda_p)
    eta = as_cyc(chi_tN_p).scale(p ** (k - 1))
    tail = (chi(p) ** 2).scale(p ** (2 * k - 1))
    out = [a_t]
    if terms > 1:
        out.append(a_t * (lam - eta))
    while len(out) < terms:
        out.append(lam * out[-1] - tail * out[-2])
    return out


@dataclass
class TransferReport:
    p: int
    passed: bool
    lambda_p: CycNumber
    residuals: dict = field(default_factory=dict)
    first_failure: int | None = None
    lift_mismatch: list = field(default_factory=list)
    alpha: complex | None = None
    beta: complex | None = None
    expected_modulus: float | None = None
    moduli_match: bool | None = None


def eigen_transfer_check(ctx: HalfIntegralContext, L: LiftResult | None, p: int, terms: int, tol: float = 1e-9):
    """Check that A(p^nu) from the lift obeys the weight-2k Hecke recursion

        A(p^{nu+1}) = lambda_p A(p^nu) - chi^2(p) p^{2k-1} A(p^{nu-1}),  A(p) = lambda_p A(1),

    for nu < terms, i.e. that p-th eigenvalues transfer through the lift.
    Also reports the roots of 1 - lambda_p X + chi^2(p) p^{2k-1} X^2.
    """
    if ctx.level % p == 0:
        raise ValueError(f"p = {p} divides the level")
    A = [lift_value(ctx, p**nu) for nu in range(terms + 1)]
    lam = ctx.hecke_eigenvalues.get(p)
    if lam is None:
        if A[0].is_zero() or not A[0].is_rational():
            raise ValueError("need a known eigenvalue or rational nonzero a(t)")
        lam = A[1] / A[0].to_rational()
    lam = as_cyc(lam)
    tail = (ctx.character(p) ** 2).scale(p ** (2 * ctx.k - 1))
    rep = TransferReport(p, True, lam)
    if L is not None:
        for nu, v in enumerate(A):
            if p**nu in L.A and L.A[p**nu] != v:
                rep.lift_mismatch.append(nu)
    for nu in range(terms):
        r = A[nu + 1] - lam * A[nu]
        if nu >= 1:
            r = r + tail * A[nu - 1]
        if not r.is_zero():
            rep.residuals[nu] = r
            if rep.first_failure is None:
                rep.first_failure = nu
    rep.passed = not rep.residuals and not rep.lift_mismatch
    s, n = lam.embed(), tail.embed()
    alpha, beta = _order_roots(*_quadratic_roots(s, n))
    expected = p ** (ctx.k - 0.5)
    rep.alpha, rep.beta, rep.expected_modulus = alpha, beta, expected
    rep.moduli_match = abs(abs(alpha) - expected) <= tol * expected and abs(abs(beta) - expected) <= tol * expected
    return rep


@dataclass
class ChiSquareReport:
    p: int
    k: int
    alpha: complex
    beta: complex
    real_root: bool
    one_plus_chi2_zero: bool | None
    real_root_value: complex
    matches_real_root_value: bool


def chi_square_degeneracy(lambda_p, chi2_p, k: int, p: int, tol: float = 1e-9) -> ChiSquareReport:
    """Whether a root of 1 - lambda_p X + chi^2(p) p^{2k-1} X^2 is real (within tol),
    and separately whether 1 + chi^2(p) = 0 exactly.

    When a root is real, lambda_p = +-p^{k-1/2} (1 + chi^2(p)); ``matches_real_root_value``
    records whether lambda_p equals one of those two values within tol.
    """
    s = lambda_p.embed() if isinstance(lambda_p, CycNumber) else complex(lambda_p)
    c2 = chi2_p.embed() if isinstance(chi2_p, CycNumber) else complex(chi2_p)
    n = c2 * p ** (2 * k - 1)
    alpha, beta = _order_roots(*_quadratic_roots(s, n))
    real = any(abs(r.imag) <= tol * max(abs(r), 1e-300) for r in (alpha, beta))
    exact = as_cyc(chi2_p) if not isinstance(chi2_p, (complex, float)) else NotImplemented
    zero = (exact + 1).is_zero() if exact is not NotImplemented else None
    real_value = p ** (k - 0.5) * (1 + c2)
    scale = max(abs(real_value), p ** (k - 0.5))
    matches = min(abs(s - real_value), abs(s + real_value)) <= tol * scale
    return ChiSquareReport(p, k, alpha, beta, real, zero, real_value, matches)


# -- synthetic eigen-data -----------------------------------------------------


def random_lambda(rng: random.Random, chi: DirichletCharacter, p: int, k: int) -> CycNumber:
    """chi(p) * r with a random integer |r| < 2 p^{k-1/2}; 0 when chi(p) = 0.

    The chi(p) factor keeps lambda_p / chi(p) real, which is what makes both
    local roots have modulus p^{k-1/2}.
    """
    c = chi(p)
    if c.is_zero():
        return CycNumber.zero()
    bound = 2 * p ** (k - 0.5)
    r = rng.randint(-int(bound) + (1 if int(bound) == bound else 0), int(bound))
    if abs(r) >= bound:
        r -= 1 if r > 0 else -1
    return c.scale(r)


def synthetic_context(
    k: int,
    level: int,
    chi: DirichletCharacter,
    t: int = 1,
    a_t=1,
    terms: int = 100,
    lambdas: dict | None = None,
    seed: int = 0,
    chains: dict | None = None,
    level_power: int = 2,
) -> HalfIntegralContext:
    """b(n) = a(t n^2) for 1 <= n <= terms from eigenvalues via the local identity
    and multiplicativity of b(n)/a(t).

    Missing eigenvalues are drawn with :func:`random_lambda` (seeded). For a
    prime p dividing the level the local factor is taken with lambda_p as given
    (default 0). ``chains`` maps a prime to a length nu_max: b(p^nu) is then
    also stored for nu <= nu_max beyond the dense range.
    """
    rng = random.Random(seed)
    lambdas = {int(p): as_cyc(v) for p, v in (lambdas or {}).items()}
    probe = HalfIntegralContext(k, level, chi, t, {1: as_cyc(a_t)}, level_power=level_power)
    twist = probe.twist
    one = CycNumber.one()
    primes = primes_up_to(max(terms, *(chains or {0: 0}).keys(), 1))
    local = {}
    for p in primes:
        if p not in lambdas:
            lambdas[p] = random_lambda(rng, chi, p, k) if level % p else CycNumber.zero()
        nu_max = 0
        q = p
        while q <= terms:
            nu_max += 1
            q *= p
        if chains and p in chains:
            nu_max = max(nu_max, chains[p])
        local[p] = halfintegral_euler_series(one, lambdas[p], chi, twist(p), p, k, nu_max + 1)
    a_t = as_cyc(a_t)
    spf = smallest_prime_factors(terms)
    g = {1: one}
    for n in range(2, terms + 1):
        p = spf[n]
        m, v = n, 0
        while m % p == 0:
            m //= p
            v += 1
        g[n] = g[m] * local[p][v]
    coeffs = {n: a_t * g[n] for n in g}
    for p, nu_max in (chains or {}).items():
        for nu in range(nu_max + 1):
            coeffs.setdefault(p**nu, a_t * local[p][nu])
    return HalfIntegralContext(
        k, level, chi, t, coeffs, lambdas, provenance="synthetic", level_power=level_power
    )
