"""Numeric Dirichlet-series instruments: partial sums, abscissa brackets,
L(s, chi) by direct summation, and the quotient identity

    sum b(n) n^{-s} * sum chi_{t,N}(n) n^{k-1-s} = sum A(n) n^{-s}

checked over a common truncation. Nothing here continues a series
analytically; every evaluation stays where the sums converge absolutely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import CycNumber

__all__ = [
    "DirichletSeriesView",
    "partial_sum",
    "abscissa_estimate",
    "AbscissaEstimate",
    "L_chi",
    "verify_product_identity",
    "ProductIdentityReport",
]


def _embed(x) -> complex:
    if isinstance(x, CycNumber):
        if x.order == 1:
            v = x.coeffs[0]
            return complex(v if isinstance(v, int) else float(v))
        return x.embed()
    return complex(x)


def _fsum_complex(values) -> complex:
    values = list(values)
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


class DirichletSeriesView:
    """sum a(n) n^{-s} over a finite coefficient source.

    ``source`` is a sequence (element i is a(i+1)), a dict n -> a(n) or a
    callable n -> a(n) together with ``length``. Values may be CycNumbers or
    Python numbers; they are embedded in C once.
    """

    def __init__(self, source, length: int | None = None):
        if callable(source) and not isinstance(source, (list, tuple, dict)):
            if length is None:
                raise ValueError("a callable source needs a length")
            values = [source(n) for n in range(1, length + 1)]
        elif isinstance(source, dict):
            length = max(source) if length is None and source else (length or 0)
            values = [source.get(n, 0) for n in range(1, length + 1)]
        else:
            values = list(source) if length is None else list(source)[:length]
        self.values = [_embed(v) for v in values]

    def __len__(self):
        return len(self.values)

    def a(self, n: int) -> complex:
        return self.values[n - 1]

    def prefix_sums(self, absolute: bool = False) -> list:
        """S(N) for N = 1..len, compensated (Neumaier) accumulation."""
        out = []
        sr = cr = si = ci = 0.0
        for z in self.values:
            if absolute:
                xr, xi = abs(z), 0.0
            else:
                xr, xi = z.real, z.imag
            t = sr + xr
            cr += (sr - t) + xr if abs(sr) >= abs(xr) else (xr - t) + sr
            sr = t
            t = si + xi
            ci += (si - t) + xi if abs(si) >= abs(xi) else (xi - t) + si
            si = t
            out.append(complex(sr + cr, si + ci))
        return out


def partial_sum(view: DirichletSeriesView, s: float, M: int, start: int = 1) -> complex:
    """sum_{start <= n <= M} a(n) n^{-s}, correctly rounded per component."""
    if M < 1:
        raise ValueError("M must be at least 1")
    if M > len(view):
        raise ValueError(f"only {len(view)} coefficients available")
    return _fsum_complex(view.values[n - 1] * n ** (-s) for n in range(start, M + 1))


@dataclass
class AbscissaEstimate:
    which: str
    estimate: float
    uncertainty: float
    ladder: list = field(default_factory=list)
    slopes: list = field(default_factory=list)

    def to_json(self) -> dict:
        est = self.estimate if math.isfinite(self.estimate) else "-inf"
        return {
            "which": self.which,
            "estimate": est,
            "uncertainty": self.uncertainty,
            "ladder": [{"N": n, "running_max": m} for n, m in self.ladder],
            "slopes": self.slopes,
        }


def abscissa_estimate(view: DirichletSeriesView, which: str = "convergence", M: int | None = None) -> AbscissaEstimate:
    """Bracket inf{sigma : S(N) = O(N^sigma)} from finite data.

    S is the plain (``convergence``) or absolute (``absolute``) prefix sum.
    Along the ladder N_i = M^{i/8}, i = 1..8, the running maximum of |S| is
    recorded; the estimate is the largest log-log slope between consecutive
    rungs in the upper half of the ladder, and the uncertainty is the spread
    of those slopes. An identically zero prefix gives -inf.
    """
    if which not in ("convergence", "absolute"):
        raise ValueError("which must be 'convergence' or 'absolute'")
    M = len(view) if M is None else M
    if M < 100:
        raise ValueError("M must be at least 100")
    if M > len(view):
        raise ValueError(f"only {len(view)} coefficients available")
    sums = view.prefix_sums(absolute=which == "absolute")[:M]
    running = []
    best = 0.0
    for v in sums:
        best = max(best, abs(v))
        running.append(best)
    rungs = sorted({max(2, math.ceil(M ** (i / 8))) for i in range(1, 9)} | {M})
    rungs = [min(n, M) for n in rungs]
    ladder = [(n, running[n - 1]) for n in rungs]
    if running[-1] == 0:
        return AbscissaEstimate(which, -math.inf, 0.0, ladder, [])
    slopes = []
    for (n0, m0), (n1, m1) in zip(ladder, ladder[1:]):
        if n1 == n0:
            continue
        if m0 == 0:
            continue
        slopes.append((n1, math.log(m1 / m0) / math.log(n1 / n0)))
    upper = [s for n, s in slopes if n >= math.sqrt(M)] or [s for _, s in slopes]
    if not upper:
        return AbscissaEstimate(which, math.log(running[-1]) / math.log(M), 1.0, ladder, slopes)
    return AbscissaEstimate(which, max(upper), max(upper) - min(upper), ladder, slopes)


def L_chi(chi, s: float, M: int) -> tuple[complex, float]:
    """(sum_{n<=M} chi(n) n^{-s}, tail bound M^{1-s}/(s-1)) for real s > 1."""
    if s <= 1:
        raise ValueError("direct summation needs s > 1")
    if M < 1:
        raise ValueError("M must be at least 1")
    m = chi.value_order
    roots = [complex(math.cos(2 * math.pi * e / m), math.sin(2 * math.pi * e / m)) for e in range(m)]
    terms = []
    for n in range(1, M + 1):
        e = chi.exponent(n)
        if e is not None:
            terms.append(roots[e] * n ** (-s))
    return _fsum_complex(terms), M ** (1 - s) / (s - 1)


@dataclass
class ProductIdentityReport:
    s: float
    M: int
    residual: float
    bound: float
    tail_estimate: float
    passed: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_product_identity(ctx, L, s: float, M: int) -> ProductIdentityReport:
    """Compare sum b(n) n^{-s} * sum chi_{t,N}(n) n^{k-1-s} with sum A(n) n^{-s}, n <= M.

    The residual is exactly the contribution of pairs (n1, n2) with
    n1, n2 <= M < n1 n2; it is bounded by the same sum with absolute values,
    which is computed from the data (``bound``). ``tail_estimate`` is an
    indicative size of sum_{n>M} |A(n)| n^{-s} assuming |A(n)| <= C d(n) n^{k-1/2}
    with C fitted on the data. Requires s > k + 1/2.
    """
    k = ctx.k
    if s <= k + 0.5:
        raise ValueError(f"s = {s} is outside the absolute-convergence range s > {k + 0.5}")
    if M > len(L.A):
        raise ValueError(f"only {len(L.A)} lift terms available")
    b = [_embed(ctx.b(n)) for n in range(1, M + 1)]
    A = [_embed(L.A[n]) for n in range(1, M + 1)]
    g = []
    for n in range(1, M + 1):
        e = L.chi_tN.exponent(n)
        if e is None:
            g.append(0j)
        else:
            ang = 2 * math.pi * e / L.chi_tN.value_order
            g.append(complex(math.cos(ang), math.sin(ang)) * float(Fraction(n) ** (k - 1)))
    w = [n ** (-s) for n in range(1, M + 1)]
    Sb = _fsum_complex(b[i] * w[i] for i in range(M))
    Sg = _fsum_complex(g[i] * w[i] for i in range(M))
    SA = _fsum_complex(A[i] * w[i] for i in range(M))
    residual = abs(Sb * Sg - SA)

    # |b| * |g| convolution restricted to n <= M
    conv_abs = [0.0] * (M + 1)
    for n1 in range(1, M + 1):
        x = abs(b[n1 - 1])
        if not x:
            continue
        for n2 in range(1, M // n1 + 1):
            conv_abs[n1 * n2] += x * abs(g[n2 - 1])
    Sb_abs = math.fsum(abs(b[i]) * w[i] for i in range(M))
    Sg_abs = math.fsum(abs(g[i]) * w[i] for i in range(M))
    inside = math.fsum(conv_abs[n] * w[n - 1] for n in range(1, M + 1))
    rounding = 1e-13 * (Sb_abs * Sg_abs + abs(SA))
    bound = max(Sb_abs * Sg_abs - inside, 0.0) + rounding

    C = 0.0
    for n in range(1, M + 1):
        C = max(C, abs(A[n - 1]) / (_num_divisors(n) * n ** (k - 0.5)))
    sigma = s - k - 0.5
    tail = C * M ** (-sigma) * (math.log(M) + 1 / sigma + 1) / sigma
    return ProductIdentityReport(s, M, residual, bound, tail, residual <= bound)


def _num_divisors(n: int) -> int:
    count, d = 0, 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count
