"""Series identities behind the generating function, checked in exact arithmetic.

The polynomial identities only use the periodicity (and evenness) of the
coefficient sequence, so they hold exactly for the rationalised alpha_j too;
every residual below is therefore an exact zero when the code is right.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .poly import Poly
from .recurrence import RecurrenceSpec, build_polys, discriminant, p_table

__all__ = [
    "CheckResult",
    "TruncatedSeries",
    "p_series",
    "genfun_identity",
    "functional_equation",
    "tail_recursion_check",
    "wronskian_check",
    "shift_identity_check",
    "discriminant_product_check",
    "resolvent_reduction_check",
    "fk_check",
    "det_m",
    "det_m_check",
]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of an identity check; truthy iff it passed."""

    passed: bool
    max_residual: float = 0.0
    first_failure: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return bool(self.passed)


def _size(p: Poly) -> float:
    return float(p.max_abs_coeff()) if p else 0.0


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_{k <= order} c_k(x) t^k with polynomial coefficients."""

    coeffs: tuple[Poly, ...]
    order: int = field(default=0)

    def __post_init__(self):
        c = tuple(self.coeffs[: self.order + 1])
        c += (Poly(),) * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_polys(cls, polys, order: int) -> "TruncatedSeries":
        return cls(tuple(polys), order)

    def __getitem__(self, k: int) -> Poly:
        return self.coeffs[k] if 0 <= k <= self.order else Poly()

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        return TruncatedSeries(tuple(self[k] + other[k] for k in range(order + 1)), order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        return TruncatedSeries(tuple(self[k] - other[k] for k in range(order + 1)), order)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (Poly, int, Fraction)):
            return TruncatedSeries(tuple(c * other for c in self.coeffs), self.order)
        order = min(self.order, other.order)
        out = []
        for k in range(order + 1):
            acc = Poly()
            for i in range(k + 1):
                if self[i] and other[k - i]:
                    acc = acc + self[i] * other[k - i]
            out.append(acc)
        return TruncatedSeries(tuple(out), order)

    def shift(self, m: int) -> "TruncatedSeries":
        """Multiply by t^m, keeping the order."""
        return TruncatedSeries((Poly(),) * m + self.coeffs, self.order)


def p_series(spec: RecurrenceSpec, order: int) -> TruncatedSeries:
    """Generating function P(t) = sum P_n(x) t^n, truncated."""
    return TruncatedSeries.from_polys([p for p, _ in build_polys(spec, order)], order)


def _denominator(spec, order):
    g = discriminant(spec).exact
    N = spec.N
    c = [Poly()] * (order + 1)
    c[0] = Poly([Fraction(1)])
    if N <= order:
        c[N] = g * -2
    if 2 * N <= order:
        c[2 * N] = c[2 * N] + Poly([Fraction(1)])
    return TruncatedSeries(tuple(c), order)


def genfun_identity(spec: RecurrenceSpec, order: int) -> CheckResult:
    """(t^{2N} - 2 g_N t^N + 1) P(t) against the degree-(2N-2) numerator, through t^order."""
    N = spec.N
    if order < 2 * N:
        raise DomainError("order must be at least 2N")
    polys = [p for p, _ in build_polys(spec, order)]
    g = discriminant(spec).exact
    lhs = _denominator(spec, order) * p_series(spec, order)
    num = [Poly()] * (order + 1)
    for k in range(2 * N - 1):
        num[k] = num[k] + polys[k]
    for k in range(N - 1):
        num[k + N] = num[k + N] - g * 2 * polys[k]
    worst, first = 0.0, None
    for k in range(order + 1):
        r = _size(lhs[k] - num[k])
        if r and first is None:
            first = k
        worst = max(worst, r)
    return CheckResult(first is None, worst, first)


def fk_check(spec: RecurrenceSpec) -> CheckResult:
    """Numerator coefficients of P(t) det M(t) against the two-branch F_k formula."""
    N = spec.N
    order = 2 * N - 2
    polys = [p for p, _ in build_polys(spec, max(order, 1))]
    g = discriminant(spec).exact
    series = _denominator(spec, order) * p_series(spec, order)
    worst, first = 0.0, None
    for k in range(order + 1):
        fk = polys[k] if k < N else polys[k] - g * 2 * polys[k - N]
        r = _size(series[k] - fk)
        if r and first is None:
            first = k
        worst = max(worst, r)
    return CheckResult(first is None, worst, first)


def functional_equation(spec: RecurrenceSpec, order: int, xs=None, seed: int = 0) -> CheckResult:
    """Q(t) P(t) + a t [P(tq) + P(t/q)] = 1 coefficientwise, in complex doubles.

    Residuals are scaled by the size of the terms entering each coefficient.
    """
    if order < 4:
        raise DomainError("order must be at least 4")
    if xs is None:
        xs = np.random.default_rng(seed).uniform(-1.5, 1.5, 10)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    q = cmath.exp(2j * math.pi / spec.N)
    a = spec.a
    n = np.arange(order + 1)
    qq = q ** n + q ** (-n)
    worst, first = 0.0, None
    for x in xs:
        c = p_table(spec, order, x).astype(complex)
        for m in range(order + 1):
            terms = [c[m], -2 * x * c[m - 1] if m >= 1 else 0, c[m - 2] if m >= 2 else 0,
                     a * qq[m - 1] * c[m - 1] if m >= 1 else 0]
            target = 1.0 if m == 0 else 0.0
            r = abs(sum(terms) - target) / max(1.0, max(abs(t) for t in terms))
            if r > 1e-10 and first is None:
                first = m
            worst = max(worst, r)
    return CheckResult(bool(worst <= 1e-10), worst, first)


def tail_recursion_check(spec: RecurrenceSpec, k_max: int) -> CheckResult:
    """P_k - 2 g_N P_{k-N} + P_{k-2N} = 0 for 2N-1 <= k <= k_max (P_{-1} = 0)."""
    N = spec.N
    if k_max < 2 * N - 1:
        raise DomainError("k_max must be at least 2N - 1")
    polys = [p for p, _ in build_polys(spec, k_max)]
    g = discriminant(spec).exact

    def P(k):
        return polys[k] if k >= 0 else Poly()

    worst, first = 0.0, None
    for k in range(2 * N - 1, k_max + 1):
        r = _size(P(k) - g * 2 * P(k - N) + P(k - 2 * N))
        if r and first is None:
            first = k
        worst = max(worst, r)
    return CheckResult(first is None, worst, first)


def wronskian_check(spec: RecurrenceSpec, n_max: int = 20) -> CheckResult:
    """P_{n+1} P*_n - P_n P*_{n+1} = -2 for 0 <= n < n_max."""
    pairs = build_polys(spec, n_max)
    worst, first = 0.0, None
    for n in range(n_max):
        (p0, s0), (p1, s1) = pairs[n], pairs[n + 1]
        r = _size(p1 * s0 - p0 * s1 + 2)
        if r and first is None:
            first = n
        worst = max(worst, r)
    return CheckResult(first is None, worst, first)


def shift_identity_check(spec: RecurrenceSpec) -> CheckResult:
    """P_N = P*_{N+1} / 2."""
    pairs = build_polys(spec, spec.N + 1)
    r = _size(pairs[spec.N][0] - pairs[spec.N + 1][1] / 2)
    return CheckResult(r == 0, r)


def discriminant_product_check(spec: RecurrenceSpec) -> CheckResult:
    """2 g_N P_{N-1} = P_{2N-1}, and the leading coefficient of g_N is 2^(N-1)."""
    N = spec.N
    pairs = build_polys(spec, 2 * N - 1)
    g = discriminant(spec).exact
    r = _size(g * 2 * pairs[N - 1][0] - pairs[2 * N - 1][0])
    lead_ok = g.degree == N and g.leading == 2 ** (N - 1)
    return CheckResult(r == 0 and lead_ok, r, detail="" if lead_ok else "leading coefficient")


def resolvent_reduction_check(spec: RecurrenceSpec) -> CheckResult:
    """2 (P_N - g_N) = (x - a) P*_N, the polynomial step behind 2/phi - (z-a) = 2 sqrt / P*_N."""
    N = spec.N
    pairs = build_polys(spec, N)
    g = discriminant(spec).exact
    x_minus_a = Poly([-spec.a_exact, Fraction(1)])
    r = _size((pairs[N][0] - g) * 2 - x_minus_a * pairs[N][1])
    return CheckResult(r == 0, r)


def det_m(N: int, a, x=None):
    """det M(t) as a sympy expression in t (and x), reduced modulo the cyclotomic polynomial.

    Row j holds Q(t q^j) on the diagonal and a t q^j at columns j -/+ 1 (mod N).
    """
    import sympy as sp

    t, q = sp.symbols("t q")
    x = sp.Symbol("x") if x is None else x
    a = sp.nsimplify(a) if not isinstance(a, sp.Basic) else a
    M = sp.zeros(N, N)
    for j in range(N):
        tq = t * q**j
        M[j, j] += tq**2 - 2 * x * tq + 1
        M[j, (j + 1) % N] += a * tq
        M[j, (j - 1) % N] += a * tq
    det = sp.expand(M.det(method="berkowitz"))
    reduced = sp.rem(sp.Poly(det, q), sp.Poly(sp.cyclotomic_poly(N, q), q))
    return sp.expand(reduced.as_expr()), t, x


def det_m_check(spec: RecurrenceSpec) -> CheckResult:
    """det M(t) = t^{2N} - 2 g_N t^N + 1, built directly for N <= 4."""
    import sympy as sp

    N = spec.N
    if N > 4:
        raise DomainError("det M(t) is only constructed for N <= 4")
    a = sp.Rational(spec.a_exact.numerator, spec.a_exact.denominator)
    det, t, x = det_m(N, a)
    g = discriminant(spec).exact
    g_expr = sum(sp.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(g.coeffs))
    diff = sp.expand(det - (t ** (2 * N) - 2 * g_expr * t**N + 1))
    if diff == 0:
        return CheckResult(True, 0.0)
    coeffs = sp.Poly(diff, t, x).coeffs()
    return CheckResult(False, float(max(abs(c) for c in coeffs)), detail=str(diff)[:200])
