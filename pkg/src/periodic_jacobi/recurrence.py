"""The polynomials P_n, their numerator polynomials P*_n and the discriminant g_N.

Both families obey

    2x v_n = v_{n+1} + alpha_n v_n + v_{n-1},   alpha_n = 2a cos(2 pi n / N),

with ``P_0 = 1, P_1 = 2x - 2a`` and ``P*_0 = 0, P*_1 = 2``.  Conventions
for negative indices: ``P_{-1} = 0`` and ``P*_{-1} = -2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from functools import cached_property, lru_cache
from numbers import Rational

import mpmath
import numpy as np

from .errors import ConsistencyError, DomainError
from .kernels import backend as _kern
from .poly import Poly

__all__ = [
    "EXACT_PERIODS",
    "RecurrenceSpec",
    "Discriminant",
    "as_rational",
    "build_polys",
    "p_table",
    "eval_P",
    "eval_P_star",
    "eval_P_deriv",
    "eval_ratio",
    "g_values",
    "symmetry_check",
    "discriminant",
    "transfer_trace",
    "chebyshev_u",
    "chebyshev_shift_residual",
    "chebyshev_shift_check",
    "ratio_asymptotics",
]

#: Periods for which 2cos(2 pi j / N) is an integer for every j.
EXACT_PERIODS = frozenset({1, 2, 3, 4, 6})

# 2cos(k * 30 degrees) for k = 0..11, only the entries reachable from EXACT_PERIODS
_TWO_COS_30 = {0: 2, 2: 1, 3: 0, 4: -1, 6: -2, 8: -1, 9: 0, 10: 1}

#: Working precision (decimal digits) used to rationalise irrational cosines.
RATIONAL_DPS = 60


def as_rational(a) -> Fraction:
    """Exact rational value of ``a``.

    Floats are read through their shortest repr, so ``0.9`` becomes ``9/10``
    rather than the nearest dyadic rational.
    """
    if isinstance(a, bool):
        raise DomainError("a must be a real number")
    if isinstance(a, Rational):
        return Fraction(a)
    if isinstance(a, float):
        if not math.isfinite(a):
            raise DomainError(f"non-finite a={a!r} has no rational value")
        return Fraction(repr(a))
    if isinstance(a, (str, Decimal)):
        try:
            return Fraction(a)
        except (ValueError, ArithmeticError):
            raise DomainError(f"cannot read {a!r} as a rational number") from None
    raise DomainError(f"exact backing needs a rational a, got {type(a).__name__}")


def _mpf_to_fraction(v) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(v)._mpf_
    return (-1) ** sign * Fraction(int(man)) * (Fraction(2) ** int(exp))


@dataclass(frozen=True)
class RecurrenceSpec:
    """Coupling ``a`` and period ``N`` of the recurrence coefficients."""

    a: float
    N: int
    _a_exact: Fraction | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise DomainError(f"period N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        a = self.a
        if isinstance(a, (Fraction, int, str, Decimal)) and not isinstance(a, bool):
            exact = as_rational(a)
            object.__setattr__(self, "_a_exact", exact)
            object.__setattr__(self, "a", float(exact))
        else:
            a = float(a)
            if not math.isfinite(a):
                raise DomainError(f"a must be finite, got {a!r}")
            object.__setattr__(self, "a", a)

    @property
    def a_exact(self) -> Fraction:
        if self._a_exact is not None:
            return self._a_exact
        return as_rational(self.a)

    @property
    def exact(self) -> bool:
        """True when the exact backing is genuinely exact (rational alpha_j)."""
        return self.N in EXACT_PERIODS

    def two_cos(self, j: int) -> Fraction:
        """2cos(2 pi j / N), exact for EXACT_PERIODS, else rounded at RATIONAL_DPS."""
        N = self.N
        j %= N
        j = min(j, N - j) if j else 0
        if N in EXACT_PERIODS:
            return Fraction(_TWO_COS_30[(12 * j // N) % 12])
        with mpmath.workdps(RATIONAL_DPS):
            return _mpf_to_fraction(2 * mpmath.cos(2 * mpmath.pi * j / N))

    @cached_property
    def alpha_exact(self) -> tuple[Fraction, ...]:
        a = self.a_exact
        return tuple(a * self.two_cos(j) for j in range(self.N))

    @cached_property
    def alpha(self) -> np.ndarray:
        if self.exact:
            out = np.array([float(c) for c in self.alpha_exact])
        else:
            out = np.array([self.a * float(self.two_cos(j)) for j in range(self.N)])
        out[0] = 2.0 * self.a
        out.setflags(write=False)
        return out

    def mirrored(self) -> "RecurrenceSpec":
        """Same period with ``a`` replaced by ``-a``."""
        if self._a_exact is not None:
            return RecurrenceSpec(-self._a_exact, self.N)
        return RecurrenceSpec(-self.a, self.N)

    def __reduce__(self):
        return (RecurrenceSpec, (self._a_exact if self._a_exact is not None else self.a, self.N))


# -- polynomial construction -------------------------------------------------

@lru_cache(maxsize=64)
def _build_exact(spec: RecurrenceSpec, n_max: int) -> tuple[tuple[Poly, Poly], ...]:
    alpha = spec.alpha_exact
    one = Fraction(1)
    x2 = Poly([0, 2 * one])
    P = [Poly([one]), Poly([-alpha[0], 2 * one])]
    S = [Poly(), Poly([2 * one])]
    for n in range(1, n_max):
        c = x2 - alpha[n % spec.N]
        P.append(c * P[n] - P[n - 1])
        S.append(c * S[n] - S[n - 1])
    return tuple(zip(P[: n_max + 1], S[: n_max + 1]))


def build_polys(spec: RecurrenceSpec, n_max: int, exact: bool = True) -> list[tuple[Poly, Poly]]:
    """Pairs ``(P_k, P*_k)`` for ``k = 0..n_max`` as monomial-basis polynomials.

    ``exact=True`` uses Fraction coefficients (``a`` must be rational);
    ``exact=False`` builds the same polynomials in double precision.
    """
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    if exact:
        spec.a_exact  # raises DomainError for non-rational a
        return list(_build_exact(spec, n_max))
    alpha = spec.alpha
    x2 = Poly([0.0, 2.0])
    P = [Poly([1.0]), Poly([-float(alpha[0]), 2.0])]
    S = [Poly(), Poly([2.0])]
    for n in range(1, n_max):
        c = x2 - float(alpha[n % spec.N])
        P.append(c * P[n] - P[n - 1])
        S.append(c * S[n] - S[n - 1])
    return list(zip(P[: n_max + 1], S[: n_max + 1]))


# -- floating-point evaluation -----------------------------------------------

def p_table(spec: RecurrenceSpec, n_max: int, x, star: bool = False, deriv: bool = False):
    """Rows ``0..n_max`` of P (or P* with ``star=True``) at ``x``, by forward recurrence."""
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    return _kern.recurrence_table(spec.alpha, n_max, x, star, deriv)


def eval_P(spec: RecurrenceSpec, n: int, x):
    return p_table(spec, n, x)[n]


def eval_P_star(spec: RecurrenceSpec, n: int, x):
    if n == -1:
        return -2.0 + 0 * np.asarray(x)
    return p_table(spec, n, x, star=True)[n]


def eval_P_deriv(spec: RecurrenceSpec, n: int, x):
    return p_table(spec, n, x, deriv=True)[1][n]


def eval_ratio(spec: RecurrenceSpec, k: int, m: int, x: float) -> float:
    """``P_m(x) / P_k(x)`` for ``m >= k`` without intermediate overflow.

    The running pair is renormalised by its larger entry once per period.
    """
    if m < k:
        raise DomainError("eval_ratio needs m >= k")
    alpha = spec.alpha
    prev, cur = 0.0, 1.0
    for n in range(k):
        prev, cur = cur, (2 * x - alpha[n % spec.N]) * cur - prev
    if cur == 0:
        raise DomainError(f"P_{k}({x}) = 0; ratio undefined")
    prev, cur = prev / cur, 1.0
    log_scale = 0.0
    for n in range(k, m):
        prev, cur = cur, (2 * x - alpha[n % spec.N]) * cur - prev
        if (n - k) % spec.N == spec.N - 1:
            s = max(abs(prev), abs(cur))
            if s > 0:
                prev, cur = prev / s, cur / s
                log_scale += math.log(s)
    if cur == 0:
        return 0.0
    try:
        return math.copysign(math.exp(math.log(abs(cur)) + log_scale), cur)
    except OverflowError:
        return math.copysign(math.inf, cur)


def g_values(spec: RecurrenceSpec, x, deriv: bool = False):
    """g_N(x) = (P_N - P*_{N-1}/2)/2 evaluated by recurrence (optionally with g_N')."""
    N = spec.N
    if deriv:
        P, dP = p_table(spec, N, x, deriv=True)
        S, dS = p_table(spec, N - 1, x, star=True, deriv=True)
        S, dS = S[N - 1], dS[N - 1]
        return 0.5 * (P[N] - 0.5 * S), 0.5 * (dP[N] - 0.5 * dS)
    P = p_table(spec, N, x)
    S = p_table(spec, max(N - 1, 0), x, star=True)[N - 1]
    return 0.5 * (P[N] - 0.5 * S)


def symmetry_check(spec: RecurrenceSpec, n: int, x: float, rtol: float = 1e-12) -> bool:
    """Check ``P_n(x; -a) = (-1)^n P_n(-x; a)`` to relative tolerance ``rtol``."""
    lhs = float(eval_P(spec.mirrored(), n, x))
    rhs = (-1) ** n * float(eval_P(spec, n, -x))
    return abs(lhs - rhs) <= rtol * max(abs(lhs), abs(rhs), np.finfo(float).tiny)


# -- discriminant ------------------------------------------------------------

@dataclass(frozen=True)
class Discriminant:
    """g_N and its derivative; ``exact`` keeps the rational polynomial."""

    exact: Poly
    gN: Poly
    gN_prime: Poly

    def __call__(self, x):
        return self.gN(x)


@lru_cache(maxsize=64)
def discriminant(spec: RecurrenceSpec) -> Discriminant:
    """Build g_N = (P_N - P*_{N-1}/2)/2 exactly and cross-check P_{2N-1}/(2 P_{N-1})."""
    N = spec.N
    polys = build_polys(spec, 2 * N - 1)
    P_N, _ = polys[N]
    P_Nm1, S_Nm1 = polys[N - 1]
    g = (P_N - S_Nm1 / 2) / 2
    quot, rem = divmod(polys[2 * N - 1][0], P_Nm1 * 2)
    if rem or quot != g:
        raise ConsistencyError(f"P_(2N-1) / (2 P_(N-1)) != g_N for {spec}")
    return Discriminant(exact=g, gN=g.to_float(), gN_prime=g.deriv().to_float())


def transfer_trace(spec: RecurrenceSpec, x) -> complex | float:
    """Half the trace of the product of the N one-step transfer matrices."""
    x = np.asarray(x)
    one, zero = np.ones_like(x, dtype=np.result_type(x, float)), np.zeros_like(x, dtype=np.result_type(x, float))
    m00, m01, m10, m11 = one, zero, zero, one
    for n in range(spec.N):
        c = 2 * x - spec.alpha[n]
        # [[c, -1], [1, 0]] @ m
        m00, m01, m10, m11 = c * m00 - m10, c * m01 - m11, m00, m01
    out = 0.5 * (m00 + m11)
    return out[()] if out.ndim == 0 else out


# -- Chebyshev reduction -----------------------------------------------------

def chebyshev_u(n: int, t):
    """U_n(t) by recurrence, with U_{-1} = 0 and U_{-2} = -1."""
    if n == -2:
        return -1.0 + 0 * t
    if n == -1:
        return 0.0 * t
    u_prev, u = 0.0 * t, 1.0 + 0 * t
    for _ in range(n):
        u_prev, u = u, 2 * t * u - u_prev
    return u


def chebyshev_shift_residual(spec: RecurrenceSpec, k: int, j: int, x: float, star: bool = False):
    """``(lhs, rhs)`` of P_{k+jN} = P_{k+N} U_{j-1}(g) - P_k U_{j-2}(g) (or the P* analogue)."""
    if k < 0 or j < 1:
        raise DomainError("need k >= 0 and j >= 1")
    N = spec.N
    tab = p_table(spec, k + j * N, x, star=star)
    g = float(g_values(spec, x))
    lhs = float(tab[k + j * N])
    rhs = float(tab[k + N]) * chebyshev_u(j - 1, g) - float(tab[k]) * chebyshev_u(j - 2, g)
    return lhs, rhs


def chebyshev_shift_check(spec: RecurrenceSpec, k: int, j: int, x: float, star: bool = False) -> bool:
    lhs, rhs = chebyshev_shift_residual(spec, k, j, x, star=star)
    return abs(lhs - rhs) <= max(1e-10, 1e-13 * abs(lhs))


def ratio_asymptotics(spec: RecurrenceSpec, k: int, x: float) -> tuple[float, float, float]:
    """``(theta, rho, phase)`` with P_{k+jN}/P_k = rho sin(j theta + phase) / sin(theta).

    ``x`` must lie strictly inside a band (|g_N(x)| < 1) and ``P_k(x) != 0``.
    """
    g = float(g_values(spec, x))
    if not abs(g) < 1:
        raise DomainError(f"|g_N({x})| = {abs(g):.3g} >= 1: x is not inside a band")
    theta = math.acos(g)
    ratio = eval_ratio(spec, k, k + spec.N, x)
    rc = ratio - math.cos(theta)
    rs = math.sin(theta)
    rho = math.hypot(rc, rs)
    phase = math.atan2(rs, rc) % (2 * math.pi)
    return theta, rho, phase
