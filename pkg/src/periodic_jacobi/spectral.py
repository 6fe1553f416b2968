"""Stieltjes transform phi(z), its continued fraction, and the spectral data of the
doubly infinite Jacobi matrix with diagonal a cos(2 pi j / N) and off-diagonal 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._factored import BandProduct
from .bands import BandStructure, turning_points
from .errors import ConsistencyError, DomainError, ExtrapolationError
from .kernels import backend as _kern
from .measure import collapsed_zeros, integrate_band, orthogonality_measure
from .recurrence import RecurrenceSpec, g_values, p_table

__all__ = [
    "BranchedSqrt",
    "SpectralDensities",
    "branched_sqrt",
    "phi_closed",
    "phi_cf",
    "period_map",
    "quadratic_residual",
    "resolvent_entries",
    "spectral_densities",
    "plemelj_extract",
    "truncated_resolvent",
    "EPS_LADDER",
]

EPS_LADDER = (1e-4, 1e-5, 1e-6)
_CF_RETRIES = 8
_RESOLVENT_TOL = 1e-9


@dataclass(frozen=True)
class BranchedSqrt:
    """sqrt(g_N(z)^2 - 1) as 2^(N-1) prod_j (z - xi_j)^(1/2), principal branch per factor."""

    xi: np.ndarray
    N: int

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, 2.0 ** (self.N - 1), dtype=complex)
        for p in self.xi:
            out = out * np.sqrt(z - p)
        return out[()] if out.ndim == 0 else out


def branched_sqrt(spec: RecurrenceSpec) -> BranchedSqrt:
    return BranchedSqrt(np.asarray(turning_points(spec).xi), spec.N)


def _pieces(spec, z):
    N = spec.N
    P = p_table(spec, N, z)
    S = p_table(spec, N, z, star=True)
    g = 0.5 * (P[N] - 0.5 * S[N - 1])
    return P[N], P[N - 1], S[N], g


def _massive_pole(spec, z):
    mu = orthogonality_measure(spec)
    return any(m > 0 and z == y for y, m in mu.masses)


def phi_closed(spec: RecurrenceSpec, z):
    """phi(z) = 2 (P_N - g_N - sqrt) / P_{N-1} = P*_N / (P_N - g_N + sqrt).

    Both expressions are equal; each point uses the one whose denominator
    factor ``P_N - g_N -/+ sqrt`` is larger in modulus, which removes the 0/0
    at massless zeros of P_{N-1} and the cancellation in the other form.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag == 0):
        for zv in z[z.imag == 0].ravel():
            if _massive_pole(spec, zv.real):
                raise DomainError(f"z = {zv.real!r} is a pole of phi (mass point)")
    PN, PNm1, SN, g = _pieces(spec, z)
    root = branched_sqrt(spec)(z)
    minus = PN - g - root
    plus = PN - g + root
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(np.abs(plus) >= np.abs(minus), SN / plus, 2 * minus / PNm1)
    return out[()] if out.ndim == 0 else out


def phi_cf(spec: RecurrenceSpec, z, depth: int = 400):
    """Continued fraction 2/(2z - alpha_0 - 1/(2z - alpha_1 - ...)) truncated at ``depth``.

    Evaluated bottom-up with tail 0.  A near-zero partial denominator makes
    the kernel flag the result and the evaluation is repeated one level deeper.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag == 0):
        raise DomainError("phi_cf needs Im z != 0")
    for extra in range(_CF_RETRIES + 1):
        val, ok = _kern.continued_fraction(spec.alpha, z, depth + extra)
        if ok:
            return val
    raise ConsistencyError(f"continued fraction hit a zero denominator at depths {depth}..{depth + _CF_RETRIES}")


def period_map(spec: RecurrenceSpec, z, phi):
    """One period of the fraction: 2/(2z - alpha_0 - 1/(... - 1/(2z - alpha_{N-1} - phi/2)))."""
    z = np.asarray(z, dtype=complex)
    tail = np.asarray(phi, dtype=complex) / 2
    for n in range(spec.N - 1, -1, -1):
        tail = 1.0 / (2 * z - spec.alpha[n] - tail)
    return 2 * tail


def quadratic_residual(spec: RecurrenceSpec, z) -> complex:
    """Residual of the equation phi satisfies, relative to the size of its terms.

    N = 1: phi^2 - 4(z-a) phi + 4.  N = 2: (z-a) phi^2 - 4(z^2-a^2) phi + 4(z+a).
    Otherwise the fixed-point defect of :func:`period_map`.
    """
    z = complex(z)
    if z.imag == 0:
        raise DomainError("quadratic_residual needs Im z != 0")
    a = spec.a
    phi = complex(phi_closed(spec, z))
    if spec.N == 1:
        terms = (phi * phi, -4 * (z - a) * phi, 4.0)
    elif spec.N == 2:
        terms = ((z - a) * phi * phi, -4 * (z * z - a * a) * phi, 4 * (z + a))
    else:
        mapped = complex(period_map(spec, z, phi))
        return (mapped - phi) / max(1.0, abs(phi))
    return sum(terms) / max(1.0, max(abs(t) for t in terms))


def resolvent_entries(spec: RecurrenceSpec, z, check: bool = True):
    """Centre entries ``(r00, r01, r11)`` of (z - A)^{-1} for the doubly infinite matrix.

    Computed from phi; with ``check`` the simplified forms P*_N/(2 sqrt) and
    P_{N-1}/sqrt are evaluated too and must agree to 1e-9.
    """
    z = complex(z)
    if z.imag == 0:
        raise DomainError("resolvent_entries needs Im z != 0")
    a = spec.a
    phi = complex(phi_closed(spec, z))
    c = z - a
    den = 2 - c * phi
    r00 = phi / den
    r01 = -2 * (1 - c * phi) / den
    r11 = -(4 / phi) * (1 - c * phi) / den
    if check:
        _, PNm1, SN, _ = _pieces(spec, z)
        root = complex(branched_sqrt(spec)(z))
        alt = (complex(SN) / (2 * root), complex(PNm1) / root)
        for name, got, want in (("r00", r00, alt[0]), ("r11", r11, alt[1])):
            if abs(got - want) > _RESOLVENT_TOL * max(1.0, abs(want)):
                raise ConsistencyError(f"{name} forms disagree at z={z}: {got} vs {want}")
    return r00, r01, r11


def truncated_resolvent(spec: RecurrenceSpec, z, M: int = 400):
    """``(r00, r01, r11)`` from the (2M+1)-sized truncation, indices -M..M.

    Row j carries a cos(2 pi j / N) on the diagonal; entries are read at
    rows/columns 0 and 1.
    """
    from scipy.linalg import solve_banded

    z = complex(z)
    j = np.arange(-M, M + 1)
    diag = spec.a * np.cos(2 * np.pi * j / spec.N)
    n = 2 * M + 1
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = -0.5
    ab[1] = z - diag
    ab[2, :-1] = -0.5
    rhs = np.zeros((n, 2), dtype=complex)
    rhs[M, 0] = 1.0
    rhs[M + 1, 1] = 1.0
    sol = solve_banded((1, 1), ab, rhs)
    return sol[M, 0], sol[M, 1], sol[M + 1, 1]


@dataclass(frozen=True)
class SpectralDensities:
    """Densities of mu_00, mu_01, mu_11 on the bands.

    d00 = |P*_N| / (2 pi sqrt(1-g^2)), d01 = (x-a) d00, d11 = |P_{N-1}| / (pi sqrt(1-g^2)).
    """

    spec: RecurrenceSpec
    bands: BandStructure

    def band_products(self, k: int):
        """Factored (d00, d01, d11) on band ``k`` for quadrature with endpoint distances."""
        bs = self.bands
        lo, hi = bs.bands[k - 1]
        root = [(float(p), -0.5) for p in bs.xi]
        z_terms = [(p, 1.0) for p in collapsed_zeros(bs, bs.zeros.z)]
        y_terms = [(p, 1.0) for p in collapsed_zeros(bs, bs.zeros.y)]
        # P*_N has leading coefficient 2^N, sqrt(1 - g^2) has 2^(N-1)
        d00 = BandProduct(root + z_terms, lo, hi, const=1.0 / math.pi)
        d01 = BandProduct(root + z_terms + [(self.spec.a, 1.0)], lo, hi,
                          const=1.0 / math.pi, sign_point=self.spec.a)
        d11 = BandProduct(root + y_terms, lo, hi, const=1.0 / math.pi)
        return d00, d01, d11

    def _direct(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(self.bands.in_bands(x)):
            raise DomainError("spectral densities are defined on band interiors only")
        N = self.spec.N
        g = g_values(self.spec, x)
        s = np.sqrt(1.0 - g * g)
        PNm1 = p_table(self.spec, N - 1, x)[N - 1]
        SN = p_table(self.spec, N, x, star=True)[N]
        d00 = np.abs(SN) / (2 * math.pi * s)
        return d00, (x - self.spec.a) * d00, np.abs(PNm1) / (math.pi * s)

    def d00(self, x):
        return self._direct(x)[0]

    def d01(self, x):
        return self._direct(x)[1]

    def d11(self, x):
        return self._direct(x)[2]

    def matrix(self, x) -> np.ndarray:
        d00, d01, d11 = self._direct(x)
        return np.moveaxis(np.array([[d00, d01], [d01, d11]]), (0, 1), (-2, -1))

    def integrate(self, f=None) -> np.ndarray:
        """``int f(x) d mu_ij`` for (00, 01, 11), by band quadrature of the factored densities."""
        total = np.zeros(3)
        for k, band in enumerate(self.bands.bands, start=1):
            d00, d01, d11 = self.band_products(k)

            def integrand(x, dl, dr):
                fx = 1.0 if f is None else f(x)
                return np.vstack([d00(x, dl, dr), d01(x, dl, dr), d11(x, dl, dr)]) * fx

            total = total + integrate_band(integrand, band, with_distances=True)
        return total


def spectral_densities(spec: RecurrenceSpec) -> SpectralDensities:
    return SpectralDensities(spec, turning_points(spec))


def plemelj_extract(S, x: float, eps=EPS_LADDER, bands: BandStructure | None = None) -> float:
    """Density (S(x - i eps) - S(x + i eps)) / (2 pi i), Richardson-extrapolated to eps = 0.

    The ladder must shrink by a constant ratio; two elimination steps remove
    the O(eps) and O(eps^2) terms.  A sequence whose successive differences
    do not contract (above the rounding floor) raises ExtrapolationError.
    """
    if bands is not None and bands.band_index(x) is None:
        raise DomainError(f"x = {x!r} is not inside a band")
    eps = tuple(float(e) for e in eps)
    if len(eps) != 3:
        raise DomainError("the eps ladder needs exactly three values")
    r = eps[0] / eps[1]
    if not math.isclose(eps[1] / eps[2], r, rel_tol=1e-12) or r <= 1:
        raise DomainError("the eps ladder must be geometric and decreasing")
    vals = [((complex(S(x - 1j * e)) - complex(S(x + 1j * e))) / (2j * math.pi)).real for e in eps]
    d1, d2 = vals[1] - vals[0], vals[2] - vals[1]
    floor = 1e-9 * max(1.0, max(abs(v) for v in vals))
    if abs(d2) > floor and abs(d2) > abs(d1):
        raise ExtrapolationError(f"Plemelj sequence does not contract at x={x}: {vals}")
    first = [(r * vals[i + 1] - vals[i]) / (r - 1) for i in range(2)]
    return (r * r * first[1] - first[0]) / (r * r - 1)
