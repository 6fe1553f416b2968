"""Zeros of P_N, P_{N-1}, P*_N and the turning points of the band spectrum.

The turning points xi_1 <= ... <= xi_2N are the real roots of g_N^2 = 1.
Band k is the open interval (xi_{2k-1}, xi_{2k}); two neighbouring bands
touch when xi_{2k} = xi_{2k+1} is a double root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConsistencyError, DomainError, TurningPointError
from .kernels import backend as _kern
from .recurrence import RecurrenceSpec, g_values, p_table

__all__ = [
    "ZeroSets",
    "BandStructure",
    "ConjectureReport",
    "tridiag_eigs",
    "zero_sets",
    "b_bound",
    "turning_points",
    "conjecture_scan",
    "band_grid",
    "DOUBLE_ROOT_DELTA",
]

#: Tolerance on max((-1)^(N-k) g_N) - 1 below which a tangency is declared.
DOUBLE_ROOT_DELTA = 1e-10

_EPS = np.finfo(float).eps

# |g_N -/+ 1| at a bracket end below which the end itself is taken as the root
_ZERO_SLACK = 1e-12


def tridiag_eigs(diag, offdiag, abstol: float | None = None) -> np.ndarray:
    """Eigenvalues of a real symmetric tridiagonal matrix, ascending.

    Sturm-sequence bisection; the default ``abstol`` is a few ulps of the
    Gershgorin radius, well inside the 1e-13 relative target.
    """
    diag = np.asarray(diag, dtype=float).ravel()
    offdiag = np.asarray(offdiag, dtype=float).ravel()
    if diag.size == 0:
        raise DomainError("tridiag_eigs needs a non-empty diagonal")
    if offdiag.size != diag.size - 1:
        raise DomainError(
            f"off-diagonal has length {offdiag.size}, expected {diag.size - 1}"
        )
    if abstol is None:
        pad = np.zeros(diag.size)
        pad[:-1] += np.abs(offdiag)
        pad[1:] += np.abs(offdiag)
        radius = float(np.max(np.abs(diag) + pad))
        abstol = 4 * _EPS * max(radius, 1.0)
    return _kern.tridiag_eigvals(diag, offdiag, abstol)


@dataclass(frozen=True)
class ZeroSets:
    """Sorted zeros: ``x`` of P_N, ``y`` of P_{N-1}, ``z`` of P*_N."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray


def _check_zeros(spec, roots, n, star):
    if roots.size == 0:
        return
    vals, ders = p_table(spec, n, roots, star=star, deriv=True)
    bad = np.abs(vals[n]) > 1e-8 * np.maximum(np.abs(ders[n]), 1.0)
    if np.any(bad):
        raise ConsistencyError(f"eigenvalue-based zeros of degree-{n} polynomial fail residual check")


@lru_cache(maxsize=256)
def zero_sets(spec: RecurrenceSpec) -> ZeroSets:
    """Zeros from the tridiagonal matrices T (N x N), T+ and T- (both N-1 x N-1).

    T carries alpha_0..alpha_{N-1} on its diagonal and ones off it; 2 x_j are
    its eigenvalues. T+ drops the last row/column, T- the first.
    """
    N = spec.N
    alpha = np.asarray(spec.alpha)
    ones = np.ones(max(N - 1, 0))
    x = tridiag_eigs(alpha, ones) / 2
    if N >= 2:
        y = tridiag_eigs(alpha[:-1], ones[:-1]) / 2
        z = tridiag_eigs(alpha[1:], ones[:-1]) / 2
    else:
        y = z = np.empty(0)
    _check_zeros(spec, x, N, star=False)
    _check_zeros(spec, y, N - 1, star=False)
    _check_zeros(spec, z, N, star=True)
    for arr in (x, y, z):
        arr.setflags(write=False)
    return ZeroSets(x=x, y=y, z=z)


def b_bound(a: float) -> float:
    """Radius of an interval (-b, b) containing every turning point."""
    a = abs(a)
    return 1.0 + a if a >= 1 else 2.0


@dataclass(frozen=True)
class BandStructure:
    spec: RecurrenceSpec
    xi: np.ndarray
    double_roots: tuple[int, ...]
    b: float
    zeros: ZeroSets = field(repr=False)

    @property
    def bands(self) -> list[tuple[float, float]]:
        return [(float(self.xi[2 * k]), float(self.xi[2 * k + 1])) for k in range(self.spec.N)]

    def merged_support(self) -> list[tuple[float, float]]:
        """Closed support intervals, with bands joined across double roots."""
        out = []
        for k, (lo, hi) in enumerate(self.bands, start=1):
            if out and (k - 1) in self.double_roots:
                out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
        return out

    def band_index(self, x: float) -> int | None:
        """1-based index of the open band containing ``x``, else None."""
        for k, (lo, hi) in enumerate(self.bands, start=1):
            if lo < x < hi:
                return k
        return None

    def in_bands(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mask = np.zeros(x.shape, dtype=bool)
        for lo, hi in self.bands:
            mask |= (x > lo) & (x < hi)
        return mask


def _bisect(f, lo, hi, flo):
    """Root of ``f`` in [lo, hi] given ``flo <= 0 <= f(hi)``; bisects to full precision."""
    if flo == 0:
        return lo
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid


def _polish(spec, x, target, lo, hi):
    """Two guarded Newton steps on g_N - target."""
    for _ in range(2):
        g, dg = g_values(spec, x, deriv=True)
        g, dg = float(g), float(dg)
        if dg == 0:
            break
        step = x - (g - target) / dg
        if not (lo <= step <= hi):
            break
        if abs(float(g_values(spec, step)) - target) > abs(g - target):
            break
        x = step
    return x


def _critical_point(spec, x0, lo, hi):
    """Zero of g_N' near ``x0`` by Newton, confined to [lo, hi]."""
    x = x0
    h = 1e-6 * max(1.0, abs(x0))
    for _ in range(30):
        _, d0 = g_values(spec, x, deriv=True)
        _, dp = g_values(spec, x + h, deriv=True)
        _, dm = g_values(spec, x - h, deriv=True)
        d2 = (float(dp) - float(dm)) / (2 * h)
        if d2 == 0:
            break
        nxt = min(max(x - float(d0) / d2, lo), hi)
        if abs(nxt - x) <= 4 * _EPS * max(1.0, abs(x)):
            x = nxt
            break
        x = nxt
    return x


def _turning_points_positive(spec: RecurrenceSpec, delta: float):
    N = spec.N
    zs = zero_sets(spec)
    b = b_bound(spec.a)
    ext = [-b, *map(float, zs.y), b]

    def g(x):
        return float(g_values(spec, x))

    xi = np.empty(2 * N)
    doubles = []
    for k in range(1, N + 1):
        s = (-1) ** (N - k)
        lo, hi = ext[k - 1], ext[k]
        # left end of band k: s*g = -1, shared with the previous band on a double root
        if (k - 1) in doubles:
            xi[2 * k - 2] = xi[2 * k - 3]
        else:
            f_lo = s * g(lo) + 1
            if 0 < f_lo <= _ZERO_SLACK:
                f_lo = 0.0
            if f_lo > 0:
                raise TurningPointError(f"no sign change for xi_{2 * k - 1} in [{lo}, {hi}] ({spec})")
            r = _bisect(lambda t: s * g(t) + 1, lo, hi, f_lo)
            xi[2 * k - 2] = _polish(spec, r, -s, lo, hi)
        # right end of band k: s*g = +1
        right = hi
        if k < N:
            v = s * g(hi) - 1
            if v < delta:
                c = _critical_point(spec, hi, ext[k - 1], ext[k + 1])
                vmax = s * g(c) - 1
                if abs(vmax) < delta:
                    xi[2 * k - 1] = c
                    doubles.append(k)
                    continue
                if vmax <= -delta:
                    raise TurningPointError(f"g_N misses the value {s} near y_{k} ({spec})")
                if v <= 0:
                    right = c
        f_lo = s * g(lo) - 1
        r = _bisect(lambda t: s * g(t) - 1, lo, right, f_lo)
        xi[2 * k - 1] = _polish(spec, r, s, lo, right)
    if not np.all(np.isfinite(xi)) or np.any(np.diff(xi) < -1e-12):
        raise TurningPointError(f"turning points out of order for {spec}: {xi}")
    return np.sort(xi), tuple(doubles), b, zs


@lru_cache(maxsize=256)
def turning_points(spec: RecurrenceSpec, delta: float = DOUBLE_ROOT_DELTA) -> BandStructure:
    """All 2N roots of g_N^2 = 1 (double roots listed twice) and the band layout."""
    N = spec.N
    a = spec.a
    if N == 1:
        xi = np.array([a - 1.0, a + 1.0])
        return _freeze(spec, xi, (), b_bound(a), zero_sets(spec))
    if a == 0:
        # Chebyshev case: g_N = T_N, every interior extremum is a double root.
        pts = [math.cos(math.pi * (N - j) / N) for j in range(N + 1)]
        xi = np.array([pts[0], *[p for p in pts[1:-1] for _ in (0, 1)], pts[-1]])
        return _freeze(spec, xi, tuple(range(1, N)), b_bound(a), zero_sets(spec))
    if a < 0:
        mirror = turning_points(spec.mirrored(), delta)
        xi = -mirror.xi[::-1]
        doubles = tuple(sorted(N - k for k in mirror.double_roots))
        return _freeze(spec, xi, doubles, mirror.b, zero_sets(spec))
    xi, doubles, b, zs = _turning_points_positive(spec, delta)
    if xi.size != 2 * N:
        raise TurningPointError(f"found {xi.size} turning points, expected {2 * N}")
    return _freeze(spec, xi, doubles, b, zs)


def _freeze(spec, xi, doubles, b, zs):
    xi = np.array(xi, dtype=float)
    xi.setflags(write=False)
    return BandStructure(spec=spec, xi=xi, double_roots=doubles, b=b, zeros=zs)


@dataclass(frozen=True)
class ConjectureReport:
    common_eigenvalue_found: bool
    value: float | None
    min_gap: float


def conjecture_scan(spec: RecurrenceSpec, tol: float = 1e-10) -> ConjectureReport:
    """Closest approach between the spectra of T- and T+ (shared-eigenvalue test)."""
    if not spec.a > 0:
        raise DomainError("conjecture_scan expects a > 0")
    N = spec.N
    if N < 2:
        return ConjectureReport(False, None, math.inf)
    alpha = np.asarray(spec.alpha)
    ones = np.ones(N - 2)
    minus = tridiag_eigs(alpha[1:], ones)
    plus = tridiag_eigs(alpha[:-1], ones)
    gaps = np.abs(minus[:, None] - plus[None, :])
    i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
    gap = float(gaps[i, j])
    found = gap < tol
    value = 0.5 * float(minus[i] + plus[j]) if found else None
    return ConjectureReport(found, value, gap)


def band_grid(bands: BandStructure, points: int) -> list[np.ndarray]:
    """Chebyshev nodes (first kind) inside each band: denser near the ends, never on them."""
    if points < 2:
        raise DomainError("need at least two points per band")
    theta = (2 * np.arange(points, 0, -1) - 1) * math.pi / (2 * points)
    out = []
    for lo, hi in bands.bands:
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        out.append(mid + half * np.cos(theta))
    return out
