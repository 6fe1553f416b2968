"""The orthogonality measure dmu = w(x) dx + sum_k m_k delta_{y_k}.

On band k the weight is

    w(x) = 2 sqrt|1 - g_N(x)^2| / (pi |P_{N-1}(x)|)
         = (2/pi) sqrt(prod_j |x - xi_j|) / prod_i |x - y_i|,

the second form following from the leading coefficients 2^(N-1) of g_N and
P_{N-1}.  Quadrature uses the factored form: the two band-end factors come
straight from the node map and a double root xi_{2k} = xi_{2k+1} = y_k
cancels against |x - y_k|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._factored import BandProduct
from .bands import BandStructure, ZeroSets, turning_points, zero_sets
from .errors import DomainError
from .quadrature import tanh_sinh
from .recurrence import RecurrenceSpec, g_values, p_table

__all__ = [
    "OrthogonalityMeasure",
    "orthogonality_measure",
    "weight",
    "masses",
    "integrate_band",
    "band_weight_product",
    "collapsed_zeros",
    "total_mass",
    "gram_matrix",
    "stieltjes_numeric",
    "moments_operator",
    "MASS_THRESHOLD",
    "MAX_GRAM_DEGREE",
]

#: |P_N(y_k)| at or above this counts as the massless branch.
MASS_THRESHOLD = 1.0 - 1e-12
MAX_GRAM_DEGREE = 24
_COINCIDE = 1e-13


def _direct_weight(spec, x):
    g = g_values(spec, x)
    p = p_table(spec, spec.N - 1, x)[spec.N - 1]
    return 2.0 * np.sqrt(np.abs(1.0 - g * g)) / (math.pi * np.abs(p))


def weight(spec: RecurrenceSpec, bands: BandStructure, x):
    """w(x) from the closed form; also accepts the junction point of a double root.

    At a flagged double root the value is the limit, read off the factored
    form where the double turning point cancels the zero of P_{N-1}.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape)
    junctions = {k: float(bands.xi[2 * k - 1]) for k in bands.double_roots}
    ys = bands.zeros.y
    for i, xv in enumerate(xs.flat):
        hit = [k for k, c in junctions.items() if abs(xv - c) <= _COINCIDE * max(1.0, abs(c))]
        if hit:
            # the double root cancels against y_k in the factored form, leaving the exact limit
            out.flat[i] = float(band_weight_product(bands, hit[0]).at(junctions[hit[0]]))
            continue
        if bands.band_index(xv) is None:
            raise DomainError(f"x = {xv!r} is not inside a band")
        if ys.size and np.any(ys == xv):
            raise DomainError(f"x = {xv!r} is a zero of P_(N-1) carrying no removable singularity")
        out.flat[i] = _direct_weight(spec, np.array([xv]))[0]
    return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])


def masses(spec: RecurrenceSpec, zs: ZeroSets | None = None) -> list[tuple[float, float]]:
    """Point masses ``(y_k, m_k)``; zero on the branch |P_N(y_k)| >= 1 and in closed gaps."""
    N = spec.N
    if N == 1:
        return []
    zs = zero_sets(spec) if zs is None else zs
    y = zs.y
    vals, ders = p_table(spec, N, y, deriv=True)
    g = g_values(spec, y)
    closed = turning_points(spec).double_roots
    out = []
    for k in range(y.size):
        if k + 1 in closed or abs(vals[N, k]) >= MASS_THRESHOLD:
            m = 0.0
        else:
            m = 4.0 * math.sqrt(abs(g[k] ** 2 - 1.0)) / abs(ders[N - 1, k])
        out.append((float(y[k]), m))
    return out


def collapsed_zeros(bands: BandStructure, zeros) -> list[float]:
    """Gap zeros with the one in each gap flagged double moved onto the double point.

    A near-tangency flagged double leaves the zero a hair away from the
    collapsed turning points; moving it keeps the factors cancelling.
    """
    out = [float(p) for p in zeros]
    for k in bands.double_roots:
        out[k - 1] = float(bands.xi[2 * k - 1])
    return out


def band_weight_product(bands: BandStructure, k: int) -> BandProduct:
    """Factored weight on band ``k`` (1-based): (2/pi) prod|x-xi_j|^(1/2) / prod|x-y_i|."""
    terms = [(float(p), 0.5) for p in bands.xi] + [(p, -1.0) for p in collapsed_zeros(bands, bands.zeros.y)]
    lo, hi = bands.bands[k - 1]
    return BandProduct(terms, lo, hi, const=2.0 / math.pi)


def integrate_band(f, band: tuple[float, float], with_distances: bool = False, **kw):
    """Tanh-sinh integral of ``f`` over the open ``band``.

    ``f(x)`` returns an array over the nodes (optionally stacked as
    ``(K, n)``); with ``with_distances=True`` it is called as
    ``f(x, dl, dr)`` with accurately computed distances to the ends.
    """
    lo, hi = band
    g = f if with_distances else (lambda x, dl, dr: f(x))
    return tanh_sinh(g, float(lo), float(hi), **kw).value


@dataclass(frozen=True)
class OrthogonalityMeasure:
    spec: RecurrenceSpec
    bands: BandStructure
    masses: tuple[tuple[float, float], ...]

    def weight(self, x):
        return weight(self.spec, self.bands, x)

    def band_weight(self, k: int, x, dl, dr):
        """Factored weight on band ``k`` given endpoint distances."""
        return band_weight_product(self.bands, k)(x, dl, dr)

    def integrate(self, f, include_masses: bool = True, per_band: bool = False):
        """``int f dmu``; ``f`` maps an array of x to an array ``(..., len(x))``.

        Bands are summed in ascending order, then the masses.  With
        ``per_band=True`` the list of band integrals is returned as well.
        """
        parts = []
        for k, band in enumerate(self.bands.bands, start=1):
            w = band_weight_product(self.bands, k)

            def integrand(x, dl, dr, w=w):
                return np.asarray(f(x)) * w(x, dl, dr)

            parts.append(integrate_band(integrand, band, with_distances=True))
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        if include_masses:
            for y, m in self.masses:
                if m > 0:
                    total = total + m * np.asarray(f(np.array([y])))[..., 0]
        return (total, parts) if per_band else total


@lru_cache(maxsize=128)
def orthogonality_measure(spec: RecurrenceSpec) -> OrthogonalityMeasure:
    bs = turning_points(spec)
    return OrthogonalityMeasure(spec, bs, tuple(masses(spec, bs.zeros)))


def total_mass(spec: RecurrenceSpec) -> float:
    """Band integrals of w plus the point masses; equals 1."""
    mu = orthogonality_measure(spec)
    return float(mu.integrate(np.ones_like))


def gram_matrix(spec: RecurrenceSpec, max_deg: int, include_masses: bool = True) -> np.ndarray:
    """``G[m, n] = int P_m P_n dmu`` for ``m, n <= max_deg``."""
    if not 0 <= max_deg <= MAX_GRAM_DEGREE:
        raise DomainError(f"max_deg must lie in [0, {MAX_GRAM_DEGREE}]")
    iu, ju = np.triu_indices(max_deg + 1)

    def f(x):
        tab = p_table(spec, max_deg, x)
        return tab[iu] * tab[ju]

    vals = orthogonality_measure(spec).integrate(f, include_masses=include_masses)
    G = np.zeros((max_deg + 1, max_deg + 1))
    G[iu, ju] = vals
    G[ju, iu] = vals
    return G


def stieltjes_numeric(spec: RecurrenceSpec, z: complex) -> complex:
    """``int dmu(x) / (z - x)`` by quadrature; needs Im z != 0."""
    z = complex(z)
    if z.imag == 0:
        raise DomainError("stieltjes_numeric needs Im z != 0")
    mu = orthogonality_measure(spec)
    return complex(mu.integrate(lambda x: 1.0 / (z - x)))


def moments_operator(spec: RecurrenceSpec, k_max: int) -> np.ndarray:
    """``int x^k dmu`` for ``k <= k_max`` as ``(J^k)_{00}`` of the Jacobi matrix.

    J has diagonal alpha_n / 2 and off-diagonal 1/2; a truncation of size
    ``k_max // 2 + 2`` is exact for these entries.
    """
    n = k_max // 2 + 2
    diag = np.array([spec.alpha[j % spec.N] / 2 for j in range(n)])
    J = np.diag(diag) + np.diag(np.full(n - 1, 0.5), 1) + np.diag(np.full(n - 1, 0.5), -1)
    out = np.empty(k_max + 1)
    v = np.zeros(n)
    v[0] = 1.0
    for k in range(k_max + 1):
        out[k] = v[0]
        v = J @ v
    return out
