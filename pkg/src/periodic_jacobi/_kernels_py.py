"""Pure-Python/numpy versions of the hot kernels.

Loaded when the compiled ``_ckernels`` extension is unavailable, or when
``PJ_PURE_PYTHON=1`` is set. Signatures and results must match
``_ckernels.pyx`` exactly (up to floating-point rounding order).
"""

import numpy as np

NAME = "python"

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny


def sturm_count(diag, off, x):
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``."""
    n = len(diag)
    pivmin = _TINY * max(1.0, max((e * e for e in off), default=1.0))
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, n):
        q = diag[i] - x - off[i - 1] * off[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def tridiag_eigvals(diag, off, abstol):
    """All eigenvalues by Sturm-count bisection, ascending.

    ``abstol`` is the absolute width at which bisection stops; intervals
    are also split until the midpoint is no longer representable.
    """
    diag = [float(d) for d in diag]
    off = [float(e) for e in off]
    n = len(diag)
    radii = [0.0] * n
    for i, e in enumerate(off):
        radii[i] += abs(e)
        radii[i + 1] += abs(e)
    glo = min(d - r for d, r in zip(diag, radii))
    ghi = max(d + r for d, r in zip(diag, radii))
    span = max(abs(glo), abs(ghi), _TINY)
    glo -= 2 * _EPS * span + 2 * _TINY
    ghi += 2 * _EPS * span + 2 * _TINY
    out = np.empty(n)
    lo_prev = glo
    for k in range(n):
        lo, hi = lo_prev, ghi
        while True:
            mid = 0.5 * (lo + hi)
            if hi - lo <= abstol or mid <= lo or mid >= hi:
                break
            if sturm_count(diag, off, mid) > k:
                hi = mid
            else:
                lo = mid
        out[k] = 0.5 * (lo + hi)
        lo_prev = lo
    return out


def recurrence_table(alpha, n_max, x, star, deriv):
    """Rows ``0..n_max`` of the periodic three-term recurrence at points ``x``.

    ``v[n+1] = (2x - alpha[n % N]) v[n] - v[n-1]`` with ``v[0], v[1]`` equal
    to ``1, 2x - alpha[0]`` (``star=False``) or ``0, 2`` (``star=True``).
    With ``deriv=True`` returns ``(values, d/dx values)``.
    """
    x = np.asarray(x)
    dtype = np.result_type(x.dtype, float)
    alpha = np.asarray(alpha, dtype=float)
    period = len(alpha)
    vals = np.zeros((n_max + 1,) + x.shape, dtype=dtype)
    ders = np.zeros_like(vals) if deriv else None
    if star:
        vals[0] = 0.0
        if n_max >= 1:
            vals[1] = 2.0
    else:
        vals[0] = 1.0
        if n_max >= 1:
            vals[1] = 2.0 * x - alpha[0]
            if deriv:
                ders[1] = 2.0
    for n in range(1, n_max):
        c = 2.0 * x - alpha[n % period]
        vals[n + 1] = c * vals[n] - vals[n - 1]
        if deriv:
            ders[n + 1] = 2.0 * vals[n] + c * ders[n] - ders[n - 1]
    if deriv:
        return vals, ders
    return vals


def continued_fraction(alpha, z, depth):
    """Bottom-up value of ``2/(2z-a0 - 1/(2z-a1 - ... 1/(2z-a_{depth-1})))``.

    Returns ``(value, ok)``; ``ok`` is False when a partial denominator
    underflowed, which callers treat as a request to retry at another depth.
    """
    z = np.asarray(z, dtype=complex)
    alpha = np.asarray(alpha, dtype=float)
    period = len(alpha)
    tail = np.zeros_like(z)
    ok = True
    floor = 1e3 * _TINY
    for n in range(depth - 1, -1, -1):
        den = 2.0 * z - alpha[n % period] - tail
        if np.any(np.abs(den) < floor):
            ok = False
            den = np.where(np.abs(den) < floor, floor, den)
        tail = 1.0 / den
    res = 2.0 * tail
    if res.ndim == 0:
        res = res[()]
    return res, ok
