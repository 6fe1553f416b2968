"""Products c * prod_p |x - p|^e_p evaluated on one band with exact endpoint distances.

Points closer than ``MERGE_TOL`` are merged and their exponents summed, so
a double turning point sitting on a zero of P_{N-1} cancels out instead of
producing 0/0.
"""

from __future__ import annotations

import numpy as np

MERGE_TOL = 1e-10


def _close(p, q):
    return abs(p - q) <= MERGE_TOL * max(1.0, abs(p), abs(q))


def merge(terms) -> list[tuple[float, float]]:
    """Collapse ``(point, exponent)`` pairs; drops points whose exponents cancel."""
    out: list[list[float]] = []
    for p, e in sorted(terms):
        if out and _close(out[-1][0], p):
            out[-1][1] += e
        else:
            out.append([float(p), float(e)])
    return [(p, e) for p, e in out if abs(e) > 1e-12]


class BandProduct:
    """``const * prod |x - p|^e`` on the band (lo, hi), optionally times sign(x - s)."""

    def __init__(self, terms, lo: float, hi: float, const: float = 1.0, sign_point=None):
        self.lo, self.hi, self.const = float(lo), float(hi), const
        self.left_exp = self.right_exp = 0.0
        inner = []
        for p, e in merge(terms):
            if _close(p, self.lo):
                self.left_exp += e
            elif _close(p, self.hi):
                self.right_exp += e
            else:
                inner.append((p, e))
        self.inner = inner
        self.sign_point = sign_point
        if sign_point is not None:
            if _close(sign_point, self.lo):
                self._fixed_sign = 1.0
            elif _close(sign_point, self.hi):
                self._fixed_sign = -1.0
            else:
                self._fixed_sign = None

    def __call__(self, x, dl, dr):
        x = np.asarray(x)
        with np.errstate(divide="ignore"):
            return self._eval(x, dl, dr)

    def _eval(self, x, dl, dr):
        logs = np.zeros(x.shape)
        if self.left_exp:
            logs += self.left_exp * np.log(dl)
        if self.right_exp:
            logs += self.right_exp * np.log(dr)
        for p, e in self.inner:
            logs += e * np.log(np.abs(x - p))
        out = self.const * np.exp(logs)
        if self.sign_point is not None:
            out = out * (self._fixed_sign if self._fixed_sign is not None else np.sign(x - self.sign_point))
        return out

    def at(self, x):
        """Evaluate from ``x`` alone (distances formed by subtraction)."""
        x = np.asarray(x, dtype=float)
        return self(x, x - self.lo, self.hi - x)
