"""Dense univariate polynomials in the monomial basis.

Coefficients are plain Python scalars, so the same class serves exact
(``fractions.Fraction``) and floating (``float``/``complex``) arithmetic.
Index ``i`` of :attr:`Poly.coeffs` holds the coefficient of ``x**i``.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Poly"]


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = tuple(_trim(list(coeffs)))

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls, one=1) -> "Poly":
        return cls([0 * one, one])

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, Number):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, Number):
            return Poly([other])
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Number):
            return Poly(c * other for c in self.coeffs)
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if not isinstance(other, Number):
            raise TypeError("use divmod() for polynomial division")
        if isinstance(other, int) and self.is_exact:
            other = Fraction(other)
        return Poly(c / other for c in self.coeffs)

    def shift(self, k: int) -> "Poly":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return Poly()
        return Poly([0] * k + list(self.coeffs))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        if isinstance(lead, int):
            lead = Fraction(lead)
        quot = [0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - dq - 1, -1, -1):
            c = rem[i + dq] / lead
            quot[i] = c
            if c == 0:
                continue
            for j, b in enumerate(other.coeffs):
                rem[i + j] -= c * b
        return Poly(quot), Poly(rem[:dq])

    def deriv(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        """Horner evaluation; works for scalars and numpy arrays."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_float(self) -> "Poly":
        return Poly(float(c) for c in self.coeffs)

    def to_numpy(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs], dtype=float)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0)

    @classmethod
    def from_roots(cls, roots: Sequence, leading=1) -> "Poly":
        p = cls([leading])
        for r in roots:
            p = p * cls([-r, 1])
        return p
