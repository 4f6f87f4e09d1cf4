"""Second-order forward-mode differentiation.

A `Jet` carries (u, u', u'') of a quantity with respect to `t`. Arithmetic and
the elementary functions propagate all three components exactly, so
evaluating an expression tree on ``Jet.variable(t)`` yields f, f', f'' without
finite differences. Components may be Python floats or numpy arrays, which
lets a whole grid be evaluated in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

type Real = float | NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class Jet:
    """Truncated Taylor jet (value, first derivative, second derivative)."""

    value: Real
    d1: Real
    d2: Real

    @classmethod
    def constant(cls, c: Real) -> Jet:
        return cls(c, 0.0, 0.0)

    @classmethod
    def variable(cls, t: Real) -> Jet:
        return cls(t, 1.0, 0.0)

    def chain(self, g0: Real, g1: Real, g2: Real) -> Jet:
        """Compose with a scalar function g given g(u), g'(u), g''(u)."""

        return Jet(g0, g1 * self.d1, g2 * self.d1 * self.d1 + g1 * self.d2)

    def __neg__(self) -> Jet:
        return Jet(-self.value, -self.d1, -self.d2)

    def __add__(self, other: Jet) -> Jet:
        return Jet(self.value + other.value, self.d1 + other.d1, self.d2 + other.d2)

    def __sub__(self, other: Jet) -> Jet:
        return Jet(self.value - other.value, self.d1 - other.d1, self.d2 - other.d2)

    def __mul__(self, other: Jet) -> Jet:
        return Jet(
            self.value * other.value,
            self.d1 * other.value + self.value * other.d1,
            self.d2 * other.value + 2.0 * self.d1 * other.d1 + self.value * other.d2,
        )

    def reciprocal(self) -> Jet:
        """1/u; the caller guarantees u != 0."""

        inv = 1.0 / self.value
        return self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other: Jet) -> Jet:
        return self * other.reciprocal()

    def power_const(self, c: float) -> Jet:
        """u^c for a constant exponent.

        Integer exponents are evaluated without forming u^(c-1) or u^(c-2) when
        their coefficients vanish, so u = 0 is fine for c in {0, 1, 2, ...}.
        """

        u = self.value
        g0 = np.power(u, c)
        g1 = c * np.power(u, c - 1.0) if c != 0.0 else 0.0 * u
        g2 = c * (c - 1.0) * np.power(u, c - 2.0) if c not in (0.0, 1.0) else 0.0 * u
        return self.chain(g0, g1, g2)

    def power(self, other: Jet) -> Jet:
        """u^v = exp(v log u) for a non-constant exponent; requires u > 0."""

        return (other * self.log()).exp()

    def exp(self) -> Jet:
        e = np.exp(self.value)
        return self.chain(e, e, e)

    def log(self) -> Jet:
        inv = 1.0 / self.value
        return self.chain(np.log(self.value), inv, -inv * inv)

    def sin(self) -> Jet:
        s, c = np.sin(self.value), np.cos(self.value)
        return self.chain(s, c, -s)

    def cos(self) -> Jet:
        s, c = np.sin(self.value), np.cos(self.value)
        return self.chain(c, -s, -c)

    def sinh(self) -> Jet:
        s, c = np.sinh(self.value), np.cosh(self.value)
        return self.chain(s, c, s)

    def cosh(self) -> Jet:
        s, c = np.sinh(self.value), np.cosh(self.value)
        return self.chain(c, s, c)


UNARY: dict[str, Callable[[Jet], Jet]] = {
    "exp": Jet.exp,
    "log": Jet.log,
    "sin": Jet.sin,
    "cos": Jet.cos,
    "sinh": Jet.sinh,
    "cosh": Jet.cosh,
}
