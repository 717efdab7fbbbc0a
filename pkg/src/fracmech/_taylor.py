"""Truncated Taylor series in one variable, used for exact total time derivatives."""
from __future__ import annotations

import math

import numpy as np

from .smooth import SmoothFn


class Taylor:
    """Coefficients ``c_r`` of ``sum_r c_r dt^r`` for ``r <= order``."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=np.float64)

    @classmethod
    def const(cls, value: float, order: int) -> "Taylor":
        c = np.zeros(order + 1)
        c[0] = value
        return cls(c)

    @classmethod
    def power(cls, coef: float, base: float, p: float, order: int) -> "Taylor":
        """Expansion of ``coef * (base + dt)^p`` around ``dt = 0`` (``base > 0``)."""
        c = np.zeros(order + 1)
        term = coef * base**p
        for r in range(order + 1):
            c[r] = term
            term *= (p - r) / ((r + 1) * base)
        return cls(c)

    @property
    def order(self) -> int:
        return self.c.shape[0] - 1

    @property
    def value(self) -> float:
        return float(self.c[0])

    def deriv_at_zero(self, r: int) -> float:
        """``r``-th derivative at ``dt = 0``."""
        return float(self.c[r] * math.factorial(r))

    def diff(self) -> "Taylor":
        """Series of the derivative (one order shorter)."""
        r = np.arange(1, self.c.shape[0])
        return Taylor(self.c[1:] * r)

    def _other(self, other):
        if isinstance(other, Taylor):
            n = min(self.c.shape[0], other.c.shape[0])
            return self.c[:n], other.c[:n]
        o = np.zeros_like(self.c)
        o[0] = other
        return self.c, o

    def __add__(self, other):
        a, b = self._other(other)
        return Taylor(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._other(other)
        return Taylor(a - b)

    def __rsub__(self, other):
        a, b = self._other(other)
        return Taylor(b - a)

    def __neg__(self):
        return Taylor(-self.c)

    def __mul__(self, other):
        if not isinstance(other, Taylor):
            return Taylor(self.c * other)
        a, b = self._other(other)
        return Taylor(np.convolve(a, b)[: a.shape[0]])

    __rmul__ = __mul__

    def __truediv__(self, other: float):
        return Taylor(self.c / other)

    def __pow__(self, n: int):
        out = Taylor.const(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out


def apply_fn(fn: SmoothFn, x):
    """``fn(x)`` for a float or a :class:`Taylor` argument."""
    if not isinstance(x, Taylor):
        return fn(x)
    x0 = x.value
    dx = x - x0
    out = Taylor.const(0.0, x.order)
    power = Taylor.const(1.0, x.order)
    d = fn
    for i in range(x.order + 1):
        out = out + power * (d(x0) / math.factorial(i))
        power = power * dx
        d = d.deriv()
    return out
