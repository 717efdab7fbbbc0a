r"""
Left and right Riemann-Liouville operators.

Two routes are provided:

* closed-form rules (:func:`constant_rule`, :func:`power_rule`,
  :func:`rl_left_exact`, ...) for power-family :class:`~fracmech.smooth.SmoothFn`
  inputs, valid for any real order (negative orders are fractional integrals);
* a Grunwald-Letnikov discretization on a :class:`UniformGrid`, realized by a
  :class:`TriangularOperator`. The left operator is lower-triangular Toeplitz
  and the right operator is its exact transpose.

The discrete operators return a value at every node, but the first node (left)
and last node (right) carry scheme artifacts when the exact derivative is
singular there.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np
from scipy.linalg import toeplitz

from . import kernels
from .smooth import SmoothFn
from .special import binom, gamma, rgamma


class Side(enum.Enum):
    Left = "left"
    Right = "right"


@dataclass(frozen=True)
class FracOrder:
    """Order ``alpha > 0`` of a fractional derivative."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (math.isfinite(a) and a > 0):
            raise ValueError(f"order must be a finite positive number, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def ceil_n(self) -> int:
        """Smallest integer ``n`` with ``n - 1 <= alpha < n``."""
        return math.floor(self.alpha) + 1

    @classmethod
    def coerce(cls, order: "FracOrder | float") -> "FracOrder":
        return order if isinstance(order, FracOrder) else cls(order)


OrderLike = Union[FracOrder, float]


def _alpha(order) -> float:
    return order.alpha if isinstance(order, FracOrder) else float(order)


def _check_unit_order(order) -> FracOrder:
    order = FracOrder.coerce(order)
    if order.alpha > 1:
        raise ValueError(f"order must lie in (0, 1], got {order.alpha}")
    return order


@dataclass(frozen=True)
class UniformGrid:
    """Uniform nodes ``t_i = a + i h`` on ``[a, b]``."""

    a: float
    b: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"need finite a < b, got a={self.a}, b={self.b}")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def step(self) -> float:
        return (self.b - self.a) / (self.n_points - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        t = self.a + self.step * np.arange(self.n_points, dtype=np.float64)
        t[-1] = self.b
        t.flags.writeable = False
        return t


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Values of a function at the nodes of a grid."""

    grid: UniformGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} values for this grid, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("sampled values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, f: SmoothFn, grid: UniformGrid) -> "SampledPath":
        return cls(grid, f(grid.nodes))

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def __add__(self, other):
        if isinstance(other, SampledPath):
            _check_same_grid(self.grid, other.grid)
            return SampledPath(self.grid, self.values + other.values)
        return SampledPath(self.grid, self.values + other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, SampledPath):
            _check_same_grid(self.grid, other.grid)
            return SampledPath(self.grid, self.values - other.values)
        return SampledPath(self.grid, self.values - other)

    def __mul__(self, c):
        return SampledPath(self.grid, self.values * c)

    __rmul__ = __mul__

    def __neg__(self):
        return SampledPath(self.grid, -self.values)


def _check_same_grid(g1: UniformGrid, g2: UniformGrid) -> None:
    if g1 != g2:
        raise ValueError(f"grid mismatch: {g1} vs {g2}")


def as_path(f: "SampledPath | SmoothFn | np.ndarray", grid: UniformGrid) -> SampledPath:
    if isinstance(f, SampledPath):
        _check_same_grid(f.grid, grid)
        return f
    if isinstance(f, SmoothFn):
        return SampledPath.sample(f, grid)
    return SampledPath(grid, f)


# {{{ discrete operators

@dataclass(frozen=True)
class TriangularOperator:
    """Grunwald-Letnikov realization of a left or right RL derivative."""

    side: Side
    order: FracOrder
    grid: UniformGrid

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        object.__setattr__(self, "order", FracOrder.coerce(self.order))

    @cached_property
    def weights(self) -> np.ndarray:
        """Unscaled weights ``w_0, ..., w_{N-1}``."""
        w = kernels.gl_weights(self.order.alpha, self.grid.n_points)
        w.flags.writeable = False
        return w

    @property
    def scale(self) -> float:
        return self.grid.step ** (-self.order.alpha)

    @cached_property
    def scaled_weights(self) -> np.ndarray:
        w = self.weights * self.scale
        w.flags.writeable = False
        return w

    @property
    def transpose(self) -> "TriangularOperator":
        other = Side.Right if self.side is Side.Left else Side.Left
        return TriangularOperator(other, self.order, self.grid)

    def matrix(self) -> np.ndarray:
        w = self.scaled_weights
        zeros = np.zeros_like(w)
        zeros[0] = w[0]
        if self.side is Side.Left:
            return toeplitz(w, zeros)
        return toeplitz(zeros, w)

    def apply(self, values: np.ndarray) -> np.ndarray:
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != (self.grid.n_points,):
            raise ValueError(f"expected {self.grid.n_points} values, got shape {values.shape}")
        if self.side is Side.Left:
            return kernels.lower_apply(self.scaled_weights, values)
        return kernels.upper_apply(self.scaled_weights, values)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve ``M x = rhs`` by forward (left) or back (right) substitution."""
        rhs = np.ascontiguousarray(rhs, dtype=np.float64) / self.scale
        if rhs.shape != (self.grid.n_points,):
            raise ValueError(f"expected {self.grid.n_points} values, got shape {rhs.shape}")
        if self.side is Side.Left:
            return kernels.lower_solve(self.weights, rhs)
        return kernels.upper_solve(self.weights, rhs)

    def __matmul__(self, f):
        if isinstance(f, SampledPath):
            _check_same_grid(f.grid, self.grid)
            return SampledPath(self.grid, self.apply(f.values))
        return self.apply(f)


def rl_left(f: "SampledPath | SmoothFn", order: OrderLike, grid: UniformGrid) -> SampledPath:
    """Discrete left RL derivative (terminal ``grid.a``) at every node."""
    order = _check_unit_order(order)
    path = as_path(f, grid)
    return TriangularOperator(Side.Left, order, grid) @ path


def rl_right(f: "SampledPath | SmoothFn", order: OrderLike, grid: UniformGrid) -> SampledPath:
    """Discrete right RL derivative (terminal ``grid.b``) at every node."""
    order = _check_unit_order(order)
    path = as_path(f, grid)
    return TriangularOperator(Side.Right, order, grid) @ path


def adjoint_defect(order: OrderLike, grid: UniformGrid) -> float:
    """Largest entry of ``|transpose(M_left) - M_right|``."""
    left = TriangularOperator(Side.Left, order, grid)
    return float(np.max(np.abs(left.matrix().T - left.transpose.matrix())))

# }}}


# {{{ closed-form rules

def _power_term(coef: float, beta: float, nu: float, dist):
    """``coef * D^nu (s)^beta`` evaluated at distance ``s = dist`` from the terminal."""
    r = rgamma(beta - nu + 1.0)
    if coef == 0 or r == 0:
        return np.zeros_like(dist) if isinstance(dist, np.ndarray) else 0.0
    p = beta - nu
    dist = np.asarray(dist, dtype=np.float64)
    if np.any(dist < 0):
        raise ValueError("evaluation point lies outside the operator's interval")
    if p < 0 and np.any(dist == 0):
        raise ValueError("fractional derivative is singular at the terminal")
    out = coef * gamma(beta + 1.0) * r * dist**p
    return float(out) if out.ndim == 0 else out


def constant_rule(c: float, order: OrderLike, a: float, t: float) -> float:
    """Left RL derivative of the constant ``c``: ``c (t - a)^-alpha / Gamma(1 - alpha)``."""
    alpha = _alpha(order)
    if not t > a:
        raise ValueError(f"constant rule needs t > a, got t={t}, a={a}")
    return c * (t - a) ** (-alpha) * rgamma(1.0 - alpha)


def right_constant_rule(c: float, order: OrderLike, b: float, t: float):
    """Right RL derivative of ``c``: ``c (b - t)^-alpha / Gamma(1 - alpha)``."""
    alpha = _alpha(order)
    t = np.asarray(t, dtype=np.float64)
    if np.any(t >= b):
        raise ValueError(f"right constant rule needs t < b, got b={b}")
    out = c * (b - t) ** (-alpha) * rgamma(1.0 - alpha)
    return float(out) if out.ndim == 0 else out


def power_rule(beta: float, order: OrderLike, a: float, t: float) -> float:
    r"""Left RL derivative of :math:`(t - a)^\beta`.

    Uses :math:`\Gamma(\beta + 1) (t - a)^{\beta - \alpha} / \Gamma(\beta - \alpha + 1)`;
    the result is exactly zero whenever the reciprocal gamma vanishes. Negative
    orders give fractional integrals.
    """
    if beta < 0:
        raise ValueError(f"power rule needs beta >= 0, got {beta}")
    return _power_term(1.0, beta, _alpha(order), t - a)


def _power_terms_about(f: SmoothFn, center: float, sign: float) -> list[tuple[float, float]]:
    # coefficients of f(t) = sum c (sign (t - center))^beta
    if not f.is_power_family():
        raise ValueError("closed-form fractional derivatives need a power-family function")
    return f.substitute(shift=center, scale=sign).power_terms()


def rl_left_exact(f: SmoothFn, order: OrderLike, a: float, t):
    """Closed-form left derivative of order ``nu`` (any real) of a power-family ``f``.

    For ``a != 0`` the function is re-expanded in powers of ``t - a``, which
    requires integer exponents.
    """
    nu = _alpha(order)
    dist = np.asarray(t, dtype=np.float64) - a
    out = sum((_power_term(c, b, nu, dist) for c, b in _power_terms_about(f, a, 1.0)), 0.0)
    return float(out) if np.ndim(out) == 0 else np.asarray(out) + np.zeros_like(dist)


def rl_right_exact(f: SmoothFn, order: OrderLike, b: float, t):
    """Closed-form right derivative, expanding ``f`` in powers of ``b - t``."""
    nu = _alpha(order)
    dist = b - np.asarray(t, dtype=np.float64)
    out = sum((_power_term(c, be, nu, dist) for c, be in _power_terms_about(f, b, -1.0)), 0.0)
    return float(out) if np.ndim(out) == 0 else np.asarray(out) + np.zeros_like(dist)


def compose_correction(f: SmoothFn, order1: OrderLike, order2: OrderLike, a: float, t: float) -> float:
    r"""Correction sum subtracted when composing ``D^alpha D^sigma``.

    Returns :math:`\sum_{j=1}^{k} [D^{\sigma - j} f](a)\,(t-a)^{-\alpha-j}/\Gamma(1-\alpha-j)`
    with ``k = ceil(sigma)``.
    """
    alpha, sigma = _alpha(order1), _alpha(order2)
    if not t > a:
        raise ValueError(f"composition needs t > a, got t={t}, a={a}")
    k = math.ceil(sigma)
    total = 0.0
    for j in range(1, k + 1):
        at_a = 0.0
        for c, beta in _power_terms_about(f, a, 1.0):
            if rgamma(beta - (sigma - j) + 1.0) == 0:
                continue
            p = beta - (sigma - j)
            if p > 0:
                continue
            if p < 0:
                raise ValueError(
                    f"D^{sigma - j} of (t-a)^{beta} is unbounded at the terminal"
                )
            at_a += c * gamma(beta + 1.0)
        if at_a:
            total += at_a * (t - a) ** (-alpha - j) * rgamma(1.0 - alpha - j)
    return total


def compose_rl(f: SmoothFn, order1: OrderLike, order2: OrderLike, a: float, t: float) -> float:
    """``D^alpha D^sigma f`` via the composition rule with its terminal corrections."""
    alpha, sigma = _alpha(order1), _alpha(order2)
    return rl_left_exact(f, alpha + sigma, a, t) - compose_correction(f, alpha, sigma, a, t)


def compose_rl_nested(
    f: "SampledPath | SmoothFn", order1: OrderLike, order2: OrderLike, grid: UniformGrid
) -> SampledPath:
    """``D^alpha D^sigma f`` by applying the discrete left operator twice."""
    inner = rl_left(f, order2, grid)
    return rl_left(inner, order1, grid)


def product_rule_terms(
    f: SmoothFn, g: SmoothFn, order: OrderLike, max_j: int | None, a: float, t: float
) -> np.ndarray:
    r"""Terms :math:`\binom{\alpha}{j} D^{\alpha-j} f \cdot g^{(j)}` for ``j = 0..max_j``."""
    alpha = _alpha(order)
    if max_j is None:
        if not g.is_polynomial():
            raise ValueError("the product series does not terminate; pass max_j")
        max_j = max(g.degree, 0)
    if not t > a:
        raise ValueError(f"product rule needs t > a, got t={t}, a={a}")
    terms = np.zeros(max_j + 1)
    dg = g
    for j in range(max_j + 1):
        gj = dg(t)
        if gj != 0:
            terms[j] = binom(alpha, j) * rl_left_exact(f, alpha - j, a, t) * gj
        dg = dg.deriv()
    return terms


def product_rule_series(
    f: SmoothFn, g: SmoothFn, order: OrderLike, max_j: int | None, a: float, t: float
) -> float:
    """``D^alpha (f g)`` via the fractional Leibniz series truncated at ``max_j``."""
    return float(np.sum(product_rule_terms(f, g, order, max_j, a, t)))

# }}}
