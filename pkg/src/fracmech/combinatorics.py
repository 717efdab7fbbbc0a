r"""
Integer partitions and Faa di Bruno expansions.

A partition of ``k`` is stored by multiplicities :math:`a_1, \dots, a_k` with
:math:`\sum_r r a_r = k`; its block count is :math:`m = \sum_r a_r`. The
classical formula

.. math::

    \frac{d^k}{dt^k} F(h(t)) = k! \sum_{m=1}^{k} F^{(m)}(h(t))
        \sum \prod_{r=1}^{k} \frac{1}{a_r!}\left(\frac{h^{(r)}(t)}{r!}\right)^{a_r}

feeds the fractional series of a composite function, which expands
:math:`{}_aD_t^\alpha F(h(t))` through every integer derivative of the
composition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .fracops import OrderLike, _alpha
from .smooth import SmoothFn
from .special import binom, lgamma, rgamma

MAX_PARTITION_ORDER = 30
DEFAULT_MAX_K = 16


@dataclass(frozen=True)
class Partition:
    k: int
    m: int
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        a = self.multiplicities
        if len(a) != self.k or any(x < 0 for x in a):
            raise ValueError(f"invalid multiplicities {a} for k={self.k}")
        if sum(r * x for r, x in enumerate(a, start=1)) != self.k:
            raise ValueError(f"{a} does not partition {self.k}")
        if sum(a) != self.m:
            raise ValueError(f"{a} has {sum(a)} blocks, not {self.m}")


@dataclass(frozen=True)
class CompositeSpec:
    """The composition ``outer(inner(t))``."""

    outer: SmoothFn
    inner: SmoothFn

    def __call__(self, t):
        return self.outer(self.inner(t))

    def composed(self) -> SmoothFn:
        """Closed form of the composition (polynomial outer functions only)."""
        return self.outer.compose(self.inner)


def _check_k(k: int) -> None:
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= MAX_PARTITION_ORDER):
        raise ValueError(f"k must be an integer in [1, {MAX_PARTITION_ORDER}], got {k!r}")


@lru_cache(maxsize=None)
def enumerate_partitions(k: int) -> tuple[Partition, ...]:
    """All partitions of ``k``, lexicographic in ``(a_1, ..., a_k)``."""
    _check_k(k)
    out: list[Partition] = []
    a = [0] * k

    def fill(r: int, remaining: int) -> None:
        if r > k:
            if remaining == 0:
                out.append(Partition(k, sum(a), tuple(a)))
            return
        for x in range(remaining // r + 1):
            a[r - 1] = x
            fill(r + 1, remaining - r * x)
        a[r - 1] = 0

    fill(1, k)
    return tuple(out)


def partition_weight(p: Partition, derivs: Sequence[float]) -> float:
    r"""``prod_r (1/a_r!) (derivs[r] / r!)^{a_r}``; ``derivs[r]`` is the r-th derivative."""
    out = 1.0
    for r, ar in enumerate(p.multiplicities, start=1):
        if ar:
            out *= (derivs[r] / math.factorial(r)) ** ar / math.factorial(ar)
    return out


def _factorial(k: int) -> float:
    return float(math.factorial(k))


def faa_di_bruno_k(spec: CompositeSpec, k: int, t: float) -> float:
    """``d^k/dt^k F(h(t))`` by summing over the partitions of ``k``."""
    _check_k(k)
    h = [spec.inner(t)]
    dh = spec.inner
    for _ in range(k):
        dh = dh.deriv()
        h.append(dh(t))
    outer_at = {}
    total = 0.0
    for p in enumerate_partitions(k):
        if p.m not in outer_at:
            outer_at[p.m] = spec.outer.deriv(p.m)(h[0])
        total += outer_at[p.m] * partition_weight(p, h)
    return _factorial(k) * total


def heaviside_coeff(order: OrderLike, k: int, a: float, t: float) -> float:
    r"""Weight :math:`\binom{\alpha}{k} (t-a)^{k-\alpha} / \Gamma(k - \alpha + 1)` of the k-th term."""
    alpha = _alpha(order)
    if k <= 20:
        c = binom(alpha, k) * rgamma(k - alpha + 1.0)
        return c * (t - a) ** (k - alpha) if c else 0.0
    b = binom(alpha, k)
    if b == 0 or rgamma(k - alpha + 1.0) == 0:
        return 0.0
    lg, sg = lgamma(k - alpha + 1.0)
    return b * sg * math.exp((k - alpha) * math.log(t - a) - lg)


def _check_series_args(order: OrderLike, a: float, t: float, max_k: int) -> float:
    alpha = _alpha(order)
    if not 0 < alpha <= 1:
        raise ValueError(f"order must lie in (0, 1], got {alpha}")
    if not t > a:
        raise ValueError(f"the series needs t > a, got t={t}, a={a}")
    if not 0 <= max_k <= MAX_PARTITION_ORDER:
        raise ValueError(f"max_k must lie in [0, {MAX_PARTITION_ORDER}], got {max_k}")
    return alpha


def frac_series_heaviside_terms(
    phi: SmoothFn, order: OrderLike, a: float, t: float, max_k: int = DEFAULT_MAX_K
) -> np.ndarray:
    """Terms ``k = 0..max_k`` of the derivative series of an analytic ``phi``."""
    alpha = _check_series_args(order, a, t, max_k)
    terms = np.zeros(max_k + 1)
    d = phi
    for k in range(max_k + 1):
        c = heaviside_coeff(alpha, k, a, t)
        if c:
            terms[k] = c * d(t)
        d = d.deriv()
    return terms


def frac_series_heaviside(
    phi: SmoothFn, order: OrderLike, a: float, t: float, max_k: int = DEFAULT_MAX_K
) -> float:
    """``D^alpha phi(t)`` as a series in the integer derivatives of ``phi``.

    Exact once ``max_k`` reaches the degree of a polynomial ``phi``.
    """
    return math.fsum(frac_series_heaviside_terms(phi, order, a, t, max_k))


def frac_faa_di_bruno_terms(
    spec: CompositeSpec, order: OrderLike, a: float, t: float, max_k: int = DEFAULT_MAX_K
) -> np.ndarray:
    alpha = _check_series_args(order, a, t, max_k)
    terms = np.zeros(max_k + 1)
    terms[0] = heaviside_coeff(alpha, 0, a, t) * spec(t)
    for k in range(1, max_k + 1):
        c = heaviside_coeff(alpha, k, a, t)
        if c:
            terms[k] = c * faa_di_bruno_k(spec, k, t)
    return terms


def frac_faa_di_bruno(
    spec: CompositeSpec, order: OrderLike, a: float, t: float, max_k: int = DEFAULT_MAX_K
) -> float:
    """``D^alpha F(h(t))`` truncated after ``max_k`` integer derivatives.

    ``abs(frac_faa_di_bruno_terms(...)[-1])`` is a cheap truncation-tail estimate.
    """
    return math.fsum(frac_faa_di_bruno_terms(spec, order, a, t, max_k))
