r"""
Ostrogradski treatment of the non-local Lagrangian

.. math::

    L[Q](t) = \tfrac12 \left({}_aD_t^\alpha Q\right)^2 + {}_aD_t^\alpha F(Q),

with both fractional derivatives expanded in the integer derivatives
:math:`Q^{(0)}, Q^{(1)}, \dots` and truncated at a cap ``K``. The coordinate is
a chiral field :math:`Q(x, t) = q(x + t)`, so along a solution the jet
components obey :math:`\dot Q^{(n)} = Q^{(n+1)}` and every total time
derivative reduces to a shift in the jet index. Those derivatives are computed
exactly with truncated Taylor arithmetic.

Two independent evaluations of every Euler-Lagrange and Hamilton right-hand
side are provided: the *expanded* form differentiates the partition monomials
term by term, the *compact* form goes through the fractional derivative series
of ``Q`` and of ``F'(Q)`` (computed with :mod:`fracmech.combinatorics`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._taylor import Taylor, apply_fn
from .combinatorics import (
    CompositeSpec,
    enumerate_partitions,
    faa_di_bruno_k,
    frac_series_heaviside,
    heaviside_coeff,
)
from .fracops import OrderLike, _alpha
from .smooth import SmoothFn
from .special import binom, rgamma

DEFAULT_K = 12


@dataclass(frozen=True)
class ChiralField:
    """``Q(x, t) = profile(x + t)`` with reference point ``x0``."""

    profile: SmoothFn
    x0: float = 0.0

    def __call__(self, x, t):
        return self.profile(np.add(x, t))

    def along_reference(self) -> SmoothFn:
        """``t -> q(x0 + t)``, i.e. the coordinate ``Q^{(0)}(t)``."""
        return self.profile.substitute(shift=self.x0)


@dataclass(frozen=True)
class Jet:
    order_cap: int
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != self.order_cap + 1:
            raise ValueError(f"jet of cap {self.order_cap} needs {self.order_cap + 1} values")

    def __getitem__(self, n: int) -> float:
        return self.values[n]


@dataclass(frozen=True)
class OstroMomenta:
    order_cap: int
    values: tuple[float, ...]
    #: magnitude of the last included term of either truncated series
    tail: float

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def _check(order: OrderLike, a: float, t: float, K: int) -> float:
    alpha = _alpha(order)
    if not 0 < alpha <= 1:
        raise ValueError(f"order must lie in (0, 1], got {alpha}")
    if not t > a:
        raise ValueError(f"need t > a, got t={t}, a={a}")
    if not 1 <= K <= 30:
        raise ValueError(f"truncation cap K must lie in [1, 30], got {K}")
    return alpha


# {{{ jets

def jet_from_field(field: ChiralField, t: float, K: int) -> Jet:
    """Ostrogradski coordinates ``Q^{(n)}(t) = q^{(n)}(x0 + t)`` for ``n <= K``."""
    vals = []
    d = field.profile
    for _ in range(K + 1):
        vals.append(float(d(field.x0 + t)))
        d = d.deriv()
    return Jet(K, tuple(vals))


def chirality_defect(field: ChiralField, t: float, K: int) -> np.ndarray:
    """``d/dt Q^{(n)} - Q^{(n+1)}`` for ``n < K``.

    ``d/dt`` acts on ``t -> q^{(n)}(x0 + t)`` analytically, independently of
    the jet values it is compared to.
    """
    jet = jet_from_field(field, t, K)
    out = np.empty(K)
    d = field.profile
    for n in range(K):
        qn = d.deriv(n)
        out[n] = qn.deriv()(field.x0 + t) - jet[n + 1]
    return out


def taylor_reconstruct(jet: Jet, x0: float, x: float) -> float:
    """``sum_n (x - x0)^n / n! Q^{(n)}``, which recovers ``Q(x, t)``."""
    dx = x - x0
    total = 0.0
    term = 1.0
    for n, v in enumerate(jet.values):
        total += term * v
        term *= dx / (n + 1)
    return total


def _jet_series(field: ChiralField, t: float, K: int, order: int) -> list[Taylor]:
    # Q^{(n)}(t + dt) = sum_r q^{(n+r)}(x0 + t) dt^r / r!
    derivs = []
    d = field.profile
    for _ in range(K + order + 1):
        derivs.append(float(d(field.x0 + t)))
        d = d.deriv()
    fact = np.array([math.factorial(r) for r in range(order + 1)], dtype=np.float64)
    return [Taylor(np.array(derivs[n : n + order + 1]) / fact) for n in range(K + 1)]


def _coeff_series(alpha: float, a: float, t: float, K: int, order: int) -> list[Taylor]:
    out = []
    for k in range(K + 1):
        c = binom(alpha, k) * rgamma(k - alpha + 1.0)
        if c == 0:
            out.append(Taylor.const(0.0, order))
        else:
            out.append(Taylor.power(c, t - a, k - alpha, order))
    return out

# }}}


# {{{ expanded Lagrangian and partial derivatives

def _monomial(p, jets):
    w = 1.0
    for r, ar in enumerate(p.multiplicities, start=1):
        if ar:
            w = w * (jets[r] / math.factorial(r)) ** ar / math.factorial(ar)
    return w


def _monomial_grad(p, jets, j: int):
    aj = p.multiplicities[j - 1]
    if aj == 0:
        return None
    w = 1.0 / (math.factorial(j) * math.factorial(aj - 1))
    for r, ar in enumerate(p.multiplicities, start=1):
        e = ar - 1 if r == j else ar
        if e:
            w = w * (jets[r] / math.factorial(r)) ** e
        if r != j and ar:
            w = w / math.factorial(ar)
    return w


def _expanded(F: SmoothFn | None, coeffs, jets, K: int):
    """Return ``(L, [dL/dQ^{(0)}, ..., dL/dQ^{(K)}])`` for floats or Taylor series."""
    S = 0.0
    for k in range(K + 1):
        S = S + coeffs[k] * jets[k]
    L = 0.5 * S * S
    grads = [coeffs[j] * S for j in range(K + 1)]
    if F is None or F.is_zero():
        return L, grads
    Fd = [apply_fn(F.deriv(s), jets[0]) for s in range(K + 2)]
    L = L + coeffs[0] * Fd[0]
    grads[0] = grads[0] + coeffs[0] * Fd[1]
    for k in range(1, K + 1):
        ck = coeffs[k] * math.factorial(k)
        for p in enumerate_partitions(k):
            w = _monomial(p, jets)
            L = L + ck * Fd[p.m] * w
            grads[0] = grads[0] + ck * Fd[p.m + 1] * w
            for j in range(1, k + 1):
                gj = _monomial_grad(p, jets, j)
                if gj is not None:
                    grads[j] = grads[j] + ck * Fd[p.m] * gj
    return L, grads


def _float_coeffs(alpha: float, a: float, t: float, K: int) -> list[float]:
    return [heaviside_coeff(alpha, k, a, t) for k in range(K + 1)]


def lagrangian_value(F: SmoothFn | None, order: OrderLike, a: float, t: float, jet: Jet) -> float:
    """Truncated Lagrangian at time ``t`` from the jet components."""
    K = jet.order_cap
    alpha = _check(order, a, t, K)
    L, _ = _expanded(F, _float_coeffs(alpha, a, t, K), jet.values, K)
    return float(L)


def lagrangian_partials(F: SmoothFn | None, order: OrderLike, a: float, t: float, jet: Jet) -> np.ndarray:
    """``dL/dQ^{(n)}`` for ``n = 0..K``, treating jet components as independent."""
    K = jet.order_cap
    alpha = _check(order, a, t, K)
    _, grads = _expanded(F, _float_coeffs(alpha, a, t, K), jet.values, K)
    return np.array([float(g) for g in grads])

# }}}


# {{{ momenta and Hamiltonian

def _momenta_series(F, alpha, a, field, t, K):
    jets = _jet_series(field, t, K, K)
    coeffs = _coeff_series(alpha, a, t, K, K)
    L, grads = _expanded(F, coeffs, jets, K)
    # derivs[j][r] = (d/dt)^r dL/dQ^{(j)} as a series
    derivs = []
    for g in grads:
        g = g if isinstance(g, Taylor) else Taylor.const(g, K)
        row = [g]
        for _ in range(K):
            row.append(row[-1].diff())
        derivs.append(row)
    P = []
    for n in range(K + 1):
        acc = Taylor.const(0.0, 1)
        for m in range(n, K):
            acc = acc + (-1) ** (m - n) * derivs[m + 1][m - n]
        P.append(acc)
    return P, L


def _tail(F, alpha, a, field, t, K) -> float:
    c = heaviside_coeff(alpha, K, a, t)
    if not c:
        return 0.0
    phi = field.along_reference()
    last = abs(c * phi.deriv(K)(t))
    if F is not None and not F.is_zero():
        last = max(last, abs(c * faa_di_bruno_k(CompositeSpec(F, phi), K, t)))
    return float(last)


def momenta(
    F: SmoothFn | None, order: OrderLike, a: float, field: ChiralField, t: float, K: int = DEFAULT_K
) -> OstroMomenta:
    """``P_(n) = sum_{m >= n} (-d/dt)^{m-n} dL/dQ^{(m+1)}`` along the chiral solution."""
    alpha = _check(order, a, t, K)
    P, _ = _momenta_series(F, alpha, a, field, t, K)
    return OstroMomenta(K, tuple(p.value for p in P), _tail(F, alpha, a, field, t, K))


def hamiltonian_total(
    F: SmoothFn | None, order: OrderLike, a: float, field: ChiralField, t: float, K: int = DEFAULT_K
) -> float:
    """``H = sum_n P_(n) Q^{(n+1)} - L``."""
    alpha = _check(order, a, t, K)
    P, L = _momenta_series(F, alpha, a, field, t, K)
    jet = jet_from_field(field, t, K + 1)
    return float(sum(P[n].value * jet[n + 1] for n in range(K + 1)) - L.value)

# }}}


# {{{ Euler-Lagrange and Hamilton equations

def el_expanded(
    F: SmoothFn | None, order: OrderLike, a: float, field: ChiralField, t: float, K: int = DEFAULT_K
) -> float:
    """``dL/dQ^{(0)}`` from the term-by-term expansion; equals ``dP_(0)/dt`` on shell."""
    return float(lagrangian_partials(F, order, a, t, jet_from_field(field, t, K))[0])


def _compact_rhs(F, alpha, a, field, t, n, K):
    phi = field.along_reference()
    DQ = frac_series_heaviside(phi, alpha, a, t, K)
    out = heaviside_coeff(alpha, n, a, t) * DQ
    if F is None or F.is_zero():
        return out
    dF = CompositeSpec(F.deriv(), phi)
    for k in range(n, K + 1):
        c = heaviside_coeff(alpha, k, a, t)
        if not c:
            continue
        inner = dF(t) if k == n else faa_di_bruno_k(dF, k - n, t)
        out += c * math.comb(k, n) * inner
    return out


def el_compact(
    F: SmoothFn | None,
    order: OrderLike,
    a: float,
    field: ChiralField,
    t: float,
    K: int = DEFAULT_K,
    series_k: int | None = None,
) -> float:
    """``(t-a)^-alpha / Gamma(1-alpha) * D^alpha Q + D^alpha F'(Q)``.

    Both fractional derivatives are truncated after ``series_k`` terms
    (default ``K``).
    """
    alpha = _check(order, a, t, K)
    return float(_compact_rhs(F, alpha, a, field, t, 0, K if series_k is None else series_k))


class HamiltonRows(NamedTuple):
    #: ``dP_(n)/dt + P_(n-1)`` for ``n = 0..K`` (``P_(-1) = 0``)
    lhs: np.ndarray
    rhs_expanded: np.ndarray
    rhs_compact: np.ndarray
    #: ``dQ^{(n)}/dt - Q^{(n+1)}`` for ``n = 0..K-1``
    chirality: np.ndarray

    @property
    def residual_expanded(self) -> np.ndarray:
        return self.lhs - self.rhs_expanded

    @property
    def residual_compact(self) -> np.ndarray:
        return self.lhs - self.rhs_compact


def hamilton_equations(
    F: SmoothFn | None, order: OrderLike, a: float, field: ChiralField, t: float, K: int = DEFAULT_K
) -> HamiltonRows:
    """Rows ``n = 0..K`` of the Hamilton equations with both right-hand sides.

    For ``n >= 1`` the residuals vanish identically by construction of the
    momenta; the ``n = 0`` row is the Euler-Lagrange equation and vanishes only
    on solutions.
    """
    alpha = _check(order, a, t, K)
    P, _ = _momenta_series(F, alpha, a, field, t, K)
    lhs = np.array([P[n].diff().value + (P[n - 1].value if n else 0.0) for n in range(K + 1)])
    rhs_exp = lagrangian_partials(F, alpha, a, t, jet_from_field(field, t, K))
    rhs_cmp = np.array([_compact_rhs(F, alpha, a, field, t, n, K) for n in range(K + 1)])
    return HamiltonRows(lhs, rhs_exp, rhs_cmp, chirality_defect(field, t, K))

# }}}
