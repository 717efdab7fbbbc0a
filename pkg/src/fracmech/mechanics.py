"""
Fractional Lagrangians with left RL derivatives, their Euler-Lagrange
residuals, momenta, Hamiltonians and canonical equations, plus the linear
solver for the free particle with an added ``C * D^alpha q`` term.

All residuals are evaluated on a :class:`~fracmech.fracops.UniformGrid` with
the Grunwald-Letnikov operators ``M_L`` (left) and ``M_R = M_L^T`` (right).
The constant term ``(b - t)^-alpha / Gamma(1 - alpha)`` produced by the right
derivative of a constant is available in two forms:

* ``"discrete"``: ``g = M_R 1``, which keeps the Euler-Lagrange and Hamilton
  routes algebraically identical on the grid;
* ``"analytic"``: the closed form at the nodes. It is singular at ``t = b``,
  where the discrete value is substituted (a scheme-artifact node). At
  ``alpha = 1`` it vanishes identically since ``1 / Gamma(0) = 0``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

import numpy as np

from .fracops import (
    FracOrder,
    OrderLike,
    SampledPath,
    Side,
    TriangularOperator,
    UniformGrid,
    _check_same_grid,
    _check_unit_order,
    rl_left_exact,
)
from .smooth import SmoothFn
from .special import rgamma


class NumericalError(ArithmeticError):
    """A solve or evaluation breached its tolerance."""


class Variant(enum.Enum):
    FreeFrac = "free"
    PlusLinear = "linear"
    PlusComposite = "composite"


@dataclass(frozen=True)
class LagrangianSpec:
    """Free fractional kinetic term per coordinate, plus an optional extra term.

    ``coord`` is the 0-based index of the coordinate that carries the extra
    ``c * D^alpha q`` (``PlusLinear``) or ``D^alpha F(q)`` (``PlusComposite``)
    term. ``right_kinetic`` adds ``right_kinetic / 2 * (D_right q)^2`` per
    coordinate, which only :func:`el_residual_full` understands.
    """

    variant: Variant
    order: FracOrder
    n_coords: int = 1
    coord: int = 0
    c: float = 0.0
    F: SmoothFn | None = None
    right_kinetic: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "order", _check_unit_order(self.order))
        if self.n_coords < 1 or not 0 <= self.coord < self.n_coords:
            raise ValueError(f"coordinate {self.coord} out of range for {self.n_coords} coordinates")
        if self.variant is Variant.PlusLinear and self.c == 0:
            raise ValueError("PlusLinear needs a non-zero constant c")
        if self.variant is Variant.PlusComposite and self.F is None:
            raise ValueError("PlusComposite needs a function F")

    @classmethod
    def free(cls, order: OrderLike, n_coords: int = 1, **kw) -> "LagrangianSpec":
        return cls(Variant.FreeFrac, FracOrder.coerce(order), n_coords, **kw)

    @classmethod
    def plus_linear(cls, order: OrderLike, c: float, coord: int = 0, n_coords: int = 1) -> "LagrangianSpec":
        return cls(Variant.PlusLinear, FracOrder.coerce(order), n_coords, coord, c=c)

    @classmethod
    def plus_composite(cls, order: OrderLike, F: SmoothFn, coord: int = 0, n_coords: int = 1) -> "LagrangianSpec":
        return cls(Variant.PlusComposite, FracOrder.coerce(order), n_coords, coord, F=F)

    @property
    def momentum_shift(self) -> float:
        """Constant added to ``D^alpha q`` in the conjugate momentum of ``coord``."""
        return self.c if self.variant is Variant.PlusLinear else 0.0

    def extra_term(self, rho: int) -> bool:
        return rho == self.coord and self.variant is not Variant.FreeFrac


@dataclass(frozen=True)
class PhaseSample:
    """Coordinates ``q`` and (optionally) momenta ``p`` on a common grid."""

    q: tuple[SampledPath, ...]
    p: tuple[SampledPath, ...] | None = None

    def __post_init__(self):
        q = (self.q,) if isinstance(self.q, SampledPath) else tuple(self.q)
        p = self.p
        if p is not None:
            p = (p,) if isinstance(p, SampledPath) else tuple(p)
            if len(p) != len(q):
                raise ValueError(f"{len(q)} coordinates but {len(p)} momenta")
        if not q:
            raise ValueError("need at least one coordinate")
        for path in q + (p or ()):
            _check_same_grid(path.grid, q[0].grid)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def grid(self) -> UniformGrid:
        return self.q[0].grid


PathsLike = Union[PhaseSample, SampledPath, Sequence[SampledPath]]


def _phase(L: LagrangianSpec, q: PathsLike) -> tuple[PhaseSample, bool]:
    single = isinstance(q, SampledPath)
    phase = q if isinstance(q, PhaseSample) else PhaseSample(q)
    if len(phase.q) != L.n_coords:
        raise ValueError(f"Lagrangian has {L.n_coords} coordinates, got {len(phase.q)}")
    return phase, single


def _result(paths: list[SampledPath], single: bool):
    return paths[0] if single else tuple(paths)


def operators(order: OrderLike, grid: UniformGrid) -> tuple[TriangularOperator, TriangularOperator]:
    left = TriangularOperator(Side.Left, order, grid)
    return left, left.transpose


def constant_term(order: OrderLike, grid: UniformGrid, mode: str = "discrete") -> np.ndarray:
    """Right derivative of the constant 1 at the nodes (see module docstring)."""
    order = FracOrder.coerce(order)
    _, right = operators(order, grid)
    g_disc = right.apply(np.ones(grid.n_points))
    if mode == "discrete":
        return g_disc
    if mode != "analytic":
        raise ValueError(f"mode must be 'discrete' or 'analytic', got {mode!r}")
    r = rgamma(1.0 - order.alpha)
    if r == 0:
        return np.zeros(grid.n_points)
    g = np.empty(grid.n_points)
    g[:-1] = (grid.b - grid.nodes[:-1]) ** (-order.alpha) * r
    g[-1] = g_disc[-1]
    return g


# {{{ Euler-Lagrange

def _extra_force(L: LagrangianSpec, q: np.ndarray, g: np.ndarray) -> np.ndarray:
    # variation of the extra term with respect to the selected coordinate
    if L.variant is Variant.PlusLinear:
        return L.c * g
    return L.F.deriv()(q) * g


def el_residual_left(L: LagrangianSpec, q: PathsLike, g: str = "discrete"):
    """``dL/dq + D_right(dL/d(D_left q))`` per coordinate."""
    phase, single = _phase(L, q)
    grid = phase.grid
    left, right = operators(L.order, grid)
    gvec = constant_term(L.order, grid, g) if L.variant is not Variant.FreeFrac else None
    out = []
    for rho, path in enumerate(phase.q):
        r = right.apply(left.apply(path.values))
        if L.extra_term(rho):
            r = r + _extra_force(L, path.values, gvec)
        out.append(SampledPath(grid, r))
    return _result(out, single)


def el_residual_full(L: LagrangianSpec, q: PathsLike, g: str = "discrete"):
    """``dL/dq + D_right(dL/d(D_left q)) + D_left(dL/d(D_right q))`` per coordinate."""
    phase, single = _phase(L, q)
    base = el_residual_left(L, phase, g)
    if L.right_kinetic == 0:
        return _result(list(base), single)
    left, right = operators(L.order, phase.grid)
    out = []
    for path, r in zip(phase.q, base):
        third = left.apply(L.right_kinetic * right.apply(path.values))
        out.append(SampledPath(phase.grid, r.values + third))
    return _result(out, single)

# }}}


# {{{ Hamiltonian side

def momentum(L: LagrangianSpec, q: "PathsLike | SmoothFn", grid: UniformGrid | None = None):
    """Conjugate momentum ``dL/d(D_left q)`` per coordinate.

    A power-family :class:`SmoothFn` (with ``grid``) uses the closed-form left
    derivative instead of the discrete operator.
    """
    if isinstance(q, SmoothFn):
        if grid is None:
            raise ValueError("a grid is needed to sample a SmoothFn path")
        if L.n_coords != 1:
            raise ValueError("SmoothFn input is only supported for one coordinate")
        d = np.asarray(rl_left_exact(q, L.order, grid.a, grid.nodes))
        return SampledPath(grid, d + L.momentum_shift)
    phase, single = _phase(L, q)
    left, _ = operators(L.order, phase.grid)
    out = []
    for rho, path in enumerate(phase.q):
        p = left.apply(path.values)
        if rho == L.coord:
            p = p + L.momentum_shift
        out.append(SampledPath(phase.grid, p))
    return _result(out, single)


def lagrangian(L: LagrangianSpec, q: PathsLike) -> SampledPath:
    """Nodewise value of the (discrete) Lagrangian."""
    phase, _ = _phase(L, q)
    left, _ = operators(L.order, phase.grid)
    total = np.zeros(phase.grid.n_points)
    for rho, path in enumerate(phase.q):
        d = left.apply(path.values)
        total += 0.5 * d * d
        if rho == L.coord and L.variant is Variant.PlusLinear:
            total += L.c * d
        elif rho == L.coord and L.variant is Variant.PlusComposite:
            total += left.apply(L.F(path.values))
    return SampledPath(phase.grid, total)


def hamiltonian(L: LagrangianSpec, phase: PhaseSample) -> SampledPath:
    """Legendre form ``sum_rho p_rho D^alpha q_rho - L``."""
    phase, _ = _phase(L, phase)
    if phase.p is None:
        raise ValueError("phase sample has no momenta")
    left, _ = operators(L.order, phase.grid)
    h = -lagrangian(L, phase).values
    for path, p in zip(phase.q, phase.p):
        h += p.values * left.apply(path.values)
    return SampledPath(phase.grid, h)


def hamiltonian_closed_form(L: LagrangianSpec, p: "SampledPath | float"):
    """``(p - C)^2 / 2`` for the selected coordinate (``C = 0`` for the free case)."""
    if L.variant is Variant.PlusComposite:
        raise ValueError("no momentum-only closed form for PlusComposite")
    shift = L.momentum_shift
    if isinstance(p, SampledPath):
        return SampledPath(p.grid, 0.5 * (p.values - shift) ** 2)
    return 0.5 * (p - shift) ** 2


class CanonicalResiduals(NamedTuple):
    #: ``D_left q - dH/dp`` per coordinate
    coordinate: tuple[SampledPath, ...]
    #: ``D_right p - dH/dq`` per coordinate
    momentum: tuple[SampledPath, ...]
    #: ``dH/dt`` (none of the supported Lagrangians depends explicitly on time)
    dH_dt: float


def canonical_equations(L: LagrangianSpec, phase: PhaseSample, g: str = "discrete") -> CanonicalResiduals:
    phase, _ = _phase(L, phase)
    if phase.p is None:
        raise ValueError("phase sample has no momenta")
    grid = phase.grid
    left, right = operators(L.order, grid)
    gvec = constant_term(L.order, grid, g) if L.variant is Variant.PlusComposite else None
    rq, rp = [], []
    for rho, (path, p) in enumerate(zip(phase.q, phase.p)):
        dH_dp = p.values - (L.momentum_shift if rho == L.coord else 0.0)
        rq.append(SampledPath(grid, left.apply(path.values) - dH_dp))
        dH_dq = np.zeros(grid.n_points)
        if rho == L.coord and L.variant is Variant.PlusComposite:
            dH_dq = -_extra_force(L, path.values, gvec)
        rp.append(SampledPath(grid, right.apply(p.values) - dH_dq))
    return CanonicalResiduals(tuple(rq), tuple(rp), 0.0)

# }}}


# {{{ example: free particle plus C D^alpha q

def example1_residual(order: OrderLike, c: float, q: SampledPath, g: str = "discrete") -> np.ndarray:
    """``M_R M_L q + c g`` at the nodes."""
    left, right = operators(order, q.grid)
    return right.apply(left.apply(q.values)) + c * constant_term(order, q.grid, g)


def solve_example1(
    order: OrderLike,
    c: float,
    grid: UniformGrid,
    g: str = "discrete",
    q_a: float = 0.0,
    rtol: float = 1e-9,
) -> SampledPath:
    """Solve ``M_R M_L q = -c g`` by back then forward substitution.

    The system is ``M_L^T M_L q = -c g`` with ``M_L`` unit-diagonal up to the
    ``h^-alpha`` scale, so the solution is unique. ``q_a`` shifts the solution
    by a constant afterwards; note the left derivative of a constant is not
    zero, so the shifted path no longer solves the same discrete system.
    """
    order = _check_unit_order(order)
    left, right = operators(order, grid)
    gvec = constant_term(order, grid, g)
    z = right.solve(-c * gvec)
    q = left.solve(z)
    if not np.all(np.isfinite(q)):
        raise NumericalError("triangular solve produced non-finite values")
    res = right.apply(left.apply(q)) + c * gvec
    bound = rtol * max(1.0, abs(c) * float(np.max(np.abs(gvec))))
    if np.max(np.abs(res)) > bound:
        raise NumericalError(f"solve residual {np.max(np.abs(res)):.3e} exceeds {bound:.3e}")
    return SampledPath(grid, q + q_a)


@dataclass(frozen=True)
class EquivalenceReport:
    q: SampledPath
    p: SampledPath
    #: ``M_R M_L q + c g`` (Euler-Lagrange route)
    el_residual: np.ndarray
    #: ``M_R p`` with ``p = M_L q + c`` (Hamilton route)
    hamilton_residual: np.ndarray
    #: max-norm of ``hamilton_residual`` over the window
    discrepancy: float
    #: max-norm difference between the two routes over the window
    route_gap: float


def el_hamilton_equivalence(
    order: OrderLike,
    c: float,
    grid: UniformGrid,
    g: str = "discrete",
    window: tuple[float, float] | None = None,
) -> EquivalenceReport:
    """Check that the Hamilton equation ``D_right p = 0`` holds on the EL solution.

    ``window`` restricts the reported norms to nodes inside ``[lo, hi]``.
    """
    order = _check_unit_order(order)
    q = solve_example1(order, c, grid, g)
    left, right = operators(order, grid)
    p = left.apply(q.values) + c
    ham = right.apply(p)
    el = example1_residual(order, c, q, g)
    mask = np.ones(grid.n_points, dtype=bool)
    if window is not None:
        t = grid.nodes
        mask = (t >= window[0]) & (t <= window[1])
        if not mask.any():
            raise ValueError(f"window {window} contains no nodes")
    return EquivalenceReport(
        q=q,
        p=SampledPath(grid, p),
        el_residual=el,
        hamilton_residual=ham,
        discrepancy=float(np.max(np.abs(ham[mask]))),
        route_gap=float(np.max(np.abs((ham - el)[mask]))),
    )

# }}}
