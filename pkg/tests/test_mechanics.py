import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmech.fracops import SampledPath, UniformGrid, power_rule, right_constant_rule, rl_right
from fracmech.mechanics import (
    LagrangianSpec,
    NumericalError,
    PhaseSample,
    Variant,
    canonical_equations,
    constant_term,
    el_hamilton_equivalence,
    el_residual_full,
    el_residual_left,
    example1_residual,
    hamiltonian,
    hamiltonian_closed_form,
    momentum,
    operators,
    solve_example1,
)
from fracmech.smooth import SmoothFn

SQRT_PI = math.sqrt(math.pi)
GRID = UniformGrid(0.0, 1.0, 257)


def random_path(seed, grid=GRID):
    return SampledPath(grid, np.random.default_rng(seed).standard_normal(grid.n_points))


# --- specification objects ---------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        LagrangianSpec.plus_linear(0.5, 0.0)
    with pytest.raises(ValueError):
        LagrangianSpec(Variant.PlusComposite, 0.5)
    with pytest.raises(ValueError):
        LagrangianSpec.plus_linear(0.5, 1.0, coord=2, n_coords=2)
    with pytest.raises(ValueError):
        LagrangianSpec.free(1.5)


def test_phase_sample_validation():
    q = random_path(0)
    with pytest.raises(ValueError):
        PhaseSample((q, q), (q,))
    with pytest.raises(ValueError):
        PhaseSample((q, SampledPath(UniformGrid(0.0, 2.0, 257), q.values)))
    with pytest.raises(ValueError):
        el_residual_left(LagrangianSpec.free(0.5, n_coords=2), q)


# --- Euler-Lagrange residuals ---------------------------------------------------


def test_free_zero_path():
    L = LagrangianSpec.free(0.5)
    zero = SampledPath(GRID, np.zeros(GRID.n_points))
    assert np.all(el_residual_full(L, zero).values == 0.0)


def test_full_reduces_to_left_without_right_kinetic():
    L = LagrangianSpec.free(0.5)
    q = random_path(1)
    assert np.array_equal(el_residual_full(L, q).values, el_residual_left(L, q).values)


def test_right_kinetic_term():
    L = LagrangianSpec(Variant.FreeFrac, 0.5, right_kinetic=0.7)
    q = random_path(2)
    left, right = operators(0.5, GRID)
    ref = right.matrix() @ left.matrix() @ q.values + left.matrix() @ (0.7 * right.matrix() @ q.values)
    np.testing.assert_allclose(el_residual_full(L, q).values, ref, rtol=1e-10, atol=1e-9)


@pytest.mark.parametrize("c", [1.0, -2.5])
def test_plus_linear_adds_right_constant_term(c):
    q = random_path(3)
    free = el_residual_left(LagrangianSpec.free(0.5), q).values
    lin = el_residual_full(LagrangianSpec.plus_linear(0.5, c), q, g="analytic").values
    t = GRID.nodes[:-1]
    ref = free[:-1] + c * right_constant_rule(1.0, 0.5, 1.0, t)
    np.testing.assert_allclose(lin[:-1], ref, rtol=1e-12, atol=1e-12)
    lin_d = el_residual_left(LagrangianSpec.plus_linear(0.5, c), q).values
    np.testing.assert_allclose(lin_d - free, c * rl_right(SmoothFn.const(1.0), 0.5, GRID).values, rtol=1e-12, atol=1e-12)


def test_plus_linear_at_left_end():
    zero = SampledPath(UniformGrid(0.0, 1.0, 4097), np.zeros(4097))
    spec = LagrangianSpec.plus_linear(0.5, 1.0)
    assert el_residual_left(spec, zero, g="analytic").values[0] == pytest.approx(1 / SQRT_PI, rel=1e-13)
    assert el_residual_left(spec, zero).values[0] == pytest.approx(1 / SQRT_PI, rel=1e-2)


def test_small_c_is_continuous():
    q = random_path(4)
    free = el_residual_left(LagrangianSpec.free(0.5), q).values
    for c in (1e-3, 1e-6, 1e-9):
        lin = el_residual_left(LagrangianSpec.plus_linear(0.5, c), q).values
        assert np.max(np.abs(lin - free)) <= 10 * c * np.max(constant_term(0.5, GRID))


def test_classical_limit_makes_lagrangians_equivalent():
    assert np.all(constant_term(1.0, GRID, "analytic") == 0.0)
    q = random_path(5)
    free = el_residual_left(LagrangianSpec.free(1.0), q, g="analytic").values
    for c in (0.5, 3.0):
        lin = el_residual_left(LagrangianSpec.plus_linear(1.0, c), q, g="analytic").values
        assert np.array_equal(lin, free)


def test_multi_coordinate_selection():
    qs = (random_path(6), random_path(7), random_path(8))
    L = LagrangianSpec.plus_linear(0.5, 2.0, coord=1, n_coords=3)
    res = el_residual_left(L, qs)
    free = el_residual_left(LagrangianSpec.free(0.5, n_coords=3), qs)
    assert np.array_equal(res[0].values, free[0].values)
    assert np.array_equal(res[2].values, free[2].values)
    assert not np.array_equal(res[1].values, free[1].values)


def test_plus_composite_variation():
    F = SmoothFn.parse("y^3")
    q = random_path(9)
    free = el_residual_left(LagrangianSpec.free(0.5), q).values
    comp = el_residual_left(LagrangianSpec.plus_composite(0.5, F), q).values
    np.testing.assert_allclose(comp - free, 3 * q.values**2 * constant_term(0.5, GRID), rtol=1e-12, atol=1e-12)


def test_residual_linear_in_c():
    q = random_path(10)
    r = {c: example1_residual(0.5, c, q) for c in (0.0, 1.0, 2.0, 3.0)}
    np.testing.assert_allclose(r[3.0] - r[0.0], (r[1.0] - r[0.0]) + (r[2.0] - r[0.0]), rtol=1e-12, atol=1e-12)


# --- momentum and Hamiltonian --------------------------------------------------------


def test_momentum_examples():
    zero = SampledPath(GRID, np.zeros(GRID.n_points))
    assert np.all(momentum(LagrangianSpec.plus_linear(0.5, 1.7), zero).values == 1.7)
    p = momentum(LagrangianSpec.free(0.5), SmoothFn.monomial(1), GRID)
    t = GRID.nodes
    np.testing.assert_allclose(p.values, 2 * np.sqrt(t / math.pi), rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(p.values[1:], power_rule(1, 0.5, 0.0, t[1:]), rtol=1e-14)
    p1 = momentum(LagrangianSpec.plus_linear(1.0, 0.3), SampledPath.sample(SmoothFn.monomial(1), GRID))
    np.testing.assert_allclose(p1.values[1:], 1.3, rtol=1e-12)


def test_hamiltonian_closed_form_values():
    L = LagrangianSpec.plus_linear(0.5, 2.0)
    assert hamiltonian_closed_form(L, 3.0) == 0.5
    assert hamiltonian_closed_form(L, 2.0) == 0.0
    zero = SampledPath(GRID, np.zeros(GRID.n_points))
    h = hamiltonian(L, PhaseSample(zero, SampledPath(GRID, np.full(GRID.n_points, 2.0))))
    assert np.all(h.values == 0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3), st.floats(0.05, 1.0))
def test_legendre_consistency(seed, c, alpha):
    L = LagrangianSpec.plus_linear(alpha, c)
    grid = UniformGrid(0.0, 1.0, 129)
    q = random_path(seed, grid)
    p = momentum(L, q)
    h = hamiltonian(L, PhaseSample(q, p)).values
    ref = hamiltonian_closed_form(L, p).values
    assert np.max(np.abs(h - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_canonical_equations():
    L = LagrangianSpec.plus_linear(0.5, 1.5)
    q = random_path(11)
    p = momentum(L, q)
    res = canonical_equations(L, PhaseSample(q, p))
    assert np.max(np.abs(res.coordinate[0].values)) <= 4 * np.finfo(float).eps * np.max(np.abs(p.values))
    assert res.dH_dt == 0.0
    # the momentum row is D_right p, which splits into the EL residual of the free part plus c g
    left, right = operators(0.5, GRID)
    lhs = res.momentum[0].values
    rhs = right.apply(left.apply(q.values)) + 1.5 * rl_right(SmoothFn.const(1.0), 0.5, GRID).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


def test_canonical_equations_need_momenta():
    with pytest.raises(ValueError):
        canonical_equations(LagrangianSpec.free(0.5), PhaseSample(random_path(0)))


# --- worked example: solve and equivalence ---------------------------------------------


def test_solver_residual_at_1025():
    grid = UniformGrid(0.0, 1.0, 1025)
    q = solve_example1(0.5, 1.0, grid)
    res = example1_residual(0.5, 1.0, q)
    assert np.max(np.abs(res)) <= 1e-10


def test_c_zero_gives_zero_path():
    q = solve_example1(0.5, 0.0, GRID)
    assert np.all(q.values == 0.0)
    assert el_hamilton_equivalence(0.5, 0.0, GRID).discrepancy == 0.0


def test_alpha_one_solution_is_a_line():
    c = 1.7
    q = solve_example1(1.0, c, GRID).values
    h = GRID.step
    np.testing.assert_allclose(q, -c * h * (np.arange(GRID.n_points) + 1), rtol=1e-12)
    np.testing.assert_allclose(np.diff(q) / h, -c, rtol=1e-10)


def test_equivalence_discrete():
    rep = el_hamilton_equivalence(0.5, 1.0, UniformGrid(0.0, 1.0, 1025))
    assert rep.discrepancy <= 1e-12
    assert rep.route_gap <= 1e-12


@pytest.mark.parametrize("alpha,c", [(0.3, 1.0), (0.7, -2.0), (1.0, 0.5)])
def test_equivalence_other_parameters(alpha, c):
    rep = el_hamilton_equivalence(alpha, c, UniformGrid(-1.0, 2.0, 300))
    scale = max(1.0, float(np.max(np.abs(rep.q.values))))
    assert rep.route_gap <= 1e-12 * scale
    assert rep.discrepancy <= 1e-10 * scale


def test_equivalence_analytic_g_decays_first_order():
    ns = [257, 513, 1025, 2049, 4097]
    d = []
    for n in ns:
        rep = el_hamilton_equivalence(0.5, 1.0, UniformGrid(0.0, 1.0, n), g="analytic", window=(0.0, 0.75))
        d.append(rep.discrepancy)
    ratios = np.array(d[:-1]) / np.array(d[1:])
    assert np.all(np.abs(np.log2(ratios) - 1.0) <= 0.2)


def test_solver_tolerance_breach_is_reported():
    with pytest.raises(NumericalError):
        solve_example1(0.5, 1.0, GRID, rtol=1e-30)


def test_bad_mode():
    with pytest.raises(ValueError):
        constant_term(0.5, GRID, "exact")
