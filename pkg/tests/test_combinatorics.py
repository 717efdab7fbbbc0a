import itertools
import math

import numpy as np
import pytest
import sympy as sp

from fracmech.combinatorics import (
    CompositeSpec,
    Partition,
    enumerate_partitions,
    faa_di_bruno_k,
    frac_faa_di_bruno,
    frac_faa_di_bruno_terms,
    frac_series_heaviside,
    frac_series_heaviside_terms,
    heaviside_coeff,
)
from fracmech.fracops import UniformGrid, constant_rule, power_rule, rl_left, rl_left_exact
from fracmech.smooth import SmoothFn

SQRT_PI = math.sqrt(math.pi)
Y = SmoothFn.monomial(1)
ID = SmoothFn.monomial(1)


def euler_partition_counts(n):
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def brute_force(k):
    ranges = [range(k // r + 1) for r in range(1, k + 1)]
    return [a for a in itertools.product(*ranges) if sum(r * x for r, x in enumerate(a, 1)) == k]


# --- partitions ----------------------------------------------------------------


def test_small_cases():
    (only,) = enumerate_partitions(1)
    assert only.multiplicities == (1,) and only.m == 1
    assert len(enumerate_partitions(4)) == 5
    assert len(enumerate_partitions(10)) == 42


@pytest.mark.parametrize("k", range(1, 9))
def test_matches_brute_force(k):
    got = [p.multiplicities for p in enumerate_partitions(k)]
    assert got == sorted(brute_force(k))


def test_counts_match_euler_recurrence():
    counts = euler_partition_counts(20)
    for k in range(1, 21):
        parts = enumerate_partitions(k)
        assert len(parts) == counts[k]
        assert len({p.multiplicities for p in parts}) == len(parts)
        for p in parts:
            a = p.multiplicities
            assert sum(r * x for r, x in enumerate(a, 1)) == k
            assert sum(a) == p.m
            assert 1 <= p.m <= k


def test_lexicographic_order():
    parts = [p.multiplicities for p in enumerate_partitions(12)]
    assert parts == sorted(parts)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition(3, 3, (1, 1, 0))
    with pytest.raises(ValueError):
        Partition(3, 1, (1, 1))
    with pytest.raises(ValueError):
        Partition(4, 2, (2, 1, 0, 0))
    for bad in (0, 31, 2.0):
        with pytest.raises(ValueError):
            enumerate_partitions(bad)


# --- classical Faa di Bruno ------------------------------------------------------

t = sp.Symbol("t", positive=True)
ys = sp.Symbol("y")
BATTERY = [
    ("y^2", "t^2", ys**2, t**2),
    ("exp(y)", "t^2", sp.exp(ys), t**2),
    ("sin(y)", "cos(t)", sp.sin(ys), sp.cos(t)),
    ("y^3 - 2*y", "exp(0.5*t)", ys**3 - 2 * ys, sp.exp(t / 2)),
    ("cos(2*y)", "t^3 + t", sp.cos(2 * ys), t**3 + t),
    ("exp(-y)", "sin(t)", sp.exp(-ys), sp.sin(t)),
    ("y^4", "t^1.5", ys**4, t ** sp.Rational(3, 2)),
    ("y", "exp(t)*sin(t)", ys, sp.exp(t) * sp.sin(t)),
    ("sin(y) + y^2", "t^2 - 3*t", sp.sin(ys) + ys**2, t**2 - 3 * t),
    ("exp(0.3*y)", "cos(t) + t", sp.exp(sp.Rational(3, 10) * ys), sp.cos(t) + t),
]


@pytest.mark.parametrize("case", BATTERY, ids=[f"{c[0]}|{c[1]}" for c in BATTERY])
def test_faa_di_bruno_against_sympy(case):
    ftext, htext, fexpr, hexpr = case
    spec = CompositeSpec(SmoothFn.parse(ftext), SmoothFn.parse(htext))
    comp = fexpr.subs(ys, hexpr)
    for k in range(1, 7):
        for x in (0.4, 1.3):
            ref = float(sp.diff(comp, t, k).subs(t, x))
            got = faa_di_bruno_k(spec, k, x)
            assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_faa_di_bruno_examples():
    spec = CompositeSpec(SmoothFn.parse("y^2"), SmoothFn.parse("t^2"))
    assert faa_di_bruno_k(spec, 2, 1.0) == pytest.approx(12.0, rel=1e-14)
    spec = CompositeSpec(SmoothFn.parse("sin(y)"), SmoothFn.parse("t^3"))
    x = 0.7
    assert faa_di_bruno_k(spec, 1, x) == pytest.approx(math.cos(x**3) * 3 * x**2, rel=1e-14)


def test_exp_of_square_against_richardson_differences():
    f = lambda x: math.exp(x * x)  # noqa: E731

    def d3(h):
        return (f(0.5 + 2 * h) - 2 * f(0.5 + h) + 2 * f(0.5 - h) - f(0.5 - 2 * h)) / (2 * h**3)

    h = 1e-3
    ref = (4 * d3(h / 2) - d3(h)) / 3
    spec = CompositeSpec(SmoothFn.exp(1.0), SmoothFn.monomial(2))
    assert faa_di_bruno_k(spec, 3, 0.5) == pytest.approx(ref, rel=1e-6)


# --- fractional series -------------------------------------------------------------


def test_heaviside_examples():
    assert frac_series_heaviside(SmoothFn.monomial(1), 0.5, 0.0, 1.0, 1) == pytest.approx(2 / SQRT_PI, rel=1e-14)
    assert frac_series_heaviside(SmoothFn.monomial(2), 0.5, 0.0, 1.0, 2) == pytest.approx(8 / (3 * SQRT_PI), rel=1e-14)
    terms = frac_series_heaviside_terms(SmoothFn.const(3.0), 0.4, 0.0, 2.0, 8)
    assert np.all(terms[1:] == 0)
    assert terms[0] == pytest.approx(constant_rule(3.0, 0.4, 0.0, 2.0), rel=1e-15)


def test_heaviside_coeff_large_k_matches_direct_form():
    for k in (18, 19, 20):
        v = heaviside_coeff(0.5, k, 0.0, 1.3)
        from fracmech.special import binom, gamma

        assert v == pytest.approx(binom(0.5, k) * 1.3 ** (k - 0.5) / gamma(k + 0.5), rel=1e-13)
    assert heaviside_coeff(0.5, 25, 0.0, 1.3) != 0.0
    assert heaviside_coeff(1.0, 25, 0.0, 1.3) == 0.0


def test_heaviside_rejects_bad_arguments():
    with pytest.raises(ValueError):
        frac_series_heaviside(Y, 0.5, 1.0, 1.0)
    with pytest.raises(ValueError):
        frac_series_heaviside(Y, 1.5, 0.0, 1.0)
    with pytest.raises(ValueError):
        frac_series_heaviside(Y, 0.5, 0.0, 1.0, max_k=31)


def test_identity_outer_matches_heaviside_termwise():
    for inner in ("t", "t^2 + exp(t)", "sin(3*t)"):
        h = SmoothFn.parse(inner)
        spec = CompositeSpec(ID, h)
        a = frac_faa_di_bruno_terms(spec, 0.5, 0.0, 1.1, 12)
        b = frac_series_heaviside_terms(h, 0.5, 0.0, 1.1, 12)
        np.testing.assert_allclose(a, b, rtol=1e-14, atol=0)


def test_square_of_identity():
    spec = CompositeSpec(SmoothFn.monomial(2), SmoothFn.monomial(1))
    assert frac_faa_di_bruno(spec, 0.5, 0.0, 1.0, 2) == pytest.approx(8 / (3 * SQRT_PI), rel=1e-14)


POLY_CASES = [("y^2", "t^2 + 1"), ("y^3 - y", "2*t - 1"), ("(y+1)^2", "t^3"), ("y", "t^4 - t")]


@pytest.mark.parametrize("ftext,htext", POLY_CASES)
def test_polynomial_compositions_terminate(ftext, htext):
    spec = CompositeSpec(SmoothFn.parse(ftext), SmoothFn.parse(htext))
    comp = spec.composed()
    deg = comp.degree
    values = [frac_faa_di_bruno(spec, 0.5, 0.0, 0.9, k) for k in range(deg, deg + 6)]
    assert len(set(values)) == 1
    terms = frac_faa_di_bruno_terms(spec, 0.5, 0.0, 0.9, deg + 5)
    assert np.all(terms[deg + 1 :] == 0.0)
    exact = rl_left_exact(comp, 0.5, 0.0, 0.9)
    assert values[0] == pytest.approx(exact, rel=1e-10)


def test_exp_truncation_converges_against_gl():
    # Richardson-extrapolated GL value at t = 1 removes the O(h) and O(h^2) error terms
    grids = [UniformGrid(0.0, 1.0, n) for n in (2049, 4097, 8193)]
    g1, g2, g3 = (rl_left(SmoothFn.exp(1.0), 0.5, g).values[-1] for g in grids)
    oracle = (4 * (2 * g3 - g2) - (2 * g2 - g1)) / 3
    closed = 1 / SQRT_PI + math.e * math.erf(1.0)
    assert oracle == pytest.approx(closed, rel=1e-9)
    spec = CompositeSpec(SmoothFn.exp(1.0), SmoothFn.monomial(1))
    errs = [abs(frac_faa_di_bruno(spec, 0.5, 0.0, 1.0, k) - oracle) for k in (4, 8, 12, 16)]
    assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] < 1e-9


def test_raw_gl_oracle_matches_within_first_order_error():
    g = UniformGrid(0.0, 1.0, 8193)
    raw = rl_left(SmoothFn.exp(1.0), 0.5, g).values[-1]
    spec = CompositeSpec(SmoothFn.exp(1.0), SmoothFn.monomial(1))
    assert frac_faa_di_bruno(spec, 0.5, 0.0, 1.0, 16) == pytest.approx(raw, rel=1e-3)


def test_alpha_one_is_chain_rule():
    spec = CompositeSpec(SmoothFn.parse("sin(y)"), SmoothFn.parse("t^2"))
    assert frac_faa_di_bruno(spec, 1.0, 0.0, 0.8) == pytest.approx(math.cos(0.64) * 1.6, rel=1e-14)


def test_power_rule_agreement_for_inner_power():
    spec = CompositeSpec(SmoothFn.parse("y^2"), SmoothFn.parse("t^1.5"))
    # (t^1.5)^2 = t^3 terminates after k = 3
    assert frac_faa_di_bruno(spec, 0.3, 0.0, 1.7, 3) == pytest.approx(power_rule(3, 0.3, 0.0, 1.7), rel=1e-10)
