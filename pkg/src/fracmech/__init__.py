"""Riemann-Liouville fractional operators, fractional Faa di Bruno expansions
and fractional Euler-Lagrange / Hamilton mechanics."""
from .combinatorics import (
    CompositeSpec,
    Partition,
    enumerate_partitions,
    faa_di_bruno_k,
    frac_faa_di_bruno,
    frac_series_heaviside,
)
from .fracops import (
    FracOrder,
    SampledPath,
    Side,
    TriangularOperator,
    UniformGrid,
    compose_rl,
    constant_rule,
    power_rule,
    product_rule_series,
    rl_left,
    rl_left_exact,
    rl_right,
    rl_right_exact,
)
from .mechanics import (
    LagrangianSpec,
    NumericalError,
    PhaseSample,
    Variant,
    el_hamilton_equivalence,
    solve_example1,
)
from .ostro import ChiralField, Jet, OstroMomenta
from .smooth import FunctionSpecError, SmoothFn
from .special import binom, gamma, rgamma

__all__ = [
    "ChiralField", "CompositeSpec", "FracOrder", "FunctionSpecError", "Jet",
    "LagrangianSpec", "NumericalError", "OstroMomenta", "Partition", "PhaseSample",
    "SampledPath", "Side", "SmoothFn", "TriangularOperator", "UniformGrid", "Variant",
    "binom", "compose_rl", "constant_rule", "el_hamilton_equivalence",
    "enumerate_partitions", "faa_di_bruno_k", "frac_faa_di_bruno",
    "frac_series_heaviside", "gamma", "power_rule", "product_rule_series",
    "rgamma", "rl_left", "rl_left_exact", "rl_right", "rl_right_exact",
    "solve_example1",
]

__version__ = "0.1.0"
