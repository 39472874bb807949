"""Fractional Gagliardo energies on hybrid time scales.

A hybrid time scale is a finite union of compact intervals and weighted
isolated points. The package computes Lebesgue delta integrals, Gagliardo
seminorms with divergence detection, checks Poincare, Hardy, CKN and
cross-component inequalities, and solves the p = 2 nonlocal model problem
by a Galerkin method.
"""

from .errors import *  # noqa: F401,F403
from .functions import TSFunction
from .galerkin import (Basis, GalerkinSystem, ModelSolution, assemble, build_basis,
                       load_vector, poincare_eigenvalue, solve_model_problem)
from .gagliardo import (SeminormParams, SeminormResult, oracle_extrapolated, richardson,
                        seminorm, seminorm_oracle, wnorm)
from .inequalities import (InequalityReport, ckn_check, coercivity_check, coercivity_constant,
                           cross_bounds_check, discrete_poincare_bounds,
                           discrete_poincare_constant, hardy_check, poincare_check,
                           poincare_constant)
from .integrate import average, component_averages, delta_integral, lp_norm
from .quadrature import DEFAULT_CONFIG, QuadConfig
from .rlcompare import (RLDemoReport, one_sided_gap_demo, rl_derivative_of_constant,
                        rl_norm_of_constant)
from .scenario import Scenario, parse_scenario
from .timescale import Component, TimeScale, build_timescale, components, geometry

__version__ = "0.1.0"
