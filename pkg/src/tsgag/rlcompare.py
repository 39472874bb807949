"""Constants against the one-sided Riemann-Liouville derivative on an interval.

A constant has zero Gagliardo seminorm, while its left Riemann-Liouville
derivative ``c (t - a)^{-alpha} / Gamma(1 - alpha)`` is nonzero, and lies in
``L^p(a, b)`` exactly when ``alpha p < 1``. So no bound of the RL norm by the
seminorm can hold on the whole space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import gamma as gamma_fn

from .errors import DomainError, TAtOrBelowA
from .functions import TSFunction
from .gagliardo import SeminormParams, seminorm
from .quadrature import DEFAULT_CONFIG, QuadConfig
from .timescale import build_timescale


@dataclass
class RLDemoReport:
    a: float
    b: float
    alpha: float
    p: float
    gagliardo_of_constant: float
    rl_norm_of_constant: float
    rl_in_lp: bool
    conclusion: str


def rl_derivative_of_constant(c: float, a: float, alpha: float, t: float) -> float:
    """Left RL derivative of the constant ``c`` at ``t > a``."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha", f"alpha must lie in (0, 1), got {alpha}")
    if not t > a:
        raise TAtOrBelowA(f"t = {t} must exceed a = {a}")
    return float(c * (t - a) ** (-alpha) / gamma_fn(1.0 - alpha))


def rl_norm_of_constant(a: float, b: float, alpha: float, p: float, c: float = 1.0) -> float:
    """``||D^alpha c||_{L^p(a, b)}``; ``inf`` when ``alpha p >= 1``."""
    if alpha * p >= 1.0:
        return math.inf
    val = (b - a) ** (1.0 - alpha * p) / ((1.0 - alpha * p) * gamma_fn(1.0 - alpha) ** p)
    return float(abs(c) * val ** (1.0 / p))


def one_sided_gap_demo(a: float, b: float, alpha: float, p: float,
                       cfg: QuadConfig = DEFAULT_CONFIG) -> RLDemoReport:
    if not a < b:
        raise DomainError("b", f"need a < b, got a = {a}, b = {b}")
    prm = SeminormParams(alpha, p)
    T = build_timescale([(a, b)])
    semi = seminorm(TSFunction.constant(T, 1.0), prm, T, cfg).value
    rl = rl_norm_of_constant(a, b, alpha, p)
    in_lp = alpha * p < 1.0
    if in_lp:
        tail = f"its RL derivative has L^p norm {rl:.6g} > 0"
    else:
        tail = "its RL derivative is not in L^p since alpha p >= 1"
    conclusion = (f"the constant 1 has Gagliardo seminorm {semi:g} while {tail}; "
                  "no one-sided bound of the RL norm by the seminorm holds")
    return RLDemoReport(a, b, alpha, p, semi, rl, in_lp, conclusion)
