import math

import numpy as np
import pytest
from scipy.special import gamma

from tsgag import (SeminormParams, build_timescale, one_sided_gap_demo, rl_derivative_of_constant,
                   rl_norm_of_constant, seminorm)
from tsgag.errors import DomainError, TAtOrBelowA
from support import rand_function


def test_derivative_of_constant():
    assert math.isclose(rl_derivative_of_constant(1, 0, 0.5, 1), 1 / math.sqrt(math.pi),
                        rel_tol=1e-14)
    assert math.isclose(rl_derivative_of_constant(2, 0, 0.5, 1), 2 / math.sqrt(math.pi))
    with pytest.raises(TAtOrBelowA):
        rl_derivative_of_constant(1, 0, 0.5, 0)
    with pytest.raises(DomainError):
        rl_derivative_of_constant(1, 0, 1.0, 1)


def test_norm_closed_form():
    a, b, al, p = 0.0, 1.0, 0.25, 2.0
    expect = ((b - a) ** (1 - al * p) / ((1 - al * p) * gamma(1 - al) ** p)) ** (1 / p)
    assert math.isclose(rl_norm_of_constant(a, b, al, p), expect, rel_tol=1e-14)
    assert rl_norm_of_constant(0, 1, 0.5, 2) == math.inf


def test_demo():
    rep = one_sided_gap_demo(0, 1, 0.25, 2)
    assert rep.gagliardo_of_constant == 0.0
    assert rep.rl_norm_of_constant > 0 and rep.rl_in_lp
    rep = one_sided_gap_demo(0, 1, 0.6, 2)
    assert rep.gagliardo_of_constant == 0.0
    assert rep.rl_norm_of_constant == math.inf and not rep.rl_in_lp
    with pytest.raises(DomainError):
        one_sided_gap_demo(1, 0, 0.25, 2)


def test_translation_invariance():
    T = build_timescale([(0, 1)])
    rng = np.random.default_rng(3)
    prm = SeminormParams(0.4, 2)
    for _ in range(5):
        u = rand_function(T, rng)
        c = float(rng.uniform(-5, 5))
        assert math.isclose(seminorm(u + c, prm).value, seminorm(u, prm).value, rel_tol=1e-12)
