import math

import numpy as np
import pytest

from tsgag import (TSFunction, average, build_timescale, component_averages, delta_integral,
                   lp_norm)
from tsgag.errors import DomainError
from support import rand_function, rand_timescale


def test_constant_gives_measure():
    T = build_timescale([(0, 1)], [(2, 0.5)])
    v, err = delta_integral(TSFunction.constant(T, 1), T)
    assert math.isclose(v, 1.5, rel_tol=1e-14)


def test_linear():
    T = build_timescale([(0, 1)])
    v, err = delta_integral(TSFunction.linear(T, 1), T)
    assert abs(v - 0.5) <= max(err, 1e-14)


def test_power_singularity():
    T = build_timescale([(0, 1)])
    u = TSFunction.power(T, 0.5, -0.5)
    v, err = delta_integral(u, T)
    assert math.isclose(v, 2 * math.sqrt(2), rel_tol=1e-8)


def test_power_singularity_tolerance_monotone():
    T = build_timescale([(0, 1)])
    u = TSFunction.power(T, 0.5, -0.5)
    from tsgag import QuadConfig
    errs = [abs(delta_integral(u, T, QuadConfig(rel_tol=r))[0] - 2 * math.sqrt(2))
            for r in (1e-4, 5e-5, 1e-8)]
    assert errs[2] <= errs[0] + 1e-15


def test_strong_integrable_singularity():
    T = build_timescale([(-1, 1)])
    v, _ = delta_integral(TSFunction.power(T, 0.0, -0.9), T)
    assert math.isclose(v, 20.0, rel_tol=1e-6)


def test_lp_norms():
    T = build_timescale([(0, 1)])
    assert math.isclose(lp_norm(TSFunction.linear(T, 1), 2, T), math.sqrt(1 / 3), rel_tol=1e-12)
    T2 = build_timescale([], [(0, 1), (1, 1)])
    u = TSFunction.from_samples(T2, {}, {0: 0.0, 1: 1.0})
    assert math.isclose(lp_norm(u, 3, T2), 1.0)
    T3 = build_timescale([(0, 1)], [(2, 0.5)])
    assert math.isclose(lp_norm(TSFunction.constant(T3, -2), 3, T3), 2 * 1.5 ** (1 / 3))
    with pytest.raises(DomainError):
        lp_norm(TSFunction.constant(T3, 1), 0.5, T3)


def test_averages():
    T = build_timescale([(0, 1)])
    assert math.isclose(average(TSFunction.linear(T, 1), T), 0.5, rel_tol=1e-14)
    T2 = build_timescale([(0, 1)], [(2, 1)])
    u = TSFunction.from_samples(T2, {0: ([0, 1], [0, 0])}, {1: 3.0})
    assert math.isclose(average(u, T2), 1.5)
    assert average(u, T2, T2.components[1]) == 3.0
    assert average(u, T2, 1) == 3.0
    with pytest.raises(DomainError):
        average(u, T2, "bogus")
    other = build_timescale([(5, 6)])
    with pytest.raises(DomainError):
        average(u, T2, other.components[0])


def test_mean_consistency_and_holder():
    rng = np.random.default_rng(11)
    for _ in range(30):
        T = rand_timescale(rng)
        u = rand_function(T, rng)
        lam = np.array([c.measure for c in T.components])
        avgs = component_averages(u)
        assert math.isclose(average(u, T) * T.total_measure, float(lam @ avgs),
                            rel_tol=1e-10, abs_tol=1e-12)
        p, q = sorted(rng.uniform(1, 4, 2))
        lhs = lp_norm(u, p, T)
        rhs = T.total_measure ** (1 / p - 1 / q) * lp_norm(u, q, T)
        assert lhs <= rhs + 1e-10
