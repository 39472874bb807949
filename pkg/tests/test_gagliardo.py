import math

import numpy as np
import pytest

from tsgag import (SeminormParams, TSFunction, build_timescale, lp_norm, oracle_extrapolated,
                   richardson, seminorm, seminorm_oracle, wnorm)
from tsgag.errors import DivergentSeminorm, DomainError
from support import (HYBRID_MIXED_SEMINORM, INDICATOR_QUARTER_VALUE_P, LINEAR_UNIT_SEMINORM,
                     TWO_ATOM_SEMINORM, hybrid_mixed_value_p, indicator_value_p, linear_dblquad,
                     oracle_with_resolution, rand_function, rand_params, rand_timescale)

HALF = SeminormParams(0.5, 2.0)
ROUNDOFF = 1e-12


@pytest.fixture
def unit():
    return build_timescale([(0, 1)])


@pytest.fixture
def two_atoms():
    return build_timescale([], [(0, 1), (2, 1)])


@pytest.fixture
def hybrid():
    return build_timescale([(0, 1)], [(2, 1)])


def step(T, vals):
    return TSFunction.from_spec(T, [{"component_index": i, "kind": "constant", "value": v}
                                    for i, v in enumerate(vals)])


def test_params_validation():
    for a in (0, 1, 1.5, -0.1):
        with pytest.raises(DomainError) as ei:
            SeminormParams(a, 2)
        assert ei.value.param == "alpha"
    with pytest.raises(DomainError) as ei:
        SeminormParams(0.5, 0.9)
    assert ei.value.param == "p"
    assert SeminormParams(0.5, 2).gamma == 2.0


def test_constant_is_zero(hybrid):
    r = seminorm(TSFunction.constant(hybrid, 4.2), HALF)
    assert r.value == 0 and r.cc == 0 and r.dd == 0 and r.mixed == 0
    assert seminorm_oracle(TSFunction.constant(hybrid, 4.2), HALF, hybrid, 32) == 0


def test_linear_unit(unit):
    assert math.isclose(linear_dblquad(0.5, 2.0), LINEAR_UNIT_SEMINORM, rel_tol=1e-10)
    r = seminorm(TSFunction.linear(unit, 1), HALF)
    assert abs(r.value - LINEAR_UNIT_SEMINORM) <= 1e-6
    assert not r.diverged


@pytest.mark.parametrize("alpha,p", [(0.3, 1.5), (0.7, 2.5), (0.9, 1.0)])
def test_linear_other_params(unit, alpha, p):
    r = seminorm(TSFunction.linear(unit, 1), SeminormParams(alpha, p))
    assert math.isclose(r.value_p, linear_dblquad(alpha, p), rel_tol=1e-7)


def test_two_atoms(two_atoms):
    u = step(two_atoms, [0, 1])
    r = seminorm(u, HALF)
    assert abs(r.value - TWO_ATOM_SEMINORM) <= 1e-12
    assert r.cc == 0 and r.mixed == 0 and r.dd == 0.5
    for n in (2, 8, 64):
        assert seminorm_oracle(u, HALF, two_atoms, n) == 0.5


def test_hybrid_mixed(hybrid):
    assert math.isclose(hybrid_mixed_value_p(0.5, 2), 1.0, rel_tol=1e-12)
    r = seminorm(step(hybrid, [0, 1]), HALF)
    assert abs(r.value - HYBRID_MIXED_SEMINORM) <= 1e-6
    assert r.cc == 0 and r.dd == 0
    assert math.isclose(r.mixed, 1.0, rel_tol=1e-9)


def test_indicator_convergent(unit):
    prm = SeminormParams(0.25, 2)
    assert math.isclose(indicator_value_p(0.25, 2), INDICATOR_QUARTER_VALUE_P, rel_tol=1e-14)
    r = seminorm(TSFunction.indicator(unit, 0, 0.5), prm)
    assert abs(r.value_p - INDICATOR_QUARTER_VALUE_P) <= 1e-5
    assert not r.diverged


@pytest.mark.parametrize("alpha", [0.5, 0.6, 0.75])
def test_indicator_divergent(unit, alpha):
    r = seminorm(TSFunction.indicator(unit, 0, 0.5), SeminormParams(alpha, 2))
    assert r.diverged and r.value == math.inf and r.err_est == math.inf


def test_wnorm(unit):
    assert math.isclose(wnorm(TSFunction.constant(unit, 1), HALF), 1.0, rel_tol=1e-15)
    w = wnorm(TSFunction.linear(unit, 1), HALF)
    assert math.isclose(w, math.sqrt(1 / 3) + 1, rel_tol=1e-9)
    with pytest.raises(DivergentSeminorm):
        wnorm(TSFunction.indicator(unit, 0, 0.5), SeminormParams(0.6, 2))


def test_oracle_linear_from_below(unit):
    u = TSFunction.linear(unit, 1)
    vals = [seminorm_oracle(u, HALF, unit, n) for n in (32, 64, 128)]
    assert vals[0] < vals[1] < vals[2] < 1.0
    assert math.isclose(oracle_extrapolated(u, HALF, unit, 32), 1.0, rel_tol=1e-8)


def test_oracle_resolution_check(unit):
    with pytest.raises(DomainError):
        seminorm_oracle(TSFunction.linear(unit, 1), HALF, unit, 1)


def test_richardson_exact_model():
    ns = [10, 20, 40]
    vals = [3 + 2 / n + 5 / n**2 for n in ns]
    assert math.isclose(richardson(vals, ns, (1, 2)), 3.0, rel_tol=1e-12)
    with pytest.raises(DomainError):
        richardson(vals, ns, (1,))


def test_power_payload_generic_path(unit):
    # |t|^{0.75}: finite seminorm for alpha = 1/2 since 0.75 > alpha.
    u = TSFunction.power(unit, 0.0, 0.75)
    prm = SeminormParams(0.5, 2)
    r = seminorm(u, prm)
    ref, res = oracle_with_resolution_power(u, prm, unit)
    assert abs(r.value_p - ref) <= max(r.err_est, res) + 1e-3 * ref


def oracle_with_resolution_power(u, prm, T):
    ns = [128, 256, 512]
    vals = [seminorm_oracle(u, prm, T, n) for n in ns]
    r = richardson(vals, ns, (1.0, 1.5))
    return r, abs(r - vals[-1])


def test_transpose_and_blocks_match_oracle():
    rng = np.random.default_rng(5)
    for _ in range(8):
        T = rand_timescale(rng, min_components=2)
        prm = rand_params(rng)
        u = rand_function(T, rng)
        r = seminorm(u, prm)
        rt = seminorm(u, prm, transpose=True)
        assert math.isclose(r.value_p, rt.value_p, rel_tol=1e-12)
        ref, res = oracle_with_resolution(u, prm, T)
        split = r.cc_intra + r.cc_inter + r.dd + r.mixed
        assert abs(split - ref) <= max(r.err_est, res) + ROUNDOFF * abs(ref)


def test_variable_order_kernel(unit):
    u = TSFunction.linear(unit, 1)
    const = SeminormParams(0.5, 2, kernel_exponent=lambda t, s: np.full(np.broadcast(t, s).shape, 0.5))
    assert math.isclose(seminorm(u, const).value, 1.0, rel_tol=1e-7)
    var = SeminormParams(0.5, 2, kernel_exponent=lambda t, s: 0.3 + 0.2 * (np.asarray(t) + np.asarray(s)) / 2)
    r = seminorm(u, var)
    assert 0 < r.value < 1.0
    ref = seminorm_oracle(u, var, unit, 512)
    assert abs(r.value_p - ref) / r.value_p < 5e-3
    with pytest.raises(DomainError):
        seminorm(u, SeminormParams(0.5, 2, kernel_exponent=lambda t, s: 1.2 + 0 * np.asarray(t)))


def test_axioms_small_batch():
    rng = np.random.default_rng(9)
    for _ in range(10):
        T = rand_timescale(rng)
        prm = rand_params(rng)
        u, v = rand_function(T, rng), rand_function(T, rng)
        c = float(rng.uniform(-3, 3))
        ru, rv = seminorm(u, prm), seminorm(v, prm)
        assert seminorm(u + v, prm).value <= ru.value + rv.value + 1e-9
        assert math.isclose(seminorm(c * u, prm).value, abs(c) * ru.value, rel_tol=1e-12)
        assert math.isclose(seminorm(u + c, prm).value, ru.value, rel_tol=1e-12)
        assert ru.value >= 0


def test_lp_norm_unaffected(unit):
    assert math.isclose(lp_norm(TSFunction.linear(unit, 1), 2), math.sqrt(1 / 3), rel_tol=1e-12)
