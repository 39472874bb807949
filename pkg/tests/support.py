"""Shared generators, independent oracles and frozen reference values for tests."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate as spi

from tsgag import SeminormParams, TSFunction, build_timescale, seminorm_oracle

# Frozen reference values. Each is a closed form; tests re-derive it through
# an independent route before comparing against the library.
LINEAR_UNIT_SEMINORM = 1.0
TWO_ATOM_SEMINORM = math.sqrt(0.5)
HYBRID_MIXED_SEMINORM = 1.0
INDICATOR_QUARTER_VALUE_P = 8.0 * (math.sqrt(2.0) - 1.0)
HARDY_LINEAR_LHS = 7.0 / 30.0
LINEAR_CENTERED_L2_SQ = 1.0 / 12.0


def indicator_value_p(alpha: float, p: float, c: float = 0.5) -> float:
    """``[1_{[0,c]}]^p`` on ``(0, 1)`` for ``alpha p < 1``; the same formula holds for any ``p``."""
    k = alpha * p
    return 2.0 / (k * (1.0 - k)) * ((1.0 - c) ** (1.0 - k) - 1.0 + c ** (1.0 - k))


def hybrid_mixed_value_p(alpha: float, p: float) -> float:
    """``u = 0`` on ``(0, 1)``, ``u = 1`` at a unit atom at 2: ``2 int_0^1 (2 - t)^{-(1 + alpha p)} dt``."""
    val, _ = spi.quad(lambda t: (2.0 - t) ** (-(1.0 + alpha * p)), 0.0, 1.0,
                      epsabs=1e-14, epsrel=1e-14)
    return 2.0 * val


def linear_dblquad(alpha: float, p: float) -> float:
    """``[t]^p`` on ``(0, 1)`` by scipy's 2-D quadrature on the lag form."""
    g = 1.0 + alpha * p
    val, _ = spi.quad(lambda h: 2.0 * (1.0 - h) * h ** (p - g), 0.0, 1.0,
                      epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def hardy_linear_lhs(beta: float, p: float = 2.0) -> float:
    val, _ = spi.quad(lambda t: abs(t - 0.5) ** p * t ** (-beta * p), 0.0, 1.0,
                      points=[0.5], epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def two_weight_c1(l1: float, l2: float, p: float) -> float:
    return (l1 * l2**p + l2 * l1**p) / (2.0 * l1 * l2 * (l1 + l2) ** p)


def rand_timescale(rng: np.random.Generator, max_components: int = 4, min_components: int = 1,
                   atom_prob: float = 0.4):
    """Random hybrid time scale with positive gaps."""
    k = int(rng.integers(min_components, max_components + 1))
    pos = 0.0
    ivs, ats = [], []
    for i in range(k):
        pos += rng.uniform(0.05, 0.6)
        if rng.random() >= atom_prob or (i == k - 1 and not ivs and not ats):
            length = rng.uniform(0.2, 1.0)
            ivs.append((pos, pos + length))
            pos += length
        else:
            ats.append((pos, rng.uniform(0.2, 2.0)))
    return build_timescale(ivs, ats)


def rand_function(T, rng, n_knots: int = 6, scale: float = 1.0):
    """Random continuous piecewise-linear function on a uniform grid per interval."""
    return TSFunction.random_samples(T, rng, n_knots=n_knots, scale=scale, uniform_grid=True)


def rand_params(rng, alpha=(0.1, 0.9), p=(1.0, 3.0)) -> SeminormParams:
    return SeminormParams(float(rng.uniform(*alpha)), float(rng.uniform(*p)))


def _extrapolate(values, ns, terms):
    """Value at ``n = inf`` of ``V + sum_k c_k term_k(n)`` through the given samples."""
    ns = np.asarray(ns, dtype=float)
    A = np.column_stack([np.ones_like(ns)] + [t(ns) for t in terms])
    return float(np.linalg.solve(A, np.asarray(values, dtype=float))[0])


def _powers(*exps):
    return [lambda n, e=e: n ** (-e) for e in exps]


def _intra_terms(e: float, k: int):
    """Error terms of the diagonal-excluded midpoint sum on one interval.

    The excluded cells give ``n^{-e}, n^{-e-1}`` and the midpoint rule
    ``n^{-2}``. When ``e`` is close to 2 the pair ``n^{-e}, n^{-2}`` is
    replaced by ``n^{-2}, n^{-2} log n``, its first-order expansion.
    """
    if abs(e - 2.0) < 0.1:
        terms = [lambda n: n ** -2.0, lambda n: n ** -2.0 * np.log(n), lambda n: n ** -3.0]
    elif abs(e - 1.0) < 0.1:
        terms = [lambda n: n ** (-e), lambda n: n ** -2.0, lambda n: n ** -2.0 * np.log(n)]
    else:
        terms = _powers(e, 2.0, e + 1.0)
    return terms[:k]


def oracle_with_resolution(u, prm, T, ns=(80, 160, 320, 640)):
    """Richardson-extrapolated midpoint oracle and a resolution error estimate.

    Each block is extrapolated with its own error model. With knots on cell
    edges, the excluded diagonal cells of a single interval leave errors of
    order ``n^{-e}, n^{-e-1}`` with ``e = p(1-alpha)``, followed by the
    midpoint error ``n^{-2}``. Blocks between separated components have
    smooth integrands with midpoint errors ``n^{-2}, n^{-4}``. Atom pairs are
    exact. The default resolutions are multiples of 5, so the knots of
    :func:`rand_function` fall on cell edges.

    The resolution error of a block is three times the gap between the
    extrapolation used and a lower-order one.
    """
    e = prm.p * (1.0 - prm.alpha)
    runs = [seminorm_oracle(u, prm, T, n, blocks=True) for n in ns]
    value, resolution = runs[0]["dd"], 0.0
    intra = [r["cc_intra"] for r in runs]
    best = _extrapolate(intra, ns, _intra_terms(e, 3))
    lower = _extrapolate(intra[1:], ns[1:], _intra_terms(e, 2))
    value += best
    resolution += 3.0 * abs(best - lower)
    for key in ("cc_inter", "mixed"):
        vals = [r[key] for r in runs]
        r0 = _extrapolate(vals[:3], ns[:3], _powers(2.0, 4.0))
        r1 = _extrapolate(vals[1:], ns[1:], _powers(2.0, 4.0))
        value += r1
        resolution += 3.0 * abs(r1 - r0)
    return value, resolution


def indicator_oracle(alpha: float, p: float, c: float = 0.5, ns=(128, 256, 512, 1024)):
    """Extrapolated oracle for ``1_{[0,c]}`` on ``(0, 1)`` and its resolution error.

    The jump sits on a cell edge, so the leading error is ``n^{-(1-alpha p)}``
    from the cells beside it, followed by the midpoint error ``n^{-2}``.
    """
    T = build_timescale([(0.0, 1.0)])
    u = TSFunction.indicator(T, 0.0, c)
    prm = SeminormParams(alpha, p)
    vals = [seminorm_oracle(u, prm, T, n) for n in ns]
    terms = _powers(1.0 - alpha * p, 2.0)
    best = _extrapolate(vals[1:], ns[1:], terms)
    prev = _extrapolate(vals[:3], ns[:3], terms)
    return best, 3.0 * abs(best - prev)


# Acceptance results collected for the terminal summary: (criterion, title, ok, detail).
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def record(criterion: int, title: str, ok: bool, detail: str = "") -> bool:
    ACCEPTANCE.append((criterion, title, bool(ok), detail))
    return bool(ok)


def acceptance_lines() -> list[str]:
    return [f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d}: {title}" + (f" ({detail})" if detail else "")
            for k, title, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0])]
