"""Numerical checks of the geometric inequalities and estimates of their constants.

Every check returns an :class:`InequalityReport` with ``holds`` meaning
``lhs <= constant_used * rhs`` up to a quadrature tolerance. Constants are
empirical estimates (best observed ratios, eigenvalue bounds), labeled as such.
"""

from __future__ import annotations

import itertools
import math
import zlib
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.optimize as sopt

from .errors import (
    BetaOutOfRange,
    DomainError,
    FewerThanTwoWeights,
    InvalidSampleCount,
    MethodUnavailable,
    X0NotInT,
)
from .functions import TSFunction
from .gagliardo import PowerKernel, SeminormParams, pair_integral, seminorm
from .integrate import average, integrate_pieces, lp_norm
from .quadrature import DEFAULT_CONFIG, QuadConfig, summed
from .timescale import TimeScale


@dataclass
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    ratio: float
    constant_used: float
    holds: bool
    params: dict = field(default_factory=dict)
    scenario_id: str = ""
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.inf
    if math.isinf(rhs):
        return 0.0
    return lhs / rhs


def _holds(lhs: float, bound: float, cfg: QuadConfig) -> bool:
    if math.isinf(bound):
        return True
    if math.isinf(lhs) or math.isnan(lhs):
        return False
    tol = 10.0 * cfg.rel_tol * max(abs(lhs), abs(bound)) + cfg.abs_tol
    return lhs <= bound + tol


def _prm_dict(prm: SeminormParams, **extra) -> dict:
    d = {"alpha": prm.alpha, "p": prm.p}
    d.update(extra)
    return d


# --------------------------------------------------------------------------
# cross-component sandwich


def cross_bounds_check(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
                       cfg: QuadConfig = DEFAULT_CONFIG, scenario_id: str = ""
                       ) -> InequalityReport:
    """``c0 U <= W <= C0 U`` for every pair of distinct components.

    ``U`` is the unweighted increment integral over both orderings of the pair,
    ``W`` the kernel-weighted one; ``c0 = diam^{-(1+alpha p)}`` and
    ``C0 = delta0^{-(1+alpha p)}``. The report carries the totals and the
    per-pair values; ``holds`` requires every pair to satisfy both sides.
    """
    T = T or u.T
    comps = T.components
    if len(comps) < 2:
        raise DomainError("T", "cross-component bounds need at least two components")
    if prm.variable:
        raise DomainError("kernel_exponent", "cross bounds are stated for a constant order")
    g = prm.gamma
    c0, C0 = T.diam ** (-g), T.delta0 ** (-g)
    flat = PowerKernel(prm.p, 0.0)
    pairs, ok = [], True
    worst_lower, worst_upper = math.inf, math.inf
    for a, b in itertools.combinations(comps, 2):
        U, eu = pair_integral(u, a, b, flat, cfg)
        W, ew = pair_integral(u, a, b, prm, cfg)
        lo_ok = _holds(c0 * U, W, cfg)
        hi_ok = _holds(W, C0 * U, cfg)
        ok = ok and lo_ok and hi_ok
        scale = max(W, 1e-300)
        worst_lower = min(worst_lower, (W - c0 * U) / scale)
        worst_upper = min(worst_upper, (C0 * U - W) / scale)
        pairs.append({"i": a.index, "j": b.index, "unweighted": U, "weighted": W,
                      "err": eu + ew, "lower_ok": lo_ok, "upper_ok": hi_ok})
    U_tot = summed([p["unweighted"] for p in pairs], cfg)
    W_tot = summed([p["weighted"] for p in pairs], cfg)
    return InequalityReport(
        "cross_bounds", W_tot, U_tot, _ratio(W_tot, U_tot), C0, ok,
        _prm_dict(prm, c0=c0, C0=C0), scenario_id,
        extra={"pairs": pairs, "worst_lower_margin": worst_lower,
               "worst_upper_margin": worst_upper},
    )


# --------------------------------------------------------------------------
# Poincare


def poincare_check(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
                   C_P: float = 1.0, cfg: QuadConfig = DEFAULT_CONFIG,
                   scenario_id: str = "") -> InequalityReport:
    """``||u - u_T||_p <= C_P [u]``; an infinite seminorm counts as holding."""
    T = T or u.T
    if not C_P > 0:
        raise DomainError("C_P", "C_P must be positive")
    lhs = lp_norm(u - average(u, T, "global", cfg), prm.p, T, cfg)
    res = seminorm(u, prm, T, cfg)
    notes = []
    if res.diverged:
        notes.append("seminorm infinite")
        return InequalityReport("poincare", lhs, math.inf, 0.0, C_P, True,
                                _prm_dict(prm), scenario_id, notes,
                                {"err_est": res.err_est})
    rhs = res.value
    return InequalityReport("poincare", lhs, rhs, _ratio(lhs, rhs), C_P,
                            _holds(lhs, C_P * rhs, cfg), _prm_dict(prm), scenario_id, notes,
                            {"err_est": res.err_est})


def _discrete_ratio(x, lam, p):
    lam_tot = lam.sum()
    mean = float(lam @ x) / lam_tot
    lhs = float(lam @ np.abs(x - mean) ** p)
    D = np.abs(x[:, None] - x[None, :]) ** p
    rhs = float(lam @ D @ lam)
    return lhs / rhs if rhs > 0 else 0.0


def discrete_poincare_closed_form(l1: float, l2: float, p: float) -> float:
    """Two-weight constant ``(l1 l2^p + l2 l1^p) / (2 l1 l2 (l1 + l2)^p)``."""
    return (l1 * l2**p + l2 * l1**p) / (2.0 * l1 * l2 * (l1 + l2) ** p)


def discrete_poincare_bounds(weights, p: float, seed: int = 0, n_starts: int = 24):
    """Best constant of the discrete weighted inequality

        sum_C lam_C |x_C - xbar|^p <= C1 sum_{C != C'} lam_C lam_C' |x_C - x_C'|^p

    Returns ``(lower, upper, argmax)``. For ``p = 2`` both bounds come from a
    generalized eigensolve and coincide. Otherwise ``lower`` is the best ratio
    attained by multi-start maximization and ``upper`` a heuristic margin
    above it, capped by the convexity bound ``1 / sum(lam)``.
    """
    lam = np.asarray(weights, dtype=float)
    if lam.ndim != 1 or len(lam) < 2:
        raise FewerThanTwoWeights("need at least two component weights")
    if not np.all(lam > 0):
        raise DomainError("weights", "weights must be positive")
    if not p >= 1:
        raise DomainError("p", f"p must be >= 1, got {p}")
    n = len(lam)
    L = lam.sum()
    if p == 2:
        A = np.diag(lam) - np.outer(lam, lam) / L
        B = 2.0 * (L * np.diag(lam) - np.outer(lam, lam))
        Q = sla.null_space(np.ones((1, n)))
        vals, vecs = sla.eigh(Q.T @ A @ Q, Q.T @ B @ Q)
        c1 = float(vals[-1])
        return c1, c1, Q @ vecs[:, -1]
    rng = np.random.default_rng(seed)
    starts = []
    for k in range(1, n // 2 + 1):
        for S in itertools.combinations(range(n), k):
            x = np.zeros(n)
            x[list(S)] = 1.0
            starts.append(x)
            if len(starts) >= 64:
                break
    starts += [rng.standard_normal(n) for _ in range(n_starts)]
    best, best_x = -math.inf, None
    for x0 in starts:
        r0 = _discrete_ratio(x0, lam, p)
        if r0 > best:
            best, best_x = r0, x0
        res = sopt.minimize(lambda x: -_discrete_ratio(x, lam, p), x0, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000 * n})
        if -res.fun > best:
            best, best_x = float(-res.fun), res.x
    upper = min(best * (1.0 + 1e-6), 1.0 / L)
    return best, max(upper, best), best_x


def discrete_poincare_constant(weights, p: float, seed: int = 0) -> float:
    """``C1`` of the discrete weighted inequality (upper member of the bounds)."""
    return discrete_poincare_bounds(weights, p, seed)[1]


def _sample_seed(scenario_id: str, index: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([zlib.crc32(scenario_id.encode()), int(seed), int(index)])


def poincare_constant(prm: SeminormParams, T: TimeScale, method: str = "eigensolve",
                      cfg: QuadConfig = DEFAULT_CONFIG, mesh=32, n_samples: int = 50,
                      seed: int = 0, scenario_id: str = "", details: bool = False):
    """Estimate of the best Poincare constant.

    ``eigensolve`` (p = 2 only) returns ``lambda_min^{-1/2}`` of the Galerkin
    eigenproblem. ``sampling`` returns the largest ratio over random
    piecewise-linear functions, a lower bound on the best constant. With
    ``details`` a dict carrying the method label is returned instead.
    """
    if method == "eigensolve":
        if prm.p != 2:
            raise MethodUnavailable("eigensolve needs p = 2")
        if prm.variable:
            raise MethodUnavailable("eigensolve needs a constant order")
        from .galerkin import assemble, build_basis, poincare_eigenvalue

        basis = build_basis(T, mesh)
        sysm = assemble(T, basis, prm.alpha, cfg)
        lam, cp = poincare_eigenvalue(sysm)
        info = {"method": "eigensolve", "value": cp, "lambda_min": lam, "dofs": basis.size}
    elif method == "sampling":
        if int(n_samples) <= 0:
            raise InvalidSampleCount("sampling needs at least one random function")
        best = 0.0
        for i in range(int(n_samples)):
            u = TSFunction.random_samples(T, _sample_seed(scenario_id, i, seed))
            rep = poincare_check(u, prm, T, 1.0, cfg)
            if math.isfinite(rep.ratio):
                best = max(best, rep.ratio)
        info = {"method": "sampling", "value": best, "n_samples": int(n_samples)}
    else:
        raise MethodUnavailable(f"unknown method {method!r}")
    return info if details else info["value"]


def coercivity_constant(C_P: float, T: TimeScale, p: float) -> float:
    """``max(C_P, mu(T)^{1/p})``, enough for the coercivity bound."""
    return max(C_P, T.total_measure ** (1.0 / p))


def coercivity_check(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
                     C: float = 1.0, cfg: QuadConfig = DEFAULT_CONFIG,
                     scenario_id: str = "") -> InequalityReport:
    """``||u||_p <= C ([u] + |u_T|)``."""
    T = T or u.T
    if not C > 0:
        raise DomainError("C", "C must be positive")
    lhs = lp_norm(u, prm.p, T, cfg)
    mean = average(u, T, "global", cfg)
    res = seminorm(u, prm, T, cfg)
    if res.diverged:
        return InequalityReport("coercivity", lhs, math.inf, 0.0, C, True, _prm_dict(prm),
                                scenario_id, ["seminorm infinite"])
    rhs = res.value + abs(mean)
    return InequalityReport("coercivity", lhs, rhs, _ratio(lhs, rhs), C,
                            _holds(lhs, C * rhs, cfg), _prm_dict(prm), scenario_id,
                            extra={"seminorm": res.value, "mean": mean})


# --------------------------------------------------------------------------
# Hardy and CKN


def _check_beta_x0(prm: SeminormParams, beta: float, x0: float, T: TimeScale):
    if not (0.0 <= beta < prm.alpha):
        raise BetaOutOfRange(f"beta must satisfy 0 <= beta < alpha = {prm.alpha}, got {beta}")
    if x0 not in T:
        raise X0NotInT(f"x0 = {x0} is not a point of T")


def weighted_integral(v: TSFunction, power: float, weight_exp: float, x0: float,
                      T: TimeScale, cfg: QuadConfig = DEFAULT_CONFIG):
    """``int_T |v|^power |t - x0|^{-weight_exp} dmu`` with an atom at ``x0`` left out.

    Returns ``(value, atom_excluded)``; ``value`` is ``inf`` when the weight is
    not integrable against ``v`` near ``x0``.
    """
    parts = []
    excluded = False
    for c in T.components:
        if c.is_atom:
            if c.point == x0:
                excluded = True
                continue
            w = abs(c.point - x0) ** (-weight_exp) if weight_exp else 1.0
            parts.append(c.measure * abs(v.atom_value(c)) ** power * w)
            continue
        pay = v.on(c)

        def f(t, pay=pay):
            val = np.abs(pay(t)) ** power
            if weight_exp:
                val = val * np.abs(t - x0) ** (-weight_exp)
            return val

        bps = list(pay.breakpoints)
        pl = pay.piecewise_linear()
        if pl is not None:
            bps += list(pl.zero_crossings())
        sing = list(pay.singular)
        if weight_exp and c.contains(x0):
            sing.append(x0)
        val, _, div = integrate_pieces(f, c.left, c.right, cfg, bps, sing)
        if div:
            return math.inf, excluded
        parts.append(val)
    return summed(parts, cfg), excluded


def hardy_check(u: TSFunction, prm: SeminormParams, beta: float, x0: float,
                T: TimeScale | None = None, cfg: QuadConfig = DEFAULT_CONFIG,
                C: float | None = None, scenario_id: str = "") -> InequalityReport:
    """``int |u - u_T|^p |t - x0|^{-beta p} <= C [u]^p`` for ``0 <= beta < alpha``.

    Without ``C`` the empirical ratio is reported as ``constant_used``.
    """
    T = T or u.T
    _check_beta_x0(prm, beta, x0, T)
    v = u - average(u, T, "global", cfg)
    lhs, excluded = weighted_integral(v, prm.p, beta * prm.p, x0, T, cfg)
    res = seminorm(u, prm, T, cfg)
    notes = []
    if excluded:
        notes.append("x0 is an atom: its own term excluded")
    if math.isinf(lhs):
        notes.append("weight not integrable at x0")
    params = _prm_dict(prm, beta=beta, x0=x0)
    rhs = math.inf if res.diverged else res.value_p
    if res.diverged:
        notes.append("seminorm infinite")
    ratio = _ratio(lhs, rhs)
    if C is None:
        const = ratio
        holds = math.isfinite(ratio)
    else:
        const = float(C)
        holds = _holds(lhs, const * rhs, cfg)
    return InequalityReport("hardy", lhs, rhs, ratio, const, holds, params, scenario_id,
                            notes, {"err_est": res.err_est})


def ckn_exponents(p: float, q: float, theta: float, beta: float) -> tuple[float, float]:
    """``r`` with ``1/r = theta/p + (1-theta)/q`` and ``b = theta beta``."""
    if theta == 1.0:
        r = p
    elif theta == 0.0:
        r = q
    else:
        r = 1.0 / (theta / p + (1.0 - theta) / q)
    return r, theta * beta


def ckn_check(u: TSFunction, prm: SeminormParams, q: float, theta: float, beta: float,
              x0: float, T: TimeScale | None = None, cfg: QuadConfig = DEFAULT_CONFIG,
              C_H: float | None = None, C_E: float | None = None,
              scenario_id: str = "") -> InequalityReport:
    """Interpolation bound ``|| |t-x0|^{-b} (u - u_T) ||_r <= A^theta E^{1-theta}``.

    ``A`` is the Hardy-side norm ``(int |u-u_T|^p |t-x0|^{-beta p})^{1/p}`` and
    ``E = ||u - u_T||_q``; this form holds with constant 1. The report also
    carries ``rhs2 = C_H^theta C_E^{1-theta} [u]``; missing constants default
    to the empirical ratios ``A/[u]`` and ``E/[u]``.
    """
    T = T or u.T
    if not q >= 1:
        raise DomainError("q", f"q must be >= 1, got {q}")
    if not 0.0 <= theta <= 1.0:
        raise DomainError("theta", f"theta must lie in [0, 1], got {theta}")
    _check_beta_x0(prm, beta, x0, T)
    p = prm.p
    r, b = ckn_exponents(p, q, theta, beta)
    v = u - average(u, T, "global", cfg)
    L, excluded = weighted_integral(v, r, b * r, x0, T, cfg)
    lhs = L ** (1.0 / r)
    H, _ = weighted_integral(v, p, beta * p, x0, T, cfg)
    A = H ** (1.0 / p)
    Eq, _ = weighted_integral(v, q, 0.0, x0, T, cfg)
    E = Eq ** (1.0 / q)
    if theta == 1.0:
        rhs1 = A
    elif theta == 0.0:
        rhs1 = E
    else:
        rhs1 = A**theta * E ** (1.0 - theta)
    res = seminorm(u, prm, T, cfg)
    semi = math.inf if res.diverged else res.value
    notes = []
    if excluded:
        notes.append("x0 is an atom: its own term excluded")
    if q != p:
        notes.append("C_E for q != p is empirical and unproven")
    ch = C_H if C_H is not None else _ratio(A, semi)
    ce = C_E if C_E is not None else _ratio(E, semi)
    C = ch**theta * ce ** (1.0 - theta)
    rhs2 = C * semi if math.isfinite(semi) else math.inf
    holds = lhs <= rhs1 * (1.0 + 10.0 * cfg.rel_tol) + cfg.abs_tol if math.isfinite(rhs1) \
        else True
    params = _prm_dict(prm, q=q, theta=theta, beta=beta, x0=x0, r=r, b=b)
    return InequalityReport("ckn", lhs, rhs1, _ratio(lhs, rhs1), 1.0, bool(holds), params,
                            scenario_id, notes,
                            {"rhs2": rhs2, "C": C, "C_H": ch, "C_E": ce, "hardy_norm": A,
                             "lq_norm": E, "seminorm": semi})
