"""Delta-measure integrals, L^p norms and averages on a hybrid time scale.

Interval components carry Lebesgue measure and are integrated by panel
quadrature; atoms contribute ``w_j * u(d_j)`` exactly.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, NonconvergedQuadrature
from .functions import Payload, TSFunction, iter_pieces
from .quadrature import DEFAULT_CONFIG, QuadConfig, adaptive_1d, graded_1d, summed
from .timescale import Component, TimeScale


def integrate_pieces(pay, a: float, b: float, cfg: QuadConfig = DEFAULT_CONFIG,
                     breakpoints=(), singular=()):
    """Integrate a callable over ``[a, b]``; returns ``(value, err_est, diverged)``.

    Pieces ending at a singular point are integrated on dyadic panels graded
    toward that point; all other pieces share one adaptive pass.
    """
    sing = set(float(x) for x in singular if a <= x <= b)
    pieces = iter_pieces(a, b, list(breakpoints) + list(sing))
    regular, graded = [], []
    for lo, hi in pieces:
        sl, sh = lo in sing, hi in sing
        if sl and sh:
            mid = 0.5 * (lo + hi)
            graded += [(lo, mid), (hi, mid)]
        elif sl:
            graded.append((lo, hi))
        elif sh:
            graded.append((hi, lo))
        else:
            regular.append((lo, hi))
    parts, errs = [], []
    if regular:
        vals, e, ok = adaptive_1d(pay, regular, cfg)
        if not ok:
            raise NonconvergedQuadrature(f"adaptive quadrature on [{a}, {b}] did not converge")
        parts.extend(vals)
        errs.append(float(np.sum(e)))
    for s, e_ in graded:
        res = graded_1d(pay, s, e_, cfg)
        if res.diverged:
            return math.inf, math.inf, True
        if not math.isfinite(res.err):
            raise NonconvergedQuadrature(f"graded quadrature toward {s} did not converge")
        parts.append(res.value)
        errs.append(res.err)
    return summed(parts, cfg), math.fsum(errs), False


def integrate_payload(pay: Payload, a: float, b: float, cfg: QuadConfig = DEFAULT_CONFIG):
    """Integrate one payload over ``[a, b]``; returns ``(value, err_est)``."""
    v, e, div = integrate_pieces(pay, a, b, cfg, pay.breakpoints, pay.singular)
    if div:
        raise NonconvergedQuadrature(f"integral over [{a}, {b}] diverges at a singular point")
    return v, e


def delta_integral(u: TSFunction, T: TimeScale | None = None, cfg: QuadConfig = DEFAULT_CONFIG,
                   components=None):
    """``int_T u dmu_Delta`` as ``(value, err_est)``.

    Parameters
    ----------
    components : iterable of Component, optional
        Restrict the integral to these components.
    """
    T = T or u.T
    comps = T.components if components is None else components
    parts, errs = [], []
    for c in comps:
        if c.is_interval:
            v, e = integrate_payload(u.on(c), c.left, c.right, cfg)
            parts.append(v)
            errs.append(e)
        else:
            parts.append(c.measure * u.atom_value(c))
    return summed(parts, cfg), math.fsum(errs)


def lp_norm(u: TSFunction, p: float, T: TimeScale | None = None,
            cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    if not p >= 1:
        raise DomainError("p", f"p must be >= 1, got {p}")
    v, _ = delta_integral(u.abs_pow(p), T, cfg)
    return max(v, 0.0) ** (1.0 / p)


def average(u: TSFunction, T: TimeScale | None = None, scope="global",
            cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """Mean of ``u`` over T (``scope="global"``) or over one component.

    One refinement step ``m + mean(u - m)`` removes the relative rounding of
    the quadrature weights, so constants are reproduced exactly.
    """
    T = T or u.T
    if isinstance(scope, str):
        if scope != "global":
            raise DomainError("scope", f"unknown scope {scope!r}")

        def mean(f):
            return delta_integral(f, T, cfg)[0] / T.total_measure
    else:
        c = T.components[scope] if isinstance(scope, int) else scope
        if not isinstance(c, Component) or T.components[c.index] != c:
            raise DomainError("scope", "component does not belong to T")
        if c.is_atom:
            return u.atom_value(c)

        def mean(f):
            return integrate_payload(f.on(c), c.left, c.right, cfg)[0] / c.measure
    m = mean(u)
    return m + mean(u - m)


def component_averages(u: TSFunction, cfg: QuadConfig = DEFAULT_CONFIG) -> np.ndarray:
    return np.array([average(u, u.T, c, cfg) for c in u.T.components])
