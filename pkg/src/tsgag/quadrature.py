"""Panel quadrature engines shared by every integral in the package.

Two building blocks:

* :func:`adaptive_1d` - fixed-order Gauss-Legendre panels with bisection,
  processed level by level so that every level is one vectorized call.
* :func:`graded_1d` - dyadic panels shrinking geometrically toward a singular
  endpoint, followed by a geometric (Aitken) estimate of the unresolved tail.
  The same sequence of panel contributions drives divergence detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

# growth factor and minimum depth of the divergence rule
DIVERGENCE_GROWTH = 1.05
DIVERGENCE_MIN_DEPTH = 12
# ratio of successive dyadic contributions above which the tail is not summable
RATIO_CEILING = 1.0 - 1e-3
# cap on simultaneously active panels, protects memory on pathological input
MAX_ACTIVE_PANELS = 40_000


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    panel_order: int = 8
    max_refinement_depth: int = 40
    diagonal_cutoff_eta: float = 0.0
    reproducible: bool = True

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol")
        if int(self.panel_order) < 2:
            raise DomainError("panel_order")
        if int(self.max_refinement_depth) < 1:
            raise DomainError("max_refinement_depth")
        if self.diagonal_cutoff_eta < 0:
            raise DomainError("diagonal_cutoff_eta")

    def replace(self, **kw) -> "QuadConfig":
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(kw)
        return QuadConfig(**d)


DEFAULT_CONFIG = QuadConfig()


@lru_cache(maxsize=None)
def gauss_legendre(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the m-point rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def gauss_jacobi_left(m: int, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Rule for ``int_0^1 g(x) x**beta dx`` (beta > -1)."""
    from scipy.special import roots_jacobi

    x, w = roots_jacobi(m, 0.0, beta)
    return 0.5 * (x + 1.0), w * 0.5 ** (beta + 1.0)


def summed(values, cfg: QuadConfig) -> float:
    """Sum in the order given (reproducible) or with compensated summation."""
    if cfg.reproducible:
        total = 0.0
        for v in values:
            total += float(v)
        return total
    return math.fsum(float(v) for v in values)


def _gl_panels(f, lo, hi, m):
    x, w = gauss_legendre(m)
    L = hi - lo
    pts = lo[:, None] + L[:, None] * x[None, :]
    vals = f(pts)
    return (vals * w[None, :]).sum(axis=1) * L


def adaptive_1d(f, panels, cfg: QuadConfig = DEFAULT_CONFIG, *, relative_per_panel=False,
                rel_tol=None):
    """Integrate ``f`` over each initial panel with bisection refinement.

    Parameters
    ----------
    f : callable
        Vectorized integrand, called with arrays of any shape.
    panels : sequence of (lo, hi)
    relative_per_panel : bool
        Judge every initial panel against its own magnitude instead of a share
        of the global total. Used when the individual panel values matter
        (dyadic sequences feeding tail extrapolation).

    Returns
    -------
    values, errors : ndarray
        One entry per initial panel.
    converged : bool
    """
    panels = np.asarray(panels, dtype=float).reshape(-1, 2)
    n0 = len(panels)
    values = np.zeros(n0)
    errors = np.zeros(n0)
    if n0 == 0:
        return values, errors, True
    rtol = cfg.rel_tol if rel_tol is None else rel_tol
    m = cfg.panel_order
    lo, hi = panels[:, 0].copy(), panels[:, 1].copy()
    origin = np.arange(n0)
    length0 = hi - lo
    total_len = float(np.sum(np.abs(length0))) or 1.0
    Q = _gl_panels(f, lo, hi, m)
    acc_origin, acc_lo, acc_val, acc_err = [], [], [], []
    accepted_sum = 0.0
    converged = True
    max_level = min(int(cfg.max_refinement_depth), 50)
    own_scale = np.abs(Q)
    for level in range(max_level + 1):
        mid = 0.5 * (lo + hi)
        QL = _gl_panels(f, lo, mid, m)
        QR = _gl_panels(f, mid, hi, m)
        Q2 = QL + QR
        err = np.abs(Q2 - Q)
        if relative_per_panel:
            scale = np.maximum(own_scale[origin], np.abs(Q2))
            tol = np.maximum(rtol * scale, cfg.abs_tol * np.abs(hi - lo) / total_len * 1e-3)
        else:
            est = abs(float(np.sum(Q2)) + accepted_sum)
            tol = max(cfg.abs_tol, rtol * est) * np.abs(hi - lo) / total_len
        ok = err <= tol
        last = level == max_level or (~ok).sum() * 2 > MAX_ACTIVE_PANELS
        if last and not ok.all():
            converged = False
            ok[:] = True
        acc_origin.append(origin[ok])
        acc_lo.append(lo[ok])
        acc_val.append(Q2[ok])
        acc_err.append(err[ok])
        accepted_sum += float(np.sum(Q2[ok]))
        if ok.all():
            break
        keep = ~ok
        lo_k, mid_k, hi_k = lo[keep], mid[keep], hi[keep]
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        Q = np.concatenate([QL[keep], QR[keep]])
        origin = np.concatenate([origin[keep], origin[keep]])
    o = np.concatenate(acc_origin)
    pos = np.concatenate(acc_lo)
    v = np.concatenate(acc_val)
    e = np.concatenate(acc_err)
    order = np.lexsort((pos, o))
    o, v, e = o[order], v[order], e[order]
    if cfg.reproducible:
        np.add.at(values, o, v)
    else:
        for k in range(n0):
            values[k] = math.fsum(v[o == k])
    np.add.at(errors, o, e)
    return values, errors, converged


@dataclass
class TailResult:
    value: float
    err: float
    diverged: bool
    converged: bool
    ratio: float
    partial_sums: np.ndarray


def tail_extrapolate(c: np.ndarray, cfg: QuadConfig = DEFAULT_CONFIG, truncated=False) -> TailResult:
    """Sum a dyadic contribution sequence ``c_0, c_1, ...`` toward a singular point.

    The unresolved remainder is estimated as a geometric tail with ratio
    taken from the last contributions (Aitken's delta-squared). The sum is
    declared divergent when, past :data:`DIVERGENCE_MIN_DEPTH` levels, the
    partial sum grew by more than :data:`DIVERGENCE_GROWTH` over the last three
    levels while the contribution ratio is not safely below one.
    """
    c = np.asarray(c, dtype=float)
    S = np.cumsum(c)
    K = len(c)
    total = float(S[-1]) if K else 0.0
    if K == 0:
        return TailResult(0.0, 0.0, False, True, 0.0, S)
    if truncated:
        return TailResult(total, 0.0, False, True, 0.0, S)
    if K < 5:
        return TailResult(total, abs(float(c[-1])), False, False, math.nan, S)
    scale = max(abs(total), cfg.abs_tol)
    if np.all(np.abs(c[-4:]) <= 1e-300):
        return TailResult(total, 0.0, False, True, 0.0, S)

    def ratio_at(j):
        a, b = c[j], c[j - 3]
        if a == 0.0:
            return 0.0
        if b == 0.0 or a * b < 0:
            return c[j] / c[j - 1] if c[j - 1] != 0 else math.inf
        return (a / b) ** (1.0 / 3.0)

    rho = ratio_at(K - 1)
    growth = S[-1] / S[-4] if S[-4] != 0 else math.inf
    if K >= DIVERGENCE_MIN_DEPTH and abs(growth) > DIVERGENCE_GROWTH and rho >= RATIO_CEILING:
        return TailResult(math.inf, math.inf, True, False, rho, S)
    if not rho < RATIO_CEILING:
        return TailResult(total, math.inf, False, False, rho, S)
    tail = c[-1] * rho / (1.0 - rho)
    rho_prev = ratio_at(K - 2)
    if rho_prev < RATIO_CEILING:
        prev = S[-2] + c[-2] * rho_prev / (1.0 - rho_prev)
    else:
        prev = S[-2]
    value = total + tail
    err = abs(value - prev) + 1e-15 * abs(value)
    converged = err <= max(cfg.abs_tol, cfg.rel_tol * scale)
    return TailResult(float(value), float(err), False, converged, float(rho), S)


def dyadic_panels(length: float, depth: int, eta: float = 0.0) -> np.ndarray:
    """Panels ``[length 2^-(k+1), length 2^-k]`` (offsets from the singular point)."""
    k = np.arange(depth)
    hi = length * 0.5**k
    lo = hi * 0.5
    if eta > 0:
        keep = hi > eta
        lo, hi = lo[keep], hi[keep]
        lo = np.maximum(lo, eta)
    return np.stack([lo, hi], axis=1)


def graded_1d(f, s: float, e: float, cfg: QuadConfig = DEFAULT_CONFIG) -> TailResult:
    """Integrate ``f`` over the segment from singular endpoint ``s`` to ``e``."""
    L = e - s
    if L == 0:
        return TailResult(0.0, 0.0, False, True, 0.0, np.zeros(0))
    direction = 1.0 if L > 0 else -1.0
    eta = cfg.diagonal_cutoff_eta
    offs = dyadic_panels(abs(L), int(cfg.max_refinement_depth), eta)

    def g(h):
        return f(s + direction * h)

    c, _, _ = adaptive_1d(g, offs, cfg, relative_per_panel=True,
                          rel_tol=max(cfg.rel_tol * 1e-3, 1e-14))
    res = tail_extrapolate(c, cfg, truncated=eta > 0)
    return res
