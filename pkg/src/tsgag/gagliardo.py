"""Gagliardo seminorm on a hybrid time scale.

``[u]^p = iint_{t != s} |u(t) - u(s)|^p |t - s|^{-(1+alpha p)} dmu(t) dmu(s)``

split into interval x interval (``cc``), atom x atom (``dd``) and
interval x atom (``mixed``) blocks.

Every interval-interval block is reduced to a one-dimensional integral in the
lag ``h = t - s``::

    2 * int G(h) h^{-(1+alpha p)} dh,  G(h) = int |u(s+h) - u(s)|^p ds

For piecewise-linear data ``G`` is evaluated in closed form, so the only
quadrature left is over ``h``. On a single interval the lag integral is graded
dyadically toward ``h = 0``; the dyadic contributions feed a geometric tail
estimate which also decides whether the seminorm is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergentSeminorm, DomainError, NonconvergedQuadrature, SingularEvaluation
from .functions import PiecewiseLinear, TSFunction
from .integrate import integrate_pieces, lp_norm
from .quadrature import (
    DEFAULT_CONFIG,
    QuadConfig,
    adaptive_1d,
    gauss_legendre,
    graded_1d,
    summed,
)
from .timescale import Component, TimeScale


@dataclass(frozen=True)
class SeminormParams:
    """Order ``alpha`` in (0, 1), exponent ``p >= 1``.

    ``kernel_exponent`` optionally replaces the constant order by a function
    ``alpha(t, s)`` with values in (0, 1); ``alpha`` is then only nominal.
    """

    alpha: float
    p: float
    kernel_exponent: Callable | None = None

    def __post_init__(self):
        if not (0.0 < float(self.alpha) < 1.0):
            raise DomainError("alpha", f"alpha must lie in (0, 1), got {self.alpha}")
        if not float(self.p) >= 1.0:
            raise DomainError("p", f"p must be >= 1, got {self.p}")

    @property
    def gamma(self) -> float:
        """Kernel power ``1 + alpha p`` for the constant-order case."""
        return 1.0 + self.alpha * self.p

    @property
    def variable(self) -> bool:
        return self.kernel_exponent is not None

    def sym_kernel(self, t, s):
        """``k(t, s) + k(s, t)`` with ``k(t, s) = |t - s|^{-(1 + alpha(t, s) p)}``."""
        r = np.abs(np.asarray(t) - np.asarray(s))
        if self.kernel_exponent is None:
            return 2.0 * r ** (-self.gamma)
        a1 = np.asarray(self.kernel_exponent(t, s), dtype=float)
        a2 = np.asarray(self.kernel_exponent(s, t), dtype=float)
        return r ** (-(1.0 + a1 * self.p)) + r ** (-(1.0 + a2 * self.p))

    def kernel(self, t, s):
        r = np.abs(np.asarray(t) - np.asarray(s))
        if self.kernel_exponent is None:
            return r ** (-self.gamma)
        a = np.asarray(self.kernel_exponent(t, s), dtype=float)
        return r ** (-(1.0 + a * self.p))


@dataclass
class SeminormResult:
    """Seminorm value and its block decomposition (contributions to ``value**p``)."""

    value: float
    cc_intra: float
    cc_inter: float
    dd: float
    mixed: float
    err_est: float
    diverged: bool
    p: float = 2.0
    blocks: list = field(default_factory=list, repr=False)

    @property
    def cc(self) -> float:
        return self.cc_intra + self.cc_inter

    @property
    def value_p(self) -> float:
        return self.value**self.p if math.isfinite(self.value) else math.inf


# --------------------------------------------------------------------------
# closed-form pieces


def _absmean(d0, d1, p: float):
    """``int_0^1 |d0 + (d1 - d0) x|^p dx`` elementwise."""
    d0 = np.asarray(d0, dtype=float)
    d1 = np.asarray(d1, dtype=float)
    diff = d1 - d0
    big = np.maximum(np.abs(d0), np.abs(d1))
    close = np.abs(diff) <= 1e-2 * big
    with np.errstate(divide="ignore", invalid="ignore"):
        g1 = np.sign(d1) * np.abs(d1) ** (p + 1.0)
        g0 = np.sign(d0) * np.abs(d0) ** (p + 1.0)
        far = (g1 - g0) / ((p + 1.0) * diff)
    x, w = gauss_legendre(8)
    near = np.zeros_like(d0)
    if np.any(close):
        dc0, dcd = d0[close], diff[close]
        near[close] = (np.abs(dc0[..., None] + dcd[..., None] * x) ** p) @ w
    out = np.where(close, near, far)
    return np.where(big > 0, out, 0.0)


def _clean(pl: PiecewiseLinear) -> PiecewiseLinear:
    """Drop zero-length pieces."""
    keep = pl.lengths > 0
    if keep.all():
        return pl
    k = np.flatnonzero(keep)
    knots = np.append(pl.knots[k], pl.knots[k[-1] + 1])
    return PiecewiseLinear(knots, pl.left[k], pl.right[k])


def _G_small(pl: PiecewiseLinear, h, p: float):
    """Same-interval ``G(h)`` for ``h`` below the shortest piece length.

    A lag pair either stays inside one piece, where the increment is
    ``slope * h``, or straddles exactly one knot, where it varies linearly
    from ``J + slope_right h`` to ``J + slope_left h`` with ``J`` the jump.
    """
    h = np.asarray(h, dtype=float)
    hh = h.reshape(-1, 1)
    ell, sl = pl.lengths, pl.slopes
    out = np.sum((ell - hh) * np.abs(sl * hh) ** p, axis=1)
    if pl.n_pieces > 1:
        J = pl.left[1:] - pl.right[:-1]
        out = out + h.ravel() * np.sum(
            _absmean(J + sl[1:] * hh, J + sl[:-1] * hh, p), axis=1
        )
    return out.reshape(h.shape)


def _candidates(bp_p, bp_q, lo_p, hi_p, lo_q, hi_q, h, transpose):
    """Split points of the integration variable for lag ``h`` (one row per lag).

    The variable is ``s`` (domain of P) or, transposed, ``t = s + h``.
    """
    hh = h.reshape(-1, 1)
    lo = np.maximum(lo_p, lo_q - hh)
    hi = np.maximum(np.minimum(hi_p, hi_q - hh), lo)
    z = np.zeros_like(hh)
    if transpose:
        lo, hi = lo + hh, hi + hh
        cand = np.concatenate([bp_p[None, :] + hh, bp_q[None, :] + z], axis=1)
    else:
        cand = np.concatenate([bp_p[None, :] + z, bp_q[None, :] - hh], axis=1)
    cand = np.clip(cand, lo, hi)
    cand.sort(axis=1)
    return cand


def _G_pair_pl(P: PiecewiseLinear, Q: PiecewiseLinear, h, p: float, transpose=False):
    """``G(h) = int_{s in P, s+h in Q} |Q(s+h) - P(s)|^p ds`` in closed form."""
    h = np.asarray(h, dtype=float)
    hh = h.reshape(-1, 1)
    cand = _candidates(P.knots, Q.knots, P.knots[0], P.knots[-1], Q.knots[0], Q.knots[-1],
                       h, transpose)
    cl, ch = cand[:, :-1], cand[:, 1:]
    mid = 0.5 * (cl + ch)
    if transpose:
        kq, kp = Q.piece_index(mid), P.piece_index(mid - hh)
        d0 = P.eval_in_piece(kp, cl - hh) - Q.eval_in_piece(kq, cl)
        d1 = P.eval_in_piece(kp, ch - hh) - Q.eval_in_piece(kq, ch)
    else:
        kp, kq = P.piece_index(mid), Q.piece_index(mid + hh)
        d0 = Q.eval_in_piece(kq, cl + hh) - P.eval_in_piece(kp, cl)
        d1 = Q.eval_in_piece(kq, ch + hh) - P.eval_in_piece(kp, ch)
    out = np.sum((ch - cl) * _absmean(d0, d1, p), axis=1)
    return out.reshape(h.shape)


def _split_points(pay, lo, hi):
    pts = [lo, hi] + [x for x in tuple(pay.breakpoints) + tuple(pay.singular) if lo < x < hi]
    return np.array(sorted(set(pts)))


def _G_pair_generic(P, cp: Component, Q, cq: Component, h, prm: SeminormParams, m: int,
                    transpose=False):
    """``G(h)`` by fixed Gauss-Legendre on each piece between split points.

    For a variable order the symmetrized kernel is folded into ``G``.
    """
    h = np.asarray(h, dtype=float)
    hh = h.reshape(-1, 1, 1)
    bp, bq = _split_points(P, cp.left, cp.right), _split_points(Q, cq.left, cq.right)
    cand = _candidates(bp, bq, cp.left, cp.right, cq.left, cq.right, h, transpose)
    cl, ch = cand[:, :-1], cand[:, 1:]
    length = ch - cl
    x, w = gauss_legendre(m)
    nodes = cl[..., None] + length[..., None] * x
    # park nodes of empty pieces on a node of the longest piece
    longest = np.argmax(length, axis=1)
    rows = np.arange(len(cand))
    safe = cl[rows, longest] + length[rows, longest] * x[0]
    nodes = np.where(length[..., None] > 0, nodes, safe[:, None, None])
    if transpose:
        t, s = nodes, nodes - hh
    else:
        s, t = nodes, nodes + hh
    vals = np.abs(Q(t) - P(s)) ** prm.p
    if prm.variable:
        vals = vals * prm.sym_kernel(t, s)
    out = np.sum(length * (vals @ w), axis=1)
    return out.reshape(h.shape)


# --------------------------------------------------------------------------
# blocks


@dataclass
class _Block:
    kind: str
    i: int
    j: int
    value: float
    err: float
    diverged: bool = False


def _geometric_points(start: float, stop: float, ratio=2.0):
    """``start * ratio^k`` strictly inside ``(start, stop)``."""
    out = []
    x = start * ratio
    while x < stop and len(out) < 200:
        out.append(x)
        x *= ratio
    return out


def _panels(edges):
    e = np.unique(np.asarray(edges, dtype=float))
    return np.stack([e[:-1], e[1:]], axis=1)


def _lag_weight(prm: SeminormParams, h):
    if prm.variable:
        return 1.0
    return 2.0 * h ** (-prm.gamma)


def _as_pl(pay):
    pl = pay.piecewise_linear()
    return None if pl is None else _clean(pl)


def _intra_block(u: TSFunction, c: Component, prm: SeminormParams, cfg: QuadConfig,
                 transpose: bool) -> _Block:
    pay = u.on(c)
    L = c.right - c.left
    pl = _as_pl(pay)
    parts, errs = [], []
    if pl is not None and not prm.variable:
        delta = float(np.min(pl.lengths))
        g = prm.gamma
        tail = graded_1d(lambda h: _G_small(pl, h, prm.p) * 2.0 * h ** (-g), 0.0, delta, cfg)
        if tail.diverged:
            return _Block("cc_intra", c.index, c.index, math.inf, math.inf, True)
        if not math.isfinite(tail.err):
            raise NonconvergedQuadrature(f"diagonal tail on {c!r} did not settle")
        parts.append(tail.value)
        errs.append(tail.err)
        if delta < L:
            diffs = np.subtract.outer(pl.knots, pl.knots).ravel()
            inner = diffs[(diffs > delta) & (diffs < L)]
            edges = np.concatenate([[delta, L], inner, _geometric_points(delta, L)])
            f = lambda h: _G_pair_pl(pl, pl, h, prm.p, transpose) * 2.0 * h ** (-g)
            vals, e, ok = adaptive_1d(f, _panels(edges), cfg)
            if not ok:
                raise NonconvergedQuadrature(f"lag quadrature on {c!r} did not converge")
            parts.extend(vals)
            errs.append(float(np.sum(e)))
    else:
        m = 2 * cfg.panel_order

        def f(h):
            return _G_pair_generic(pay, c, pay, c, h, prm, m, transpose) * _lag_weight(prm, h)

        tail = graded_1d(f, 0.0, L, cfg)
        if tail.diverged:
            return _Block("cc_intra", c.index, c.index, math.inf, math.inf, True)
        if not math.isfinite(tail.err):
            raise NonconvergedQuadrature(f"diagonal tail on {c!r} did not settle")
        parts.append(tail.value)
        errs.append(tail.err)
    return _Block("cc_intra", c.index, c.index, summed(parts, cfg), math.fsum(errs))


def _inter_block(u: TSFunction, ci: Component, cj: Component, prm: SeminormParams,
                 cfg: QuadConfig, transpose: bool) -> _Block:
    """Both orderings of ``ci x cj`` with ``ci`` left of ``cj``."""
    P, Q = u.on(ci), u.on(cj)
    hlo, hhi = cj.left - ci.right, cj.right - ci.left
    pp, pq = _as_pl(P), _as_pl(Q)
    if pp is not None and pq is not None and not prm.variable:
        kp, kq = pp.knots, pq.knots
        g = prm.gamma

        def f(h):
            return _G_pair_pl(pp, pq, h, prm.p, transpose) * 2.0 * h ** (-g)
    else:
        kp = _split_points(P, ci.left, ci.right)
        kq = _split_points(Q, cj.left, cj.right)
        m = 2 * cfg.panel_order

        def f(h):
            return _G_pair_generic(P, ci, Q, cj, h, prm, m, transpose) * _lag_weight(prm, h)

    diffs = np.subtract.outer(kq, kp).ravel()
    inner = diffs[(diffs > hlo) & (diffs < hhi)]
    edges = np.concatenate([[hlo, hhi], inner, _geometric_points(hlo, hhi)])
    vals, e, ok = adaptive_1d(f, _panels(edges), cfg)
    if not ok:
        raise NonconvergedQuadrature(f"lag quadrature for {ci!r} x {cj!r} did not converge")
    return _Block("cc_inter", ci.index, cj.index, summed(vals, cfg), float(np.sum(e)))


def _mixed_block(u: TSFunction, ci: Component, ca: Component, prm: SeminormParams,
                 cfg: QuadConfig, transpose: bool) -> _Block:
    """``2 w int_I |u(t) - u(d)|^p |t - d|^{-(1+alpha p)} dt`` (symmetrized)."""
    pay = u.on(ci)
    d, w = ca.point, ca.measure
    ud = u.atom_value(ca)

    def f(t):
        diff = (ud - pay(t)) if transpose else (pay(t) - ud)
        k = prm.sym_kernel(d, t) if transpose else prm.sym_kernel(t, d)
        return w * np.abs(diff) ** prm.p * k

    bps = list(pay.breakpoints)
    pl = _as_pl(pay)
    if pl is not None:
        bps += list(pl.affine(1.0, -ud).zero_crossings())
    gap = ci.distance_to(ca)
    far = (ci.right - d) if d < ci.left else (d - ci.left)
    if d < ci.left:
        bps += [d + r for r in _geometric_points(gap, far)]
    else:
        bps += [d - r for r in _geometric_points(gap, far)]
    v, e, div = integrate_pieces(f, ci.left, ci.right, cfg, bps, pay.singular)
    return _Block("mixed", ci.index, ca.index, v, e, div)


def _dd_sum(u: TSFunction, T: TimeScale, prm: SeminormParams, cfg: QuadConfig,
            transpose: bool) -> float:
    atoms = T.atom_components
    if len(atoms) < 2:
        return 0.0
    x = np.array([a.point for a in atoms])
    w = np.array([a.measure for a in atoms])
    v = np.array([u.atom_value(a) for a in atoms])
    terms = []
    for i in range(len(atoms)):
        for j in range(len(atoms)):
            if i == j:
                continue
            a, b = (j, i) if transpose else (i, j)
            k = prm.kernel(x[a], x[b])
            terms.append(float(abs(v[a] - v[b]) ** prm.p * k * w[a] * w[b]))
    return summed(terms, cfg)


def _check_kernel_exponent(prm: SeminormParams, T: TimeScale):
    if not prm.variable:
        return
    rng = np.random.default_rng(0)
    t, _ = T.sample_points(64, rng)
    s, _ = T.sample_points(64, rng)
    vals = np.asarray(prm.kernel_exponent(t[:, None], s[None, :]), dtype=float)
    if not (np.all(vals > 0) and np.all(vals < 1)):
        raise DomainError("kernel_exponent", "kernel exponent values must lie in (0, 1)")


def seminorm(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
             cfg: QuadConfig = DEFAULT_CONFIG, transpose: bool = False) -> SeminormResult:
    """Gagliardo seminorm of ``u`` with block decomposition.

    ``transpose`` evaluates every block with the roles of ``t`` and ``s``
    exchanged; the result must agree with the default ordering.
    """
    T = T or u.T
    _check_kernel_exponent(prm, T)
    ivs, ats = T.interval_components, T.atom_components
    blocks = [_intra_block(u, c, prm, cfg, transpose) for c in ivs]
    for a in range(len(ivs)):
        for b in range(a + 1, len(ivs)):
            blocks.append(_inter_block(u, ivs[a], ivs[b], prm, cfg, transpose))
    mixed = [_mixed_block(u, ci, ca, prm, cfg, transpose) for ci in ivs for ca in ats]
    diverged = any(b.diverged for b in blocks + mixed)
    cc_intra = summed([b.value for b in blocks if b.kind == "cc_intra"], cfg)
    cc_inter = summed([b.value for b in blocks if b.kind == "cc_inter"], cfg)
    dd = _dd_sum(u, T, prm, cfg, transpose)
    mx = summed([b.value for b in mixed], cfg)
    err = math.fsum(b.err for b in blocks + mixed)
    if diverged:
        value = math.inf
        err = math.inf
    else:
        total = summed([b.value for b in blocks] + [dd] + [b.value for b in mixed], cfg)
        value = max(total, 0.0) ** (1.0 / prm.p)
    return SeminormResult(value, cc_intra, cc_inter, dd, mx, err, diverged, prm.p,
                          blocks + mixed)


def wnorm(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
          cfg: QuadConfig = DEFAULT_CONFIG) -> float:
    """``||u||_{L^p} + [u]``; raises :class:`DivergentSeminorm` when ``[u] = inf``."""
    T = T or u.T
    res = seminorm(u, prm, T, cfg)
    if res.diverged:
        raise DivergentSeminorm("seminorm is infinite for this function")
    return lp_norm(u, prm.p, T, cfg) + res.value


# --------------------------------------------------------------------------
# brute-force oracle


def _safe_eval(pay, x):
    try:
        return np.asarray(pay(x), dtype=float)
    except SingularEvaluation:
        out = np.full(x.shape, np.nan)
        ok = ~np.isin(x, pay.singular)
        out[ok] = pay(x[ok])
        return out


def seminorm_oracle(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
                    n: int = 256, blocks: bool = False):
    """Uniform midpoint estimate of ``[u]^p`` (not its root).

    Interval blocks use an ``n x n`` grid of cells per interval pair with the
    cells on the diagonal left out; atom pairs are exact; interval-atom blocks
    use ``n`` midpoints. No adaptivity.
    """
    if n < 2:
        raise DomainError("n", "oracle resolution must be >= 2")
    T = T or u.T
    ivs, ats = T.interval_components, T.atom_components
    grids = {}
    for c in ivs:
        dx = (c.right - c.left) / n
        x = c.left + (np.arange(n) + 0.5) * dx
        grids[c.index] = (x, _safe_eval(u.on(c), x), dx)

    def pair_sum(xa, ua, xb, ub, exclude_diag):
        total = 0.0
        step = max(1, 2_000_000 // max(len(xb), 1))
        for r in range(0, len(xa), step):
            t = xa[r:r + step, None]
            with np.errstate(divide="ignore", invalid="ignore"):
                F = np.abs(ua[r:r + step, None] - ub[None, :]) ** prm.p * prm.kernel(t, xb[None, :])
            if exclude_diag:
                rows = np.arange(r, min(r + step, len(xa)))
                F[rows - r, rows] = 0.0
            total += float(np.nansum(F))
        return total

    cc_intra = 0.0
    for c in ivs:
        x, v, dx = grids[c.index]
        cc_intra += pair_sum(x, v, x, v, True) * dx * dx
    cc_inter = 0.0
    for a in range(len(ivs)):
        for b in range(a + 1, len(ivs)):
            xa, va, da = grids[ivs[a].index]
            xb, vb, db = grids[ivs[b].index]
            cc_inter += (pair_sum(xa, va, xb, vb, False) + pair_sum(xb, vb, xa, va, False)) * da * db
    dd = 0.0
    for i, ai in enumerate(ats):
        for j, aj in enumerate(ats):
            if i != j:
                dd += (abs(u.atom_value(ai) - u.atom_value(aj)) ** prm.p
                       * float(prm.kernel(ai.point, aj.point)) * ai.measure * aj.measure)
    mixed = 0.0
    for c in ivs:
        x, v, dx = grids[c.index]
        for a in ats:
            ud = u.atom_value(a)
            with np.errstate(invalid="ignore"):
                F = np.abs(v - ud) ** prm.p * prm.sym_kernel(x, a.point)
            mixed += a.measure * float(np.nansum(F)) * dx
    total = cc_intra + cc_inter + dd + mixed
    if blocks:
        return {"cc_intra": cc_intra, "cc_inter": cc_inter, "dd": dd, "mixed": mixed,
                "total": total}
    return total


def richardson(values, ns, exponents):
    """Extrapolate ``o(n) = V + sum_k c_k n^{-e_k}`` to ``n -> inf``.

    Needs ``len(exponents) + 1`` samples.
    """
    values = np.asarray(values, dtype=float)
    ns = np.asarray(ns, dtype=float)
    if len(values) != len(exponents) + 1 or len(ns) != len(values):
        raise DomainError("exponents", "need one more sample than error terms")
    A = np.ones((len(ns), len(exponents) + 1))
    for k, e in enumerate(exponents):
        A[:, k + 1] = ns ** (-float(e))
    return float(np.linalg.solve(A, values)[0])


def oracle_extrapolated(u: TSFunction, prm: SeminormParams, T: TimeScale | None = None,
                        n0: int = 64, exponents=(1.0, 2.0)) -> float:
    """Richardson-extrapolated oracle from resolutions ``n0, 2 n0, 4 n0, ...``."""
    ns = [n0 * 2**k for k in range(len(exponents) + 1)]
    vals = [seminorm_oracle(u, prm, T, n) for n in ns]
    return richardson(vals, ns, exponents)


@dataclass(frozen=True)
class PowerKernel:
    """Constant kernel ``|t - s|^{-gamma}`` with any ``gamma >= 0``.

    Stands in for :class:`SeminormParams` in the block integrators when the
    kernel is not of Gagliardo form (``gamma = 0`` gives the unweighted
    increment integral).
    """

    p: float
    gamma: float
    variable: bool = False

    def kernel(self, t, s):
        return np.abs(np.asarray(t) - np.asarray(s)) ** (-self.gamma)

    def sym_kernel(self, t, s):
        return 2.0 * self.kernel(t, s)


def pair_integral(u: TSFunction, ci: Component, cj: Component, prm,
                  cfg: QuadConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """``iint_{ci x cj} + iint_{cj x ci}`` of ``|u(t) - u(s)|^p k(t, s)`` for
    distinct components; returns ``(value, err_est)``."""
    if ci.index == cj.index:
        raise DomainError("components", "pair_integral needs two distinct components")
    if ci.left > cj.left:
        ci, cj = cj, ci
    if ci.is_interval and cj.is_interval:
        b = _inter_block(u, ci, cj, prm, cfg, False)
    elif ci.is_atom and cj.is_atom:
        k = float(prm.sym_kernel(ci.point, cj.point))
        diff = abs(u.atom_value(ci) - u.atom_value(cj)) ** prm.p
        return diff * k * ci.measure * cj.measure, 0.0
    else:
        iv, at = (ci, cj) if ci.is_interval else (cj, ci)
        b = _mixed_block(u, iv, at, prm, cfg, False)
    return b.value, b.err
