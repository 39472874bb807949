"""Galerkin discretization of the p = 2 nonlocal form.

Trial space: continuous hats on a uniform mesh of each interval plus one
indicator per atom. ``K`` is the matrix of

    <u, v> = iint_{t != s} (u(t) - u(s)) (v(t) - v(s)) |t - s|^{-(1 + 2 alpha)}

and ``M`` the Delta-measure mass matrix. Work on the mean-zero subspace uses an
orthonormal basis of ``{c : m^T c = 0}`` with ``m_i = int phi_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (
    DomainError,
    MeshTooCoarse,
    NoNonzeroEigenvalue,
    SingularMass,
    SingularSystem,
)
from .functions import TSFunction
from .integrate import delta_integral, integrate_pieces
from .quadrature import DEFAULT_CONFIG, QuadConfig, gauss_jacobi_left, gauss_legendre
from .timescale import Component, TimeScale


@dataclass
class Basis:
    """Hats per interval component and one indicator per atom."""

    T: TimeScale
    cells: tuple[int, ...]
    nodes: dict[int, np.ndarray]
    slices: dict[int, slice]
    m: np.ndarray

    @property
    def size(self) -> int:
        return len(self.m)

    def function(self, c) -> TSFunction:
        """The expansion ``sum_i c_i phi_i`` as a piecewise-linear TSFunction."""
        c = np.asarray(c, dtype=float)
        samples, atoms = {}, {}
        for comp in self.T.components:
            sl = self.slices[comp.index]
            if comp.is_interval:
                samples[comp.index] = (self.nodes[comp.index], c[sl])
            else:
                atoms[comp.index] = float(c[sl][0])
        return TSFunction.from_samples(self.T, samples, atoms)

    def evaluate_matrix(self, comp: Component, t) -> np.ndarray:
        """Rows ``phi(t)`` restricted to the hats of interval ``comp``."""
        x = self.nodes[comp.index]
        n = len(x) - 1
        dx = (x[-1] - x[0]) / n
        t = np.asarray(t, dtype=float)
        k = np.clip(np.floor((t - x[0]) / dx).astype(int), 0, n - 1)
        th = (t - x[k]) / dx
        B = np.zeros((len(t), n + 1))
        r = np.arange(len(t))
        B[r, k] = 1.0 - th
        B[r, k + 1] = th
        return B


def build_basis(T: TimeScale, cells_per_interval=8) -> Basis:
    ivs = T.interval_components
    if np.isscalar(cells_per_interval):
        cells = [int(cells_per_interval)] * len(ivs)
    else:
        cells = [int(n) for n in cells_per_interval]
        if len(cells) == 1 and len(ivs) > 1:
            cells = cells * len(ivs)
        if len(cells) != len(ivs):
            raise DomainError("mesh", f"expected {len(ivs)} cell counts, got {len(cells)}")
    if any(n < 1 for n in cells):
        raise MeshTooCoarse("every interval needs at least one cell")
    nodes, slices, m = {}, {}, []
    pos = 0
    it = iter(cells)
    for c in T.components:
        if c.is_interval:
            n = next(it)
            x = np.linspace(c.left, c.right, n + 1)
            dx = (c.right - c.left) / n
            w = np.full(n + 1, dx)
            w[0] = w[-1] = 0.5 * dx
            nodes[c.index] = x
            slices[c.index] = slice(pos, pos + n + 1)
            m.extend(w)
            pos += n + 1
        else:
            slices[c.index] = slice(pos, pos + 1)
            m.append(c.measure)
            pos += 1
    return Basis(T, tuple(cells), nodes, slices, np.array(m))


@dataclass
class GalerkinSystem:
    K: np.ndarray
    M: np.ndarray
    basis: Basis
    alpha: float
    info: dict = field(default_factory=dict)

    @property
    def m(self) -> np.ndarray:
        return self.basis.m

    def mean_zero_basis(self) -> np.ndarray:
        return sla.null_space(self.m[None, :])


# --------------------------------------------------------------------------
# assembly


def _intra_stiffness(x: np.ndarray, alpha: float, m: int) -> np.ndarray:
    """Same-interval block for hats on the uniform mesh ``x``.

    Lag form ``2 int_0^L h^{-1-2 alpha} int_a^{b-h} D D^T ds dh`` with
    ``D = Phi(s + h) - Phi(s)``. On each lag panel ``[k dx, (k+1) dx]`` the
    inner integrand is piecewise quadratic in ``s`` (two Gauss points are
    exact) and the inner integral is a cubic in ``h``. On the first panel it
    equals ``h^2`` times a linear polynomial, handled by a Gauss-Jacobi rule
    with weight ``h^{1 - 2 alpha}``.
    """
    n = len(x) - 1
    a, b = x[0], x[-1]
    dx = (b - a) / n
    N = n + 1
    g = 1.0 + 2.0 * alpha
    xg, wg = gauss_legendre(m)
    xj, wj = gauss_jacobi_left(m, 1.0 - 2.0 * alpha)
    # first panel: int_0^dx (G/h^2) h^{1-2 alpha} dh
    h0 = dx * xj
    w0 = 2.0 * dx ** (2.0 - 2.0 * alpha) * wj / h0**2
    hs = [h0]
    ws = [w0]
    for k in range(1, n):
        h = dx * (k + xg)
        hs.append(h)
        ws.append(2.0 * dx * wg * h ** (-g))
    h_all = np.concatenate(hs)
    w_all = np.concatenate(ws)
    xs, ws2 = gauss_legendre(2)
    out = np.zeros(N * N)
    chunk = max(1, 4_000_000 // (32 * (2 * N)))
    for r in range(0, len(h_all), chunk):
        h = h_all[r:r + chunk, None]
        wh = w_all[r:r + chunk, None]
        cand = np.concatenate([np.broadcast_to(x, (len(h), N)), x[None, :] - h], axis=1)
        cand = np.clip(cand, a, b - h)
        cand.sort(axis=1)
        cl, ln = cand[:, :-1], np.diff(cand, axis=1)
        s = cl[..., None] + ln[..., None] * xs
        wt = (wh * ln)[..., None] * ws2
        t = s + h[..., None]
        i0 = np.clip(np.floor((s - a) / dx).astype(int), 0, n - 1)
        j0 = np.clip(np.floor((t - a) / dx).astype(int), 0, n - 1)
        ti = (s - x[i0]) / dx
        tj = (t - x[j0]) / dx
        idx = np.stack([j0, j0 + 1, i0, i0 + 1], axis=-1)
        val = np.stack([1.0 - tj, tj, ti - 1.0, -ti], axis=-1)
        flat = idx[..., :, None] * N + idx[..., None, :]
        contrib = wt[..., None, None] * val[..., :, None] * val[..., None, :]
        out += np.bincount(flat.ravel(), weights=contrib.ravel(), minlength=N * N)
    K = out.reshape(N, N)
    return 0.5 * (K + K.T)


def _graded_rule(lo: float, hi: float, mesh: np.ndarray, toward: float, m: int):
    """Composite Gauss rule on ``[lo, hi]`` split at mesh nodes and at points
    geometrically graded toward the outside point ``toward``."""
    gap = lo - toward if toward < lo else toward - hi
    far = hi - toward if toward < lo else toward - lo
    pts = [lo, hi] + list(mesh)
    r = gap * 2.0
    while r < far:
        pts.append(toward + r if toward < lo else toward - r)
        r *= 2.0
    e = np.unique(np.clip(pts, lo, hi))
    xg, wg = gauss_legendre(m)
    L = np.diff(e)
    t = (e[:-1, None] + L[:, None] * xg).ravel()
    w = (L[:, None] * wg).ravel()
    return t, w


def assemble(T: TimeScale, basis: Basis, alpha: float,
             cfg: QuadConfig = DEFAULT_CONFIG) -> GalerkinSystem:
    """Stiffness ``K`` and mass ``M`` for the nonlocal p = 2 form."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha", f"alpha must lie in (0, 1), got {alpha}")
    N = basis.size
    K = np.zeros((N, N))
    M = np.zeros((N, N))
    g = 1.0 + 2.0 * alpha
    m = max(cfg.panel_order, 8)
    comps = T.components
    # mass and same-component blocks
    for c in comps:
        sl = basis.slices[c.index]
        if c.is_atom:
            M[sl, sl] = c.measure
            continue
        x = basis.nodes[c.index]
        dx = x[1] - x[0]
        n = len(x) - 1
        Mc = np.zeros((n + 1, n + 1))
        loc = dx / 6.0 * np.array([[2.0, 1.0], [1.0, 2.0]])
        for k in range(n):
            Mc[k:k + 2, k:k + 2] += loc
        M[sl, sl] = Mc
        K[sl, sl] += _intra_stiffness(x, alpha, m)
    # distinct components, both orderings
    for a_, ca in enumerate(comps):
        for cb in comps[a_ + 1:]:
            sa, sb = basis.slices[ca.index], basis.slices[cb.index]
            if ca.is_atom and cb.is_atom:
                k = 2.0 * ca.measure * cb.measure * abs(ca.point - cb.point) ** (-g)
                K[sa, sa] += k
                K[sb, sb] += k
                K[sa, sb] -= k
                K[sb, sa] -= k
                continue
            if ca.is_atom or cb.is_atom:
                ci, cd = (cb, ca) if ca.is_atom else (ca, cb)
                si, sd = basis.slices[ci.index], basis.slices[cd.index]
                t, w = _graded_rule(ci.left, ci.right, basis.nodes[ci.index], cd.point, m)
                B = basis.evaluate_matrix(ci, t)
                k = 2.0 * cd.measure * np.abs(t - cd.point) ** (-g) * w
                K[si, si] += B.T @ (k[:, None] * B)
                col = B.T @ k
                K[si, sd] -= col[:, None]
                K[sd, si] -= col[None, :]
                # same rule as the cross term so that K annihilates constants
                K[sd, sd] += float(np.sum(k))
                continue
            ta, wa = _graded_rule(ca.left, ca.right, basis.nodes[ca.index], cb.left, m)
            tb, wb = _graded_rule(cb.left, cb.right, basis.nodes[cb.index], ca.right, m)
            Ba, Bb = basis.evaluate_matrix(ca, ta), basis.evaluate_matrix(cb, tb)
            kern = np.abs(ta[:, None] - tb[None, :]) ** (-g)
            ra = kern @ wb
            rb = kern.T @ wa
            K[sa, sa] += 2.0 * Ba.T @ ((wa * ra)[:, None] * Ba)
            K[sb, sb] += 2.0 * Bb.T @ ((wb * rb)[:, None] * Bb)
            cross = 2.0 * (Ba * wa[:, None]).T @ kern @ (Bb * wb[:, None])
            K[sa, sb] -= cross
            K[sb, sa] -= cross.T
    K = 0.5 * (K + K.T)
    # the exact form annihilates constants; impose it against rounding
    np.fill_diagonal(K, 0.0)
    np.fill_diagonal(K, -K.sum(axis=1))
    return GalerkinSystem(K, M, basis, float(alpha))


# --------------------------------------------------------------------------
# spectral estimate and model problem


def poincare_eigenvalue(sys: GalerkinSystem) -> tuple[float, float]:
    """Smallest eigenvalue of ``K v = lambda M v`` on mean-zero coefficients.

    Returns ``(lambda_min, lambda_min ** -0.5)``.
    """
    Q = sys.mean_zero_basis()
    if Q.shape[1] == 0:
        raise NoNonzeroEigenvalue("a single basis function has no mean-zero direction")
    Kr = Q.T @ sys.K @ Q
    Mr = Q.T @ sys.M @ Q
    try:
        lam = sla.eigh(0.5 * (Kr + Kr.T), 0.5 * (Mr + Mr.T), eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMass("mass matrix is not positive definite") from exc
    lmin = float(lam[0])
    scale = max(float(np.max(np.abs(lam))), 1e-300)
    if not lmin > 1e-13 * scale:
        raise NoNonzeroEigenvalue(f"smallest mean-zero eigenvalue {lmin} is not positive")
    return lmin, lmin**-0.5


@dataclass
class ModelSolution:
    """Minimizer of ``E(u) = 1/2 [u]^2 - int f u`` on the mean-zero Galerkin space.

    Iterates as ``(u_h, residual, energy)``.
    """

    u_h: TSFunction
    residual: float
    energy: float
    coeffs: np.ndarray
    projected: bool
    system: GalerkinSystem

    def __iter__(self):
        return iter((self.u_h, self.residual, self.energy))


def load_vector(f: TSFunction, basis: Basis, cfg: QuadConfig = DEFAULT_CONFIG) -> np.ndarray:
    """``b_i = int f phi_i dmu``."""
    T = basis.T
    b = np.zeros(basis.size)
    for c in T.components:
        sl = basis.slices[c.index]
        if c.is_atom:
            b[sl] = c.measure * f.atom_value(c)
            continue
        pay = f.on(c)
        x = basis.nodes[c.index]
        dx = x[1] - x[0]
        vals = []
        for i in range(len(x)):
            lo, hi = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]

            def integrand(t, i=i):
                return pay(t) * np.clip(1.0 - np.abs(t - x[i]) / dx, 0.0, None)

            v, _, div = integrate_pieces(integrand, lo, hi, cfg,
                                         list(pay.breakpoints) + [x[i]], pay.singular)
            if div:
                raise SingularSystem("load vector integral diverges")
            vals.append(v)
        b[sl] = vals
    return b


def solve_model_problem(f: TSFunction, T: TimeScale, alpha: float, cells_per_interval=8,
                        cfg: QuadConfig = DEFAULT_CONFIG, system: GalerkinSystem | None = None
                        ) -> ModelSolution:
    basis = system.basis if system is not None else build_basis(T, cells_per_interval)
    sys = system or assemble(T, basis, alpha, cfg)
    b = load_vector(f, basis, cfg)
    mean_f = delta_integral(f, T, cfg)[0] / T.total_measure
    scale = max(float(np.max(np.abs(b))), 1.0) if b.size else 1.0
    projected = abs(mean_f) * T.total_measure > 1e3 * cfg.rel_tol * scale
    if projected:
        b = b - mean_f * basis.m
    Q = sys.mean_zero_basis()
    if Q.shape[1] == 0:
        raise SingularSystem("no mean-zero direction in the trial space")
    Kr = Q.T @ sys.K @ Q
    rhs = Q.T @ b
    try:
        y = sla.solve(0.5 * (Kr + Kr.T), rhs, assume_a="pos")
    except (np.linalg.LinAlgError, sla.LinAlgWarning) as exc:
        raise SingularSystem("reduced stiffness matrix is singular") from exc
    c = Q @ y
    residual = float(np.linalg.norm(Q.T @ (sys.K @ c - b)))
    energy = 0.5 * float(c @ sys.K @ c) - float(b @ c)
    if not math.isfinite(energy):
        raise SingularSystem("non-finite solution")
    return ModelSolution(basis.function(c), residual, energy, c, bool(projected), sys)
