"""Real-valued functions on a hybrid time scale.

A :class:`TSFunction` carries one payload per connected component. Interval
payloads are either exact piecewise-linear data (constants, affine maps,
indicators of sub-intervals, sampled values) or general expressions that
declare where they lose smoothness and where they are singular. Atom payloads
are only ever evaluated at the atom itself.

The quadrature code asks a payload for its ``breakpoints`` and ``singular``
points and, when available, for an exact piecewise-linear representation.
"""

from __future__ import annotations

import operator
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import DomainError, ParseError, SingularEvaluation
from .timescale import Component, TimeScale


class Payload:
    """Restriction of a function to one component."""

    breakpoints: tuple[float, ...] = ()
    singular: tuple[float, ...] = ()

    def __call__(self, t):  # pragma: no cover - abstract
        raise NotImplementedError

    def piecewise_linear(self) -> "PiecewiseLinear | None":
        return None


class PiecewiseLinear(Payload):
    """Piecewise-linear data on ``[knots[0], knots[-1]]``, jumps allowed at knots.

    ``left[k]`` and ``right[k]`` are the one-sided limits of piece ``k`` at its
    left and right knot. Evaluation exactly at an interior knot uses the piece
    to the right.
    """

    def __init__(self, knots, left, right):
        self.knots = np.asarray(knots, dtype=float)
        self.left = np.asarray(left, dtype=float)
        self.right = np.asarray(right, dtype=float)
        if self.knots.ndim != 1 or len(self.knots) < 2:
            raise ValueError("need at least two knots")
        if len(self.left) != len(self.knots) - 1 or len(self.right) != len(self.left):
            raise ValueError("one (left, right) value pair per piece")
        self.breakpoints = tuple(float(x) for x in self.knots[1:-1])
        self.singular = ()

    @property
    def n_pieces(self) -> int:
        return len(self.left)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.knots)

    @property
    def slopes(self) -> np.ndarray:
        L = self.lengths
        with np.errstate(invalid="ignore", divide="ignore"):
            s = (self.right - self.left) / L
        return np.where(L > 0, s, 0.0)

    def piece_index(self, t) -> np.ndarray:
        k = np.searchsorted(self.knots, t, side="right") - 1
        return np.clip(k, 0, self.n_pieces - 1)

    def eval_in_piece(self, k, t) -> np.ndarray:
        """Evaluate the affine map of piece ``k`` at ``t`` (extrapolating if needed)."""
        x0 = self.knots[k]
        return self.left[k] + self.slopes[k] * (np.asarray(t, dtype=float) - x0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.eval_in_piece(self.piece_index(t), t)

    def piecewise_linear(self) -> "PiecewiseLinear":
        return self

    def affine(self, scale: float, shift: float) -> "PiecewiseLinear":
        return PiecewiseLinear(
            self.knots, scale * self.left + shift, scale * self.right + shift
        )

    def combine(self, other: "PiecewiseLinear", op) -> "PiecewiseLinear":
        """Pointwise ``op`` (``+`` or ``-``) of two payloads on the same support."""
        knots = np.union1d(self.knots, other.knots)
        if len(knots) == 1:
            # atom payloads carry the degenerate knot pair [d, d]
            knots = np.repeat(knots, 2)
        lo, hi = knots[:-1], knots[1:]
        mid = 0.5 * (lo + hi)
        ka, kb = self.piece_index(mid), other.piece_index(mid)
        left = op(self.eval_in_piece(ka, lo), other.eval_in_piece(kb, lo))
        right = op(self.eval_in_piece(ka, hi), other.eval_in_piece(kb, hi))
        return PiecewiseLinear(knots, left, right)

    def zero_crossings(self) -> tuple[float, ...]:
        """Interior points where some piece changes sign."""
        out = []
        for k in range(self.n_pieces):
            l, r = self.left[k], self.right[k]
            if l * r < 0:
                x0, x1 = self.knots[k], self.knots[k + 1]
                out.append(float(x0 + (x1 - x0) * l / (l - r)))
        return tuple(out)

    def __repr__(self) -> str:
        return f"PiecewiseLinear(knots={self.knots.tolist()})"


class PowerPayload(Payload):
    """``coef * |t - center| ** exponent``; singular at ``center`` when exponent < 0."""

    def __init__(self, center: float, exponent: float, coef: float = 1.0):
        self.center = float(center)
        self.exponent = float(exponent)
        self.coef = float(coef)
        self.breakpoints = (self.center,)
        self.singular = (self.center,) if self.exponent < 0 else ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        r = np.abs(t - self.center)
        if self.exponent < 0 and np.any(r == 0):
            raise SingularEvaluation(
                f"|t - {self.center}|^{self.exponent} evaluated at its singular point"
            )
        if self.exponent == 0:
            return np.full_like(r, self.coef)
        return self.coef * r**self.exponent


class ExprPayload(Payload):
    """Arbitrary vectorized callable with declared breakpoints and singular points."""

    def __init__(self, func: Callable, breakpoints=(), singular=()):
        self.func = func
        self.breakpoints = tuple(sorted(set(float(x) for x in breakpoints)))
        self.singular = tuple(sorted(set(float(x) for x in singular)))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.singular and np.any(np.isin(t, self.singular)):
            raise SingularEvaluation("expression evaluated at a declared singular point")
        return np.broadcast_to(np.asarray(self.func(t), dtype=float), t.shape).copy()


def _pl_constant(c: Component, value: float) -> PiecewiseLinear:
    return PiecewiseLinear([c.left, c.right], [value], [value])


def _pl_linear(c: Component, slope: float, intercept: float) -> PiecewiseLinear:
    return PiecewiseLinear(
        [c.left, c.right], [slope * c.left + intercept], [slope * c.right + intercept]
    )


def _pl_indicator(c: Component, lo: float, hi: float) -> PiecewiseLinear:
    if c.is_atom:
        v = 1.0 if lo <= c.left <= hi else 0.0
        return _pl_constant(c, v)
    knots = [c.left]
    vals = []
    lo_c, hi_c = max(lo, c.left), min(hi, c.right)
    if hi_c <= lo_c:
        return _pl_constant(c, 0.0)
    for x, v in ((lo_c, 0.0), (hi_c, 1.0), (c.right, 0.0)):
        if x > knots[-1]:
            knots.append(x)
            vals.append(v)
    return PiecewiseLinear(knots, vals, vals)


def _pl_samples(c: Component, grid, values) -> PiecewiseLinear:
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.shape != values.shape or grid.ndim != 1 or len(grid) == 0:
        raise ValueError("samples need matching 1-D grid and values")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("sample grid must be strictly increasing")
    if grid[0] < c.left or grid[-1] > c.right:
        raise ValueError(f"sample grid leaves component {c}")
    knots, vals = list(grid), list(values)
    if knots[0] > c.left:
        knots.insert(0, c.left)
        vals.insert(0, vals[0])
    if knots[-1] < c.right:
        knots.append(c.right)
        vals.append(vals[-1])
    vals = np.asarray(vals)
    if len(knots) == 1:
        return _pl_constant(c, float(vals[0]))
    return PiecewiseLinear(knots, vals[:-1], vals[1:])


def _binary(p: Payload, q: Payload, op) -> Payload:
    pl, ql = p.piecewise_linear(), q.piecewise_linear()
    if pl is not None and ql is not None and op in (operator.add, operator.sub):
        return pl.combine(ql, op)
    return ExprPayload(
        lambda t: op(p(t), q(t)),
        breakpoints=p.breakpoints + q.breakpoints,
        singular=p.singular + q.singular,
    )


def _unary(p: Payload, func, extra_breaks=()) -> Payload:
    return ExprPayload(
        lambda t: func(p(t)),
        breakpoints=p.breakpoints + tuple(extra_breaks),
        singular=p.singular,
    )


class TSFunction:
    """A function on a :class:`TimeScale`, one payload per component."""

    def __init__(self, T: TimeScale, payloads: Sequence[Payload]):
        if len(payloads) != len(T.components):
            raise ValueError("one payload per component is required")
        self.T = T
        self.payloads = tuple(payloads)

    # -- builtins ----------------------------------------------------------
    @classmethod
    def constant(cls, T: TimeScale, value: float) -> "TSFunction":
        return cls(T, [_pl_constant(c, float(value)) for c in T.components])

    @classmethod
    def linear(cls, T: TimeScale, slope: float, intercept: float = 0.0) -> "TSFunction":
        return cls(T, [_pl_linear(c, float(slope), float(intercept)) for c in T.components])

    @classmethod
    def power(
        cls, T: TimeScale, center: float, exponent: float, coef: float = 1.0
    ) -> "TSFunction":
        pays = []
        for c in T.components:
            if c.is_atom:
                val = PowerPayload(center, exponent, coef)(np.array([c.left]))[0]
                pays.append(_pl_constant(c, float(val)))
            else:
                pays.append(PowerPayload(center, exponent, coef))
        return cls(T, pays)

    @classmethod
    def indicator(cls, T: TimeScale, lo: float, hi: float) -> "TSFunction":
        return cls(T, [_pl_indicator(c, float(lo), float(hi)) for c in T.components])

    @classmethod
    def from_samples(
        cls,
        T: TimeScale,
        samples: Mapping[int, tuple[Sequence[float], Sequence[float]]],
        atom_values: Mapping[int, float] | None = None,
    ) -> "TSFunction":
        """Piecewise-linear interpolant of sampled values.

        ``samples`` maps interval component indices to ``(grid, values)``;
        ``atom_values`` maps atom component indices to their value.
        """
        atom_values = atom_values or {}
        pays = []
        for c in T.components:
            if c.is_interval:
                if c.index not in samples:
                    raise ValueError(f"no samples for component {c.index}")
                grid, vals = samples[c.index]
                pays.append(_pl_samples(c, grid, vals))
            else:
                if c.index not in atom_values:
                    raise ValueError(f"no value for atom component {c.index}")
                pays.append(_pl_constant(c, float(atom_values[c.index])))
        return cls(T, pays)

    @classmethod
    def from_callable(
        cls, T: TimeScale, func: Callable, breakpoints=(), singular=()
    ) -> "TSFunction":
        pays = []
        for c in T.components:
            if c.is_atom:
                pays.append(_pl_constant(c, float(np.asarray(func(np.array([c.left])))[0])))
            else:
                inside = [x for x in breakpoints if c.left <= x <= c.right]
                sing = [x for x in singular if c.left <= x <= c.right]
                pays.append(ExprPayload(func, inside, sing))
        return cls(T, pays)

    @classmethod
    def random_samples(
        cls,
        T: TimeScale,
        rng: np.random.Generator,
        n_knots: int | Sequence[int] = 6,
        scale: float = 1.0,
        uniform_grid: bool = False,
    ) -> "TSFunction":
        """Random piecewise-linear function; used by tests and sampling estimators."""
        samples, atoms = {}, {}
        ivs = T.interval_components
        counts = [n_knots] * len(ivs) if np.isscalar(n_knots) else list(n_knots)
        for c, n in zip(ivs, counts):
            if uniform_grid:
                grid = np.linspace(c.left, c.right, n)
            else:
                inner = np.sort(rng.uniform(c.left, c.right, size=max(n - 2, 0)))
                grid = np.concatenate(([c.left], inner, [c.right]))
                grid = np.unique(grid)
            samples[c.index] = (grid, scale * rng.standard_normal(len(grid)))
        for c in T.atom_components:
            atoms[c.index] = scale * float(rng.standard_normal())
        return cls.from_samples(T, samples, atoms)

    @classmethod
    def from_spec(cls, T: TimeScale, entries) -> "TSFunction":
        """Build from the scenario schema.

        ``entries`` is a list of ``{component_index, kind, ...params}``; an entry
        without ``component_index`` applies to every component not otherwise
        listed. Supported kinds: constant, linear, power, indicator, samples.
        """
        if isinstance(entries, Mapping):
            entries = [entries]
        default = None
        explicit: dict[int, Mapping] = {}
        for e in entries:
            if not isinstance(e, Mapping) or "kind" not in e:
                raise ParseError("function entry needs a 'kind'", field="kind")
            if "component_index" in e:
                k = int(e["component_index"])
                if not 0 <= k < len(T.components):
                    raise ParseError(f"component_index {k} out of range", field="component_index")
                explicit[k] = e
            else:
                default = e
        pays = []
        for c in T.components:
            e = explicit.get(c.index, default)
            if e is None:
                raise ParseError(f"no payload for component {c.index}", field="component_index")
            pays.append(_payload_from_entry(c, e))
        return cls(T, pays)

    # -- evaluation --------------------------------------------------------
    def on(self, c: Component | int) -> Payload:
        k = c if isinstance(c, int) else c.index
        return self.payloads[k]

    def atom_value(self, c: Component | int) -> float:
        comp = self.T.components[c if isinstance(c, int) else c.index]
        return float(self.payloads[comp.index](np.array([comp.left]))[0])

    def atom_values(self) -> np.ndarray:
        return np.array([self.atom_value(c) for c in self.T.atom_components])

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.full(t.shape, np.nan)
        for c in self.T.components:
            sel = (t >= c.left) & (t <= c.right)
            if np.any(sel):
                out[sel] = self.payloads[c.index](t[sel])
        if np.any(np.isnan(out)):
            raise DomainError("t", "evaluation point outside the time scale")
        return out

    @property
    def is_piecewise_linear(self) -> bool:
        return all(p.piecewise_linear() is not None for p in self.payloads)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "TSFunction"):
        if other.T != self.T:
            raise ValueError("functions live on different time scales")

    def __add__(self, other):
        if isinstance(other, TSFunction):
            self._check(other)
            return TSFunction(
                self.T, [_binary(p, q, operator.add) for p, q in zip(self.payloads, other.payloads)]
            )
        c = float(other)
        return TSFunction(self.T, [_affine(p, 1.0, c) for p in self.payloads])

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TSFunction):
            self._check(other)
            return TSFunction(
                self.T, [_binary(p, q, operator.sub) for p, q in zip(self.payloads, other.payloads)]
            )
        return self + (-float(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self * -1.0

    def __mul__(self, other):
        if isinstance(other, TSFunction):
            self._check(other)
            return TSFunction(
                self.T, [_binary(p, q, operator.mul) for p, q in zip(self.payloads, other.payloads)]
            )
        c = float(other)
        return TSFunction(self.T, [_affine(p, c, 0.0) for p in self.payloads])

    __rmul__ = __mul__

    def abs_pow(self, p: float) -> "TSFunction":
        """``|u|**p`` with zero crossings of piecewise-linear data marked as breakpoints."""
        out = []
        for pay in self.payloads:
            pl = pay.piecewise_linear()
            extra = pl.zero_crossings() if pl is not None else ()
            out.append(_unary(pay, lambda v, p=p: np.abs(v) ** p, extra))
        return TSFunction(self.T, out)

    def __abs__(self):
        return self.abs_pow(1.0)


def _affine(p: Payload, scale: float, shift: float) -> Payload:
    pl = p.piecewise_linear()
    if pl is not None:
        return pl.affine(scale, shift)
    return _unary(p, lambda v: scale * v + shift)


def _payload_from_entry(c: Component, e: Mapping) -> Payload:
    if isinstance(e.get("params"), Mapping):
        e = {**e, **e["params"]}
    kind = e["kind"]
    try:
        if kind == "constant":
            return _pl_constant(c, float(e.get("value", e.get("c", 0.0))))
        if kind == "linear":
            return _pl_linear(c, float(e.get("slope", 1.0)), float(e.get("intercept", 0.0)))
        if kind == "power":
            pw = PowerPayload(float(e.get("center", 0.0)), float(e["exponent"]), float(e.get("coef", 1.0)))
            if c.is_atom:
                return _pl_constant(c, float(pw(np.array([c.left]))[0]))
            return pw
        if kind == "indicator":
            return _pl_indicator(c, float(e["lo"]), float(e["hi"]))
        if kind == "samples":
            if c.is_atom:
                vals = e.get("values", e.get("value"))
                v = vals[0] if isinstance(vals, (list, tuple)) else vals
                return _pl_constant(c, float(v))
            return _pl_samples(c, e["grid"], e["values"])
    except KeyError as exc:
        raise ParseError(f"missing parameter {exc.args[0]!r} for kind {kind!r}", field=exc.args[0]) from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad parameters for kind {kind!r}: {exc}", field="kind") from exc
    raise ParseError(f"unknown function kind {kind!r}", field="kind")


def iter_pieces(a: float, b: float, points: Iterable[float]) -> list[tuple[float, float]]:
    """Split ``[a, b]`` at the given points (those strictly inside)."""
    cuts = sorted(set(x for x in points if a < x < b))
    edges = [a, *cuts, b]
    return list(zip(edges[:-1], edges[1:]))
