"""Bounded hybrid time scales: finitely many compact intervals plus weighted atoms.

A time scale here is

    T = I_1 u ... u I_m u {d_1, ..., d_N}

with nondegenerate compact intervals ``I_l = [a_l, b_l]`` and isolated points
``d_j`` carrying a positive Delta-measure ``w_j``. Distinct components must be
strictly separated, so the minimal gap ``delta0`` is always positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateInterval,
    EmptySpec,
    NonpositiveAtomWeight,
    OverlappingComponents,
)

INTERVAL = "interval"
ATOM = "atom"


@dataclass(frozen=True)
class Component:
    """One connected component: an interval ``[left, right]`` or an atom.

    Atoms have ``left == right == d`` and ``measure == w``.
    """

    kind: str
    left: float
    right: float
    measure: float
    index: int

    @property
    def is_interval(self) -> bool:
        return self.kind == INTERVAL

    @property
    def is_atom(self) -> bool:
        return self.kind == ATOM

    @property
    def point(self) -> float:
        """Position of an atom (left endpoint for intervals)."""
        return self.left

    def distance_to(self, other: "Component") -> float:
        if other.left > self.right:
            return other.left - self.right
        if self.left > other.right:
            return self.left - other.right
        return 0.0

    def contains(self, t: float) -> bool:
        return self.left <= t <= self.right

    def __repr__(self) -> str:
        if self.is_interval:
            return f"Interval({self.left:g}, {self.right:g})"
        return f"Atom({self.left:g}, w={self.measure:g})"


@dataclass(frozen=True)
class TimeScale:
    intervals: tuple[tuple[float, float], ...]
    atoms: tuple[tuple[float, float], ...]
    delta0: float
    diam: float
    total_measure: float
    _components: tuple[Component, ...] = field(repr=False, compare=False)

    @property
    def components(self) -> tuple[Component, ...]:
        return self._components

    @property
    def interval_components(self) -> tuple[Component, ...]:
        return tuple(c for c in self._components if c.is_interval)

    @property
    def atom_components(self) -> tuple[Component, ...]:
        return tuple(c for c in self._components if c.is_atom)

    @property
    def inf(self) -> float:
        return self._components[0].left

    @property
    def sup(self) -> float:
        return self._components[-1].right

    def component_of(self, t: float) -> Component | None:
        for c in self._components:
            if c.contains(t):
                return c
        return None

    def __contains__(self, t) -> bool:
        return self.component_of(float(t)) is not None

    def to_spec(self) -> dict:
        return {
            "intervals": [list(iv) for iv in self.intervals],
            "atoms": [list(at) for at in self.atoms],
        }

    def sample_points(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Draw ``n`` points of T (intervals uniformly, atoms as themselves)."""
        comps = self._components
        idx = rng.integers(0, len(comps), size=n)
        out = np.empty(n)
        for k, c in enumerate(comps):
            sel = idx == k
            if c.is_interval:
                out[sel] = rng.uniform(c.left, c.right, size=int(sel.sum()))
            else:
                out[sel] = c.left
        return out, idx


def _as_pairs(items, what) -> list[tuple[float, float]]:
    pairs = []
    for item in items or ():
        try:
            x, y = item
            x, y = float(x), float(y)
        except (TypeError, ValueError) as exc:
            raise EmptySpec(f"malformed {what} entry {item!r}") from exc
        if not (math.isfinite(x) and math.isfinite(y)):
            raise EmptySpec(f"non-finite {what} entry {item!r}")
        pairs.append((x, y))
    return pairs


def build_timescale(
    intervals: Iterable[Sequence[float]] | dict | None = None,
    atoms: Iterable[Sequence[float]] | None = None,
) -> TimeScale:
    """Validate and canonicalize a hybrid time scale.

    Parameters
    ----------
    intervals : list of (a, b), or a mapping with keys ``intervals``/``atoms``
    atoms : list of (d, w) with w the Delta-measure of the isolated point d

    Raises
    ------
    EmptySpec, DegenerateInterval, NonpositiveAtomWeight, OverlappingComponents
    """
    if isinstance(intervals, dict):
        spec = intervals
        intervals, atoms = spec.get("intervals"), spec.get("atoms")
    ivs = _as_pairs(intervals, "interval")
    ats = _as_pairs(atoms, "atom")
    if not ivs and not ats:
        raise EmptySpec("time scale needs at least one interval or atom")
    for a, b in ivs:
        if not b > a:
            raise DegenerateInterval(f"interval ({a}, {b}) has b <= a")
    for d, w in ats:
        if not w > 0:
            raise NonpositiveAtomWeight(f"atom at {d} has weight {w} <= 0")

    ivs.sort()
    ats.sort()
    raw = [(a, b, INTERVAL, b - a) for a, b in ivs] + [(d, d, ATOM, w) for d, w in ats]
    raw.sort(key=lambda r: (r[0], r[1]))
    for (l0, r0, k0, _), (l1, r1, k1, _) in zip(raw, raw[1:]):
        # touching components (zero gap) are rejected as well
        if l1 <= r0:
            raise OverlappingComponents(
                f"components [{l0}, {r0}] and [{l1}, {r1}] overlap or touch"
            )

    comps = tuple(
        Component(kind, left, right, measure, i)
        for i, (left, right, kind, measure) in enumerate(raw)
    )
    if len(comps) > 1:
        delta0 = min(c1.left - c0.right for c0, c1 in zip(comps, comps[1:]))
    else:
        delta0 = math.inf
    diam = comps[-1].right - comps[0].left
    total = math.fsum(c.measure for c in comps)
    return TimeScale(
        intervals=tuple(ivs),
        atoms=tuple(ats),
        delta0=delta0,
        diam=diam,
        total_measure=total,
        _components=comps,
    )


def components(T: TimeScale) -> tuple[Component, ...]:
    return T.components


def geometry(T: TimeScale) -> tuple[float, float]:
    """Return ``(delta0, diam)``; ``delta0`` is ``inf`` for a single component."""
    return T.delta0, T.diam
