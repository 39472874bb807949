import math

import numpy as np
import pytest

from tsgag import build_timescale, components, geometry
from tsgag.errors import (DegenerateInterval, EmptySpec, NonpositiveAtomWeight,
                          OverlappingComponents)
from support import rand_timescale


def test_single_interval():
    T = build_timescale([(0, 1)])
    assert len(T.components) == 1
    assert T.total_measure == 1.0
    assert T.diam == 1.0
    assert T.delta0 == math.inf


def test_three_components():
    T = build_timescale([(0, 1), (3, 4)], [(2, 0.5)])
    assert len(T.components) == 3
    assert T.total_measure == 2.5
    assert T.delta0 == 1.0
    assert T.diam == 4.0
    assert [c.kind for c in T.components] == ["interval", "atom", "interval"]


def test_atom_inside_interval_rejected():
    with pytest.raises(OverlappingComponents):
        build_timescale([(0, 1)], [(0.5, 1)])


def test_touching_components_rejected():
    with pytest.raises(OverlappingComponents):
        build_timescale([(0, 1)], [(1, 1)])
    with pytest.raises(OverlappingComponents):
        build_timescale([(0, 1), (1, 2)])


@pytest.mark.parametrize("ivs,ats,exc", [
    ([], [], EmptySpec),
    ([(1, 1)], [], DegenerateInterval),
    ([(2, 1)], [], DegenerateInterval),
    ([], [(0, 0)], NonpositiveAtomWeight),
    ([], [(0, -1)], NonpositiveAtomWeight),
])
def test_invalid_inputs(ivs, ats, exc):
    with pytest.raises(exc):
        build_timescale(ivs, ats)


def test_components_order_and_measures():
    T = build_timescale([(0, 1)], [(2, 1)])
    cs = components(T)
    assert (cs[0].left, cs[0].right, cs[0].measure) == (0, 1, 1)
    assert cs[1].is_atom and cs[1].point == 2 and cs[1].measure == 1
    T2 = build_timescale([], [(1, 1), (0, 1)])
    assert [c.point for c in T2.components] == [0, 1]


@pytest.mark.parametrize("ivs,ats,d0,diam", [
    ([(0, 1)], [(2, 1)], 1.0, 2.0),
    ([], [(0, 1), (3, 1)], 3.0, 3.0),
    ([(0, 1), (1.25, 2)], [(5, 1)], 0.25, 5.0),
])
def test_geometry(ivs, ats, d0, diam):
    assert geometry(build_timescale(ivs, ats)) == (d0, diam)


def test_dict_input_and_idempotence():
    T = build_timescale({"intervals": [[3, 4], [0, 1]], "atoms": [[2, 0.5]]})
    assert build_timescale(T.to_spec()) == T


def test_random_invariants():
    rng = np.random.default_rng(0)
    for _ in range(50):
        T = rand_timescale(rng)
        assert math.isclose(T.total_measure, sum(c.measure for c in T.components))
        assert build_timescale(T.to_spec()) == T
        if len(T.components) > 1:
            t, it = T.sample_points(40, rng)
            s, js = T.sample_points(40, rng)
            for a, i, b, j in zip(t, it, s, js):
                if i != j:
                    assert T.delta0 - 1e-12 <= abs(a - b) <= T.diam + 1e-12


def test_membership():
    T = build_timescale([(0, 1)], [(2, 1)])
    assert 0.5 in T and 2 in T and 1.5 not in T
    assert T.component_of(2).is_atom
