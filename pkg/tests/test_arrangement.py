"""Cell enumeration over the belief hull vs. random-point sampling."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from combisig import arrangement
from combisig.errors import DimensionTooSmall

F = Fraction


def rand_planes(rng, m, num_states, coef=5):
    planes = []
    for i in range(m):
        while True:
            normal = tuple(F(rng.randint(-coef, coef)) for _ in range(num_states))
            if any(v != 0 for v in normal):
                break
        planes.append(arrangement.make_hyperplane(normal, label=i))
    return planes


def rand_simplex_point(rng, num_states, denom=9973):
    cuts = sorted(rng.randint(0, denom) for _ in range(num_states - 1))
    parts = []
    prev = 0
    for c in cuts:
        parts.append(c - prev)
        prev = c
    parts.append(denom - prev)
    return tuple(F(p, denom) for p in parts)


def signs_at(planes, point):
    out = []
    for plane in planes:
        v = sum(a * x for a, x in zip(plane.normal, point))
        out.append(0 if v == 0 else (1 if v > 0 else -1))
    return tuple(out)


def test_single_state_dimension_zero():
    planes = rand_planes(random.Random(0), 3, 1)
    cells = arrangement.enumerate_cells(planes, 1)
    assert len(cells) == 1
    assert cells[0].point == (F(1),)


def test_zero_states_rejected():
    with pytest.raises(DimensionTooSmall):
        arrangement.enumerate_cells([], 0)


def test_no_planes_single_cell():
    cells = arrangement.enumerate_cells([], 3)
    assert len(cells) == 1
    assert sum(cells[0].point) == 1


def test_coincident_planes_share_sign_up_to_flip():
    a = arrangement.make_hyperplane((F(2), F(-2), F(0)))
    b = arrangement.make_hyperplane((F(-3), F(3), F(0)))  # same plane, flipped
    cells = arrangement.enumerate_cells([a, b], 3)
    assert len(cells) == 2
    for cell in cells:
        assert cell.signs[0] == -cell.signs[1]


def test_plane_vanishing_on_hull_reports_zero():
    # normal (1,1,1) is identically 1 on the hull: constant positive sign
    const = arrangement.make_hyperplane((F(1), F(1), F(1)))
    cut = arrangement.make_hyperplane((F(1), F(-1), F(0)))
    cells = arrangement.enumerate_cells([const, cut], 3)
    assert len(cells) == 2
    assert all(cell.signs[0] == 1 for cell in cells)
    zero = arrangement.make_hyperplane((F(0), F(0), F(0)))
    cells = arrangement.enumerate_cells([zero], 3)
    assert len(cells) == 1 and cells[0].signs == (0,)


def test_three_concurrent_lines_six_cells():
    # pairwise differences of the bundled demo utilities: concurrent at center
    planes = [
        arrangement.make_hyperplane((F(5), F(-5), F(0))),
        arrangement.make_hyperplane((F(4), F(-1), F(-3))),
        arrangement.make_hyperplane((F(-1), F(4), F(-3))),
    ]
    cells = arrangement.enumerate_cells(planes, 3)
    assert len(cells) == 6
    assert all(0 not in cell.signs for cell in cells)


def test_cells_match_sampling_small():
    """Every sampled strict sign vector appears among the enumerated cells,
    and witnesses reproduce their own sign vectors (strictly)."""
    rng = random.Random(424242)
    for trial in range(25):
        num_states = rng.randint(2, 4)
        m = rng.randint(1, 6)
        planes = rand_planes(rng, m, num_states)
        cells = arrangement.enumerate_cells(planes, num_states)
        listed = {cell.signs for cell in cells}
        # size bound: cells in dimension d cut by m planes
        d = num_states - 1
        assert len(listed) <= sum(math.comb(m, i) for i in range(d + 1))
        for cell in cells:
            assert signs_at(planes, cell.point) == cell.signs
            assert all(x > 0 for x in cell.point) and sum(cell.point) == 1
        for _ in range(300):
            pt = rand_simplex_point(rng, num_states)
            signs = signs_at(planes, pt)
            if 0 in signs:
                continue
            assert signs in listed, f"trial {trial}: missed {signs}"


def test_unrestricted_mode_covers_outside_simplex():
    # A plane crossing the hull far from the simplex still splits the hull.
    plane = arrangement.make_hyperplane((F(1), F(1), F(-9)))
    unrestricted = arrangement.enumerate_cells([plane], 3, restrict_to_simplex=False)
    assert {cell.signs for cell in unrestricted} == {(1,), (-1,)}
    inside = arrangement.enumerate_cells([plane], 3)
    # the simplex lies strictly on one side except near the vertex (0,0,1)
    assert {cell.signs for cell in inside} == {(1,), (-1,)}


def test_interior_point_lookup():
    planes = [
        arrangement.make_hyperplane((F(1), F(-1), F(0))),
        arrangement.make_hyperplane((F(0), F(1), F(-1))),
    ]
    point = arrangement.strict_simplex_point((1, 1), planes, 3)
    assert point is not None
    assert signs_at(planes, point) == (1, 1)
    assert arrangement.strict_simplex_point((1, 1, 1), planes + [
        arrangement.make_hyperplane((F(-1), F(0), F(1)))
    ], 3) is None  # x>y>z>x is impossible


def test_weak_simplex_point_touches_boundary():
    # strict cell x0>x1 with the extra plane x2=0 active only at the boundary
    planes = [
        arrangement.make_hyperplane((F(1), F(-1), F(0))),
        arrangement.make_hyperplane((F(0), F(0), F(1))),
    ]
    # signs (+,-): x0 > x1 and x2 < 0 never holds inside, but its closure
    # touches the simplex on the x2=0 edge
    assert arrangement.strict_simplex_point((1, -1), planes, 3) is None
    weak = arrangement.weak_simplex_point((1, -1), planes, 3)
    assert weak is not None
    assert sum(weak) == 1 and all(x >= 0 for x in weak)
