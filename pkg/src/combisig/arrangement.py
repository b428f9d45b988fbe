"""Cell enumeration for hyperplane arrangements on the belief affine hull.

Beliefs over D states live on the affine hull {x : sum(x) == 1}; a
hyperplane ``normal . x == 0`` carves it into sign regions.  This module
enumerates every full-dimensional region (cell), optionally restricted to
the open probability simplex, and returns one exact rational interior
point per cell.

Internally each hyperplane is rewritten in chart coordinates
``y = (x_2, ..., x_D)`` (with ``x_1 = 1 - sum(y)``) as an affine functional
``a . y + b``, canonicalized to a primitive integer vector so coincident
hyperplanes coalesce (opposite-scaling copies are canonicalized with a
recorded sign flip).  For one- and two-dimensional charts the cells are
found geometrically: every cell has a vertex among the pairwise functional
intersections (including the simplex facets, or a bounding box in
unrestricted mode), and stepping a rational epsilon into each angular
sector around each vertex visits every cell.  In higher dimension a
breadth-first flood over single-sign flips is used, certifying each
candidate sign pattern with an exact strict-feasibility LP.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import factorial, gcd, lcm

from . import lp
from .errors import DimensionTooSmall, TooLarge
from .rationals import ONE, ZERO, as_fraction

DEFAULT_CELL_CAP = 100_000


@dataclass(frozen=True)
class Hyperplane:
    """The set {x in aff : normal . x == 0}, tagged with an opaque label."""

    normal: tuple[Fraction, ...]
    label: object = None


def make_hyperplane(normal, label=None) -> Hyperplane:
    return Hyperplane(tuple(as_fraction(v) for v in normal), label)


def side(plane: Hyperplane, point) -> int:
    """-1 / 0 / +1 according to which side of the plane the point lies on."""
    val = sum((n * as_fraction(p) for n, p in zip(plane.normal, point)), ZERO)
    return (val > 0) - (val < 0)


@dataclass(frozen=True)
class Cell:
    """One full-dimensional region: per-input-plane signs plus a witness."""

    signs: tuple[int, ...]
    point: tuple[Fraction, ...]


def _functional(plane: Hyperplane, num_states: int) -> tuple[tuple[Fraction, ...], Fraction]:
    """Chart form a . y + b of the plane restricted to the affine hull."""
    n = plane.normal
    if len(n) != num_states:
        raise DimensionTooSmall(
            f"hyperplane normal has {len(n)} coordinates, expected {num_states}"
        )
    b = n[0]
    a = tuple(n[k] - n[0] for k in range(1, num_states))
    return a, b


def _canonical(a, b) -> tuple[tuple[int, ...], int, int] | None:
    """Primitive-integer form of a functional, or None if identically zero.

    Returns (a_int, b_int, flip) with the first nonzero entry positive and
    sign(original value) == flip * sign(canonical value) everywhere.
    """
    vals = [as_fraction(v) for v in (*a, b)]
    scale = lcm(*(v.denominator for v in vals))
    ints = [int(v * scale) for v in vals]
    g = gcd(*ints)
    if g == 0:
        return None
    ints = [v // g for v in ints]
    flip = 1
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
                flip = -1
            break
    return tuple(ints[:-1]), ints[-1], flip


def _evaluate(func: tuple, y) -> Fraction:
    a, b = func
    return sum((coef * y[j] for j, coef in enumerate(a) if coef != 0), ZERO) + b


def _simplex_context(dim: int) -> list[tuple]:
    """Facet functionals of the simplex in chart coordinates: all stay > 0."""
    out = []
    for j in range(dim):
        a = [0] * dim
        a[j] = 1
        out.append((tuple(a), 0))
    out.append((tuple([-1] * dim), 1))
    return out


def _box_context(dim: int, cutting) -> list[tuple]:
    """Bounding-box functionals large enough that every cell pokes inside.

    Any minimal face of a cell solves a square integer subsystem, so its
    coordinates are bounded by the worst Cramer ratio; a box one unit wider
    therefore meets the interior of every cell.
    """
    coef_max = 1
    for a, b in cutting:
        coef_max = max(coef_max, abs(b), *(abs(v) for v in a))
    bound = 1 + factorial(dim) * coef_max**dim
    out = []
    for j in range(dim):
        a = [0] * dim
        a[j] = 1
        out.append((tuple(a), bound))
        out.append((tuple(-v for v in a), bound))
    return out


def _solve_2x2(a1, a2, b1, b2) -> tuple[Fraction, Fraction] | None:
    det = Fraction(a1[0]) * a2[1] - Fraction(a1[1]) * a2[0]
    if det == 0:
        return None
    # Solve a1 . y = -b1, a2 . y = -b2 by Cramer's rule.
    y0 = (Fraction(-b1) * a2[1] - Fraction(a1[1]) * (-b2)) / det
    y1 = (Fraction(a1[0]) * (-b2) - Fraction(-b1) * a2[0]) / det
    return (y0, y1)


def _ray_cmp(u, v) -> int:
    def half(w):
        return 0 if (w[1] > 0 or (w[1] == 0 and w[0] > 0)) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = u[0] * v[1] - u[1] * v[0]
    if cross > 0:
        return -1
    if cross < 0:
        return 1
    return 0


def _primitive_ray(vec) -> tuple[int, int]:
    g = gcd(vec[0], vec[1])
    return (vec[0] // g, vec[1] // g)


def _step_point(vertex, direction, funcs) -> tuple[Fraction, ...]:
    """Vertex plus a rational epsilon along direction, small enough that no
    functional that is nonzero at the vertex changes sign."""
    eps = ONE
    for func in funcs:
        val = _evaluate(func, vertex)
        if val == 0:
            continue
        slope = sum(Fraction(c) * d for c, d in zip(func[0], direction))
        if slope != 0:
            cap = abs(val) / (2 * abs(slope))
            if cap < eps:
                eps = cap
    return tuple(v + eps * d for v, d in zip(vertex, direction))


def _sector_directions(rays: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """One strictly interior direction per angular sector between the rays."""
    rays = sorted(set(rays), key=cmp_to_key(_ray_cmp))
    if len(rays) == 2:
        t = rays[0]
        return [(-t[1], t[0]), (t[1], -t[0])]
    dirs = []
    for i, r in enumerate(rays):
        s = rays[(i + 1) % len(rays)]
        dirs.append((r[0] + s[0], r[1] + s[1]))
    return dirs


def _strict_point(cutting, context, signs) -> tuple[Fraction, ...] | None:
    """Interior point of the open region {sign_h * f_h > 0, context > 0}, if any.

    Finds the point maximizing the minimum signed slack, solved through the
    dual of `maximize the common slack t`: variables are one multiplier per
    functional plus one for the cap t <= 1; the dual's own duals recover
    (y, t).  Strictly feasible iff the optimum t is positive.
    """
    dim = len(context[0][0])
    funcs = [((tuple(s * c for c in a)), s * b) for (a, b), s in zip(cutting, signs)]
    funcs.extend(context)
    m = len(funcs)
    model = lp.LPModel(m + 1, sense=lp.MIN)
    model.set_objective([Fraction(b) for _, b in funcs] + [ONE])
    for j in range(dim):
        model.add_row({h: Fraction(-funcs[h][0][j]) for h in range(m)}, lp.EQ, 0)
    model.add_row([ONE] * (m + 1), lp.EQ, 1)
    res = lp.solve(model)
    assert res.status == lp.OPTIMAL
    if res.value <= 0:
        return None
    point = tuple(res.duals[:dim])
    for a, b in funcs:
        assert _evaluate((a, b), point) > 0, "strict-feasibility witness failed recheck"
    return point


def _generic_point(dim: int, cutting, context) -> tuple[Fraction, ...]:
    """A point in the open context region avoiding every cutting hyperplane.

    Powers 1/q, 1/q^2, ... lie strictly inside both the simplex and any
    bounding box; a functional vanishing at them for every q would have to
    be identically zero.
    """
    q = 2
    while True:
        y = tuple(Fraction(1, q**k) for k in range(1, dim + 1))
        if all(_evaluate(f, y) != 0 for f in cutting):
            assert all(_evaluate(f, y) > 0 for f in context)
            return y
        q += 1


def enumerate_cells(
    hyperplanes,
    num_states: int,
    restrict_to_simplex: bool = True,
    max_cells: int = DEFAULT_CELL_CAP,
) -> list[Cell]:
    """All full-dimensional sign cells the planes cut the belief hull into.

    With ``restrict_to_simplex`` the cells are those meeting the open
    probability simplex and every witness point is a strictly positive
    distribution; without it the cells cover the whole affine hull and
    witnesses may leave the simplex.  Returns cells in a deterministic
    order; the sign of every input hyperplane at the witness is reported
    (0 when a plane vanishes on the whole hull).
    """
    if num_states < 1:
        raise DimensionTooSmall("need at least one state")
    dim = num_states - 1

    recipes: list[tuple] = []
    cutting: list[tuple] = []
    canon_index: dict[tuple, int] = {}
    for plane in hyperplanes:
        a, b = _functional(plane, num_states)
        canon = _canonical(a, b)
        if canon is None:
            recipes.append(("zero",))
            continue
        a_int, b_int, flip = canon
        if all(v == 0 for v in a_int):
            # Constant sign over the hull; canonical b is positive.
            recipes.append(("const", flip))
            continue
        key = (a_int, b_int)
        if key not in canon_index:
            canon_index[key] = len(cutting)
            cutting.append(key)
        recipes.append(("cut", canon_index[key], flip))

    if dim == 0:
        return [Cell(_input_signs(recipes, ()), (ONE,))]

    context = _simplex_context(dim) if restrict_to_simplex else _box_context(dim, cutting)

    if not cutting:
        y = _generic_point(dim, (), context)
        return [_make_cell(recipes, (), y)]

    found: dict[tuple[int, ...], tuple[Fraction, ...]] = {}

    def record(y: tuple[Fraction, ...]) -> tuple[int, ...] | None:
        if any(_evaluate(f, y) <= 0 for f in context):
            return None
        signs = []
        for f in cutting:
            v = _evaluate(f, y)
            if v == 0:
                return None
            signs.append(1 if v > 0 else -1)
        key = tuple(signs)
        if key not in found:
            if len(found) >= max_cells:
                raise TooLarge("arrangement has more cells than allowed", max_cells)
            found[key] = y
        return key

    all_funcs = cutting + context

    if dim == 1:
        seen_roots: set[Fraction] = set()
        for a, b in all_funcs:
            root = Fraction(-b, a[0])
            if root in seen_roots:
                continue
            seen_roots.add(root)
            if any(_evaluate(f, (root,)) < 0 for f in context):
                continue
            for direction in ((1,), (-1,)):
                record(_step_point((root,), direction, all_funcs))
    elif dim == 2:
        vertices: dict[tuple[Fraction, Fraction], None] = {}
        for (a1, b1), (a2, b2) in combinations(all_funcs, 2):
            v = _solve_2x2(a1, a2, b1, b2)
            if v is None:
                continue
            if any(_evaluate(f, v) < 0 for f in context):
                continue
            vertices.setdefault(v)
        for v in vertices:
            rays: list[tuple[int, int]] = []
            for a, b in all_funcs:
                if _evaluate((a, b), v) == 0:
                    rays.extend(
                        (_primitive_ray((-a[1], a[0])), _primitive_ray((a[1], -a[0])))
                    )
            for direction in _sector_directions(rays):
                record(_step_point(v, direction, all_funcs))
    else:
        seed = _generic_point(dim, cutting, context)
        seed_key = record(seed)
        assert seed_key is not None
        queue = [seed_key]
        probed: set[tuple[int, ...]] = {seed_key}
        while queue:
            key = queue.pop()
            for h in range(len(cutting)):
                flipped = key[:h] + (-key[h],) + key[h + 1 :]
                if flipped in probed:
                    continue
                probed.add(flipped)
                y = _strict_point(cutting, context, flipped)
                if y is not None:
                    got = record(y)
                    assert got == flipped
                    queue.append(flipped)

    return [_make_cell(recipes, key, found[key]) for key in sorted(found)]


def interior_point(signs, hyperplanes, num_states: int | None = None):
    """Point of the belief hull strictly on the required side of each plane.

    ``signs`` assigns +1/-1 per hyperplane.  Maximizes the minimum signed
    slack within a bounding box (no simplex restriction; callers filter).
    Returns the point, or None when no strictly feasible point exists.
    """
    planes = list(hyperplanes)
    signs = list(signs)
    if num_states is None:
        if not planes:
            raise DimensionTooSmall("cannot infer dimension without hyperplanes")
        num_states = len(planes[0].normal)
    dim = num_states - 1

    cutting: list[tuple] = []
    required: dict[tuple, int] = {}
    for plane, want in zip(planes, signs):
        if want not in (1, -1):
            raise DimensionTooSmall(f"sign must be +1 or -1, got {want!r}")
        a, b = _functional(plane, num_states)
        canon = _canonical(a, b)
        if canon is None:
            return None  # vanishes on the hull; no strict side exists
        a_int, b_int, flip = canon
        canon_sign = want * flip
        if all(v == 0 for v in a_int):
            if canon_sign != 1:  # canonical constant value is positive
                return None
            continue
        key = (a_int, b_int)
        if key in required:
            if required[key] != canon_sign:
                return None
        else:
            required[key] = canon_sign
            cutting.append(key)

    if dim == 0:
        return (ONE,)
    context = _box_context(dim, cutting)
    if not cutting:
        y = _generic_point(dim, (), context)
        return _lift(y)
    y = _strict_point(cutting, context, [required[k] for k in cutting])
    return None if y is None else _lift(y)


def strict_simplex_point(signs, hyperplanes, num_states: int):
    """Like ``interior_point`` but also strictly inside the simplex.

    Returns a strictly positive distribution on the required strict side of
    every plane, or None when the cell does not meet the open simplex.
    """
    planes = list(hyperplanes)
    signs = list(signs)
    dim = num_states - 1

    cutting: list[tuple] = []
    required: dict[tuple, int] = {}
    for plane, want in zip(planes, signs):
        if want not in (1, -1):
            raise DimensionTooSmall(f"sign must be +1 or -1, got {want!r}")
        a, b = _functional(plane, num_states)
        canon = _canonical(a, b)
        if canon is None:
            return None
        a_int, b_int, flip = canon
        canon_sign = want * flip
        if all(v == 0 for v in a_int):
            if canon_sign != 1:
                return None
            continue
        key = (a_int, b_int)
        if key in required:
            if required[key] != canon_sign:
                return None
        else:
            required[key] = canon_sign
            cutting.append(key)

    if dim == 0:
        return (ONE,)
    context = _simplex_context(dim)
    if not cutting:
        y = _generic_point(dim, (), context)
        return _lift(y)
    y = _strict_point(cutting, context, [required[k] for k in cutting])
    return None if y is None else _lift(y)


def weak_simplex_point(signs, hyperplanes, num_states: int):
    """Point of the closed simplex weakly on the required side of each plane.

    Certifies that the closure of a sign cell touches the simplex (possibly
    only on its boundary).  Returns such a distribution, or None.
    """
    planes = list(hyperplanes)
    signs = list(signs)
    dim = num_states - 1

    rows: list[tuple[int, tuple, int]] = []
    for plane, want in zip(planes, signs):
        if want not in (1, -1):
            raise DimensionTooSmall(f"sign must be +1 or -1, got {want!r}")
        a, b = _functional(plane, num_states)
        canon = _canonical(a, b)
        if canon is None:
            continue  # vanishes on the hull: weakly on both sides
        a_int, b_int, flip = canon
        canon_sign = want * flip
        if all(v == 0 for v in a_int):
            if canon_sign != 1:
                return None
            continue
        rows.append((canon_sign, a_int, b_int))

    if dim == 0:
        return (ONE,)
    model = lp.LPModel(dim)
    for k in range(dim):
        model.set_lower(k, ZERO)
    model.add_row([ONE] * dim, lp.LE, ONE)
    for s, a, b in rows:
        model.add_row([Fraction(s * v) for v in a], lp.GE, Fraction(-s * b))
    res = lp.feasibility(model)
    if res.status != lp.OPTIMAL:
        return None
    return _lift(tuple(res.x))


def _lift(y) -> tuple[Fraction, ...]:
    return (ONE - sum(y, ZERO),) + tuple(y)


def _make_cell(recipes, canon_signs, y) -> Cell:
    return Cell(_input_signs(recipes, canon_signs), _lift(y))


def _input_signs(recipes, canon_signs) -> tuple[int, ...]:
    out = []
    for recipe in recipes:
        if recipe[0] == "zero":
            out.append(0)
        elif recipe[0] == "const":
            out.append(recipe[1])
        else:
            out.append(recipe[2] * canon_signs[recipe[1]])
    return tuple(out)
