"""Receiver best-response analysis over the belief simplex.

For a linear receiver over a matroid, which independent set is optimal
depends on the belief only through the descending order of expected
singleton weights, and that order is constant on each cell of the
arrangement of pairwise comparison hyperplanes.  Enumerating the cells and
running greedy once per cell therefore yields every action that can be a
best response at some belief.

Degenerate utility data (collinear difference vectors) is audited by
``check_nondegeneracy``; when violations are found the catalog is built
under a symbolic lexicographic perturbation: element i's weight carries an
extra eps^(i+1) bump on state i mod D, realized as lexicographically
compared coefficient tuples so no numeric eps is ever picked.  Inside the
open simplex the bump terms are strictly positive, so the perturbed
comparison reduces to the exact weights with ties broken by ascending
element index, and pairs of identical elements (whose perturbed comparison
never vanishes on the interior) simply drop out of the hyperplane family.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from . import arrangement, matroid
from .errors import NonLinearReceiver, UnsupportedCombination, UnsupportedSense
from .model import (
    MATROID_KINDS,
    ActionSet,
    Instance,
    Partition,
    Sense,
    UtilityKind,
)
from .rationals import ZERO

AUDIT_SEED = 90377  # fixed seed for the sampled non-degeneracy audit
AUDIT_SAMPLES = 1000
EXHAUSTIVE_LIMIT = 7  # n up to this: audit every permutation


@dataclass(frozen=True)
class NondegeneracyReport:
    clean: bool
    method: str  # "exhaustive" | "sampled" | "vacuous"
    families_checked: int
    violations: tuple = ()  # (permutation, positions) witnesses


@dataclass(frozen=True)
class BestResponseCatalog:
    actions: tuple[ActionSet, ...]
    witnesses: tuple[tuple[Fraction, ...], ...]  # one interior belief per action
    num_cells: int
    degeneracy: NondegeneracyReport
    perturbed: bool
    # (element, eps exponent, bumped state) rows when perturbed
    schedule: tuple[tuple[int, int, int], ...] = field(default=())


def _require_linear_matroid(instance: Instance) -> None:
    if instance.receiver.kind is not UtilityKind.LINEAR:
        raise NonLinearReceiver("receiver utility must be linear for cell analysis")
    if not isinstance(instance.constraint, MATROID_KINDS):
        raise UnsupportedCombination("best-response enumeration needs a matroid constraint")
    if instance.sense is not Sense.MAX:
        raise UnsupportedSense("best-response enumeration is for the maximization sense")


def _psi(instance: Instance) -> list[tuple[Fraction, ...]]:
    """Per-element vectors of singleton receiver values across states."""
    values = instance.receiver.linear
    n = len(instance.element_names)
    return [tuple(values[t][e] for t in range(len(instance.state_names))) for e in range(n)]


def _pair_iter(instance: Instance):
    n = len(instance.element_names)
    constraint = instance.constraint
    if isinstance(constraint, Partition):
        for block in constraint.blocks:
            yield from combinations(sorted(block), 2)
    else:
        yield from combinations(range(n), 2)


def receiver_hyperplanes(instance: Instance) -> list[arrangement.Hyperplane]:
    """Pairwise comparison hyperplanes, one per element pair that can swap order.

    Pairs with identical singleton vectors are dropped (their comparison
    never changes sign); for partition matroids only within-block pairs
    matter, because greedy never weighs elements of different blocks
    against each other.
    """
    _require_linear_matroid(instance)
    psi = _psi(instance)
    planes = []
    for i, j in _pair_iter(instance):
        normal = tuple(a - b for a, b in zip(psi[i], psi[j]))
        if any(v != 0 for v in normal):
            planes.append(arrangement.Hyperplane(normal, (i, j)))
    return planes


def _det_nonzero(vectors: list[tuple[Fraction, ...]]) -> bool:
    """Exact rank check: True iff the square family is linearly independent."""
    m = [list(v) for v in vectors]
    size = len(m)
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            return False
        m[col], m[pivot] = m[pivot], m[col]
        inv = m[col][col]
        for r in range(col + 1, size):
            factor = m[r][col] / inv
            if factor != 0:
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
    return True


def check_nondegeneracy(instance: Instance) -> NondegeneracyReport:
    """Audit the consecutive-difference independence assumption.

    For a permutation pi of the elements and a set S of |states| positions,
    the difference vectors psi[pi[i]] - psi[pi[i+1]], i in S, must be
    linearly independent.  All permutations are tested for small n
    (equivalent families deduplicated); larger n gets a fixed-seed sample.
    """
    if instance.receiver.kind is not UtilityKind.LINEAR:
        raise NonLinearReceiver("non-degeneracy audit needs linear receiver utility")
    psi = _psi(instance)
    n = len(psi)
    d = len(instance.state_names)
    if n - 1 < d:
        return NondegeneracyReport(True, "vacuous", 0)

    def families(perm):
        for positions in combinations(range(n - 1), d):
            pairs = frozenset(
                (min(perm[i], perm[i + 1]), max(perm[i], perm[i + 1])) for i in positions
            )
            yield positions, pairs

    violations = []
    seen: set[frozenset] = set()
    checked = 0
    if n <= EXHAUSTIVE_LIMIT:
        method = "exhaustive"
        perms = permutations(range(n))
    else:
        method = "sampled"
        rng = random.Random(AUDIT_SEED)
        base = list(range(n))
        sampled = []
        for _ in range(AUDIT_SAMPLES):
            rng.shuffle(base)
            sampled.append(tuple(base))
        perms = sampled
    for perm in perms:
        for positions, key in families(perm):
            if key in seen:
                continue
            seen.add(key)
            checked += 1
            vectors = [
                tuple(a - b for a, b in zip(psi[perm[i]], psi[perm[i + 1]]))
                for i in positions
            ]
            if not _det_nonzero(vectors):
                violations.append((tuple(perm), positions))
    return NondegeneracyReport(not violations, method, checked, tuple(violations))


def _lex_weights(
    psi: list[tuple[Fraction, ...]], point: tuple[Fraction, ...]
) -> list[tuple]:
    """Perturbed expected weights at a belief as lexicographic tuples.

    Index t of the tuple carries the eps^t coefficient: the exact expected
    weight at t=0, and element i's bump point[i mod D] at t=i+1.  At an
    interior belief every bump is positive, so distinct elements never
    compare equal.
    """
    n = len(psi)
    num_states = len(point)
    weights = []
    for e in range(n):
        base = sum((point[t] * psi[e][t] for t in range(num_states)), ZERO)
        tiers = [ZERO] * n
        tiers[e] = point[e % num_states]
        weights.append((base, *tiers))
    return weights


def greedy_at_point(
    instance: Instance, point: tuple[Fraction, ...], drop_negative: bool = False
) -> ActionSet:
    """Greedy independent set for the expected weights at a belief.

    By default returns the order-determined greedy base (every independent
    element is taken, regardless of weight sign); with ``drop_negative``
    elements whose perturbed weight compares below zero are skipped, which
    is the receiver's actual best response at the point.
    """
    psi = _psi(instance)
    oracle = matroid.oracle_for(instance.constraint, len(psi))
    weights = _lex_weights(psi, point)
    zero = (ZERO,) * (len(psi) + 1)
    order = sorted(range(len(psi)), key=lambda e: weights[e], reverse=True)
    chosen: list[int] = []
    for e in order:
        if drop_negative and weights[e] < zero:
            continue
        if oracle.is_independent(tuple(sorted(chosen + [e]))):
            chosen.append(e)
    return tuple(sorted(chosen))


def enumerate_best_responses(instance: Instance) -> BestResponseCatalog:
    """Every action that greedy selects on some cell reaching the simplex.

    Cells are enumerated over the whole affine hull of the simplex and kept
    when their closure touches it.  Cells meeting the open simplex get a
    strictly interior witness and contribute both the greedy base and the
    receiver's exact best response there; cells that only touch the simplex
    boundary contribute the greedy base for their weight order, which is a
    best response at the touching beliefs (the strict order refines the tie
    pattern that holds where the closure meets the simplex).  Restricting to
    open-simplex cells alone would lose actions that are optimal only on
    the simplex boundary, e.g. when two elements compare equal at a vertex.
    """
    _require_linear_matroid(instance)
    report = check_nondegeneracy(instance)
    planes = receiver_hyperplanes(instance)
    num_states = len(instance.state_names)
    cells = arrangement.enumerate_cells(planes, num_states, restrict_to_simplex=False)

    interior: dict[ActionSet, tuple[Fraction, ...]] = {}
    touching: dict[ActionSet, tuple[Fraction, ...]] = {}
    kept = 0
    for cell in cells:
        point = cell.point
        if not all(v > 0 for v in point):
            point = arrangement.strict_simplex_point(cell.signs, planes, num_states)
        if point is not None:
            kept += 1
            interior.setdefault(greedy_at_point(instance, point), point)
            interior.setdefault(greedy_at_point(instance, point, drop_negative=True), point)
            continue
        weak = arrangement.weak_simplex_point(cell.signs, planes, num_states)
        if weak is not None:
            kept += 1
            touching.setdefault(greedy_at_point(instance, cell.point), cell.point)

    found = dict(touching)
    found.update(interior)  # prefer strictly interior witnesses
    actions = tuple(sorted(found))
    perturbed = not report.clean
    schedule = ()
    if perturbed:
        schedule = tuple((e, e + 1, e % num_states) for e in range(len(instance.element_names)))
    return BestResponseCatalog(
        actions=actions,
        witnesses=tuple(found[a] for a in actions),
        num_cells=kept,
        degeneracy=report,
        perturbed=perturbed,
        schedule=schedule,
    )
