"""Exact linear programming over rationals.

Dense two-phase primal simplex with Bland's rule throughout, so termination
is guaranteed even on the heavily degenerate models the solvers build.  All
arithmetic is fractions.Fraction; no floats ever enter the tableau.

Dual values are read off the final tableau (slack, surplus or artificial
columns carry +/- the row prices) and the full optimality certificate --
primal feasibility, dual feasibility and exact strong duality -- is
re-verified against an untouched copy of the standard-form data on every
solve unless ``verify=False``.

Conventions for returned duals: for every optimal solve,
``value == sum(duals[i] * rows[i].rhs)`` holds exactly whenever all variables
have lower bound 0 and no upper bound (the common case here; variable shifts
and bound rows otherwise contribute the usual extra terms, which the internal
certificate check accounts for).  Sign pattern for a maximization: duals of
``<=`` rows are >= 0, of ``>=`` rows are <= 0, of ``==`` rows free; for a
minimization the signs flip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InstanceFormatError, IterationCap
from .rationals import ZERO, as_fraction

MAX = "max"
MIN = "min"
LE = "<="
GE = ">="
EQ = "=="

DEFAULT_PIVOT_CAP = 10**6

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPRow:
    coeffs: list[Fraction]
    rel: str
    rhs: Fraction


class LPModel:
    """A linear program in natural (row) form."""

    def __init__(self, num_vars: int, sense: str = MAX, labels: Sequence | None = None):
        if sense not in (MAX, MIN):
            raise InstanceFormatError(f"unknown sense {sense!r}")
        self.num_vars = num_vars
        self.sense = sense
        self.objective: list[Fraction] = [ZERO] * num_vars
        self.rows: list[LPRow] = []
        self.lower: list[Fraction | None] = [ZERO] * num_vars
        self.upper: list[Fraction | None] = [None] * num_vars
        self.labels = list(labels) if labels is not None else None

    def _dense(self, coeffs) -> list[Fraction]:
        dense = [ZERO] * self.num_vars
        if isinstance(coeffs, dict):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        for j, v in items:
            if not 0 <= j < self.num_vars:
                raise InstanceFormatError(f"variable index {j} out of range")
            dense[j] = as_fraction(v)
        return dense

    def set_objective(self, coeffs) -> None:
        self.objective = self._dense(coeffs)

    def add_row(self, coeffs, rel: str, rhs) -> int:
        if rel not in (LE, GE, EQ):
            raise InstanceFormatError(f"unknown relation {rel!r}")
        self.rows.append(LPRow(self._dense(coeffs), rel, as_fraction(rhs)))
        return len(self.rows) - 1

    def set_lower(self, j: int, bound) -> None:
        self.lower[j] = None if bound is None else as_fraction(bound)

    def set_upper(self, j: int, bound) -> None:
        self.upper[j] = None if bound is None else as_fraction(bound)


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    x: list[Fraction] | None = None
    duals: list[Fraction] | None = None
    bound_duals: dict[int, Fraction] = field(default_factory=dict)
    pivots: int = 0


class _Tableau:
    """Standard-form simplex state: maximize c.z, A z (+slacks) = b, z >= 0."""

    def __init__(self, n_struct, a_rows, rels, rhs, pivot_cap):
        self.m = len(a_rows)
        self.pivot_cap = pivot_cap
        self.pivots = 0
        self.n_struct = n_struct
        cols = n_struct
        self.slack_col: list[int | None] = [None] * self.m
        self.surplus_col: list[int | None] = [None] * self.m
        self.art_col: list[int | None] = [None] * self.m
        for i, rel in enumerate(rels):
            if rel == LE:
                self.slack_col[i] = cols
                cols += 1
            elif rel == GE:
                self.surplus_col[i] = cols
                cols += 1
        for i, rel in enumerate(rels):
            if rel in (GE, EQ):
                self.art_col[i] = cols
                cols += 1
        self.ncols = cols
        self.tab: list[list[Fraction]] = []
        self.basis: list[int] = []
        for i in range(self.m):
            row = list(a_rows[i]) + [ZERO] * (cols - n_struct)
            if self.slack_col[i] is not None:
                row[self.slack_col[i]] = Fraction(1)
            if self.surplus_col[i] is not None:
                row[self.surplus_col[i]] = Fraction(-1)
            if self.art_col[i] is not None:
                row[self.art_col[i]] = Fraction(1)
            row.append(rhs[i])
            self.tab.append(row)
            self.basis.append(self.art_col[i] if self.art_col[i] is not None else self.slack_col[i])
        self.artificial = {c for c in self.art_col if c is not None}

    def _pivot(self, row: int, col: int) -> None:
        self.pivots += 1
        if self.pivots > self.pivot_cap:
            raise IterationCap(f"simplex exceeded {self.pivot_cap} pivots")
        tab = self.tab
        prow = tab[row]
        inv = prow[col]
        if inv != 1:
            tab[row] = prow = [v / inv for v in prow]
        for r, other in enumerate(tab):
            if r == row:
                continue
            factor = other[col]
            if factor != 0:
                tab[r] = [a - factor * b for a, b in zip(other, prow)]
        self.basis[row] = col

    def _reduced_costs(self, costs: list[Fraction]) -> list[Fraction]:
        # r_j = c_j - c_B . (B^-1 A)_j computed from the current tableau.
        zrow = list(costs)
        for i, bv in enumerate(self.basis):
            cb = costs[bv]
            if cb != 0:
                row = self.tab[i]
                for j in range(self.ncols):
                    if row[j] != 0:
                        zrow[j] -= cb * row[j]
        return zrow

    def _bland(self, costs: list[Fraction], allowed: list[int]) -> str:
        """Run simplex to optimality with Bland's rule; returns 'optimal'/'unbounded'."""
        zrow = self._reduced_costs(costs)
        rhs_ix = self.ncols
        while True:
            enter = -1
            for j in allowed:
                if zrow[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            leave = -1
            best_ratio = None
            for i in range(self.m):
                coeff = self.tab[i][enter]
                if coeff > 0:
                    ratio = self.tab[i][rhs_ix] / coeff
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[leave])
                    ):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED
            self._pivot(leave, enter)
            # Same elimination step on the reduced-cost row (pivot row is
            # already normalized, so the entering cost drops to zero).
            factor = zrow[enter]
            if factor != 0:
                prow = self.tab[leave]
                zrow = [a - factor * b for a, b in zip(zrow, prow)]

    def solution(self) -> list[Fraction]:
        z = [ZERO] * self.ncols
        for i, bv in enumerate(self.basis):
            z[bv] = self.tab[i][self.ncols]
        return z


def solve(model: LPModel, pivot_cap: int = DEFAULT_PIVOT_CAP, verify: bool = True) -> LPResult:
    """Solve the model exactly; returns status optimal/infeasible/unbounded."""
    n = model.num_vars
    maximize = model.sense == MAX
    work_obj = [c if maximize else -c for c in model.objective]

    # Variable transforms into z >= 0 space.
    recipes: list[tuple] = []
    col = 0
    for j in range(n):
        lb = model.lower[j]
        if lb is None:
            recipes.append(("split", col, col + 1))
            col += 2
        else:
            recipes.append(("shift", col, lb))
            col += 1
    n_std = col

    def to_std_coeffs(coeffs: list[Fraction]) -> tuple[list[Fraction], Fraction]:
        """Return z-space coefficients and the constant absorbed by shifts."""
        out = [ZERO] * n_std
        const = ZERO
        for j, a in enumerate(coeffs):
            if a == 0:
                continue
            recipe = recipes[j]
            if recipe[0] == "split":
                out[recipe[1]] = a
                out[recipe[2]] = -a
            else:
                out[recipe[1]] = a
                const += a * recipe[2]
        return out, const

    std_obj, offset = to_std_coeffs(work_obj)

    a_rows: list[list[Fraction]] = []
    rels: list[str] = []
    rhs: list[Fraction] = []
    origins: list[tuple] = []
    flips: list[bool] = []

    def push_row(coeffs, rel, b, origin):
        if b < 0:
            coeffs = [-v for v in coeffs]
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
            flips.append(True)
        else:
            flips.append(False)
        a_rows.append(coeffs)
        rels.append(rel)
        rhs.append(b)
        origins.append(origin)

    for i, row in enumerate(model.rows):
        coeffs, const = to_std_coeffs(row.coeffs)
        push_row(coeffs, row.rel, row.rhs - const, ("user", i))
    for j in range(n):
        ub = model.upper[j]
        if ub is None:
            continue
        unit = [ZERO] * n
        unit[j] = Fraction(1)
        coeffs, const = to_std_coeffs(unit)
        push_row(coeffs, LE, ub - const, ("bound", j))

    tab = _Tableau(n_std, a_rows, rels, rhs, pivot_cap)

    # Phase 1: drive artificials to zero.
    if tab.artificial:
        costs1 = [ZERO] * tab.ncols
        for c in tab.artificial:
            costs1[c] = Fraction(-1)
        allowed = [j for j in range(tab.ncols) if j not in tab.artificial]
        status = tab._bland(costs1, allowed)
        assert status == OPTIMAL, "phase-1 objective is bounded by construction"
        z = tab.solution()
        if any(z[c] != 0 for c in tab.artificial):
            return LPResult(status=INFEASIBLE, pivots=tab.pivots)
        # Pivot leftover artificials out of the basis where possible.
        for i in range(tab.m):
            if tab.basis[i] in tab.artificial:
                for j in allowed:
                    if tab.tab[i][j] != 0:
                        tab._pivot(i, j)
                        break

    costs2 = [ZERO] * tab.ncols
    for j, c in enumerate(std_obj):
        costs2[j] = c
    allowed = [j for j in range(tab.ncols) if j not in tab.artificial]
    status = tab._bland(costs2, allowed)
    if status == UNBOUNDED:
        return LPResult(status=UNBOUNDED, pivots=tab.pivots)

    z = tab.solution()
    value_std = sum((costs2[j] * z[j] for j in range(tab.ncols) if z[j] != 0), ZERO)

    x = [ZERO] * n
    for j, recipe in enumerate(recipes):
        if recipe[0] == "split":
            x[j] = z[recipe[1]] - z[recipe[2]]
        else:
            x[j] = z[recipe[1]] + recipe[2]

    # Row prices from the final reduced costs.
    zrow = tab._reduced_costs(costs2)
    y_norm: list[Fraction] = []
    for i in range(tab.m):
        if tab.slack_col[i] is not None:
            y_norm.append(-zrow[tab.slack_col[i]])
        elif tab.surplus_col[i] is not None:
            y_norm.append(zrow[tab.surplus_col[i]])
        else:
            y_norm.append(-zrow[tab.art_col[i]])

    if verify:
        _verify_certificate(tab, a_rows, rels, rhs, costs2, z, y_norm, zrow, value_std)

    duals = [ZERO] * len(model.rows)
    bound_duals: dict[int, Fraction] = {}
    for i, origin in enumerate(origins):
        y = -y_norm[i] if flips[i] else y_norm[i]
        if not maximize:
            y = -y
        if origin[0] == "user":
            duals[origin[1]] = y
        else:
            bound_duals[origin[1]] = y

    value_work = value_std + offset
    value = value_work if maximize else -value_work

    if verify:
        _verify_user_rows(model, x)

    return LPResult(
        status=OPTIMAL,
        value=value,
        x=x,
        duals=duals,
        bound_duals=bound_duals,
        pivots=tab.pivots,
    )


def _verify_certificate(tab, a_rows, rels, rhs, costs, z, y, zrow, value_std) -> None:
    """Exact optimality certificate in standard-form space."""
    # Primal feasibility: every normalized row holds with its slack value.
    for i in range(tab.m):
        lhs = sum((a * z[j] for j, a in enumerate(a_rows[i]) if a != 0 and z[j] != 0), ZERO)
        if tab.slack_col[i] is not None:
            lhs += z[tab.slack_col[i]]
        if tab.surplus_col[i] is not None:
            lhs -= z[tab.surplus_col[i]]
        assert lhs == rhs[i], "primal infeasibility in certified solution"
    # Strong duality.
    dual_value = sum((y[i] * rhs[i] for i in range(tab.m) if y[i] != 0), ZERO)
    assert dual_value == value_std, "strong duality failed"
    # Dual feasibility on structural columns (slack/surplus signs are implied
    # by the zrow entries the prices were read from).
    for j in range(tab.n_struct):
        reduced = costs[j] - sum(
            (y[i] * a_rows[i][j] for i in range(tab.m) if a_rows[i][j] != 0), ZERO
        )
        assert reduced <= 0, "dual infeasibility on a structural column"
        assert z[j] == 0 or reduced == 0, "complementary slackness violated"


def _verify_user_rows(model: LPModel, x: list[Fraction]) -> None:
    for row in model.rows:
        lhs = sum((a * x[j] for j, a in enumerate(row.coeffs) if a != 0), ZERO)
        if row.rel == LE:
            assert lhs <= row.rhs
        elif row.rel == GE:
            assert lhs >= row.rhs
        else:
            assert lhs == row.rhs
    for j in range(model.num_vars):
        if model.lower[j] is not None:
            assert x[j] >= model.lower[j]
        if model.upper[j] is not None:
            assert x[j] <= model.upper[j]


def feasibility(model: LPModel, pivot_cap: int = DEFAULT_PIVOT_CAP) -> LPResult:
    """Phase-1 style feasibility check: ignores the objective entirely."""
    probe = LPModel(model.num_vars, sense=MAX)
    probe.rows = [LPRow(list(r.coeffs), r.rel, r.rhs) for r in model.rows]
    probe.lower = list(model.lower)
    probe.upper = list(model.upper)
    return solve(probe, pivot_cap=pivot_cap)
