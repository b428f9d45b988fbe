"""Core data model: instances, utilities, constraints, schemes, posteriors.

States and ground-set elements are dense 0-based indices everywhere in the
library; human-readable names are kept alongside purely for serialization.
Actions are canonically represented as sorted tuples of element indices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import (
    InstanceFormatError,
    MissingTabularEntry,
    NoPath,
    ZeroMassSignal,
)
from .rationals import ONE, ZERO, as_fraction

ActionSet = tuple[int, ...]

TABULAR_MAX_ELEMENTS = 16


def make_action(elements) -> ActionSet:
    """Canonical action representation: strictly increasing tuple of indices."""
    action = tuple(sorted(set(int(e) for e in elements)))
    return action


class Sense(enum.Enum):
    MAX = "max"
    MIN = "min"


class UtilityKind(enum.Enum):
    LINEAR = "linear"
    TABULAR = "tabular"


@dataclass(frozen=True)
class UtilitySpec:
    """Per-state utility over actions, either additive over elements or a table.

    ``linear``: for each state, a vector of singleton values; the value of an
    action is the sum of its elements' values.  ``tabular``: for each state, an
    explicit map from actions to values (tiny instances only).
    """

    kind: UtilityKind
    linear: tuple[tuple[Fraction, ...], ...] | None = None
    tabular: tuple[Mapping[ActionSet, Fraction], ...] | None = None

    @classmethod
    def from_linear(cls, rows) -> "UtilitySpec":
        parsed = tuple(tuple(as_fraction(v) for v in row) for row in rows)
        if not parsed:
            raise InstanceFormatError("linear utility needs at least one state row")
        width = len(parsed[0])
        for row in parsed:
            if len(row) != width:
                raise InstanceFormatError("linear utility rows have unequal lengths")
            for v in row:
                if v < 0:
                    raise InstanceFormatError("utilities must be nonnegative")
        return cls(kind=UtilityKind.LINEAR, linear=parsed)

    @classmethod
    def from_tabular(cls, tables) -> "UtilitySpec":
        parsed = []
        for table in tables:
            entries: dict[ActionSet, Fraction] = {}
            for action, value in table.items():
                act = make_action(action)
                val = as_fraction(value)
                if val < 0:
                    raise InstanceFormatError("utilities must be nonnegative")
                entries[act] = val
            if () not in entries:
                raise InstanceFormatError("tabular utility must define the empty action")
            parsed.append(entries)
        if not parsed:
            raise InstanceFormatError("tabular utility needs at least one state table")
        return cls(kind=UtilityKind.TABULAR, tabular=tuple(parsed))

    @property
    def num_states(self) -> int:
        if self.kind is UtilityKind.LINEAR:
            return len(self.linear)
        return len(self.tabular)

    def value(self, state: int, action: ActionSet) -> Fraction:
        """Utility of ``action`` in ``state``."""
        if self.kind is UtilityKind.LINEAR:
            row = self.linear[state]
            total = ZERO
            for e in action:
                if not 0 <= e < len(row):
                    raise InstanceFormatError(f"element index {e} out of range")
                total += row[e]
            return total
        table = self.tabular[state]
        try:
            return table[action]
        except KeyError:
            raise MissingTabularEntry(
                f"state {state} has no tabular value for action {action}"
            ) from None

    def singleton(self, state: int, element: int) -> Fraction:
        return self.value(state, (element,))


# --------------------------------------------------------------------------
# Constraint families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    """Independent sets are all subsets of size at most k."""

    k: int


@dataclass(frozen=True)
class Partition:
    """Blocks partition the ground set; at most caps[b] elements per block."""

    blocks: tuple[tuple[int, ...], ...]
    caps: tuple[int, ...]


@dataclass(frozen=True)
class Graphic:
    """Elements are edges of a multigraph; independent sets are acyclic."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]  # edges[e] = (u, v) for element e


@dataclass(frozen=True)
class OracleMatroid:
    """Matroid given only through a registered independence callable."""

    oracle_id: str


@dataclass(frozen=True)
class PathGraph:
    """Directed graph; feasible actions are simple source-sink paths (min sense)."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]  # edges[e] = (tail, head) for element e
    source: int
    sink: int


Constraint = Uniform | Partition | Graphic | OracleMatroid | PathGraph

MATROID_KINDS = (Uniform, Partition, Graphic, OracleMatroid)


def _validate_constraint(constraint: Constraint, n: int) -> None:
    if isinstance(constraint, Uniform):
        if not 1 <= constraint.k <= n:
            raise InstanceFormatError(f"uniform cap k={constraint.k} outside 1..{n}")
    elif isinstance(constraint, Partition):
        seen: set[int] = set()
        for block in constraint.blocks:
            for e in block:
                if e in seen:
                    raise InstanceFormatError(f"element {e} appears in two blocks")
                seen.add(e)
        if seen != set(range(n)):
            raise InstanceFormatError("partition blocks must cover the ground set exactly")
        if len(constraint.caps) != len(constraint.blocks):
            raise InstanceFormatError("one cap per block required")
        if any(c < 1 for c in constraint.caps):
            raise InstanceFormatError("partition caps must be positive")
    elif isinstance(constraint, Graphic):
        if len(constraint.edges) != n:
            raise InstanceFormatError("graphic constraint needs one edge per element")
        for u, v in constraint.edges:
            if not (0 <= u < constraint.num_vertices and 0 <= v < constraint.num_vertices):
                raise InstanceFormatError("edge endpoint out of range")
    elif isinstance(constraint, OracleMatroid):
        if not constraint.oracle_id:
            raise InstanceFormatError("oracle matroid needs a nonempty id")
    elif isinstance(constraint, PathGraph):
        if len(constraint.edges) != n:
            raise InstanceFormatError("path constraint needs one edge per element")
        V = constraint.num_vertices
        for u, v in constraint.edges:
            if not (0 <= u < V and 0 <= v < V):
                raise InstanceFormatError("edge endpoint out of range")
        if not (0 <= constraint.source < V and 0 <= constraint.sink < V):
            raise InstanceFormatError("source/sink out of range")
        if constraint.source == constraint.sink:
            raise InstanceFormatError("source and sink must differ")
        if not _sink_reachable(constraint):
            raise NoPath("no source-sink path exists")
    else:  # pragma: no cover - union exhausts the cases
        raise InstanceFormatError(f"unknown constraint {constraint!r}")


def _sink_reachable(spec: PathGraph) -> bool:
    adjacent: dict[int, list[int]] = {}
    for u, v in spec.edges:
        adjacent.setdefault(u, []).append(v)
    frontier = [spec.source]
    seen = {spec.source}
    while frontier:
        u = frontier.pop()
        for v in adjacent.get(u, ()):
            if v == spec.sink:
                return True
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return False


# --------------------------------------------------------------------------
# Instance
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    """A persuasion instance: prior, utilities for both players, feasible actions."""

    state_names: tuple[str, ...]
    prior: tuple[Fraction, ...]
    element_names: tuple[str, ...]
    sender: UtilitySpec
    receiver: UtilitySpec
    constraint: Constraint
    sense: Sense = Sense.MAX

    def __post_init__(self):
        n_states = len(self.state_names)
        n = len(self.element_names)
        if n_states == 0 or n == 0:
            raise InstanceFormatError("need at least one state and one element")
        if len(self.prior) != n_states:
            raise InstanceFormatError("prior length must match the number of states")
        if sum(self.prior, ZERO) != ONE:
            raise InstanceFormatError("prior must sum to exactly 1")
        if any(p <= 0 for p in self.prior):
            raise InstanceFormatError("prior must be strictly positive (strip zero states)")
        if len(set(self.state_names)) != n_states or len(set(self.element_names)) != n:
            raise InstanceFormatError("names must be unique")
        for util, who in ((self.sender, "sender"), (self.receiver, "receiver")):
            if util.num_states != n_states:
                raise InstanceFormatError(f"{who} utility has the wrong number of states")
            if util.kind is UtilityKind.LINEAR:
                if any(len(row) != n for row in util.linear):
                    raise InstanceFormatError(f"{who} linear utility has wrong width")
            else:
                if n > TABULAR_MAX_ELEMENTS:
                    raise InstanceFormatError(
                        f"tabular utilities capped at {TABULAR_MAX_ELEMENTS} elements"
                    )
                for table in util.tabular:
                    for action in table:
                        if action and (action[0] < 0 or action[-1] >= n):
                            raise InstanceFormatError("tabular action out of range")
        _validate_constraint(self.constraint, n)
        if self.sense is Sense.MIN and not isinstance(self.constraint, PathGraph):
            raise InstanceFormatError("minimization is only supported for path constraints")

    @property
    def num_states(self) -> int:
        return len(self.state_names)

    @property
    def num_elements(self) -> int:
        return len(self.element_names)


# --------------------------------------------------------------------------
# Posteriors and schemes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Posterior:
    """A distribution over states."""

    xi: tuple[Fraction, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.xi):
            raise InstanceFormatError("posterior entries must be nonnegative")
        if sum(self.xi, ZERO) != ONE:
            raise InstanceFormatError("posterior must sum to exactly 1")


@dataclass(frozen=True)
class SignalingScheme:
    """A direct scheme: per state, a distribution over recommended actions.

    ``phi`` maps (state index, action) to a probability; missing pairs are
    zero.  ``support`` lists every action that receives positive probability
    under some state.
    """

    num_states: int
    support: tuple[ActionSet, ...]
    phi: Mapping[tuple[int, ActionSet], Fraction] = field(compare=True)

    def __post_init__(self):
        support_set = set(self.support)
        if len(support_set) != len(self.support):
            raise InstanceFormatError("scheme support contains duplicates")
        totals = [ZERO] * self.num_states
        for (state, action), prob in self.phi.items():
            if not 0 <= state < self.num_states:
                raise InstanceFormatError(f"state index {state} out of range")
            if action not in support_set:
                raise InstanceFormatError(f"phi entry for non-support action {action}")
            if prob < 0:
                raise InstanceFormatError("scheme probabilities must be nonnegative")
            totals[state] += prob
        for state, total in enumerate(totals):
            if total != ONE:
                raise InstanceFormatError(
                    f"probabilities for state {state} sum to {total}, expected 1"
                )

    def prob(self, state: int, action: ActionSet) -> Fraction:
        return self.phi.get((state, action), ZERO)

    @classmethod
    def from_phi(cls, num_states: int, phi: Mapping[tuple[int, ActionSet], Fraction]):
        """Build a scheme from a raw map, dropping exact zeros and dead actions."""
        cleaned = {key: p for key, p in phi.items() if p != 0}
        support = tuple(sorted({action for (_, action) in cleaned}))
        return cls(num_states=num_states, support=support, phi=cleaned)


def deterministic_scheme(num_states: int, action: ActionSet) -> SignalingScheme:
    """The uninformative scheme that always recommends ``action``."""
    phi = {(state, action): ONE for state in range(num_states)}
    return SignalingScheme(num_states=num_states, support=(action,), phi=phi)


def signal_mass(instance: Instance, scheme: SignalingScheme, action: ActionSet) -> Fraction:
    """Total prior probability that ``action`` is recommended."""
    return sum(
        (instance.prior[s] * scheme.prob(s, action) for s in range(instance.num_states)),
        ZERO,
    )


def posterior(instance: Instance, scheme: SignalingScheme, action: ActionSet) -> Posterior:
    """Bayes-consistent belief over states conditioned on ``action`` being sent."""
    mass = signal_mass(instance, scheme, action)
    if mass == 0:
        raise ZeroMassSignal(f"action {action} is recommended with probability zero")
    xi = tuple(
        instance.prior[s] * scheme.prob(s, action) / mass for s in range(instance.num_states)
    )
    return Posterior(xi=xi)


def expected_value(utility: UtilitySpec, belief: Posterior, action: ActionSet) -> Fraction:
    """Expected utility of ``action`` under the belief."""
    if len(belief.xi) != utility.num_states:
        raise InstanceFormatError("belief dimension does not match the utility")
    total = ZERO
    for state, weight in enumerate(belief.xi):
        if weight != 0:
            total += weight * utility.value(state, action)
    return total
