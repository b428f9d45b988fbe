"""Shared generators and independent brute-force oracles for the test suite.

Every oracle here is written from the problem definitions directly (no reuse
of solver internals beyond plain LP plumbing), so agreement between solvers
and these oracles is meaningful evidence.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from combisig import lp, matroid
from combisig.model import (
    ActionSet,
    Graphic,
    Instance,
    OracleMatroid,
    Partition,
    PathGraph,
    Sense,
    Uniform,
    UtilitySpec,
)
from combisig.persuasion import enumerate_actions

F = Fraction
ZERO = F(0)


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------


def rand_partition_blocks(rng: random.Random, n: int):
    """Random consecutive blocks of size <= 3 with caps 1..block size."""
    blocks = []
    caps = []
    i = 0
    while i < n:
        size = min(rng.randint(1, 3), n - i)
        blocks.append(tuple(range(i, i + size)))
        caps.append(rng.randint(1, size))
        i += size
    return tuple(blocks), tuple(caps)


_ORACLE_SEQ = itertools.count()


def rand_matroid(rng: random.Random, n: int, kind: str):
    """A constraint of the requested kind on n elements.

    "oracle" wraps a random partition law behind a registered independence
    callable, exercising the oracle plumbing with a true matroid.
    """
    if kind == "uniform":
        return Uniform(rng.randint(1, max(1, n - 1)))
    if kind == "partition":
        blocks, caps = rand_partition_blocks(rng, n)
        return Partition(blocks, caps)
    if kind == "graphic":
        num_v = rng.randint(3, 5)
        pairs = list(itertools.combinations(range(num_v), 2))
        rng.shuffle(pairs)
        return Graphic(num_v, tuple(sorted(pairs[:n])))
    if kind == "oracle":
        blocks, caps = rand_partition_blocks(rng, n)
        oracle_id = f"tests-partition-{next(_ORACLE_SEQ)}"

        def is_independent(subset, _blocks=blocks, _caps=caps):
            chosen = set(subset)
            return all(
                sum(1 for e in blk if e in chosen) <= cap
                for blk, cap in zip(_blocks, _caps)
            )

        matroid.register_independence_oracle(oracle_id, is_independent)
        return OracleMatroid(oracle_id)
    raise ValueError(kind)


def rand_utility(rng: random.Random, n_states: int, n: int, lo=1, hi=9) -> UtilitySpec:
    return UtilitySpec.from_linear(
        [[F(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n_states)]
    )


def rand_prior(rng: random.Random, n_states: int):
    weights = [rng.randint(1, 9) for _ in range(n_states)]
    total = sum(weights)
    return tuple(F(w, total) for w in weights)


def rand_instance(
    rng: random.Random,
    n_states: int,
    n: int,
    kind: str = "uniform",
    sense: Sense = Sense.MAX,
    lo: int = 1,
    hi: int = 9,
) -> Instance:
    if sense is Sense.MIN:
        constraint = layered_path_graph(rng, n)
        n = len(constraint.edges)
    else:
        constraint = rand_matroid(rng, n, kind)
        if isinstance(constraint, Graphic):
            n = len(constraint.edges)
    return Instance(
        state_names=tuple(f"s{t}" for t in range(n_states)),
        prior=rand_prior(rng, n_states),
        element_names=tuple(f"e{i}" for i in range(n)),
        sender=rand_utility(rng, n_states, n, lo, hi),
        receiver=rand_utility(rng, n_states, n, lo, hi),
        constraint=constraint,
        sense=sense,
    )


def layered_path_graph(rng: random.Random, n: int) -> PathGraph:
    """A two-hop digraph: source -> {mid_1..mid_w} -> sink, 2w <= n edges."""
    width = max(1, min(n // 2, 3))
    edges = []
    for j in range(width):
        edges.append((0, 1 + j))
        edges.append((1 + j, 1 + width))
    return PathGraph(num_vertices=width + 2, edges=tuple(edges), source=0, sink=width + 1)


def rand_clean_instance(
    rng: random.Random,
    n_states: int,
    n: int,
    kind: str,
    max_tries: int = 200,
    lo: int = 1,
    hi: int = 9,
) -> Instance:
    from combisig.best_response import check_nondegeneracy

    for _ in range(max_tries):
        inst = rand_instance(rng, n_states, n, kind, lo=lo, hi=hi)
        if check_nondegeneracy(inst).clean:
            return inst
    raise AssertionError(f"no clean instance found for kind={kind}, n={n}")


# ---------------------------------------------------------------------------
# coverage-style submodular sender (for the 1/2-greedy oracle)
# ---------------------------------------------------------------------------


def coverage_instance(
    rng: random.Random, n: int, n_states: int, universe: int = 5
) -> Instance:
    """Tabular weighted-coverage sender (monotone submodular), linear receiver."""
    weights = [
        [F(rng.randint(1, 5)) for _ in range(universe)] for _ in range(n_states)
    ]
    covers = [
        frozenset(rng.sample(range(universe), rng.randint(1, universe)))
        for _ in range(n)
    ]
    tables = [{} for _ in range(n_states)]
    for subset_size in range(n + 1):
        for subset in itertools.combinations(range(n), subset_size):
            covered = frozenset().union(*(covers[e] for e in subset)) if subset else frozenset()
            for t in range(n_states):
                tables[t][subset] = sum((weights[t][u] for u in covered), start=ZERO)
    sender = UtilitySpec.from_tabular(tables)
    return Instance(
        state_names=tuple(f"s{t}" for t in range(n_states)),
        prior=rand_prior(rng, n_states),
        element_names=tuple(f"e{i}" for i in range(n)),
        sender=sender,
        receiver=rand_utility(rng, n_states, n),
        constraint=Uniform(rng.randint(1, max(1, n - 1))),
    )


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------


def maximal_actions(instance: Instance) -> list[ActionSet]:
    actions = enumerate_actions(instance.constraint, instance.num_elements)
    pool = set(actions)
    out = []
    for S in actions:
        grown = any(
            tuple(sorted(S + (e,))) in pool
            for e in range(instance.num_elements)
            if e not in S
        )
        if not grown:
            out.append(S)
    return out


def brute_weak_optimal_actions(instance: Instance) -> set[ActionSet]:
    """I* by definition: S with some belief making it weakly receiver-optimal.

    With strictly positive utilities only maximal independent sets can be
    weakly optimal, and it is enough to test against other maximal sets.
    Membership is a feasibility LP over the belief simplex.
    """
    assert instance.sense is Sense.MAX
    bases = maximal_actions(instance)
    D = instance.num_states
    r = instance.receiver.value
    winners: set[ActionSet] = set()
    for S in bases:
        model = lp.LPModel(D, sense=lp.MAX)
        model.set_objective([ZERO] * D)
        model.add_row({t: F(1) for t in range(D)}, lp.EQ, 1)
        for other in bases:
            if other == S:
                continue
            model.add_row(
                {t: r(t, S) - r(t, other) for t in range(D)}, lp.GE, 0
            )
        if lp.feasibility(model).status == lp.OPTIMAL:
            winners.add(S)
    return winners


def brute_cce_value(instance: Instance, actions: list[ActionSet] | None = None):
    """Direct LP for the relaxed (aggregate-obedience) problem.

    Variables phi[t, S]; per-state masses sum to one; a single row forcing
    the prior-expected receiver value of following the scheme to beat the
    best fixed action under the prior.
    """
    from combisig.cce import prior_best_value

    if actions is None:
        actions = enumerate_actions(instance.constraint, instance.num_elements)
    maximize = instance.sense is Sense.MAX
    D = instance.num_states
    C, _ = prior_best_value(instance)
    labels = [(t, S) for t in range(D) for S in actions]
    index = {lab: i for i, lab in enumerate(labels)}
    model = lp.LPModel(len(labels), sense=lp.MAX if maximize else lp.MIN, labels=labels)
    model.set_objective(
        [instance.prior[t] * instance.sender.value(t, S) for (t, S) in labels]
    )
    model.add_row(
        {
            index[(t, S)]: instance.prior[t] * instance.receiver.value(t, S)
            for (t, S) in labels
        },
        lp.GE if maximize else lp.LE,
        C,
    )
    for t in range(D):
        model.add_row({index[(t, S)]: F(1) for S in actions}, lp.EQ, 1)
    result = lp.solve(model)
    assert result.status == lp.OPTIMAL
    return result.value


def sweep_weak_optimal_2state(instance: Instance) -> set[ActionSet]:
    """Exact 1-D sweep oracle for two-state instances.

    Beliefs are (1-t, t).  Expected action values are linear in t, so the
    weak-argmax correspondence only changes at pairwise crossing points;
    sampling every breakpoint and every midpoint between consecutive
    breakpoints observes every weak argmax, including endpoint and
    crossing ties.
    """
    assert instance.num_states == 2 and instance.sense is Sense.MAX
    bases = maximal_actions(instance)
    r = instance.receiver.value
    lines = {S: (r(0, S), r(1, S) - r(0, S)) for S in bases}  # value = a + b t

    points = {F(0), F(1)}
    for (a1, b1), (a2, b2) in itertools.combinations(lines.values(), 2):
        if b1 != b2:
            t = F(a2 - a1, b1 - b2)
            if 0 <= t <= 1:
                points.add(t)
    ordered = sorted(points)
    probes = list(ordered)
    for lo, hi in zip(ordered, ordered[1:]):
        probes.append((lo + hi) / 2)

    winners: set[ActionSet] = set()
    for t in probes:
        values = {S: a + b * t for S, (a, b) in lines.items()}
        best = max(values.values())
        winners.update(S for S, v in values.items() if v == best)
    return winners
