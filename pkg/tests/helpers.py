"""Random well-defined decision problems for property tests."""

from __future__ import annotations

import numpy as np

from vbsfusion.model import (
    DECISION,
    POTENTIAL,
    RANDOM,
    UTILITY,
    DecisionProblem,
    PrecedenceRelation,
    Valuation,
    Variable,
    canonical,
)


def random_problem(rng: np.random.Generator, max_vars: int = 5, max_decisions: int = 2) -> DecisionProblem:
    """Binary variables; decisions and randoms interleaved along a random timeline.

    Every decision/random pair gets an arc in timeline order, so perfect
    recall holds.  Random variables get conditional tables whose parents are
    earlier on the timeline, which keeps the joint potential normalized for
    every decision configuration.  Utilities are non-negative so they may be
    split into several multiplicative factors.
    """
    n = int(rng.integers(1, max_vars + 1))
    k = int(rng.integers(0, min(max_decisions, n) + 1))
    kinds = [DECISION] * k + [RANDOM] * (n - k)
    rng.shuffle(kinds)
    variables = tuple(
        Variable(f"X{i}", kind, ("a", "b"), i) for i, kind in enumerate(kinds)
    )
    timeline = list(rng.permutation(n))
    pos = {v: timeline.index(v.index) for v in variables}
    arcs = set()
    for d in variables:
        if not d.is_decision:
            continue
        for r in variables:
            if r.is_decision:
                continue
            arcs.add((d.id, r.id) if pos[d] < pos[r] else (r.id, d.id))
    # a few optional arcs that agree with the timeline
    for x in variables:
        for y in variables:
            if x is not y and pos[x] < pos[y] and rng.random() < 0.2:
                arcs.add((x.id, y.id))

    valuations = []
    for r in variables:
        if r.is_decision:
            continue
        earlier = [v for v in variables if pos[v] < pos[r]]
        parents = [v for v in earlier if rng.random() < 0.5][:2]
        domain = canonical(parents + [r])
        table = rng.random(tuple(v.size for v in domain)) + 0.05
        axis = domain.index(r)
        table = table / table.sum(axis=axis, keepdims=True)
        valuations.append(Valuation(POTENTIAL, domain, table, name=f"p{r.id}"))

    decisions = [v for v in variables if v.is_decision]
    randoms = [v for v in variables if not v.is_decision]
    n_util = 1 if not decisions else int(rng.integers(1, len(decisions) + 1))
    groups: list[list[Variable]] = [[] for _ in range(n_util)]
    for i, d in enumerate(decisions):
        groups[i % n_util].append(d)
    for r in randoms:
        if rng.random() < 0.6:
            groups[int(rng.integers(n_util))].append(r)
    for i, group in enumerate(groups):
        domain = canonical(group)
        table = rng.uniform(0, 10, tuple(v.size for v in domain))
        valuations.append(Valuation(UTILITY, domain, table, name=f"u{i}"))

    order = rng.permutation(len(valuations))
    return DecisionProblem(
        variables,
        tuple(valuations[i] for i in order),
        PrecedenceRelation(frozenset(arcs)),
    )


def all_sequences(problem: DecisionProblem):
    """Every valid deletion sequence (small problems only)."""
    from vbsfusion.fusion import candidate_next

    def rec(remaining, prefix):
        if not remaining:
            yield tuple(prefix)
            return
        for c in candidate_next(problem, remaining):
            yield from rec(remaining - {c}, prefix + [c])

    yield from rec(frozenset(v.id for v in problem.variables), [])
