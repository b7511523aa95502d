"""Decision problems: variables, frames, valuations and precedence.

A problem is built once and never edited afterwards.  Construction only
checks that every name resolves; the ordering, perfect-recall, coverage and
normalization checks live in :func:`validate` so that a broken model can
still be inspected (and reported on) before it is rejected.

Tables are numpy arrays with one axis per domain variable.  Domains are kept
in declaration order, so the C-order flattening of a table has the last
domain variable varying fastest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CoverageError,
    CyclicPrecedence,
    InvalidValuation,
    ModelError,
    NotWellDefined,
    PerfectRecallViolation,
    UnknownVariable,
)

DECISION = "decision"
RANDOM = "random"
UTILITY = "utility"
POTENTIAL = "potential"

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Variable:
    id: str
    kind: str
    frame: tuple[str, ...]
    index: int

    def __post_init__(self):
        if self.kind not in (DECISION, RANDOM):
            raise ModelError(f"variable {self.id}: unknown kind {self.kind!r}")
        if not self.frame:
            raise ModelError(f"variable {self.id}: empty frame")
        if len(set(self.frame)) != len(self.frame):
            raise ModelError(f"variable {self.id}: duplicate state labels")
        object.__setattr__(self, "frame", tuple(self.frame))

    @property
    def size(self) -> int:
        return len(self.frame)

    @property
    def is_decision(self) -> bool:
        return self.kind == DECISION

    def state_index(self, label: str) -> int:
        try:
            return self.frame.index(label)
        except ValueError:
            raise ModelError(f"{label!r} is not a state of {self.id}") from None


def canonical(variables: Iterable[Variable]) -> tuple[Variable, ...]:
    """Deduplicate and sort by declaration index."""
    return tuple(sorted(set(variables), key=lambda v: v.index))


def frame_size(variables: Iterable[Variable]) -> int:
    return math.prod(v.size for v in variables)


@dataclass(frozen=True)
class Configuration:
    """One element of the frame of ``domain``; ``Configuration()`` is the empty one."""

    domain: tuple[Variable, ...] = ()
    states: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.domain) != len(self.states):
            raise ModelError("configuration: one state per domain variable required")
        for v, s in zip(self.domain, self.states):
            if not 0 <= s < v.size:
                raise ModelError(f"configuration: state {s} out of range for {v.id}")
        if list(self.domain) != list(canonical(self.domain)):
            raise ModelError("configuration domain must be in declaration order")

    @classmethod
    def from_labels(cls, domain: Sequence[Variable], labels: Sequence[str]):
        pairs = sorted(zip(domain, labels), key=lambda p: p[0].index)
        return cls(
            tuple(v for v, _ in pairs),
            tuple(v.state_index(lab) for v, lab in pairs),
        )

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.domain)

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.ids, self.states))

    def labels(self) -> tuple[str, ...]:
        return tuple(v.frame[s] for v, s in zip(self.domain, self.states))

    def __str__(self):
        return " ".join(self.labels()) if self.domain else "<>"


EMPTY = Configuration()


@dataclass(frozen=True, eq=False)
class Valuation:
    """A utility valuation or a potential over ``domain``.

    ``table`` has shape ``tuple(v.size for v in domain)``; the empty domain
    gives a 0-d array.  The array is made read-only on construction.
    """

    kind: str
    domain: tuple[Variable, ...]
    table: np.ndarray
    name: str = ""

    def __post_init__(self):
        if self.kind not in (UTILITY, POTENTIAL):
            raise InvalidValuation(f"{self.name}: unknown valuation kind {self.kind!r}")
        domain = tuple(self.domain)
        if list(domain) != list(canonical(domain)):
            raise InvalidValuation(
                f"{self.name}: domain must list distinct variables in declaration order"
            )
        shape = tuple(v.size for v in domain)
        table = np.array(self.table, dtype=float)
        if table.size != math.prod(shape):
            raise InvalidValuation(
                f"{self.name}: expected {math.prod(shape)} values, got {table.size}"
            )
        table = table.reshape(shape)
        if not np.all(np.isfinite(table)):
            raise InvalidValuation(f"{self.name}: non-finite value")
        table.setflags(write=False)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "table", table)

    @property
    def is_utility(self) -> bool:
        return self.kind == UTILITY

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.domain)

    @property
    def values(self) -> list[float]:
        return self.table.ravel().tolist()

    def __len__(self):
        return self.table.size

    def __call__(self, config: Configuration) -> float:
        """Value at ``config``; extra coordinates in ``config`` are ignored."""
        states = config.as_dict()
        try:
            return float(self.table[tuple(states[v.id] for v in self.domain)])
        except KeyError as exc:
            raise ModelError(f"{self.name}: configuration lacks {exc.args[0]}") from None

    def bears_on(self, var_id: str) -> bool:
        return any(v.id == var_id for v in self.domain)

    def __repr__(self):
        return f"Valuation({self.kind}, {self.name or '?'} over {{{','.join(self.ids)}}})"


@dataclass(frozen=True)
class PrecedenceRelation:
    """Arcs ``(x, y)`` meaning x precedes y."""

    arcs: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        for x, y in self.arcs:
            if x == y:
                raise ModelError(f"self-arc on {x}")


@dataclass(frozen=True, eq=False)
class DecisionProblem:
    variables: tuple[Variable, ...]
    valuations: tuple[Valuation, ...]
    precedence: PrecedenceRelation = field(default_factory=PrecedenceRelation)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "valuations", tuple(self.valuations))
        seen: dict[str, Variable] = {}
        for i, v in enumerate(self.variables):
            if v.id in seen:
                raise ModelError(f"duplicate variable {v.id}")
            if v.index != i:
                raise ModelError(f"variable {v.id}: index {v.index} != position {i}")
            seen[v.id] = v
        for val in self.valuations:
            for v in val.domain:
                if seen.get(v.id) != v:
                    raise UnknownVariable(f"{val.name}: undeclared variable {v.id}")
        for x, y in self.precedence.arcs:
            for end in (x, y):
                if end not in seen:
                    raise UnknownVariable(f"precedence arc references undeclared {end}")
        if not any(val.is_utility for val in self.valuations):
            raise ModelError("a decision problem needs at least one utility valuation")

    @cached_property
    def by_id(self) -> dict[str, Variable]:
        return {v.id: v for v in self.variables}

    def variable(self, var_id: str) -> Variable:
        try:
            return self.by_id[var_id]
        except KeyError:
            raise UnknownVariable(f"unknown variable {var_id}") from None

    @property
    def decisions(self) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if v.is_decision)

    @property
    def randoms(self) -> tuple[Variable, ...]:
        return tuple(v for v in self.variables if not v.is_decision)

    @property
    def utilities(self) -> tuple[Valuation, ...]:
        return tuple(v for v in self.valuations if v.is_utility)

    @property
    def potentials(self) -> tuple[Valuation, ...]:
        return tuple(v for v in self.valuations if not v.is_utility)

    @cached_property
    def closure(self) -> frozenset[tuple[str, str]]:
        return transitive_closure(self.precedence, self.variables)

    def precedes(self, x: str, y: str) -> bool:
        return (x, y) in self.closure

    @property
    def q(self) -> tuple[Variable, ...]:
        """Decision variables in the domain of the joint potential."""
        return canonical(v for p in self.potentials for v in p.domain if v.is_decision)

    @property
    def p(self) -> tuple[Variable, ...]:
        """Random variables in the domain of the joint utility."""
        return canonical(v for u in self.utilities for v in u.domain if not v.is_decision)


def transitive_closure(precedence: PrecedenceRelation, variables) -> frozenset:
    ids = [v.id if isinstance(v, Variable) else v for v in variables]
    succ = {x: set() for x in ids}
    for x, y in precedence.arcs:
        succ.setdefault(x, set()).add(y)
        succ.setdefault(y, set())
    # Warshall
    for k in succ:
        for i in succ:
            if k in succ[i]:
                succ[i] |= succ[k]
    return frozenset((x, y) for x, ys in succ.items() for y in ys)


def validate_partial_order(closure) -> None:
    closure = set(closure)
    for x, y in sorted(closure):
        if x == y:
            for a, b in sorted(closure):
                if a == x and b != x and (b, x) in closure:
                    raise CyclicPrecedence([x, b, x])
            raise CyclicPrecedence([x, x])


def check_perfect_recall(closure, variables) -> None:
    closure = set(closure)
    for d in variables:
        if not d.is_decision:
            continue
        for r in variables:
            if r.is_decision:
                continue
            if (d.id, r.id) not in closure and (r.id, d.id) not in closure:
                raise PerfectRecallViolation(d.id, r.id)


def predecessors(problem: DecisionProblem, decision: str) -> tuple[Variable, ...]:
    """Random variables observed before ``decision`` is taken."""
    d = problem.variable(decision)
    if not d.is_decision:
        raise ModelError(f"{decision} is not a decision variable")
    return tuple(r for r in problem.randoms if problem.precedes(r.id, decision))


def check_coverage(problem: DecisionProblem) -> None:
    in_util = {v.id for u in problem.utilities for v in u.domain}
    in_pot = {v.id for p in problem.potentials for v in p.domain}
    for d in problem.decisions:
        if d.id not in in_util:
            raise CoverageError(f"decision {d.id} is not in any utility valuation")
    for r in problem.randoms:
        if r.id not in in_pot:
            raise CoverageError(f"random variable {r.id} is not in any potential")


def check_ranges(problem: DecisionProblem) -> None:
    for p in problem.potentials:
        if np.any(p.table < 0) or np.any(p.table > 1):
            raise InvalidValuation(f"potential {p.name}: values must lie in [0, 1]")
    utils = problem.utilities
    # max does not distribute over a product with a negative factor
    if len(utils) > 1:
        for u in utils:
            if np.any(u.table < 0):
                raise InvalidValuation(
                    f"utility {u.name}: multiplicative utility factors must be non-negative"
                )


def check_well_defined(problem: DecisionProblem, tolerance: float = DEFAULT_TOLERANCE) -> None:
    """Raise :class:`NotWellDefined` unless the joint potential sums to one.

    The joint potential is materialized, so cost is exponential in the
    number of variables it spans.
    """
    from .algebra import OperationCounter, combine_many, unit

    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    pots = list(problem.potentials) or [unit()]
    joint = combine_many(pots, OperationCounter())
    axes = tuple(i for i, v in enumerate(joint.domain) if not v.is_decision)
    decisions = tuple(v for v in joint.domain if v.is_decision)
    sums = joint.table.sum(axis=axes) if axes else joint.table
    sums = np.asarray(sums).reshape(tuple(v.size for v in decisions))
    for idx in np.ndindex(sums.shape):
        total = float(sums[idx])
        if abs(total - 1.0) > tolerance:
            config = {v.id: v.frame[s] for v, s in zip(decisions, idx)}
            raise NotWellDefined(config, total)


def validate(
    problem: DecisionProblem,
    *,
    well_defined: bool = True,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DecisionProblem:
    """Run every structural check, raising the first failure."""
    validate_partial_order(problem.closure)
    check_perfect_recall(problem.closure, problem.variables)
    check_coverage(problem)
    check_ranges(problem)
    if well_defined:
        check_well_defined(problem, tolerance)
    return problem


def diagnose(problem: DecisionProblem, tolerance: float = DEFAULT_TOLERANCE):
    """Run every check independently; yield ``(name, error or None)``."""
    checks = [
        ("partial order", lambda: validate_partial_order(problem.closure)),
        ("perfect recall", lambda: check_perfect_recall(problem.closure, problem.variables)),
        ("coverage", lambda: check_coverage(problem)),
        ("value ranges", lambda: check_ranges(problem)),
        ("well-defined", lambda: check_well_defined(problem, tolerance)),
    ]
    for name, run in checks:
        try:
            run()
        except ModelError as exc:
            yield name, exc
        else:
            yield name, None
