"""Variable-by-variable solution of a decision problem by fusion.

Deleting a variable combines every valuation that bears on it, eliminates the
variable from the result and leaves all other valuations alone.  Deleting
variables in an order that only ever removes a minimal element of what is
left yields the maximum expected utility; the argmax tables recorded when
decisions are maximized out form an optimal strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import OperationCounter, SolutionTable, combine_many, eliminate
from .errors import DecisionUnderPotentialOnly, InvalidDeletionSequence, SolveError
from .model import DecisionProblem, Valuation, Variable, frame_size


@dataclass(frozen=True)
class DeletionSequence:
    order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))

    def __iter__(self):
        return iter(self.order)

    def __len__(self):
        return len(self.order)

    def __str__(self):
        return " ".join(self.order)


@dataclass(frozen=True)
class Strategy:
    tables: dict[str, SolutionTable] = field(default_factory=dict)

    def __getitem__(self, decision: str) -> SolutionTable:
        return self.tables[decision]


@dataclass(frozen=True)
class SolveReport:
    meu: float
    strategy: Strategy
    sequence: DeletionSequence
    counter: OperationCounter


def fuse(
    valuations: Sequence[Valuation],
    var: Variable,
    counter: OperationCounter,
    solutions: dict | None = None,
) -> list[Valuation]:
    """Delete ``var`` from a set of valuations.

    The fused valuation comes first in the returned list, followed by the
    untouched ones in their original order.
    """
    bearing = [v for v in valuations if v.bears_on(var.id)]
    rest = [v for v in valuations if not v.bears_on(var.id)]
    if not bearing:
        raise SolveError(f"no valuation bears on {var.id}")
    if var.is_decision and not any(v.is_utility for v in bearing):
        raise DecisionUnderPotentialOnly(
            f"decision {var.id} is borne only by potentials"
        )
    alpha = combine_many(bearing, counter)
    marginal, solution = eliminate(alpha, var, counter)
    if solution is not None and solutions is not None:
        solutions[var.id] = solution
    return [marginal] + rest


def candidate_next(problem: DecisionProblem, remaining: Iterable[str]) -> tuple[str, ...]:
    """Minimal elements of ``remaining`` under precedence, in declaration order."""
    ids = set(remaining)
    return tuple(
        v.id for v in problem.variables
        if v.id in ids and not any(problem.precedes(v.id, z) for z in ids if z != v.id)
    )


def one_step_look_ahead(problem: DecisionProblem) -> DeletionSequence:
    """Greedy sequence: next delete the candidate whose fusion spans the smallest frame.

    Only domains are tracked; no numbers are touched.
    """
    domains = [frozenset(v.domain) for v in problem.valuations]
    remaining = [v.id for v in problem.variables]
    order = []
    while remaining:
        best = None
        for var_id in candidate_next(problem, remaining):
            var = problem.variable(var_id)
            union = frozenset().union(*(d for d in domains if var in d))
            cost = frame_size(union)
            if best is None or cost < best[0]:
                best = (cost, var, union)
        _, var, union = best
        domains = [d for d in domains if var not in d] + [union - {var}]
        remaining.remove(var.id)
        order.append(var.id)
    return DeletionSequence(tuple(order))


def check_sequence(problem: DecisionProblem, sequence: Iterable[str]) -> DeletionSequence:
    order = tuple(sequence)
    names = [v.id for v in problem.variables]
    if sorted(order) != sorted(names):
        raise InvalidDeletionSequence(
            f"sequence {' '.join(order)} must list every variable exactly once"
        )
    for i, var_id in enumerate(order):
        later = order[i + 1 :]
        for other in later:
            if problem.precedes(var_id, other):
                raise InvalidDeletionSequence(
                    f"{var_id} deleted before {other}, but {var_id} precedes {other}"
                )
    return DeletionSequence(order)


def solve(problem: DecisionProblem, sequence: Iterable[str] | None = None) -> SolveReport:
    """Compute the maximum expected utility and an optimal strategy.

    ``problem`` is assumed to have passed :func:`vbsfusion.model.validate`.
    Without an explicit ``sequence`` the one-step-look-ahead order is used.
    """
    if sequence is None:
        seq = one_step_look_ahead(problem)
    else:
        seq = check_sequence(problem, sequence)
    counter = OperationCounter()
    solutions: dict[str, SolutionTable] = {}
    pool = list(problem.valuations)
    for var_id in seq:
        pool = fuse(pool, problem.variable(var_id), counter, solutions)
    final = combine_many(pool, counter)
    if final.domain:
        raise SolveError(f"variables left after deletion: {final.ids}")
    tables = {d.id: solutions[d.id] for d in problem.decisions}
    return SolveReport(float(final.table), Strategy(tables), seq, counter)
