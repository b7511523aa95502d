"""Reference solvers used to cross-check fusion.

Two routes that share nothing with :mod:`vbsfusion.fusion`:

* brute force: enumerate every strategy, score each by summing
  probability times utility over all random configurations, keep the best;
* global: combine everything into one table and marginalize it down to the
  empty set in precedence order.

Both are exponential and meant for small test problems only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import OperationCounter, combine, ordered_marginal
from .errors import StrategySpaceTooLarge, UnresolvableTable
from .fusion import Strategy
from .model import Configuration, DecisionProblem, Variable, predecessors

STRATEGY_CAP = 10**6


@dataclass(frozen=True)
class ExplicitStrategy:
    """One decision rule per decision variable.

    ``rules[d]`` is ``(predecessor variables, choices)`` where ``choices`` holds
    the act taken for each predecessor configuration in row-major order.
    """

    rules: dict[str, tuple[tuple[Variable, ...], tuple[int, ...]]]

    def choose(self, decision: str, y: Configuration) -> int:
        preds, choices = self.rules[decision]
        states = y.as_dict()
        return choices[_row_index(preds, [states[v.id] for v in preds])]


def _row_index(variables, states) -> int:
    idx = 0
    for v, s in zip(variables, states):
        idx = idx * v.size + s
    return idx


def _random_configs(problem: DecisionProblem) -> Iterator[Configuration]:
    randoms = problem.randoms
    for states in itertools.product(*(range(v.size) for v in randoms)):
        yield Configuration(randoms, states)


def strategy_space_size(problem: DecisionProblem) -> int:
    total = 1
    for d in problem.decisions:
        total *= d.size ** math.prod(v.size for v in predecessors(problem, d.id))
    return total


def enumerate_strategies(problem: DecisionProblem, cap: int = STRATEGY_CAP) -> list[ExplicitStrategy]:
    """Every strategy once, decisions in declaration order, last decision fastest."""
    n = strategy_space_size(problem)
    if n > cap:
        raise StrategySpaceTooLarge(f"{n} strategies exceed the cap of {cap}")
    per_decision = []
    for d in problem.decisions:
        preds = predecessors(problem, d.id)
        rows = math.prod(v.size for v in preds)
        per_decision.append(
            [(d.id, preds, rule) for rule in itertools.product(range(d.size), repeat=rows)]
        )
    return [
        ExplicitStrategy({d: (preds, rule) for d, preds, rule in combo})
        for combo in itertools.product(*per_decision)
    ]


def induced_decision_config(problem: DecisionProblem, strategy: ExplicitStrategy, y: Configuration) -> Configuration:
    """The acts ``strategy`` takes when the random variables come out as ``y``."""
    decisions = problem.decisions
    return Configuration(decisions, tuple(strategy.choose(d.id, y) for d in decisions))


def _joint_tables(problem: DecisionProblem) -> tuple[np.ndarray, np.ndarray]:
    # Dense joint potential and joint utility over all variables, built by
    # direct broadcasting rather than through the algebra module.
    shape = tuple(v.size for v in problem.variables)
    pot = np.ones(shape)
    util = np.ones(shape)
    for val in problem.valuations:
        present = {v.index for v in val.domain}
        expanded = val.table.reshape(
            tuple(v.size if v.index in present else 1 for v in problem.variables)
        )
        if val.is_utility:
            util = util * expanded
        else:
            pot = pot * expanded
    return pot, util


def _score(problem: DecisionProblem, decide) -> float:
    """Sum of probability times utility, with decisions given by ``decide(y)``."""
    pot, util = _joint_tables(problem)
    total = 0.0
    for y in _random_configs(problem):
        a = decide(y)
        full = {**y.as_dict(), **a.as_dict()}
        idx = tuple(full[v.id] for v in problem.variables)
        total += pot[idx] * util[idx]
    return float(total)


def expected_utility(problem: DecisionProblem, strategy: ExplicitStrategy) -> float:
    return _score(problem, lambda y: induced_decision_config(problem, strategy, y))


def strategy_values(problem: DecisionProblem, cap: int = STRATEGY_CAP) -> np.ndarray:
    """Expected utility of every strategy, in :func:`enumerate_strategies` order.

    Vectorized over the strategy grid; scoring matches :func:`expected_utility`.
    """
    n = strategy_space_size(problem)
    if n > cap:
        raise StrategySpaceTooLarge(f"{n} strategies exceed the cap of {cap}")
    pot, util = _joint_tables(problem)
    weight = pot * util
    decisions = problem.decisions
    randoms = problem.randoms
    ys = list(itertools.product(*(range(v.size) for v in randoms)))
    # act index per decision, per rule, per random configuration
    grids = []
    for d in decisions:
        preds = predecessors(problem, d.id)
        rows = math.prod(v.size for v in preds)
        rules = np.array(list(itertools.product(range(d.size), repeat=rows)), dtype=np.intp)
        rules = rules.reshape(-1, rows)
        pos = [randoms.index(v) for v in preds]
        row_of_y = np.array([_row_index(preds, [y[i] for i in pos]) for y in ys], dtype=np.intp)
        grids.append(rules[:, row_of_y])
    k = len(decisions)
    acts = []
    for i, g in enumerate(grids):
        shape = [1] * k + [len(ys)]
        shape[i] = g.shape[0]
        acts.append(g.reshape(shape))
    grid_shape = tuple(g.shape[0] for g in grids) + (len(ys),)
    index = [None] * len(problem.variables)
    for d, a in zip(decisions, acts):
        index[d.index] = np.broadcast_to(a, grid_shape)
    ys_arr = np.array(ys, dtype=np.intp).reshape(len(ys), len(randoms))
    for j, r in enumerate(randoms):
        index[r.index] = np.broadcast_to(ys_arr[:, j], grid_shape)
    values = weight[tuple(index)] if index else np.broadcast_to(weight, grid_shape)
    return values.sum(axis=-1).reshape(-1)


def brute_force_solve(problem: DecisionProblem, cap: int = STRATEGY_CAP) -> tuple[float, ExplicitStrategy]:
    """Best strategy by exhaustive search; ties go to the first enumerated."""
    values = strategy_values(problem, cap)
    best = int(np.argmax(values))
    strategies = enumerate_strategies(problem, cap)
    return float(values[best]), strategies[best]


def global_solve(problem: DecisionProblem) -> float:
    """Combine every valuation, then marginalize to the empty set."""
    counter = OperationCounter()
    vals = list(problem.valuations)
    joint = vals[0]
    for v in vals[1:]:
        joint = combine(joint, v, counter)
    return float(ordered_marginal(joint, (), problem.closure, counter).table)


def evaluate_strategy(problem: DecisionProblem, strategy: Strategy) -> float:
    """Expected utility of executing fusion-produced solution tables.

    Decisions are resolved as soon as every decision their table reads has
    been fixed, so tables whose domains mention other decisions work too.
    """
    tables = strategy.tables
    missing = {d.id for d in problem.decisions} - set(tables)
    if missing:
        raise UnresolvableTable(f"no table for {sorted(missing)}")

    def decide(y: Configuration) -> Configuration:
        known = y.as_dict()
        pending = [d for d in problem.decisions]
        while pending:
            ready = [
                d for d in pending
                if all(v.id in known for v in tables[d.id].domain)
            ]
            if not ready:
                raise UnresolvableTable(
                    f"tables for {[d.id for d in pending]} depend on undecided variables"
                )
            for d in ready:
                t = tables[d.id]
                known[d.id] = int(t.choices[tuple(known[v.id] for v in t.domain)])
                pending.remove(d)
        decisions = problem.decisions
        return Configuration(decisions, tuple(known[d.id] for d in decisions))

    return _score(problem, decide)
