"""Combination and marginalization of valuations, with operation counting.

Counting conventions (fixed so that totals are reproducible):

* combining two valuations costs one multiplication per entry of the result;
* eliminating a variable with ``m`` states costs ``m - 1`` additions (random)
  or comparisons (decision) per entry of the result;
* :func:`combine_many` always merges the pair whose union domain has the
  smallest frame, ties going to the earliest pair in list order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import NotASubset, NotAUtilityValuation, VariableNotInDomain
from .model import (
    EMPTY,
    POTENTIAL,
    UTILITY,
    Configuration,
    Valuation,
    Variable,
    canonical,
    frame_size,
)


@dataclass
class OperationCounter:
    additions: int = 0
    multiplications: int = 0
    comparisons: int = 0
    divisions: int = 0

    @property
    def total(self) -> int:
        return self.additions + self.multiplications + self.comparisons + self.divisions

    def as_dict(self) -> dict[str, int]:
        return {
            "additions": self.additions,
            "multiplications": self.multiplications,
            "comparisons": self.comparisons,
            "divisions": self.divisions,
        }

    def __str__(self):
        return (
            f"add {self.additions} mul {self.multiplications} "
            f"cmp {self.comparisons} div {self.divisions}"
        )


@dataclass(frozen=True, eq=False)
class SolutionTable:
    """Argmax record left behind when ``decision`` is maximized out.

    ``choices`` is an integer array shaped like the marginal's table, holding
    a state index of ``decision`` for every configuration of ``domain``.
    """

    decision: Variable
    domain: tuple[Variable, ...]
    choices: np.ndarray

    def __post_init__(self):
        choices = np.array(self.choices, dtype=np.intp).reshape(
            tuple(v.size for v in self.domain)
        )
        if choices.size and (choices.min() < 0 or choices.max() >= self.decision.size):
            raise ValueError(f"solution for {self.decision.id}: choice out of range")
        choices.setflags(write=False)
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "choices", choices)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.domain)

    def __call__(self, config: Configuration) -> int:
        states = config.as_dict()
        return int(self.choices[tuple(states[v.id] for v in self.domain)])

    def rows(self):
        """Yield ``(configuration, chosen state index)`` in row-major order."""
        for idx in np.ndindex(self.choices.shape):
            yield Configuration(self.domain, tuple(idx)), int(self.choices[idx])


def unit() -> Valuation:
    """The empty-domain potential with value 1."""
    return Valuation(POTENTIAL, (), np.array(1.0), name="1")


def project(x: Configuration, h: Iterable) -> Configuration:
    """Drop the coordinates of ``x`` outside ``h`` (ids or variables)."""
    wanted = {v.id if isinstance(v, Variable) else v for v in h}
    missing = wanted - set(x.ids)
    if missing:
        raise NotASubset(f"{sorted(missing)} not in configuration domain {x.ids}")
    if not wanted:
        return EMPTY
    pairs = [(v, s) for v, s in zip(x.domain, x.states) if v.id in wanted]
    return Configuration(tuple(v for v, _ in pairs), tuple(s for _, s in pairs))


def _expand(val: Valuation, domain: tuple[Variable, ...]) -> np.ndarray:
    # Insert size-1 axes for variables of ``domain`` missing from ``val``.
    present = set(val.domain)
    shape = tuple(v.size if v in present else 1 for v in domain)
    return val.table.reshape(shape)


def combine(a: Valuation, b: Valuation, counter: OperationCounter) -> Valuation:
    domain = canonical(a.domain + b.domain)
    table = _expand(a, domain) * _expand(b, domain)
    kind = UTILITY if (a.is_utility or b.is_utility) else POTENTIAL
    counter.multiplications += table.size
    return Valuation(kind, domain, table, name=f"{a.name}*{b.name}")


def _axis(alpha: Valuation, var: Variable | str) -> int:
    var_id = var.id if isinstance(var, Variable) else var
    for i, v in enumerate(alpha.domain):
        if v.id == var_id:
            return i
    raise VariableNotInDomain(f"{var_id} not in domain of {alpha!r}")


def marginalize_random(alpha: Valuation, var, counter: OperationCounter) -> Valuation:
    """Sum ``var`` out of ``alpha``; the result keeps ``alpha``'s kind."""
    axis = _axis(alpha, var)
    v = alpha.domain[axis]
    table = alpha.table.sum(axis=axis)
    counter.additions += table.size * (v.size - 1)
    domain = alpha.domain[:axis] + alpha.domain[axis + 1 :]
    return Valuation(alpha.kind, domain, table, name=f"{alpha.name}-{v.id}")


def marginalize_decision(
    alpha: Valuation, var, counter: OperationCounter
) -> tuple[Valuation, SolutionTable]:
    """Maximize ``var`` out of a utility valuation.

    Ties go to the earliest state in frame order.
    """
    if not alpha.is_utility:
        raise NotAUtilityValuation(f"cannot maximize over a potential ({alpha!r})")
    axis = _axis(alpha, var)
    v = alpha.domain[axis]
    choices = np.argmax(alpha.table, axis=axis)
    table = np.take_along_axis(alpha.table, np.expand_dims(choices, axis), axis=axis)
    table = np.squeeze(table, axis=axis)
    counter.comparisons += table.size * (v.size - 1)
    domain = alpha.domain[:axis] + alpha.domain[axis + 1 :]
    marginal = Valuation(alpha.kind, domain, table, name=f"{alpha.name}-{v.id}")
    return marginal, SolutionTable(v, domain, choices)


def eliminate(alpha: Valuation, var: Variable, counter: OperationCounter):
    """Marginalize ``var`` by the rule its kind calls for.

    Returns ``(marginal, solution)`` where solution is None for random variables.
    """
    if var.is_decision:
        return marginalize_decision(alpha, var, counter)
    return marginalize_random(alpha, var, counter), None


def ordered_marginal(
    alpha: Valuation,
    g: Iterable,
    closure,
    counter: OperationCounter,
    solutions: dict | None = None,
) -> Valuation:
    """Marginal of ``alpha`` for ``g`` respecting the precedence order.

    Variables of ``domain(alpha) - g`` are removed one at a time, each time
    taking a minimal element of what is left (earliest declared on ties).
    Solution tables for maximized decisions go into ``solutions`` if given.
    """
    keep = {v.id if isinstance(v, Variable) else v for v in g}
    missing = keep - set(alpha.ids)
    if missing:
        raise NotASubset(f"{sorted(missing)} not in domain of {alpha!r}")
    closure = set(closure)
    remaining = [v for v in alpha.domain if v.id not in keep]
    while remaining:
        ids = {v.id for v in remaining}
        var = next(
            v for v in remaining
            if not any((v.id, other) in closure for other in ids if other != v.id)
        )
        alpha, solution = eliminate(alpha, var, counter)
        if solution is not None and solutions is not None:
            solutions[var.id] = solution
        remaining.remove(var)
    return alpha


def combine_many(valuations: Sequence[Valuation], counter: OperationCounter) -> Valuation:
    if not valuations:
        raise ValueError("combine_many needs at least one valuation")
    pool = list(valuations)
    while len(pool) > 1:
        i, j = min(
            combinations(range(len(pool)), 2),
            key=lambda ij: (frame_size(set(pool[ij[0]].domain) | set(pool[ij[1]].domain)), ij),
        )
        pool[i] = combine(pool[i], pool[j], counter)
        del pool[j]
    return pool[0]
