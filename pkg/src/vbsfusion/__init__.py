"""Fusion solver for symmetric Bayesian decision problems in valuation form."""

from .algebra import (
    OperationCounter,
    SolutionTable,
    combine,
    combine_many,
    marginalize_decision,
    marginalize_random,
    ordered_marginal,
    project,
)
from .errors import *  # noqa: F401,F403
from .fusion import (
    DeletionSequence,
    SolveReport,
    Strategy,
    candidate_next,
    fuse,
    one_step_look_ahead,
    solve,
)
from .io import load_model, parse_model, serialize
from .model import (
    Configuration,
    DecisionProblem,
    PrecedenceRelation,
    Valuation,
    Variable,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "OperationCounter", "SolutionTable", "combine", "combine_many",
    "marginalize_decision", "marginalize_random", "ordered_marginal", "project",
    "DeletionSequence", "SolveReport", "Strategy", "candidate_next", "fuse",
    "one_step_look_ahead", "solve", "load_model", "parse_model", "serialize",
    "Configuration", "DecisionProblem", "PrecedenceRelation", "Valuation",
    "Variable", "validate",
]
