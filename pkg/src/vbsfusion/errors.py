"""Exception hierarchy shared by every layer of the solver."""

from __future__ import annotations


class VBSError(Exception):
    """Base class for all model, algebra and solver errors."""


class ModelError(VBSError):
    """A decision problem fails a structural or numeric check."""


class UnknownVariable(ModelError):
    pass


class InvalidValuation(ModelError):
    pass


class CyclicPrecedence(ModelError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cyclic precedence: " + " -> ".join(self.cycle))


class PerfectRecallViolation(ModelError):
    def __init__(self, decision, random):
        self.pair = (decision, random)
        super().__init__(
            f"perfect recall violated: {decision} and {random} are incomparable"
        )


class CoverageError(ModelError):
    """Utility valuations miss a decision, or potentials miss a random variable."""


class NotWellDefined(ModelError):
    def __init__(self, config, total):
        self.config = dict(config)
        self.total = total
        where = ", ".join(f"{k}={v}" for k, v in self.config.items()) or "<empty>"
        super().__init__(
            f"joint potential is not normalized at ({where}): sum = {total:.12g}"
        )


class AlgebraError(VBSError):
    pass


class NotASubset(AlgebraError):
    pass


class VariableNotInDomain(AlgebraError):
    pass


class NotAUtilityValuation(AlgebraError):
    pass


class SolveError(VBSError):
    pass


class InvalidDeletionSequence(SolveError):
    pass


class DecisionUnderPotentialOnly(SolveError):
    pass


class StrategySpaceTooLarge(SolveError):
    pass


class UnresolvableTable(SolveError):
    pass


class ParseError(VBSError):
    def __init__(self, message, line=None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
