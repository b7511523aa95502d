"""Line-oriented text format for decision problems.

::

    # comment
    variable B random b ~b
    variable T decision t ~t
    precede B T
    utility pi over T D values 10 5 0 10
    potential rho over D values .1 .9

Valuation domains must be listed in declaration order; values are row-major
with the last listed variable varying fastest.  A valuation's values may run
on over following lines that hold nothing but numbers.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import ModelError, ParseError
from .model import (
    DECISION,
    POTENTIAL,
    RANDOM,
    UTILITY,
    DecisionProblem,
    PrecedenceRelation,
    Valuation,
    Variable,
    validate,
)

FIXTURES = ("diabetes", "medical")


def _number(token: str, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", lineno) from None


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _strip(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def parse_model(text: str, *, check: bool = True, well_defined: bool = False) -> DecisionProblem:
    """Parse ``text`` into a problem.

    With ``check`` the structural validations run (well-definedness too if
    ``well_defined``); their errors are re-raised unchanged.
    """
    variables: dict[str, Variable] = {}
    arcs: list[tuple[str, str]] = []
    valuations: list[Valuation] = []
    names: set[str] = set()
    pending = None  # [kind, name, domain, values, expected, lineno]

    def finish():
        nonlocal pending
        if pending is None:
            return
        kind, name, domain, values, expected, lineno = pending
        if len(values) != expected:
            raise ParseError(f"{name}: expected {expected} values, got {len(values)}", lineno)
        try:
            valuations.append(Valuation(kind, tuple(domain), values, name=name))
        except ModelError as exc:
            raise ParseError(str(exc), lineno) from None
        pending = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _strip(raw)
        if not tokens:
            continue
        if pending is not None and all(_is_number(t) for t in tokens):
            pending[3].extend(_number(t, lineno) for t in tokens)
            continue
        finish()
        head, args = tokens[0], tokens[1:]
        if head == "variable":
            if len(args) < 3:
                raise ParseError("usage: variable <id> decision|random <state>...", lineno)
            var_id, kind, frame = args[0], args[1], args[2:]
            if kind not in (DECISION, RANDOM):
                raise ParseError(f"variable kind must be decision or random, got {kind!r}", lineno)
            if var_id in variables:
                raise ParseError(f"duplicate variable {var_id}", lineno)
            try:
                variables[var_id] = Variable(var_id, kind, tuple(frame), len(variables))
            except ModelError as exc:
                raise ParseError(str(exc), lineno) from None
        elif head == "precede":
            if len(args) != 2:
                raise ParseError("usage: precede <X> <Y>", lineno)
            for a in args:
                if a not in variables:
                    raise ParseError(f"undeclared variable {a}", lineno)
            if args[0] == args[1]:
                raise ParseError(f"self-arc on {args[0]}", lineno)
            arcs.append((args[0], args[1]))
        elif head in (UTILITY, POTENTIAL):
            if len(args) < 2 or args[1] != "over":
                raise ParseError(f"usage: {head} <name> over <vars>... values <reals>...", lineno)
            name = args[0]
            if name in names:
                raise ParseError(f"duplicate valuation name {name}", lineno)
            names.add(name)
            rest = args[2:]
            if "values" not in rest:
                raise ParseError(f"{name}: missing 'values'", lineno)
            cut = rest.index("values")
            domain = []
            for var_id in rest[:cut]:
                if var_id not in variables:
                    raise ParseError(f"{name}: undeclared variable {var_id}", lineno)
                domain.append(variables[var_id])
            if len(set(domain)) != len(domain):
                raise ParseError(f"{name}: repeated variable in domain", lineno)
            if domain != sorted(domain, key=lambda v: v.index):
                raise ParseError(f"{name}: domain must follow declaration order", lineno)
            expected = 1
            for v in domain:
                expected *= v.size
            values = [_number(t, lineno) for t in rest[cut + 1 :]]
            pending = [head, name, domain, values, expected, lineno]
        else:
            raise ParseError(f"unknown statement {head!r}", lineno)
    finish()

    try:
        problem = DecisionProblem(
            tuple(variables.values()), tuple(valuations), PrecedenceRelation(frozenset(arcs))
        )
    except ModelError as exc:
        raise ParseError(str(exc)) from None
    if check:
        validate(problem, well_defined=well_defined)
    return problem


def _fmt(x: float) -> str:
    return repr(float(x))


def serialize(problem: DecisionProblem) -> str:
    lines = []
    for v in problem.variables:
        lines.append(f"variable {v.id} {v.kind} {' '.join(v.frame)}")
    for x, y in sorted(
        problem.precedence.arcs,
        key=lambda a: (problem.variable(a[0]).index, problem.variable(a[1]).index),
    ):
        lines.append(f"precede {x} {y}")
    for i, val in enumerate(problem.valuations):
        name = val.name or f"v{i}"
        lines.append(
            f"{val.kind} {name} over {' '.join(val.ids)} values "
            + " ".join(_fmt(x) for x in val.values)
        )
    return "\n".join(lines) + "\n"


def fixture_path(name: str) -> Path:
    """Path of a bundled model (``diabetes`` or ``medical``)."""
    stem = name[:-4] if name.endswith(".vbs") else name
    if stem not in FIXTURES:
        raise FileNotFoundError(name)
    return Path(str(resources.files("vbsfusion") / "data" / f"{stem}.vbs"))


def load_model(path, **kwargs) -> DecisionProblem:
    """Read a model file; bare fixture names fall back to the bundled copies."""
    p = Path(path)
    if not p.exists():
        try:
            p = fixture_path(p.name)
        except FileNotFoundError:
            raise FileNotFoundError(str(path)) from None
    return parse_model(p.read_text(encoding="utf-8"), **kwargs)
