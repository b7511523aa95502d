import numpy as np
import pytest

from helpers import all_sequences, random_problem
from vbsfusion.algebra import OperationCounter
from vbsfusion.errors import DecisionUnderPotentialOnly, InvalidDeletionSequence
from vbsfusion.fusion import (
    DeletionSequence,
    candidate_next,
    check_sequence,
    fuse,
    one_step_look_ahead,
    solve,
)
from vbsfusion.model import DecisionProblem, Valuation, Variable, validate

# Table 1-2 inputs summed by hand along the optimal branch of each (B, G) cell:
#   (b,g) treat .0126+.00027, (b,~g) wait .05346, (~b,g) treat .8874+.04473,
#   (~b,~g) wait 10*.994*.99*.9
DIABETES_MEU = (0.0126 + 0.00027) + 0.05346 + (0.8874 + 0.04473) + 10 * 0.994 * 0.99 * 0.9


def _valuation(problem, name):
    return next(v for v in problem.valuations if v.name == name)


def test_fuse_medical_at_d(medical):
    c = OperationCounter()
    out = fuse(list(medical.valuations), medical.variable("D"), c)
    assert [v.ids for v in out] == [("T", "P"), ("S", "P")]
    assert out[1] is _valuation(medical, "mu")
    assert out[0].is_utility
    assert c.multiplications == 12 and c.additions == 4


def test_fuse_single_bearer_is_free(diabetes):
    c = OperationCounter()
    rho = _valuation(diabetes, "rho")
    out = fuse([rho], diabetes.variable("D"), c)
    assert c.multiplications == 0
    assert float(out[0].table) == pytest.approx(1.0)


def test_fuse_diabetes_at_d(diabetes):
    out = fuse(list(diabetes.valuations), diabetes.variable("D"), OperationCounter())
    assert len(out) == 1 and out[0].ids == ("B", "G", "T")
    assert out[0].values[0] == pytest.approx(0.01287, abs=1e-12)


def test_fuse_decision_on_potentials_only():
    d = Variable("D", "decision", ("a", "b"), 0)
    pot = Valuation("potential", (d,), [0.5, 0.5])
    with pytest.raises(DecisionUnderPotentialOnly):
        fuse([pot], d, OperationCounter())


def test_fuse_captures_solution(diabetes):
    sols = {}
    pool = fuse(list(diabetes.valuations), diabetes.variable("D"), OperationCounter(), sols)
    fuse(pool, diabetes.variable("T"), OperationCounter(), sols)
    assert sols["T"].ids == ("B", "G")


def test_candidates(medical, diabetes):
    assert set(candidate_next(medical, ["S", "T", "P", "D"])) == {"D", "P"}
    assert candidate_next(diabetes, ["B", "G", "T", "D"]) == ("D",)
    assert candidate_next(diabetes, ["G"]) == ("G",)


def test_heuristic(medical, diabetes):
    assert one_step_look_ahead(medical).order == ("D", "P", "T", "S")
    assert one_step_look_ahead(diabetes).order == ("D", "T", "B", "G")
    d = Variable("X", "decision", ("a", "b"), 0)
    lone = DecisionProblem([d], [Valuation("utility", (d,), [10, 5])])
    assert one_step_look_ahead(lone).order == ("X",)


def test_solve_diabetes(diabetes):
    report = solve(diabetes)
    assert report.meu == pytest.approx(DIABETES_MEU, abs=1e-12)
    psi = report.strategy["T"]
    choices = {str(cfg): psi.decision.frame[s] for cfg, s in psi.rows()}
    assert choices == {"b g": "t", "b ~g": "~t", "~b g": "t", "~b ~g": "~t"}
    c = report.counter
    assert (c.additions, c.multiplications, c.comparisons, c.divisions) == (11, 28, 4, 0)


def test_solve_medical_counts(medical):
    c = solve(medical, ["D", "P", "T", "S"]).counter
    assert (c.additions, c.multiplications, c.comparisons, c.divisions) == (9, 20, 2, 0)


def test_medical_pdts_costs_more(medical):
    dpts = solve(medical, "DPTS").counter
    pdts = solve(medical, "PDTS")
    assert pdts.counter.multiplications > dpts.multiplications
    assert pdts.meu == pytest.approx(solve(medical).meu, abs=1e-12)


def test_pure_maximization():
    d = Variable("X", "decision", ("first", "second"), 0)
    p = validate(DecisionProblem([d], [Valuation("utility", (d,), [10, 5])]))
    report = solve(p)
    assert report.meu == 10
    assert report.strategy["X"].domain == ()
    assert int(report.strategy["X"].choices) == 0


def test_sequence_invariance_diabetes(diabetes):
    a = solve(diabetes, ["D", "T", "B", "G"])
    b = solve(diabetes, ["D", "T", "G", "B"])
    assert a.meu == pytest.approx(b.meu, abs=1e-12)
    assert np.array_equal(a.strategy["T"].choices, b.strategy["T"].choices)


@pytest.mark.parametrize("order", [["B", "G", "T", "D"], ["D", "B", "T", "G"], ["D", "T", "B"], ["D", "T", "B", "B"]])
def test_invalid_sequences(diabetes, order):
    with pytest.raises(InvalidDeletionSequence):
        solve(diabetes, order)


def test_check_sequence_returns_sequence(diabetes):
    seq = check_sequence(diabetes, "DTGB")
    assert isinstance(seq, DeletionSequence) and str(seq) == "D T G B"


def test_random_problems_all_sequences_agree():
    rng = np.random.default_rng(7)
    for _ in range(60):
        p = validate(random_problem(rng, max_vars=4))
        ref = solve(p)
        assert ref.counter.divisions == 0
        for seq in all_sequences(p):
            r = solve(p, seq)
            assert r.meu == pytest.approx(ref.meu, abs=1e-9)
            pos = {x: i for i, x in enumerate(seq)}
            for d, table in r.strategy.tables.items():
                assert all(pos[v.id] > pos[d] for v in table.domain)
