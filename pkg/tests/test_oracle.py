from fractions import Fraction

import pytest
from helpers import corpus_program

from foundalog import oracle
from foundalog.evaluation import Interpretation
from foundalog.parser import parse
from foundalog.semantics import founded0
from foundalog.syntax import AggOp, Atom, CmpOp

CORRELATED = "p(1). p(3) :- count {X : p(X)} >= 2. p(2) :- count {X : p(X)} >= 2."


def p(*args):
    return Atom("p", args)


def test_correlated_complete_models():
    models = oracle.enumerate_constraint_models_bruteforce(parse(CORRELATED + "@declare p/1 uncertain complete."))
    assert {m.true for m in models} == {frozenset({p(1)}), frozenset({p(1), p(2), p(3)})}


def test_self_count_incomplete_allows_both_values():
    models = oracle.enumerate_constraint_models_bruteforce(
        parse("p(a) :- count {X : p(X)} = 1. @declare p/1 uncertain incomplete.")
    )
    assert {p("a") in m.true for m in models} == {True, False}
    # p(1) alone would make the count 1 without p(a)
    assert all(m.true != {p(1)} for m in models)


def test_empty_program_has_the_empty_model():
    assert oracle.enumerate_constraint_models_bruteforce(parse("")) == {oracle.OracleModel(frozenset(), frozenset())}


def test_unfounded_correlated_closed():
    prog = parse(CORRELATED + "@declare p/1 closed.")
    assert oracle.greatest_unfounded_bruteforce(prog, Interpretation([p(1)])) == {p(2), p(3)}


def test_unfounded_without_closed_predicates():
    assert oracle.greatest_unfounded_bruteforce(parse(CORRELATED), Interpretation([p(1)])) == frozenset()


def test_double_win_closed_regression():
    prog = corpus_program("double_win", "win/1=uncertain,complete,closed")
    interp = founded0(prog)
    assert oracle.greatest_unfounded_bruteforce(prog, interp) == {Atom("win", (2,)), Atom("win", (3,))}


def test_founded_double_win():
    m = oracle.founded_bruteforce(corpus_program("double_win"))
    assert Atom("win", (1,)) in m.true
    assert {Atom("win", (2,)), Atom("win", (3,))} <= m.false


@pytest.mark.parametrize("agg,values,expected", [
    (AggOp.COUNT, [], 0),
    (AggOp.MAX, [(1, 2), (1, 3)], (1, 3)),
    (AggOp.MIN, [(1, 2), (1, 3)], (1, 2)),
    (AggOp.SUM, [3, -2, 4], 5),
    (AggOp.SUM, [Fraction(1, 2), 1], Fraction(3, 2)),
])
def test_aggregate_2valued(agg, values, expected):
    assert oracle.aggregate_2valued(agg, values) == expected


def test_aggregate_errors():
    with pytest.raises(TypeError):
        oracle.aggregate_2valued(AggOp.SUM, [1, "a"])
    with pytest.raises(TypeError):
        oracle.aggregate_2valued(AggOp.MAX, [2, "a"])
    with pytest.raises(ValueError):
        oracle.aggregate_2valued(AggOp.MIN, [])


def test_comparison_2valued_on_empty_sets():
    assert oracle.comparison_2valued(AggOp.MAX, CmpOp.LE, [], 5) is True
    assert oracle.comparison_2valued(AggOp.MAX, CmpOp.GE, [], 5) is False
    assert oracle.comparison_2valued(AggOp.MIN, CmpOp.EQ, [], 5) is None
    assert oracle.comparison_2valued(AggOp.MAX, CmpOp.LT, [1, "a"], 5) is None


def test_kleene_connectives():
    assert oracle.k_and([True, None]) is None
    assert oracle.k_and([False, None]) is False
    assert oracle.k_or([False, None]) is None
    assert oracle.k_or([True, None]) is True
    assert oracle.k_not(None) is None


def test_scale_guard():
    text = "\n".join(f"q({i})." for i in range(30)) + "\np(X) :- q(X), not p(X).\n@declare p/1 uncertain incomplete."
    with pytest.raises(oracle.OracleScaleError):
        oracle.enumerate_constraint_models_bruteforce(parse(text))
