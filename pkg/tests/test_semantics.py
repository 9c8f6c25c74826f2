import random

import pytest
from helpers import corpus_program
from progen import random_program

from foundalog.analysis import validate_declarations
from foundalog.errors import BudgetExceeded
from foundalog.evaluation import F, T, UD, Interpretation
from foundalog.parser import parse
from foundalog.semantics import (
    LfpTrace,
    add_neg,
    check_model,
    compile_program,
    constraint_models,
    founded,
    founded0,
    founded_from,
    unfounded_sets_greatest,
)
from foundalog.syntax import Atom
from foundalog.transform import complete

CORRELATED = "p(1). p(3) :- count {X : p(X)} >= 2. p(2) :- count {X : p(X)} >= 2."


def p(*args):
    return Atom("p", args)


def test_need_ta():
    m = founded0(corpus_program("need_ta"))
    assert m.truth(Atom("need_ta", ("c",))) is T
    assert m.truth(Atom("need_ta", ("d",))) is F
    assert m.truth(Atom("n_need_ta", ("d",))) is T
    assert m.truth(Atom("n_need_ta", ("c",))) is F


def test_self_count_complete_founded0():
    m = founded0(corpus_program("self_count", "p/1=uncertain,complete"))
    assert m.truth(p("a")) is UD
    assert m.truth(p("b")) is F


def test_circuit_founded0():
    prog = corpus_program("circuit")
    m = founded0(prog)
    facts = {r.head.atom for r in prog.rules if r.is_fact}
    assert m.pos == facts | {Atom("val", ("w0", 0)), Atom("val", ("w3", 0))}
    c = compile_program(prog)
    assert not [a for a in c.all_atoms() if m.truth(a) is UD]


def test_add_neg():
    c = compile_program(parse(CORRELATED))
    out = add_neg(Interpretation([p(1)]), {("p", 1)}, c)
    assert out.neg == {p(2), p(3)}
    c = compile_program(parse(CORRELATED + "@declare p/1 uncertain incomplete."))
    assert add_neg(Interpretation([p(1)]), {("p", 1)}, c) == Interpretation([p(1)])
    c = compile_program(parse("r :- q. s."))
    assert add_neg(Interpretation(), {("q", 0)}, c).neg == {Atom("q", ())}


def test_unfounded_correlated_closed():
    prog = parse(CORRELATED + "@declare p/1 closed.")
    assert unfounded_sets_greatest(prog, Interpretation([p(1)])) == {p(2), p(3)}


def test_unfounded_self_count_closed():
    prog = corpus_program("self_count", "p/1=uncertain,complete,closed")
    interp = Interpretation([], [p("b"), p(1)])
    # p(a) is unfounded since deriving it needs p(a) itself; atoms already false stay in
    assert unfounded_sets_greatest(prog, interp) == {p("a"), p("b"), p(1)}


def test_unfounded_without_closed_predicates():
    assert unfounded_sets_greatest(parse(CORRELATED), Interpretation([p(1)])) == frozenset()


def test_self_count_closed_is_false_everywhere():
    prog = corpus_program("self_count", "p/1=uncertain,complete,closed")
    m = founded(prog).interpretation
    c = compile_program(prog)
    assert all(m.truth(a) is F for a in c.atoms_of(("p", 1)))


@pytest.mark.parametrize("declare,expected", [
    ("attend/1=uncertain,complete", UD),
    ("attend/1=uncertain,complete,closed", F),
])
def test_seminar(declare, expected):
    m = founded(corpus_program("seminar", declare))
    assert m.truth(Atom("attend", ("tom",))) is expected


def test_check_model():
    prog = corpus_program("circuit")
    m = founded(prog).interpretation
    c = compile_program(prog)
    assert check_model(prog, m) and check_model(c.completed, m, c.domain)
    assert not check_model(parse("p(1)."), Interpretation())
    prog = validate_declarations(parse(CORRELATED + "@declare p/1 uncertain complete."))
    full = Interpretation([p(1), p(2), p(3)])
    assert check_model(complete(prog), full)


@pytest.mark.parametrize("declare,expected", [
    ("p/1=uncertain,complete", [{p(1)}, {p(1), p(2), p(3)}]),
    ("p/1=uncertain,incomplete", [{p(1)}, {p(1), p(2), p(3)}]),
    ("p/1=uncertain,complete,closed", [{p(1)}]),
])
def test_correlated_constraint_models(declare, expected):
    models = constraint_models(corpus_program("correlated_counts", declare))
    assert [set(m.pos) for m in models.models] == expected
    assert not models.truncated


def test_self_count_closed_single_model():
    models = constraint_models(corpus_program("self_count", "p/1=uncertain,complete,closed"))
    assert len(models) == 1 and not {a for a in models.models[0].pos if a.pred == "p"}


def test_circuit_constraint_model_is_founded():
    prog = corpus_program("circuit")
    models = constraint_models(prog)
    assert models.models == (founded(prog).interpretation,)


def test_budget_exceeded():
    prog = corpus_program("correlated_counts", "p/1=uncertain,complete")
    with pytest.raises(BudgetExceeded):
        constraint_models(prog, budget=1)


def test_limit_truncates():
    prog = corpus_program("correlated_counts", "p/1=uncertain,complete")
    models = constraint_models(prog, limit=1)
    assert len(models) == 1 and models.truncated


def test_lfp_rounds_are_bounded():
    prog = corpus_program("double_win_draw")
    c = compile_program(prog)
    trace = LfpTrace()
    founded_from(c, trace)
    ground = sum(len(rs) for rs in c.rules_by_pred.values())
    for scc, rounds in trace.rounds:
        assert rounds <= len([a for pr in scc for a in c.atoms_of(pr)]) * 2 + ground + 1


def test_properties_on_random_programs():
    rng = random.Random(21)
    for _ in range(300):
        _, prog = random_program(rng)
        c = compile_program(prog)
        m = founded(prog).interpretation
        assert not (m.pos & m.neg)
        assert check_model(prog, m, c.domain) and check_model(c.completed, m, c.domain)
        for pred in c.arity:
            if c.certain(pred):
                assert all(m.truth(a) is not UD for a in c.atoms_of(pred))
        assert founded(prog, reverse_ties=True).interpretation == m
        for model in constraint_models(prog).models:
            assert m <= model
            assert len(model.pos) + len(model.neg) == len(c.all_atoms())
            assert check_model(prog, model, c.domain)
