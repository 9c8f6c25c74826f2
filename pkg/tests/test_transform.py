import itertools
import random

from progen import random_program

from foundalog.analysis import domain_of, validate_declarations
from foundalog.evaluation import T, Interpretation, truth_of_body
from foundalog.grounding import ground_rules, simplify
from foundalog.parser import parse
from foundalog.syntax import Atom, Cmp, CmpOp, Exists, Lit, Or, Program, Var, format_program
from foundalog.transform import combine, complete, fresh_vars, name_neg, negate, unname_neg

SELF_COUNT = "p(a) :- count {X : p(X)} = 1. @declare p/1 uncertain complete."
CORRELATED = "p(1). p(3) :- count {X : p(X)} >= 2. p(2) :- count {X : p(X)} >= 2. @declare p/1 uncertain complete."
WIN = "move(1, 2). win(X) :- count {Y : move(X, Y), not win(Y)} >= 2."


def completed_text(text):
    return format_program(complete(validate_declarations(parse(text))))


def rules_for(prog, pred, positive=True):
    return [r for r in prog.rules if r.head.atom.pred == pred and r.head.positive == positive]


def test_combined_rule_without_extra_variables():
    (rule,) = rules_for(combine(validate_declarations(parse(SELF_COUNT))), "p")
    assert rule.head.atom.args == fresh_vars(1)
    assert "p($v1) :- $v1 = 'a', count {X : p(X)} = 1." in completed_text(SELF_COUNT)


def test_combined_rule_has_one_disjunct_per_clause():
    (rule,) = rules_for(combine(validate_declarations(parse(CORRELATED))), "p")
    assert isinstance(rule.body, Or) and len(rule.body.items) == 3
    assert "p($v1) :- $v1 = 1 or $v1 = 3, count {X : p(X)} >= 2 or $v1 = 2, count {X : p(X)} >= 2." in completed_text(CORRELATED)


def test_certain_predicate_unchanged():
    prog = validate_declarations(parse("enrolled('c', 's1'). need(C) :- count {S : enrolled(C, S)} > 20."))
    assert complete(prog) == prog


def test_inverse_rule_self_count():
    assert "not p($v1) :- $v1 != 'a' or count {X : p(X)} != 1." in completed_text(SELF_COUNT)


def test_inverse_rule_correlated_counts():
    expected = "not p($v1) :- $v1 != 1, ($v1 != 3 or count {X : p(X)} < 2), ($v1 != 2 or count {X : p(X)} < 2)."
    assert expected in completed_text(CORRELATED)


def test_inverse_rule_win_grounds_to_count_below_two():
    prog = complete(validate_declarations(parse(WIN)))
    (inv,) = rules_for(prog, "win", positive=False)
    domain = domain_of(prog)
    for gr in ground_rules(Program((inv,), prog.declarations), domain):
        x = gr.head.atom.args[0]
        body = simplify(gr.body)
        assert isinstance(body, Cmp) and body.op is CmpOp.LT and body.rhs == 2
        assert body.set.body[0].atom.args == (x, Var("Y"))
        assert body.set.body[1] == Lit(Atom("win", (Var("Y"),)), False)


def test_combined_rule_keeps_clause_variables_existential():
    (rule,) = rules_for(combine(validate_declarations(parse(WIN))), "win")
    assert isinstance(rule.body, Exists) and rule.body.vars == (Var("X"),)


def test_fresh_variables_cannot_clash():
    assert all(v.name.startswith("$") for v in fresh_vars(3))
    prog = validate_declarations(parse("p(V1, X) :- q(V1), r(X). q(1). r(2). @declare p/2 uncertain complete."))
    (rule,) = rules_for(combine(prog), "p")
    assert rule.head.atom.args == fresh_vars(2)


def test_negate_is_involutive_on_nnf():
    body = parse("h(X) :- (q(X) or not r(X)), (each Y | r(Y) or count {Z : q(Z)} <= 1).").rules[0].body
    assert negate(negate(body)) == body


def test_name_neg_win():
    text = format_program(name_neg(complete(validate_declarations(parse(WIN)))))
    assert "win($v1) :- (some X | $v1 = X, count {Y : move(X, Y), n.win(Y)} >= 2)." in text
    assert "n.win($v1) :- (each X | $v1 != X or count {Y : move(X, Y), n.win(Y)} < 2)." in text


def test_name_neg_without_negation_is_identity():
    prog = parse("p(1). q(X) :- p(X), count {Y : p(Y)} > 0.")
    assert name_neg(prog) == prog


def test_unname_neg():
    interp = unname_neg([Atom("win", (1,)), Atom("n.win", (2,))])
    assert interp == Interpretation([Atom("win", (1,))], [Atom("win", (2,))])


def test_combined_rule_is_equivalent_to_clauses():
    """In every 2-valued interpretation the combined rule fires exactly when some clause does."""
    rng = random.Random(13)
    checked = 0
    for _ in range(150):
        _, prog = random_program(rng, max_atoms=6)
        prog = validate_declarations(prog)
        domain = domain_of(prog)
        atoms = [Atom(pr[0], args) for pr in sorted(prog.predicates())
                 for args in itertools.product(domain, repeat=pr[1])]
        targets = {d.pred for d in prog.declarations if d.uncertain_complete}
        if not targets:
            continue
        original = [r for r in ground_rules(prog, domain) if r.head.atom.key in targets]
        combined = [r for r in ground_rules(combine(prog), domain) if r.head.atom.key in targets]
        for _ in range(4):
            true = [a for a in atoms if rng.random() < 0.5]
            interp = Interpretation(true, [a for a in atoms if a not in true])
            for atom in atoms:
                if atom.key not in targets:
                    continue
                head = Lit(atom)
                fires = any(r.body is None or truth_of_body(r.body, interp, domain) is T
                            for r in original if r.head == head)
                (c,) = [r for r in combined if r.head == head]
                assert (truth_of_body(c.body, interp, domain) is T) == fires, (c, interp)
                checked += 1
    assert checked > 100
