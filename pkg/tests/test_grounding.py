import itertools
import random

from progen import random_program

from foundalog.analysis import domain_of, validate_declarations
from foundalog.evaluation import F, T, UD, Interpretation, gi_by_truth, truth_of_body
from foundalog.grounding import ground_rules, ground_set, simplify, to_dnf
from foundalog.parser import parse
from foundalog.syntax import FALSE, TRUE, And, Atom, Lit, Or, Rule, SetExpr, Var, rule_vars
from foundalog.transform import complete

GRADUATE = """
taken('mike', 'cs1'). taken('mike', 'cs2'). taken('john', 'cs2').
required('cs1'). required('cs2').
ready(S) :- each C | not required(C) or taken(S, C).
"""
CIRCUIT = """
input('w1', 'g1'). input('w2', 'g1'). input('w0', 'g2').
output('w0', 'g1'). output('w3', 'g2').
gate('g1', 'and'). gate('g2', 'and').
val('w1', 0). val('w2', 1).
val(W, 0) :- output(W, G), gate(G, 'and'), count {W : val(W, 0), input(W, G)} > 0.
"""


def lit(pred, *args, positive=True):
    return Lit(Atom(pred, args), positive)


def test_universal_expands_to_conjunction():
    prog = parse(GRADUATE)
    domain = domain_of(prog)
    assert set(domain) == {"mike", "john", "cs1", "cs2"}
    ready = [r for r in ground_rules(prog, domain) if r.head.atom.pred == "ready"]
    assert len(ready) == 4
    for r in ready:
        assert isinstance(r.body, And) and len(r.body.items) == 4
        assert all(isinstance(i, Or) and len(i.items) == 2 for i in r.body.items)


def test_fact_grounds_to_itself():
    prog = parse("p(1).")
    assert ground_rules(prog, (1,)) == [Rule(lit("p", 1))]


def test_circuit_instances_keep_bound_variable():
    prog = parse(CIRCUIT)
    domain = domain_of(prog)
    rules = [r for r in ground_rules(prog, domain) if r.body is not None]
    assert len(rules) == len(domain) ** 2
    for r in rules:
        cmp = r.body.items[2]
        assert cmp.set.vars == (Var("W"),)
        assert cmp.set.body[0].atom.args == (Var("W"), 0)


def test_ground_rules_is_exhaustive():
    rng = random.Random(7)
    for _ in range(100):
        _, prog = random_program(rng)
        domain = domain_of(prog)
        expected = sum(len(domain) ** len(rule_vars(r)) for r in prog.rules)
        assert len(ground_rules(prog, domain)) == expected


def test_ground_set():
    sexpr = SetExpr((Var("X"),), (lit("p", Var("X")),))
    inst = ground_set(sexpr, (1, 2, 3))
    assert [(i.tuple, i.body) for i in inst] == [((c,), (lit("p", c),)) for c in (1, 2, 3)]
    assert ground_set(sexpr, ()) == ()


def test_ground_set_circuit():
    prog = parse(CIRCUIT)
    domain = domain_of(prog)
    sexpr = SetExpr((Var("W2"),), (lit("val", Var("W2"), 0), lit("input", Var("W2"), "g1")))
    inst = ground_set(sexpr, domain)
    assert len(inst) == len(domain)
    assert all(len(i.body) == 2 and i.body[1].atom.args[1] == "g1" for i in inst)


def test_gi_by_truth():
    sexpr = SetExpr((Var("X"),), (lit("p", Var("X")),))
    domain = (1, 2, 3)
    interp = Interpretation([Atom("p", (1,))])
    assert gi_by_truth(sexpr, interp, T, domain) == {1}
    assert gi_by_truth(sexpr, interp, UD, domain) == {2, 3}
    renamed = Interpretation.from_literals([lit("p", 1), lit("n.p", 2)])
    assert gi_by_truth(sexpr, renamed, T, domain) == {1}
    assert gi_by_truth(sexpr, renamed, UD, domain) == {3}
    assert gi_by_truth(sexpr, renamed, F, domain) == {2}
    total = Interpretation([Atom("p", (1,))], [Atom("p", (2,)), Atom("p", (3,))])
    assert gi_by_truth(sexpr, total, UD, domain) == set()


def test_set_body_free_variables_are_fixed_by_the_rule():
    prog = parse("h(Y) :- r(Y), count {X : q(X, Y)} > 0. r(a). q(1, b).")
    domain = domain_of(prog)
    for r in ground_rules(prog, domain):
        if r.body is None:
            continue
        cmp = r.body.items[1]
        assert cmp.set.body[0].atom.args == (Var("X"), r.head.atom.args[0])
        tuples = [i.tuple for i in ground_set(cmp.set, domain)]
        assert len(tuples) == len(set(tuples)) == len(domain)


def test_dnf_distributes():
    a, b, c = lit("a"), lit("b"), lit("c")
    dnf = to_dnf(Rule(lit("h"), And((Or((a, b)), c))))
    assert [d.disjunct for d in dnf] == [(a, c), (b, c)]
    dnf = to_dnf(Rule(lit("h"), And((a, b))))
    assert [d.disjunct for d in dnf] == [(a, b)]


def test_dnf_of_grounded_completion_rule():
    prog = validate_declarations(parse("p(a) :- count {X : p(X)} = 1. q(b)."))
    inv = [r for r in complete(prog).rules if not r.head.positive][0]
    grounded = {r.head.atom.args: r for r in ground_rules(type(prog)((inv,), prog.declarations), ("a", "b"))}
    assert grounded[("b",)].body == TRUE
    assert [d.disjunct for d in to_dnf(grounded[("b",)])] == [()]
    assert len(to_dnf(grounded[("a",)])) == 1


def test_simplify_folds_constants():
    a = lit("a")
    assert simplify(And((a, FALSE))) == FALSE
    assert simplify(Or((a, TRUE))) == TRUE
    assert simplify(And((TRUE, a))) == a


def _interpretations(atoms, rng, n):
    for _ in range(n):
        pos, neg = [], []
        for a in atoms:
            r = rng.random()
            (pos if r < 0.33 else neg if r < 0.66 else []).append(a)
        yield Interpretation(pos, neg)


def test_dnf_is_equivalent():
    rng = random.Random(11)
    checked = 0
    for _ in range(150):
        _, prog = random_program(rng)
        domain = domain_of(prog)
        atoms = [Atom(p[0], args) for p in sorted(validate_declarations(prog).predicates())
                 for args in itertools.product(domain, repeat=p[1])]
        for gr in ground_rules(prog, domain):
            if gr.body is None:
                continue
            dnf = to_dnf(gr)
            for interp in _interpretations(atoms, rng, 4):
                whole = truth_of_body(gr.body, interp, domain)
                parts = max((truth_of_body(And(d.disjunct), interp, domain) for d in dnf), default=F)
                assert whole == parts, (gr, interp)
                checked += 1
    assert checked > 300
