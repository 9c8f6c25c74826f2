"""Completion of uncertain complete predicates and renaming of negation."""

from __future__ import annotations

from typing import Iterable

from .evaluation import Interpretation
from .syntax import (
    NEG_PREFIX,
    And,
    Atom,
    Cmp,
    Exists,
    Forall,
    Lit,
    Or,
    Program,
    Rule,
    SetExpr,
    TermEq,
    TermNeq,
    Var,
    rule_vars,
)

# '$' cannot appear in source identifiers, so these never capture
FRESH_PREFIX = "$v"


def fresh_vars(arity: int) -> tuple[Var, ...]:
    return tuple(Var(f"{FRESH_PREFIX}{i}") for i in range(1, arity + 1))


def _uncertain_complete(prog: Program) -> list[tuple[str, int]]:
    return sorted(d.pred for d in prog.declarations if d.uncertain_complete)


def combined_rule(pred: tuple[str, int], clauses: list[Rule]) -> Rule:
    """The single rule equivalent to all facts and rules defining ``pred``."""
    head_vars = fresh_vars(pred[1])
    disjuncts = []
    for clause in clauses:
        guards = [TermEq(v, x) for v, x in zip(head_vars, clause.head.atom.args)]
        parts = guards + ([] if clause.body is None else [clause.body])
        body = parts[0] if len(parts) == 1 else And(tuple(parts))
        ys = tuple(Var(n) for n in sorted(rule_vars(clause)))
        disjuncts.append(Exists(ys, body) if ys else body)
    body = disjuncts[0] if len(disjuncts) == 1 else Or(tuple(disjuncts))
    return Rule(Lit(Atom(pred[0], head_vars)), body)


def combine(prog: Program) -> Program:
    """Replace the clauses of each uncertain complete predicate by one combined rule."""
    targets = _uncertain_complete(prog)
    keep = [r for r in prog.rules if r.head.atom.key not in targets]
    combined = [
        combined_rule(p, [r for r in prog.rules if r.head.atom.key == p]) for p in targets
    ]
    return Program(tuple(keep + combined), prog.declarations)


def negate(body):
    """Negation normal form of the negation of ``body``.

    Negation ends up only on predicate atoms; comparisons flip their
    operator instead of being negated, and set expressions are untouched.
    """
    if isinstance(body, Lit):
        return body.negate()
    if isinstance(body, Cmp):
        return body.complement()
    if isinstance(body, And):
        return Or(tuple(negate(i) for i in body.items))
    if isinstance(body, Or):
        return And(tuple(negate(i) for i in body.items))
    if isinstance(body, Exists):
        return Forall(body.vars, negate(body.body))
    if isinstance(body, Forall):
        return Exists(body.vars, negate(body.body))
    if isinstance(body, TermEq):
        return TermNeq(body.left, body.right)
    if isinstance(body, TermNeq):
        return TermEq(body.left, body.right)
    raise TypeError(f"not a body: {body!r}")


def add_inv(prog: Program) -> Program:
    """Add a completion rule deriving negative literals per uncertain complete predicate."""
    targets = set(_uncertain_complete(prog))
    extra = []
    for rule in prog.rules:
        if rule.head.positive and rule.head.atom.key in targets and rule.body is not None:
            extra.append(Rule(rule.head.negate(), negate(rule.body)))
    return Program(prog.rules + tuple(extra), prog.declarations)


def complete(prog: Program) -> Program:
    """The completed program; ``prog`` must have resolved declarations."""
    return add_inv(combine(prog))


# ---------------------------------------------------------------------------
# renaming


def rename_lit(lit: Lit) -> Lit:
    if lit.positive:
        return lit
    return Lit(Atom(NEG_PREFIX + lit.atom.pred, lit.atom.args))


def _rename_body(body):
    if isinstance(body, Lit):
        return rename_lit(body)
    if isinstance(body, Cmp):
        return Cmp(body.agg, SetExpr(body.set.vars, tuple(map(rename_lit, body.set.body))), body.op, body.rhs)
    if isinstance(body, (And, Or)):
        return type(body)(tuple(_rename_body(i) for i in body.items))
    if isinstance(body, (Exists, Forall)):
        return type(body)(body.vars, _rename_body(body.body))
    return body


def name_neg(prog: Program) -> Program:
    """Replace every negative literal ``not P(..)`` by ``n.P(..)``."""
    rules = tuple(
        Rule(rename_lit(r.head), None if r.body is None else _rename_body(r.body))
        for r in prog.rules
    )
    return Program(rules, prog.declarations)


def unname_neg(atoms: Iterable[Atom]) -> Interpretation:
    """Turn a set of (possibly renamed) positive atoms into an interpretation."""
    return Interpretation.from_literals(Lit(a) for a in atoms)


def name_neg_interpretation(interp: Interpretation) -> frozenset:
    return frozenset(interp.pos) | frozenset(
        Atom(NEG_PREFIX + a.pred, a.args) for a in interp.neg
    )
