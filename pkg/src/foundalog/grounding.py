"""Ground instances of rules and set expressions over the program constants."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .syntax import (
    FALSE,
    TRUE,
    And,
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
    format_body,
    is_var,
    rule_vars,
    subst_atom,
    subst_set,
    subst_term,
)


class GroundingError(ValueError):
    pass


@dataclass(frozen=True)
class GroundSetInstance:
    tuple: tuple
    body: tuple[Lit, ...]


@dataclass(frozen=True)
class DnfRule:
    head: Lit
    disjunct: tuple  # ground Lit / Cmp hypotheses, read as a conjunction

    def __str__(self) -> str:
        body = ", ".join(format_body(h, "and") for h in self.disjunct) or "true"
        return f"{self.head} :- {body}."


def simplify(body):
    """Flatten nested connectives and fold the constant bodies TRUE / FALSE."""
    if isinstance(body, And):
        items = []
        for item in body.items:
            item = simplify(item)
            if item == FALSE:
                return FALSE
            if isinstance(item, And):
                items.extend(item.items)
            else:
                items.append(item)
        return items[0] if len(items) == 1 else And(tuple(items))
    if isinstance(body, Or):
        items = []
        for item in body.items:
            item = simplify(item)
            if item == TRUE:
                return TRUE
            if isinstance(item, Or):
                items.extend(item.items)
            else:
                items.append(item)
        return items[0] if len(items) == 1 else Or(tuple(items))
    return body


def _term_test(node, env):
    left, right = subst_term(node.left, env), subst_term(node.right, env)
    if is_var(left) or is_var(right):
        raise GroundingError(f"unbound variable in {format_body(node)}")
    # str never equals a number, and 1 == Fraction(1) as intended
    equal = left == right
    if isinstance(node, TermEq):
        return TRUE if equal else FALSE
    return TRUE if not equal else FALSE


def _pinned_value(test_cls, items, name, env):
    """Value forced on ``name`` by a top-level ``name = t`` (or ``!=``) item."""
    for item in items:
        if isinstance(item, test_cls):
            for a, b in ((item.left, item.right), (item.right, item.left)):
                if is_var(a) and a.name == name:
                    b = subst_term(b, env)
                    if not is_var(b):
                        return b
    return None


def _expand(node, env, domain):
    is_exists = isinstance(node, Exists)
    names = [v.name for v in node.vars]
    inner_env = {k: v for k, v in env.items() if k not in names}
    # ∃x (x = c ∧ B) is B[x:=c], dually ∀x (x != c ∨ B); c is always a domain constant
    pinned = {}
    container, test_cls = (And, TermEq) if is_exists else (Or, TermNeq)
    if isinstance(node.body, container):
        for name in names:
            value = _pinned_value(test_cls, node.body.items, name, {**inner_env, **pinned})
            if value is not None:
                pinned[name] = value
    free = [n for n in names if n not in pinned]
    parts = []
    for values in itertools.product(domain, repeat=len(free)):
        part = ground_body(node.body, {**inner_env, **pinned, **dict(zip(free, values))}, domain)
        if is_exists and part == TRUE:
            return TRUE
        if not is_exists and part == FALSE:
            return FALSE
        parts.append(part)
    return simplify((Or if is_exists else And)(tuple(parts)))


def ground_body(body, env: dict, domain: tuple):
    """Substitute ``env``, expand quantifiers over ``domain``, fold term tests."""
    if isinstance(body, Lit):
        return Lit(subst_atom(body.atom, env), body.positive)
    if isinstance(body, Cmp):
        return Cmp(body.agg, subst_set(body.set, env), body.op, subst_term(body.rhs, env))
    if isinstance(body, (And, Or)):
        return simplify(type(body)(tuple(ground_body(i, env, domain) for i in body.items)))
    if isinstance(body, (Exists, Forall)):
        return _expand(body, env, domain)
    if isinstance(body, (TermEq, TermNeq)):
        return _term_test(body, env)
    raise TypeError(f"not a body: {body!r}")


def ground_rule_instances(rule: Rule, domain: tuple):
    """Yield ``(assignment, ground rule)`` for every assignment of the free variables."""
    names = sorted(rule_vars(rule))
    for values in itertools.product(domain, repeat=len(names)):
        env = dict(zip(names, values))
        head = Lit(subst_atom(rule.head.atom, env), rule.head.positive)
        body = None if rule.body is None else ground_body(rule.body, env, domain)
        yield env, Rule(head, body)


def ground_rules(prog: Program, domain: tuple) -> list[Rule]:
    """All ground instances of the rules and facts of ``prog``."""
    return [gr for rule in prog.rules for _, gr in ground_rule_instances(rule, domain)]


@lru_cache(maxsize=1 << 16)
def ground_set(sexpr: SetExpr, domain: tuple) -> tuple[GroundSetInstance, ...]:
    """One instance per assignment of the set's bound variables over ``domain``."""
    names = [v.name for v in sexpr.vars]
    out = []
    for values in itertools.product(domain, repeat=len(names)):
        env = dict(zip(names, values))
        body = tuple(Lit(subst_atom(lit.atom, env), lit.positive) for lit in sexpr.body)
        for lit in body:
            if not lit.atom.is_ground():
                raise GroundingError(f"set expression has unbound variables: {lit}")
        out.append(GroundSetInstance(tuple(values), body))
    return tuple(out)


def to_dnf(rule: Rule) -> list[DnfRule]:
    """Split a ground rule into one rule per disjunct of its body's DNF."""
    if rule.body is None:
        return [DnfRule(rule.head, ())]
    return [DnfRule(rule.head, d) for d in _dnf(simplify(rule.body))]


def _dnf(body) -> list[tuple]:
    if isinstance(body, Or):
        out = []
        for item in body.items:
            out.extend(_dnf(item))
        return list(dict.fromkeys(out))
    if isinstance(body, And):
        acc: list[tuple] = [()]
        for item in body.items:
            acc = [
                tuple(dict.fromkeys(left + right)) for left in acc for right in _dnf(item)
            ]
        return list(dict.fromkeys(acc))
    if isinstance(body, (Lit, Cmp)):
        return [(body,)]
    raise GroundingError(f"body is not ground: {format_body(body)}")
