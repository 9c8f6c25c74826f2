"""Abstract syntax for rule programs and its canonical text form.

Constants are plain Python values: ``str`` for symbols, ``int`` for integers
and :class:`fractions.Fraction` for non-integral rationals.  Numeric values
are normalized with :func:`make_number`, so ``1`` and ``Fraction(1, 1)``
compare and hash the same while the symbol ``'1'`` stays distinct.

Bodies are trees of :class:`Lit`, :class:`Cmp`, :class:`And`, :class:`Or`,
:class:`Exists`, :class:`Forall`, :class:`TermEq` and :class:`TermNeq`.
``And(())`` is the always-true body and ``Or(())`` the always-false one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

Constant = Union[str, int, Fraction]

# prefix of predicates introduced for negative literals; '.' is not lexable
NEG_PREFIX = "n."


def make_number(value) -> Union[int, Fraction]:
    q = Fraction(value)
    return q.numerator if q.denominator == 1 else q


def is_number(c) -> bool:
    return isinstance(c, (int, Fraction)) and not isinstance(c, bool)


def const_key(c: Constant):
    """Total sort key: numbers (by value) before symbols (by text)."""
    if is_number(c):
        return (0, c, "")
    return (1, 0, c)


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Var, Constant]


def is_var(t) -> bool:
    return isinstance(t, Var)


class AggOp(enum.Enum):
    COUNT = "count"
    MIN = "min"
    MAX = "max"
    SUM = "sum"


class CmpOp(enum.Enum):
    EQ = "="
    NE = "!="
    LE = "<="
    LT = "<"
    GE = ">="
    GT = ">"

    @property
    def complement(self) -> "CmpOp":
        return _COMPLEMENT[self]


_COMPLEMENT = {
    CmpOp.EQ: CmpOp.NE,
    CmpOp.NE: CmpOp.EQ,
    CmpOp.LE: CmpOp.GT,
    CmpOp.GT: CmpOp.LE,
    CmpOp.GE: CmpOp.LT,
    CmpOp.LT: CmpOp.GE,
}


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple[str, int]:
        return (self.pred, len(self.args))

    def is_ground(self) -> bool:
        return not any(is_var(a) for a in self.args)

    def __str__(self) -> str:
        return format_atom(self)


@dataclass(frozen=True)
class Lit:
    atom: Atom
    positive: bool = True

    def negate(self) -> "Lit":
        return Lit(self.atom, not self.positive)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"not {self.atom}"


@dataclass(frozen=True)
class SetExpr:
    vars: tuple[Var, ...]
    body: tuple[Lit, ...]


@dataclass(frozen=True)
class Cmp:
    agg: AggOp
    set: SetExpr
    op: CmpOp
    rhs: Term

    def complement(self) -> "Cmp":
        return Cmp(self.agg, self.set, self.op.complement, self.rhs)


@dataclass(frozen=True)
class And:
    items: tuple = ()


@dataclass(frozen=True)
class Or:
    items: tuple = ()


@dataclass(frozen=True)
class Exists:
    vars: tuple[Var, ...]
    body: "Body"


@dataclass(frozen=True)
class Forall:
    vars: tuple[Var, ...]
    body: "Body"


@dataclass(frozen=True)
class TermEq:
    left: Term
    right: Term


@dataclass(frozen=True)
class TermNeq:
    left: Term
    right: Term


Body = Union[Lit, Cmp, And, Or, Exists, Forall, TermEq, TermNeq]

TRUE = And(())
FALSE = Or(())


@dataclass(frozen=True)
class Rule:
    head: Lit
    body: Optional[Body] = None

    @property
    def is_fact(self) -> bool:
        return self.body is None

    def __str__(self) -> str:
        return format_rule(self)


@dataclass(frozen=True)
class Declaration:
    """Per-predicate declaration; ``None`` fields are left to defaults."""

    pred: tuple[str, int]
    certain: Optional[bool] = None
    complete: Optional[bool] = None
    closed: Optional[bool] = None

    @property
    def uncertain_complete(self) -> bool:
        return self.certain is False and bool(self.complete)


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()
    declarations: tuple[Declaration, ...] = ()

    def declaration(self, pred: tuple[str, int]) -> Declaration:
        for d in self.declarations:
            if d.pred == pred:
                return d
        return Declaration(pred)

    def predicates(self) -> set[tuple[str, int]]:
        preds = {d.pred for d in self.declarations}
        for r in self.rules:
            preds.add(r.head.atom.key)
            if r.body is not None:
                preds.update(lit.atom.key for lit in iter_literals(r.body))
        return preds

    def __str__(self) -> str:
        return format_program(self)


# ---------------------------------------------------------------------------
# traversal helpers


def iter_hypotheses(body: Body) -> Iterator[Body]:
    """Yield the leaf hypotheses of a body (literals, comparisons, term tests)."""
    if isinstance(body, (And, Or)):
        for item in body.items:
            yield from iter_hypotheses(item)
    elif isinstance(body, (Exists, Forall)):
        yield from iter_hypotheses(body.body)
    else:
        yield body


def iter_literals(body: Body) -> Iterator[Lit]:
    """Every predicate literal, including those inside set expressions."""
    for h in iter_hypotheses(body):
        if isinstance(h, Lit):
            yield h
        elif isinstance(h, Cmp):
            yield from h.set.body


def term_vars(terms) -> set[str]:
    return {t.name for t in terms if is_var(t)}


def free_vars(body: Body) -> set[str]:
    """Names of variables occurring free in ``body``."""
    if isinstance(body, Lit):
        return term_vars(body.atom.args)
    if isinstance(body, Cmp):
        inner = set()
        for lit in body.set.body:
            inner |= term_vars(lit.atom.args)
        inner -= {v.name for v in body.set.vars}
        return inner | term_vars([body.rhs])
    if isinstance(body, (And, Or)):
        out: set[str] = set()
        for item in body.items:
            out |= free_vars(item)
        return out
    if isinstance(body, (Exists, Forall)):
        return free_vars(body.body) - {v.name for v in body.vars}
    if isinstance(body, (TermEq, TermNeq)):
        return term_vars([body.left, body.right])
    raise TypeError(f"not a body: {body!r}")


def rule_vars(rule: Rule) -> set[str]:
    out = term_vars(rule.head.atom.args)
    if rule.body is not None:
        out |= free_vars(rule.body)
    return out


def subst_term(t: Term, env: dict) -> Term:
    if is_var(t):
        return env.get(t.name, t)
    return t


def subst_atom(atom: Atom, env: dict) -> Atom:
    if not env or atom.is_ground():
        return atom
    return Atom(atom.pred, tuple(subst_term(a, env) for a in atom.args))


def subst_lit(lit: Lit, env: dict) -> Lit:
    atom = subst_atom(lit.atom, env)
    return lit if atom is lit.atom else Lit(atom, lit.positive)


def subst_set(s: SetExpr, env: dict) -> SetExpr:
    bound = {v.name for v in s.vars}
    inner = {k: v for k, v in env.items() if k not in bound}
    if not inner:
        return s
    return SetExpr(s.vars, tuple(subst_lit(lit, inner) for lit in s.body))


def subst(body: Body, env: dict) -> Body:
    """Replace free variables by terms; bound variables shadow ``env``."""
    if not env:
        return body
    if isinstance(body, Lit):
        return subst_lit(body, env)
    if isinstance(body, Cmp):
        return Cmp(body.agg, subst_set(body.set, env), body.op, subst_term(body.rhs, env))
    if isinstance(body, (And, Or)):
        return type(body)(tuple(subst(i, env) for i in body.items))
    if isinstance(body, (Exists, Forall)):
        bound = {v.name for v in body.vars}
        inner = {k: v for k, v in env.items() if k not in bound}
        return type(body)(body.vars, subst(body.body, inner))
    if isinstance(body, TermEq):
        return TermEq(subst_term(body.left, env), subst_term(body.right, env))
    if isinstance(body, TermNeq):
        return TermNeq(subst_term(body.left, env), subst_term(body.right, env))
    raise TypeError(f"not a body: {body!r}")


def constants_in_body(body: Body) -> Iterator[Constant]:
    for h in iter_hypotheses(body):
        if isinstance(h, Lit):
            yield from (a for a in h.atom.args if not is_var(a))
        elif isinstance(h, Cmp):
            for lit in h.set.body:
                yield from (a for a in lit.atom.args if not is_var(a))
            if not is_var(h.rhs):
                yield h.rhs
        elif isinstance(h, (TermEq, TermNeq)):
            yield from (t for t in (h.left, h.right) if not is_var(t))


# ---------------------------------------------------------------------------
# printing


def format_constant(c: Constant) -> str:
    if isinstance(c, str):
        return "'" + c.replace("\\", "\\\\").replace("'", "\\'") + "'"
    if isinstance(c, int):
        return str(c)
    return _format_fraction(c)


def _format_fraction(q: Fraction) -> str:
    # decimal input only ever yields denominators of the form 2^a 5^b
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q) * 10**digits
    whole, frac = divmod(int(scaled), 10**digits)
    sign = "-" if q < 0 else ""
    return f"{sign}{whole}.{str(frac).zfill(digits)}"


def format_term(t: Term) -> str:
    return t.name if is_var(t) else format_constant(t)


def format_atom(atom: Atom) -> str:
    if not atom.args:
        return atom.pred
    return f"{atom.pred}({', '.join(format_term(a) for a in atom.args)})"


def _format_vars(vs) -> str:
    return ", ".join(v.name for v in vs)


def format_body(body: Body, ctx: str = "top") -> str:
    """Render a body; ``ctx`` is the enclosing connective ("top", "and", "or")."""
    if isinstance(body, Lit):
        return str(body)
    if isinstance(body, Cmp):
        inner = ", ".join(str(lit) for lit in body.set.body)
        return (
            f"{body.agg.value} {{{_format_vars(body.set.vars)} : {inner}}} "
            f"{body.op.value} {format_term(body.rhs)}"
        )
    if isinstance(body, And):
        if not body.items:
            return "true"
        text = ", ".join(format_body(i, "and") for i in body.items)
        return f"({text})" if ctx == "and" or len(body.items) == 1 else text
    if isinstance(body, Or):
        if not body.items:
            return "false"
        text = " or ".join(format_body(i, "or") for i in body.items)
        return f"({text})" if ctx != "top" or len(body.items) == 1 else text
    if isinstance(body, Exists):
        return f"(some {_format_vars(body.vars)} | {format_body(body.body)})"
    if isinstance(body, Forall):
        return f"(each {_format_vars(body.vars)} | {format_body(body.body)})"
    if isinstance(body, TermEq):
        return f"{format_term(body.left)} = {format_term(body.right)}"
    if isinstance(body, TermNeq):
        return f"{format_term(body.left)} != {format_term(body.right)}"
    raise TypeError(f"not a body: {body!r}")


def format_rule(rule: Rule) -> str:
    head = str(rule.head)
    if rule.body is None:
        return f"{head}."
    return f"{head} :- {format_body(rule.body)}."


def format_declaration(d: Declaration) -> str:
    words = []
    if d.certain is not None:
        words.append("certain" if d.certain else "uncertain")
    if d.complete is not None:
        words.append("complete" if d.complete else "incomplete")
    if d.closed is not None:
        words.append("closed" if d.closed else "open")
    name, arity = d.pred
    return " ".join([f"@declare {name}/{arity}", *words]) + "."


def format_program(prog: Program) -> str:
    lines = [format_declaration(d) for d in prog.declarations]
    lines += [format_rule(r) for r in prog.rules]
    return "\n".join(lines) + ("\n" if lines else "")
