"""Recursive-descent parser for ``.fl`` rule programs.

Grammar (informal)::

    program     := statement*
    statement   := '@declare' NAME '/' INT word* '.'
                 | atom '.'
                 | atom ':-' body '.'
    body        := conj (('or' | ';') conj)*
    conj        := unary ((',' | 'and') unary)*
    unary       := 'not' atom | '(' body ')' | quantifier | comparison | atom
    quantifier  := ('some' | 'each') VAR (',' VAR)* '|' body
    comparison  := AGG '{' VAR (',' VAR)* ':' lit (',' lit)* '}' CMPOP term
    atom        := NAME ['(' [term (',' term)*] ')']
    term        := VAR | NAME | STRING | NUMBER

Quantifier bodies extend as far to the right as possible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal

from .errors import ParseError
from .syntax import (
    AggOp,
    And,
    Atom,
    Cmp,
    CmpOp,
    Declaration,
    Exists,
    Forall,
    Lit,
    Or,
    Program,
    Rule,
    SetExpr,
    Var,
    free_vars,
    iter_hypotheses,
    make_number,
    term_vars,
)

KEYWORDS = {"not", "and", "or", "some", "each", "count", "min", "max", "sum"}
DECL_WORDS = {
    "certain": ("certain", True),
    "uncertain": ("certain", False),
    "complete": ("complete", True),
    "incomplete": ("complete", False),
    "closed": ("closed", True),
    "open": ("closed", False),
}
CMP_OPS = {op.value: op for op in CmpOp}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|%[^\n]*)
  | (?P<nl>\n)
  | (?P<directive>@[A-Za-z_]+)
  | (?P<number>-?\d+(?:\.\d+)?)
  | (?P<string>'(?:[^'\\\n]|\\.)*')
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<op>:-|!=|<=|>=|[<>=(){},;|:./])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tok_text = m.group()
            if kind == "name" and tok_text in KEYWORDS:
                kind = "kw"
            tokens.append(Token(kind, tok_text, line, m.start() - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", r"\1", text[1:-1])


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers --------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text in texts

    def accept(self, *texts: str) -> Token | None:
        if self.at(*texts):
            tok = self.tok
            self.i += 1
            return tok
        return None

    def expect(self, text: str) -> Token:
        tok = self.accept(text)
        if tok is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    # -- grammar --------------------------------------------------------

    def program(self) -> Program:
        rules, decls = [], []
        while self.tok.kind != "eof":
            if self.tok.kind == "directive":
                decls.append(self.directive())
            else:
                rules.append(self.clause())
        seen = set()
        for d in decls:
            if d.pred in seen:
                raise ParseError(f"duplicate declaration for {d.pred[0]}/{d.pred[1]}")
            seen.add(d.pred)
        return Program(tuple(rules), tuple(decls))

    def directive(self) -> Declaration:
        tok = self.tok
        if tok.text != "@declare":
            raise self.error(f"unknown directive {tok.text!r}")
        self.i += 1
        name = self.expect_kind("name", "predicate name").text
        self.expect("/")
        arity = int(self.expect_kind("number", "arity").text)
        fields: dict[str, bool] = {}
        while not self.at("."):
            word = self.tok
            if word.kind != "name" or word.text not in DECL_WORDS:
                raise self.error(f"unknown declaration keyword {word.text!r}")
            field, value = DECL_WORDS[word.text]
            if field in fields and fields[field] != value:
                raise self.error(f"conflicting keyword {word.text!r}", word)
            fields[field] = value
            self.i += 1
        self.expect(".")
        return Declaration((name, arity), **fields)

    def clause(self) -> Rule:
        start = self.tok
        head = self.atom()
        if self.accept("."):
            if not head.is_ground():
                raise ParseError(f"fact {head} contains variables", start.line, start.col)
            return Rule(Lit(head))
        self.expect(":-")
        body = self.body()
        self.expect(".")
        check_rule_safety(head, body, start)
        return Rule(Lit(head), body)

    def body(self):
        items = [self.conj()]
        while self.accept("or", ";"):
            items.append(self.conj())
        return items[0] if len(items) == 1 else Or(tuple(items))

    def conj(self):
        items = [self.unary()]
        while self.accept(",", "and"):
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(tuple(items))

    def unary(self):
        tok = self.tok
        if self.accept("not"):
            if self.at(*(a.value for a in AggOp)) or (
                self.at("(") and self.peek().kind == "kw" and self.peek().text in {a.value for a in AggOp}
            ):
                raise self.error("negation cannot be applied to a comparison; flip the operator instead", tok)
            if self.tok.kind != "name":
                raise self.error("negation applies only to predicate atoms", tok)
            return Lit(self.atom(), False)
        if self.accept("("):
            inner = self.body()
            self.expect(")")
            return inner
        if self.at("some", "each"):
            return self.quantifier()
        if self.tok.kind == "kw" and self.tok.text in {a.value for a in AggOp}:
            return self.comparison()
        if self.tok.kind == "name":
            return Lit(self.atom())
        raise self.error(f"expected a hypothesis, found {self.tok.text or 'end of input'!r}")

    def var_list(self) -> tuple[Var, ...]:
        names = [self.expect_kind("var", "variable").text]
        while self.accept(","):
            names.append(self.expect_kind("var", "variable").text)
        if len(set(names)) != len(names):
            raise self.error("repeated variable in binder")
        return tuple(Var(n) for n in names)

    def quantifier(self):
        tok = self.tok
        kind = self.tok.text
        self.i += 1
        vs = self.var_list()
        self.expect("|")
        inner = self.body()
        missing = {v.name for v in vs} - free_vars(inner)
        if missing:
            raise self.error(f"quantified variable(s) {sorted(missing)} do not occur in the body", tok)
        return (Exists if kind == "some" else Forall)(vs, inner)

    def comparison(self) -> Cmp:
        tok = self.tok
        agg = AggOp(tok.text)
        self.i += 1
        self.expect("{")
        vs = self.var_list()
        self.expect(":")
        lits = [self.set_literal()]
        while self.accept(",", "and"):
            lits.append(self.set_literal())
        self.expect("}")
        if agg is AggOp.SUM and len(vs) != 1:
            raise self.error("sum requires a set expression with exactly one variable", tok)
        body_vars = term_vars(a for lit in lits for a in lit.atom.args)
        missing = {v.name for v in vs} - body_vars
        if missing:
            raise self.error(f"set variable(s) {sorted(missing)} do not occur in the set body", tok)
        op_tok = self.tok
        if op_tok.kind != "op" or op_tok.text not in CMP_OPS:
            raise self.error(f"expected a comparison operator, found {op_tok.text!r}")
        self.i += 1
        rhs = self.term()
        return Cmp(agg, SetExpr(vs, tuple(lits)), CMP_OPS[op_tok.text], rhs)

    def set_literal(self) -> Lit:
        positive = not self.accept("not")
        if self.tok.kind != "name":
            raise self.error("set expression bodies may contain only predicate literals")
        return Lit(self.atom(), positive)

    def atom(self) -> Atom:
        name = self.expect_kind("name", "predicate name").text
        args = []
        if self.accept("("):
            if not self.at(")"):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
            self.expect(")")
        return Atom(name, tuple(args))

    def term(self):
        tok = self.tok
        self.i += 1
        if tok.kind == "var":
            return Var(tok.text)
        if tok.kind == "name":
            return tok.text
        if tok.kind == "string":
            return _unquote(tok.text)
        if tok.kind == "number":
            return make_number(Decimal(tok.text))
        self.i -= 1
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def _vars_outside_rhs(body) -> set[str]:
    out: set[str] = set()
    for h in iter_hypotheses(body):
        if isinstance(h, Cmp):
            out |= free_vars(Cmp(h.agg, h.set, h.op, 0))
        else:
            out |= free_vars(h)
    return out


def check_rule_safety(head: Atom, body, where: Token | None = None) -> None:
    line, col = (where.line, where.col) if where else (0, 0)
    body_free = free_vars(body)
    unsafe = term_vars(head.args) - body_free
    if unsafe:
        raise ParseError(
            f"unsafe rule for {head.pred}: head variable(s) {sorted(unsafe)} do not occur in the body",
            line,
            col,
        )
    rhs_only = body_free - _vars_outside_rhs(body)
    if rhs_only:
        raise ParseError(
            f"comparison right-hand variable(s) {sorted(rhs_only)} are not bound by another hypothesis",
            line,
            col,
        )


def parse(text: str) -> Program:
    """Parse program text into a :class:`Program`."""
    return Parser(text).program()


def parse_declaration_override(text: str) -> Declaration:
    """Parse ``name/arity=word,word`` as used on the command line."""
    try:
        pred, _, words = text.partition("=")
        name, _, arity = pred.partition("/")
        fields: dict[str, bool] = {}
        for word in filter(None, (w.strip() for w in words.split(","))):
            field, value = DECL_WORDS[word]
            fields[field] = value
        return Declaration((name.strip(), int(arity)), **fields)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad declaration override {text!r}") from exc
