"""Seeded generator of small random programs for property tests."""

from __future__ import annotations

import random

from foundalog.analysis import domain_of, validate_declarations
from foundalog.errors import FoundalogError
from foundalog.parser import parse

PREDS = ["p", "q", "r"]
CONSTS = ["1", "2", "'a'"]
AGGS = ["count", "count", "max", "min", "sum"]
OPS = ["=", "!=", "<", "<=", ">", ">="]
VARS = ["X", "Y"]


class Gen:
    def __init__(self, rng: random.Random):
        self.rng = rng
        n = rng.choice([1, 2, 2, 3, 3])
        self.preds = PREDS[:n]
        self.arity = {p: rng.choice([0, 1, 1, 1, 2]) for p in self.preds}
        self.consts = rng.sample(CONSTS, rng.choice([1, 2, 3, 3]))

    def term(self, vars_ok=True) -> str:
        if vars_ok and self.rng.random() < 0.6:
            return self.rng.choice(VARS)
        return self.rng.choice(self.consts)

    def atom(self, pred=None, vars_ok=True) -> str:
        pred = pred or self.rng.choice(self.preds)
        a = self.arity[pred]
        if a == 0:
            return pred
        return f"{pred}({', '.join(self.term(vars_ok) for _ in range(a))})"

    def lit(self) -> str:
        neg = "not " if self.rng.random() < 0.35 else ""
        return neg + self.atom()

    def comparison(self) -> str:
        unary = [p for p in self.preds if self.arity[p] >= 1]
        if not unary:
            return self.lit()
        p = self.rng.choice(unary)
        args = ["Z"] + [self.term() for _ in range(self.arity[p] - 1)]
        neg = "not " if self.rng.random() < 0.25 else ""
        agg = self.rng.choice(AGGS)
        rhs = self.rng.choice(["0", "1", "2"] + self.consts)
        return f"{agg} {{Z : {neg}{p}({', '.join(args)})}} {self.rng.choice(OPS)} {rhs}"

    def hyp(self) -> str:
        r = self.rng.random()
        if r < 0.45:
            return self.lit()
        if r < 0.85:
            return self.comparison()
        q = self.rng.choice(["some", "each"])
        return f"({q} Y | {self.lit()} or {self.lit()})"

    def body(self) -> str:
        items = [self.hyp() for _ in range(self.rng.randint(1, 2))]
        if len(items) == 2 and self.rng.random() < 0.3:
            return f"{items[0]} or {items[1]}"
        return ", ".join(items)

    def rule(self) -> str:
        if self.rng.random() < 0.3:
            return self.atom(vars_ok=False) + "."
        return f"{self.atom()} :- {self.body()}."

    def declarations(self) -> list[str]:
        out = []
        for p in self.preds:
            r = self.rng.random()
            words = None
            if r < 0.15:
                words = "uncertain incomplete"
            elif r < 0.3:
                words = "uncertain complete"
            elif r < 0.5:
                words = "uncertain complete closed"
            elif r < 0.55:
                words = "certain"
            if words:
                out.append(f"@declare {p}/{self.arity[p]} {words}.")
        return out


def random_program(rng: random.Random, max_atoms: int = 8):
    """A parseable, validated program with at most ``max_atoms`` ground atoms."""
    while True:
        g = Gen(rng)
        rules = [g.rule() for _ in range(rng.randint(1, 4))]
        decls = g.declarations()
        for attempt in (decls, []):
            text = "\n".join(rules + attempt)
            try:
                prog = parse(text)
                validated = validate_declarations(prog)
            except FoundalogError:
                continue
            n = len(domain_of(prog))
            atoms = sum(n ** p[1] for p in (d.pred for d in validated.declarations))
            if atoms <= max_atoms:
                return text, prog
            break
