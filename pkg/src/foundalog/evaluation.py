"""Three-valued truth of ground bodies and derivability of aggregate comparisons."""

from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Iterable

from .errors import InconsistencyError
from .grounding import ground_set
from .syntax import (
    NEG_PREFIX,
    AggOp,
    And,
    Atom,
    Cmp,
    CmpOp,
    Exists,
    Forall,
    Lit,
    Or,
    SetExpr,
    TermEq,
    TermNeq,
    const_key,
    format_atom,
    is_number,
    is_var,
    subst,
)


class TruthValue(enum.IntEnum):
    """Kleene truth values ordered F < UD < T, so and/or are min/max."""

    F = 0
    UD = 1
    T = 2

    def __invert__(self) -> "TruthValue":
        return TruthValue(2 - self.value)


T, F, UD = TruthValue.T, TruthValue.F, TruthValue.UD


@lru_cache(maxsize=None)
def unname(atom: Atom) -> tuple[Atom, bool]:
    """Map a possibly renamed atom ``n.P(..)`` to ``(P(..), False)``."""
    if atom.pred.startswith(NEG_PREFIX):
        return Atom(atom.pred[len(NEG_PREFIX):], atom.args), False
    return atom, True


def atom_sort_key(atom: Atom):
    return (atom.pred, len(atom.args), tuple(const_key(a) for a in atom.args))


class Interpretation:
    """A consistent set of ground predicate literals.

    Stored as the atoms that are true (``pos``) and false (``neg``).  Atoms
    of renamed predicates ``n.P`` are looked up as the negation of ``P``.
    """

    __slots__ = ("pos", "neg", "_hash")

    def __init__(self, pos: Iterable[Atom] = (), neg: Iterable[Atom] = ()):
        self.pos = frozenset(pos)
        self.neg = frozenset(neg)
        clash = self.pos & self.neg
        if clash:
            shown = ", ".join(sorted(map(format_atom, clash)))
            raise InconsistencyError(f"inconsistent interpretation: {shown}")
        self._hash = None

    @classmethod
    def from_literals(cls, lits: Iterable[Lit]) -> "Interpretation":
        pos, neg = set(), set()
        for lit in lits:
            atom, sign = unname(lit.atom)
            (pos if sign == lit.positive else neg).add(atom)
        return cls(pos, neg)

    def truth(self, atom: Atom) -> TruthValue:
        base, sign = unname(atom)
        if base in self.pos:
            return T if sign else F
        if base in self.neg:
            return F if sign else T
        return UD

    def literal_truth(self, lit: Lit) -> TruthValue:
        t = self.truth(lit.atom)
        return t if lit.positive else ~t

    def literals(self) -> set[Lit]:
        return {Lit(a) for a in self.pos} | {Lit(a, False) for a in self.neg}

    def union(self, other: "Interpretation") -> "Interpretation":
        return Interpretation(self.pos | other.pos, self.neg | other.neg)

    __or__ = union

    def with_false(self, atoms: Iterable[Atom]) -> "Interpretation":
        return Interpretation(self.pos, self.neg | frozenset(atoms))

    def __le__(self, other: "Interpretation") -> bool:
        return self.pos <= other.pos and self.neg <= other.neg

    def __eq__(self, other) -> bool:
        return isinstance(other, Interpretation) and self.pos == other.pos and self.neg == other.neg

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.pos, self.neg))
        return self._hash

    def __len__(self) -> int:
        return len(self.pos) + len(self.neg)

    def __repr__(self) -> str:
        parts = sorted(map(format_atom, self.pos)) + [f"not {a}" for a in sorted(map(format_atom, self.neg))]
        return "{" + ", ".join(parts) + "}"


# ---------------------------------------------------------------------------
# set expressions


def gi_partition(sexpr: SetExpr, interp: Interpretation, domain: tuple) -> tuple[frozenset, frozenset]:
    """Tuples of ``sexpr`` whose body is true, and those only undefined.

    A tuple counts as true if any of its ground bodies is true; as undefined
    if none is true and at least one is undefined.  Single-variable tuples
    are unwrapped to their value.
    """
    best: dict = {}
    unwrap = len(sexpr.vars) == 1
    for inst in ground_set(sexpr, domain):
        t = T
        for lit in inst.body:
            lt = interp.literal_truth(lit)
            if lt < t:
                t = lt
                if t is F:
                    break
        if t is F:
            continue
        key = inst.tuple[0] if unwrap else inst.tuple
        if best.get(key, F) < t:
            best[key] = t
    true = frozenset(k for k, t in best.items() if t is T)
    undef = frozenset(k for k, t in best.items() if t is UD)
    return true, undef


def gi_by_truth(sexpr: SetExpr, interp: Interpretation, t: TruthValue, domain: tuple) -> frozenset:
    true, undef = gi_partition(sexpr, interp, domain)
    if t is T:
        return true
    if t is UD:
        return undef
    everything = {inst.tuple[0] if len(sexpr.vars) == 1 else inst.tuple for inst in ground_set(sexpr, domain)}
    return frozenset(everything - true - undef)


# ---------------------------------------------------------------------------
# derivability of comparisons


def _is_num_star(values) -> bool:
    """Numbers, or tuples of numbers; a 1-variable set holds plain numbers."""
    return all(
        is_number(v) or (isinstance(v, tuple) and all(is_number(x) for x in v)) for v in values
    )


def _is_num(values) -> bool:
    return all(is_number(v) for v in values)


def compare(op: CmpOp, value, k) -> bool:
    """Exact comparison; orderings hold only between like-typed numerics."""
    if op is CmpOp.EQ:
        return value == k
    if op is CmpOp.NE:
        return value != k
    if not (is_number(value) and is_number(k)):
        return False
    if op is CmpOp.LE:
        return value <= k
    if op is CmpOp.LT:
        return value < k
    if op is CmpOp.GE:
        return value >= k
    return value > k


_EQ_FAMILY = (CmpOp.EQ, CmpOp.NE)
_LE_FAMILY = (CmpOp.LE, CmpOp.LT)
_GE_FAMILY = (CmpOp.GE, CmpOp.GT)


def derivable_from_sets(agg: AggOp, op: CmpOp, true: frozenset, undef: frozenset, k) -> bool:
    """Derivability given the true and undefined tuple sets of the aggregate."""
    both = true | undef
    if agg is AggOp.COUNT:
        if op in _EQ_FAMILY:
            return not undef and compare(op, len(true), k)
        if op in _LE_FAMILY:
            return compare(op, len(both), k)
        return compare(op, len(true), k)

    if agg is AggOp.SUM:
        if op in _EQ_FAMILY:
            return not undef and _is_num(true) and compare(op, sum(true), k)
        if not _is_num(both):
            return False
        if op in _LE_FAMILY:
            return compare(op, sum(true) + sum(v for v in undef if v > 0), k)
        return compare(op, sum(true) + sum(v for v in undef if v < 0), k)

    # min mirrors max with <= and >= swapped
    pick = max if agg is AggOp.MAX else min
    upper = _LE_FAMILY if agg is AggOp.MAX else _GE_FAMILY
    if op in _EQ_FAMILY:
        # the extreme of an empty set does not exist
        return bool(true) and not undef and _is_num_star(true) and compare(op, pick(true), k)
    if not _is_num_star(both):
        return False
    if op in upper:
        # a bound on every element; holds vacuously for the empty set, which
        # keeps e.g. max < k positive in negated set literals
        return compare(op, pick(both), k) if both else is_number(k)
    return bool(true) and compare(op, pick(true), k)


def derivable(cmp: Cmp, interp: Interpretation, domain: tuple) -> bool:
    """Whether the ground comparison must hold however undefined atoms resolve."""
    if is_var(cmp.rhs):
        raise ValueError(f"comparison right-hand side {cmp.rhs} is not ground")
    true, undef = gi_partition(cmp.set, interp, domain)
    return derivable_from_sets(cmp.agg, cmp.op, true, undef, cmp.rhs)


def comparison_truth(cmp: Cmp, interp: Interpretation, domain: tuple) -> TruthValue:
    true, undef = gi_partition(cmp.set, interp, domain)
    if derivable_from_sets(cmp.agg, cmp.op, true, undef, cmp.rhs):
        return T
    if derivable_from_sets(cmp.agg, cmp.op.complement, true, undef, cmp.rhs):
        return F
    return UD


# ---------------------------------------------------------------------------
# bodies


def truth_of_body(body, interp: Interpretation, domain: tuple) -> TruthValue:
    """Kleene truth of a ground body; quantifiers are expanded on the fly."""
    if isinstance(body, Lit):
        return interp.literal_truth(body)
    if isinstance(body, Cmp):
        return comparison_truth(body, interp, domain)
    if isinstance(body, And):
        out = T
        for item in body.items:
            out = min(out, truth_of_body(item, interp, domain))
            if out is F:
                break
        return out
    if isinstance(body, Or):
        out = F
        for item in body.items:
            out = max(out, truth_of_body(item, interp, domain))
            if out is T:
                break
        return out
    if isinstance(body, (Exists, Forall)):
        names = [v.name for v in body.vars]
        parts = (
            subst(body.body, dict(zip(names, values)))
            for values in itertools.product(domain, repeat=len(names))
        )
        connective = Or if isinstance(body, Exists) else And
        return truth_of_body(connective(tuple(parts)), interp, domain)
    if isinstance(body, (TermEq, TermNeq)):
        if is_var(body.left) or is_var(body.right):
            raise ValueError("term test is not ground")
        equal = body.left == body.right
        return T if equal == isinstance(body, TermEq) else F
    raise TypeError(f"not a body: {body!r}")


def one_step(rules, facts: Iterable[Atom], interp: Interpretation, domain: tuple) -> Interpretation:
    """One round of inference over ground (renamed) rules.

    Returns the facts plus the conclusions of rules whose body is true in
    ``interp``.  Comparisons are not materialized: their truth is recomputed
    from the predicate literals whenever a body is evaluated.
    """
    heads = [Lit(a) for a in facts]
    for rule in rules:
        if rule.body is None or truth_of_body(rule.body, interp, domain) is T:
            heads.append(rule.head)
    return Interpretation.from_literals(heads)
