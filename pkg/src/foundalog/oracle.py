"""Brute-force reference semantics for differential testing.

Everything here is written straight from the definitions and shares only
the AST with the engine: no grounding, completion, DNF, or derivability code
is reused.  Completion is applied semantically (a negative literal is
derived exactly when every clause for the atom has a false body),
unfounded sets are found by testing every subset, and constraint models by
testing every 2-valued interpretation of the whole atom universe.

Truth values are ``True``, ``False`` and ``None`` (undefined).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass
from typing import Iterable, Optional

import networkx as nx

from .errors import OracleScaleError
from .syntax import (
    AggOp,
    And,
    Atom,
    Cmp,
    CmpOp,
    Exists,
    Forall,
    Lit,
    Or,
    Program,
    TermEq,
    TermNeq,
    Var,
    const_key,
)

MAX_UNIVERSE = 22
MAX_UNFOUNDED_CANDIDATES = 16


# ---------------------------------------------------------------------------
# Kleene connectives on True / None / False


def k_not(v):
    return None if v is None else not v


def k_and(values: Iterable):
    seen_none = False
    for v in values:
        if v is False:
            return False
        if v is None:
            seen_none = True
    return None if seen_none else True


def k_or(values: Iterable):
    seen_none = False
    for v in values:
        if v is True:
            return True
        if v is None:
            seen_none = True
    return None if seen_none else False


# ---------------------------------------------------------------------------
# plain aggregates


def _numeric(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def aggregate_2valued(agg: AggOp, values: Iterable):
    """The ordinary value of an aggregate over a fully known set.

    Raises ``TypeError`` for min/max/sum over non-numeric elements and
    ``ValueError`` for min/max of the empty set.
    """
    values = set(values)
    if agg is AggOp.COUNT:
        return len(values)
    if agg is AggOp.SUM:
        if not all(_numeric(v) for v in values):
            raise TypeError("sum over non-numbers")
        total = 0
        for v in values:
            total += v
        return total
    ok = all(_numeric(v) or (isinstance(v, tuple) and all(_numeric(x) for x in v)) for v in values)
    if not ok:
        raise TypeError(f"{agg.value} over non-numeric values")
    if not values:
        raise ValueError(f"{agg.value} of the empty set")
    ordered = sorted(values)
    return ordered[-1] if agg is AggOp.MAX else ordered[0]


def compare_values(op: CmpOp, left, right) -> Optional[bool]:
    """Ordinary comparison, ``None`` when an ordering is applied across types."""
    if op is CmpOp.EQ:
        return left == right
    if op is CmpOp.NE:
        return left != right
    if not (_numeric(left) and _numeric(right)):
        return None
    return {
        CmpOp.LT: left < right,
        CmpOp.LE: left <= right,
        CmpOp.GT: left > right,
        CmpOp.GE: left >= right,
    }[op]


# ---------------------------------------------------------------------------
# derivability, one row per line of the derivability table


def _nums(xs):
    return all(_numeric(x) for x in xs)


def _nums_star(xs):
    return all(_numeric(x) or (isinstance(x, tuple) and all(_numeric(y) for y in x)) for x in xs)


def _cmp(op, a, b):
    return compare_values(op, a, b) is True


def _agg(fn, xs):
    xs = sorted(xs)
    return xs[-1] if fn == "max" else xs[0]


def _count_eq(op):
    return lambda t, u, k: len(u) == 0 and _cmp(op, len(t), k)


def _count_le(op):
    return lambda t, u, k: _cmp(op, len(t | u), k)


def _count_ge(op):
    return lambda t, u, k: _cmp(op, len(t), k)


def _ext_eq(fn, op):
    return lambda t, u, k: bool(t) and _nums_star(t) and len(u) == 0 and _cmp(op, _agg(fn, t), k)


def _ext_all(fn, op):
    # every element of T ∪ UD is within the bound k (vacuous when empty)
    def check(t, u, k):
        if not (t | u):
            return _numeric(k)
        return _nums_star(t | u) and _cmp(op, _agg(fn, t | u), k)
    return check


def _ext_true(fn, op):
    # condition on the extreme of T, types checked over T ∪ UD
    return lambda t, u, k: bool(t) and _nums_star(t | u) and _cmp(op, _agg(fn, t), k)


def _sum_eq(op):
    return lambda t, u, k: _nums(t) and len(u) == 0 and _cmp(op, sum(t), k)


def _sum_le(op):
    return lambda t, u, k: _nums(t | u) and _cmp(op, sum(t) + sum(i for i in u if i > 0), k)


def _sum_ge(op):
    return lambda t, u, k: _nums(t | u) and _cmp(op, sum(t) + sum(i for i in u if i < 0), k)


E, N, LE, LT, GE, GT = CmpOp.EQ, CmpOp.NE, CmpOp.LE, CmpOp.LT, CmpOp.GE, CmpOp.GT
C, MX, MN, S = AggOp.COUNT, AggOp.MAX, AggOp.MIN, AggOp.SUM

DERIVABLE = {
    (C, E): _count_eq(E), (C, N): _count_eq(N),
    (C, LE): _count_le(LE), (C, LT): _count_le(LT),
    (C, GE): _count_ge(GE), (C, GT): _count_ge(GT),
    (MX, E): _ext_eq("max", E), (MX, N): _ext_eq("max", N),
    (MX, LE): _ext_all("max", LE), (MX, LT): _ext_all("max", LT),
    (MX, GE): _ext_true("max", GE), (MX, GT): _ext_true("max", GT),
    (MN, E): _ext_eq("min", E), (MN, N): _ext_eq("min", N),
    (MN, GE): _ext_all("min", GE), (MN, GT): _ext_all("min", GT),
    (MN, LE): _ext_true("min", LE), (MN, LT): _ext_true("min", LT),
    (S, E): _sum_eq(E), (S, N): _sum_eq(N),
    (S, LE): _sum_le(LE), (S, LT): _sum_le(LT),
    (S, GE): _sum_ge(GE), (S, GT): _sum_ge(GT),
}
COMPLEMENT = {E: N, N: E, LE: GT, GT: LE, GE: LT, LT: GE}


# ---------------------------------------------------------------------------
# reference model of a program


def _vars_of_terms(terms) -> set:
    return {t.name for t in terms if isinstance(t, Var)}


def _free(body) -> set:
    if isinstance(body, Lit):
        return _vars_of_terms(body.atom.args)
    if isinstance(body, Cmp):
        inner = set().union(*(_vars_of_terms(l.atom.args) for l in body.set.body))
        return (inner - {v.name for v in body.set.vars}) | _vars_of_terms([body.rhs])
    if isinstance(body, (And, Or)):
        return set().union(*(_free(i) for i in body.items)) if body.items else set()
    if isinstance(body, (Exists, Forall)):
        return _free(body.body) - {v.name for v in body.vars}
    if isinstance(body, (TermEq, TermNeq)):
        return _vars_of_terms([body.left, body.right])
    raise TypeError(body)


def _walk_lits(body):
    if isinstance(body, Lit):
        yield None, body
    elif isinstance(body, Cmp):
        for lit in body.set.body:
            yield body, lit
    elif isinstance(body, (And, Or)):
        for i in body.items:
            yield from _walk_lits(i)
    elif isinstance(body, (Exists, Forall)):
        yield from _walk_lits(body.body)


def _val(term, env):
    return env[term.name] if isinstance(term, Var) else term


_POS_IN_POS = {(C, GT), (C, GE), (MX, GT), (MX, GE), (MN, LT), (MN, LE)}
_POS_IN_NEG = {(C, LT), (C, LE), (MX, LT), (MX, LE), (MN, GT), (MN, GE)}


Interp = dict  # Atom -> bool; absent atoms are undefined


class Reference:
    """Definition-level semantics of one program."""

    def __init__(self, prog: Program):
        self.prog = prog
        self.rules = [r for r in prog.rules if r.body is not None]
        self.facts = [r.head.atom for r in prog.rules if r.body is None]
        consts = set()
        preds = {d.pred for d in prog.declarations}
        for r in prog.rules:
            preds.add(r.head.atom.key)
            consts.update(a for a in r.head.atom.args if not isinstance(a, Var))
            if r.body is not None:
                for cmp, lit in _walk_lits(r.body):
                    preds.add(lit.atom.key)
                    consts.update(a for a in lit.atom.args if not isinstance(a, Var))
                    if cmp is not None and not isinstance(cmp.rhs, Var):
                        consts.add(cmp.rhs)
        self.domain = sorted(consts, key=const_key)
        self.preds = sorted(preds)
        self._resolve_declarations()

    # -- declarations ----------------------------------------------------

    def _resolve_declarations(self) -> None:
        g = nx.DiGraph()
        g.add_nodes_from(self.preds)
        # a symbol in the domain can make a growing max/min set ill-typed
        symbolic = not all(_numeric(c) for c in self.domain)
        for r in self.rules:
            q = r.head.atom.key
            for cmp, lit in _walk_lits(r.body):
                if cmp is None:
                    positive = lit.positive
                else:
                    key = (cmp.agg, cmp.op)
                    positive = (key in _POS_IN_POS and lit.positive) or (key in _POS_IN_NEG and not lit.positive)
                    if symbolic and lit.positive and cmp.agg is not C:
                        positive = False
                p = lit.atom.key
                if g.has_edge(q, p):
                    g[q][p]["nonpos"] = g[q][p]["nonpos"] or not positive
                else:
                    g.add_edge(q, p, nonpos=not positive)
        self.graph = g
        explicit = {d.pred: d for d in self.prog.declarations}
        forced = set()
        for comp in nx.strongly_connected_components(g):
            if any(d["nonpos"] for q, p, d in g.edges(data=True) if q in comp and p in comp):
                forced |= comp
        for p, d in explicit.items():
            if d.certain is False or (d.certain is None and (d.complete is not None or d.closed is not None)):
                forced.add(p)
        uncertain = set(forced)
        for p in self.preds:
            if nx.descendants(g, p) & forced:
                uncertain.add(p)
        self.uncertain = uncertain
        self.complete = {
            p for p in uncertain if explicit.get(p) is None or explicit[p].complete is not False
        }
        self.closed = {p for p in uncertain if explicit.get(p) is not None and explicit[p].closed}

    # -- atoms -------------------------------------------------------------

    def atoms(self, pred) -> list[Atom]:
        return [Atom(pred[0], args) for args in itertools.product(self.domain, repeat=pred[1])]

    def universe(self) -> list[Atom]:
        return [a for p in self.preds for a in self.atoms(p)]

    def assignments(self, names):
        names = sorted(names)
        for values in itertools.product(self.domain, repeat=len(names)):
            yield dict(zip(names, values))

    # -- truth -----------------------------------------------------------

    @staticmethod
    def lit_truth(lit: Lit, env, interp: Interp):
        atom = Atom(lit.atom.pred, tuple(_val(a, env) for a in lit.atom.args))
        v = interp.get(atom)
        return v if lit.positive else k_not(v)

    def set_partition(self, cmp: Cmp, env, interp: Interp):
        bound = [v.name for v in cmp.set.vars]
        outer = {k: v for k, v in env.items() if k not in bound}
        best = {}
        for inner in self.assignments(bound):
            full = {**outer, **inner}
            v = k_and(self.lit_truth(l, full, interp) for l in cmp.set.body)
            key = tuple(inner[n] for n in bound)
            key = key[0] if len(key) == 1 else key
            if v is True:
                best[key] = True
            elif v is None and best.get(key) is not True:
                best[key] = None
        t = {k for k, v in best.items() if v is True}
        u = {k for k, v in best.items() if v is None}
        return t, u

    def cmp_truth(self, cmp: Cmp, env, interp: Interp):
        t, u = self.set_partition(cmp, env, interp)
        k = _val(cmp.rhs, env)
        if DERIVABLE[(cmp.agg, cmp.op)](t, u, k):
            return True
        if DERIVABLE[(cmp.agg, COMPLEMENT[cmp.op])](t, u, k):
            return False
        return None

    def truth(self, body, env, interp: Interp):
        if isinstance(body, Lit):
            return self.lit_truth(body, env, interp)
        if isinstance(body, Cmp):
            return self.cmp_truth(body, env, interp)
        if isinstance(body, And):
            return k_and(self.truth(i, env, interp) for i in body.items)
        if isinstance(body, Or):
            return k_or(self.truth(i, env, interp) for i in body.items)
        if isinstance(body, (Exists, Forall)):
            names = [v.name for v in body.vars]
            parts = (self.truth(body.body, {**env, **a}, interp) for a in self.assignments(names))
            return k_or(parts) if isinstance(body, Exists) else k_and(parts)
        if isinstance(body, (TermEq, TermNeq)):
            same = _val(body.left, env) == _val(body.right, env)
            return same if isinstance(body, TermEq) else not same
        raise TypeError(body)

    def instances(self, atom: Atom):
        """``(rule, env)`` for every ground rule instance concluding ``atom``."""
        for r in self.rules:
            if r.head.atom.key != atom.key:
                continue
            names = _vars_of_terms(r.head.atom.args) | _free(r.body)
            for env in self.assignments(names):
                if tuple(_val(a, env) for a in r.head.atom.args) == atom.args:
                    yield r, env

    def supported(self, atom: Atom, interp: Interp) -> bool:
        """Some fact or rule instance concludes ``atom`` with a true body."""
        if atom in self.facts:
            return True
        return any(self.truth(r.body, env, interp) is True for r, env in self.instances(atom))

    def refuted(self, atom: Atom, interp: Interp) -> bool:
        """The completion of ``atom``'s predicate derives its negation."""
        if atom.key not in self.complete or atom in self.facts:
            return False
        return all(self.truth(r.body, env, interp) is False for r, env in self.instances(atom))

    # -- founded ---------------------------------------------------------

    def scc_order(self) -> list[set]:
        cond = nx.condensation(self.graph)
        order = list(nx.lexicographical_topological_sort(cond, key=lambda n: min(cond.nodes[n]["members"])))
        return [cond.nodes[n]["members"] for n in reversed(order)]

    def founded0(self, injected: Interp) -> Interp:
        interp: Interp = {}
        for scc in self.scc_order():
            for a, v in injected.items():
                if a.key in scc:
                    interp[a] = v
            atoms = [a for p in sorted(scc) for a in self.atoms(p)]
            changed = True
            while changed:
                changed = False
                snapshot = dict(interp)
                for a in atoms:
                    if a in interp:
                        continue
                    if self.supported(a, snapshot):
                        interp[a] = True
                        changed = True
                    elif self.refuted(a, snapshot):
                        interp[a] = False
                        changed = True
            for p in sorted(scc):
                if p not in self.uncertain:
                    for a in self.atoms(p):
                        interp.setdefault(a, False)
        return interp

    def _defeated(self, body, env, interp: Interp, unfounded: set, with_u: Interp) -> bool:
        """Every DNF disjunct of the instance is blocked by one of the three clauses."""
        if isinstance(body, Lit):
            if self.lit_truth(body, env, interp) is False:
                return True
            atom = Atom(body.atom.pred, tuple(_val(a, env) for a in body.atom.args))
            return body.positive and atom.key in self.closed and atom in unfounded
        if isinstance(body, Cmp):
            if self.cmp_truth(body, env, interp) is False:
                return True
            return self.cmp_truth(body, env, with_u) is False
        if isinstance(body, And):
            return any(self._defeated(i, env, interp, unfounded, with_u) for i in body.items)
        if isinstance(body, Or):
            return all(self._defeated(i, env, interp, unfounded, with_u) for i in body.items)
        if isinstance(body, (Exists, Forall)):
            names = [v.name for v in body.vars]
            parts = (self._defeated(body.body, {**env, **a}, interp, unfounded, with_u) for a in self.assignments(names))
            return all(parts) if isinstance(body, Exists) else any(parts)
        if isinstance(body, (TermEq, TermNeq)):
            return self.truth(body, env, interp) is False
        raise TypeError(body)

    def is_unfounded(self, unfounded: set, interp: Interp) -> bool:
        if any(interp.get(a) is True for a in unfounded):
            return False
        with_u = dict(interp)
        with_u.update({a: False for a in unfounded})
        for a in unfounded:
            if a in self.facts:
                return False
            for r, env in self.instances(a):
                if not self._defeated(r.body, env, interp, unfounded, with_u):
                    return False
        return True

    def greatest_unfounded(self, interp: Interp) -> set:
        candidates = [a for p in sorted(self.closed) for a in self.atoms(p) if interp.get(a) is not True]
        if len(candidates) > MAX_UNFOUNDED_CANDIDATES:
            raise OracleScaleError(f"{len(candidates)} unfounded-set candidates exceed {MAX_UNFOUNDED_CANDIDATES}")
        result: set = set()
        for bits in itertools.product((False, True), repeat=len(candidates)):
            subset = {a for a, b in zip(candidates, bits) if b}
            if subset - result and self.is_unfounded(subset, interp):
                result |= subset
        return result

    def founded(self) -> Interp:
        interp: Interp = {}
        while True:
            base = self.founded0(interp)
            nxt = dict(base)
            for a in self.greatest_unfounded(base):
                nxt[a] = False
            if nxt == interp:
                return interp
            interp = nxt

    # -- models ----------------------------------------------------------

    def models_completion(self, m: Interp) -> bool:
        """2-valued ``m`` satisfies the facts, the rules, and the completion rules."""
        if any(m.get(a) is not True for a in self.facts):
            return False
        for r in self.rules:
            names = _vars_of_terms(r.head.atom.args) | _free(r.body)
            for env in self.assignments(names):
                head = Atom(r.head.atom.pred, tuple(_val(a, env) for a in r.head.atom.args))
                if self.truth(r.body, env, m) is True and m.get(head) is not True:
                    return False
        for p in self.complete:
            for a in self.atoms(p):
                if self.refuted(a, m) and m.get(a) is not False:
                    return False
        return True

    def constraint_models(self) -> list[Interp]:
        # every constraint model extends the founded model, so only the
        # atoms it leaves open need choosing
        base = self.founded()
        universe = [a for a in self.universe() if a not in base]
        if len(universe) > MAX_UNIVERSE:
            raise OracleScaleError(f"{len(universe)} open atoms exceed {MAX_UNIVERSE}")
        out = []
        for bits in itertools.product((False, True), repeat=len(universe)):
            m = {**base, **dict(zip(universe, bits))}
            if not self.models_completion(m):
                continue
            if any(m[a] is not False for a in self.greatest_unfounded(m)):
                continue
            out.append(m)
        return out


# ---------------------------------------------------------------------------
# public entry points


@dataclass(frozen=True)
class OracleModel:
    true: frozenset
    false: frozenset


def _as_model(interp: Interp) -> OracleModel:
    return OracleModel(
        frozenset(a for a, v in interp.items() if v is True),
        frozenset(a for a, v in interp.items() if v is False),
    )


def _as_interp(value) -> Interp:
    if isinstance(value, dict):
        return value
    pos, neg = (value.pos, value.neg) if hasattr(value, "pos") else value
    out = {a: True for a in pos}
    out.update({a: False for a in neg})
    return out


def founded_bruteforce(prog: Program) -> OracleModel:
    return _as_model(Reference(prog).founded())


def enumerate_constraint_models_bruteforce(prog: Program) -> set[OracleModel]:
    return {_as_model(m) for m in Reference(prog).constraint_models()}


def greatest_unfounded_bruteforce(prog: Program, interp) -> frozenset:
    """Union of all unfounded subsets of the closed atoms not true in ``interp``."""
    return frozenset(Reference(prog).greatest_unfounded(_as_interp(interp)))


_UPPER = {(MX, LE), (MX, LT), (MN, GE), (MN, GT)}


def comparison_2valued(agg: AggOp, op: CmpOp, values, k) -> Optional[bool]:
    """Truth of ``agg values op k`` for a fully known set; ``None`` if ill-typed.

    An empty set satisfies every upper bound of max (lower bound of min)
    and no lower bound; equality tests on its extreme are ill-typed.
    """
    try:
        value = aggregate_2valued(agg, values)
    except TypeError:
        return None
    except ValueError:
        if op in (E, N):
            return None
        return _numeric(k) if (agg, op) in _UPPER else False
    return compare_values(op, value, k)


def comparison_in_completions(prog: Program, cmp: Cmp, interp) -> tuple[bool, bool]:
    """Whether ground ``cmp`` holds in every / fails in every 2-valued completion of ``interp``.

    Completions range over the undefined atoms of the set expression's
    ground bodies.  A completion where the comparison is ill-typed counts
    as neither holding nor failing.
    """
    ref = Reference(prog)
    base = _as_interp(interp)
    atoms = set()
    for inner in ref.assignments([v.name for v in cmp.set.vars]):
        for lit in cmp.set.body:
            atoms.add(Atom(lit.atom.pred, tuple(_val(a, inner) for a in lit.atom.args)))
    open_atoms = sorted((a for a in atoms if a not in base), key=lambda a: (a.pred, [const_key(x) for x in a.args]))
    always, never = True, True
    for bits in itertools.product((False, True), repeat=len(open_atoms)):
        j = {**base, **dict(zip(open_atoms, bits))}
        t, _ = ref.set_partition(cmp, {}, j)
        holds = comparison_2valued(cmp.agg, cmp.op, t, cmp.rhs)
        if holds is not True:
            always = False
        if holds is not False:
            never = False
    return always, never
