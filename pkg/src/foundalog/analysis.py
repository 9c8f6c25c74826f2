"""Static analysis: occurrence polarity, dependency graph, SCCs, declarations."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field

from .errors import DeclarationError
from .syntax import (
    AggOp,
    Cmp,
    CmpOp,
    Constant,
    Declaration,
    Lit,
    Program,
    const_key,
    constants_in_body,
    is_number,
    is_var,
    iter_hypotheses,
)

Pred = tuple[str, int]


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NON_POSITIVE = "non-positive"


# comparisons monotone in atoms of positive set literals
_UP = {
    (AggOp.COUNT, CmpOp.GT), (AggOp.COUNT, CmpOp.GE),
    (AggOp.MAX, CmpOp.GT), (AggOp.MAX, CmpOp.GE),
    (AggOp.MIN, CmpOp.LT), (AggOp.MIN, CmpOp.LE),
}
# comparisons monotone in atoms of negative set literals
_DOWN = {
    (AggOp.COUNT, CmpOp.LT), (AggOp.COUNT, CmpOp.LE),
    (AggOp.MAX, CmpOp.LT), (AggOp.MAX, CmpOp.LE),
    (AggOp.MIN, CmpOp.GT), (AggOp.MIN, CmpOp.GE),
}


def classify_occurrence(hyp, occurrence: Lit, numeric_domain: bool = True) -> Polarity:
    """Polarity of a predicate-atom occurrence inside hypothesis ``hyp``.

    ``occurrence`` is ``hyp`` itself for a literal hypothesis, or one of the
    literals of the set expression when ``hyp`` is a comparison.

    When the domain holds a symbol, a new element can make a max or min
    ill-typed, so growing its set no longer preserves truth; such
    occurrences are then non-positive.
    """
    if isinstance(hyp, Lit):
        return Polarity.POSITIVE if hyp.positive else Polarity.NON_POSITIVE
    if isinstance(hyp, Cmp):
        key = (hyp.agg, hyp.op)
        if key in _UP and occurrence.positive:
            if hyp.agg is not AggOp.COUNT and not numeric_domain:
                return Polarity.NON_POSITIVE
            return Polarity.POSITIVE
        if key in _DOWN and not occurrence.positive:
            return Polarity.POSITIVE
        return Polarity.NON_POSITIVE
    raise TypeError(f"no predicate occurrences in {hyp!r}")


def occurrences(body, numeric_domain: bool = True):
    """Yield ``(hypothesis, literal, polarity)`` for every predicate occurrence."""
    for h in iter_hypotheses(body):
        if isinstance(h, Lit):
            yield h, h, classify_occurrence(h, h)
        elif isinstance(h, Cmp):
            for lit in h.set.body:
                yield h, lit, classify_occurrence(h, lit, numeric_domain)


@dataclass
class DependencyGraph:
    nodes: set = field(default_factory=set)
    # (from, to) -> polarities of the occurrences inducing the edge
    edges: dict = field(default_factory=lambda: defaultdict(set))

    def add_edge(self, q, p, polarity: Polarity) -> None:
        self.nodes.update((q, p))
        self.edges[(q, p)].add(polarity)
        self._cache = None

    def labeled_edges(self) -> set[tuple]:
        return {(q, p, pol) for (q, p), pols in self.edges.items() for pol in pols}

    def successors(self, q) -> list:
        return self._derived()[0].get(q, [])

    def _derived(self):
        if getattr(self, "_cache", None) is None:
            succ = defaultdict(list)
            for (q, p) in sorted(self.edges):
                succ[q].append(p)
            comps = tarjan(sorted(self.nodes), lambda n: succ.get(n, []))
            self._cache = (succ, comps)
        return self._cache

    def reachable(self, q) -> set:
        """Nodes reachable from ``q`` by a path of length at least one."""
        seen: set = set()
        stack = list(self.successors(q))
        while stack:
            n = stack.pop()
            if n not in seen:
                seen.add(n)
                stack.extend(self.successors(n))
        return seen

    def depends_on(self, q, p) -> bool:
        return p in self.reachable(q)

    def sccs(self) -> list[frozenset]:
        return list(self._derived()[1])

    def circular_non_positive(self, p) -> bool:
        comp = next((c for c in self.sccs() if p in c), frozenset())
        return any(
            Polarity.NON_POSITIVE in pols and q in comp and r in comp
            for (q, r), pols in self.edges.items()
        )

    def scc_order(self, reverse_ties: bool = False) -> list[frozenset]:
        """SCCs with dependencies first; ties broken by smallest (or largest) member."""
        comps = self.sccs()
        index = {n: i for i, c in enumerate(comps) for n in c}
        needs: dict[int, set] = {i: set() for i in range(len(comps))}
        for (q, p) in self.edges:
            if index[q] != index[p]:
                needs[index[q]].add(index[p])
        done: set = set()
        order = []
        pick = max if reverse_ties else min
        while len(order) < len(comps):
            ready = [i for i in needs if i not in done and needs[i] <= done]
            i = pick(ready, key=lambda j: min(comps[j]))
            done.add(i)
            order.append(comps[i])
        return order


def tarjan(nodes, successors) -> list[frozenset]:
    """Strongly connected components, iterative Tarjan."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[frozenset] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    result.append(frozenset(comp))
    return result


def dependency_graph(prog: Program) -> DependencyGraph:
    """Dependency graph of ``prog``; heads are keyed by predicate regardless of sign."""
    dg = DependencyGraph()
    dg.nodes.update(prog.predicates())
    numeric = all(is_number(c) for c in constants_of(prog))
    for rule in prog.rules:
        if rule.body is None:
            continue
        q = rule.head.atom.key
        for _, lit, polarity in occurrences(rule.body, numeric):
            dg.add_edge(q, lit.atom.key, polarity)
    return dg


def validate_declarations(prog: Program, dg: DependencyGraph | None = None) -> Program:
    """Resolve every predicate's certainty, completeness and closedness.

    Returns a program whose declarations cover all predicates, sorted by
    predicate.  Certain predicates carry ``complete=None, closed=None``.
    """
    dg = dg or dependency_graph(prog)
    explicit = {d.pred: d for d in prog.declarations}
    if len(explicit) != len(prog.declarations):
        raise DeclarationError("duplicate declarations")
    preds = sorted(prog.predicates() | dg.nodes)

    seeds = set()
    for p in preds:
        d = explicit.get(p)
        if dg.circular_non_positive(p):
            seeds.add(p)
        elif d is not None and (
            d.certain is False or (d.certain is None and (d.complete is not None or d.closed is not None))
        ):
            seeds.add(p)
    uncertain = set(seeds)
    for p in preds:
        if p not in uncertain and dg.reachable(p) & seeds:
            uncertain.add(p)

    resolved = []
    for p in preds:
        d = explicit.get(p, Declaration(p))
        name = f"{p[0]}/{p[1]}"
        if p in uncertain:
            if d.certain:
                why = (
                    "has circular non-positive dependency"
                    if dg.circular_non_positive(p)
                    else "depends on an uncertain predicate"
                )
                raise DeclarationError(f"{name} cannot be certain: it {why}")
            complete = True if d.complete is None else d.complete
            closed = False if d.closed is None else d.closed
            if closed and not complete:
                raise DeclarationError(f"{name} is closed but not complete")
            resolved.append(Declaration(p, False, complete, closed))
        else:
            if d.complete is not None or d.closed is not None:
                raise DeclarationError(f"{name} is certain; complete/closed apply only to uncertain predicates")
            resolved.append(Declaration(p, True, None, None))
    return Program(prog.rules, tuple(resolved))


def constants_of(prog: Program) -> frozenset:
    out: set[Constant] = set()
    for rule in prog.rules:
        out.update(a for a in rule.head.atom.args if not is_var(a))
        if rule.body is not None:
            out.update(constants_in_body(rule.body))
    return frozenset(out)


def domain_of(prog: Program) -> tuple:
    """Program constants in canonical order."""
    return tuple(sorted(constants_of(prog), key=const_key))
