"""Founded semantics and constraint semantics.

The pipeline for a program ``prog``:

1. resolve declarations and compute the dependency SCCs;
2. complete uncertain complete predicates and rename negation to ``n.P``;
3. per SCC in dependency order, iterate one-step inference to a fixed
   point, then add completion facts for the SCC's certain predicates;
4. for closed predicates, repeatedly add the negation of the greatest
   unfounded set and rerun step 3 with the result injected as facts.

Constraint models extend the founded model by trying every truth
assignment to its undefined atoms.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .analysis import DependencyGraph, dependency_graph, domain_of, validate_declarations
from .errors import BudgetExceeded
from .evaluation import (
    F,
    T,
    UD,
    Interpretation,
    TruthValue,
    atom_sort_key,
    comparison_truth,
    derivable,
    truth_of_body,
    unname,
)
from .grounding import DnfRule, ground_rules, simplify, to_dnf
from .syntax import FALSE, Atom, Cmp, Lit, Program, Rule
from .transform import complete, name_neg

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 20


@dataclass(frozen=True)
class SccPlan:
    components: tuple[frozenset, ...]


@dataclass
class Compiled:
    """Everything derived once from a program and reused across evaluations."""

    program: Program  # declarations resolved
    graph: DependencyGraph
    domain: tuple
    plan: SccPlan
    completed: Program
    renamed: Program
    # base predicate -> ground renamed rules concluding P or n.P
    rules_by_pred: dict
    facts_by_pred: dict
    closed_dnf: dict  # closed atom -> list of DnfRule
    arity: dict

    def certain(self, pred) -> bool:
        return bool(self.program.declaration(pred).certain)

    def closed(self, pred) -> bool:
        return bool(self.program.declaration(pred).closed)

    def atoms_of(self, pred) -> list[Atom]:
        name, arity = pred
        return [Atom(name, args) for args in itertools.product(self.domain, repeat=arity)]

    def all_atoms(self) -> list[Atom]:
        return [a for p in sorted(self.arity) for a in self.atoms_of(p)]


@lru_cache(maxsize=256)
def compile_program(prog: Program, reverse_ties: bool = False) -> Compiled:
    validated = validate_declarations(prog)
    graph = dependency_graph(validated)
    domain = domain_of(validated)
    plan = SccPlan(tuple(graph.scc_order(reverse_ties)))
    completed = complete(validated)
    renamed = name_neg(completed)

    rules_by_pred: dict = {p: [] for p in graph.nodes}
    facts_by_pred: dict = {p: [] for p in graph.nodes}
    for gr in ground_rules(renamed, domain):
        base, _ = unname(gr.head.atom)
        if gr.body is None:
            facts_by_pred[base.key].append(gr.head)
        elif gr.body != FALSE:
            rules_by_pred[base.key].append(gr)

    closed_preds = {d.pred for d in validated.declarations if d.closed}
    closed_dnf: dict = {}
    if closed_preds:
        original = Program(tuple(r for r in validated.rules if r.head.atom.key in closed_preds))
        for gr in ground_rules(original, domain):
            closed_dnf.setdefault(gr.head.atom, []).extend(to_dnf(gr))

    return Compiled(
        program=validated,
        graph=graph,
        domain=domain,
        plan=plan,
        completed=completed,
        renamed=renamed,
        rules_by_pred=rules_by_pred,
        facts_by_pred=facts_by_pred,
        closed_dnf=closed_dnf,
        arity={p: p[1] for p in graph.nodes},
    )


# ---------------------------------------------------------------------------
# founded semantics


def add_neg(interp: Interpretation, scc: Iterable, compiled: Compiled) -> Interpretation:
    """Make every atom of a certain predicate in ``scc`` not known true false."""
    extra = [
        atom
        for pred in sorted(scc)
        if compiled.certain(pred)
        for atom in compiled.atoms_of(pred)
        if atom not in interp.pos
    ]
    return interp.with_false(extra) if extra else interp


@dataclass
class LfpTrace:
    # per SCC: the number of rounds until the fixed point
    rounds: list = field(default_factory=list)


def lfp_by_scc(
    compiled: Compiled,
    injected: Interpretation = Interpretation(),
    trace: Optional[LfpTrace] = None,
) -> Interpretation:
    interp = Interpretation()
    for scc in compiled.plan.components:
        facts = [h for p in sorted(scc) for h in compiled.facts_by_pred[p]]
        seeded = Interpretation(
            [a for a in injected.pos if a.key in scc],
            [a for a in injected.neg if a.key in scc],
        )
        current = interp | Interpretation.from_literals(facts) | seeded
        pending = [r for p in sorted(scc) for r in compiled.rules_by_pred[p]]
        rounds = 0
        while True:
            rounds += 1
            fired = [r for r in pending if truth_of_body(r.body, current, compiled.domain) is T]
            if not fired:
                break
            current = current | Interpretation.from_literals(r.head for r in fired)
            fired_ids = {id(r) for r in fired}
            pending = [r for r in pending if id(r) not in fired_ids]
        if trace is not None:
            trace.rounds.append((scc, rounds))
        interp = add_neg(current, scc, compiled)
    return interp


def founded0(prog: Program, injected: Interpretation = Interpretation(), *, reverse_ties: bool = False) -> Interpretation:
    """Founded model ignoring closed declarations, with ``injected`` added as facts."""
    return lfp_by_scc(compile_program(prog, reverse_ties), injected)


def _defeated(hyps: tuple, interp: Interpretation, unfounded: set, with_u: Interpretation, compiled: Compiled) -> bool:
    for h in hyps:
        if isinstance(h, Lit):
            if interp.literal_truth(h) is F:
                return True
            if h.positive and h.atom in unfounded and compiled.closed(h.atom.key):
                return True
        elif isinstance(h, Cmp):
            if comparison_truth(h, interp, compiled.domain) is F:
                return True
            if derivable(h.complement(), with_u, compiled.domain):
                return True
    return False


def self_false(compiled: Compiled, interp: Interpretation) -> frozenset:
    """Greatest unfounded set over closed-predicate atoms, by deletion to a fixed point."""
    closed = [p for p in sorted(compiled.arity) if compiled.closed(p)]
    unfounded = {a for p in closed for a in compiled.atoms_of(p) if a not in interp.pos}
    changed = True
    while changed and unfounded:
        changed = False
        with_u = interp.with_false(unfounded)
        for atom in sorted(unfounded, key=atom_sort_key):
            rules: list[DnfRule] = compiled.closed_dnf.get(atom, [])
            if any(not _defeated(r.disjunct, interp, unfounded, with_u, compiled) for r in rules):
                unfounded.discard(atom)
                changed = True
    return frozenset(unfounded)


def unfounded_sets_greatest(prog: Program, interp: Interpretation) -> frozenset:
    return self_false(compile_program(prog), interp)


@dataclass(frozen=True)
class FoundedModel:
    interpretation: Interpretation
    iterations: int = 1

    def truth(self, atom: Atom) -> TruthValue:
        return self.interpretation.truth(atom)


def founded_from(compiled: Compiled, trace: Optional[LfpTrace] = None) -> FoundedModel:
    interp = Interpretation()
    iterations = 0
    while True:
        iterations += 1
        base = lfp_by_scc(compiled, interp, trace)
        unfounded = self_false(compiled, base)
        nxt = base.with_false(unfounded) if unfounded else base
        if nxt == interp:
            return FoundedModel(interp, iterations)
        if not interp <= nxt:
            raise AssertionError("founded iteration is not increasing")
        interp = nxt


def founded(prog: Program, *, reverse_ties: bool = False) -> FoundedModel:
    """The founded model: least fixed point of founded0 plus self-false atoms."""
    return founded_from(compile_program(prog, reverse_ties))


# ---------------------------------------------------------------------------
# models


@lru_cache(maxsize=256)
def _ground_for_check(prog: Program, domain: tuple):
    facts, rules = [], []
    for gr in ground_rules(prog, domain):
        if gr.body is None:
            facts.append(gr.head)
        else:
            body = simplify(gr.body)
            if body != FALSE:
                rules.append(Rule(gr.head, body))
    return facts, rules


def check_model(prog: Program, model: Interpretation, domain: Optional[tuple] = None) -> bool:
    """Whether ``model`` contains the facts and satisfies the rules of ``prog``.

    Comparisons are evaluated from the predicate literals on demand, so the
    requirement to contain every derivable comparison holds by construction.
    """
    domain = domain_of(prog) if domain is None else domain
    facts, rules = _ground_for_check(prog, domain)
    if any(model.literal_truth(f) is not T for f in facts):
        return False
    for rule in rules:
        if truth_of_body(rule.body, model, domain) is T and model.literal_truth(rule.head) is not T:
            return False
    return True


@dataclass(frozen=True)
class ConstraintModelSet:
    models: tuple[Interpretation, ...]
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.models)

    def true_sets(self) -> list[frozenset]:
        return [m.pos for m in self.models]


def model_sort_key(m: Interpretation):
    return sorted(atom_sort_key(a) for a in m.pos)


def constraint_models(
    prog: Program,
    limit: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    *,
    compiled: Optional[Compiled] = None,
    founded_model: Optional[FoundedModel] = None,
) -> ConstraintModelSet:
    """All 2-valued models of the completed program extending the founded model."""
    compiled = compiled or compile_program(prog)
    base = (founded_model or founded_from(compiled)).interpretation
    undefined = [a for a in compiled.all_atoms() if base.truth(a) is UD]
    if len(undefined) > budget:
        raise BudgetExceeded(len(undefined), budget)
    log.debug("enumerating %d undefined atoms", len(undefined))

    models = []
    truncated = False
    for bits in itertools.product((False, True), repeat=len(undefined)):
        chosen = [a for a, b in zip(undefined, bits) if b]
        rejected = [a for a, b in zip(undefined, bits) if not b]
        candidate = Interpretation(base.pos | frozenset(chosen), base.neg | frozenset(rejected))
        if not check_model(compiled.completed, candidate, compiled.domain):
            continue
        if not self_false(compiled, candidate) <= candidate.neg:
            continue
        if limit is not None and len(models) >= limit:
            truncated = True
            break
        models.append(candidate)
    models.sort(key=model_sort_key)
    return ConstraintModelSet(tuple(models), truncated)
