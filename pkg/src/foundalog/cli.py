"""Command-line front end.

    foundalog eval prog.fl [--semantics both] [--format json] [--declare p/1=uncertain]
    foundalog check prog.fl
    foundalog corpus [--format json]

Exit status: 0 ok, 1 bad input, 2 enumeration budget exceeded, 3 oracle
mismatch (or corpus mismatch).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from . import oracle
from .analysis import validate_declarations
from .errors import BudgetExceeded, FoundalogError
from .evaluation import atom_sort_key
from .parser import parse, parse_declaration_override
from .semantics import DEFAULT_BUDGET, compile_program, constraint_models, founded_from
from .syntax import Declaration, Program, format_atom, format_declaration, format_program, format_rule

ENV_MAX_MODELS = "FOUNDALOG_MAX_MODELS"
DEFAULT_MAX_MODELS = 1000

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3


@dataclass
class RunConfig:
    path: str
    semantics: str = "both"
    format: str = "text"
    max_models: int = DEFAULT_MAX_MODELS
    budget: int = DEFAULT_BUDGET
    show_false: bool = False
    dumps: set = field(default_factory=set)
    oracle: bool = False
    declare: list = field(default_factory=list)

    def __post_init__(self):
        if self.max_models < 1:
            raise ValueError("max_models must be at least 1")


def apply_overrides(prog: Program, overrides: list[Declaration]) -> Program:
    """Replace (or add) the declarations of the overridden predicates."""
    if not overrides:
        return prog
    replaced = {d.pred for d in overrides}
    kept = tuple(d for d in prog.declarations if d.pred not in replaced)
    return Program(prog.rules, kept + tuple(overrides))


def _sorted_atoms(atoms) -> list[str]:
    return [format_atom(a) for a in sorted(atoms, key=atom_sort_key)]


# ---------------------------------------------------------------------------
# evaluation


def evaluate(prog: Program, semantics: str = "both", max_models: int = DEFAULT_MAX_MODELS,
             budget: int = DEFAULT_BUDGET) -> dict:
    """Run the requested semantics and return the JSON-shaped report."""
    compiled = compile_program(prog)
    model = founded_from(compiled)
    report: dict = {}
    if semantics in ("founded", "both"):
        interp = model.interpretation
        undefined = [a for a in compiled.all_atoms() if a not in interp.pos and a not in interp.neg]
        report["founded"] = {
            "true": _sorted_atoms(interp.pos),
            "false": _sorted_atoms(interp.neg),
            "undefined": _sorted_atoms(undefined),
        }
    if semantics in ("constraint", "both"):
        models = constraint_models(prog, limit=max_models, budget=budget, compiled=compiled, founded_model=model)
        listed = sorted(_sorted_atoms(m.pos) for m in models.models)
        report["constraint_models"] = listed
        report["truncated"] = models.truncated
    return report


def oracle_report(prog: Program, semantics: str) -> dict:
    """The same report computed by the brute-force reference."""
    ref = oracle.Reference(prog)
    report: dict = {}
    if semantics in ("founded", "both"):
        fm = ref.founded()
        report["founded"] = {
            "true": _sorted_atoms(a for a, v in fm.items() if v is True),
            "false": _sorted_atoms(a for a, v in fm.items() if v is False),
            "undefined": _sorted_atoms(a for a in ref.universe() if a not in fm),
        }
    if semantics in ("constraint", "both"):
        models = ref.constraint_models()
        report["constraint_models"] = sorted(_sorted_atoms(a for a, v in m.items() if v) for m in models)
        report["truncated"] = False
    return report


def diff_reports(expected: dict, actual: dict) -> list[str]:
    """Human-readable differences between two reports; empty when they agree."""
    lines = []
    for key in ("true", "false", "undefined"):
        want = set(expected.get("founded", {}).get(key, []))
        got = set(actual.get("founded", {}).get(key, []))
        for atom in sorted(want - got):
            lines.append(f"founded {key}: missing {atom}")
        for atom in sorted(got - want):
            lines.append(f"founded {key}: unexpected {atom}")
    if "constraint_models" in expected or "constraint_models" in actual:
        want = {tuple(m) for m in expected.get("constraint_models", [])}
        got = {tuple(m) for m in actual.get("constraint_models", [])}
        for m in sorted(want - got):
            lines.append("constraint model missing: {" + ", ".join(m) + "}")
        for m in sorted(got - want):
            lines.append("constraint model unexpected: {" + ", ".join(m) + "}")
        if expected.get("truncated") != actual.get("truncated"):
            lines.append(f"truncated: expected {expected.get('truncated')}, got {actual.get('truncated')}")
    return lines


def render_text(report: dict, prog: Program, show_false: bool) -> str:
    validated = validate_declarations(prog)
    certain = {d.pred for d in validated.declarations if d.certain}
    out = []
    if "founded" in report:
        out.append("founded model:")
        sections = ("true", "false", "undefined")
        for key in sections:
            atoms = report["founded"][key]
            if key == "false" and not show_false:
                atoms = [a for a in atoms if _pred_of(a) not in certain]
            if atoms:
                out.append(f"  {key}:")
                out.extend(f"    {a}" for a in atoms)
    if "constraint_models" in report:
        models = report["constraint_models"]
        more = " (truncated)" if report["truncated"] else ""
        out.append(f"constraint models: {len(models)}{more}")
        for i, m in enumerate(models, 1):
            out.append(f"  {i}: {{" + ", ".join(m) + "}")
    return "\n".join(out) + "\n"


def _pred_of(text: str) -> tuple[str, int]:
    # formatted atoms parse back as facts
    return parse(text + ".").rules[0].head.atom.key


def dump_ground(prog: Program) -> str:
    compiled = compile_program(prog)
    lines = []
    for pred in sorted(compiled.facts_by_pred):
        lines.extend(f"{h}." for h in compiled.facts_by_pred[pred])
        lines.extend(format_rule(r) for r in compiled.rules_by_pred[pred])
    return "\n".join(lines) + "\n"


def dump_depgraph(prog: Program) -> str:
    compiled = compile_program(prog)
    lines = ["edges:"]
    for (q, p), pols in sorted(compiled.graph.edges.items()):
        label = ",".join(sorted(pol.value for pol in pols))
        lines.append(f"  {q[0]}/{q[1]} -> {p[0]}/{p[1]} [{label}]")
    lines.append("components:")
    for comp in compiled.plan.components:
        lines.append("  " + " ".join(f"{n}/{a}" for n, a in sorted(comp)))
    lines.append("declarations:")
    lines.extend("  " + format_declaration(d) for d in compiled.program.declarations)
    return "\n".join(lines) + "\n"


def load_program(path: str, declare: list[str]) -> Program:
    text = Path(path).read_text(encoding="utf-8")
    prog = parse(text)
    return apply_overrides(prog, [parse_declaration_override(s) for s in declare])


def cmd_eval(cfg: RunConfig, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        prog = load_program(cfg.path, cfg.declare)
        validate_declarations(prog)
        report = evaluate(prog, cfg.semantics, cfg.max_models, cfg.budget)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=err)
        return EXIT_BUDGET
    except (FoundalogError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT

    dumps = {}
    if "completed" in cfg.dumps:
        dumps["completed"] = format_program(compile_program(prog).completed)
    if "ground" in cfg.dumps:
        dumps["ground"] = dump_ground(prog)
    if "depgraph" in cfg.dumps:
        dumps["depgraph"] = dump_depgraph(prog)

    if cfg.format == "json":
        out.write(json.dumps({**report, **dumps}, indent=2, sort_keys=True) + "\n")
    else:
        for name in ("completed", "ground", "depgraph"):
            if name in dumps:
                out.write(f"-- {name} --\n{dumps[name]}")
        out.write(render_text(report, prog, cfg.show_false))

    if cfg.oracle:
        try:
            expected = oracle_report(prog, cfg.semantics)
        except FoundalogError as exc:
            print(f"oracle: {exc}", file=err)
            return EXIT_INPUT
        problems = diff_reports(expected, {**report, "truncated": False})
        if report.get("truncated"):
            problems.append("engine output truncated; raise --max-models to compare")
        if problems:
            print("oracle mismatch:", file=err)
            for line in problems:
                print(f"  {line}", file=err)
            return EXIT_MISMATCH
        print("oracle: agree", file=err)
    return EXIT_OK


def cmd_check(path: str, declare: list[str], out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    try:
        prog = validate_declarations(load_program(path, declare))
    except (FoundalogError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    out.write(f"ok: {len(prog.rules)} rules, {len(prog.declarations)} predicates\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# corpus


def corpus_dir() -> Path:
    return Path(str(resources.files("foundalog") / "corpus"))


def run_corpus(directory: Optional[Path] = None) -> list[dict]:
    """Evaluate every manifest case and compare it with its stored expectation."""
    directory = directory or corpus_dir()
    manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    results = []
    for case in manifest["cases"]:
        entry = {"name": case["name"]}
        try:
            prog = load_program(str(directory / case["file"]), case.get("declare", []))
            report = evaluate(prog, case.get("semantics", "both"), case.get("max_models", DEFAULT_MAX_MODELS))
            expected = json.loads((directory / case["expected"]).read_text(encoding="utf-8"))
            problems = diff_reports(expected, report)
        except (FoundalogError, OSError, ValueError) as exc:
            report, problems = None, [f"error: {exc}"]
        entry["status"] = "fail" if problems else "pass"
        entry["problems"] = problems
        entry["result"] = report
        results.append(entry)
    return results


def cmd_corpus(directory: Optional[str], fmt: str, out=None) -> int:
    out = out or sys.stdout
    results = run_corpus(Path(directory) if directory else None)
    if fmt == "json":
        out.write(json.dumps(results, indent=2, sort_keys=True) + "\n")
    else:
        width = max(len(r["name"]) for r in results)
        for r in results:
            out.write(f"{r['name']:<{width}}  {r['status']}\n")
            for line in r["problems"]:
                out.write(f"    {line}\n")
        failed = sum(r["status"] == "fail" for r in results)
        out.write(f"{len(results) - failed}/{len(results)} passed\n")
    return EXIT_OK if all(r["status"] == "pass" for r in results) else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# argument handling


def _default_max_models() -> int:
    raw = os.environ.get(ENV_MAX_MODELS)
    if raw is None:
        return DEFAULT_MAX_MODELS
    try:
        value = int(raw)
    except ValueError:
        raise SystemExit(f"error: {ENV_MAX_MODELS} must be an integer, got {raw!r}")
    if value < 1:
        raise SystemExit(f"error: {ENV_MAX_MODELS} must be at least 1")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="foundalog", description="Founded and constraint semantics for rule programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a program")
    ev.add_argument("path")
    ev.add_argument("--semantics", choices=["founded", "constraint", "both"], default="both")
    ev.add_argument("--format", choices=["text", "json"], default="text")
    ev.add_argument("--max-models", type=_positive_int, default=None,
                    help=f"stop after this many constraint models (default ${ENV_MAX_MODELS} or {DEFAULT_MAX_MODELS})")
    ev.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                    help="refuse to enumerate more than this many undefined atoms")
    ev.add_argument("--show-false", action="store_true", help="also list false atoms of certain predicates")
    ev.add_argument("--dump-ground", action="store_true")
    ev.add_argument("--dump-completed", action="store_true")
    ev.add_argument("--dump-depgraph", action="store_true")
    ev.add_argument("--oracle", action="store_true", help="compare with the brute-force reference")
    ev.add_argument("--declare", action="append", default=[], metavar="P/N=WORDS",
                    help="override a declaration, e.g. p/1=uncertain,complete,closed")

    ck = sub.add_parser("check", help="parse and validate declarations only")
    ck.add_argument("path")
    ck.add_argument("--declare", action="append", default=[], metavar="P/N=WORDS")

    co = sub.add_parser("corpus", help="run the bundled example corpus")
    co.add_argument("--dir", default=None, help="use another corpus directory")
    co.add_argument("--format", choices=["text", "json"], default="text")
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "eval":
        dumps = {name for name in ("ground", "completed", "depgraph") if getattr(args, f"dump_{name}")}
        cfg = RunConfig(
            path=args.path,
            semantics=args.semantics,
            format=args.format,
            max_models=args.max_models or _default_max_models(),
            budget=args.budget,
            show_false=args.show_false,
            dumps=dumps,
            oracle=args.oracle,
            declare=args.declare,
        )
        return cmd_eval(cfg)
    if args.command == "check":
        return cmd_check(args.path, args.declare)
    return cmd_corpus(args.dir, args.format)


if __name__ == "__main__":
    sys.exit(main())
