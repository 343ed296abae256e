"""Batch command-line front end.

Subcommands:

  check-grammar <file.mclang>           parse a grammar, print its schema dump
  parse <grammar> <model> [--minimal]   print the (optionally desugared) AST
  wf <grammar> <model> [--cc ids]       run context conditions
  fm-check <fd...> <conf...>            merge and validate configurations
  generate <fd...> <conf...> --out DIR  emit composed theory documents
  sem <grammar> <model> <fd...> <conf...> [bounds flags]
                                        semantics count and witnesses
  analyze refine|consistent|equiv ...   bounded analysis verdicts

Exit codes: 0 for a positive verdict, 1 for a negative one (violations,
holds=false, a grammar or model the command was asked to judge failing to
parse), 2 for usage errors and unreadable or unparseable auxiliary input
files.  Results go to stdout, diagnostics to stderr.  Setting VLANG_COLOR=0
disables ANSI coloring (used only on terminals).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .analysis import AnalysisError, check_consistency, check_equivalence, check_refinement
from .conditions import UnknownConditionError, check_context_conditions, conditions_for
from .desugar import DesugarError, desugar_to_minimal
from .features import (
    FeatureModelError,
    merge_configurations,
    parse_configurations,
    parse_feature_diagrams,
    validate_configurations,
)
from .grammar import GrammarError, parse_grammar
from .modelparse import ModelParseError, TokenizeError, parse_model
from .schema import derive_schema, dump_ast, dump_schema
from .semantics import SemanticsError, auto_attr_candidates, compute_sem, make_semantics_config
from .sysmodel import Bounds, NameConventionError, dump_system
from .theorygen import generate_domain_theory, generate_mapping_theory, write_theory


class _FileFailure(Exception):
    """Input file missing or unparseable; exits with the given code."""

    def __init__(self, message: str, exit_code: int = 2):
        super().__init__(message)
        self.exit_code = exit_code


def _paint(text: str, code: str) -> str:
    if sys.stdout.isatty() and os.environ.get("VLANG_COLOR") != "0":
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _FileFailure(f"cannot read {path}: {exc.strerror}") from exc


def _load_grammar(path: str, *, judged: bool = False):
    text = _read(path)
    try:
        return parse_grammar(text)
    except GrammarError as exc:
        raise _FileFailure(f"{path}: {exc}", exit_code=1 if judged else 2) from exc


def _load_model(grammar, path: str, *, judged: bool = False):
    text = _read(path)
    try:
        return parse_model(grammar, text)
    except (TokenizeError, ModelParseError) as exc:
        raise _FileFailure(f"{path}: {exc}", exit_code=1 if judged else 2) from exc


def _minimal(grammar, node):
    try:
        return desugar_to_minimal(node, grammar)
    except DesugarError as exc:
        raise _FileFailure(str(exc)) from exc


def _load_workspace(paths: list[str]):
    """Read .fd and .conf files into (diagrams, configurations)."""
    diagrams, configs = [], []
    for path in paths:
        text = _read(path)
        try:
            if path.endswith(".fd"):
                diagrams.extend(parse_feature_diagrams(text))
            elif path.endswith(".conf"):
                configs.extend(parse_configurations(text))
            else:
                raise _FileFailure(f"{path}: expected a .fd or .conf file")
        except FeatureModelError as exc:
            raise _FileFailure(f"{path}: {exc}") from exc
    return diagrams, configs


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_check_grammar(args) -> int:
    grammar = _load_grammar(args.grammar, judged=True)
    sys.stdout.write(dump_schema(derive_schema(grammar)))
    return 0


def _cmd_parse(args) -> int:
    grammar = _load_grammar(args.grammar)
    node = _load_model(grammar, args.model, judged=True)
    if args.minimal:
        node = _minimal(grammar, node)
    print(dump_ast(node))
    return 0


def _cmd_wf(args) -> int:
    grammar = _load_grammar(args.grammar)
    node = _minimal(grammar, _load_model(grammar, args.model))
    active = {
        cc_id
        for cc_id, cc in conditions_for(grammar.name).items()
        if not cc.optional
    }
    if args.cc:
        active.update(s for s in args.cc.split(",") if s)
    try:
        violations = check_context_conditions(node, active, grammar.name)
    except UnknownConditionError as exc:
        raise _FileFailure(str(exc)) from exc
    for v in violations:
        print(v.render())
    if violations:
        return 1
    print(_paint("OK", "32") + f" {len(active)} conditions, no violations")
    return 0


def _cmd_fm_check(args) -> int:
    diagrams, configs = _load_workspace(args.files)
    try:
        violations = validate_configurations(diagrams, merge_configurations(configs))
    except FeatureModelError as exc:
        raise _FileFailure(str(exc)) from exc
    for v in sorted(x.render() for x in violations):
        print(v)
    if violations:
        return 1
    print(_paint("OK", "32") + f" {len(diagrams)} diagrams, {len(configs)} configurations")
    return 0


def _cmd_generate(args) -> int:
    diagrams, configs = _load_workspace(args.files)
    merged = merge_configurations(configs)
    try:
        violations = validate_configurations(diagrams, merged)
    except FeatureModelError as exc:
        raise _FileFailure(str(exc)) from exc
    if violations:
        for v in sorted(x.render() for x in violations):
            print(v)
        return 1
    selected = {c.diagram: c for c in merged}
    out_dir = Path(args.out)
    written = []
    for diagram in diagrams:
        kinds = {f.kind for f in diagram.features().values()}
        config = selected.get(diagram.name)
        if config is None:
            continue
        try:
            if "semantic-domain" in kinds:
                doc = generate_domain_theory(diagram, config)
            elif "semantic-mapping" in kinds:
                doc = generate_mapping_theory(
                    diagram, config, _mapping_language(diagram)
                )
            else:
                continue
        except (NameConventionError, SemanticsError) as exc:
            print(f"generation failed: {exc}", file=sys.stderr)
            return 1
        written.append(write_theory(doc, out_dir))
    for path in written:
        print(path.as_posix())
    return 0


def _mapping_language(diagram) -> str:
    theories = sorted({vp.attached_theory for vp in diagram.variation_points})
    for theory in theories:
        if theory.endswith("Sem"):
            return theory[: -len("Sem")]
    raise _FileFailure(
        f"cannot derive the language name from diagram {diagram.name}; "
        "expected a variation point attached to a <Language>Sem theory"
    )


def _bounds(args, models, mapping_config) -> Bounds:
    extra = tuple(s for s in (args.extra_classes or "").split(",") if s)
    try:
        return Bounds(
            extra_class_names=extra,
            max_objects=args.max_objects,
            attr_candidates=auto_attr_candidates(models, mapping_config),
        )
    except ValueError as exc:
        raise _FileFailure(str(exc)) from exc


def _semantics_config(args, paths: list[str], models):
    diagrams, configs = _load_workspace(paths)
    try:
        violations = validate_configurations(diagrams, merge_configurations(configs))
    except FeatureModelError as exc:
        raise _FileFailure(str(exc)) from exc
    if violations:
        for v in sorted(x.render() for x in violations):
            print(v)
        return None
    try:
        config = make_semantics_config(diagrams, configs, Bounds())
        bounds = _bounds(args, models, config.mapping_config)
        return make_semantics_config(diagrams, configs, bounds)
    except SemanticsError as exc:
        raise _FileFailure(str(exc)) from exc


def _cmd_sem(args) -> int:
    grammar = _load_grammar(args.grammar)
    model = _minimal(grammar, _load_model(grammar, args.model))
    config = _semantics_config(args, args.files, [model])
    if config is None:
        return 1
    sem = compute_sem(model, config)
    members = list(sem)
    print(f"SEM count={len(members)} bounds={config.bounds.describe()}")
    for i, sm in enumerate(members[: args.witnesses], start=1):
        print(f"WITNESS {i}")
        sys.stdout.write(dump_system(sm))
    return 0


def _cmd_analyze(args) -> int:
    pairs, rest = _model_arguments(args.args)
    if args.mode in ("refine", "equiv"):
        if len(pairs) != 1 or len(pairs[0][1]) != 2:
            raise _FileFailure(
                f"analyze {args.mode} needs one grammar followed by two model files"
            )
        grammar_path, model_paths = pairs[0]
        grammar = _load_grammar(grammar_path)
        models = [_minimal(grammar, _load_model(grammar, p)) for p in model_paths]
    else:
        models = []
        for grammar_path, model_paths in pairs:
            grammar = _load_grammar(grammar_path)
            models.extend(
                _minimal(grammar, _load_model(grammar, p)) for p in model_paths
            )
        if not models:
            raise _FileFailure("analyze consistent needs grammar/model arguments")
    config = _semantics_config(args, rest, models)
    if config is None:
        return 1
    if args.mode == "refine":
        verdict = check_refinement(models[0], models[1], config)
    elif args.mode == "equiv":
        verdict = check_equivalence(models[0], models[1], config)
    else:
        verdict = check_consistency(models, config)
    sys.stdout.write(verdict.report())
    return 0 if verdict.holds else 1


def _model_arguments(args: list[str]):
    """Split positionals into (grammar, [models...]) runs and .fd/.conf rest."""
    pairs: list[tuple[str, list[str]]] = []
    rest: list[str] = []
    current: tuple[str, list[str]] | None = None
    for a in args:
        if a.endswith(".mclang"):
            current = (a, [])
            pairs.append(current)
        elif a.endswith((".fd", ".conf")):
            rest.append(a)
        elif current is not None:
            current[1].append(a)
        else:
            raise _FileFailure(f"model file {a} must follow its grammar file")
    return pairs, rest


# ---------------------------------------------------------------------------
# Parser wiring
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlang",
        description="Modeling-language workbench: grammars, feature-configured "
        "semantics, theory generation, bounded analyses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-grammar", help="parse a grammar and print its schema dump")
    p.add_argument("grammar", help=".mclang grammar file")
    p.set_defaults(fn=_cmd_check_grammar)

    p = sub.add_parser("parse", help="parse a model and print its AST")
    p.add_argument("grammar", help=".mclang grammar file")
    p.add_argument("model", help="model file")
    p.add_argument("--minimal", action="store_true", help="desugar before printing")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("wf", help="check context conditions on a model")
    p.add_argument("grammar", help=".mclang grammar file")
    p.add_argument("model", help="model file")
    p.add_argument(
        "--cc",
        metavar="ID[,ID...]",
        help="optional context-condition ids to activate (non-optional ones always run)",
    )
    p.set_defaults(fn=_cmd_wf)

    p = sub.add_parser("fm-check", help="merge and validate configurations")
    p.add_argument("files", nargs="+", help=".fd and .conf files")
    p.set_defaults(fn=_cmd_fm_check)

    p = sub.add_parser("generate", help="emit composed theory documents")
    p.add_argument("files", nargs="+", help=".fd and .conf files")
    p.add_argument("--out", required=True, metavar="DIR", help="output directory")
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("sem", help="semantics count and witnesses of a model")
    p.add_argument("grammar", help=".mclang grammar file")
    p.add_argument("model", help="model file")
    p.add_argument("files", nargs="+", help=".fd and .conf files")
    _bounds_flags(p)
    p.add_argument(
        "--witnesses", type=int, default=0, metavar="K", help="print up to K witnesses"
    )
    p.set_defaults(fn=_cmd_sem)

    p = sub.add_parser("analyze", help="refinement, consistency, or equivalence")
    p.add_argument("mode", choices=("refine", "consistent", "equiv"))
    p.add_argument(
        "args",
        nargs="+",
        help="grammar/model files (each grammar followed by its models), "
        "then .fd and .conf files",
    )
    _bounds_flags(p)
    p.set_defaults(fn=_cmd_analyze)

    return parser


def _bounds_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--max-objects", type=int, default=1, metavar="N", help="object-count bound"
    )
    p.add_argument(
        "--extra-classes",
        metavar="A,B",
        help="class names enumerable beyond those the models mention",
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _FileFailure as exc:
        print(f"vlang: {exc}", file=sys.stderr)
        return exc.exit_code
    except (SemanticsError, AnalysisError, NameConventionError) as exc:
        print(f"vlang: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
