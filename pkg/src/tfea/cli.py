"""Command-line interface: analyze, score, inject, compare, count-matchings."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .config import ON_GUARD_CHOICES, AnalysisConfig
from .corpus import dump_side, load_corpus, load_schema, load_side, merge_sides
from .errors import ErrorType
from .exceptions import (
    ComplexityGuardExceeded,
    IncompatibleReports,
    InfeasibleSpec,
    ParseError,
    SchemaMismatch,
    TfeaError,
)
from .inject import InjectionSpec, inject_errors
from .matching import count_template_matchings
from .pipeline import analyze_corpus
from .reports import (
    build_report,
    compare_reports,
    errors_section,
    load_report,
    render_comparison_text,
    render_csv,
    render_json,
    render_text,
)
from .spans import ScsMode

log = logging.getLogger("tfea")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GUARD = 2


def _setup_logging() -> None:
    level_name = os.environ.get("TFEA_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _add_analysis_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gold", required=True, help="gold corpus JSON")
    parser.add_argument("--pred", required=True, help="predicted corpus JSON")
    parser.add_argument("--schema", required=True, help="schema JSON")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=None)
    parser.add_argument("--scs-mode", choices=("geometric", "absolute"), default=None)
    parser.add_argument("--case-sensitive", action="store_true", default=None)
    parser.add_argument("--max-matchings", type=int, default=None,
                        help="cap on enumerated template matchings per document")
    parser.add_argument("--on-guard", choices=ON_GUARD_CHOICES, default=None)
    parser.add_argument("--parallel", type=int, default=None, help="worker processes")
    parser.add_argument("--label", default=None, help="system label echoed in the report")
    parser.add_argument("--config", default=None, help="JSON config file (flags win)")


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(path, f"cannot read config: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError(path, "config must be a JSON object")
    return raw


def _resolve_settings(args: argparse.Namespace) -> tuple[AnalysisConfig, dict]:
    """Flags beat the config file, which beats the defaults."""
    file_cfg = _load_config_file(args.config)

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        return file_cfg.get(key, default)

    config = AnalysisConfig(
        scs_mode=ScsMode(pick(args.scs_mode, "scs_mode", ScsMode.GEOMETRIC.value)),
        case_sensitive=bool(pick(args.case_sensitive, "case_sensitive", False)),
        max_template_matchings=int(
            pick(args.max_matchings, "max_matchings", AnalysisConfig.max_template_matchings)
        ),
        max_mention_matchings=int(
            file_cfg.get("max_mention_matchings", AnalysisConfig.max_mention_matchings)
        ),
        on_guard=pick(args.on_guard, "on_guard", "skip"),
    )
    extras = {
        "parallel": int(pick(args.parallel, "parallel", 1)),
        "format": pick(args.format, "format", "json"),
        "label": pick(args.label, "label", None),
    }
    return config, extras


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _run_analysis(args: argparse.Namespace, derive: bool) -> int:
    config, extras = _resolve_settings(args)
    schema = load_schema(args.schema)
    documents = load_corpus(args.gold, args.pred, schema, config.casefold)
    analysis = analyze_corpus(
        documents, schema, config, parallel=extras["parallel"], derive=derive
    )
    label = extras["label"] or Path(args.pred).stem
    report = build_report(analysis, config, label=label, include_errors=derive)
    renderer = {"json": render_json, "csv": render_csv, "text": render_text}[extras["format"]]
    _write_output(renderer(report), args.out)
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    return _run_analysis(args, derive=True)


def _cmd_score(args: argparse.Namespace) -> int:
    return _run_analysis(args, derive=False)


def _cmd_inject(args: argparse.Namespace) -> int:
    schema = load_schema(args.schema)
    gold_side = load_side(args.gold, schema, gold=True)
    documents = merge_sides(gold_side, {})
    try:
        with open(args.spec, encoding="utf-8") as handle:
            raw = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(args.spec, f"cannot read injection spec: {exc}") from exc
    raw_counts = raw["counts"] if "counts" in raw else {k: v for k, v in raw.items() if k != "seed"}
    try:
        counts = {ErrorType(name): int(k) for name, k in raw_counts.items()}
    except ValueError as exc:
        raise ParseError(args.spec, f"unknown error type in spec: {exc}") from exc
    seed = args.seed if args.seed is not None else int(raw.get("seed", 0))
    result = inject_errors(documents, schema, InjectionSpec(counts=counts), seed=seed)
    dump_side(result.documents, args.out, gold=False)
    ledger = errors_section(result.ledger, schema, result.per_doc)
    with open(args.ledger, "w", encoding="utf-8") as handle:
        handle.write(render_json(ledger))
    return EXIT_OK


def _cmd_compare(args: argparse.Namespace) -> int:
    reports = [load_report(path) for path in args.reports]
    comparison = compare_reports(reports)
    if args.format == "text":
        _write_output(render_comparison_text(comparison), args.out)
    else:
        _write_output(render_json(comparison), args.out)
    return EXIT_OK


def _cmd_count_matchings(args: argparse.Namespace) -> int:
    print(count_template_matchings(args.pred_count, args.gold_count))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfea",
        description="Transformation-based error analysis for template filling.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="full analysis: scores, errors, transformations")
    _add_analysis_flags(analyze)
    analyze.set_defaults(func=_cmd_analyze)

    score = commands.add_parser("score", help="scores only, skipping transformation derivation")
    _add_analysis_flags(score)
    score.set_defaults(func=_cmd_score)

    inject = commands.add_parser("inject", help="inject a known error profile into a gold corpus")
    inject.add_argument("--gold", required=True)
    inject.add_argument("--schema", required=True)
    inject.add_argument("--spec", required=True, help="JSON: {\"counts\": {error_type: n}}")
    inject.add_argument("--seed", type=int, default=None)
    inject.add_argument("--out", required=True, help="predictions output path")
    inject.add_argument("--ledger", required=True, help="expected error profile output path")
    inject.set_defaults(func=_cmd_inject)

    compare = commands.add_parser("compare", help="compare two or more reports")
    compare.add_argument("reports", nargs="+")
    compare.add_argument("--format", choices=("json", "text"), default="json")
    compare.add_argument("--out")
    compare.set_defaults(func=_cmd_compare)

    count = commands.add_parser(
        "count-matchings", help="closed-form template matching count for P and G"
    )
    count.add_argument("pred_count", type=int)
    count.add_argument("gold_count", type=int)
    count.set_defaults(func=_cmd_count_matchings)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ComplexityGuardExceeded as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ParseError, SchemaMismatch, IncompatibleReports, InfeasibleSpec, TfeaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
