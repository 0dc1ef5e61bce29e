"""Command-line driver: compile, tag, eval and diff workflows.

Configuration file flags fall back to RTAG_-prefixed environment
variables (e.g. RTAG_LEXICON).  Input is read from standard input when
no file argument is given.  Exit codes: 0 success, 1 usage/configuration
problems, 2 data/alignment problems.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from typing import Sequence

from . import fsa, fsig, pipeline
from .cg import CgGrammar, CgParseError, load_cg_grammar
from .evaluation import (
    AlignmentError,
    diff_annotations,
    diff_report_text,
    figure_table,
    machine_report,
    measure,
)
from .fsa import UnknownReference
from .model import StreamFormatError
from .morph import HeuristicsError, LexiconError, load_heuristics, load_lexicon
from .streams import parse_cohort_stream
from .tokenizer import TokenizerConfig, TokenizerConfigError, load_tokenizer_config

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

_ENV_PREFIX = "RTAG_"

_CONFIG_ERRORS = (CgParseError, fsig.FsigParseError, fsig.EmptyRuleTarget,
                  fsig.SyntaxMapError, TokenizerConfigError, LexiconError,
                  HeuristicsError, UnknownReference, fsa.CyclicDefinition,
                  OSError, ValueError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_default(name: str):
    return os.environ.get(_ENV_PREFIX + name)


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lexicon", default=_env_default("LEXICON"),
                   help="full-form lexicon file")
    p.add_argument("--morph-heuristics", default=_env_default("MORPH_HEURISTICS"),
                   help="word-shape heuristic rules for unknown words")
    p.add_argument("--tok-config", default=_env_default("TOK_CONFIG"),
                   help="tokenizer configuration file")
    p.add_argument("--cg", default=_env_default("CG"),
                   help="constraint rule file")
    p.add_argument("--fsig", default=_env_default("FSIG"),
                   help="intersection grammar (source or compiled archive)")
    p.add_argument("--syntax-map", default=_env_default("SYNTAX_MAP"),
                   help="syntactic-tag lookup table")
    p.add_argument("--heuristics", dest="cg_heuristics",
                   action=argparse.BooleanOptionalAction, default=True,
                   help="enable the heuristic constraint tier")
    p.add_argument("--state-cap", type=int,
                   default=int(_env_default("STATE_CAP") or fsa.DEFAULT_STATE_CAP),
                   help="state cap per intersection product")
    p.add_argument("--enum-cap", type=int,
                   default=int(_env_default("ENUM_CAP") or fsig.DEFAULT_ENUM_CAP),
                   help="cap on enumerated parses per sentence")
    p.add_argument("--jobs", type=int,
                   default=int(_env_default("JOBS") or 1),
                   help="parallel sentence workers (output is order-preserving)")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _read_input(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    return _read(path)


def _require(args, name: str) -> str:
    value = getattr(args, name)
    if not value:
        raise UsageError(f"--{name.replace('_', '-')} is required "
                         f"(or set {_ENV_PREFIX}{name.upper()})")
    return value


def _load_fsig(path: str, cap: int) -> fsig.CompiledFsigGrammar:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return fsig.grammar_from_dict(json.loads(text))
    return fsig.compile_grammar(fsig.load_fsig_grammar(text), cap)


def _build_config(args) -> pipeline.PipelineConfig:
    lexicon = load_lexicon(_read(_require(args, "lexicon")))
    heuristics = (load_heuristics(_read(args.morph_heuristics))
                  if args.morph_heuristics else ())
    tok = (load_tokenizer_config(_read(args.tok_config)) if args.tok_config
           else TokenizerConfig(punctuation_map={",": "@comma", ".": "@fullstop"}))
    cg = load_cg_grammar(_read(args.cg)) if args.cg else CgGrammar(())
    syntax_map = fsig.load_syntax_map(_read(_require(args, "syntax_map")))
    grammar = _load_fsig(_require(args, "fsig"), args.state_cap)
    if args.state_cap <= 0 or args.enum_cap <= 0 or args.jobs <= 0:
        raise UsageError("caps and --jobs must be positive")
    return pipeline.PipelineConfig(
        lexicon=lexicon, tokenizer=tok, cg=cg, syntax_map=syntax_map,
        grammar=grammar, morph_heuristics=heuristics,
        use_cg_heuristics=args.cg_heuristics,
        state_cap=args.state_cap, enum_cap=args.enum_cap)


# --- tag ------------------------------------------------------------------

_worker_config: pipeline.PipelineConfig | None = None


def _init_worker(argv: list[str]) -> None:
    global _worker_config
    args = build_parser().parse_args(argv)
    _worker_config = _build_config(args)


def _tag_worker(group: list[str]) -> pipeline.SentenceResult:
    return pipeline.process_sentence(group, _worker_config)


def _iter_results(args, raw_argv: list[str]):
    """Per-sentence results in input order; workers rebuild the
    configuration from the same argv so parallel runs stay byte-identical."""
    config = _build_config(args)
    tokens = pipeline.tokenize(_read_input(args.input), config.tokenizer)
    groups = pipeline.split_sentences(tokens)
    if args.jobs > 1 and len(groups) > 1:
        with concurrent.futures.ProcessPoolExecutor(
                max_workers=args.jobs, initializer=_init_worker,
                initargs=(raw_argv,)) as pool:
            yield from pool.map(_tag_worker, groups)
    else:
        for group in groups:
            yield pipeline.process_sentence(group, config)


def _run_tagging(args, raw_argv: list[str]) -> pipeline.PipelineRun:
    run = pipeline.PipelineRun()
    run.results.extend(_iter_results(args, raw_argv))
    return run


def cmd_tag(args, raw_argv: list[str]) -> int:
    fmt = args.format or pipeline.default_format(args.stage)
    for i, result in enumerate(_iter_results(args, raw_argv)):
        sys.stdout.write(pipeline.render_stage([result.snapshot(args.stage)],
                                               fmt))
        if result.fallback:
            print(f"sentence {i + 1}: fallback ({result.status})", file=sys.stderr)
    return EXIT_OK


# --- compile ----------------------------------------------------------------

def cmd_compile(args) -> int:
    errors: list[str] = []
    compiled = None
    fsig_path = _require(args, "fsig")
    try:
        grammar = fsig.load_fsig_grammar(_read(fsig_path))
        compiled = fsig.compile_grammar(grammar, args.state_cap)
    except _CONFIG_ERRORS as exc:
        errors.append(f"{fsig_path}: {exc}")
    for path, loader in (
            (args.cg, lambda t: load_cg_grammar(t)),
            (args.lexicon, load_lexicon),
            (args.morph_heuristics, load_heuristics),
            (args.tok_config, load_tokenizer_config),
            (args.syntax_map, fsig.load_syntax_map)):
        if not path:
            continue
        try:
            loader(_read(path))
        except _CONFIG_ERRORS as exc:
            errors.append(f"{path}: {exc}")
    if errors:
        for err in errors:
            print(err, file=sys.stderr)
        return EXIT_USAGE
    out_path = args.out or fsig_path + ".compiled.json"
    payload = json.dumps(fsig.grammar_to_dict(compiled),
                         sort_keys=True, separators=(",", ":"))
    with open(out_path, "w", encoding="utf-8") as handle:
        handle.write(payload + "\n")
    for name, states in compiled.state_counts():
        print(f"{name}\t{states}")
    print(f"wrote {out_path}")
    return EXIT_OK


# --- eval / diff ------------------------------------------------------------

def _parse_stream_file(path: str):
    return parse_cohort_stream(_read(path))


def cmd_eval(args, raw_argv: list[str]) -> int:
    gold = _parse_stream_file(args.gold)
    if args.from_stream:
        output = parse_cohort_stream(_read_input(args.input))
        metrics = [measure(output, gold, stage="out")]
    else:
        run = _run_tagging(args, raw_argv)
        stages = [args.stage] if args.stage else list(pipeline.STAGES)
        metrics = [measure(run.snapshot(stage), gold, stage=stage)
                   for stage in stages]
    sys.stdout.write(figure_table(metrics))
    if args.machine:
        sys.stdout.write(machine_report(metrics))
    return EXIT_OK


def cmd_diff(args) -> int:
    report = diff_annotations(_parse_stream_file(args.a),
                              _parse_stream_file(args.b))
    sys.stdout.write(diff_report_text(report))
    return EXIT_OK


# --- entry point -------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="rtag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="compile grammars to an archive")
    _add_config_args(p_compile)
    p_compile.add_argument("--out", help="archive output path")

    p_tag = sub.add_parser("tag", help="tag text")
    _add_config_args(p_tag)
    p_tag.add_argument("input", nargs="?", help="input text file (default stdin)")
    p_tag.add_argument("--stage", choices=pipeline.STAGES, default="D3",
                       help="which pipeline snapshot to emit")
    p_tag.add_argument("--format", choices=("vertical", "tabular"),
                       help="output format (default: tabular for D3)")

    p_eval = sub.add_parser("eval", help="measure output against a gold stream")
    _add_config_args(p_eval)
    p_eval.add_argument("input", nargs="?", help="input file (default stdin)")
    p_eval.add_argument("--gold", required=True, help="gold vertical stream")
    p_eval.add_argument("--from-stream", action="store_true",
                        help="input is an already-tagged vertical stream")
    p_eval.add_argument("--stage", choices=pipeline.STAGES,
                        help="limit the report to one stage")
    p_eval.add_argument("--machine", action="store_true",
                        help="also emit stage TAB metric TAB value lines")

    p_diff = sub.add_parser("diff", help="compare two annotated streams")
    p_diff.add_argument("a")
    p_diff.add_argument("b")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    raw_argv = list(argv if argv is not None else sys.argv[1:])
    try:
        args = build_parser().parse_args(raw_argv)
        if args.command == "compile":
            return cmd_compile(args)
        if args.command == "tag":
            return cmd_tag(args, raw_argv)
        if args.command == "eval":
            return cmd_eval(args, raw_argv)
        return cmd_diff(args)
    except UsageError as exc:
        print(f"rtag: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StreamFormatError, AlignmentError) as exc:
        print(f"rtag: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _CONFIG_ERRORS as exc:
        print(f"rtag: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
