"""End-to-end tagging pipeline.

Stage order: tokenize, morphological analysis (D0), strict constraint
rules (D1), optional heuristic constraint rules (D2), syntactic-tag
lookup, sentence encoding, intersection parsing (D3).  When parsing
yields nothing (empty intersection or an overflowed cap) the constraint
stage output stands for that sentence and the result is flagged as a
fallback.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import fsa, fsig
from .cg import CgGrammar, apply_grammar
from .model import PLAIN_BOUNDARY, SENTENCE_BOUNDARY, Cohort, Sentence
from .morph import HeuristicRule, Lexicon, analyze
from .streams import emit_cohort_stream, emit_tabular
from .tokenizer import TokenizerConfig, tokenize

STAGES = ("D0", "D1", "D2", "D3")

# Marker tokens that close a sentence.
SENTENCE_END_MARKERS = frozenset({"@fullstop"})


@dataclass
class PipelineConfig:
    lexicon: Lexicon
    tokenizer: TokenizerConfig
    cg: CgGrammar
    syntax_map: fsig.SyntaxMap
    grammar: fsig.CompiledFsigGrammar
    morph_heuristics: tuple[HeuristicRule, ...] = ()
    use_cg_heuristics: bool = True
    state_cap: int = fsa.DEFAULT_STATE_CAP
    enum_cap: int = fsig.DEFAULT_ENUM_CAP


@dataclass
class SentenceResult:
    """Per-sentence snapshots plus the parser outcome."""
    d0: Sentence
    d1: Sentence
    d2: Sentence
    d3: Sentence
    status: str
    fallback: bool

    def snapshot(self, stage: str) -> Sentence:
        return {"D0": self.d0, "D1": self.d1, "D2": self.d2, "D3": self.d3}[stage]


@dataclass
class PipelineRun:
    results: list[SentenceResult] = field(default_factory=list)

    def snapshot(self, stage: str) -> list[Sentence]:
        return [r.snapshot(stage) for r in self.results]


def split_sentences(tokens: Sequence[str]) -> list[list[str]]:
    """Group a token stream into sentences at sentence-ending markers."""
    groups: list[list[str]] = []
    current: list[str] = []
    for tok in tokens:
        current.append(tok)
        if tok in SENTENCE_END_MARKERS:
            groups.append(current)
            current = []
    if current:
        groups.append(current)
    return groups


def analyze_tokens(tokens: Sequence[str], config: PipelineConfig) -> Sentence:
    cohorts = []
    last = len(tokens) - 1
    for i, tok in enumerate(tokens):
        cohort = analyze(tok, config.lexicon, config.morph_heuristics)
        bounds = {SENTENCE_BOUNDARY} if i == last else {PLAIN_BOUNDARY}
        cohorts.append(Cohort(cohort.surface, cohort.readings, bounds))
    return Sentence(cohorts)


def process_sentence(tokens: Sequence[str], config: PipelineConfig) -> SentenceResult:
    d0 = analyze_tokens(tokens, config)
    d1 = apply_grammar(d0, config.cg, heuristics=False)
    d2 = apply_grammar(d1, config.cg, heuristics=True) \
        if config.use_cg_heuristics else d1
    looked_up = fsig.lookup_syntax(d2, config.syntax_map)
    encoded = fsig.encode_sentence(looked_up)
    result = fsig.parse(encoded, config.grammar,
                        state_cap=config.state_cap, enum_cap=config.enum_cap)
    if result.status in ("empty", "overflow"):
        return SentenceResult(d0, d1, d2, d2, result.status, fallback=True)
    d3 = fsig.fold_back(looked_up, result.strings)
    return SentenceResult(d0, d1, d2, d3, result.status, fallback=False)


def run_pipeline(text: str, config: PipelineConfig) -> PipelineRun:
    """Tag raw text; per-sentence parse failures never abort the run."""
    tokens = tokenize(text, config.tokenizer)
    run = PipelineRun()
    for group in split_sentences(tokens):
        run.results.append(process_sentence(group, config))
    return run


def render_stage(sentences: Iterable[Sentence], fmt: str) -> str:
    if fmt == "vertical":
        return emit_cohort_stream(sentences)
    if fmt == "tabular":
        return emit_tabular(sentences)
    raise ValueError(f"unknown format {fmt!r}")


def default_format(stage: str) -> str:
    return "tabular" if stage == "D3" else "vertical"
