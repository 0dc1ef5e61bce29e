"""Benchmark evaluation: per-stage ambiguity/error metrics and the
dual-annotation diff used when building benchmark corpora.

A word counts as correct when at least one gold reading (base form and
morphological tags; syntactic tags ignored) is still present among the
output cohort's readings.  Gold cohorts may keep several acceptable
readings; any overlap counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .model import Cohort, Sentence


class AlignmentError(ValueError):
    def __init__(self, position: int, expected: str, got: str):
        super().__init__(
            f"token {position}: surfaces differ ({expected!r} vs {got!r})")
        self.position = position
        self.expected = expected
        self.got = got


def _round(value: Decimal, places: str) -> Decimal:
    return value.quantize(Decimal(places), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class StageMetrics:
    stage: str
    word_count: int
    ambiguous_words: int
    total_readings: int
    errors: int

    @property
    def readings_per_word(self) -> Decimal:
        return _round(Decimal(self.total_readings) / self.word_count, "0.01")

    @property
    def error_rate_percent(self) -> Decimal:
        return _round(Decimal(self.errors) * 100 / self.word_count, "0.01")

    @property
    def ambiguous_percent(self) -> Decimal:
        # One decimal, following the reference presentation.
        return _round(Decimal(self.ambiguous_words) * 100 / self.word_count, "0.1")

    @classmethod
    def from_counts(cls, stage: str, word_count: int, total_readings: int,
                    errors: int, ambiguous_words: int = 0) -> "StageMetrics":
        if word_count <= 0:
            raise ValueError("word count must be positive")
        return cls(stage, word_count, ambiguous_words, total_readings, errors)


def _flatten(sentences: Iterable[Sentence]) -> list[Cohort]:
    return [c for s in sentences for c in s.cohorts]


def _align(a: Iterable[Sentence], b: Iterable[Sentence]) -> list[tuple[Cohort, Cohort]]:
    left = _flatten(a)
    right = _flatten(b)
    for i, (x, y) in enumerate(zip(left, right)):
        if x.surface != y.surface:
            raise AlignmentError(i, x.surface, y.surface)
    if len(left) != len(right):
        i = min(len(left), len(right))
        longer = left if len(left) > len(right) else right
        raise AlignmentError(i, longer[i].surface, "<end of stream>")
    return list(zip(left, right))


def _morph_keys(cohort: Cohort) -> set[tuple]:
    return {(r.baseform, r.morph_tags) for r in cohort.readings}


def measure(output: Iterable[Sentence], gold: Iterable[Sentence],
            stage: str = "D3") -> StageMetrics:
    """Corpus-level metrics of an output stream against its gold
    counterpart; streams must be token-aligned."""
    pairs = _align(output, gold)
    if not pairs:
        raise ValueError("empty corpus")
    ambiguous = 0
    readings = 0
    errors = 0
    for out_cohort, gold_cohort in pairs:
        readings += len(out_cohort.readings)
        if len(out_cohort.readings) > 1:
            ambiguous += 1
        if _morph_keys(gold_cohort).isdisjoint(_morph_keys(out_cohort)):
            errors += 1
    return StageMetrics(stage, len(pairs), ambiguous, readings, errors)


@dataclass(frozen=True)
class Disagreement:
    position: int
    surface: str
    a_readings: tuple
    b_readings: tuple


@dataclass(frozen=True)
class DiffReport:
    word_count: int
    disagreements: tuple[Disagreement, ...]

    @property
    def agreement_percent(self) -> Decimal:
        agreed = self.word_count - len(self.disagreements)
        return _round(Decimal(agreed) * 100 / self.word_count, "0.01")


def diff_annotations(a: Iterable[Sentence], b: Iterable[Sentence]) -> DiffReport:
    """Positions where two annotations of the same text chose different
    reading sets (base form + morphological tags), plus the agreement."""
    pairs = _align(a, b)
    if not pairs:
        raise ValueError("empty corpus")
    disagreements = []
    for i, (x, y) in enumerate(pairs):
        if _morph_keys(x) != _morph_keys(y):
            disagreements.append(Disagreement(i, x.surface,
                                              x.readings, y.readings))
    return DiffReport(len(pairs), tuple(disagreements))


# ---------------------------------------------------------------------------
# Report rendering

_COLUMNS = ("ambiguous words", "readings", "readings/word", "errors", "error rate")


def figure_table(metrics: Sequence[StageMetrics]) -> str:
    """Aligned text table with one row per pipeline stage."""
    rows = [("", *_COLUMNS)]
    for m in metrics:
        rows.append((m.stage, f"{m.ambiguous_percent}%", str(m.total_readings),
                     str(m.readings_per_word), str(m.errors),
                     f"{m.error_rate_percent}%"))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def machine_report(metrics: Sequence[StageMetrics]) -> str:
    """stage TAB metric TAB value lines."""
    lines = []
    for m in metrics:
        lines.append(f"{m.stage}\tword_count\t{m.word_count}")
        lines.append(f"{m.stage}\tambiguous_word_fraction\t{m.ambiguous_percent}%")
        lines.append(f"{m.stage}\ttotal_readings\t{m.total_readings}")
        lines.append(f"{m.stage}\treadings_per_word\t{m.readings_per_word}")
        lines.append(f"{m.stage}\terrors\t{m.errors}")
        lines.append(f"{m.stage}\terror_rate\t{m.error_rate_percent}%")
    return "\n".join(lines) + "\n" if lines else ""


def diff_report_text(report: DiffReport) -> str:
    lines = [f"tokens\t{report.word_count}",
             f"disagreements\t{len(report.disagreements)}",
             f"agreement\t{report.agreement_percent}%"]
    for d in report.disagreements:
        a = " | ".join(" ".join(t.text for t in r.morph_tags) for r in d.a_readings)
        b = " | ".join(" ".join(t.text for t in r.morph_tags) for r in d.b_readings)
        lines.append(f"{d.position}\t{d.surface}\t{a}\t{b}")
    return "\n".join(lines) + "\n"
