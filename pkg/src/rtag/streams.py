"""Text stream formats exchanged between pipeline stages.

Vertical format (the working format between stages)::

    "<that>"
    \t"that" <**CLB> CS
    \t"that" DET CENTRAL DEM SG
    \t@BOUNDARIES: @@

The boundary line is present only when the trailing set differs from the
plain word boundary.  Tabular format (the final, display-oriented output)
puts one token per line: surface, morph tags, syntactic tags, boundary,
TAB-separated; the sentence boundary opens each sentence on its own line.
Both emitters are deterministic and bit-exact.
"""
from __future__ import annotations

from typing import Iterable, Iterator

from .model import (
    BOUNDARY_TEXTS,
    PLAIN_BOUNDARY,
    SENTENCE_BOUNDARY,
    Cohort,
    Reading,
    Sentence,
    StreamFormatError,
    Symbol,
    MORPH,
    SYN,
    boundary,
    classify_tag,
)

_BOUNDARY_PREFIX = "@BOUNDARIES:"


def _parse_reading_line(body: str, line_no: int) -> Reading:
    body = body.strip()
    if not body.startswith('"'):
        raise StreamFormatError(line_no, f"reading must begin with a quoted "
                                         f"base form: {body!r}")
    closing = body.find('"', 1)
    if closing < 0:
        raise StreamFormatError(line_no, "unterminated base form quote")
    base = body[1:closing]
    if not base:
        raise StreamFormatError(line_no, "empty base form")
    morph_tags: list[Symbol] = []
    syn_tags: list[Symbol] = []
    for tok in body[closing + 1:].split():
        sym = classify_tag(tok)
        if sym.kind == MORPH:
            if syn_tags:
                raise StreamFormatError(
                    line_no, f"morphological tag {tok!r} after syntactic tags")
            morph_tags.append(sym)
        elif sym.kind == SYN:
            syn_tags.append(sym)
        else:
            raise StreamFormatError(line_no, f"boundary token {tok!r} in reading")
    try:
        return Reading(base, morph_tags, syn_tags)
    except ValueError as exc:
        raise StreamFormatError(line_no, str(exc)) from None


def iter_cohort_blocks(text: str) -> Iterator[tuple[int, Cohort]]:
    """Yield (line_no, Cohort) for each block of a vertical-format stream.

    Shared by the sentence stream parser and the lexicon loader; blocks
    without a boundary line default to the plain word boundary.
    """
    surface: str | None = None
    surface_line = 0
    readings: list[Reading] = []
    bounds: list[Symbol] = []

    def finish() -> Cohort | None:
        if surface is None:
            return None
        if not readings:
            raise StreamFormatError(surface_line, f"cohort {surface!r} has no readings")
        try:
            return Cohort(surface, readings, bounds or (PLAIN_BOUNDARY,))
        except ValueError as exc:
            raise StreamFormatError(surface_line, str(exc)) from None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if raw.startswith("\t"):
            if surface is None:
                raise StreamFormatError(line_no, "reading line before any surface line")
            body = raw[1:]
            if body.startswith(_BOUNDARY_PREFIX):
                toks = body[len(_BOUNDARY_PREFIX):].split()
                if not toks:
                    raise StreamFormatError(line_no, "empty boundary line")
                for t in toks:
                    if t not in BOUNDARY_TEXTS:
                        raise StreamFormatError(line_no, f"unknown boundary token {t!r}")
                    bounds.append(boundary(t))
            else:
                readings.append(_parse_reading_line(body, line_no))
        else:
            done = finish()
            if done is not None:
                yield surface_line, done
            tok = raw.strip()
            if not (tok.startswith('"<') and tok.endswith('>"')):
                raise StreamFormatError(line_no, f"expected surface line, got {raw!r}")
            surface = tok[2:-2]
            if not surface:
                raise StreamFormatError(line_no, "empty surface")
            surface_line = line_no
            readings = []
            bounds = []
    done = finish()
    if done is not None:
        yield surface_line, done


def parse_cohort_stream(text: str) -> list[Sentence]:
    """Parse a vertical-format stream into sentences.

    Sentences split where a cohort's trailing boundary set is exactly the
    sentence boundary.  Empty input parses to an empty list.
    """
    sentences: list[Sentence] = []
    pending: list[Cohort] = []
    last_line = 0
    for line_no, cohort in iter_cohort_blocks(text):
        pending.append(cohort)
        last_line = line_no
        if cohort.trailing_boundaries == {SENTENCE_BOUNDARY}:
            sentences.append(Sentence(pending))
            pending = []
    if pending:
        raise StreamFormatError(last_line, "unterminated sentence (no @@ boundary)")
    return sentences


def emit_reading(reading: Reading) -> str:
    tags = " ".join(t.text for t in reading.morph_tags + reading.syn_tags)
    return f'"{reading.baseform}" {tags}' if tags else f'"{reading.baseform}"'


def emit_cohort(cohort: Cohort) -> str:
    lines = [f'"<{cohort.surface}>"']
    for r in cohort.readings:
        lines.append("\t" + emit_reading(r))
    if cohort.trailing_boundaries != {PLAIN_BOUNDARY}:
        bounds = " ".join(b.text for b in cohort.boundary_order())
        lines.append(f"\t{_BOUNDARY_PREFIX} {bounds}")
    return "\n".join(lines)


def emit_cohort_stream(sentences: Iterable[Sentence]) -> str:
    """Render sentences in the vertical format; inverse of parse_cohort_stream."""
    chunks = []
    for sentence in sentences:
        for cohort in sentence:
            chunks.append(emit_cohort(cohort))
    return "\n".join(chunks) + "\n" if chunks else ""


def _tabular_columns(cohort: Cohort) -> tuple[str, str]:
    if cohort.surface.startswith("@") or cohort.surface.startswith("<"):
        # Punctuation/document markers are shown bare, like the reference
        # output layout.
        return "", ""
    morph_col = "|".join(" ".join(t.text for t in r.morph_tags)
                         for r in cohort.readings)
    syn_col = "|".join(" ".join(t.text for t in r.syn_tags)
                       for r in cohort.readings)
    return morph_col, syn_col


def emit_tabular(sentences: Iterable[Sentence]) -> str:
    """Render sentences in the final tabular format.

    Residual ambiguity is kept visible: alternative readings (or
    boundaries) are joined with '|' inside their column.
    """
    lines: list[str] = []
    for sentence in sentences:
        lines.append(SENTENCE_BOUNDARY.text)
        for cohort in sentence:
            morph_col, syn_col = _tabular_columns(cohort)
            bound_col = "|".join(b.text for b in cohort.boundary_order())
            lines.append(f"{cohort.surface}\t{morph_col}\t{syn_col}\t{bound_col}")
    return "\n".join(lines) + "\n" if lines else ""
