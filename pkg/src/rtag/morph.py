"""Morphological analysis: lexicon lookup, word-shape heuristics, defaults.

Every token gets a cohort.  Lookup order: exact surface, lowercased
surface, punctuation/document marker, word-shape heuristics in priority
order, and finally the default nominal reading.
"""
from __future__ import annotations

import re
from typing import Iterable

from .model import (Cohort, Reading, StreamFormatError, Symbol, classify_tag,
                    morph, punctuation_reading)
from .streams import iter_cohort_blocks

DEFAULT_NOMINAL_TAGS = (morph("N"), morph("NOM"), morph("SG"))


class LexiconError(ValueError):
    pass


class HeuristicsError(ValueError):
    pass


class Lexicon:
    """Full-form lexicon: surface form -> readings."""

    def __init__(self, entries: dict[str, tuple[Reading, ...]] | None = None):
        self.entries = dict(entries or {})

    def __len__(self):
        return len(self.entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self.entries

    def lookup(self, surface: str) -> tuple[Reading, ...] | None:
        """Exact match first, then the lowercased surface."""
        hit = self.entries.get(surface)
        if hit is None:
            hit = self.entries.get(surface.lower())
        return hit


def load_lexicon(text: str) -> Lexicon:
    """Load vertical-format cohort blocks; duplicate surfaces merge to the
    union of their readings."""
    entries: dict[str, tuple[Reading, ...]] = {}
    try:
        for _, cohort in iter_cohort_blocks(text):
            old = entries.get(cohort.surface, ())
            merged = list(old)
            for r in cohort.readings:
                if r not in merged:
                    merged.append(r)
            entries[cohort.surface] = tuple(merged)
    except StreamFormatError as exc:
        raise LexiconError(str(exc)) from None
    return Lexicon(entries)


class HeuristicRule:
    """Word-shape rule: fires on unknown surfaces matching its pattern."""

    def __init__(self, priority: int, kind: str, argument: str,
                 templates: Iterable[tuple[Symbol, ...]]):
        if kind not in ("suffix", "prefix", "regexlike"):
            raise HeuristicsError(f"unknown pattern kind {kind!r}")
        self.priority = priority
        self.kind = kind
        self.argument = argument
        self.templates = tuple(tuple(t) for t in templates)
        if not self.templates or not all(self.templates):
            raise HeuristicsError("heuristic rule without reading templates")
        self._regex = re.compile(argument) if kind == "regexlike" else None

    def matches(self, surface: str) -> bool:
        if self.kind == "suffix":
            return surface.lower().endswith(self.argument)
        if self.kind == "prefix":
            return surface.lower().startswith(self.argument)
        return self._regex.fullmatch(surface) is not None

    def readings(self, surface: str) -> list[Reading]:
        return [Reading(surface, tags) for tags in self.templates]


def load_heuristics(text: str) -> tuple[HeuristicRule, ...]:
    """One rule per line: ``priority<TAB>pattern<TAB>tag template``.

    Patterns look like ``suffix:ly``; templates are space-separated tags,
    with ``|`` separating alternative readings.
    """
    rules: list[HeuristicRule] = []
    seen_priorities: set[int] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise HeuristicsError(
                f"line {line_no}: expected PRIORITY<TAB>PATTERN<TAB>TEMPLATE")
        try:
            priority = int(parts[0])
        except ValueError:
            raise HeuristicsError(f"line {line_no}: bad priority {parts[0]!r}") from None
        if priority in seen_priorities:
            raise HeuristicsError(f"line {line_no}: duplicate priority {priority}")
        seen_priorities.add(priority)
        if ":" not in parts[1]:
            raise HeuristicsError(f"line {line_no}: bad pattern {parts[1]!r}")
        kind, argument = parts[1].split(":", 1)
        templates = []
        for chunk in parts[2].split("|"):
            tags = []
            for tok in chunk.split():
                sym = classify_tag(tok)
                if sym.kind != "morph-tag":
                    raise HeuristicsError(
                        f"line {line_no}: template tag {tok!r} is not morphological")
                tags.append(sym)
            templates.append(tuple(tags))
        try:
            rules.append(HeuristicRule(priority, kind.strip(), argument, templates))
        except HeuristicsError as exc:
            raise HeuristicsError(f"line {line_no}: {exc}") from None
    rules.sort(key=lambda r: r.priority)
    return tuple(rules)


def analyze(token: str, lexicon: Lexicon,
            heuristics: Iterable[HeuristicRule] = ()) -> Cohort:
    """Assign the token its candidate readings.

    Lexicon readings are returned verbatim; exactly one heuristic (or the
    default nominal reading) contributes otherwise.  Marker tokens
    (``@comma``, document markers) carry their identity reading instead of
    the nominal default.
    """
    if not token:
        raise ValueError("empty token")
    hit = lexicon.lookup(token)
    if hit is not None:
        return Cohort(token, hit)
    if token.startswith("@") or (token.startswith("<") and token.endswith(">")):
        return Cohort(token, [punctuation_reading(token)])
    for rule in heuristics:
        if rule.matches(token):
            return Cohort(token, rule.readings(token))
    return Cohort(token, [Reading(token, DEFAULT_NOMINAL_TAGS)])
