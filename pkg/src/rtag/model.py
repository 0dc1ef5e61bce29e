"""Core data model: symbols, readings, cohorts, sentences.

Every pipeline stage exchanges these values.  A sentence is an ordered
list of cohorts; a cohort is a surface token plus its set of alternative
readings and the set of alternative boundaries that may follow it.  All
values are immutable after construction and safe to share between
workers.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Iterator

# Symbol kinds
MORPH = "morph-tag"
SYN = "syntactic-tag"
BOUNDARY = "boundary-tag"
BASEFORM = "baseform"
MARKER = "surface-marker"

_KIND_RANK = {MORPH: 0, SYN: 1, BOUNDARY: 2, BASEFORM: 3, MARKER: 4}

# The five inter-word boundary markers.
BOUNDARY_TEXTS = ("@", "@/", "@<", "@>", "@@")

# Morph tag attached to punctuation marker cohorts.
PUNCT_TAG_TEXT = "PUNCT"

DEFAULT_RESOLVE_CAP = 10 ** 6


class StreamFormatError(ValueError):
    """Malformed cohort stream; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CombinatorialOverflow(RuntimeError):
    """A full expansion would exceed the configured cap."""


class Symbol:
    """Interned (text, kind) pair; the atoms of every automaton alphabet."""

    __slots__ = ("text", "kind")
    _pool: dict[tuple[str, str], "Symbol"] = {}

    def __new__(cls, text: str, kind: str):
        key = (text, kind)
        sym = cls._pool.get(key)
        if sym is None:
            if not text or any(c.isspace() for c in text):
                raise ValueError(f"bad symbol text {text!r}")
            if kind not in _KIND_RANK:
                raise ValueError(f"unknown symbol kind {kind!r}")
            if kind == BOUNDARY and text not in BOUNDARY_TEXTS:
                raise ValueError(f"not a boundary marker: {text!r}")
            sym = object.__new__(cls)
            object.__setattr__(sym, "text", text)
            object.__setattr__(sym, "kind", kind)
            cls._pool[key] = sym
        return sym

    def __setattr__(self, name, value):
        raise AttributeError("Symbol is immutable")

    def __reduce__(self):
        return (Symbol, (self.text, self.kind))

    def sort_key(self) -> tuple[int, str]:
        return (_KIND_RANK[self.kind], self.text)

    def __lt__(self, other: "Symbol") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Symbol({self.text!r}, {self.kind})"

    def __str__(self):
        # Word-level symbols are displayed quoted, tags bare; this keeps
        # a rendered symbol string unambiguous.
        if self.kind in (BASEFORM, MARKER):
            return f'"{self.text}"'
        return self.text


def morph(text: str) -> Symbol:
    return Symbol(text, MORPH)


def syn(text: str) -> Symbol:
    return Symbol(text, SYN)


def boundary(text: str) -> Symbol:
    return Symbol(text, BOUNDARY)


def word_symbol(text: str) -> Symbol:
    """Baseform slot of a reading; marker tokens keep their own kind."""
    return Symbol(text, MARKER if text.startswith("@") else BASEFORM)


def classify_tag(text: str) -> Symbol:
    """Classify a bare tag token from a reading line or a rule file.

    Boundary markers are the five fixed texts; syntactic-function tags
    start or end with '@'; everything else is a morphological tag.
    """
    if text in BOUNDARY_TEXTS:
        return boundary(text)
    if text.startswith("@") or text.endswith("@"):
        return syn(text)
    return morph(text)


BOUNDARY_SYMBOLS = tuple(boundary(t) for t in BOUNDARY_TEXTS)
SENTENCE_BOUNDARY = boundary("@@")
PLAIN_BOUNDARY = boundary("@")
CLAUSE_BOUNDARY = boundary("@/")
EMBED_OPEN = boundary("@<")
EMBED_CLOSE = boundary("@>")
PUNCT_TAG = morph(PUNCT_TAG_TEXT)

SymbolString = tuple[Symbol, ...]


def render_symbols(symbols: Iterable[Symbol]) -> str:
    return " ".join(str(s) for s in symbols)


class Reading:
    """One candidate analysis: base form + morph tags (+ syntactic tags)."""

    __slots__ = ("baseform", "morph_tags", "syn_tags")

    def __init__(self, baseform: str, morph_tags: Iterable[Symbol],
                 syn_tags: Iterable[Symbol] = ()):
        morph_tags = tuple(morph_tags)
        syn_tags = tuple(syn_tags)
        if not morph_tags:
            raise ValueError("reading needs at least one morphological tag")
        for t in morph_tags:
            if t.kind != MORPH:
                raise ValueError(f"{t!r} is not a morphological tag")
        for t in syn_tags:
            if t.kind != SYN:
                raise ValueError(f"{t!r} is not a syntactic tag")
        if len(syn_tags) > 2:
            raise ValueError("a reading carries at most two syntactic tags")
        if len(syn_tags) == 2 and not syn_tags[1].text.endswith("@"):
            # Two-tag readings are main verbs: function + clause function.
            raise ValueError("second syntactic tag must be a clause-function tag")
        object.__setattr__(self, "baseform", baseform)
        object.__setattr__(self, "morph_tags", morph_tags)
        object.__setattr__(self, "syn_tags", syn_tags)

    def __setattr__(self, name, value):
        raise AttributeError("Reading is immutable")

    def __reduce__(self):
        return (Reading, (self.baseform, self.morph_tags, self.syn_tags))

    def key(self) -> tuple:
        return (self.baseform, self.morph_tags, self.syn_tags)

    def __eq__(self, other):
        return isinstance(other, Reading) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def symbols(self) -> SymbolString:
        """Symbol sequence this reading contributes to a sentence string."""
        return (word_symbol(self.baseform),) + self.morph_tags + self.syn_tags

    def has_tag(self, tag: Symbol) -> bool:
        return tag in self.morph_tags or tag in self.syn_tags

    def with_syn(self, syn_tags: Iterable[Symbol]) -> "Reading":
        return Reading(self.baseform, self.morph_tags, syn_tags)

    def __repr__(self):
        return f"Reading({render_symbols(self.symbols())})"


class Cohort:
    """A surface token with its alternative readings and trailing boundary set."""

    __slots__ = ("surface", "readings", "trailing_boundaries")

    def __init__(self, surface: str, readings: Iterable[Reading],
                 trailing_boundaries: Iterable[Symbol] = (PLAIN_BOUNDARY,)):
        seen: dict[tuple, Reading] = {}
        for r in readings:
            seen.setdefault(r.key(), r)
        readings = tuple(seen.values())
        if not surface:
            raise ValueError("empty surface")
        if not readings:
            raise ValueError(f"cohort {surface!r} has no readings")
        bounds = frozenset(trailing_boundaries)
        if not bounds:
            raise ValueError(f"cohort {surface!r} has no trailing boundaries")
        for b in bounds:
            if b.kind != BOUNDARY:
                raise ValueError(f"{b!r} is not a boundary tag")
        object.__setattr__(self, "surface", surface)
        object.__setattr__(self, "readings", readings)
        object.__setattr__(self, "trailing_boundaries", bounds)

    def __setattr__(self, name, value):
        raise AttributeError("Cohort is immutable")

    def __reduce__(self):
        return (Cohort, (self.surface, self.readings,
                         tuple(self.trailing_boundaries)))

    @property
    def is_ambiguous(self) -> bool:
        return len(self.readings) > 1

    def with_readings(self, readings: Iterable[Reading]) -> "Cohort":
        return Cohort(self.surface, readings, self.trailing_boundaries)

    def with_boundaries(self, bounds: Iterable[Symbol]) -> "Cohort":
        return Cohort(self.surface, self.readings, bounds)

    def boundary_order(self) -> list[Symbol]:
        """Trailing boundaries in the canonical display order."""
        return [b for b in BOUNDARY_SYMBOLS if b in self.trailing_boundaries]

    def __eq__(self, other):
        return (isinstance(other, Cohort)
                and self.surface == other.surface
                and self.readings == other.readings
                and self.trailing_boundaries == other.trailing_boundaries)

    def __hash__(self):
        return hash((self.surface, self.readings, self.trailing_boundaries))

    def __repr__(self):
        return f"Cohort({self.surface!r}, {len(self.readings)} readings)"


class Sentence:
    """Ordered cohorts; starts and ends at the sentence boundary marker."""

    __slots__ = ("cohorts",)

    leading_boundary = frozenset({SENTENCE_BOUNDARY})

    def __init__(self, cohorts: Iterable[Cohort]):
        cohorts = tuple(cohorts)
        if not cohorts:
            raise ValueError("sentence with no cohorts")
        if cohorts[-1].trailing_boundaries != {SENTENCE_BOUNDARY}:
            raise ValueError("last cohort must end at the sentence boundary")
        object.__setattr__(self, "cohorts", cohorts)

    def __setattr__(self, name, value):
        raise AttributeError("Sentence is immutable")

    def __reduce__(self):
        return (Sentence, (self.cohorts,))

    def __iter__(self) -> Iterator[Cohort]:
        return iter(self.cohorts)

    def __len__(self):
        return len(self.cohorts)

    def __eq__(self, other):
        return isinstance(other, Sentence) and self.cohorts == other.cohorts

    def __hash__(self):
        return hash(self.cohorts)

    def with_cohorts(self, cohorts: Iterable[Cohort]) -> "Sentence":
        return Sentence(cohorts)

    def total_readings(self) -> int:
        return sum(len(c.readings) for c in self.cohorts)

    def resolved_count(self) -> int:
        n = 1
        for c in self.cohorts:
            n *= len(c.readings) * len(c.trailing_boundaries)
        return n

    def __repr__(self):
        return f"Sentence({' '.join(c.surface for c in self.cohorts)!r})"


def resolve_strings(sentence: Sentence,
                    max_count: int = DEFAULT_RESOLVE_CAP) -> list[SymbolString]:
    """All fully disambiguated linearizations of an ambiguous sentence.

    One string per combination of (reading, trailing boundary) choices:
    leading boundary, then each chosen reading's symbols followed by the
    chosen boundary.  Raises CombinatorialOverflow when the product of
    alternatives exceeds ``max_count``.
    """
    total = sentence.resolved_count()
    if total > max_count:
        raise CombinatorialOverflow(
            f"{total} resolved strings exceed the cap of {max_count}")
    per_cohort: list[list[SymbolString]] = []
    for cohort in sentence.cohorts:
        options = [r.symbols() + (b,)
                   for r in cohort.readings
                   for b in cohort.boundary_order()]
        per_cohort.append(options)
    out: list[SymbolString] = []
    for combo in itertools.product(*per_cohort):
        string: SymbolString = (SENTENCE_BOUNDARY,)
        for part in combo:
            string += part
        out.append(string)
    return out


def boundaries_balanced(string: SymbolString) -> bool:
    """Check '@<'/'@>' nesting on a fully resolved string."""
    depth = 0
    for s in string:
        if s is EMBED_OPEN:
            depth += 1
        elif s is EMBED_CLOSE:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def punctuation_reading(surface: str) -> Reading:
    """Identity reading for a punctuation marker token such as '@comma'."""
    return Reading(surface, (PUNCT_TAG,))
