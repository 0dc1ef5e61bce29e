"""Constraint Grammar disambiguation.

Pattern-action rules delete contextually illegitimate readings.  Full
passes repeat until a pass deletes nothing; deletions take effect
immediately, so a context can become unambiguous within the same pass.
A rule never removes a cohort's last reading.

Rule file format, one rule per line::

    STRICT REMOVE V IF (-1C DET) ;
    HEUR REMOVE N IF (1 DET) (*L NOT PREP CS) ;

Position ``0`` is the target cohort itself, ``*L``/``*R`` scan unbounded
to the sentence edge.  ``C`` marks careful mode (the tested cohort must
already be unambiguous), ``NOT`` negates the test.  Groups are
alternatives; tests inside one group (comma-separated) must all hold.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

from .model import MORPH, Cohort, Sentence, Symbol, classify_tag

STRICT = "strict"
HEURISTIC = "heuristic"

_TIER_KEYWORDS = {"STRICT": STRICT, "HEUR": HEURISTIC}
_TIER_EMIT = {STRICT: "STRICT", HEURISTIC: "HEUR"}


class CgParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ContextTest:
    """One positional test inside a context pattern."""

    __slots__ = ("position", "careful", "negative", "tagset")

    def __init__(self, position: int | str, careful: bool, negative: bool,
                 tagset: Iterable[Symbol]):
        if isinstance(position, str) and position not in ("*L", "*R"):
            raise ValueError(f"bad scan position {position!r}")
        self.position = position
        self.careful = careful
        self.negative = negative
        self.tagset = frozenset(tagset)
        if not self.tagset:
            raise ValueError("empty tagset in context test")


class ContextPattern:
    """All tests must hold for the pattern to be satisfied."""

    __slots__ = ("tests",)

    def __init__(self, tests: Iterable[ContextTest]):
        self.tests = tuple(tests)
        if not self.tests:
            raise ValueError("context pattern without tests")


class ConstraintRule:
    """Delete the target tag's readings wherever some pattern is satisfied."""

    __slots__ = ("target", "patterns", "tier")

    def __init__(self, target: Symbol, patterns: Iterable[ContextPattern],
                 tier: str = STRICT):
        if target.kind != MORPH:
            raise ValueError(f"rule target {target!r} is not a morphological tag")
        if tier not in (STRICT, HEURISTIC):
            raise ValueError(f"unknown tier {tier!r}")
        self.target = target
        self.patterns = tuple(patterns)
        self.tier = tier
        if not self.patterns:
            raise ValueError("rule without context patterns")


class CgGrammar:
    def __init__(self, rules: Sequence[ConstraintRule]):
        self.rules = tuple(rules)
        for tier in (STRICT, HEURISTIC):
            seen: set[Symbol] = set()
            for rule in self.rules:
                if rule.tier != tier:
                    continue
                if rule.target in seen:
                    raise ValueError(
                        f"duplicate {tier} rule for target {rule.target.text}")
                seen.add(rule.target)

    def tier_rules(self, heuristics: bool) -> list[ConstraintRule]:
        if heuristics:
            return list(self.rules)
        return [r for r in self.rules if r.tier == STRICT]


def _cohort_matches(cohort: Cohort, test: ContextTest) -> bool:
    if test.careful and len(cohort.readings) != 1:
        return False
    return any(any(r.has_tag(t) for t in test.tagset) for r in cohort.readings)


def _test_holds(cohorts: Sequence[Cohort], index: int, test: ContextTest) -> bool:
    if test.position == "*L":
        found = any(_cohort_matches(cohorts[j], test) for j in range(index - 1, -1, -1))
    elif test.position == "*R":
        found = any(_cohort_matches(cohorts[j], test)
                    for j in range(index + 1, len(cohorts)))
    else:
        j = index + test.position
        found = 0 <= j < len(cohorts) and _cohort_matches(cohorts[j], test)
    return not found if test.negative else found


def _rule_fires(cohorts: Sequence[Cohort], index: int, rule: ConstraintRule) -> bool:
    return any(all(_test_holds(cohorts, index, t) for t in p.tests)
               for p in rule.patterns)


def _run_passes(cohorts: list[Cohort], rules: Sequence[ConstraintRule],
                trace: list[int]) -> None:
    while True:
        deleted = 0
        for rule in rules:
            for i, cohort in enumerate(cohorts):
                if len(cohort.readings) < 2:
                    continue
                candidates = [r for r in cohort.readings
                              if rule.target in r.morph_tags]
                if not candidates or len(candidates) == len(cohort.readings):
                    # Deleting every reading would empty the cohort.
                    continue
                if _rule_fires(cohorts, i, rule):
                    keep = [r for r in cohort.readings if r not in candidates]
                    cohorts[i] = cohort.with_readings(keep)
                    deleted += len(candidates)
        trace.append(deleted)
        if deleted == 0:
            return


def apply_grammar_traced(sentence: Sentence, grammar: CgGrammar,
                         heuristics: bool = False) -> tuple[Sentence, list[int]]:
    """Like apply_grammar but also returns per-pass deletion counts."""
    cohorts = list(sentence.cohorts)
    trace: list[int] = []
    _run_passes(cohorts, grammar.tier_rules(False), trace)
    if heuristics and any(r.tier == HEURISTIC for r in grammar.rules):
        # The heuristic tier starts only after the strict tier's fixpoint;
        # strict rules stay active so they can react to heuristic deletions.
        _run_passes(cohorts, grammar.tier_rules(True), trace)
    return sentence.with_cohorts(cohorts), trace


def apply_grammar(sentence: Sentence, grammar: CgGrammar,
                  heuristics: bool = False) -> Sentence:
    """Run enabled rule tiers to fixpoint; readings only ever shrink."""
    return apply_grammar_traced(sentence, grammar, heuristics)[0]


# ---------------------------------------------------------------------------
# Rule file parsing

_GROUP_RE = re.compile(r"\(([^()]*)\)")
_POS_RE = re.compile(r"(\*L|\*R|-?\d+)(C?)$")


def _parse_test(chunk: str, line_no: int) -> ContextTest:
    toks = chunk.split()
    if len(toks) < 2:
        raise CgParseError(line_no, f"test needs a position and tags: {chunk!r}")
    m = _POS_RE.match(toks[0])
    if not m:
        raise CgParseError(line_no, f"bad position {toks[0]!r}")
    position: int | str = m.group(1) if m.group(1) in ("*L", "*R") else int(m.group(1))
    careful = m.group(2) == "C"
    rest = toks[1:]
    negative = False
    if rest and rest[0] == "NOT":
        negative = True
        rest = rest[1:]
    if not rest:
        raise CgParseError(line_no, f"test without tags: {chunk!r}")
    tagset = []
    for tok in rest:
        sym = classify_tag(tok)
        if sym.kind not in (MORPH, "syntactic-tag"):
            raise CgParseError(line_no, f"cannot test boundary token {tok!r}")
        tagset.append(sym)
    return ContextTest(position, careful, negative, tagset)


def parse_rule_line(line: str, line_no: int) -> ConstraintRule:
    body = line.strip()
    if not body.endswith(";"):
        raise CgParseError(line_no, "rule must end with ';'")
    body = body[:-1].strip()
    toks = body.split(None, 3)
    if len(toks) != 4 or toks[1] != "REMOVE" or toks[0] not in _TIER_KEYWORDS:
        raise CgParseError(line_no, "expected 'STRICT|HEUR REMOVE <tag> IF (...)'")
    tier = _TIER_KEYWORDS[toks[0]]
    target = classify_tag(toks[2])
    if target.kind != MORPH:
        raise CgParseError(line_no, f"target {toks[2]!r} is not a morphological tag")
    rest = toks[3]
    if not rest.startswith("IF"):
        raise CgParseError(line_no, "missing IF")
    rest = rest[2:].strip()
    groups = _GROUP_RE.findall(rest)
    leftover = _GROUP_RE.sub("", rest).strip()
    if leftover:
        raise CgParseError(line_no, f"unparsed rule text {leftover!r}")
    if not groups:
        raise CgParseError(line_no, "rule needs at least one context group")
    patterns = []
    for group in groups:
        tests = [_parse_test(chunk.strip(), line_no)
                 for chunk in group.split(",") if chunk.strip()]
        if not tests:
            raise CgParseError(line_no, "empty context group")
        patterns.append(ContextPattern(tests))
    try:
        return ConstraintRule(target, patterns, tier)
    except ValueError as exc:
        raise CgParseError(line_no, str(exc)) from None


def load_cg_grammar(text: str, known_tags: set[Symbol] | None = None) -> CgGrammar:
    """Parse a rule file; optionally validate tags against a known set."""
    rules = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rule = parse_rule_line(line, line_no)
        if known_tags is not None:
            for sym in [rule.target, *(t for p in rule.patterns
                                       for test in p.tests for t in test.tagset)]:
                if sym not in known_tags:
                    raise CgParseError(line_no, f"unknown tag {sym.text!r}")
        rules.append(rule)
    try:
        return CgGrammar(rules)
    except ValueError as exc:
        raise CgParseError(0, str(exc)) from None


def _emit_test(test: ContextTest) -> str:
    pos = str(test.position)
    if test.careful:
        pos += "C"
    tags = " ".join(t.text for t in sorted(test.tagset))
    return f"{pos}{' NOT' if test.negative else ''} {tags}"


def emit_cg_grammar(grammar: CgGrammar) -> str:
    """Canonical text form; load(emit(g)) reproduces g."""
    lines = []
    for rule in grammar.rules:
        groups = " ".join(
            "(" + ", ".join(_emit_test(t) for t in p.tests) + ")"
            for p in rule.patterns)
        lines.append(f"{_TIER_EMIT[rule.tier]} REMOVE {rule.target.text} IF {groups} ;")
    return "\n".join(lines) + "\n" if lines else ""
