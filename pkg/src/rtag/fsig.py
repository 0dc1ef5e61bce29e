"""Finite-state intersection parsing.

The ambiguous sentence becomes an acyclic automaton over reading symbols
and boundary markers.  Grammar rules are implication (restriction) rules

    X => LC1 _ RC1, ..., LCn _ RCn

meaning every occurrence of X must sit in at least one licensed context.
Rules compile to automata; parsing intersects the sentence automaton
with every rule automaton and enumerates the surviving strings.  Ranking
rules then thin a surviving set: each one keeps the subset it accepts
when that subset is non-empty, otherwise it is skipped.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import fsa
from .model import (
    BOUNDARY_SYMBOLS,
    CLAUSE_BOUNDARY,
    EMBED_CLOSE,
    EMBED_OPEN,
    MORPH,
    PLAIN_BOUNDARY,
    PUNCT_TAG,
    SENTENCE_BOUNDARY,
    SYN,
    Cohort,
    Reading,
    Sentence,
    Symbol,
    SymbolString,
    classify_tag,
    morph,
    word_symbol,
)
from .fsa import (
    Dfa,
    Regex,
    RegexCompiler,
    RAny,
    RAnyExcept,
    RConcat,
    REmpty,
    REpsilon,
    RNot,
    RRef,
    RStar,
    RSymbol,
    RUnion,
    SIGMA_STAR,
    UnknownReference,
)

DEFAULT_ENUM_CAP = 10_000


class FsigParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class EmptyRuleTarget(ValueError):
    """An implication rule whose X denotes the empty language."""


class SyntaxMapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Syntactic-tag lookup and boundary introduction

_CLAUSE_WORD_TAGS = frozenset({morph("CS"), morph("CC"), morph("<Rel>")})
_FINITE_MARKERS = frozenset({morph("IMP"), morph("PRES"), morph("PAST"),
                             morph("SUBJUNCTIVE")})
_VERB = morph("V")
_ADV = morph("ADV")

FULL_BOUNDARY_SET = frozenset({PLAIN_BOUNDARY, CLAUSE_BOUNDARY,
                               EMBED_OPEN, EMBED_CLOSE})


class SyntaxMap:
    """Morph-tag keys to candidate syntactic-tag lists.

    A key matches a reading when all its tags occur among the reading's
    morph tags; the most specific matching key wins.
    """

    def __init__(self, entries: Sequence[tuple[frozenset[Symbol],
                                               tuple[tuple[Symbol, ...], ...]]]):
        self.entries = tuple(entries)
        for key, options in self.entries:
            for option in options:
                if any(t.text in ("@MV", "@mv") for t in option) and len(option) != 2:
                    raise SyntaxMapError(
                        "main-verb mappings must carry exactly two tags: "
                        + " ".join(t.text for t in option))

    def options_for(self, reading: Reading) -> tuple[tuple[Symbol, ...], ...]:
        tags = set(reading.morph_tags)
        best = None
        best_size = -1
        for key, options in self.entries:
            if len(key) > best_size and key <= tags:
                best = options
                best_size = len(key)
        if best is None:
            raise SyntaxMapError(
                "no syntactic mapping for reading "
                + " ".join(t.text for t in reading.morph_tags))
        return best


def load_syntax_map(text: str) -> SyntaxMap:
    """Lines of ``TAG [TAG...] : OPTION | OPTION`` with ``-`` for the empty
    option."""
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FsigParseError(line_no, "expected 'TAGS : OPTIONS'")
        left, right = line.split(":", 1)
        key = []
        for tok in left.split():
            sym = classify_tag(tok)
            if sym.kind != MORPH:
                raise FsigParseError(line_no, f"key tag {tok!r} is not morphological")
            key.append(sym)
        if not key:
            raise FsigParseError(line_no, "empty key")
        options = []
        for chunk in right.split("|"):
            toks = chunk.split()
            if toks == ["-"]:
                options.append(())
                continue
            option = []
            for tok in toks:
                sym = classify_tag(tok)
                if sym.kind != SYN:
                    raise FsigParseError(line_no, f"option tag {tok!r} is not syntactic")
                option.append(sym)
            if not option:
                raise FsigParseError(line_no, "empty option (use '-')")
            options.append(tuple(option))
        if not options:
            raise FsigParseError(line_no, "entry without options")
        entries.append((frozenset(key), tuple(options)))
    try:
        return SyntaxMap(entries)
    except SyntaxMapError as exc:
        raise FsigParseError(0, str(exc)) from None


def _has_finite_verb(cohort: Cohort) -> bool:
    return any(_VERB in r.morph_tags and not _FINITE_MARKERS.isdisjoint(r.morph_tags)
               for r in cohort.readings)


def _boundary_trigger(left: Cohort, right: Cohort) -> bool:
    """Between which cohorts the full boundary alternative set is offered.

    Safe over-generation: clause-level boundaries are offered wherever a
    clause edge is plausible (conjunctions, relatives, adverbs or
    punctuation on the right, a finite verb on either side) and the rule
    automata prune the rest.
    """
    for r in right.readings:
        if not _CLAUSE_WORD_TAGS.isdisjoint(r.morph_tags):
            return True
        if PUNCT_TAG in r.morph_tags or _ADV in r.morph_tags:
            return True
    return _has_finite_verb(left) or _has_finite_verb(right)


def lookup_syntax(sentence: Sentence, syntax_map: SyntaxMap) -> Sentence:
    """Expand each reading per candidate syntactic-tag list and install
    boundary alternatives.

    Readings that already carry syntactic tags pass through unchanged.
    """
    expanded = []
    for cohort in sentence.cohorts:
        readings = []
        for r in cohort.readings:
            if r.syn_tags:
                readings.append(r)
                continue
            for option in syntax_map.options_for(r):
                readings.append(r.with_syn(option))
        expanded.append(cohort.with_readings(readings))
    out = []
    last = len(expanded) - 1
    for i, cohort in enumerate(expanded):
        if i == last:
            out.append(cohort.with_boundaries({SENTENCE_BOUNDARY}))
        elif _boundary_trigger(cohort, expanded[i + 1]):
            out.append(cohort.with_boundaries(FULL_BOUNDARY_SET))
        else:
            out.append(cohort.with_boundaries({PLAIN_BOUNDARY}))
    return sentence.with_cohorts(out)


# ---------------------------------------------------------------------------
# Sentence encoding

def encode_sentence(sentence: Sentence) -> Dfa:
    """Acyclic minimized automaton whose language is exactly the
    sentence's resolved strings."""
    nfa = fsa.Nfa()
    entry = nfa.add_state()
    positions = [nfa.add_state() for _ in range(len(sentence.cohorts) + 1)]
    nfa.edges[entry][SENTENCE_BOUNDARY] = {positions[0]}
    for i, cohort in enumerate(sentence.cohorts):
        for reading in cohort.readings:
            cur = positions[i]
            for sym in reading.symbols():
                nxt = nfa.add_state()
                nfa.edges[cur].setdefault(sym, set()).add(nxt)
                cur = nxt
            for b in cohort.boundary_order():
                nfa.edges[cur].setdefault(b, set()).add(positions[i + 1])
    nfa.starts = {entry}
    nfa.accepting = {positions[-1]}
    return fsa.minimize(fsa.determinize(nfa))


# ---------------------------------------------------------------------------
# Grammar model

@dataclass(frozen=True)
class ImplicationRule:
    name: str
    x: Regex
    contexts: tuple[tuple[Regex, Regex], ...]


class FsigGrammar:
    def __init__(self, definitions: dict[str, Regex],
                 rules: Sequence[ImplicationRule],
                 rankers: Sequence[ImplicationRule]):
        self.definitions = dict(definitions)
        self.rules = tuple(rules)
        self.rankers = tuple(rankers)


_WORD_RUN = RStar(RAnyExcept(frozenset({SENTENCE_BOUNDARY, CLAUSE_BOUNDARY,
                                        EMBED_OPEN, EMBED_CLOSE})))


def _clause_constant() -> Regex:
    """Finite clause span: plain word run, centre-embedding depth <= 2.

    Regular languages cannot track unbounded nesting, so embedded
    stretches are templated two levels deep.
    """
    level1 = RConcat((_WORD_RUN, RStar(RConcat((
        RSymbol(EMBED_OPEN), _WORD_RUN, RSymbol(EMBED_CLOSE), _WORD_RUN)))))
    return RConcat((_WORD_RUN, RStar(RConcat((
        RSymbol(EMBED_OPEN), level1, RSymbol(EMBED_CLOSE), _WORD_RUN)))))


def builtin_definitions() -> dict[str, Regex]:
    return {
        ".": RStar(RAnyExcept(frozenset(BOUNDARY_SYMBOLS))),
        "..": _clause_constant(),
        "ANY": RAny(),
        "ALL": SIGMA_STAR,
        "NONE": REmpty(),
    }


# ---------------------------------------------------------------------------
# Grammar file parsing

_EAGER = "()|&,;"


def _lex(text: str) -> list[tuple[int, str, bool]]:
    """Tokens as (line_no, token, is_quoted)."""
    tokens: list[tuple[int, str, bool]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        i = 0
        line = raw
        while i < len(line):
            c = line[i]
            if c == "#":
                break
            if c.isspace():
                i += 1
                continue
            if c == '"':
                j = line.find('"', i + 1)
                if j < 0:
                    raise FsigParseError(line_no, "unterminated quote")
                tokens.append((line_no, line[i + 1:j], True))
                i = j + 1
                continue
            if c in _EAGER:
                tokens.append((line_no, c, False))
                i += 1
                continue
            if c == "[":
                if i + 1 < len(line) and line[i + 1] == "^":
                    tokens.append((line_no, "[^", False))
                    i += 2
                else:
                    tokens.append((line_no, "[", False))
                    i += 1
                continue
            if c == "]":
                tokens.append((line_no, "]", False))
                i += 1
                continue
            if c == "=" and i + 1 < len(line) and line[i + 1] == ">":
                tokens.append((line_no, "=>", False))
                i += 2
                continue
            j = i
            while j < len(line) and not line[j].isspace() \
                    and line[j] not in _EAGER and line[j] not in "[]":
                if line[j] == "=" and j + 1 < len(line) and line[j + 1] == ">":
                    break
                j += 1
            tokens.append((line_no, line[i:j], False))
            i = j
    return tokens


class _TokenStream:
    def __init__(self, tokens: list[tuple[int, str, bool]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> tuple[int, str, bool] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> tuple[int, str, bool]:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1][0] if self.tokens else 0
            raise FsigParseError(last, "unexpected end of file")
        self.pos += 1
        return tok

    def expect(self, text: str) -> tuple[int, str, bool]:
        tok = self.next()
        if tok[2] or tok[1] != text:
            raise FsigParseError(tok[0], f"expected {text!r}, got {tok[1]!r}")
        return tok


_POSTFIX = {"*", "+", "?"}


class _GrammarParser:
    """Recursive-descent parser for the rule DSL.

    Bare tokens resolve against the definition table first; a token with
    a lowercase letter and no tag punctuation must be a definition name,
    which turns typos into errors instead of silent new symbols.
    """

    def __init__(self, text: str):
        self.stream = _TokenStream(_lex(text))
        self.definitions = builtin_definitions()
        self.user_definitions: dict[str, Regex] = {}
        self.rules: list[ImplicationRule] = []
        self.rankers: list[ImplicationRule] = []
        self._names: set[str] = set()

    def parse(self) -> FsigGrammar:
        while self.stream.peek() is not None:
            line_no, keyword, quoted = self.stream.next()
            if quoted or keyword not in ("define", "rule", "rank"):
                raise FsigParseError(line_no, f"expected a statement, got {keyword!r}")
            if keyword == "define":
                self._parse_define(line_no)
            else:
                self._parse_rule(line_no, keyword)
        return FsigGrammar(dict(self.user_definitions), self.rules, self.rankers)

    def _parse_define(self, line_no: int) -> None:
        _, name, quoted = self.stream.next()
        if quoted:
            raise FsigParseError(line_no, "definition name cannot be quoted")
        if name in self.definitions:
            raise FsigParseError(line_no, f"redefinition of {name!r}")
        self.stream.expect("=")
        body = self._parse_regex(stop={";"})
        self.stream.expect(";")
        self.definitions[name] = body
        self.user_definitions[name] = body

    def _parse_rule(self, line_no: int, keyword: str) -> None:
        _, name, quoted = self.stream.next()
        if quoted:
            raise FsigParseError(line_no, "rule name cannot be quoted")
        if name in self._names:
            raise FsigParseError(line_no, f"duplicate rule name {name!r}")
        self._names.add(name)
        self.stream.expect(":")
        x = self._parse_regex(stop={"=>"})
        self.stream.expect("=>")
        contexts = []
        while True:
            lc = self._parse_regex(stop={"_"})
            self.stream.expect("_")
            rc = self._parse_regex(stop={",", ";"})
            contexts.append((lc, rc))
            _, tok, _ = self.stream.next()
            if tok == ";":
                break
            if tok != ",":
                raise FsigParseError(line_no, f"expected ',' or ';', got {tok!r}")
        rule = ImplicationRule(name, x, tuple(contexts))
        (self.rankers if keyword == "rank" else self.rules).append(rule)

    # regex parsing -------------------------------------------------------

    def _parse_regex(self, stop: set[str]) -> Regex:
        return self._parse_union(stop)

    def _at_stop(self, stop: set[str]) -> bool:
        tok = self.stream.peek()
        return tok is None or (not tok[2] and tok[1] in stop)

    def _parse_union(self, stop: set[str]) -> Regex:
        parts = [self._parse_and(stop | {"|"})]
        while not self._at_stop(stop) and self.stream.peek()[1] == "|":
            self.stream.next()
            parts.append(self._parse_and(stop | {"|"}))
        return parts[0] if len(parts) == 1 else RUnion(tuple(parts))

    def _parse_and(self, stop: set[str]) -> Regex:
        parts = [self._parse_concat(stop | {"&"})]
        while not self._at_stop(stop) and self.stream.peek()[1] == "&":
            self.stream.next()
            parts.append(self._parse_concat(stop | {"&"}))
        return parts[0] if len(parts) == 1 else fsa.RAnd(tuple(parts))

    def _parse_concat(self, stop: set[str]) -> Regex:
        parts = []
        while not self._at_stop(stop):
            tok = self.stream.peek()
            if not tok[2] and tok[1] == ")":
                break
            parts.append(self._parse_postfix(stop))
        if not parts:
            return REpsilon()
        return parts[0] if len(parts) == 1 else RConcat(tuple(parts))

    def _parse_postfix(self, stop: set[str]) -> Regex:
        node = self._parse_atom(stop)
        while not self._at_stop(stop):
            tok = self.stream.peek()
            if tok[2] or tok[1] not in _POSTFIX:
                break
            self.stream.next()
            if tok[1] == "*":
                node = RStar(node)
            elif tok[1] == "+":
                node = RConcat((node, RStar(node)))
            else:
                node = RUnion((node, REpsilon()))
        return node

    def _parse_atom(self, stop: set[str]) -> Regex:
        line_no, tok, quoted = self.stream.next()
        if quoted:
            return RSymbol(word_symbol(tok))
        if tok == "(":
            inner = self._parse_regex(stop={")"})
            self.stream.expect(")")
            return inner
        if tok == "~":
            return RNot(self._parse_postfix(stop))
        if tok in ("[", "[^"):
            members = []
            while True:
                m_line, m_tok, m_quoted = self.stream.next()
                if not m_quoted and m_tok == "]":
                    break
                members.append(word_symbol(m_tok) if m_quoted
                               else classify_tag(m_tok))
            if not members:
                raise FsigParseError(line_no, "empty symbol class")
            if tok == "[^":
                return RAnyExcept(frozenset(members))
            return RUnion(tuple(RSymbol(m) for m in members))
        if tok in self.definitions:
            return RRef(tok)
        if ("@" not in tok and "<" not in tok and ">" not in tok
                and any(c.islower() for c in tok)):
            raise UnknownReference(
                f"line {line_no}: unknown definition {tok!r} "
                "(tag symbols are upper-case)")
        return RSymbol(classify_tag(tok))


def load_fsig_grammar(text: str) -> FsigGrammar:
    return _GrammarParser(text).parse()


# ---------------------------------------------------------------------------
# Rule compilation: restriction semantics

def _concat_dfas(parts: Sequence[Dfa], cap: int | None) -> Dfa:
    return fsa.determinize(fsa.concat_nfa([fsa.dfa_to_nfa(p) for p in parts]), cap)


def _union_dfas(parts: Sequence[Dfa], cap: int | None) -> Dfa:
    if not parts:
        return fsa.empty_dfa()
    return fsa.determinize(fsa.union_nfa([fsa.dfa_to_nfa(p) for p in parts]), cap)


def compile_rule(rule: ImplicationRule, definitions: dict[str, Regex] | None = None,
                 cap: int | None = None) -> Dfa:
    """Compile an implication rule to its restriction automaton.

    Accepts exactly the strings in which every factorization u x v with
    x in L(X) satisfies some context: u ends in LCi and v starts with
    RCi.  Construction: classify prefixes u by the exact set S of
    contexts whose left side they satisfy, and forbid u x v whenever v
    starts with none of S's right sides.
    """
    defs = dict(builtin_definitions())
    defs.update(definitions or {})
    comp = RegexCompiler(defs, cap)
    x = comp.compile(rule.x)
    if fsa.is_empty(x):
        raise EmptyRuleTarget(f"rule {rule.name}: X denotes the empty language")
    n = len(rule.contexts)
    lefts = []
    rights = []
    for lc, rc in rule.contexts:
        lefts.append(comp.compile(RConcat((SIGMA_STAR, lc))))
        rights.append(comp.compile(RConcat((rc, SIGMA_STAR))))
    not_lefts = [fsa.complement(d) for d in lefts]
    not_rights = [fsa.complement(d) for d in rights]

    bad_terms = []
    for mask in range(1 << n):
        prefix_class = fsa.universe_dfa()
        for i in range(n):
            part = lefts[i] if mask & (1 << i) else not_lefts[i]
            prefix_class = fsa.intersect(prefix_class, part, cap)
        if fsa.is_empty(prefix_class):
            continue
        suffix_class = fsa.universe_dfa()
        for i in range(n):
            if mask & (1 << i):
                suffix_class = fsa.intersect(suffix_class, not_rights[i], cap)
        if fsa.is_empty(suffix_class):
            continue
        bad_terms.append(fsa.minimize(
            _concat_dfas([prefix_class, x, suffix_class], cap)))
    bad = _union_dfas(bad_terms, cap)
    return fsa.complement(bad)


class CompiledFsigGrammar:
    """Rule automata ready for intersection, in ascending size order."""

    def __init__(self, rules: Sequence[tuple[str, Dfa]],
                 rankers: Sequence[tuple[str, Dfa]]):
        self.rules = tuple(sorted(rules, key=lambda item: (len(item[1]), item[0])))
        self.rankers = tuple(rankers)

    def state_counts(self) -> list[tuple[str, int]]:
        return [(name, len(dfa)) for name, dfa in self.rules + self.rankers]


def compile_grammar(grammar: FsigGrammar, cap: int | None = None) -> CompiledFsigGrammar:
    rules = [(r.name, compile_rule(r, grammar.definitions, cap))
             for r in grammar.rules]
    rankers = [(r.name, compile_rule(r, grammar.definitions, cap))
               for r in grammar.rankers]
    return CompiledFsigGrammar(rules, rankers)


# ---------------------------------------------------------------------------
# Parsing

@dataclass(frozen=True)
class ParseResult:
    status: str  # unique | ambiguous | empty | overflow
    strings: tuple[SymbolString, ...]
    raw_count: int = 0


def parse(sentence_dfa: Dfa, grammar: CompiledFsigGrammar,
          state_cap: int | None = fsa.DEFAULT_STATE_CAP,
          enum_cap: int | None = DEFAULT_ENUM_CAP) -> ParseResult:
    """Intersect the sentence automaton with every rule automaton.

    Overflow (state cap during intersection, or an enumeration past the
    cap) is a status, not a crash; it drives the caller's fallback.
    """
    acc = fsa.trim(sentence_dfa)
    try:
        for _, rule_dfa in grammar.rules:
            acc = fsa.trim(fsa.product(acc, rule_dfa, lambda a, b: a and b,
                                       state_cap))
            if fsa.is_empty(acc):
                return ParseResult("empty", ())
        survivors = fsa.enumerate_language(acc, enum_cap)
    except fsa.StateLimitExceeded:
        return ParseResult("overflow", ())
    except fsa.EnumerationOverflow:
        return ParseResult("overflow", ())
    if not survivors:
        return ParseResult("empty", ())
    ranked = survivors
    for _, ranker_dfa in grammar.rankers:
        subset = [w for w in ranked if ranker_dfa.accepts(w)]
        if subset:
            ranked = subset
    status = "unique" if len(ranked) == 1 else "ambiguous"
    return ParseResult(status, tuple(ranked), raw_count=len(survivors))


def fold_back(sentence: Sentence, strings: Iterable[SymbolString]) -> Sentence:
    """Delete readings and boundaries that appear in no surviving string."""
    cohorts = sentence.cohorts
    n = len(cohorts)
    used_readings: list[set[Reading]] = [set() for _ in range(n)]
    used_bounds: list[set[Symbol]] = [set() for _ in range(n)]
    for string in strings:
        if not string or string[0] is not SENTENCE_BOUNDARY:
            raise ValueError("resolved string must open at the sentence boundary")
        memo: dict[tuple[int, int], bool] = {}

        def reachable(i: int, k: int) -> bool:
            if i == n:
                return k == len(string)
            key = (i, k)
            hit = memo.get(key)
            if hit is not None:
                return hit
            ok = False
            for reading in cohorts[i].readings:
                syms = reading.symbols()
                end = k + len(syms)
                if string[k:end] != syms:
                    continue
                for b in cohorts[i].trailing_boundaries:
                    if end < len(string) and string[end] is b \
                            and reachable(i + 1, end + 1):
                        ok = True
            memo[key] = ok
            return ok

        if not reachable(0, 1):
            raise ValueError("string is not a resolution of the sentence")
        frontier = {(0, 1)}
        for i in range(n):
            nxt: set[tuple[int, int]] = set()
            for _, k in frontier:
                for reading in cohorts[i].readings:
                    syms = reading.symbols()
                    end = k + len(syms)
                    if string[k:end] != syms:
                        continue
                    for b in cohorts[i].trailing_boundaries:
                        if end < len(string) and string[end] is b \
                                and reachable(i + 1, end + 1):
                            used_readings[i].add(reading)
                            used_bounds[i].add(b)
                            nxt.add((i + 1, end + 1))
            frontier = nxt
    out = []
    for i, cohort in enumerate(cohorts):
        keep = [r for r in cohort.readings if r in used_readings[i]]
        bounds = {b for b in cohort.trailing_boundaries if b in used_bounds[i]}
        if not keep or not bounds:
            raise RuntimeError(f"fold-back emptied cohort {cohort.surface!r}")
        out.append(Cohort(cohort.surface, keep, bounds))
    return sentence.with_cohorts(out)


# ---------------------------------------------------------------------------
# Compiled-grammar archive (deterministic, JSON-friendly)

def dfa_to_dict(dfa: Dfa) -> dict:
    return {
        "start": dfa.start,
        "accepting": sorted(dfa.accepting),
        "other": list(dfa.other),
        "edges": [
            [[s.text, s.kind, t] for s, t in
             sorted(row.items(), key=lambda kv: kv[0].sort_key())]
            for row in dfa.edges
        ],
    }


def dfa_from_dict(data: dict) -> Dfa:
    edges = [{Symbol(text, kind): t for text, kind, t in row}
             for row in data["edges"]]
    return Dfa(edges, data["other"], data["start"], data["accepting"])


def grammar_to_dict(grammar: CompiledFsigGrammar) -> dict:
    return {
        "format": "rtag-fsig-archive-v1",
        "rules": [{"name": name, "dfa": dfa_to_dict(dfa)}
                  for name, dfa in grammar.rules],
        "rankers": [{"name": name, "dfa": dfa_to_dict(dfa)}
                    for name, dfa in grammar.rankers],
    }


def grammar_from_dict(data: dict) -> CompiledFsigGrammar:
    if data.get("format") != "rtag-fsig-archive-v1":
        raise ValueError("not a compiled grammar archive")
    rules = [(item["name"], dfa_from_dict(item["dfa"])) for item in data["rules"]]
    rankers = [(item["name"], dfa_from_dict(item["dfa"])) for item in data["rankers"]]
    return CompiledFsigGrammar(rules, rankers)
