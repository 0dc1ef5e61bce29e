import random

import pytest

# PASS lines from the acceptance suite, echoed after the run so they stay
# visible without -s.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from rtag import demo, fsig, pipeline
from rtag.cg import load_cg_grammar
from rtag.model import (
    CLAUSE_BOUNDARY,
    PLAIN_BOUNDARY,
    SENTENCE_BOUNDARY,
    Cohort,
    Reading,
    Sentence,
    morph,
)
from rtag.morph import load_heuristics, load_lexicon
from rtag.tokenizer import load_tokenizer_config
from rtag import fsa


@pytest.fixture(scope="session")
def demo_lexicon():
    return load_lexicon(demo.LEXICON.read_text())


@pytest.fixture(scope="session")
def demo_grammar():
    return fsig.load_fsig_grammar(demo.FSIG_GRAMMAR.read_text())


@pytest.fixture(scope="session")
def demo_compiled_grammar(demo_grammar):
    return fsig.compile_grammar(demo_grammar)


@pytest.fixture(scope="session")
def demo_config(demo_lexicon, demo_compiled_grammar):
    return pipeline.PipelineConfig(
        lexicon=demo_lexicon,
        tokenizer=load_tokenizer_config(demo.TOKENIZER.read_text()),
        cg=load_cg_grammar(demo.CG_GRAMMAR.read_text()),
        syntax_map=fsig.load_syntax_map(demo.SYNTAX_MAP.read_text()),
        grammar=demo_compiled_grammar,
        morph_heuristics=load_heuristics(demo.HEURISTICS.read_text()),
    )


# ---------------------------------------------------------------------------
# Random-structure generators shared across property tests

def random_regex(rnd: random.Random, symbols, depth: int,
                 extended: bool = False) -> fsa.Regex:
    """Random regex tree; ``extended`` adds complement and intersection."""
    top = 8 if extended else 6
    kind = rnd.randrange(top + 1)
    if depth == 0 or kind == 0:
        return fsa.RSymbol(rnd.choice(symbols))
    if kind == 1:
        return fsa.REpsilon()
    if kind == 2:
        return fsa.RConcat((random_regex(rnd, symbols, depth - 1, extended),
                            random_regex(rnd, symbols, depth - 1, extended)))
    if kind == 3:
        return fsa.RUnion((random_regex(rnd, symbols, depth - 1, extended),
                           random_regex(rnd, symbols, depth - 1, extended)))
    if kind == 4:
        return fsa.RStar(random_regex(rnd, symbols, depth - 1, extended))
    if kind == 5:
        return fsa.RAny()
    if kind == 6:
        k = rnd.randrange(1, min(3, len(symbols)) + 1)
        return fsa.RAnyExcept(frozenset(rnd.sample(symbols, k)))
    if kind == 7:
        return fsa.RNot(random_regex(rnd, symbols, depth - 1, extended))
    return fsa.RAnd((random_regex(rnd, symbols, depth - 1, extended),
                     random_regex(rnd, symbols, depth - 1, extended)))


def random_sentence(rnd: random.Random, max_cohorts: int = 8,
                    max_readings: int = 3, max_boundaries: int = 2,
                    tag_pool=None, max_resolved: int | None = None) -> Sentence:
    tags = tag_pool or [morph(t) for t in ("N", "V", "DET", "ADV", "PREP")]
    while True:
        cohorts = []
        n = rnd.randrange(1, max_cohorts + 1)
        for i in range(n):
            readings = []
            for _ in range(rnd.randrange(1, max_readings + 1)):
                base = f"w{rnd.randrange(4)}"
                morphs = rnd.sample(tags, rnd.randrange(1, 3))
                readings.append(Reading(base, morphs))
            if i == n - 1:
                bounds = [SENTENCE_BOUNDARY]
            elif max_boundaries > 1 and rnd.random() < 0.5:
                bounds = [PLAIN_BOUNDARY, CLAUSE_BOUNDARY]
            else:
                bounds = [PLAIN_BOUNDARY]
            cohorts.append(Cohort(f"t{i}", readings, bounds))
        sentence = Sentence(cohorts)
        if max_resolved is None or sentence.resolved_count() <= max_resolved:
            return sentence
