"""Acceptance suite: one test per criterion, each prints a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.
"""
import dataclasses
import random
import time

import numpy as np

import conftest
import oracles
from conftest import random_regex, random_sentence
from rtag import demo, fsa, fsig, pipeline
from rtag.evaluation import StageMetrics
from rtag.model import (
    CLAUSE_BOUNDARY,
    PLAIN_BOUNDARY,
    morph,
    resolve_strings,
)
from rtag.streams import emit_cohort_stream
from test_cg import _random_grammar
from test_cli import config_args, run_cli
from rtag.cg import apply_grammar_traced


def report(number: int, label: str, started: float, budget: float) -> None:
    elapsed = time.perf_counter() - started
    assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s (budget {budget}s)"
    line = f"ACCEPTANCE {number} ({label}): PASS in {elapsed:.2f}s"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)


def test_criterion_1_reference_row_arithmetic():
    t0 = time.perf_counter()
    metrics = StageMetrics.from_counts("D0", word_count=38202,
                                       total_readings=67737, errors=31)
    assert str(metrics.readings_per_word) == "1.77"
    assert str(metrics.error_rate_percent) == "0.08"
    report(1, "benchmark-row arithmetic", t0, budget=1.0)


def test_criterion_2_appendix_reproduction():
    t0 = time.perf_counter()
    code, out, err = run_cli(
        ["tag", str(demo.APPENDIX_INPUT), "--stage", "D3"] + config_args())
    assert code == 0, err
    assert out == demo.APPENDIX_GOLD_D3.read_text()
    report(2, "sample-output reproduction", t0, budget=5.0)


def test_criterion_3_restriction_semantics_oracle():
    t0 = time.perf_counter()
    syms = [morph(c) for c in "ABCDE"]
    index = {s: i for i, s in enumerate(syms)}
    batches = [oracles.WordBatch(oracles.all_words(5, length), 5)
               for length in range(9)]
    rnd = random.Random(20240817)
    checked = 0
    rules_done = 0
    while rules_done < 100:
        x = random_regex(rnd, syms, depth=2)
        contexts = tuple((random_regex(rnd, syms, depth=2),
                          random_regex(rnd, syms, depth=2))
                         for _ in range(rnd.randrange(1, 4)))
        rule = fsig.ImplicationRule(f"r{rules_done}", x, contexts)
        try:
            dfa = fsig.compile_rule(rule)
        except fsig.EmptyRuleTarget:
            continue
        rules_done += 1
        for wb in batches:
            compiled = oracles.batch_dfa_accepts(dfa, wb.words, syms)
            brute = oracles.batch_rule_accepts(x, contexts, wb, index)
            assert np.array_equal(compiled, brute)
            checked += wb.batch
    assert rules_done == 100 and checked == 100 * 488281
    report(3, "restriction semantics vs factorization checker", t0, budget=60.0)


def test_criterion_4_intersection_parsing_oracle():
    t0 = time.perf_counter()
    rnd = random.Random(31415)
    tags = [morph(t) for t in ("N", "V", "DET", "ADV", "PREP")]
    pool = tags + [PLAIN_BOUNDARY, CLAUSE_BOUNDARY]
    rules = []
    while len(rules) < 20:
        x = random_regex(rnd, pool, depth=1)
        contexts = tuple((random_regex(rnd, pool, depth=1),
                          random_regex(rnd, pool, depth=1))
                         for _ in range(rnd.randrange(1, 3)))
        rule = fsig.ImplicationRule(f"r{len(rules)}", x, contexts)
        try:
            compiled = fsig.compile_rule(rule)
        except fsig.EmptyRuleTarget:
            continue
        rules.append((rule, compiled))
    grammar = fsig.CompiledFsigGrammar([(r.name, d) for r, d in rules], [])

    sentences = [random_sentence(rnd, max_resolved=500) for _ in range(200)]
    survivors = []
    strings_per_sentence = []
    for s in sentences:
        result = fsig.parse(fsig.encode_sentence(s), grammar)
        assert result.status != "overflow"
        survivors.append(set(result.strings))
        strings_per_sentence.append(resolve_strings(s))

    # index every symbol the random sentences can produce
    symbols = sorted({sym for strings in strings_per_sentence
                      for w in strings for sym in w},
                     key=lambda s: s.sort_key())
    index = {s: i for i, s in enumerate(symbols)}
    by_length: dict[int, list[tuple[int, int, tuple]]] = {}
    for sid, strings in enumerate(strings_per_sentence):
        for k, w in enumerate(strings):
            by_length.setdefault(len(w), []).append((sid, k, w))
    alive: dict[tuple[int, int], bool] = {}
    for length, items in by_length.items():
        words = np.array([[index[sym] for sym in w] for _, _, w in items],
                         dtype=np.int16).reshape(len(items), length)
        wb = oracles.WordBatch(words, len(symbols))
        keep = np.ones(len(items), dtype=bool)
        for rule, _ in rules:
            keep &= oracles.batch_rule_accepts(rule.x, rule.contexts, wb, index)
        for (sid, k, _), ok in zip(items, keep):
            alive[(sid, k)] = bool(ok)
    for sid, strings in enumerate(strings_per_sentence):
        expected = {w for k, w in enumerate(strings) if alive[(sid, k)]}
        assert survivors[sid] == expected, f"sentence {sid} disagrees"
    report(4, "intersection parsing vs brute-force filter", t0, budget=60.0)


def test_criterion_5_cg_safety_and_convergence():
    t0 = time.perf_counter()
    rnd = random.Random(271828)
    for _ in range(1000):
        sentence = random_sentence(rnd, max_boundaries=1)
        grammar = _random_grammar(rnd)
        initial = sentence.total_readings()
        out, trace = apply_grammar_traced(sentence, grammar, heuristics=True)
        assert all(c.readings for c in out.cohorts)
        assert out.total_readings() <= initial
        deletions = [d for d in trace if d > 0]
        assert len(deletions) <= initial
        assert len(trace) <= initial + 2
        running = initial
        for d in trace:
            running -= d
            assert running >= len(out.cohorts) - 1 or running >= 0
    report(5, "constraint-rule safety and convergence", t0, budget=30.0)


def test_criterion_6_fsa_algebra():
    t0 = time.perf_counter()
    syms = [morph(c) for c in "ABCD"]
    batches = [oracles.WordBatch(oracles.all_words(4, length), 4)
               for length in range(7)]
    rnd = random.Random(16180)

    for _ in range(300):  # De Morgan, canonical and pointwise
        a = fsa.compile_regex(random_regex(rnd, syms, depth=3))
        b = fsa.compile_regex(random_regex(rnd, syms, depth=3))
        lhs = fsa.complement(fsa.union(a, b))
        rhs = fsa.intersect(fsa.complement(a), fsa.complement(b))
        assert lhs == rhs

    for _ in range(300):  # intersection/union vs per-string checks
        a = fsa.compile_regex(random_regex(rnd, syms, depth=3))
        b = fsa.compile_regex(random_regex(rnd, syms, depth=3))
        both = fsa.intersect(a, b)
        either = fsa.union(a, b)
        for wb in batches:
            va = oracles.batch_dfa_accepts(a, wb.words, syms)
            vb = oracles.batch_dfa_accepts(b, wb.words, syms)
            assert np.array_equal(
                oracles.batch_dfa_accepts(both, wb.words, syms), va & vb)
            assert np.array_equal(
                oracles.batch_dfa_accepts(either, wb.words, syms), va | vb)

    for _ in range(300):  # minimization canonicity
        regex = random_regex(rnd, syms, depth=3)
        dfa = fsa.compile_regex(regex)
        assert fsa.minimize(dfa) == dfa
        variant = rnd.choice([
            fsa.RUnion((regex, regex)),
            fsa.RConcat((regex, fsa.REpsilon())),
            fsa.RUnion((regex, fsa.REmpty())),
            fsa.RNot(fsa.RNot(regex)),
            fsa.RAnd((regex, regex)),
        ])
        assert fsa.compile_regex(variant) == dfa

    small = [morph(c) for c in "ABC"]
    small_batches = [oracles.WordBatch(oracles.all_words(3, length), 3)
                     for length in range(5)]
    for _ in range(300):  # determinization vs direct NFA simulation
        parts = [fsa.dfa_to_nfa(fsa.compile_regex(
            random_regex(rnd, small, depth=2))) for _ in range(2)]
        kind = rnd.randrange(3)
        if kind == 0:
            nfa = fsa.union_nfa(parts)
        elif kind == 1:
            nfa = fsa.concat_nfa(parts)
        else:
            nfa = fsa.star_nfa(parts[0])
        dfa = fsa.determinize(nfa)
        for wb in small_batches:
            got = oracles.batch_dfa_accepts(dfa, wb.words, small)
            for row_i in range(wb.batch):
                word = [small[v] for v in wb.words[row_i]]
                assert got[row_i] == oracles.simulate_nfa(nfa, word)
    report(6, "automata algebra", t0, budget=60.0)


def test_criterion_7_fallback_contract(demo_config):
    t0 = time.perf_counter()
    impossible = fsig.load_fsig_grammar(
        'rule NothingEndsASentence : "@fullstop" => NONE _ NONE ;\n')
    config = dataclasses.replace(demo_config,
                                 grammar=fsig.compile_grammar(impossible))
    run = pipeline.run_pipeline("Check the oil level.", config)
    result = run.results[0]
    assert result.fallback and result.status == "empty"
    d3_bytes = emit_cohort_stream([result.d3]).encode()
    d2_bytes = emit_cohort_stream([result.d2]).encode()
    assert d3_bytes == d2_bytes
    report(7, "fallback to constraint-stage output", t0, budget=1.0)


def test_criterion_8_full_determinism(tmp_path):
    t0 = time.perf_counter()
    tag_argv = ["tag", str(demo.APPENDIX_INPUT), "--stage", "D3"] + config_args()
    eval_argv = ["eval", str(demo.APPENDIX_INPUT), "--gold",
                 str(demo.APPENDIX_GOLD_VERTICAL), "--machine"] + config_args()
    diff_argv = ["diff", str(demo.APPENDIX_GOLD_VERTICAL),
                 str(demo.APPENDIX_GOLD_VERTICAL)]

    for argv in (tag_argv, eval_argv, diff_argv):
        code1, out1, _ = run_cli(list(argv))
        code2, out2, _ = run_cli(list(argv))
        assert code1 == code2 == 0
        assert out1.encode() == out2.encode()

    for out_name in ("a.json", "b.json"):
        code, _, err = run_cli(["compile", "--out", str(tmp_path / out_name)]
                               + config_args())
        assert code == 0, err
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    _, serial, _ = run_cli(list(tag_argv))
    code, parallel, _ = run_cli(list(tag_argv) + ["--jobs", "3"])
    assert code == 0
    assert parallel.encode() == serial.encode()
    report(8, "byte-identical reruns incl. --jobs", t0, budget=60.0)
