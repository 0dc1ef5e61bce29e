import random

import numpy as np
import pytest

import oracles
from conftest import random_regex
from rtag import fsa
from rtag.model import morph

SYMS4 = [morph(c) for c in "ABCD"]
SYMS3 = SYMS4[:3]


def compile_(regex, **kw):
    return fsa.compile_regex(regex, **kw)


def all_word_batches(nsyms, max_len):
    return [oracles.WordBatch(oracles.all_words(nsyms, L), nsyms)
            for L in range(max_len + 1)]


BATCHES4 = all_word_batches(4, 6)
BATCHES3 = all_word_batches(3, 5)


def batch_match(nfa_regex, batches, symbols):
    """Whole-word acceptance for every word in the batches (oracle side)."""
    index = {s: i for i, s in enumerate(symbols)}
    out = []
    for wb in batches:
        nfa = oracles.thompson(nfa_regex, index, len(symbols))
        runner = oracles._Runner(nfa, len(symbols))
        states = runner.initial(wb.batch)
        for p in range(wb.length):
            states = runner.step(states, wb.masks[p])
        out.append(states[runner.accept].copy())
    return out


def dfa_match(dfa, batches, symbols):
    return [oracles.batch_dfa_accepts(dfa, wb.words, symbols)
            for wb in batches]


def test_complement_of_empty_is_universe():
    universe = fsa.complement(fsa.empty_dfa())
    assert universe.accepts([])
    assert universe.accepts(SYMS4)
    assert fsa.is_empty(fsa.complement(universe))


def test_union_of_two_words_exhaustive():
    a, b = SYMS4[0], SYMS4[1]
    regex = fsa.runion(fsa.rconcat(fsa.rsym(a), fsa.rsym(b)),
                       fsa.rconcat(fsa.rsym(b), fsa.rsym(a)))
    dfa = compile_(regex)
    expected = {(a, b), (b, a)}
    for wb in all_word_batches(4, 3):
        for row in wb.words:
            word = tuple(SYMS4[v] for v in row)
            assert dfa.accepts(word) == (word in expected)


def test_random_regexes_against_direct_simulation():
    # 300 random regexes, membership checked on every string of length <= 6.
    rnd = random.Random(2024)
    for _ in range(300):
        regex = random_regex(rnd, SYMS4, depth=5)
        dfa = compile_(regex)
        got = dfa_match(dfa, BATCHES4, SYMS4)
        want = batch_match(regex, BATCHES4, SYMS4)
        for g, w in zip(got, want):
            assert np.array_equal(g, w)


def test_random_regexes_against_recursive_matcher():
    # The same construction against the direct recursive matcher, which
    # also covers complement and intersection nodes.
    rnd = random.Random(77)
    for _ in range(60):
        regex = random_regex(rnd, SYMS3, depth=4, extended=True)
        dfa = compile_(regex)
        for wb in all_word_batches(3, 4):
            got = oracles.batch_dfa_accepts(dfa, wb.words, SYMS3)
            for row_i in range(wb.batch):
                word = tuple(SYMS3[v] for v in wb.words[row_i])
                assert got[row_i] == oracles.naive_match(regex, word)


def test_named_references():
    defs = {"Noun": fsa.rsym(morph("N")),
            "NounPhrase": fsa.rconcat(fsa.RRef("Noun"), fsa.RRef("Noun"))}
    dfa = compile_(fsa.RRef("NounPhrase"), definitions=defs)
    assert dfa.accepts([morph("N"), morph("N")])
    with pytest.raises(fsa.UnknownReference):
        compile_(fsa.RRef("Missing"), definitions=defs)
    loop = {"A": fsa.RRef("B"), "B": fsa.RRef("A")}
    with pytest.raises(fsa.CyclicDefinition):
        compile_(fsa.RRef("A"), definitions=loop)


def test_intersect_with_universe_is_identity():
    rnd = random.Random(5)
    universe = compile_(fsa.SIGMA_STAR)
    for _ in range(25):
        dfa = compile_(random_regex(rnd, SYMS4, depth=4))
        assert fsa.intersect(dfa, universe) == fsa.minimize(dfa)


def test_intersect_two_finite_languages():
    a, b = SYMS4[0], SYMS4[1]
    ab_ba = compile_(fsa.runion(fsa.rconcat(fsa.rsym(a), fsa.rsym(b)),
                                fsa.rconcat(fsa.rsym(b), fsa.rsym(a))))
    ab = compile_(fsa.rconcat(fsa.rsym(a), fsa.rsym(b)))
    result = fsa.intersect(ab_ba, ab)
    assert fsa.enumerate_language(result) == [(a, b)]


def test_intersection_commutes():
    rnd = random.Random(6)
    for _ in range(40):
        x = compile_(random_regex(rnd, SYMS4, depth=4))
        y = compile_(random_regex(rnd, SYMS4, depth=4))
        assert fsa.intersect(x, y) == fsa.intersect(y, x)


def _language_equal_by_emptiness(a, b):
    # independent equality oracle: symmetric difference is empty
    return (fsa.is_empty(fsa.product(a, fsa.complement(b), lambda x, y: x and y))
            and fsa.is_empty(fsa.product(b, fsa.complement(a),
                                         lambda x, y: x and y)))


def test_de_morgan():
    rnd = random.Random(7)
    for _ in range(60):
        a = compile_(random_regex(rnd, SYMS4, depth=4))
        b = compile_(random_regex(rnd, SYMS4, depth=4))
        lhs = fsa.complement(fsa.union(a, b))
        rhs = fsa.intersect(fsa.complement(a), fsa.complement(b))
        assert lhs == rhs
        assert _language_equal_by_emptiness(lhs, rhs)


def test_intersection_pointwise():
    rnd = random.Random(8)
    for _ in range(60):
        a = compile_(random_regex(rnd, SYMS4, depth=4))
        b = compile_(random_regex(rnd, SYMS4, depth=4))
        both = fsa.intersect(a, b)
        either = fsa.union(a, b)
        for wb in BATCHES4:
            va = oracles.batch_dfa_accepts(a, wb.words, SYMS4)
            vb = oracles.batch_dfa_accepts(b, wb.words, SYMS4)
            assert np.array_equal(
                oracles.batch_dfa_accepts(both, wb.words, SYMS4), va & vb)
            assert np.array_equal(
                oracles.batch_dfa_accepts(either, wb.words, SYMS4), va | vb)


def test_minimize_idempotent_and_canonical():
    rnd = random.Random(9)
    for _ in range(60):
        regex = random_regex(rnd, SYMS4, depth=4)
        dfa = compile_(regex)
        assert fsa.minimize(dfa) == dfa
        # language-preserving transforms reach the same canonical machine
        variants = [
            fsa.RUnion((regex, regex)),
            fsa.RConcat((regex, fsa.REpsilon())),
            fsa.RUnion((regex, fsa.REmpty())),
            fsa.RNot(fsa.RNot(regex)),
            fsa.RAnd((regex, regex)),
        ]
        for variant in variants:
            assert compile_(variant) == dfa


def test_determinization_matches_nfa_simulation():
    rnd = random.Random(10)
    for _ in range(60):
        parts = [fsa.dfa_to_nfa(compile_(random_regex(rnd, SYMS3, depth=2)))
                 for _ in range(3)]
        kind = rnd.randrange(3)
        if kind == 0:
            nfa = fsa.union_nfa(parts)
        elif kind == 1:
            nfa = fsa.concat_nfa(parts)
        else:
            nfa = fsa.star_nfa(parts[0])
        dfa = fsa.determinize(nfa)
        for wb in BATCHES3[:5]:
            got = oracles.batch_dfa_accepts(dfa, wb.words, SYMS3)
            for row_i in range(wb.batch):
                word = [SYMS3[v] for v in wb.words[row_i]]
                assert got[row_i] == oracles.simulate_nfa(nfa, word)


def test_enumerate_empty_language():
    assert fsa.enumerate_language(fsa.empty_dfa()) == []


def test_enumerate_orders_lexicographically():
    a, b = SYMS4[0], SYMS4[1]
    dfa = compile_(fsa.runion(fsa.rconcat(fsa.rsym(b), fsa.rsym(a)),
                              fsa.rconcat(fsa.rsym(a), fsa.rsym(b)),
                              fsa.rsym(a)))
    assert fsa.enumerate_language(dfa) == [(a,), (a, b), (b, a)]


def test_enumerate_rejects_cycles_and_caps():
    a = SYMS4[0]
    star = compile_(fsa.RStar(fsa.rsym(a)))
    with pytest.raises(fsa.CyclicAutomaton):
        fsa.enumerate_language(star)
    two = compile_(fsa.runion(fsa.rsym(a), fsa.rconcat(fsa.rsym(a), fsa.rsym(a))))
    with pytest.raises(fsa.EnumerationOverflow):
        fsa.enumerate_language(two, max_count=1)
    assert fsa.language_size(two) == 2
    with pytest.raises(fsa.OpenAlphabet):
        fsa.enumerate_language(compile_(fsa.RAny()))


def test_state_cap_signal():
    rnd = random.Random(11)
    a = compile_(random_regex(rnd, SYMS4, depth=5))
    b = compile_(random_regex(rnd, SYMS4, depth=5))
    with pytest.raises(fsa.StateLimitExceeded):
        fsa.product(a, b, lambda x, y: x and y, cap=1)


def test_dump_is_stable():
    a, b = SYMS4[0], SYMS4[1]
    dfa = compile_(fsa.rconcat(fsa.rsym(a), fsa.rsym(b)))
    text = fsa.dump(dfa)
    assert text.splitlines()[0] == "start\t0"
    assert text == fsa.dump(compile_(fsa.rconcat(fsa.rsym(a), fsa.rsym(b))))
    assert f"0\t{a}\t" in text
