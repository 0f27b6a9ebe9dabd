import math
import random

import pytest

from conlangkit.gloss import parse_gloss
from conlangkit.metrics import (
    EmptyReference,
    LengthMismatch,
    MetricReport,
    bleu_corpus,
    cer,
    chrf_pp,
    lemma_f1,
    mfer,
    mser,
    score_corpus,
    ser,
    ter,
    ter_alignment,
    wer,
)
from conftest import random_gloss_sentence
from oracles import exact_ter_edits, levenshtein_recursive, ngram_f1_by_enumeration


# --------------------------------------------------------------------------
# TER


def test_ter_block_shift_worked_example():
    hyp = "the fat rat caught the cat".split()
    ref = "the cat caught the fat rat".split()
    assert abs(ter(hyp, ref) - 2 / 6) < 1e-12
    script = ter_alignment(hyp, ref)
    assert script.block_shifts == 2
    assert script.total_edits == 2


def test_ter_identity():
    assert ter(["a", "b"], ["a", "b"]) == 0.0


def test_ter_empty_reference():
    with pytest.raises(EmptyReference):
        ter(["a"], [])


def test_ter_empty_hypothesis_is_all_deletions():
    assert ter([], ["a", "b", "c"]) == 1.0


def test_ter_never_undercounts_exact_search():
    rng = random.Random(4242)
    alphabet = ["a", "b", "c", "d"]
    agreements = 0
    trials = 300
    for _ in range(trials):
        hyp = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 6)))
        ref = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
        greedy = ter_alignment(hyp, ref).total_edits
        exact = exact_ter_edits(hyp, ref)
        assert greedy >= exact, (hyp, ref)
        agreements += greedy == exact
    assert agreements / trials >= 0.95


# --------------------------------------------------------------------------
# WER / CER


def test_wer_simple_substitution():
    assert wer(["a", "b"], ["a", "c"]) == 0.5
    assert wer(["a"], ["a"]) == 0.0


def test_wer_matches_independent_dp():
    rng = random.Random(7)
    alphabet = ["x", "y", "z", "w"]
    for _ in range(200):
        hyp = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
        ref = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, 8)))
        assert wer(hyp, ref) * len(ref) == levenshtein_recursive(hyp, ref)


def test_cer_over_characters():
    assert cer("abc", "abc") == 0.0
    assert cer("abc", "abd") == 1 / 3
    with pytest.raises(EmptyReference):
        cer("abc", "")


# --------------------------------------------------------------------------
# SER


def test_ser_ignores_affixes():
    hyp = parse_gloss("dog-PLUR run-PAST")
    ref = parse_gloss("dog-SING run-FUT")
    assert ser(hyp, ref) == 0.0


def test_ser_stem_shift():
    hyp = parse_gloss("John-ERG eat-PAST cucumber-ABS")
    ref = parse_gloss("John-ERG cucumber-ABS eat-PAST")
    assert abs(ser(hyp, ref) - 1 / 3) < 1e-12


def test_ser_empty_hypothesis():
    hyp = parse_gloss("")
    ref = parse_gloss("dog run water")
    assert ser(hyp, ref) == 1.0


def test_ser_arbitrary_affix_changes_are_free(rng):
    for _ in range(50):
        s = random_gloss_sentence(rng)
        if not s.stems():
            continue
        stripped = parse_gloss(" ".join(s.stems()))
        assert ser(stripped, s) == 0.0


# --------------------------------------------------------------------------
# MFER


def test_mfer_suffix_order_is_free():
    hyp = parse_gloss("walk-PRES-3SGNOM")
    ref = parse_gloss("walk-3SGNOM-PRES")
    assert mfer(hyp, ref) == 0.0


def test_mfer_identity():
    s = parse_gloss("dog-PLUR eat-PAST NEG")
    assert mfer(s, s) == 0.0


def test_mfer_missing_suffix():
    assert mfer(parse_gloss("dog"), parse_gloss("dog-PLUR")) == 0.5


def test_mfer_prefix_suffix_not_interchangeable():
    # same label on the wrong side costs one deletion and one insertion,
    # but matching is still by minimal distance
    hyp = parse_gloss("PLUR-dog")
    ref = parse_gloss("dog-PLUR")
    assert mfer(hyp, ref) == pytest.approx(2 / 2)


def test_mfer_word_order_free(rng):
    for _ in range(30):
        s = random_gloss_sentence(rng, min_words=2, max_words=6)
        shuffled_words = list(s.words)
        random.Random(1).shuffle(shuffled_words)
        hyp = type(s)(words=tuple(shuffled_words), trailing_punct=s.trailing_punct)
        assert mfer(hyp, s) == 0.0


def test_mfer_affix_permutation_invariance(rng):
    for _ in range(200):
        s = random_gloss_sentence(rng)
        permuted = []
        for w in s.words:
            prefixes = list(w.prefixes)
            suffixes = list(w.suffixes)
            rng.shuffle(prefixes)
            rng.shuffle(suffixes)
            permuted.append(
                type(w)(
                    stem=w.stem,
                    prefixes=tuple(prefixes),
                    suffixes=tuple(suffixes),
                    is_feature_word=w.is_feature_word,
                )
            )
        hyp = type(s)(words=tuple(permuted), trailing_punct=s.trailing_punct)
        assert mfer(hyp, s) == mfer(s, s) == 0.0


# --------------------------------------------------------------------------
# MSER


def test_mser_blend():
    assert mser(0.4, 0.2, alpha=0.5) == pytest.approx(0.3)
    assert mser(0.4, 0.2, alpha=1.0) == 0.4
    assert mser(0.4, 0.2, alpha=0.0) == 0.2


def test_mser_linear_in_alpha():
    s, m = 0.7, 0.1
    for a in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert mser(s, m, a) == pytest.approx(a * s + (1 - a) * m)
    with pytest.raises(ValueError):
        mser(0.1, 0.1, alpha=1.5)


# --------------------------------------------------------------------------
# Lemma F1


def test_lemma_f1_identity():
    s = parse_gloss("dog-PLUR run-PAST")
    assert lemma_f1(s, s) == (1.0, 1.0, 1.0)


def test_lemma_f1_duplicate_hypothesis_stem():
    p, r, f1 = lemma_f1(parse_gloss("dog dog"), parse_gloss("dog"))
    assert p == 0.5 and r == 1.0
    assert f1 == pytest.approx(2 / 3)


def test_lemma_f1_disjoint():
    assert lemma_f1(parse_gloss("cat"), parse_gloss("dog")) == (0.0, 0.0, 0.0)


# --------------------------------------------------------------------------
# BLEU


def test_bleu_perfect_match():
    corpus = [["the", "dog", "runs", "home"], ["a", "cat", "sleeps", "here", "now"]]
    assert bleu_corpus(corpus, corpus) == pytest.approx(100.0)


def test_bleu_no_overlap():
    assert bleu_corpus([["a", "b", "c"]], [["x", "y", "z"]]) == 0.0


def test_bleu_clipping_hand_computed():
    # hand-computed modified precision with clipping on a 3-sentence corpus
    hyps = [["the", "the", "the"], ["a", "b"], ["c", "d", "e"]]
    refs = [["the", "cat"], ["a", "b"], ["c", "d", "e"]]
    # unigrams: clip "the" to 1 -> matches 1+2+3=6 of 8
    # bigrams: 0 ("the the") + 1 + 2 = 3 of 5
    # hyp_len=8 > ref_len=7, so no brevity penalty
    expected = math.exp((math.log(6 / 8) + math.log(3 / 5)) / 2) * 100
    assert bleu_corpus(hyps, refs, max_n=2) == pytest.approx(expected)


def test_bleu_brevity_penalty_hand_computed():
    hyps = [["a", "b"]]
    refs = [["a", "b", "c", "d"]]
    expected = math.exp(1 - 4 / 2) * math.exp((math.log(2 / 2) + math.log(1 / 1)) / 2) * 100
    assert bleu_corpus(hyps, refs, max_n=2) == pytest.approx(expected)


def test_bleu_length_mismatch():
    with pytest.raises(LengthMismatch):
        bleu_corpus([["a"]], [["a"], ["b"]])


# --------------------------------------------------------------------------
# ChrF++


def test_chrf_identity_and_disjoint():
    assert chrf_pp("dog-PLUR run", "dog-PLUR run") == pytest.approx(100.0)
    assert chrf_pp("abc def", "xyz qrs") == 0.0
    with pytest.raises(EmptyReference):
        chrf_pp("a", "  ")


def test_chrf_against_ngram_recount():
    hyp, ref = "dog-PLUR eat-PAST meat", "dog-PLUR meat eat-PAST"
    hyp_chars, ref_chars = "".join(hyp.split()), "".join(ref.split())
    char_scores = [
        s
        for n in range(1, 7)
        if (s := ngram_f1_by_enumeration(hyp_chars, ref_chars, n)) is not None
    ]
    word_scores = [
        s
        for n in range(1, 3)
        if (s := ngram_f1_by_enumeration(hyp.split(), ref.split(), n)) is not None
    ]
    expected = 100 * (
        sum(char_scores) / len(char_scores) + sum(word_scores) / len(word_scores)
    ) / 2
    assert chrf_pp(hyp, ref) == pytest.approx(expected)


# --------------------------------------------------------------------------
# Cross-metric invariants


def test_all_rates_zero_on_identity(rng):
    for _ in range(50):
        s = random_gloss_sentence(rng)
        if not s.stems() or not s.words:
            continue
        tokens = [w.render() for w in s.words]
        assert wer(tokens, tokens) == 0.0
        assert ter(tokens, tokens) == 0.0
        assert cer(s.render(), s.render()) == 0.0
        assert ser(s, s) == 0.0
        assert mfer(s, s) == 0.0


def test_ter_le_wer(rng):
    alphabet = ["a", "b", "c", "d", "e"]
    for _ in range(200):
        hyp = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
        ref = [rng.choice(alphabet) for _ in range(rng.randint(1, 8))]
        assert ter(hyp, ref) <= wer(hyp, ref) + 1e-12


def test_report_blend_invariant():
    with pytest.raises(ValueError):
        MetricReport(ser=0.5, mfer=0.1, mser=0.9)
    MetricReport(ser=0.5, mfer=0.1, mser=0.3)


def test_score_corpus_identity(rng):
    sentences = [random_gloss_sentence(rng, min_words=3, max_words=8) for _ in range(30)]
    sentences = [s for s in sentences if s.stems()]
    report = score_corpus(sentences, sentences)
    assert report.bleu == pytest.approx(100.0)
    assert report.chrf_pp == pytest.approx(100.0)
    for name in ("wer", "cer", "ter", "ser", "mfer", "mser"):
        assert getattr(report, name) == 0.0
    assert report.lemma_f1 == pytest.approx(1.0)
    assert "BLEU" in report.table()
