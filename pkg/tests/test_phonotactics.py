import random
import re

import pytest

from conlangkit.phonotactics import (
    FUSED_CLUSTER,
    MALFORMED_SEPARATOR,
    Morpheme,
    PhonemeInventory,
    PhonotacticGrammar,
    build_refinement_report,
    generate_morpheme,
    phoneme_frequencies,
    sample_corpus,
    validate_morpheme_format,
)


def hawaiian_like() -> PhonotacticGrammar:
    # CV syllables only, 12 phonemes, optional long/diphthong nucleus
    return PhonotacticGrammar(
        inventory=PhonemeInventory(
            consonants={"p": 1, "k": 2, "h": 2, "l": 1.5, "m": 1, "n": 1.5, "w": 0.5},
            vowels={"a": 3, "e": 1, "i": 2, "o": 1.5, "u": 1},
        ),
        onset_clusters=[(("C",), 1.0)],
        coda_clusters=[((), 1.0)],
        nucleus_patterns=[(("V",), 4.0), (("V", "V"), 1.0)],
        syllable_count_distribution={1: 1, 2: 3, 3: 2},
    )


def degenerate() -> PhonotacticGrammar:
    return PhonotacticGrammar(
        inventory=PhonemeInventory(consonants={"p": 1}, vowels={"a": 1}),
        onset_clusters=[(("C",), 1.0)],
        coda_clusters=[((), 1.0)],
        nucleus_patterns=[(("V",), 1.0)],
        syllable_count_distribution={1: 1},
    )


def test_inventory_rejects_overlap_and_bad_weights():
    with pytest.raises(ValueError):
        PhonemeInventory(consonants={"a": 1}, vowels={"a": 1})
    with pytest.raises(ValueError):
        PhonemeInventory(consonants={"p": 0}, vowels={"a": 1})
    with pytest.raises(ValueError):
        PhonemeInventory(consonants={"lf": 1}, vowels={"a": 1})


def test_grammar_rejects_unknown_symbols():
    with pytest.raises(ValueError):
        PhonotacticGrammar(
            inventory=PhonemeInventory(consonants={"p": 1}, vowels={"a": 1}),
            onset_clusters=[(("q",), 1.0)],
            coda_clusters=[((), 1.0)],
            nucleus_patterns=[(("V",), 1.0)],
            syllable_count_distribution={1: 1},
        )


def test_degenerate_grammar_forces_unique_output():
    m = generate_morpheme(degenerate(), random.Random(0))
    assert m.render() == "p a"


def test_hawaiian_shape_over_many_samples():
    grammar = hawaiian_like()
    syllable_re = re.compile(r"^[pkhlmnw] [aeiou]( [aeiou])?$")
    for m in sample_corpus(grammar, 10_000, seed=7):
        for syllable in m.render().split(" . "):
            assert syllable_re.match(syllable), syllable


def test_render_with_syllable_breaks():
    m = Morpheme(phonemes=("s", "o", "d", "a", "n", "i"), syllable_breaks={2, 4})
    assert m.render() == "s o . d a . n i"
    assert Morpheme.parse("s o . d a . n i") == m


def test_sample_corpus_deterministic_and_valid():
    grammar = hawaiian_like()
    a = sample_corpus(grammar, 500, seed=41)
    b = sample_corpus(grammar, 500, seed=41)
    assert a == b
    assert sample_corpus(grammar, 1, seed=1)
    for m in a:
        assert validate_morpheme_format(m.render(), grammar.inventory) == []


def test_validate_detects_fused_and_separator_problems():
    inv = PhonemeInventory(consonants={"l": 1, "f": 1}, vowels={"a": 1})
    assert validate_morpheme_format("l f a", inv) == []
    fused = validate_morpheme_format("lf a", inv)
    assert [v.kind for v in fused] == [FUSED_CLUSTER]
    assert fused[0].token == "lf"
    trailing = validate_morpheme_format("p a .", inv)
    assert any(v.kind == MALFORMED_SEPARATOR for v in trailing)
    assert any(v.kind == MALFORMED_SEPARATOR for v in validate_morpheme_format(". p a", inv))
    assert any(v.kind == MALFORMED_SEPARATOR for v in validate_morpheme_format("p . . a", inv))


def test_refinement_report_contents():
    grammar = hawaiian_like()
    sample = [Morpheme(phonemes=("lf", "a")), Morpheme(phonemes=("p", "a"))]
    report = build_refinement_report(grammar, sample)
    assert "lf" in report
    clean = build_refinement_report(grammar, sample_corpus(grammar, 50, seed=3))
    assert "(none)" in clean


def test_frequency_table_sums_to_token_count():
    sample = sample_corpus(hawaiian_like(), 2_000, seed=5)
    counts = phoneme_frequencies(sample)
    # independent tally, symbol by symbol
    total = sum(len(m.phonemes) for m in sample)
    assert sum(counts.values()) == total


def test_weighted_sampling_converges_to_inventory_weights():
    grammar = PhonotacticGrammar(
        inventory=PhonemeInventory(consonants={}, vowels={"a": 0.5, "i": 0.3, "u": 0.2}),
        onset_clusters=[((), 1.0)],
        coda_clusters=[((), 1.0)],
        nucleus_patterns=[(("V",), 1.0)],
        syllable_count_distribution={1: 1},
    )
    counts = phoneme_frequencies(sample_corpus(grammar, 100_000, seed=11))
    total = sum(counts.values())
    for symbol, weight in grammar.inventory.vowels.items():
        assert abs(counts[symbol] / total - weight / 1.0) < 0.02


def test_grammar_json_round_trip(tmp_path):
    grammar = hawaiian_like()
    path = tmp_path / "grammar.json"
    grammar.save(path)
    loaded = PhonotacticGrammar.load(path)
    assert loaded == grammar
    assert sample_corpus(loaded, 20, seed=2) == sample_corpus(grammar, 20, seed=2)
