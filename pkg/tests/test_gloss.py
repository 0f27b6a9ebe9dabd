import pytest
from hypothesis import given, settings, strategies as st

from conlangkit.gloss import (
    AmbiguousToken,
    GlossError,
    GlossSentence,
    GlossWord,
    is_feature_label,
    parse_gloss,
    serialize_gloss,
    strip_features,
)
from conftest import random_gloss_sentence
import random


def test_parse_single_suffix():
    s = parse_gloss("dog-PLUR")
    assert s.words == (GlossWord(stem="dog", suffixes=("PLUR",)),)
    assert s.trailing_punct is None


def test_parse_ergative_example():
    s = parse_gloss("John-ERG cucumber-PL-ABS eat-PAST")
    assert [w.stem for w in s.words] == ["John", "cucumber", "eat"]
    assert [list(w.suffixes) for w in s.words] == [["ERG"], ["PLUR", "ABS"], ["PAST"]]


def test_parse_bare_stem():
    s = parse_gloss("cat")
    assert s.words == (GlossWord(stem="cat"),)


def test_parse_prefixes_and_question_mark():
    s = parse_gloss("how 2SGNOM-do and 2SG-hand hurt ?")
    assert len(s.words) == 5
    assert s.trailing_punct == "?"
    assert s.words[1].prefixes == ("2SGNOM",)
    assert s.words[3].prefixes == ("2SG",)
    assert strip_features(s) == ["how", "do", "and", "hand", "hurt"]


def test_parse_attached_punctuation():
    assert parse_gloss("cat runs.").trailing_punct == "."
    assert parse_gloss("cat runs .") == parse_gloss("cat runs.")


def test_feature_word():
    s = parse_gloss("dog ERG run")
    assert s.words[1].is_feature_word
    assert s.words[1].stem == "ERG"


def test_alias_normalization():
    s = parse_gloss("dog-PL cat-SG")
    assert s.words[0].suffixes == ("PLUR",)
    assert s.words[1].suffixes == ("SING",)


def test_ambiguous_two_stems():
    with pytest.raises(AmbiguousToken) as exc:
        parse_gloss("dog-cat")
    assert exc.value.token_index == 0


def test_ambiguous_empty_morpheme():
    with pytest.raises(AmbiguousToken):
        parse_gloss("dog--PLUR")


def test_multi_label_token_without_stem():
    with pytest.raises(AmbiguousToken):
        parse_gloss("ERG-PLUR")


def test_label_stem_collision_rejected():
    with pytest.raises(GlossError):
        parse_gloss("dog-DOG")


def test_interior_punctuation_rejected():
    with pytest.raises(GlossError):
        parse_gloss("dog, cat run")
    with pytest.raises(GlossError):
        parse_gloss("dog; cat")


def test_strip_features_basic():
    assert strip_features(parse_gloss("dog-PLUR run-PAST")) == ["dog", "run"]


def test_strip_features_only_feature_words():
    assert strip_features(parse_gloss("ERG PAST")) == []


def test_strip_features_length_bound(rng):
    for _ in range(100):
        s = random_gloss_sentence(rng)
        stems = strip_features(s)
        assert len(stems) <= len(s.words)
        has_feature_word = any(w.is_feature_word for w in s.words)
        assert (len(stems) == len(s.words)) == (not has_feature_word)


def test_serialize_examples():
    assert serialize_gloss(GlossSentence(words=(GlossWord(stem="dog", suffixes=("PLUR",)),))) == "dog-PLUR"
    assert serialize_gloss(GlossSentence()) == ""


def test_round_trip_random_sentences():
    rng = random.Random(99)
    for _ in range(100):
        s = random_gloss_sentence(rng)
        assert parse_gloss(serialize_gloss(s)) == s


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**63))
def test_round_trip_property(seed):
    s = random_gloss_sentence(random.Random(seed))
    assert parse_gloss(serialize_gloss(s)) == s


def test_labels_match_pattern(rng):
    for _ in range(50):
        s = random_gloss_sentence(rng)
        for w in s.words:
            for label in w.prefixes + w.suffixes:
                assert is_feature_label(label)
            if w.is_feature_word:
                assert is_feature_label(w.stem)


def test_empty_text_parses_to_empty_sentence():
    assert parse_gloss("") == GlossSentence()
    assert parse_gloss("   ") == GlossSentence()
