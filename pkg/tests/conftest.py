import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conlangkit.gloss import GlossSentence, GlossWord

# Disjoint alphabets so labels can never collide with stems, and no alias
# keys (PL/SG) so serialization round-trips exactly.
_STEM_POOL = ["dog", "cat", "run", "eat", "see", "man", "bird", "house", "water", "go"]
_LABEL_POOL = ["PLUR", "SING", "PAST", "PRES", "FUT", "ERG", "ABS", "NOM", "ACC",
               "DEF", "INDEF", "3SGERG", "1PLEXCL", "NEG", "GEN", "DUAL"]
_PUNCT_POOL = [None, None, None, ".", "?", "!"]


def random_gloss_word(rng: random.Random) -> GlossWord:
    if rng.random() < 0.12:
        return GlossWord(stem=rng.choice(_LABEL_POOL), is_feature_word=True)
    return GlossWord(
        stem=rng.choice(_STEM_POOL),
        prefixes=tuple(rng.sample(_LABEL_POOL, rng.randint(0, 2))),
        suffixes=tuple(rng.sample(_LABEL_POOL, rng.randint(0, 3))),
    )


def random_gloss_sentence(rng: random.Random, min_words: int = 1, max_words: int = 8) -> GlossSentence:
    words = tuple(
        random_gloss_word(rng) for _ in range(rng.randint(min_words, max_words))
    )
    return GlossSentence(words=words, trailing_punct=rng.choice(_PUNCT_POOL))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
