"""Interlinear gloss representation: parsing, serialization, stem extraction.

A gloss sentence is whitespace-tokenized words, morphemes within a word
joined by "-".  Grammatical morphemes (feature labels) are written in
capitals (PLUR, PAST, 3SGERG); stems are ordinary lowercase lemmas.  A
token consisting of a single feature label is a standalone grammatical
word (e.g. a case particle).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

__all__ = [
    "GlossError",
    "AmbiguousToken",
    "GlossWord",
    "GlossSentence",
    "is_feature_label",
    "parse_gloss",
    "serialize_gloss",
    "strip_features",
    "FEATURE_ALIASES",
    "PUNCTUATION",
]

# The corpora this toolkit consumes only ever use these four marks.
PUNCTUATION = {".", "?", "!", ","}

# Both short and long spellings occur in the wild; the long forms are
# canonical and the short ones are folded in at parse time.
FEATURE_ALIASES = {"PL": "PLUR", "SG": "SING"}

_LABEL_RE = re.compile(r"^[A-Z0-9]+$")


class GlossError(ValueError):
    """Malformed gloss text."""


class AmbiguousToken(GlossError):
    """A token whose morphemes cannot be segmented into affixes + one stem."""

    def __init__(self, message: str, token_index: int):
        super().__init__(f"token {token_index}: {message}")
        self.token_index = token_index


def is_feature_label(morpheme: str) -> bool:
    """True iff the morpheme is a feature label.

    A morpheme counts as a label when it contains no lowercase letters and
    at least one uppercase letter ("PLUR", "3SGERG").  Anything with a
    lowercase letter is stem material ("dog", but also "John").
    """
    return bool(_LABEL_RE.match(morpheme)) and any(c.isalpha() for c in morpheme)


def _canonical_label(morpheme: str) -> str:
    return FEATURE_ALIASES.get(morpheme, morpheme)


@dataclass(frozen=True)
class GlossWord:
    """One gloss token: affix labels around a stem, or a standalone label."""

    stem: str
    prefixes: tuple[str, ...] = ()
    suffixes: tuple[str, ...] = ()
    is_feature_word: bool = False

    def __post_init__(self):
        if self.is_feature_word:
            if self.prefixes or self.suffixes:
                raise GlossError(f"feature word {self.stem!r} cannot carry affixes")
            if not is_feature_label(self.stem):
                raise GlossError(f"feature word {self.stem!r} is not a feature label")
        else:
            if not self.stem or not any(c.islower() for c in self.stem):
                raise GlossError(f"stem {self.stem!r} must contain a lowercase letter")
        for label in self.prefixes + self.suffixes:
            if not is_feature_label(label):
                raise GlossError(f"invalid feature label {label!r}")

    @property
    def morphemes(self) -> tuple[str, ...]:
        return self.prefixes + (self.stem,) + self.suffixes

    def render(self) -> str:
        return "-".join(self.morphemes)


@dataclass(frozen=True)
class GlossSentence:
    """An ordered sequence of gloss words plus optional trailing punctuation."""

    words: tuple[GlossWord, ...] = ()
    trailing_punct: str | None = None

    def __post_init__(self):
        if self.trailing_punct is not None and self.trailing_punct not in PUNCTUATION:
            raise GlossError(f"unsupported punctuation {self.trailing_punct!r}")
        stems = {w.stem.lower() for w in self.words if not w.is_feature_word}
        for w in self.words:
            labels = w.prefixes + w.suffixes
            if w.is_feature_word:
                labels = labels + (w.stem,)
            for label in labels:
                if label.lower() in stems:
                    raise GlossError(
                        f"feature label {label!r} collides with a stem in the same sentence"
                    )

    def stems(self) -> list[str]:
        return strip_features(self)

    def render(self) -> str:
        return serialize_gloss(self)


def parse_gloss(text: str) -> GlossSentence:
    """Parse gloss text into a GlossSentence.

    Each whitespace token splits at "-": a maximal leading run of feature
    labels becomes the prefixes, a maximal trailing run the suffixes, and
    the single remaining morpheme the stem.  A token that is entirely one
    feature label becomes a standalone feature word.  Terminal punctuation
    (attached or as its own final token) is detached.

    Raises AmbiguousToken when a token has no stem-able segmentation, and
    GlossError for punctuation misuse or label/stem collisions.
    """
    text = unicodedata.normalize("NFC", text).strip()
    if not text:
        return GlossSentence()

    tokens = text.split()
    trailing: str | None = None
    last = tokens[-1]
    if last in PUNCTUATION:
        trailing = last
        tokens = tokens[:-1]
    elif len(last) > 1 and last[-1] in PUNCTUATION:
        trailing = last[-1]
        tokens = tokens[:-1] + [last[:-1]]

    words = []
    for index, token in enumerate(tokens):
        for ch in token:
            if ch in PUNCTUATION:
                raise GlossError(
                    f"token {index}: punctuation {ch!r} only allowed sentence-finally"
                )
            if not (ch.isalnum() or ch in "-'"):
                raise GlossError(f"token {index}: unsupported symbol {ch!r}")
        morphemes = token.split("-")
        if any(not m for m in morphemes):
            raise AmbiguousToken(f"empty morpheme in {token!r}", index)
        labelled = [is_feature_label(m) for m in morphemes]

        if all(labelled):
            if len(morphemes) != 1:
                raise AmbiguousToken(
                    f"{token!r} has feature labels but no stem", index
                )
            words.append(
                GlossWord(stem=_canonical_label(morphemes[0]), is_feature_word=True)
            )
            continue

        lo = 0
        while labelled[lo]:
            lo += 1
        hi = len(morphemes) - 1
        while labelled[hi]:
            hi -= 1
        # morphemes[lo:hi+1] is what remains after stripping both label runs
        if hi != lo:
            raise AmbiguousToken(
                f"{token!r} does not reduce to affixes around a single stem", index
            )
        words.append(
            GlossWord(
                stem=morphemes[lo],
                prefixes=tuple(_canonical_label(m) for m in morphemes[:lo]),
                suffixes=tuple(_canonical_label(m) for m in morphemes[lo + 1 :]),
            )
        )
    return GlossSentence(words=tuple(words), trailing_punct=trailing)


def serialize_gloss(sentence: GlossSentence) -> str:
    """Render a GlossSentence back to text; inverse of parse_gloss."""
    body = " ".join(w.render() for w in sentence.words)
    if sentence.trailing_punct is None:
        return body
    if not body:
        return sentence.trailing_punct
    return f"{body} {sentence.trailing_punct}"


def strip_features(sentence: GlossSentence) -> list[str]:
    """Stems in order: feature words removed entirely, affixes dropped."""
    return [w.stem for w in sentence.words if not w.is_feature_word]
