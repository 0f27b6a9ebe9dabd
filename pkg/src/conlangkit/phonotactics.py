"""Morpheme generation from a weighted inventory + syllable-template grammar.

The grammar is declarative data rather than generated code: weighted
consonant/vowel inventories plus weighted onset/nucleus/coda templates and
a syllable-count distribution.  Template elements are either explicit
phoneme symbols or the class placeholders "C" / "V", which draw one
phoneme from the corresponding weighted inventory.

Rendered morphemes place a space between every pair of adjacent phonemes
and " . " at syllable breaks, e.g. "s o . d a . n i".
"""

from __future__ import annotations

import json
import random
import unicodedata
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "PhonemeInventory",
    "PhonotacticGrammar",
    "Morpheme",
    "FormatViolation",
    "FUSED_CLUSTER",
    "MALFORMED_SEPARATOR",
    "generate_morpheme",
    "sample_corpus",
    "validate_morpheme_format",
    "build_refinement_report",
    "phoneme_frequencies",
]

CONSONANT_SLOT = "C"
VOWEL_SLOT = "V"
SYLLABLE_SEP = "."

FUSED_CLUSTER = "fused-cluster"
MALFORMED_SEPARATOR = "malformed-separator"

# A phoneme symbol is one base letter plus optional modifier/combining
# characters (aspiration, length, nasalization, ...).
_MODIFIER_CATEGORIES = {"Mn", "Lm", "Sk"}


def _is_valid_symbol(symbol: str) -> bool:
    if not symbol or symbol in (CONSONANT_SLOT, VOWEL_SLOT, SYLLABLE_SEP):
        return False
    if symbol != unicodedata.normalize("NFC", symbol):
        return False
    if not unicodedata.category(symbol[0]).startswith("L"):
        return False
    return all(unicodedata.category(c) in _MODIFIER_CATEGORIES for c in symbol[1:])


@dataclass(frozen=True)
class PhonemeInventory:
    """Weighted consonant and vowel inventories (weights are relative frequencies)."""

    consonants: Mapping[str, float]
    vowels: Mapping[str, float]

    def __post_init__(self):
        overlap = set(self.consonants) & set(self.vowels)
        if overlap:
            raise ValueError(f"symbols in both classes: {sorted(overlap)}")
        for symbol, weight in list(self.consonants.items()) + list(self.vowels.items()):
            if weight <= 0:
                raise ValueError(f"non-positive weight for {symbol!r}")
            if not _is_valid_symbol(symbol):
                raise ValueError(f"invalid phoneme symbol {symbol!r}")

    def symbols(self) -> frozenset[str]:
        return frozenset(self.consonants) | frozenset(self.vowels)


WeightedSeqs = tuple[tuple[tuple[str, ...], float], ...]


def _as_weighted_seqs(items: Iterable) -> WeightedSeqs:
    out = []
    for seq, weight in items:
        out.append((tuple(seq), float(weight)))
    return tuple(out)


@dataclass(frozen=True)
class PhonotacticGrammar:
    """Inventory plus weighted syllable templates.

    max_syllables defaults to 4: real samples run 1-3 syllables and 4
    leaves headroom.
    """

    inventory: PhonemeInventory
    onset_clusters: WeightedSeqs
    coda_clusters: WeightedSeqs
    nucleus_patterns: WeightedSeqs
    syllable_count_distribution: Mapping[int, float]

    MAX_SYLLABLES = 4

    def __post_init__(self):
        object.__setattr__(self, "onset_clusters", _as_weighted_seqs(self.onset_clusters))
        object.__setattr__(self, "coda_clusters", _as_weighted_seqs(self.coda_clusters))
        object.__setattr__(self, "nucleus_patterns", _as_weighted_seqs(self.nucleus_patterns))
        for name in ("onset_clusters", "coda_clusters", "nucleus_patterns"):
            coll = getattr(self, name)
            if not coll:
                raise ValueError(f"{name} must be non-empty")
            for seq, weight in coll:
                if weight <= 0:
                    raise ValueError(f"non-positive weight in {name}")
                for sym in seq:
                    self._check_element(name, sym)
        if not self.syllable_count_distribution:
            raise ValueError("syllable_count_distribution must be non-empty")
        for count, weight in self.syllable_count_distribution.items():
            if not (1 <= int(count) <= self.MAX_SYLLABLES):
                raise ValueError(f"syllable count {count} out of range 1..{self.MAX_SYLLABLES}")
            if weight <= 0:
                raise ValueError("non-positive syllable count weight")
        for seq, _ in self.nucleus_patterns:
            if not seq:
                raise ValueError("nucleus patterns must be non-empty sequences")

    def _check_element(self, name: str, sym: str) -> None:
        if sym == CONSONANT_SLOT:
            if not self.inventory.consonants:
                raise ValueError(f"{name} uses 'C' but the consonant inventory is empty")
        elif sym == VOWEL_SLOT:
            if not self.inventory.vowels:
                raise ValueError(f"{name} uses 'V' but the vowel inventory is empty")
        elif sym not in self.inventory.symbols():
            raise ValueError(f"{name} symbol {sym!r} missing from inventory")

    # -- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "consonants": dict(self.inventory.consonants),
            "vowels": dict(self.inventory.vowels),
            "onset_clusters": [[list(s), w] for s, w in self.onset_clusters],
            "coda_clusters": [[list(s), w] for s, w in self.coda_clusters],
            "nucleus_patterns": [[list(s), w] for s, w in self.nucleus_patterns],
            "syllable_count_distribution": {
                str(k): v for k, v in sorted(self.syllable_count_distribution.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "PhonotacticGrammar":
        inventory = PhonemeInventory(
            consonants=dict(data["consonants"]), vowels=dict(data["vowels"])
        )
        return cls(
            inventory=inventory,
            onset_clusters=_as_weighted_seqs(data["onset_clusters"]),
            coda_clusters=_as_weighted_seqs(data["coda_clusters"]),
            nucleus_patterns=_as_weighted_seqs(data["nucleus_patterns"]),
            syllable_count_distribution={
                int(k): float(v) for k, v in data["syllable_count_distribution"].items()
            },
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path) -> "PhonotacticGrammar":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class Morpheme:
    """A phoneme sequence with syllable-break positions (break before index i)."""

    phonemes: tuple[str, ...]
    syllable_breaks: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "phonemes", tuple(self.phonemes))
        object.__setattr__(self, "syllable_breaks", frozenset(self.syllable_breaks))
        for pos in self.syllable_breaks:
            if not 0 < pos < len(self.phonemes):
                raise ValueError(f"syllable break {pos} outside phoneme sequence")

    def render(self) -> str:
        parts: list[str] = []
        for i, p in enumerate(self.phonemes):
            if i in self.syllable_breaks:
                parts.append(SYLLABLE_SEP)
            parts.append(p)
        return " ".join(parts)

    @classmethod
    def parse(cls, rendered: str) -> "Morpheme":
        """Inverse of render; tolerant of arbitrary space-separated tokens."""
        phonemes = []
        breaks = set()
        for token in rendered.split():
            if token == SYLLABLE_SEP:
                breaks.add(len(phonemes))
            else:
                phonemes.append(token)
        breaks = {b for b in breaks if 0 < b < len(phonemes)}
        return cls(phonemes=tuple(phonemes), syllable_breaks=frozenset(breaks))

    def __len__(self) -> int:
        return len(self.phonemes)


def _weighted_choice(rng: random.Random, pairs: Sequence[tuple]) -> object:
    values = [v for v, _ in pairs]
    weights = [w for _, w in pairs]
    return rng.choices(values, weights=weights, k=1)[0]


def _draw_symbol(rng: random.Random, sym: str, inventory: PhonemeInventory) -> str:
    # sorted so draws do not depend on dict insertion order (a grammar
    # reloaded from JSON must sample identically)
    if sym == CONSONANT_SLOT:
        return _weighted_choice(rng, sorted(inventory.consonants.items()))
    if sym == VOWEL_SLOT:
        return _weighted_choice(rng, sorted(inventory.vowels.items()))
    return sym


def generate_morpheme(grammar: PhonotacticGrammar, rng: random.Random) -> Morpheme:
    """Draw one morpheme: syllable count, then onset+nucleus+coda per syllable.

    Deterministic given the rng state.
    """
    n_syllables = _weighted_choice(
        rng, sorted(grammar.syllable_count_distribution.items())
    )
    phonemes: list[str] = []
    breaks: set[int] = set()
    for s in range(n_syllables):
        if s > 0:
            breaks.add(len(phonemes))
        onset = _weighted_choice(rng, grammar.onset_clusters)
        nucleus = _weighted_choice(rng, grammar.nucleus_patterns)
        coda = _weighted_choice(rng, grammar.coda_clusters)
        for sym in tuple(onset) + tuple(nucleus) + tuple(coda):
            phonemes.append(_draw_symbol(rng, sym, grammar.inventory))
    return Morpheme(phonemes=tuple(phonemes), syllable_breaks=frozenset(breaks))


def sample_corpus(grammar: PhonotacticGrammar, n: int, seed: int) -> list[Morpheme]:
    """n independent draws, reproducible from the seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    return [generate_morpheme(grammar, rng) for _ in range(n)]


@dataclass(frozen=True)
class FormatViolation:
    kind: str  # FUSED_CLUSTER or MALFORMED_SEPARATOR
    token: str

    def describe(self) -> str:
        if self.kind == FUSED_CLUSTER:
            return f"fused or unknown phoneme token {self.token!r}"
        return f"malformed syllable separator near {self.token!r}"


def validate_morpheme_format(
    rendered: str, inventory: PhonemeInventory
) -> list[FormatViolation]:
    """Check a rendered morpheme against the inventory and spacing rules.

    One violation per token that is not a known single phoneme (this is
    what catches fused clusters like "lf"), plus separator violations for
    leading/trailing/doubled " . ".
    """
    tokens = rendered.split()
    violations = []
    if not tokens:
        return [FormatViolation(MALFORMED_SEPARATOR, "")]
    known = inventory.symbols()
    previous_sep = True  # sentinel: a separator at position 0 is malformed
    for i, token in enumerate(tokens):
        if token == SYLLABLE_SEP:
            if previous_sep or i == len(tokens) - 1:
                violations.append(FormatViolation(MALFORMED_SEPARATOR, token))
            previous_sep = True
            continue
        previous_sep = False
        if token not in known:
            violations.append(FormatViolation(FUSED_CLUSTER, token))
    return violations


def phoneme_frequencies(sample: Iterable[Morpheme]) -> dict[str, int]:
    """Raw token counts per phoneme symbol over a sample."""
    counts: dict[str, int] = {}
    for m in sample:
        for p in m.phonemes:
            counts[p] = counts.get(p, 0) + 1
    return counts


_DEFAULT_INSTRUCTIONS = (
    "Revise the grammar so that every generated token is a single phoneme "
    "from the inventory, with one space between adjacent phonemes and "
    "\" . \" only between syllables. Check the inventory for sounds that "
    "are strongly associated with the target but missing, and for sounds "
    "that do not belong and should be removed. Reply with the corrected "
    "grammar as JSON using the same keys."
)


def build_refinement_report(
    previous_grammar: PhonotacticGrammar,
    sample: Sequence[Morpheme],
    target_notes: str = "",
) -> str:
    """Feedback text for one round of the grammar-refinement loop.

    Contains the fused-token list found in the sample, the sample's
    phoneme frequency table, and the improvement instructions.
    """
    if not sample:
        raise ValueError("sample must be non-empty")
    fused = sorted(
        {
            v.token
            for m in sample
            for v in validate_morpheme_format(m.render(), previous_grammar.inventory)
            if v.kind == FUSED_CLUSTER
        }
    )
    freqs = phoneme_frequencies(sample)
    lines = ["Fused or unknown phoneme tokens:"]
    lines.append("  " + ", ".join(fused) if fused else "  (none)")
    lines.append("")
    lines.append("Phoneme frequencies in the sample:")
    for symbol, count in sorted(freqs.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"  {symbol}\t{count}")
    lines.append(f"  total\t{sum(freqs.values())}")
    lines.append("")
    lines.append(_DEFAULT_INSTRUCTIONS)
    if target_notes:
        lines.append("")
        lines.append(target_notes)
    return "\n".join(lines)
