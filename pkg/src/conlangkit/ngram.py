"""Phoneme-level trigram language models and perplexity-based language ranking.

Models use interpolated Witten-Bell smoothing (no held-out tuning needed)
with a single shared unknown bucket.  Entries are padded with two start
symbols and one end symbol; perplexity is per predicted token, end symbols
included.  Candidate languages whose sample OOV rate is 20% or higher are
excluded from ranking.
"""

from __future__ import annotations

import json
import math
import unicodedata
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "EmptyCorpus",
    "AllFiltered",
    "EvalCorpus",
    "NgramModel",
    "RankingReport",
    "train",
    "perplexity",
    "oov_rate",
    "rank_languages",
    "ranking_report",
    "OOV_EXCLUSION_THRESHOLD",
]

START = "<s>"
END = "</s>"
UNK = "<unk>"
_RESERVED = {START, END, UNK}

OOV_EXCLUSION_THRESHOLD = 0.20


class EmptyCorpus(ValueError):
    pass


class AllFiltered(ValueError):
    """Every candidate model failed the OOV filter."""


@dataclass
class EvalCorpus:
    """Phoneme-sequence entries with a language tag.

    File format: header line "#lang: <tag>", then one entry per line with
    phonemes space-separated.  Syllable separators (".") are dropped on
    load; symbols are NFC-normalized.
    """

    entries: list[tuple[str, ...]]
    language_tag: str

    def __post_init__(self):
        if not self.entries:
            raise EmptyCorpus(f"corpus {self.language_tag!r} has no entries")
        norm = []
        for entry in self.entries:
            symbols = tuple(
                unicodedata.normalize("NFC", s) for s in entry if s != "."
            )
            for s in symbols:
                if s in _RESERVED:
                    raise ValueError(f"entry uses reserved symbol {s!r}")
            norm.append(symbols)
        self.entries = norm

    @classmethod
    def from_morphemes(cls, morphemes: Iterable, language_tag: str) -> "EvalCorpus":
        return cls(
            entries=[tuple(m.phonemes) for m in morphemes], language_tag=language_tag
        )

    @classmethod
    def load(cls, path: str | Path) -> "EvalCorpus":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or not lines[0].startswith("#lang:"):
            raise ValueError(f"{path}: missing '#lang: <tag>' header")
        tag = lines[0][len("#lang:") :].strip()
        entries = [tuple(line.split()) for line in lines[1:] if line.strip()]
        return cls(entries=entries, language_tag=tag)

    def save(self, path: str | Path) -> None:
        out = [f"#lang: {self.language_tag}"]
        out.extend(" ".join(e) for e in self.entries)
        Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


_FORMAT = "conlangkit-ngram-v1"


@dataclass
class NgramModel:
    """Interpolated Witten-Bell trigram model over phoneme symbols."""

    language_tag: str
    vocabulary: frozenset[str]  # observed symbols, END excluded
    unigrams: Counter
    bigrams: dict[str, Counter]
    trigrams: dict[tuple[str, str], Counter]
    total_unigrams: int

    order = 3

    @property
    def _event_space(self) -> int:
        # everything a model can predict: symbols, END, and the UNK bucket
        return len(self.vocabulary) + 2

    @classmethod
    def uniform(cls, vocabulary: Iterable[str], language_tag: str = "uniform") -> "NgramModel":
        """Zero-count model: every prediction is 1 / (|vocab| + 2)."""
        return cls(
            language_tag=language_tag,
            vocabulary=frozenset(vocabulary) - _RESERVED,
            unigrams=Counter(),
            bigrams={},
            trigrams={},
            total_unigrams=0,
        )

    def _map(self, symbol: str) -> str:
        if symbol in (START, END):
            return symbol
        return symbol if symbol in self.vocabulary else UNK

    def _p_uniform(self) -> float:
        return 1.0 / self._event_space

    def _p1(self, w: str) -> float:
        base = self._p_uniform()
        if self.total_unigrams == 0:
            return base
        t = len(self.unigrams)
        return (self.unigrams[w] + t * base) / (self.total_unigrams + t)

    def _p2(self, w: str, v: str) -> float:
        cont = self.bigrams.get(v)
        if not cont:
            return self._p1(w)
        t = len(cont)
        total = sum(cont.values())
        return (cont[w] + t * self._p1(w)) / (total + t)

    def probability(self, w: str, context: tuple[str, str]) -> float:
        """P(w | context) with OOV symbols mapped to the unknown bucket."""
        u, v = (self._map(c) for c in context)
        w = self._map(w)
        cont = self.trigrams.get((u, v))
        if not cont:
            return self._p2(w, v)
        t = len(cont)
        total = sum(cont.values())
        return (cont[w] + t * self._p2(w, v)) / (total + t)

    def entry_log_probability(self, entry: Sequence[str]) -> tuple[float, int]:
        """(sum of log P, number of predicted tokens) for one padded entry."""
        history = [START, START]
        logp = 0.0
        count = 0
        for symbol in tuple(entry) + (END,):
            logp += math.log(self.probability(symbol, (history[-2], history[-1])))
            history.append(self._map(symbol))
            count += 1
        return logp, count

    # -- persistence ------------------------------------------------------

    def save(self, path: str | Path) -> None:
        data = {
            "format": _FORMAT,
            "order": self.order,
            "language_tag": self.language_tag,
            "vocabulary": sorted(self.vocabulary),
            "unigrams": dict(self.unigrams),
            "bigrams": {v: dict(c) for v, c in self.bigrams.items()},
            "trigrams": {u: {v: dict(c) for v, c in by_v.items()} for u, by_v in _nest(self.trigrams).items()},
            "total_unigrams": self.total_unigrams,
        }
        Path(path).write_text(
            json.dumps(data, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "NgramModel":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if data.get("format") != _FORMAT:
            raise ValueError(f"{path}: unsupported model format {data.get('format')!r}")
        trigrams = {}
        for u, by_v in data["trigrams"].items():
            for v, counts in by_v.items():
                trigrams[(u, v)] = Counter(counts)
        return cls(
            language_tag=data["language_tag"],
            vocabulary=frozenset(data["vocabulary"]),
            unigrams=Counter(data["unigrams"]),
            bigrams={v: Counter(c) for v, c in data["bigrams"].items()},
            trigrams=trigrams,
            total_unigrams=data["total_unigrams"],
        )


def _nest(trigrams: dict[tuple[str, str], Counter]) -> dict[str, dict[str, Counter]]:
    nested: dict[str, dict[str, Counter]] = {}
    for (u, v), counts in trigrams.items():
        nested.setdefault(u, {})[v] = counts
    return nested


def train(corpus: EvalCorpus) -> NgramModel:
    """Count padded trigrams over the corpus."""
    unigrams: Counter = Counter()
    bigrams: dict[str, Counter] = {}
    trigrams: dict[tuple[str, str], Counter] = {}
    vocabulary: set[str] = set()
    for entry in corpus.entries:
        vocabulary.update(entry)
        padded = (START, START) + tuple(entry) + (END,)
        for i in range(2, len(padded)):
            u, v, w = padded[i - 2], padded[i - 1], padded[i]
            unigrams[w] += 1
            bigrams.setdefault(v, Counter())[w] += 1
            trigrams.setdefault((u, v), Counter())[w] += 1
    return NgramModel(
        language_tag=corpus.language_tag,
        vocabulary=frozenset(vocabulary),
        unigrams=unigrams,
        bigrams=bigrams,
        trigrams=trigrams,
        total_unigrams=sum(unigrams.values()),
    )


def perplexity(model: NgramModel, corpus: EvalCorpus) -> float:
    """exp(-mean log P per predicted token), end symbols included."""
    total_logp = 0.0
    total_tokens = 0
    for entry in corpus.entries:
        logp, count = model.entry_log_probability(entry)
        total_logp += logp
        total_tokens += count
    return math.exp(-total_logp / total_tokens)


def oov_rate(model: NgramModel, corpus: EvalCorpus) -> float:
    """Fraction of symbol tokens outside the model vocabulary."""
    total = 0
    unknown = 0
    for entry in corpus.entries:
        for symbol in entry:
            total += 1
            if symbol not in model.vocabulary:
                unknown += 1
    return unknown / total if total else 0.0


def rank_languages(
    sample: EvalCorpus, models: Sequence[NgramModel]
) -> list[tuple[str, float]]:
    """Candidates by ascending perplexity on the sample.

    Models with OOV rate >= 20% are excluded first; ties break by
    language tag.  Raises AllFiltered when nothing survives the filter.
    """
    surviving = [m for m in models if oov_rate(m, sample) < OOV_EXCLUSION_THRESHOLD]
    if not surviving:
        raise AllFiltered(
            f"all {len(models)} candidate models exceed the "
            f"{OOV_EXCLUSION_THRESHOLD:.0%} OOV threshold"
        )
    scored = [(m.language_tag, perplexity(m, sample)) for m in surviving]
    scored.sort(key=lambda pair: (pair[1], pair[0]))
    return scored


@dataclass(frozen=True)
class RankingReport:
    ranked: tuple[tuple[str, float], ...]
    top1: str
    target_tag: str | None
    target_in_top10: bool | None

    def table(self) -> str:
        lines = [f"{'rank':>4}  {'language':<24}{'perplexity':>12}"]
        for i, (tag, ppl) in enumerate(self.ranked, start=1):
            lines.append(f"{i:>4}  {tag:<24}{ppl:>12.4f}")
        return "\n".join(lines)


def ranking_report(
    sample: EvalCorpus,
    models: Sequence[NgramModel],
    target_tag: str | None = None,
) -> RankingReport:
    ranked = tuple(rank_languages(sample, models))
    in_top10 = None
    if target_tag is not None:
        in_top10 = target_tag in {tag for tag, _ in ranked[:10]}
    return RankingReport(
        ranked=ranked, top1=ranked[0][0], target_tag=target_tag, target_in_top10=in_top10
    )
