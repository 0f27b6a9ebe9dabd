"""Translation metrics over gloss sentences and plain token sequences.

Edit-rate metrics (TER, WER, CER) plus the gloss-aware ones: SER (TER over
stems), MFER (morpheme errors with unordered affix comparison), MSER (the
weighted blend of the two), and Lemma F1 over stem multisets.  BLEU and
ChrF++ round out the table.

TER counts a block shift as one edit no matter how far the block moves;
the shift search is the standard greedy best-shift iteration, so reported
TER is an upper bound on the exact minimum.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

from .gloss import GlossSentence, GlossWord, strip_features

__all__ = [
    "EmptyReference",
    "LengthMismatch",
    "EditScript",
    "MetricReport",
    "ter",
    "ter_alignment",
    "wer",
    "cer",
    "ser",
    "mfer",
    "mser",
    "lemma_f1",
    "bleu_corpus",
    "chrf_pp",
    "score_corpus",
]


class EmptyReference(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


# --------------------------------------------------------------------------
# Levenshtein machinery


def _levenshtein(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        current = [i]
        for j, y in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,  # delete x
                    current[j - 1] + 1,  # insert y
                    previous[j - 1] + (x != y),
                )
            )
        previous = current
    return previous[-1]


def _edit_counts(a: Sequence, b: Sequence) -> tuple[int, int, int]:
    """(insertions, deletions, substitutions) along one optimal a -> b path."""
    rows = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        rows[i][0] = i
    for j in range(len(b) + 1):
        rows[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            rows[i][j] = min(
                rows[i - 1][j] + 1,
                rows[i][j - 1] + 1,
                rows[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    ins = dels = subs = 0
    i, j = len(a), len(b)
    while i > 0 or j > 0:
        if i > 0 and j > 0 and rows[i][j] == rows[i - 1][j - 1] + (a[i - 1] != b[j - 1]):
            subs += a[i - 1] != b[j - 1]
            i, j = i - 1, j - 1
        elif i > 0 and rows[i][j] == rows[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return ins, dels, subs


@dataclass(frozen=True)
class EditScript:
    insertions: int
    deletions: int
    substitutions: int
    block_shifts: int
    total_edits: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "total_edits",
            self.insertions + self.deletions + self.substitutions + self.block_shifts,
        )


_MAX_BLOCK = 10


def _shift_candidates(cur: list, ref: Sequence):
    """Shifts of blocks that occur verbatim in the reference, moved to the
    position where they match it.  Longer blocks are generated first so
    that ties on resulting edit distance resolve toward bigger moves.
    """
    n = len(cur)
    ref = list(ref)
    for length in range(min(n, _MAX_BLOCK), 0, -1):
        for start in range(n - length + 1):
            block = cur[start : start + length]
            rest = cur[:start] + cur[start + length :]
            seen: set[int] = set()
            for p in range(len(ref) - length + 1):
                if ref[p : p + length] != block:
                    continue
                dest = min(p, len(rest))
                if dest == start or dest in seen:
                    continue
                seen.add(dest)
                yield rest[:dest] + block + rest[dest:]


def ter_alignment(hyp: Sequence[str], ref: Sequence[str]) -> EditScript:
    """Greedy best-shift TER decomposition of hyp -> ref.

    Each round applies the shift that most reduces the remaining edit
    distance and stops when no shift strictly reduces it, so the result is
    an upper bound on the exact minimum.
    """
    if not ref:
        raise EmptyReference("TER reference must be non-empty")
    cur = list(hyp)
    shifts = 0
    distance = _levenshtein(cur, ref)
    while distance > 1:
        best = None
        best_distance = distance
        for candidate in _shift_candidates(cur, ref):
            d = _levenshtein(candidate, ref)
            if d < best_distance:
                best, best_distance = candidate, d
        if best is None:
            break
        cur = best
        distance = best_distance
        shifts += 1
    ins, dels, subs = _edit_counts(cur, ref)
    return EditScript(
        insertions=ins, deletions=dels, substitutions=subs, block_shifts=shifts
    )


def ter(hyp: Sequence[str], ref: Sequence[str]) -> float:
    """Translation edit rate: (shifts + remaining edits) / reference length."""
    return ter_alignment(hyp, ref).total_edits / len(ref)


def wer(hyp: Sequence[str], ref: Sequence[str]) -> float:
    if not ref:
        raise EmptyReference("WER reference must be non-empty")
    return _levenshtein(list(hyp), list(ref)) / len(ref)


def cer(hyp: str, ref: str) -> float:
    if not ref:
        raise EmptyReference("CER reference must be non-empty")
    return _levenshtein(hyp, ref) / len(ref)


# --------------------------------------------------------------------------
# Gloss-aware metrics


def ser(hyp: GlossSentence, ref: GlossSentence) -> float:
    """TER applied to the stem sequences (affixes and feature words ignored)."""
    ref_stems = strip_features(ref)
    if not ref_stems:
        raise EmptyReference("SER reference has no stems")
    return ter(strip_features(hyp), ref_stems)


def _multiset_cost(a: Sequence[str], b: Sequence[str]) -> int:
    matched = sum((Counter(a) & Counter(b)).values())
    return max(len(a) - matched, len(b) - matched)


def _word_distance(h: GlossWord, r: GlossWord) -> int:
    return (
        (h.stem != r.stem)
        + _multiset_cost(h.prefixes, r.prefixes)
        + _multiset_cost(h.suffixes, r.suffixes)
    )


def _word_size(w: GlossWord) -> int:
    return 1 + len(w.prefixes) + len(w.suffixes)


def _mfer_counts(hyp: GlossSentence, ref: GlossSentence) -> tuple[int, int]:
    """(morpheme errors, reference morpheme count) for one sentence pair."""
    denominator = sum(_word_size(w) for w in ref.words)
    pairs = []
    for ri, rw in enumerate(ref.words):
        for hi, hw in enumerate(hyp.words):
            d = _word_distance(hw, rw)
            pairs.append((d, hw.stem != rw.stem, ri, hi))
    pairs.sort()
    taken_ref: set[int] = set()
    taken_hyp: set[int] = set()
    errors = 0
    for d, _, ri, hi in pairs:
        if ri in taken_ref or hi in taken_hyp:
            continue
        taken_ref.add(ri)
        taken_hyp.add(hi)
        errors += d
    for ri, rw in enumerate(ref.words):
        if ri not in taken_ref:
            errors += _word_size(rw)
    return errors, denominator


def mfer(hyp: GlossSentence, ref: GlossSentence) -> float:
    """Morphological feature error rate.

    Each reference word is matched (without reuse) to the hypothesis word
    at minimal morpheme distance; prefixes and suffixes are compared as
    unordered multisets, so affix order within a side never costs.
    Unmatched reference words cost their full morpheme count; surplus
    hypothesis words cost nothing.  Normalized by the total reference
    morpheme count.
    """
    if not ref.words:
        raise EmptyReference("MFER reference must be non-empty")
    errors, denominator = _mfer_counts(hyp, ref)
    return errors / denominator


def mser(ser_value: float, mfer_value: float, alpha: float = 0.5) -> float:
    """alpha * SER + (1 - alpha) * MFER."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha {alpha} outside [0, 1]")
    return alpha * ser_value + (1.0 - alpha) * mfer_value


def lemma_f1(hyp: GlossSentence, ref: GlossSentence) -> tuple[float, float, float]:
    """(precision, recall, F1) over stem multisets; F1 = 0 when P + R = 0."""
    ref_stems = Counter(strip_features(ref))
    if not ref_stems:
        raise EmptyReference("lemma F1 reference has no stems")
    hyp_stems = Counter(strip_features(hyp))
    tp = sum((hyp_stems & ref_stems).values())
    fp = sum(hyp_stems.values()) - tp
    fn = sum(ref_stems.values()) - tp
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f1


# --------------------------------------------------------------------------
# BLEU and ChrF++


def _ngrams(tokens: Sequence, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_corpus(
    hyps: Sequence[Sequence[str]], refs: Sequence[Sequence[str]], max_n: int = 4
) -> float:
    """Corpus BLEU in [0, 100]: geometric mean of modified n-gram precisions
    up to max_n with the brevity penalty.  No smoothing: a zero precision
    zeroes the score.
    """
    if max_n not in (2, 3, 4):
        raise ValueError("max_n must be 2, 3, or 4")
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    for r in refs:
        if not r:
            raise EmptyReference("BLEU references must be non-empty")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hyps, refs):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_counts = _ngrams(hyp, n)
            clipped = hyp_counts & _ngrams(ref, n)
            matches[n - 1] += sum(clipped.values())
            totals[n - 1] += sum(hyp_counts.values())
    if hyp_len == 0 or any(m == 0 or t == 0 for m, t in zip(matches, totals)):
        return 0.0
    log_precision = sum(math.log(m / t) for m, t in zip(matches, totals)) / max_n
    brevity = 1.0 if hyp_len > ref_len else math.exp(1.0 - ref_len / hyp_len)
    return 100.0 * brevity * math.exp(log_precision)


def _fscore_orders(hyp_units: Sequence, ref_units: Sequence, max_n: int) -> float:
    """Mean n-gram F1 over orders 1..max_n, skipping orders empty on both sides."""
    scores = []
    for n in range(1, max_n + 1):
        hyp_counts = _ngrams(hyp_units, n)
        ref_counts = _ngrams(ref_units, n)
        if not hyp_counts and not ref_counts:
            continue
        matched = sum((hyp_counts & ref_counts).values())
        hyp_total = sum(hyp_counts.values())
        ref_total = sum(ref_counts.values())
        precision = matched / hyp_total if hyp_total else 0.0
        recall = matched / ref_total if ref_total else 0.0
        if precision + recall == 0:
            scores.append(0.0)
        else:
            scores.append(2 * precision * recall / (precision + recall))
    return sum(scores) / len(scores) if scores else 0.0


def chrf_pp(hyp: str, ref: str) -> float:
    """ChrF++ in [0, 100]: the mean of the character n-gram F1 (orders 1..6,
    whitespace ignored) and the word n-gram F1 (orders 1..2).
    """
    if not ref.strip():
        raise EmptyReference("ChrF++ reference must be non-empty")
    char_f = _fscore_orders("".join(hyp.split()), "".join(ref.split()), 6)
    word_f = _fscore_orders(hyp.split(), ref.split(), 2)
    return 100.0 * (char_f + word_f) / 2.0


# --------------------------------------------------------------------------
# Corpus-level reporting


@dataclass(frozen=True)
class MetricReport:
    """One row of scores; edit rates are fractions, BLEU/ChrF++ 0-100."""

    bleu: float | None = None
    chrf_pp: float | None = None
    wer: float | None = None
    cer: float | None = None
    ter: float | None = None
    ser: float | None = None
    mfer: float | None = None
    mser: float | None = None
    lemma_f1: float | None = None

    def __post_init__(self):
        if None not in (self.ser, self.mfer, self.mser):
            expected = 0.5 * self.ser + 0.5 * self.mfer
            if abs(self.mser - expected) > 1e-9:
                raise ValueError("mser must equal 0.5*ser + 0.5*mfer")

    COLUMNS = ("BLEU", "ChrF++", "WER", "CER", "TER", "SER", "MFER", "MSER", "LemF1")

    def to_dict(self) -> dict:
        return {
            "bleu": self.bleu,
            "chrf_pp": self.chrf_pp,
            "wer": self.wer,
            "cer": self.cer,
            "ter": self.ter,
            "ser": self.ser,
            "mfer": self.mfer,
            "mser": self.mser,
            "lemma_f1": self.lemma_f1,
        }

    def table(self, label: str = "corpus") -> str:
        """Human-readable row with edit rates and LemF1 shown as percentages."""
        def pct(x):
            return "-" if x is None else f"{100.0 * x:.2f}"

        def raw(x):
            return "-" if x is None else f"{x:.2f}"

        cells = [
            raw(self.bleu),
            raw(self.chrf_pp),
            pct(self.wer),
            pct(self.cer),
            pct(self.ter),
            pct(self.ser),
            pct(self.mfer),
            pct(self.mser),
            pct(self.lemma_f1),
        ]
        header = f"{'corpus':<16}" + "".join(f"{c:>10}" for c in self.COLUMNS)
        row = f"{label:<16}" + "".join(f"{c:>10}" for c in cells)
        return header + "\n" + row


def score_corpus(
    hyps: Sequence[GlossSentence], refs: Sequence[GlossSentence]
) -> MetricReport:
    """Full metric suite over aligned hypothesis/reference gloss corpora.

    Edit rates are micro-averaged (total edits over total reference
    length); Lemma F1 and ChrF++ are macro-averaged per sentence; BLEU is
    corpus-level with max_n=4.
    """
    if len(hyps) != len(refs):
        raise LengthMismatch(f"{len(hyps)} hypotheses vs {len(refs)} references")
    if not refs:
        raise EmptyReference("no reference sentences")

    wer_edits = wer_len = 0
    cer_edits = cer_len = 0
    ter_edits = ter_len = 0
    ser_edits = ser_len = 0
    mfer_errors = 0
    mfer_len = 0
    f1_values = []
    chrf_values = []
    bleu_hyps = []
    bleu_refs = []

    for hyp, ref in zip(hyps, refs):
        hyp_tokens = [w.render() for w in hyp.words]
        ref_tokens = [w.render() for w in ref.words]
        hyp_text = hyp.render()
        ref_text = ref.render()
        hyp_stems = strip_features(hyp)
        ref_stems = strip_features(ref)

        wer_edits += _levenshtein(hyp_tokens, ref_tokens)
        wer_len += len(ref_tokens)
        cer_edits += _levenshtein(hyp_text, ref_text)
        cer_len += len(ref_text)
        if ref_tokens:
            ter_edits += ter_alignment(hyp_tokens, ref_tokens).total_edits
            ter_len += len(ref_tokens)
        if ref_stems:
            ser_edits += ter_alignment(hyp_stems, ref_stems).total_edits
            ser_len += len(ref_stems)
            _, _, f1 = lemma_f1(hyp, ref)
            f1_values.append(f1)
        if ref.words:
            errors, size = _mfer_counts(hyp, ref)
            mfer_errors += errors
            mfer_len += size
        chrf_values.append(chrf_pp(hyp_text, ref_text))
        bleu_hyps.append(hyp_tokens)
        bleu_refs.append(ref_tokens)

    ser_rate = ser_edits / ser_len if ser_len else 0.0
    mfer_rate = mfer_errors / mfer_len if mfer_len else 0.0
    return MetricReport(
        bleu=bleu_corpus(bleu_hyps, bleu_refs, max_n=4),
        chrf_pp=sum(chrf_values) / len(chrf_values),
        wer=wer_edits / wer_len if wer_len else 0.0,
        cer=cer_edits / cer_len if cer_len else 0.0,
        ter=ter_edits / ter_len if ter_len else 0.0,
        ser=ser_rate,
        mfer=mfer_rate,
        mser=mser(ser_rate, mfer_rate),
        lemma_f1=sum(f1_values) / len(f1_values) if f1_values else 0.0,
    )
