"""Deterministic reference transformer: applies a MorphosyntaxSpec to an
annotated source sentence, producing an interlinear gloss.

This engine exists so that metrics, lexicon and pipeline are testable
offline; an LLM-driven path covers raw English input instead.  Its
linearization rules, documented here, are what the bundled hand glosses
encode:

* The clause core (subject, object, verb) is arranged per main_word_order;
  oblique phrases and other dependents follow the core in source order.
* Inside a noun phrase: adpositions outermost, then a head-final relative
  clause, possessor, numeral, adjective innermost (mirrored on the right
  for NA/NNum/NPoss/NP/head-initial settings).
* Verb agreement fuses person + number (+ subject case when case-marked,
  + clusivity when configured) into one label such as 3SGERG or 1PLEXCL,
  attached per the person strategy.  Dual/paucal subjects fall back to
  plural agreement when the configured number list lacks them, and the
  same fallback applies to nominal number marking.
* Tense values fall back along fixed chains (e.g. past -> recent past)
  when a spec offers a finer split than the source annotation.
* Indicative mood and active voice are zero-marked.
* A NEG token is realized per the negation strategy (label on the verb or
  a standalone NEG word) and its lemma never surfaces; likewise the
  relativizer token, realized on the head noun (head-marking) or the
  clause verb (dependent-marking).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from ..gloss import GlossSentence, GlossWord
from .types import (
    FeatureLabelTable,
    MorphosyntaxSpec,
    SourceSentence,
    SpecError,
    Token,
)

__all__ = ["EngineError", "MissingVerb", "reorder", "mark_features", "transform"]

NOUN_ROLES = ("SUBJ", "OBJ", "OBL")

_PERSON_NAMES = {1: "first", 2: "second", 3: "third"}
_PERSON_DIGITS = {1: "1", 2: "2", 3: "3"}
_DEGREE_VALUES = {"cmp": "comparative", "sup": "superlative", "eqt": "equative"}

_NUMBER_FALLBACKS = {
    "singular": ("singular",),
    "plural": ("plural",),
    "dual": ("dual", "plural"),
    "paucal": ("paucal", "plural"),
}

_TENSE_FALLBACKS = {
    "present": ("present", "nonpast"),
    "past": ("past", "recent past", "perfect", "remote past"),
    "future": ("future", "nonpast"),
    "perfect": ("perfect", "past", "recent past", "remote past"),
    "imperfect": ("imperfect", "past", "recent past"),
    "immediate past": ("immediate past", "recent past", "past", "perfect"),
    "recent past": ("recent past", "past", "perfect", "remote past"),
    "remote past": ("remote past", "past", "perfect", "recent past"),
    "nonpast": ("nonpast", "present"),
}


class EngineError(ValueError):
    pass


class MissingVerb(EngineError):
    pass


def _pick(value: str | None, available: Sequence[str], fallbacks: dict) -> str | None:
    if value is None:
        return None
    for candidate in fallbacks.get(value, (value,)):
        if candidate in available:
            return candidate
    return None


# --------------------------------------------------------------------------
# Reordering


class _Index:
    """Dependency lookups over one sentence."""

    def __init__(self, sentence: SourceSentence):
        self.tokens = sentence.tokens
        self.deps: dict[int | None, list[int]] = {}
        for i, t in enumerate(self.tokens):
            self.deps.setdefault(t.head_index, []).append(i)

    def of(self, head: int, *roles: str) -> list[int]:
        return [i for i in self.deps.get(head, []) if self.tokens[i].role in roles]

    def rel_verbs(self, noun: int) -> list[int]:
        return [
            i
            for i in self.deps.get(noun, [])
            if self.tokens[i].role == "VERB" and not self.tokens[i].features.is_infinitive
        ]

    def infinitives(self, verb: int) -> list[int]:
        return [
            i
            for i in self.deps.get(verb, [])
            if self.tokens[i].role == "VERB" and self.tokens[i].features.is_infinitive
        ]

    def marker_of(self, rel_verb: int) -> list[int]:
        return self.of(rel_verb, "REL-CLAUSE-MARKER")

    def subject_of(self, verb: int) -> int | None:
        subjects = self.of(verb, "SUBJ")
        return subjects[0] if subjects else None


def _np_block(index: _Index, spec: MorphosyntaxSpec, noun: int) -> list[int]:
    tokens = index.tokens
    adjs = index.of(noun, "ADJ")
    nums = index.of(noun, "NUM")
    poss = index.of(noun, "POSS")
    adps = index.of(noun, "ADP")
    rel_blocks: list[int] = []
    for rv in index.rel_verbs(noun):
        rel_blocks.extend(_rel_clause_block(index, spec, rv))

    pre: list[int] = []
    post: list[int] = []
    if spec.adposition_noun_word_order == "PN":
        pre.extend(adps)
    head_final_rc = (
        spec.relativization is not None
        and spec.relativization.relativization_order == "head-final"
    )
    if head_final_rc:
        pre.extend(rel_blocks)
    if spec.posspron_noun_word_order == "PossN":
        pre.extend(poss)
    if spec.num_noun_word_order == "NumN":
        pre.extend(nums)
    if spec.adj_noun_word_order == "AN":
        pre.extend(adjs)

    if spec.adj_noun_word_order == "NA":
        post.extend(adjs)
    if spec.num_noun_word_order == "NNum":
        post.extend(nums)
    if spec.posspron_noun_word_order == "NPoss":
        post.extend(poss)
    if not head_final_rc:
        post.extend(rel_blocks)
    if spec.adposition_noun_word_order == "NP":
        post.extend(adps)
    return pre + [noun] + post


def _rel_clause_block(index: _Index, spec: MorphosyntaxSpec, rel_verb: int) -> list[int]:
    block = _clause_block(index, spec, rel_verb)
    markers = index.marker_of(rel_verb)
    postpositional = (
        spec.relativization is not None
        and spec.relativization.relativizer_position == "postpositional"
    )
    return block + markers if postpositional else markers + block


def _verb_block(index: _Index, spec: MorphosyntaxSpec, verb: int) -> list[int]:
    negs = index.of(verb, "NEG")
    if spec.negation == "postpositional word":
        return [verb] + negs
    return negs + [verb]


def _clause_block(index: _Index, spec: MorphosyntaxSpec, verb: int) -> list[int]:
    subj_block: list[int] = []
    for s in index.of(verb, "SUBJ"):
        subj_block.extend(_np_block(index, spec, s))
    obj_block: list[int] = []
    for o in index.of(verb, "OBJ"):
        obj_block.extend(_np_block(index, spec, o))
    for inf in index.infinitives(verb):
        obj_block.extend(_clause_block(index, spec, inf))

    blocks = {"S": subj_block, "O": obj_block, "V": _verb_block(index, spec, verb)}
    core: list[int] = []
    for letter in spec.main_word_order:
        core.extend(blocks[letter])

    trailing: list[int] = []
    extras = sorted(index.of(verb, "OBL") + index.of(verb, "OTHER"))
    for i in extras:
        if index.tokens[i].role == "OBL":
            trailing.extend(_np_block(index, spec, i))
        else:
            trailing.append(i)
    return core + trailing


def reorder(src: SourceSentence, spec: MorphosyntaxSpec) -> SourceSentence:
    """Permute constituents to the spec's word-order settings.

    The output is a permutation of the input tokens with head indices
    remapped; tokens not reachable from the main verb keep their relative
    order at the end.
    """
    index = _Index(src)
    main_verbs = [
        i
        for i, t in enumerate(src.tokens)
        if t.role == "VERB" and t.head_index is None
    ]
    if not main_verbs:
        raise MissingVerb("no main verb in sentence")
    if len(main_verbs) > 1:
        raise EngineError("more than one main verb")

    order = _clause_block(index, spec, main_verbs[0])
    placed = set(order)
    if len(placed) != len(order):
        raise EngineError("token placed twice during reordering")
    order.extend(i for i in range(len(src.tokens)) if i not in placed)

    remap = {old: new for new, old in enumerate(order)}
    tokens = []
    for old in order:
        t = src.tokens[old]
        head = None if t.head_index is None else remap[t.head_index]
        tokens.append(Token(lemma=t.lemma, role=t.role, head_index=head, features=t.features))
    return SourceSentence(tokens=tuple(tokens), text=src.text)


# --------------------------------------------------------------------------
# Feature marking


# Affix slots from the stem outward: number sits inside case on nouns
# (cucumber-PLUR-ABS) while tense sits inside agreement on verbs
# (walk-PRES-3SGNOM).  Prefixes mirror this, outermost first.
_AFFIX_PROXIMITY = (
    "nominal_number",
    "definiteness",
    "case",
    "comparative",
    "adjective_agreement",
    "tense_aspect",
    "person",
    "voice",
    "mood",
    "negation",
    "infinitive",
    "relativization",
)


@dataclass(frozen=True)
class _Marking:
    group: str  # name in GROUP_ORDER
    sub_rank: int
    label: str
    strategy: str

    @property
    def proximity(self) -> tuple[int, int]:
        return (_AFFIX_PROXIMITY.index(self.group), self.sub_rank)


def _noun_case_label(
    index: _Index, spec: MorphosyntaxSpec, labels: FeatureLabelTable, idx: int
) -> str | None:
    if spec.case is None:
        return None
    tok = index.tokens[idx]
    marked = set(spec.case.case_marking)
    if tok.role == "SUBJ" and tok.head_index is not None:
        verb = index.tokens[tok.head_index]
        if {"ergative", "absolutive"} <= marked:
            value = "ergative" if verb.features.is_transitive_clause else "absolutive"
            return labels.get("case", value)
        if "nominative" in marked:
            return labels.get("case", "nominative")
    elif tok.role == "OBJ":
        if {"ergative", "absolutive"} <= marked:
            return labels.get("case", "absolutive")
        if "accusative" in marked:
            return labels.get("case", "accusative")
    elif tok.role == "POSS":
        if "genitive" in marked:
            return labels.get("case", "genitive")
    elif tok.role == "OBL":
        if spec.case.oblique_case_marking is not None:
            return labels.get("case", spec.case.oblique_case_marking)
    return None


def _noun_number_value(spec: MorphosyntaxSpec, tok: Token) -> str | None:
    if spec.nominal_number is None:
        return None
    return _pick(tok.features.number, spec.nominal_number.nominal_number, _NUMBER_FALLBACKS)


def _noun_definiteness_value(spec: MorphosyntaxSpec, tok: Token) -> str | None:
    if spec.definiteness is None or tok.features.definiteness is None:
        return None
    if tok.features.definiteness in spec.definiteness.definiteness:
        return tok.features.definiteness
    return None


def _noun_markings(
    index: _Index, spec: MorphosyntaxSpec, labels: FeatureLabelTable, idx: int
) -> list[_Marking]:
    tok = index.tokens[idx]
    out = []
    case_label = _noun_case_label(index, spec, labels, idx)
    if case_label is not None:
        out.append(_Marking("case", 0, case_label, spec.case.case_marking_strategy))
    if tok.role in NOUN_ROLES:
        definiteness = _noun_definiteness_value(spec, tok)
        if definiteness is not None:
            out.append(
                _Marking(
                    "definiteness",
                    0,
                    labels.get("definiteness", definiteness),
                    spec.definiteness.definiteness_marking_strategy,
                )
            )
        number = _noun_number_value(spec, tok)
        if number is not None:
            out.append(
                _Marking(
                    "nominal_number",
                    0,
                    labels.get("number", number),
                    spec.nominal_number.nominal_number_marking_strategy,
                )
            )
    return out


def _adjective_markings(
    index: _Index, spec: MorphosyntaxSpec, labels: FeatureLabelTable, idx: int
) -> list[_Marking]:
    tok = index.tokens[idx]
    out = []
    if spec.adjective_agreement is not None and tok.head_index is not None:
        head = index.tokens[tok.head_index]
        strategy = spec.adjective_agreement.adjective_agreement_strategy
        # agree only with what the noun itself is marked for
        for sub, category in enumerate(spec.adjective_agreement.adjective_agreement):
            if category == "number":
                value = _noun_number_value(spec, head)
                if value is not None:
                    out.append(_Marking("adjective_agreement", sub, labels.get("number", value), strategy))
            elif category == "case":
                case_label = _noun_case_label(index, spec, labels, tok.head_index)
                if case_label is not None:
                    out.append(_Marking("adjective_agreement", sub, case_label, strategy))
            elif category == "definiteness":
                value = _noun_definiteness_value(spec, head)
                if value is not None:
                    out.append(
                        _Marking("adjective_agreement", sub, labels.get("definiteness", value), strategy)
                    )
    if spec.comparative is not None and tok.features.degree in _DEGREE_VALUES:
        value = _DEGREE_VALUES[tok.features.degree]
        if value in spec.comparative.comparative:
            out.append(
                _Marking(
                    "comparative",
                    0,
                    labels.get("degree", value),
                    spec.comparative.comparative_marking_strategy,
                )
            )
    return out


def _agreement_label(
    index: _Index, spec: MorphosyntaxSpec, labels: FeatureLabelTable, verb_idx: int
) -> str | None:
    """Fused person(+number)(+case)(+clusivity) subject-agreement label."""
    if spec.person is None:
        return None
    subject = index.subject_of(verb_idx)
    if subject is None:
        return None
    features = index.tokens[subject].features
    person = features.person if features.person is not None else 3
    if _PERSON_NAMES[person] not in spec.person.person_agreement:
        return None
    number = _pick(features.number, spec.person.verbal_number_agreement, _NUMBER_FALLBACKS)
    if number is None:
        return None
    label = _PERSON_DIGITS[person] + labels.get("short_number", number)
    case_label = _noun_case_label(index, spec, labels, subject)
    if case_label is not None:
        label += case_label
    if (
        spec.inclusive_exclusive
        and person == 1
        and number in ("plural", "dual")
        and features.clusivity in ("incl", "excl")
    ):
        label += labels.get("clusivity", features.clusivity)
    return label


def _verb_markings(
    index: _Index, spec: MorphosyntaxSpec, labels: FeatureLabelTable, idx: int
) -> list[_Marking]:
    tok = index.tokens[idx]
    out = []
    if tok.features.is_infinitive:
        if spec.infinitive is not None:
            out.append(
                _Marking(
                    "infinitive",
                    0,
                    labels.get("infinitive", "infinitive"),
                    spec.infinitive.infinitive_marking_strategy,
                )
            )
        return out
    if spec.tense_aspect is not None:
        value = _pick(tok.features.tense_aspect, spec.tense_aspect.tense_aspect, _TENSE_FALLBACKS)
        if value is not None:
            out.append(
                _Marking(
                    "tense_aspect",
                    0,
                    labels.get("tense_aspect", value),
                    spec.tense_aspect.tense_aspect_marking_strategy,
                )
            )
    agreement = _agreement_label(index, spec, labels, idx)
    if agreement is not None:
        out.append(_Marking("person", 0, agreement, spec.person.person_marking_strategy))
    if spec.voice is not None and tok.features.voice == "passive" and "passive" in spec.voice.voice:
        out.append(
            _Marking("voice", 0, labels.get("voice", "passive"), spec.voice.voice_marking_strategy)
        )
    if (
        spec.mood is not None
        and tok.features.mood not in (None, "indicative")
        and tok.features.mood in spec.mood.mood
    ):
        out.append(
            _Marking("mood", 0, labels.get("mood", tok.features.mood), spec.mood.mood_marking_strategy)
        )
    return out


def _relativizer_target_and_strategy(
    index: _Index, spec: MorphosyntaxSpec, marker_idx: int
) -> tuple[int, str] | None:
    rel = spec.relativization
    if rel is None or rel.relativization_marking is None or rel.relativizer_morpheme is None:
        return None
    marker = index.tokens[marker_idx]
    if marker.head_index is None:
        return None
    rel_verb = marker.head_index
    if rel.relativization_marking == "head-marking":
        target = index.tokens[rel_verb].head_index
        if target is None:
            return None
    else:
        target = rel_verb
    position = rel.relativizer_position or "prepositional"
    if rel.relativizer_morpheme == "affix":
        strategy = "prefix" if position == "prepositional" else "suffix"
    else:
        strategy = "prepositional word" if position == "prepositional" else "postpositional word"
    return target, strategy


def mark_features(
    src: SourceSentence, spec: MorphosyntaxSpec, labels: FeatureLabelTable
) -> GlossSentence:
    """Attach feature labels to a reordered sentence.

    Stems are emitted as lemmas.  Same-side labels stack in feature-group
    order; standalone grammatical words surface as feature words directly
    before or after their head word.
    """
    index = _Index(src)
    markings: dict[int, list[_Marking]] = {i: [] for i in range(len(src.tokens))}
    emits_stem: dict[int, bool] = {}

    for i, tok in enumerate(src.tokens):
        if tok.role in ("SUBJ", "OBJ", "OBL", "POSS"):
            emits_stem[i] = True
            markings[i].extend(_noun_markings(index, spec, labels, i))
        elif tok.role == "ADJ":
            emits_stem[i] = True
            markings[i].extend(_adjective_markings(index, spec, labels, i))
        elif tok.role == "VERB":
            emits_stem[i] = True
            markings[i].extend(_verb_markings(index, spec, labels, i))
        elif tok.role in ("NUM", "ADP", "OTHER"):
            emits_stem[i] = True
        elif tok.role == "NEG":
            if spec.negation is None:
                emits_stem[i] = True
            elif tok.head_index is not None:
                markings[tok.head_index].append(
                    _Marking("negation", 0, labels.get("negation", "negation"), spec.negation)
                )
                emits_stem[i] = False
        elif tok.role == "REL-CLAUSE-MARKER":
            emits_stem[i] = False
            resolved = _relativizer_target_and_strategy(index, spec, i)
            if resolved is not None:
                target, strategy = resolved
                markings[target].append(
                    _Marking("relativization", 0, labels.get("relativizer", "relativizer"), strategy)
                )

    words: list[GlossWord] = []
    for i, tok in enumerate(src.tokens):
        if not emits_stem.get(i, False):
            continue
        inner_first = sorted(markings[i], key=lambda m: m.proximity)
        outer_first = list(reversed(inner_first))
        prefixes = tuple(m.label for m in outer_first if m.strategy == "prefix")
        suffixes = tuple(m.label for m in inner_first if m.strategy == "suffix")
        for m in outer_first:
            if m.strategy == "prepositional word":
                words.append(GlossWord(stem=m.label, is_feature_word=True))
        words.append(GlossWord(stem=tok.lemma, prefixes=prefixes, suffixes=suffixes))
        for m in inner_first:
            if m.strategy == "postpositional word":
                words.append(GlossWord(stem=m.label, is_feature_word=True))
    return GlossSentence(words=tuple(words))


def transform(
    src: SourceSentence, spec: MorphosyntaxSpec, labels: FeatureLabelTable
) -> GlossSentence:
    """reorder then mark_features."""
    return mark_features(reorder(src, spec), spec, labels)
