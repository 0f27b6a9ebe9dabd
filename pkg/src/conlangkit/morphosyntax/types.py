"""Morphosyntactic feature schema, label table, and annotated source sentences.

The feature schema mirrors the grammar-parameter structure: five word-order
settings plus per-feature-group configurations, each value drawn from a
closed domain and each morphological group carrying a marking strategy
(prefix, suffix, prepositional word, postpositional word).
"""

from __future__ import annotations

import json
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from ..gloss import is_feature_label

__all__ = [
    "SpecError",
    "UnknownFeatureSet",
    "UnmappedFeatureValue",
    "STRATEGIES",
    "CaseSpec",
    "DefinitenessSpec",
    "AdjectiveAgreementSpec",
    "ComparativeSpec",
    "TenseAspectSpec",
    "NominalNumberSpec",
    "PersonSpec",
    "VoiceSpec",
    "MoodSpec",
    "RelativizationSpec",
    "InfinitiveSpec",
    "MorphosyntaxSpec",
    "FeatureLabelTable",
    "TokenFeatures",
    "Token",
    "SourceSentence",
    "parse_source_line",
    "parse_source_corpus",
    "serialize_source_sentence",
    "GROUP_ORDER",
]


class SpecError(ValueError):
    pass


class UnknownFeatureSet(KeyError):
    pass


class UnmappedFeatureValue(KeyError):
    """A configured feature value has no entry in the label table."""


STRATEGIES = ("prefix", "suffix", "prepositional word", "postpositional word")
WORD_ORDERS = ("SOV", "SVO", "VSO", "VOS", "OSV", "OVS")
CASES = (
    "nominative", "accusative", "dative", "genitive", "ablative",
    "locative", "instrumental", "ergative", "absolutive",
)
DEFINITENESS_VALUES = ("definite", "indefinite")
AGREEMENT_CATEGORIES = ("number", "case", "definiteness")
DEGREES = ("comparative", "superlative", "equative")
TENSE_ASPECTS = (
    "present", "past", "future", "perfect", "imperfect",
    "immediate past", "recent past", "remote past", "nonpast",
)
NUMBERS = ("singular", "plural", "dual", "paucal")
PERSONS = ("first", "second", "third")
VOICES = ("active", "passive")
MOODS = ("indicative", "subjunctive", "imperative", "conditional")

# Feature groups in their canonical application order; prompt steps and
# same-side affix stacking both follow it.
GROUP_ORDER = (
    "case",
    "definiteness",
    "adjective_agreement",
    "comparative",
    "tense_aspect",
    "nominal_number",
    "person",
    "voice",
    "mood",
    "relativization",
    "negation",
    "infinitive",
)


def _check_values(name: str, values: Sequence[str], domain: Sequence[str]) -> tuple[str, ...]:
    out = tuple(values)
    for v in out:
        if v not in domain:
            raise SpecError(f"{name}: {v!r} not in {domain}")
    if len(set(out)) != len(out):
        raise SpecError(f"{name}: duplicate values")
    return out


def _check_strategy(name: str, strategy: str) -> str:
    if strategy not in STRATEGIES:
        raise SpecError(f"{name}: unknown strategy {strategy!r}")
    return strategy


@dataclass(frozen=True)
class CaseSpec:
    case_marking: tuple[str, ...]
    case_marking_strategy: str
    oblique_case_marking: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "case_marking", _check_values("case_marking", self.case_marking, CASES))
        _check_strategy("case", self.case_marking_strategy)
        if self.oblique_case_marking is not None and self.oblique_case_marking not in self.case_marking:
            raise SpecError(
                f"oblique_case_marking {self.oblique_case_marking!r} not in case_marking"
            )


@dataclass(frozen=True)
class DefinitenessSpec:
    definiteness: tuple[str, ...]
    definiteness_marking_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "definiteness", _check_values("definiteness", self.definiteness, DEFINITENESS_VALUES))
        _check_strategy("definiteness", self.definiteness_marking_strategy)


@dataclass(frozen=True)
class AdjectiveAgreementSpec:
    adjective_agreement: tuple[str, ...]
    adjective_agreement_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "adjective_agreement", _check_values("adjective_agreement", self.adjective_agreement, AGREEMENT_CATEGORIES))
        _check_strategy("adjective_agreement", self.adjective_agreement_strategy)


@dataclass(frozen=True)
class ComparativeSpec:
    comparative: tuple[str, ...]
    comparative_marking_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "comparative", _check_values("comparative", self.comparative, DEGREES))
        _check_strategy("comparative", self.comparative_marking_strategy)


@dataclass(frozen=True)
class TenseAspectSpec:
    tense_aspect: tuple[str, ...]
    tense_aspect_marking_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "tense_aspect", _check_values("tense_aspect", self.tense_aspect, TENSE_ASPECTS))
        _check_strategy("tense_aspect", self.tense_aspect_marking_strategy)


@dataclass(frozen=True)
class NominalNumberSpec:
    nominal_number: tuple[str, ...]
    nominal_number_marking_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "nominal_number", _check_values("nominal_number", self.nominal_number, NUMBERS))
        _check_strategy("nominal_number", self.nominal_number_marking_strategy)


@dataclass(frozen=True)
class PersonSpec:
    person_agreement: tuple[str, ...]
    person_marking_strategy: str
    verbal_number_agreement: tuple[str, ...] = ()
    verbal_number_marking_strategy: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "person_agreement", _check_values("person_agreement", self.person_agreement, PERSONS))
        _check_strategy("person", self.person_marking_strategy)
        object.__setattr__(self, "verbal_number_agreement", _check_values("verbal_number_agreement", self.verbal_number_agreement, NUMBERS))
        if self.verbal_number_marking_strategy is not None:
            _check_strategy("verbal_number", self.verbal_number_marking_strategy)


@dataclass(frozen=True)
class VoiceSpec:
    voice: tuple[str, ...]
    voice_marking_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "voice", _check_values("voice", self.voice, VOICES))
        _check_strategy("voice", self.voice_marking_strategy)


@dataclass(frozen=True)
class MoodSpec:
    mood: tuple[str, ...]
    mood_marking_strategy: str

    def __post_init__(self):
        object.__setattr__(self, "mood", _check_values("mood", self.mood, MOODS))
        _check_strategy("mood", self.mood_marking_strategy)


@dataclass(frozen=True)
class RelativizationSpec:
    relativization_order: str  # head-initial | head-final
    relativization_marking: str | None  # head-marking | dependent-marking
    relativizer_position: str | None  # prepositional | postpositional
    relativizer_morpheme: str | None  # affix | word

    def __post_init__(self):
        if self.relativization_order not in ("head-initial", "head-final"):
            raise SpecError(f"relativization_order {self.relativization_order!r}")
        if self.relativization_marking not in (None, "head-marking", "dependent-marking"):
            raise SpecError(f"relativization_marking {self.relativization_marking!r}")
        if self.relativizer_position not in (None, "prepositional", "postpositional"):
            raise SpecError(f"relativizer_position {self.relativizer_position!r}")
        if self.relativizer_morpheme not in (None, "affix", "word"):
            raise SpecError(f"relativizer_morpheme {self.relativizer_morpheme!r}")


@dataclass(frozen=True)
class InfinitiveSpec:
    infinitive: str = "infinitive"
    infinitive_marking_strategy: str = "suffix"

    def __post_init__(self):
        if self.infinitive != "infinitive":
            raise SpecError(f"infinitive {self.infinitive!r}")
        _check_strategy("infinitive", self.infinitive_marking_strategy)


@dataclass(frozen=True)
class MorphosyntaxSpec:
    main_word_order: str
    adj_noun_word_order: str
    posspron_noun_word_order: str
    num_noun_word_order: str
    adposition_noun_word_order: str
    case: CaseSpec | None = None
    definiteness: DefinitenessSpec | None = None
    adjective_agreement: AdjectiveAgreementSpec | None = None
    comparative: ComparativeSpec | None = None
    tense_aspect: TenseAspectSpec | None = None
    nominal_number: NominalNumberSpec | None = None
    person: PersonSpec | None = None
    inclusive_exclusive: bool = False
    voice: VoiceSpec | None = None
    mood: MoodSpec | None = None
    relativization: RelativizationSpec | None = None
    negation: str | None = None  # a marking strategy
    infinitive: InfinitiveSpec | None = None
    extras: tuple[str, ...] = ()

    def __post_init__(self):
        checks = {
            "main_word_order": WORD_ORDERS,
            "adj_noun_word_order": ("NA", "AN"),
            "posspron_noun_word_order": ("PossN", "NPoss"),
            "num_noun_word_order": ("NumN", "NNum"),
            "adposition_noun_word_order": ("PN", "NP"),
        }
        for name, domain in checks.items():
            if getattr(self, name) not in domain:
                raise SpecError(f"{name} {getattr(self, name)!r} not in {domain}")
        if self.negation is not None:
            _check_strategy("negation", self.negation)
        object.__setattr__(self, "extras", tuple(self.extras))
        if self.inclusive_exclusive:
            if self.person is None or "first" not in self.person.person_agreement:
                raise SpecError("inclusive_exclusive needs first-person agreement")
            if not set(self.person.verbal_number_agreement) & {"plural", "dual"}:
                raise SpecError(
                    "inclusive_exclusive needs verbal number agreement with plural or dual"
                )

    # -- persistence (field names match the schema exactly) ---------------

    def to_dict(self) -> dict:
        def group(value):
            if value is None:
                return None
            d = {}
            for k, v in vars(value).items():
                d[k] = list(v) if isinstance(v, tuple) else v
            return d

        return {
            "main_word_order": self.main_word_order,
            "adj_noun_word_order": self.adj_noun_word_order,
            "posspron_noun_word_order": self.posspron_noun_word_order,
            "num_noun_word_order": self.num_noun_word_order,
            "adposition_noun_word_order": self.adposition_noun_word_order,
            "case": group(self.case),
            "definiteness": group(self.definiteness),
            "adjective_agreement": group(self.adjective_agreement),
            "comparative": group(self.comparative),
            "tense_aspect": group(self.tense_aspect),
            "nominal_number": group(self.nominal_number),
            "person": group(self.person),
            "inclusive_exclusive": self.inclusive_exclusive,
            "voice": group(self.voice),
            "mood": group(self.mood),
            "relativization": group(self.relativization),
            "negation": self.negation,
            "infinitive": group(self.infinitive),
            "extras": list(self.extras),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MorphosyntaxSpec":
        def group(klass, value):
            return None if value is None else klass(**value)

        return cls(
            main_word_order=data["main_word_order"],
            adj_noun_word_order=data["adj_noun_word_order"],
            posspron_noun_word_order=data["posspron_noun_word_order"],
            num_noun_word_order=data["num_noun_word_order"],
            adposition_noun_word_order=data["adposition_noun_word_order"],
            case=group(CaseSpec, data.get("case")),
            definiteness=group(DefinitenessSpec, data.get("definiteness")),
            adjective_agreement=group(AdjectiveAgreementSpec, data.get("adjective_agreement")),
            comparative=group(ComparativeSpec, data.get("comparative")),
            tense_aspect=group(TenseAspectSpec, data.get("tense_aspect")),
            nominal_number=group(NominalNumberSpec, data.get("nominal_number")),
            person=group(PersonSpec, data.get("person")),
            inclusive_exclusive=bool(data.get("inclusive_exclusive", False)),
            voice=group(VoiceSpec, data.get("voice")),
            mood=group(MoodSpec, data.get("mood")),
            relativization=group(RelativizationSpec, data.get("relativization")),
            negation=data.get("negation"),
            infinitive=group(InfinitiveSpec, data.get("infinitive")),
            extras=tuple(data.get("extras", ())),
        )

    @classmethod
    def load(cls, path: str | Path) -> "MorphosyntaxSpec":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


# --------------------------------------------------------------------------
# Label table


class FeatureLabelTable:
    """Canonical map from (feature, value) to a gloss label, e.g.
    ("number", "plural") -> PLUR.  Injective over the pairs in use.

    The "short_number" feature holds the compact forms used inside fused
    agreement labels (3SGERG-style); "short_person" the person digits.
    """

    def __init__(self, mapping: Mapping[tuple[str, str], str]):
        self._mapping = dict(mapping)
        seen: dict[str, tuple[str, str]] = {}
        for pair, label in self._mapping.items():
            if not is_feature_label(label):
                raise SpecError(f"label {label!r} for {pair} is not a valid feature label")
            if label in seen and seen[label] != pair:
                raise SpecError(f"label {label!r} maps from both {seen[label]} and {pair}")
            seen[label] = pair

    def get(self, feature: str, value: str) -> str:
        try:
            return self._mapping[(feature, value)]
        except KeyError:
            raise UnmappedFeatureValue(f"no label for ({feature}, {value})") from None

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self._mapping

    @classmethod
    def load(cls, path: str | Path) -> "FeatureLabelTable":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        mapping = {}
        for feature, values in data.items():
            for value, label in values.items():
                mapping[(feature, value)] = label
        return cls(mapping)

    def to_dict(self) -> dict:
        out: dict[str, dict[str, str]] = {}
        for (feature, value), label in sorted(self._mapping.items()):
            out.setdefault(feature, {})[value] = label
        return out


# --------------------------------------------------------------------------
# Annotated source sentences


ROLES = (
    "SUBJ", "OBJ", "VERB", "ADJ", "NUM", "POSS", "ADP", "OBL",
    "NEG", "REL-CLAUSE-MARKER", "OTHER",
)
CLUSIVITIES = ("incl", "excl", "n/a")
TOKEN_DEGREES = ("pos", "cmp", "sup", "eqt")


@dataclass(frozen=True)
class TokenFeatures:
    number: str | None = None
    person: int | None = None
    clusivity: str | None = None
    tense_aspect: str | None = None
    mood: str | None = None
    voice: str | None = None
    definiteness: str | None = None
    degree: str | None = None
    is_transitive_clause: bool = False
    is_infinitive: bool = False

    def __post_init__(self):
        if self.number is not None and self.number not in NUMBERS:
            raise SpecError(f"number {self.number!r}")
        if self.person is not None and self.person not in (1, 2, 3):
            raise SpecError(f"person {self.person!r}")
        if self.clusivity is not None and self.clusivity not in CLUSIVITIES:
            raise SpecError(f"clusivity {self.clusivity!r}")
        if self.tense_aspect is not None and self.tense_aspect not in TENSE_ASPECTS:
            raise SpecError(f"tense_aspect {self.tense_aspect!r}")
        if self.mood is not None and self.mood not in MOODS:
            raise SpecError(f"mood {self.mood!r}")
        if self.voice is not None and self.voice not in VOICES:
            raise SpecError(f"voice {self.voice!r}")
        if self.definiteness is not None and self.definiteness not in DEFINITENESS_VALUES:
            raise SpecError(f"definiteness {self.definiteness!r}")
        if self.degree is not None and self.degree not in TOKEN_DEGREES:
            raise SpecError(f"degree {self.degree!r}")


@dataclass(frozen=True)
class Token:
    lemma: str
    role: str
    head_index: int | None = None
    features: TokenFeatures = field(default_factory=TokenFeatures)

    def __post_init__(self):
        if self.role not in ROLES:
            raise SpecError(f"unknown role {self.role!r}")
        if not self.lemma:
            raise SpecError("empty lemma")


@dataclass(frozen=True)
class SourceSentence:
    tokens: tuple[Token, ...]
    text: str | None = None  # original English, when known

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for t in self.tokens:
            if t.head_index is not None and not 0 <= t.head_index < len(self.tokens):
                raise SpecError(f"head index {t.head_index} out of range")

    def verbs(self) -> list[int]:
        return [i for i, t in enumerate(self.tokens) if t.role == "VERB"]


# Bracketed token notation: [lemma|ROLE|head=k|feat=val,...] with bare
# "transitive" / "infinitive" flags in the feature field.
_TOKEN_RE = re.compile(r"\[([^\[\]]*)\]")

_FLAG_FIELDS = {"transitive": "is_transitive_clause", "infinitive": "is_infinitive"}


def parse_source_line(line: str, text: str | None = None) -> SourceSentence:
    groups = _TOKEN_RE.findall(line)
    if not groups or _TOKEN_RE.sub("", line).strip():
        raise SpecError(f"malformed source line: {line!r}")
    tokens = []
    for raw in groups:
        fields = raw.split("|")
        if len(fields) < 2:
            raise SpecError(f"token needs lemma|ROLE: {raw!r}")
        lemma, role = fields[0].strip(), fields[1].strip()
        head = None
        feature_kwargs: dict = {}
        for extra in fields[2:]:
            extra = extra.strip()
            if not extra:
                continue
            if extra.startswith("head="):
                head = int(extra[len("head="):])
                continue
            for part in extra.split(","):
                part = part.strip()
                if not part:
                    continue
                if part in _FLAG_FIELDS:
                    feature_kwargs[_FLAG_FIELDS[part]] = True
                elif "=" in part:
                    key, value = part.split("=", 1)
                    key, value = key.strip(), value.strip()
                    if key == "person":
                        feature_kwargs[key] = int(value)
                    elif key in _FLAG_FIELDS.values():
                        feature_kwargs[key] = value.lower() == "true"
                    else:
                        feature_kwargs[key] = value
                else:
                    raise SpecError(f"unparseable feature {part!r} in {raw!r}")
        tokens.append(
            Token(lemma=lemma, role=role, head_index=head, features=TokenFeatures(**feature_kwargs))
        )
    return SourceSentence(tokens=tuple(tokens), text=text)


def serialize_source_sentence(sentence: SourceSentence) -> str:
    parts = []
    for t in sentence.tokens:
        fields = [t.lemma, t.role]
        if t.head_index is not None:
            fields.append(f"head={t.head_index}")
        feats = []
        f = t.features
        for name in ("number", "person", "clusivity", "tense_aspect", "mood",
                     "voice", "definiteness", "degree"):
            value = getattr(f, name)
            if value is not None:
                feats.append(f"{name}={value}")
        if f.is_transitive_clause:
            feats.append("transitive")
        if f.is_infinitive:
            feats.append("infinitive")
        if feats:
            fields.append(",".join(feats))
        parts.append("[" + "|".join(fields) + "]")
    return " ".join(parts)


def parse_source_corpus(path: str | Path) -> list[SourceSentence]:
    """One sentence per line; '#' comment lines and blanks skipped.

    A line may carry the original English after a tab:
    "<bracketed tokens>\\t<english>".
    """
    sentences = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        text = None
        if "\t" in line:
            line, text = line.split("\t", 1)
            text = text.strip()
        sentences.append(parse_source_line(line.strip(), text=text))
    return sentences
