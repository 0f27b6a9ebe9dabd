"""Feature schema, built-in feature sets, deterministic transformer, prompts."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .engine import EngineError, MissingVerb, mark_features, reorder, transform
from .prompts import (
    PREVIOUS_OUTPUT,
    PromptLibrary,
    StructuringNeeded,
    TemplateMissing,
    build_cumulative_prompts,
    structure_output,
)
from .types import (
    GROUP_ORDER,
    AdjectiveAgreementSpec,
    CaseSpec,
    ComparativeSpec,
    DefinitenessSpec,
    FeatureLabelTable,
    InfinitiveSpec,
    MoodSpec,
    MorphosyntaxSpec,
    NominalNumberSpec,
    PersonSpec,
    RelativizationSpec,
    SourceSentence,
    SpecError,
    TenseAspectSpec,
    Token,
    TokenFeatures,
    UnknownFeatureSet,
    UnmappedFeatureValue,
    VoiceSpec,
    parse_source_corpus,
    parse_source_line,
    serialize_source_sentence,
)

__all__ = [
    "BUILTIN_FEATURE_SETS",
    "load_feature_set",
    "default_label_table",
    "EngineError",
    "MissingVerb",
    "mark_features",
    "reorder",
    "transform",
    "PromptLibrary",
    "StructuringNeeded",
    "TemplateMissing",
    "build_cumulative_prompts",
    "structure_output",
    "PREVIOUS_OUTPUT",
    "GROUP_ORDER",
    "MorphosyntaxSpec",
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
    "FeatureLabelTable",
    "SourceSentence",
    "Token",
    "TokenFeatures",
    "SpecError",
    "UnknownFeatureSet",
    "UnmappedFeatureValue",
    "parse_source_corpus",
    "parse_source_line",
    "serialize_source_sentence",
]

BUILTIN_FEATURE_SETS = (
    "arabic", "fijian", "french", "hixkaryana", "mizo",
    "turkish", "vietnamese", "welsh", "hard",
)


def _data_root():
    return resources.files("conlangkit") / "data"


def load_feature_set(name: str) -> MorphosyntaxSpec:
    """A built-in feature set by name, or any spec JSON by path."""
    if name in BUILTIN_FEATURE_SETS:
        raw = (_data_root() / "feature_sets" / f"{name}.json").read_text(encoding="utf-8")
        return MorphosyntaxSpec.from_dict(json.loads(raw))
    path = Path(name)
    if path.suffix == ".json" and path.is_file():
        return MorphosyntaxSpec.load(path)
    raise UnknownFeatureSet(
        f"{name!r} is not one of {BUILTIN_FEATURE_SETS} nor an existing spec file"
    )


def default_label_table() -> FeatureLabelTable:
    raw = (_data_root() / "label_table.json").read_text(encoding="utf-8")
    data = json.loads(raw)
    mapping = {}
    for feature, values in data.items():
        for value, label in values.items():
            mapping[(feature, value)] = label
    return FeatureLabelTable(mapping)


def default_prompt_library() -> PromptLibrary:
    return PromptLibrary(Path(str(_data_root() / "prompts" / "morphosyntax")))
