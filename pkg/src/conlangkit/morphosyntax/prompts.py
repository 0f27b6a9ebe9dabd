"""Cumulative prompt assembly and structuring of raw model output.

Each active feature group becomes one prompt, filled from the spec; only
the first prompt embeds the source sentence, later ones carry the
PREVIOUS_OUTPUT sentinel for the runner to substitute with the prior
step's result.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from pathlib import Path

from ..gloss import GlossError, GlossSentence, parse_gloss
from .types import GROUP_ORDER, MorphosyntaxSpec

__all__ = [
    "TemplateMissing",
    "StructuringNeeded",
    "PromptLibrary",
    "build_cumulative_prompts",
    "structure_output",
    "PREVIOUS_OUTPUT",
]

# Deliberately not brace-delimited: finished prompts must contain no
# residual {...} slots.
PREVIOUS_OUTPUT = "<<PREVIOUS_OUTPUT>>"


class TemplateMissing(FileNotFoundError):
    pass


class StructuringNeeded(ValueError):
    """No line of the raw output parses as a gloss; an LLM fallback may help."""

    def __init__(self, raw: str):
        excerpt = raw.strip().splitlines()[-1][:80] if raw.strip() else ""
        super().__init__(f"no parseable gloss line (last line: {excerpt!r})")
        self.raw = raw


class PromptLibrary:
    """Named .txt templates with {slot} placeholders, loaded from a directory."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise TemplateMissing(f"prompt directory {self.directory} does not exist")

    def render(self, name: str, values: Mapping[str, str]) -> str:
        path = self.directory / f"{name}.txt"
        if not path.is_file():
            raise TemplateMissing(f"template {name}.txt not found in {self.directory}")
        text = path.read_text(encoding="utf-8").format(**values)
        residue = re.search(r"\{[a-z_]+\}", text)
        if residue:
            raise TemplateMissing(f"unfilled slot {residue.group()} in template {name}")
        return text


def _join(values) -> str:
    return ", ".join(values)


def build_cumulative_prompts(
    spec: MorphosyntaxSpec, source_text: str, templates: PromptLibrary
) -> list[str]:
    """One prompt per active feature group, word order first, then the
    morphology groups in schema order, then any extras."""
    steps: list[tuple[str, dict[str, str]]] = [
        (
            "word_order",
            {
                "main_word_order": spec.main_word_order,
                "adj_noun_word_order": spec.adj_noun_word_order,
                "posspron_noun_word_order": spec.posspron_noun_word_order,
                "num_noun_word_order": spec.num_noun_word_order,
                "adposition_noun_word_order": spec.adposition_noun_word_order,
            },
        )
    ]
    for group in GROUP_ORDER:
        value = getattr(spec, group)
        if value is None:
            continue
        if group == "case":
            values = {
                "case_values": _join(value.case_marking),
                "case_strategy": value.case_marking_strategy,
                "oblique_case": value.oblique_case_marking or "none",
            }
        elif group == "definiteness":
            values = {
                "definiteness_values": _join(value.definiteness),
                "definiteness_strategy": value.definiteness_marking_strategy,
            }
        elif group == "adjective_agreement":
            values = {
                "agreement_categories": _join(value.adjective_agreement),
                "agreement_strategy": value.adjective_agreement_strategy,
            }
        elif group == "comparative":
            values = {
                "comparative_values": _join(value.comparative),
                "comparative_strategy": value.comparative_marking_strategy,
            }
        elif group == "tense_aspect":
            values = {
                "tense_aspect_values": _join(value.tense_aspect),
                "tense_aspect_strategy": value.tense_aspect_marking_strategy,
            }
        elif group == "nominal_number":
            values = {
                "number_values": _join(value.nominal_number),
                "number_strategy": value.nominal_number_marking_strategy,
            }
        elif group == "person":
            clusivity_note = (
                "Split first-person non-singular agreement into inclusive (INCL) "
                "and exclusive (EXCL) forms."
                if spec.inclusive_exclusive
                else "Do not distinguish inclusive and exclusive forms."
            )
            values = {
                "person_values": _join(value.person_agreement),
                "person_strategy": value.person_marking_strategy,
                "verbal_number_values": _join(value.verbal_number_agreement) or "none",
                "verbal_number_strategy": value.verbal_number_marking_strategy or "none",
                "clusivity_note": clusivity_note,
            }
        elif group == "voice":
            values = {
                "voice_values": _join(value.voice),
                "voice_strategy": value.voice_marking_strategy,
            }
        elif group == "mood":
            values = {
                "mood_values": _join(value.mood),
                "mood_strategy": value.mood_marking_strategy,
            }
        elif group == "relativization":
            values = {
                "relativization_order": value.relativization_order,
                "relativization_marking": value.relativization_marking or "none",
                "relativizer_position": value.relativizer_position or "none",
                "relativizer_morpheme": value.relativizer_morpheme or "none",
            }
        elif group == "negation":
            values = {"negation_strategy": value}
        elif group == "infinitive":
            values = {"infinitive_strategy": value.infinitive_marking_strategy}
        else:
            continue
        steps.append((group, values))
    for extra in spec.extras:
        steps.append(("extra", {"instruction": extra}))

    prompts = []
    for i, (name, values) in enumerate(steps):
        values = dict(values)
        values["input_sentence"] = source_text if i == 0 else PREVIOUS_OUTPUT
        prompts.append(templates.render(name, values))
    return prompts


def _candidate_lines(raw: str):
    for line in reversed(raw.splitlines()):
        line = line.strip().strip("`").strip()
        if line:
            yield line


def structure_output(raw: str) -> GlossSentence:
    """Deterministic extraction: the last line that parses as a gloss.

    Lines carrying morphology (a feature label or hyphenated morphemes)
    win over bare-stem lines, so trailing commentary that happens to
    tokenize does not shadow the real gloss.  Raises StructuringNeeded
    when nothing parses.
    """
    bare_fallback: GlossSentence | None = None
    for line in _candidate_lines(raw):
        try:
            sentence = parse_gloss(line)
        except GlossError:
            continue
        if not sentence.words:
            continue
        has_morphology = any(
            w.is_feature_word or w.prefixes or w.suffixes for w in sentence.words
        )
        if has_morphology:
            return sentence
        if bare_fallback is None:
            bare_fallback = sentence
    if bare_fallback is not None:
        return bare_fallback
    raise StructuringNeeded(raw)
