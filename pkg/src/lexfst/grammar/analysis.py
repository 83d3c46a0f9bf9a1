"""Morphological analysis records: upper-tape strings and display strings.

Upper tape (what the analyzer emits)::

    ओझा^आइन+Noun+SG+Fem        root ^ suffix, then tags
    चल^उ+Verb+Imp+SG+Masc
    ओझा+Noun+SG+Masc           bare root

Display form::

    ओझा(आइन) + Noun + SG + Feminine
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from lexfst.errors import MalformedAnalysis
from lexfst.symbols import nfc

BOUNDARY = "^"

POS_TAGS = ("Noun", "Adj", "Verb", "Pron", "Adv")
NUMBER_TAGS = ("SG", "PL")
GENDER_TAGS = ("Masc", "Fem")
MOOD_TAGS = ("Imp", "Opt")
ALL_TAGS = POS_TAGS + NUMBER_TAGS + GENDER_TAGS + MOOD_TAGS
MULTICHAR_TAGS = tuple("+" + t for t in ALL_TAGS)

_CATEGORY = {t: "pos" for t in POS_TAGS}
_CATEGORY.update({t: "number" for t in NUMBER_TAGS})
_CATEGORY.update({t: "gender" for t in GENDER_TAGS})
_CATEGORY.update({t: "mood" for t in MOOD_TAGS})

LONG_NAMES = {
    "Noun": "Noun", "Adj": "Adj", "Verb": "Verb", "Pron": "Pron", "Adv": "Adv",
    "SG": "SG", "PL": "PL",
    "Masc": "Masculine", "Fem": "Feminine",
    "Imp": "Imperative", "Opt": "Optative",
}

# spelling variants seen in hand-written analyses, lower-cased, dot stripped
_ALIASES = {
    "n": "Noun", "noun": "Noun",
    "adj": "Adj", "adjective": "Adj",
    "v": "Verb", "verb": "Verb",
    "pron": "Pron", "pronoun": "Pron",
    "adv": "Adv", "adverb": "Adv",
    "sg": "SG", "singular": "SG",
    "pl": "PL", "plural": "PL",
    "m": "Masc", "masc": "Masc", "masculine": "Masc",
    "f": "Fem", "fem": "Fem", "feminine": "Fem",
    "imp": "Imp", "imperative": "Imp",
    "opt": "Opt", "optative": "Opt",
}

_UPPER_SPLIT = re.compile(r"(\+[^+^]+)")


def canonical_tag(text: str) -> str | None:
    """Map any accepted tag spelling (``N``, ``Adj.``, ``+Fem``) to its short form."""
    key = text.strip().lstrip("+").rstrip(".").lower()
    return _ALIASES.get(key)


def tag_category(tag: str) -> str:
    return _CATEGORY[tag]


@dataclass(frozen=True)
class Analysis:
    root: str
    pos: str
    suffix: str | None = None
    number: str = "SG"
    gender: str | None = None
    mood: str | None = None

    def __post_init__(self):
        if not self.root:
            raise MalformedAnalysis("analysis has an empty root")
        if self.suffix == "":
            raise MalformedAnalysis("suffix must be None or non-empty")
        for value, allowed in ((self.pos, POS_TAGS), (self.number, NUMBER_TAGS)):
            if value not in allowed:
                raise MalformedAnalysis(f"invalid tag {value!r}")
        if self.gender is not None and self.gender not in GENDER_TAGS:
            raise MalformedAnalysis(f"invalid gender {self.gender!r}")
        if self.mood is not None and self.mood not in MOOD_TAGS:
            raise MalformedAnalysis(f"invalid mood {self.mood!r}")

    @property
    def tags(self) -> list[str]:
        """Tags in emission order: POS, mood, number, gender."""
        out = [self.pos]
        if self.mood:
            out.append(self.mood)
        out.append(self.number)
        if self.gender:
            out.append(self.gender)
        return out

    def upper(self) -> str:
        stem = self.root if self.suffix is None else f"{self.root}{BOUNDARY}{self.suffix}"
        return stem + "".join("+" + t for t in self.tags)

    def render(self) -> str:
        return render_analysis(self)


def parse_analysis(upper: str | Sequence[str]) -> Analysis:
    """Split an upper-tape string (or its tokens) into an :class:`Analysis`."""
    text = upper if isinstance(upper, str) else "".join(upper)
    parts = [p for p in _UPPER_SPLIT.split(text) if p]
    if not parts or parts[0].startswith("+"):
        raise MalformedAnalysis(f"no root in {text!r}")
    stem, tags = parts[0], parts[1:]
    if any(not t.startswith("+") for t in tags):
        raise MalformedAnalysis(f"material after tags in {text!r}")
    root, sep, suffix = stem.partition(BOUNDARY)
    if sep and (not suffix or BOUNDARY in suffix):
        raise MalformedAnalysis(f"bad morpheme boundary in {text!r}")
    fields: dict[str, str] = {}
    for raw in tags:
        tag = raw[1:]
        if tag not in _CATEGORY:
            raise MalformedAnalysis(f"unknown tag {raw!r} in {text!r}")
        cat = _CATEGORY[tag]
        if cat in fields:
            raise MalformedAnalysis(f"two {cat} tags in {text!r}")
        fields[cat] = tag
    if "pos" not in fields:
        raise MalformedAnalysis(f"no POS tag in {text!r}")
    return Analysis(root=root, suffix=suffix if sep else None, **fields)


def render_analysis(a: Analysis) -> str:
    head = a.root if a.suffix is None else f"{a.root}({a.suffix})"
    return " + ".join([head] + [LONG_NAMES[t] for t in a.tags])


_DISPLAY_HEAD = re.compile(r"^\s*([^()\s]+)\s*(?:\(\s*([^()\s]+)\s*\))?\s*$")


def parse_display(text: str) -> Analysis:
    """Parse a display-form analysis, tolerating tag abbreviations.

    ``ओझा + N + M`` and ``ओझा + Noun + SG + Masculine`` give the same
    record; a missing number defaults to SG.
    """
    head, *tags = nfc(text).split("+")
    m = _DISPLAY_HEAD.match(head)
    if not m:
        raise MalformedAnalysis(f"cannot read root(suffix) from {text!r}")
    fields: dict[str, str] = {}
    for raw in tags:
        tag = canonical_tag(raw)
        if tag is None:
            raise MalformedAnalysis(f"unknown tag {raw.strip()!r} in {text!r}")
        cat = _CATEGORY[tag]
        if cat in fields:
            raise MalformedAnalysis(f"two {cat} tags in {text!r}")
        fields[cat] = tag
    if "pos" not in fields:
        raise MalformedAnalysis(f"no POS tag in {text!r}")
    return Analysis(root=m.group(1), suffix=m.group(2), **fields)


def normalize_display(text: str) -> str:
    """Canonical display string for comparisons across spelling variants."""
    return render_analysis(parse_display(text))
