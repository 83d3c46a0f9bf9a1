"""Root and suffix dictionaries, listed forms, and the analyzer builder.

File formats (UTF-8, tab separated, ``#`` starts a comment line):

``roots.tsv``
    ``lemma  pos  class  [gender]``
``suffixes.tsv``
    ``form  class  features`` where features is a comma-separated list such
    as ``+Fem,+SG``; ``@class  name  pos`` declares a class up front (needed
    for classes that have no suffixes yet).
``listed.tsv``
    ``surface  upper-analysis``: forms related to their analysis directly,
    bypassing the rewrite rules. A listed form replaces the regular
    derivation of the same analysis.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from lexfst.errors import MalformedAnalysis, ParseError, UnknownClass, UnknownTag
from lexfst.fst import Transducer, compose, from_pair, minimize, union, union_all
from lexfst.grammar.analysis import (
    BOUNDARY,
    MULTICHAR_TAGS,
    Analysis,
    canonical_tag,
    parse_analysis,
    tag_category,
)
from lexfst.lexc import END, ROOT, LexEntry, LexiconAst, compile_lexicon
from lexfst.rules import RewriteRule, compile_rule_cascade, load_rules
from lexfst.symbols import SymbolTable, nfc

log = logging.getLogger(__name__)

_POS_NAMES = {
    "noun": "Noun", "n": "Noun",
    "adjective": "Adj", "adj": "Adj",
    "verb": "Verb", "v": "Verb",
    "pronoun": "Pron", "pron": "Pron",
    "adverb": "Adv", "adv": "Adv",
}


@dataclass(frozen=True)
class RootEntry:
    lemma: str
    pos: str
    inflection_class: str
    inherent_gender: str | None = None


@dataclass(frozen=True)
class SuffixEntry:
    form: str
    features: tuple[str, ...]
    applicable_class: str

    def feature(self, category: str) -> str | None:
        for tag in self.features:
            if tag_category(tag) == category:
                return tag
        return None


@dataclass(frozen=True)
class ListedForm:
    surface: str
    analysis: Analysis


@dataclass(frozen=True)
class InflectionClass:
    name: str
    pos: str | None


def _rows(path) -> Iterator[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, [nfc(f.strip()) for f in line.split("\t")]


def _pos(text, lineno, path):
    pos = _POS_NAMES.get(text.lower().lstrip("+").rstrip("."))
    if pos is None:
        raise UnknownTag(lineno, f"unknown part of speech {text!r}", path)
    return pos


def load_suffixes(path) -> tuple[list[SuffixEntry], dict[str, InflectionClass]]:
    suffixes: list[SuffixEntry] = []
    classes: dict[str, InflectionClass] = {}
    seen = set()
    for lineno, fields in _rows(path):
        if fields[0] == "@class":
            if len(fields) not in (2, 3) or not fields[1]:
                raise ParseError(lineno, "expected '@class<TAB>name<TAB>pos'", path)
            pos = _pos(fields[2], lineno, path) if len(fields) == 3 and fields[2] else None
            old = classes.get(fields[1])
            if old is not None and old.pos not in (None, pos):
                raise ParseError(lineno, f"class {fields[1]!r} redeclared with another POS", path)
            classes[fields[1]] = InflectionClass(fields[1], pos)
            continue
        if len(fields) != 3 or not all(fields):
            raise ParseError(lineno, "expected 'form<TAB>class<TAB>features'", path)
        form, cls, feats = fields
        if BOUNDARY in form or "+" in form:
            raise ParseError(lineno, f"suffix form {form!r} contains a reserved symbol", path)
        tags, cats = [], set()
        for raw in feats.split(","):
            tag = canonical_tag(raw) if raw.strip().startswith("+") else None
            if tag is None:
                raise UnknownTag(lineno, f"unknown feature tag {raw.strip()!r}", path)
            cat = tag_category(tag)
            if cat == "pos":
                raise UnknownTag(lineno, f"POS tag {raw.strip()!r} belongs on roots", path)
            if cat in cats:
                raise ParseError(lineno, f"two {cat} tags in {feats!r}", path)
            cats.add(cat)
            tags.append(tag)
        entry = SuffixEntry(form, tuple(tags), cls)
        key = (form, cls, frozenset(tags))
        if key in seen:
            log.warning("%s:%d: duplicate suffix %s/%s ignored", path, lineno, form, cls)
            continue
        seen.add(key)
        suffixes.append(entry)
        classes.setdefault(cls, InflectionClass(cls, None))
    return suffixes, classes


def load_roots(path, classes: dict[str, InflectionClass]) -> list[RootEntry]:
    roots: list[RootEntry] = []
    seen = set()
    for lineno, fields in _rows(path):
        while len(fields) > 3 and not fields[-1]:
            fields.pop()
        if len(fields) not in (3, 4) or not all(fields[:3]):
            raise ParseError(lineno, "expected 'lemma<TAB>pos<TAB>class[<TAB>gender]'", path)
        lemma, pos_text, cls = fields[:3]
        pos = _pos(pos_text, lineno, path)
        gender = None
        if len(fields) == 4 and fields[3] not in ("", "-"):
            gender = canonical_tag(fields[3])
            if gender is None or tag_category(gender) != "gender":
                raise UnknownTag(lineno, f"unknown gender {fields[3]!r}", path)
        decl = classes.get(cls)
        if decl is None:
            raise UnknownClass(lineno, f"undeclared inflection class {cls!r}", path)
        if decl.pos is not None and decl.pos != pos:
            raise UnknownClass(lineno, f"class {cls!r} is declared for {decl.pos}, not {pos}", path)
        if BOUNDARY in lemma or "+" in lemma:
            raise ParseError(lineno, f"lemma {lemma!r} contains a reserved symbol", path)
        entry = RootEntry(lemma, pos, cls, gender)
        if entry in seen:
            log.warning("%s:%d: duplicate root %s ignored", path, lineno, lemma)
            continue
        seen.add(entry)
        roots.append(entry)
    return roots


def load_dictionaries(root_file, suffix_file) -> tuple[list[RootEntry], list[SuffixEntry]]:
    suffixes, classes = load_suffixes(suffix_file)
    return load_roots(root_file, classes), suffixes


def load_listed(path) -> list[ListedForm]:
    out = []
    for lineno, fields in _rows(path):
        if len(fields) != 2 or not all(fields):
            raise ParseError(lineno, "expected 'surface<TAB>analysis'", path)
        try:
            analysis = parse_analysis(fields[1])
        except MalformedAnalysis as exc:
            raise UnknownTag(lineno, str(exc), path) from None
        out.append(ListedForm(fields[0], analysis))
    return out


# -- analyzer construction ---------------------------------------------------

def regular_analyses(roots: Iterable[RootEntry], suffixes: Sequence[SuffixEntry]
                     ) -> Iterator[tuple[RootEntry, SuffixEntry | None, Analysis]]:
    """Every analysis the dictionaries license, bare roots included.

    A bare (unsuffixed) analysis exists for roots with an inherent gender.
    """
    by_class: dict[str, list[SuffixEntry]] = {}
    for s in suffixes:
        by_class.setdefault(s.applicable_class, []).append(s)
    for r in roots:
        if r.inherent_gender:
            yield r, None, Analysis(r.lemma, r.pos, None, "SG", r.inherent_gender)
        for s in by_class.get(r.inflection_class, ()):
            yield r, s, Analysis(
                r.lemma, r.pos, s.form,
                number=s.feature("number") or "SG",
                gender=s.feature("gender") or r.inherent_gender,
                mood=s.feature("mood"),
            )


def _tag_string(a: Analysis) -> str:
    return "".join("+" + t for t in a.tags)


def lexicon_ast(roots: Sequence[RootEntry], suffixes: Sequence[SuffixEntry],
                listed: Sequence[ListedForm] = ()) -> LexiconAst:
    """Root lexicon plus one continuation lexicon per distinct suffix set.

    Tags follow the suffix on the upper side and are deleted on the lower
    side; the boundary ``^`` stays on both sides for the rules to see.
    """
    replaced = {lf.analysis for lf in listed}
    ast = LexiconAst(multichar_symbols=list(MULTICHAR_TAGS) + [BOUNDARY])
    root_entries: list[LexEntry] = []
    ast.lexicons[ROOT] = root_entries
    by_root: dict[RootEntry, list[LexEntry]] = {}
    for r, s, a in regular_analyses(roots, suffixes):
        if a in replaced:
            continue
        if s is None:
            entry = LexEntry(_tag_string(a), "", END)
        else:
            stem = BOUNDARY + s.form
            entry = LexEntry(stem + _tag_string(a), stem, END)
        by_root.setdefault(r, []).append(entry)
    names: dict[tuple[LexEntry, ...], str] = {}
    for r in dict.fromkeys(roots):
        entries = tuple(by_root.get(r, ()))
        if not entries:
            continue
        name = names.get(entries)
        if name is None:
            base = f"{r.pos}_{r.inflection_class}_{r.inherent_gender or 'X'}"
            name = base
            k = 1
            while name in ast.lexicons:
                k += 1
                name = f"{base}_{k}"
            names[entries] = name
            ast.lexicons[name] = list(entries)
        root_entries.append(LexEntry(r.lemma, r.lemma, name))
    return ast


def lower_alphabet(t: Transducer) -> list[str]:
    used = {a.lower for arcs in t.arcs for a in arcs if a.lower}
    return [t.symbols.text_of(i) for i in sorted(used)]


def listed_transducer(listed: Sequence[ListedForm]) -> Transducer:
    table = SymbolTable(list(MULTICHAR_TAGS) + [BOUNDARY])
    parts = []
    for lf in listed:
        upper = lf.analysis.upper()
        tokens = table.extended(upper).tokenize(upper)
        parts.append(from_pair(tokens, list(lf.surface)))
    return union_all(parts, table)


def build_analyzer(roots: Sequence[RootEntry], suffixes: Sequence[SuffixEntry],
                   rules: Sequence[RewriteRule], listed: Sequence[ListedForm] = ()) -> Transducer:
    """Lexicon composed over the rule cascade, plus listed forms, minimized."""
    lex = compile_lexicon(lexicon_ast(roots, suffixes, listed))
    cascade = compile_rule_cascade(rules, lower_alphabet(lex))
    analyzer = compose(lex, cascade)
    if listed:
        analyzer = union(analyzer, listed_transducer(listed))
    return minimize(analyzer)


@dataclass
class Grammar:
    roots: list[RootEntry]
    suffixes: list[SuffixEntry]
    rules: list[RewriteRule]
    listed: list[ListedForm]

    def analyses(self) -> list[Analysis]:
        """Every analysis the grammar generates (regular and listed)."""
        out = [a for _, _, a in regular_analyses(self.roots, self.suffixes)]
        out.extend(lf.analysis for lf in self.listed if lf.analysis not in out)
        return out

    def build(self) -> Transducer:
        return build_analyzer(self.roots, self.suffixes, self.rules, self.listed)


def load_grammar(roots, suffixes, rules=None, listed=None) -> Grammar:
    r, s = load_dictionaries(roots, suffixes)
    return Grammar(
        roots=r,
        suffixes=s,
        rules=load_rules(rules) if rules else [],
        listed=load_listed(listed) if listed else [],
    )


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name
