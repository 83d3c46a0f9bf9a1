"""Lexicon generation helpers: word extraction and suffix-based suggestions."""
from __future__ import annotations

import codecs
import io
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Sequence, TextIO

from lexfst.apply import apply_down
from lexfst.errors import FstError, Utf8Error
from lexfst.fst import Transducer
from lexfst.grammar.dictionaries import SuffixEntry
from lexfst.rules import MORPHEME_BOUNDARY, WORD_BOUNDARY, RewriteRule, compile_rule_cascade
from lexfst.symbols import nfc

ZWNJ, ZWJ = "‌", "‍"
_CHUNK = 1 << 16


def is_devanagari(ch: str) -> bool:
    return "ऀ" <= ch <= "ॿ" or ch in (ZWNJ, ZWJ)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass
class WordList:
    entries: list[tuple[str, int]] = field(default_factory=list)
    total_tokens: int = 0

    @property
    def kept_tokens(self) -> int:
        return sum(f for _, f in self.entries)

    @property
    def types(self) -> int:
        return len(self.entries)

    def words(self) -> list[str]:
        return [w for w, _ in self.entries]


def split_tokens(line: str) -> list[str]:
    """Whitespace- and punctuation-delimited tokens of *line*."""
    out, buf = [], []
    for ch in line:
        if ch.isspace() or _is_punct(ch):
            if buf:
                out.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        out.append("".join(buf))
    return out


def _decode_lines(stream: BinaryIO) -> Iterable[str]:
    decoder = codecs.getincrementaldecoder("utf-8")()
    offset = 0
    pending = ""
    while True:
        chunk = stream.read(_CHUNK)
        final = not chunk
        carry = decoder.getstate()[0]
        try:
            text = decoder.decode(chunk, final=final)
        except UnicodeDecodeError as exc:
            # exc.start counts from the carried-over partial sequence
            raise Utf8Error(offset - len(carry) + exc.start) from None
        offset += len(chunk)
        pending += text
        *lines, pending = pending.split("\n")
        yield from lines
        if final:
            if pending:
                yield pending
            return


def extract_words(corpus: TextIO | BinaryIO | Iterable[str], sort: str = "codepoint") -> WordList:
    """Count Devanagari word types in a corpus stream.

    Every whitespace/punctuation-delimited token counts towards
    ``total_tokens``; only tokens made entirely of Devanagari code points
    (plus ZWJ/ZWNJ) are kept. Memory grows with the number of types only.
    """
    if isinstance(corpus, (io.RawIOBase, io.BufferedIOBase)) or (
            hasattr(corpus, "read") and "b" in getattr(corpus, "mode", "")):
        lines = _decode_lines(corpus)  # type: ignore[arg-type]
    else:
        lines = corpus  # type: ignore[assignment]
    counts: Counter[str] = Counter()
    total = 0
    for line in lines:
        for tok in split_tokens(nfc(line)):
            total += 1
            if all(is_devanagari(ch) for ch in tok) and any(ch not in (ZWJ, ZWNJ) for ch in tok):
                counts[tok] += 1
    if sort == "codepoint":
        entries = sorted(counts.items())
    elif sort == "freq":
        entries = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    else:
        raise ValueError(f"unknown sort order {sort!r}")
    return WordList(entries, total)


@dataclass(frozen=True)
class ClassificationSuggestion:
    word: str
    candidate_root: str
    matched_suffix: str
    candidate_class: str


DEVANAGARI_ALPHABET = [chr(c) for c in range(0x0900, 0x0980)] + [ZWNJ, ZWJ]


class SuffixMatcher:
    """Proposes root + suffix splits whose rule-realization equals the word.

    Rules have single-symbol contexts, so a suffix's surface realization
    depends only on the last root symbol; realizations are cached per
    (suffix, last symbol) and every hit is confirmed against the full
    cascade. Rules that look at the word boundary disable the cache.
    """

    def __init__(self, suffixes: Sequence[SuffixEntry], rules: Sequence[RewriteRule] = (),
                 cascade: Transducer | None = None):
        self.suffixes = list(suffixes)
        alphabet = list(DEVANAGARI_ALPHABET) + [MORPHEME_BOUNDARY]
        self.cascade = cascade or compile_rule_cascade(rules, alphabet)
        self._cache: dict[tuple[str, str], list[str]] = {}
        self._exact = any(
            ctx and WORD_BOUNDARY in ctx
            for r in rules for ctx in (r.left_context, r.right_context))

    def realize(self, root: str, suffix: str) -> list[str]:
        try:
            return apply_down(self.cascade, root + MORPHEME_BOUNDARY + suffix)
        except FstError:
            return []

    def _tails(self, suffix: str, last: str) -> list[str]:
        key = (suffix, last)
        tails = self._cache.get(key)
        if tails is None:
            tails = [s[len(last):] for s in self.realize(last, suffix) if s.startswith(last)]
            self._cache[key] = tails
        return tails

    def suggest(self, word: str) -> list[ClassificationSuggestion]:
        out = []
        for s in self.suffixes:
            for k in range(1, len(word)):
                if self._exact or word[k:] in self._tails(s.form, word[k - 1]):
                    root = word[:k]
                    if word in self.realize(root, s.form):
                        out.append(ClassificationSuggestion(word, root, s.form, s.applicable_class))
        return out


def suggest_classes(words: WordList | Iterable[str], suffixes: Sequence[SuffixEntry],
                    rules: Sequence[RewriteRule] = ()) -> list[ClassificationSuggestion]:
    """Candidate (root, suffix, class) splits for every word, in input order."""
    matcher = SuffixMatcher(suffixes, rules)
    items = words.words() if isinstance(words, WordList) else words
    out = []
    for w in items:
        out.extend(matcher.suggest(nfc(w)))
    return out
