"""Symbol tables and longest-match tokenization."""
from __future__ import annotations

import unicodedata
from typing import Iterable, Sequence

from lexfst.errors import UnknownSymbol

EPSILON = 0
EPSILON_TEXT = ""


class SymbolTable:
    """Immutable bidirectional map between symbol ids and symbol texts.

    Id 0 is reserved for epsilon, whose text is the empty string. Any
    registered text longer than one code point is a multichar symbol and is
    never split by :meth:`tokenize`.
    """

    __slots__ = ("_texts", "_ids", "_maxlen")

    def __init__(self, texts: Iterable[str] = ()):
        ordered = [EPSILON_TEXT]
        ids = {EPSILON_TEXT: EPSILON}
        for text in texts:
            if not isinstance(text, str):
                raise TypeError(f"symbol text must be str, got {type(text).__name__}")
            if text not in ids:
                ids[text] = len(ordered)
                ordered.append(text)
        self._texts = tuple(ordered)
        self._ids = ids
        self._maxlen = max((len(t) for t in ordered), default=0)

    def __len__(self):
        return len(self._texts)

    def __iter__(self):
        return iter(self._texts)

    def __contains__(self, text):
        return text in self._ids

    def __eq__(self, other):
        return isinstance(other, SymbolTable) and self._texts == other._texts

    def __hash__(self):
        return hash(self._texts)

    def __repr__(self):
        return f"SymbolTable({list(self._texts[1:])!r})"

    @property
    def texts(self) -> tuple[str, ...]:
        return self._texts

    def lookup(self, text: str) -> int:
        try:
            return self._ids[text]
        except KeyError:
            raise KeyError(f"symbol {text!r} is not registered") from None

    def get(self, text: str, default=None):
        return self._ids.get(text, default)

    def text_of(self, sid: int) -> str:
        return self._texts[sid]

    def extended(self, texts: Iterable[str]) -> SymbolTable:
        """Return a new table with *texts* appended (existing ids unchanged)."""
        return SymbolTable(list(self._texts[1:]) + list(texts))

    def merge(self, other: SymbolTable) -> tuple[SymbolTable, list[int]]:
        """Union of two tables plus the id remapping for *other*'s ids."""
        merged = self.extended(other._texts[1:])
        return merged, [merged._ids[t] for t in other._texts]

    def tokenize(self, text: str) -> list[str]:
        return [self._texts[i] for i in self.tokenize_ids(text)]

    def tokenize_ids(self, text: str) -> list[int]:
        ids = self._ids
        out = []
        i, n = 0, len(text)
        while i < n:
            for width in range(min(self._maxlen, n - i), 0, -1):
                sid = ids.get(text[i:i + width])
                if sid is not None:
                    out.append(sid)
                    i += width
                    break
            else:
                raise UnknownSymbol(i, text)
        return out

    def ids_of(self, tokens: Sequence[str]) -> list[int]:
        out = []
        for pos, tok in enumerate(tokens):
            sid = self._ids.get(tok)
            if sid is None or sid == EPSILON:
                raise UnknownSymbol(pos)
            out.append(sid)
        return out


def tokenize(table: SymbolTable, text: str) -> list[str]:
    """Longest-match-first segmentation of *text* into registered symbols."""
    return table.tokenize(text)


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)
