"""Context-conditioned obligatory rewrite rules compiled to transducers.

Rule syntax (one per line in a rule file)::

    source -> target || left _ right

``0`` as target deletes the source symbol; ``.#.`` is the word boundary.
A context is empty, a single symbol, ``.#.``, a bracketed set of single
symbols (``[a b .#.]``) or a named class defined earlier in the file with
``$Name = a b c``. Contexts are tested against the rule's input, so
application is simultaneous, which for single-symbol contexts is the same as
obligatory left-to-right application.

The morpheme boundary ``^`` is transparent to contexts of rules that do not
mention it: ``आ -> 0 || ा _`` sees ``ा`` as the left neighbour of ``आ`` in
``ओझा^आइन``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from lexfst.errors import RuleSyntaxError, UnknownSymbol
from lexfst.fst import Transducer, _Builder, compose, identity
from lexfst.symbols import EPSILON, SymbolTable

WORD_BOUNDARY = ".#."
MORPHEME_BOUNDARY = "^"

_NONE, _NEED_RIGHT, _NEED_NOT_RIGHT = 0, 1, 2


@dataclass(frozen=True)
class RewriteRule:
    source: str
    target: str  # "" deletes
    left_context: frozenset[str] | None = None
    right_context: frozenset[str] | None = None

    def __post_init__(self):
        if not self.source:
            raise RuleSyntaxError("rule source must be a non-epsilon symbol")
        for ctx in (self.left_context, self.right_context):
            if ctx is not None and not ctx:
                raise RuleSyntaxError("context set is empty")

    @property
    def symbols(self) -> set[str]:
        out = {self.source}
        if self.target:
            out.add(self.target)
        for ctx in (self.left_context, self.right_context):
            if ctx:
                out |= ctx - {WORD_BOUNDARY}
        return out

    @property
    def transparent(self) -> frozenset[str]:
        """Symbols skipped when checking this rule's contexts."""
        return frozenset() if MORPHEME_BOUNDARY in self.symbols else frozenset({MORPHEME_BOUNDARY})

    def __str__(self):
        def ctx(c):
            if c is None:
                return ""
            if len(c) == 1:
                return next(iter(c))
            return "[" + " ".join(sorted(c)) + "]"

        text = f"{self.source} -> {self.target or '0'}"
        if self.left_context is not None or self.right_context is not None:
            text += f" || {ctx(self.left_context)} _ {ctx(self.right_context)}".rstrip()
        return text


def _symbol(tok: str) -> str:
    return tok[1:] if tok.startswith("%") and len(tok) > 1 else tok


def _parse_context(text: str, classes: Mapping[str, frozenset[str]]) -> frozenset[str] | None:
    text = text.strip()
    if not text:
        return None
    if text.startswith("["):
        if not text.endswith("]"):
            raise RuleSyntaxError(f"unterminated symbol set {text!r}")
        members = text[1:-1].split()
        if not members:
            raise RuleSyntaxError("empty symbol set")
        out = set()
        for m in members:
            out |= _parse_context(m, classes)
        return frozenset(out)
    toks = text.split()
    if len(toks) != 1:
        raise RuleSyntaxError(f"multi-symbol context {text!r} is not supported")
    tok = toks[0]
    if tok.startswith("$"):
        try:
            return classes[tok[1:]]
        except KeyError:
            raise RuleSyntaxError(f"undefined symbol class {tok}") from None
    return frozenset({_symbol(tok)})


def parse_rule(text: str, classes: Mapping[str, frozenset[str]] | None = None) -> RewriteRule:
    """Parse ``source -> target || left _ right``."""
    classes = classes or {}
    body, bar, ctx = text.partition("||")
    if "->" not in body:
        raise RuleSyntaxError(f"missing '->' in rule {text!r}")
    src_text, _, tgt_text = body.partition("->")
    src, tgt = src_text.split(), tgt_text.split()
    if len(src) != 1:
        raise RuleSyntaxError("rule source must be exactly one symbol")
    if len(tgt) != 1:
        raise RuleSyntaxError("rule target must be exactly one symbol (0 deletes)")
    if src[0] == "0":
        raise RuleSyntaxError("insertion rules (source 0) are not supported")
    target = "" if tgt[0] == "0" else _symbol(tgt[0])
    left = right = None
    if bar:
        if ctx.count("_") != 1 or not re.search(r"(^|\s)_(\s|$)", ctx):
            raise RuleSyntaxError("context must contain exactly one '_' placeholder")
        left_text, _, right_text = ctx.partition("_")
        left = _parse_context(left_text, classes)
        right = _parse_context(right_text, classes)
    return RewriteRule(_symbol(src[0]), target, left, right)


def parse_rules(source: str) -> list[RewriteRule]:
    """Parse a rule file: rules, ``$Name = ...`` class definitions, ``!`` comments."""
    classes: dict[str, frozenset[str]] = {}
    rules = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        try:
            m = re.fullmatch(r"\$(\w+)\s*=(.*)", line)
            if m:
                members = m.group(2).split()
                if not members:
                    raise RuleSyntaxError(f"class ${m.group(1)} has no members")
                classes[m.group(1)] = frozenset(_symbol(t) for t in members)
            else:
                rules.append(parse_rule(line, classes))
        except RuleSyntaxError as exc:
            raise RuleSyntaxError(exc.message, lineno) from None
    return rules


def load_rules(path) -> list[RewriteRule]:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def _alphabet_table(alphabet) -> SymbolTable:
    if isinstance(alphabet, SymbolTable):
        return alphabet
    return SymbolTable(alphabet)


def compile_rule(rule: RewriteRule, alphabet: SymbolTable | Iterable[str]) -> Transducer:
    """Total, functional transducer applying *rule* over *alphabet*.

    States track whether the previous visible input symbol satisfies the
    left context and, after a source symbol, which right-context outcome
    was guessed (rewritten: next must match; kept: next must not match).
    """
    table = _alphabet_table(alphabet)
    for sym in (rule.source, rule.target):
        if sym and sym not in table:
            raise UnknownSymbol(0, sym)
    L, R = rule.left_context, rule.right_context
    transparent = rule.transparent
    src = table.lookup(rule.source)
    tgt = table.lookup(rule.target) if rule.target else EPSILON
    symbols = [(sid, table.text_of(sid)) for sid in range(1, len(table))]

    def final(state):
        _, pend = state
        if pend == _NEED_RIGHT:
            return WORD_BOUNDARY in R
        if pend == _NEED_NOT_RIGHT:
            return WORD_BOUNDARY not in R
        return True

    def moves(state, sid, text):
        left_ok, pend = state
        if text in transparent:
            return [(sid, state)]
        if pend == _NEED_RIGHT and text not in R:
            return []
        if pend == _NEED_NOT_RIGHT and text in R:
            return []
        nxt_left = True if L is None else text in L
        if sid == src and left_ok:
            if R is None:
                return [(tgt, (nxt_left, _NONE))]
            return [(tgt, (nxt_left, _NEED_RIGHT)), (src, (nxt_left, _NEED_NOT_RIGHT))]
        return [(sid, (nxt_left, _NONE))]

    start = (True if L is None else WORD_BOUNDARY in L, _NONE)
    b = _Builder(table)
    ids = {start: b.add_state(final=final(start))}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for sid, text in symbols:
            for out, nxt in moves(state, sid, text):
                if nxt not in ids:
                    ids[nxt] = b.add_state(final=final(nxt))
                    queue.append(nxt)
                b.add_arc(ids[state], sid, out, ids[nxt])
    return b.build(ids[start])


def cascade_alphabet(rules: Iterable[RewriteRule], alphabet) -> SymbolTable:
    """*alphabet* extended with every symbol the rules can emit or read."""
    table = _alphabet_table(alphabet)
    extra = []
    for r in rules:
        extra.append(r.source)
        if r.target:
            extra.append(r.target)
    return table.extended(extra)


def compile_rule_cascade(rules: Iterable[RewriteRule], alphabet) -> Transducer:
    """Compose the rules' transducers in order (identity when empty)."""
    rules = list(rules)
    table = cascade_alphabet(rules, alphabet)
    if not rules:
        return identity(table)
    result = compile_rule(rules[0], table)
    for rule in rules[1:]:
        result = compose(result, compile_rule(rule, table))
    return result
