"""Parser, validator and compiler for lexc-style lexicon sources.

Format::

    ! comment
    Multichar_Symbols +Noun +SG ^
    LEXICON Root
    ओझा NounTags ;
    LEXICON NounTags
    +Noun+SG:0 # ;

Entries are ``upper[:lower] Continuation ;``; ``0`` stands for epsilon and
``%`` escapes the next character. A bare ``Continuation ;`` is an entry with
empty form. ``Declarations`` is accepted as a section keyword and ignored.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from lexfst.errors import DuplicateLexicon, LexcSyntaxError, MissingRoot, ValidationFailed
from lexfst.fst import Transducer, _Builder, minimize
from lexfst.symbols import EPSILON, SymbolTable, nfc

ROOT = "Root"
END = "#"
_SPECIAL = set(":;!%0# \t")

_MULTICHAR = object()
_DECLARATIONS = object()
_LEXICON_NAME = object()


@dataclass(frozen=True)
class LexEntry:
    upper: str
    lower: str
    continuation: str


@dataclass
class LexiconAst:
    multichar_symbols: list[str] = field(default_factory=list)
    lexicons: dict[str, list[LexEntry]] = field(default_factory=dict)


# -- diagnostics ------------------------------------------------------------

@dataclass(frozen=True)
class DanglingContinuation:
    name: str
    lexicon: str = ""

    def __str__(self):
        return f"continuation {self.name!r} (from LEXICON {self.lexicon}) is not declared"


@dataclass(frozen=True)
class UnreachableLexicon:
    name: str

    def __str__(self):
        return f"LEXICON {self.name} is not reachable from Root"


@dataclass(frozen=True)
class ContinuationCycle:
    names: tuple[str, ...]

    def __str__(self):
        return "continuation cycle: " + " -> ".join(self.names + self.names[:1])


# -- parsing ----------------------------------------------------------------

def _tokens(source: str):
    """Yield (line, token, escaped) with comments removed and ``;`` split off.

    *escaped* marks tokens containing ``%`` so that keywords can be told
    apart from escaped text.
    """
    for lineno, line in enumerate(source.splitlines(), 1):
        buf, escaped, i = [], False, 0
        while i < len(line):
            ch = line[i]
            if ch == "%" and i + 1 < len(line):
                buf.append(line[i:i + 2])
                escaped = True
                i += 2
                continue
            if ch == "!":
                break
            if ch.isspace() or ch == ";":
                if buf:
                    yield lineno, "".join(buf), escaped
                    buf, escaped = [], False
                if ch == ";":
                    yield lineno, ";", False
                i += 1
                continue
            buf.append(ch)
            i += 1
        if buf:
            yield lineno, "".join(buf), escaped


def _unescape_side(text: str, zero_is_epsilon: bool = True) -> str:
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        if ch == "%" and i + 1 < len(text):
            out.append(text[i + 1])
            i += 2
        elif ch == "0" and zero_is_epsilon:
            i += 1
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _split_form(form: str, line: int) -> tuple[str, str]:
    i = 0
    while i < len(form):
        if form[i] == "%":
            i += 2
            continue
        if form[i] == ":":
            upper, lower = form[:i], form[i + 1:]
            if ":" in lower.replace("%:", ""):
                raise LexcSyntaxError(line, f"more than one ':' in {form!r}")
            return nfc(_unescape_side(upper)), nfc(_unescape_side(lower))
        i += 1
    side = nfc(_unescape_side(form))
    return side, side


def parse_lexicon(source: str) -> LexiconAst:
    ast = LexiconAst()
    section = None  # a sentinel above, or the current lexicon name
    pending: list[tuple[int, str]] = []
    for line, tok, escaped in _tokens(source):
        if not escaped and tok == "Multichar_Symbols" and not pending:
            if ast.lexicons:
                raise LexcSyntaxError(line, "Multichar_Symbols must precede all lexicons")
            section = _MULTICHAR
            continue
        if not escaped and tok == "Declarations" and not pending:
            if ast.lexicons:
                raise LexcSyntaxError(line, "Declarations must precede all lexicons")
            section = _DECLARATIONS
            continue
        if not escaped and tok == "LEXICON" and not pending:
            section = _LEXICON_NAME
            continue
        if section is _LEXICON_NAME:
            if tok == ";":
                raise LexcSyntaxError(line, "LEXICON needs a name")
            if tok in ast.lexicons:
                raise DuplicateLexicon(tok, line)
            if tok == END:
                raise LexcSyntaxError(line, "'#' is reserved for the end of word")
            ast.lexicons[tok] = []
            section = tok
            continue
        if section is _MULTICHAR:
            if tok == ";":
                raise LexcSyntaxError(line, "unexpected ';' in Multichar_Symbols")
            sym = nfc(_unescape_side(tok, zero_is_epsilon=False))
            if sym not in ast.multichar_symbols:
                ast.multichar_symbols.append(sym)
            continue
        if section is _DECLARATIONS:
            continue
        if section is None:
            raise LexcSyntaxError(line, f"unexpected {tok!r} before any LEXICON")
        # inside a lexicon: collect tokens until ';'
        if tok != ";":
            pending.append((line, tok))
            if len(pending) > 2:
                raise LexcSyntaxError(line, "entry has too many fields (missing ';'?)")
            continue
        if not pending:
            raise LexcSyntaxError(line, "empty entry")
        if len(pending) == 1:
            upper = lower = ""
            cont = pending[0][1]
        else:
            upper, lower = _split_form(pending[0][1], pending[0][0])
            cont = pending[1][1]
        ast.lexicons[section].append(LexEntry(upper, lower, cont))
        pending = []
    if pending:
        raise LexcSyntaxError(pending[-1][0], "entry not terminated by ';'")
    if section is _LEXICON_NAME:
        raise LexcSyntaxError(source.count("\n") + 1, "LEXICON needs a name")
    if ROOT not in ast.lexicons:
        raise MissingRoot()
    return ast


def load_lexicon(path) -> LexiconAst:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read())


def _escape(text: str) -> str:
    if not text:
        return "0"
    return "".join("%" + ch if ch in _SPECIAL else ch for ch in text)


def format_lexicon(ast: LexiconAst) -> str:
    """Render an AST back to source text; ``parse_lexicon`` inverts it."""
    lines = []
    if ast.multichar_symbols:
        lines.append("Multichar_Symbols " + " ".join(_escape(s) for s in ast.multichar_symbols))
    for name, entries in ast.lexicons.items():
        lines.append("")
        lines.append(f"LEXICON {name}")
        for e in entries:
            if not e.upper and not e.lower:
                lines.append(f"{e.continuation} ;")
            elif e.upper == e.lower:
                lines.append(f"{_escape(e.upper)} {e.continuation} ;")
            else:
                lines.append(f"{_escape(e.upper)}:{_escape(e.lower)} {e.continuation} ;")
    return "\n".join(lines) + "\n"


# -- validation and compilation -------------------------------------------

def validate(ast: LexiconAst) -> list:
    """Dangling continuations, lexicons unreachable from Root, cycles."""
    diags = []
    names = list(ast.lexicons)
    for name in names:
        seen = set()
        for e in ast.lexicons[name]:
            c = e.continuation
            if c != END and c not in ast.lexicons and c not in seen:
                seen.add(c)
                diags.append(DanglingContinuation(c, name))

    def succ(name):
        out = []
        for e in ast.lexicons[name]:
            c = e.continuation
            if c != END and c in ast.lexicons and c not in out:
                out.append(c)
        return out

    if ROOT in ast.lexicons:
        reach = {ROOT}
        stack = [ROOT]
        while stack:
            for c in succ(stack.pop()):
                if c not in reach:
                    reach.add(c)
                    stack.append(c)
        diags.extend(UnreachableLexicon(n) for n in names if n not in reach)

    position = {n: i for i, n in enumerate(names)}
    cycles = set()
    color = dict.fromkeys(names, 0)
    for root in names:
        if color[root]:
            continue
        path = [root]
        color[root] = 1
        stack = [iter(succ(root))]
        while stack:
            for c in stack[-1]:
                if color[c] == 1:
                    cyc = path[path.index(c):]
                    k = min(range(len(cyc)), key=lambda i: position[cyc[i]])
                    cycles.add(tuple(cyc[k:] + cyc[:k]))
                elif color[c] == 0:
                    color[c] = 1
                    path.append(c)
                    stack.append(iter(succ(c)))
                    break
            else:
                color[path.pop()] = 2
                stack.pop()
    diags.extend(ContinuationCycle(c) for c in sorted(cycles, key=lambda c: [position[n] for n in c]))
    return diags


def symbol_table(ast: LexiconAst) -> SymbolTable:
    """Multichar symbols in declared order, then the used single symbols sorted."""
    chars = set()
    for entries in ast.lexicons.values():
        for e in entries:
            chars.update(e.upper)
            chars.update(e.lower)
    scratch = SymbolTable(list(ast.multichar_symbols) + sorted(chars))
    used = set()
    for entries in ast.lexicons.values():
        for e in entries:
            used.update(scratch.tokenize(e.upper))
            used.update(scratch.tokenize(e.lower))
    multi = set(ast.multichar_symbols)
    return SymbolTable(list(ast.multichar_symbols) + sorted(used - multi))


def compile_lexicon(ast: LexiconAst, minimal: bool = True) -> Transducer:
    """Compile the continuation graph from Root to ``#`` into one transducer."""
    diags = validate(ast)
    if diags:
        raise ValidationFailed(diags)
    table = symbol_table(ast)
    b = _Builder(table)
    entry_state = {name: b.add_state() for name in ast.lexicons}
    end_state = b.add_state(final=True)
    for name, entries in ast.lexicons.items():
        for e in entries:
            up = table.tokenize_ids(e.upper)
            lo = table.tokenize_ids(e.lower)
            target = end_state if e.continuation == END else entry_state[e.continuation]
            width = max(len(up), len(lo))
            state = entry_state[name]
            for i in range(width):
                nxt = target if i == width - 1 else b.add_state()
                b.add_arc(state,
                          up[i] if i < len(up) else EPSILON,
                          lo[i] if i < len(lo) else EPSILON, nxt)
                state = nxt
            if width == 0:
                b.add_arc(state, EPSILON, EPSILON, target)
    t = b.build(entry_state[ROOT])
    return minimize(t) if minimal else t


compile = compile_lexicon  # noqa: A001
