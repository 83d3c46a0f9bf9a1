import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lexfst.errors import DuplicateLexicon, LexcSyntaxError, MissingRoot, ValidationFailed
from lexfst.fst import dumps, is_cyclic, lower_projection, relation
from lexfst.grammar.maithili import OJHA_LEXICON
from lexfst.lexc import (
    ContinuationCycle,
    DanglingContinuation,
    LexEntry,
    LexiconAst,
    UnreachableLexicon,
    compile_lexicon,
    format_lexicon,
    load_lexicon,
    parse_lexicon,
    symbol_table,
    validate,
)

SMALL = "Multichar_Symbols +Noun\nLEXICON Root\nओझा NounTags;\nLEXICON NounTags\n+Noun:0 #;"


def expand(ast: LexiconAst) -> set[tuple[tuple[str, ...], tuple[str, ...]]]:
    """Brute-force relation: every Root -> # chain, tokenized."""
    table = symbol_table(ast)
    out = set()

    def walk(name, up, lo):
        for e in ast.lexicons[name]:
            u, l = up + table.tokenize(e.upper), lo + table.tokenize(e.lower)
            if e.continuation == "#":
                out.add((tuple(u), tuple(l)))
            else:
                walk(e.continuation, u, l)

    walk("Root", [], [])
    return out


def test_parse_small_source():
    ast = parse_lexicon(SMALL)
    assert ast.multichar_symbols == ["+Noun"]
    assert list(ast.lexicons) == ["Root", "NounTags"]
    assert ast.lexicons["NounTags"] == [LexEntry("+Noun", "", "#")]


@pytest.mark.parametrize("src", ["", "! only a comment\n", "LEXICON Other\na # ;"])
def test_missing_root(src):
    with pytest.raises(MissingRoot):
        parse_lexicon(src)


def test_duplicate_lexicon():
    with pytest.raises(DuplicateLexicon) as err:
        parse_lexicon("LEXICON Root\na # ;\nLEXICON Root\nb # ;")
    assert err.value.name == "Root"


@pytest.mark.parametrize("src, line", [
    ("LEXICON Root\na #\n", 2),
    ("LEXICON Root\na b c ;", 2),
    ("stray\nLEXICON Root\n", 1),
    ("LEXICON Root\n;\n", 2),
    ("LEXICON Root\na:b:c # ;", 2),
])
def test_syntax_errors_carry_line(src, line):
    with pytest.raises(LexcSyntaxError) as err:
        parse_lexicon(src)
    assert err.value.line == line


def test_escapes_and_comments():
    ast = parse_lexicon("LEXICON Root\n%0%;:x # ; ! zero and semicolon\n")
    assert ast.lexicons["Root"] == [LexEntry("0;", "x", "#")]


def test_declarations_section_ignored():
    ast = parse_lexicon("Declarations\nfoo = bar ;\nLEXICON Root\na # ;")
    assert list(ast.lexicons) == ["Root"]


def test_validate_reports_problems():
    ast = parse_lexicon("LEXICON Root\na Missing ;\nb A ;\nLEXICON A\nx B ;\nLEXICON B\ny A ;\nLEXICON Lost\nz # ;")
    diags = validate(ast)
    assert DanglingContinuation("Missing", "Root") in diags
    assert UnreachableLexicon("Lost") in diags
    assert ContinuationCycle(("A", "B")) in diags
    with pytest.raises(ValidationFailed):
        compile_lexicon(ast)


def test_single_entry_is_two_state_identity():
    t = compile_lexicon(parse_lexicon("LEXICON Root\na # ;"))
    assert t.num_states == 2
    assert relation(t) == {(("a",), ("a",))}


def test_four_word_lexicon_lower_projection():
    t = compile_lexicon(load_lexicon(OJHA_LEXICON))
    assert lower_projection(t) == {"ओझा", "ओझागिरी", "ओझाइन", "ओझैली"}
    assert not is_cyclic(t)


def test_multichar_symbols_stay_atomic():
    t = compile_lexicon(parse_lexicon(SMALL))
    assert relation(t) == {(("ओ", "झ", "ा", "+Noun"), ("ओ", "झ", "ा"))}


def test_format_round_trip():
    ast = load_lexicon(OJHA_LEXICON)
    again = parse_lexicon(format_lexicon(ast))
    assert again == ast


@st.composite
def lexicon_asts(draw):
    """Random continuation DAGs: lexicon i only continues into j > i."""
    n = draw(st.integers(1, 4))
    names = ["Root"] + [f"L{i}" for i in range(1, n)]
    forms = st.text(alphabet="ab", max_size=2)
    ast = LexiconAst(multichar_symbols=["+T"])
    for i, name in enumerate(names):
        entries = []
        for _ in range(draw(st.integers(1, 3))):
            up = draw(forms) + draw(st.sampled_from(["", "+T"]))
            lo = draw(forms)
            cont = draw(st.sampled_from(["#"] + names[i + 1:]))
            entries.append(LexEntry(up, lo, cont))
        ast.lexicons[name] = entries
    # keep every lexicon reachable
    for i, name in enumerate(names[1:], 1):
        ast.lexicons[names[i - 1]].append(LexEntry("", "", name))
    return ast


@settings(max_examples=80, deadline=None)
@given(lexicon_asts())
def test_compiled_relation_matches_chain_expansion(ast):
    assert validate(ast) == []
    t = compile_lexicon(ast)
    assert relation(t) == expand(ast)
    assert relation(compile_lexicon(ast, minimal=False)) == expand(ast)
    assert not is_cyclic(t)


@settings(max_examples=30, deadline=None)
@given(lexicon_asts())
def test_compile_is_deterministic(ast):
    assert dumps(compile_lexicon(ast)) == dumps(compile_lexicon(ast))
    assert parse_lexicon(format_lexicon(ast)).lexicons == ast.lexicons


def test_validate_empty_iff_compiles():
    rng = random.Random(3)
    names = ["Root", "A", "B"]
    for _ in range(100):
        ast = LexiconAst()
        for name in names:
            ast.lexicons[name] = [LexEntry("a", "a", rng.choice(names + ["#", "Gone"]))
                                  for _ in range(rng.randint(1, 2))]
        if validate(ast):
            with pytest.raises(ValidationFailed):
                compile_lexicon(ast)
        else:
            assert not is_cyclic(compile_lexicon(ast))
