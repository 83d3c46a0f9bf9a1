import io
import json
import subprocess
import sys

import pytest

from lexfst.cli import main
from lexfst.fst import load
from lexfst.grammar.maithili import OJHA_LEXICON, GOLD, ROOTS, SUFFIXES


def feed(monkeypatch, text):
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(text.encode()), encoding="utf-8"))


@pytest.fixture(scope="module")
def fst_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("fst") / "mai.fst"
    assert main(["compile", "-o", str(path)]) == 0
    return str(path)


def test_compile_is_reproducible(fst_file, tmp_path, capsys):
    other = tmp_path / "again.fst"
    assert main(["compile", "-o", str(other)]) == 0
    assert "states" in capsys.readouterr().err
    assert other.read_bytes() == open(fst_file, "rb").read()
    load(other)


def test_compile_missing_file(tmp_path, capsys):
    missing = tmp_path / "nope.tsv"
    assert main(["compile", "--roots", str(missing), "-o", str(tmp_path / "x")]) == 2
    assert str(missing) in capsys.readouterr().err


def test_compile_undeclared_class(tmp_path, capsys):
    roots = tmp_path / "r.tsv"
    roots.write_text("बाघ\tNoun\tghost_class\tMasc\n", encoding="utf-8")
    assert main(["compile", "--roots", str(roots), "--suffixes", str(SUFFIXES),
                 "-o", str(tmp_path / "x")]) == 2
    assert "ghost_class" in capsys.readouterr().err


def test_compile_lexc(tmp_path, monkeypatch, capsys):
    out = tmp_path / "ojha.fst"
    assert main(["compile", "--lexc", str(OJHA_LEXICON), "-o", str(out)]) == 0
    feed(monkeypatch, "ओझाइन\n")
    assert main(["analyze", "--fst", str(out)]) == 0
    assert "ओझा(आइन) + Noun + SG + Feminine" in capsys.readouterr().out


def test_analyze_plain(fst_file, monkeypatch, capsys):
    feed(monkeypatch, "ओझाइन\nनिकहा\nxyz\n")
    assert main(["analyze", "--fst", fst_file]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "ओझाइन\tओझा(आइन) + Noun + SG + Feminine",
        "निकहा\tनिक(हा) + Adj + SG + Masculine",
        "xyz\t+?",
    ]


def test_analyze_one_group_per_line(monkeypatch, capsys):
    words = ["ओझा", "", "बाघिन", "qq", "चलह", "ओझा"]
    feed(monkeypatch, "\n".join(words) + "\n")
    assert main(["analyze"]) == 0
    firsts = [ln.split("\t")[0] for ln in capsys.readouterr().out.splitlines()]
    assert firsts == words


def test_analyze_structured_and_tsv(monkeypatch, capsys):
    feed(monkeypatch, "चलू\nxyz\n")
    main(["analyze", "--format", "structured"])
    recs = [json.loads(ln) for ln in capsys.readouterr().out.splitlines()]
    assert recs[0]["root"] == "चल" and recs[0]["mood"] == "Imp" and recs[0]["suffix"] == "उ"
    assert recs[1] == {"word": "xyz", "upper": None}
    feed(monkeypatch, "चलू\n")
    main(["analyze", "--format", "tsv"])
    assert capsys.readouterr().out == "चलू\tचल\tउ\tVerb\tImp\tSG\tMasc\n"


def test_analyze_missing_fst(tmp_path, capsys):
    assert main(["analyze", "--fst", str(tmp_path / "none.fst")]) == 2


def test_analyze_corrupt_fst(tmp_path, monkeypatch, capsys):
    bad = tmp_path / "bad.fst"
    bad.write_bytes(b"garbage")
    feed(monkeypatch, "ओझा\n")
    assert main(["analyze", "--fst", str(bad)]) == 2
    assert "bad.fst" in capsys.readouterr().err


def test_generate(fst_file, monkeypatch, capsys):
    feed(monkeypatch, "चल(उ) + Verb + Imperative + SG + Masculine\nnot an analysis\n")
    assert main(["generate", "--fst", fst_file]) == 0
    cap = capsys.readouterr()
    assert cap.out == "चलू\n"
    assert "line 2" in cap.err


def test_generate_all_bad_is_status_1(monkeypatch, capsys):
    feed(monkeypatch, "??\n")
    assert main(["generate"]) == 1


def test_generate_inverts_analyze(monkeypatch, capsys):
    from lexfst.fst import lower_projection
    from lexfst.grammar import bundled_analyzer
    words = sorted(lower_projection(bundled_analyzer()))
    feed(monkeypatch, "\n".join(words) + "\n")
    main(["analyze"])
    pairs = [ln.split("\t") for ln in capsys.readouterr().out.splitlines()]
    feed(monkeypatch, "\n".join(a for _, a in pairs) + "\n")
    main(["generate", "--format", "tsv"])
    generated = {tuple(ln.split("\t")) for ln in capsys.readouterr().out.splitlines()}
    assert {(a, w) for w, a in pairs} <= generated


def test_evaluate_bundled_gold(fst_file, capsys):
    assert main(["evaluate", "--fst", fst_file, "--gold", str(GOLD), "--format", "tsv"]) == 0
    rows = [ln.split("\t") for ln in capsys.readouterr().out.splitlines()]
    assert rows[0] == ["category", "words", "correct", "percent"]
    body = {r[0]: r[1:] for r in rows[1:]}
    assert body["Noun"] == ["8", "8", "100"]
    assert body["Adj"] == ["6", "6", "100"]
    assert body["Verb"] == ["6", "6", "100"]
    assert body["Total"] == ["20", "20", "100"]


def test_evaluate_table(capsys):
    assert main(["evaluate", "--gold", str(GOLD)]) == 0
    out = capsys.readouterr().out
    assert "Noun Inflections" in out and "Adjective Inflections" in out


def test_evaluate_empty(tmp_path, capsys):
    empty = tmp_path / "gold.tsv"
    empty.write_text("", encoding="utf-8")
    assert main(["evaluate", "--gold", str(empty)]) == 1


def test_evaluate_wrong_and_malformed_rows(tmp_path, capsys):
    gold = tmp_path / "gold.tsv"
    gold.write_text(
        "ओझाइन\tNoun\tओझा(आइन) + Noun + SG + Feminine\n"
        "सोनारिन\tN\tसोनार(इन) + N + SG + M\n"          # wrong gender
        "broken row\n"
        "चलू\tVerb\tचल(उ) + Frobnicate\n",
        encoding="utf-8")
    assert main(["evaluate", "--gold", str(gold), "--format", "structured"]) == 0
    cap = capsys.readouterr()
    rep = json.loads(cap.out)
    assert rep["rows"] == [{"category": "Noun", "words": 2, "correct": 1, "percent": 50}]
    assert rep["malformed"] == 2
    assert ":3:" in cap.err and ":4:" in cap.err


def test_words(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_text("ओझा ओझा ओझाइन।\nabc बाघ", encoding="utf-8")
    assert main(["words", str(src), "--sort", "freq"]) == 0
    cap = capsys.readouterr()
    assert cap.out.splitlines() == ["ओझा\t2", "ओझाइन\t1", "बाघ\t1"]
    assert "tokens 5" in cap.err


def test_words_bad_utf8(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_bytes(b"ok \xc3")
    assert main(["words", str(src)]) == 2
    assert "offset 3" in capsys.readouterr().err


def test_suggest(monkeypatch, capsys):
    feed(monkeypatch, "बाघिन\t4\nक\n")
    assert main(["suggest"]) == 0
    assert "बाघिन\tबाघ\tइन\tanimate_masc" in capsys.readouterr().out.splitlines()


def test_usage_error(capsys):
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lexfst", "analyze"], input="ओझा\n",
                          capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 0
    assert proc.stdout == "ओझा\tओझा + Noun + SG + Masculine\n"
