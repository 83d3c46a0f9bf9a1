"""``lexfst`` command line: compile, analyze, generate, evaluate, words, suggest.

Exit status: 0 success, 1 empty or failed run (nothing evaluated, nothing
generated), 2 usage, I/O or input-file error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from lexfst import corpus
from lexfst.apply import apply_down, apply_up
from lexfst.errors import FstError, MalformedAnalysis
from lexfst.fst import Transducer, dumps, load
from lexfst.grammar import maithili
from lexfst.grammar.analysis import (
    POS_TAGS,
    Analysis,
    canonical_tag,
    parse_analysis,
    parse_display,
    render_analysis,
    tag_category,
)
from lexfst.grammar.dictionaries import load_grammar, load_suffixes
from lexfst.lexc import compile_lexicon, load_lexicon
from lexfst.rules import load_rules
from lexfst.symbols import nfc

UNKNOWN = "+?"
EXIT_OK, EXIT_EMPTY, EXIT_USAGE = 0, 1, 2

CATEGORY_NAMES = {"Noun": "Noun", "Adj": "Adjective", "Verb": "Verb",
                  "Pron": "Pronoun", "Adv": "Adverb"}


class CliError(Exception):
    """Reported on stderr; exits with status 2."""


def _err(msg: str) -> None:
    print(f"lexfst: {msg}", file=sys.stderr)


def _open_text(path: str) -> TextIO:
    if path == "-":
        return sys.stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None


def _lines(paths: list[str]) -> Iterable[str]:
    for path in paths or ["-"]:
        fh = _open_text(path)
        try:
            for line in fh:
                yield line.rstrip("\r\n")
        except UnicodeDecodeError as exc:
            raise CliError(f"{path}: invalid UTF-8 ({exc.reason})") from None
        finally:
            if fh is not sys.stdin:
                fh.close()


def _load_fst(path: str | None) -> Transducer:
    if path is None:
        return maithili.bundled_analyzer()
    try:
        return load(path)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except FstError as exc:
        raise CliError(f"{path}: {exc}") from None


def _analyses(fst: Transducer, word: str) -> list[tuple[str, Analysis | None]]:
    """(upper string, parsed analysis or None) for every reading of *word*."""
    try:
        results = apply_up(fst, word)
    except FstError:
        return []
    out = []
    for tokens in results:
        upper = "".join(tokens)
        try:
            out.append((upper, parse_analysis(upper)))
        except MalformedAnalysis:
            out.append((upper, None))
    return out


def _check_path(path) -> str:
    try:
        with open(path, "rb"):
            pass
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    return str(path)


# -- compile ------------------------------------------------------------------

def cmd_compile(args) -> int:
    if args.lexc:
        fst = compile_lexicon(load_lexicon(_check_path(args.lexc)))
    else:
        roots = _check_path(args.roots or maithili.ROOTS)
        suffixes = _check_path(args.suffixes or maithili.SUFFIXES)
        rules = _check_path(args.rules or maithili.RULES)
        listed = args.listed
        if listed is None and not (args.roots or args.suffixes):
            listed = maithili.LISTED
        if listed:
            listed = _check_path(listed)
        fst = load_grammar(roots, suffixes, rules, listed or None).build()
    data = dumps(fst)
    if args.output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        try:
            with open(args.output, "wb") as fh:
                fh.write(data)
        except OSError as exc:
            raise CliError(f"{args.output}: {exc.strerror}") from None
    print(f"states {fst.num_states}  arcs {fst.num_arcs}  symbols {len(fst.symbols)}",
          file=sys.stderr)
    return EXIT_OK


# -- analyze ------------------------------------------------------------------

def _fields(a: Analysis) -> dict:
    return {"root": a.root, "suffix": a.suffix, "pos": a.pos, "mood": a.mood,
            "number": a.number, "gender": a.gender}


def _format_analysis(word: str, upper: str, a: Analysis | None, fmt: str) -> str:
    if fmt == "structured":
        rec = {"word": word, "upper": upper}
        rec.update(_fields(a) if a else {})
        return json.dumps(rec, ensure_ascii=False)
    if fmt == "tsv":
        if a is None:
            return f"{word}\t{upper}"
        cols = [a.root, a.suffix, a.pos, a.mood, a.number, a.gender]
        return "\t".join([word] + [c or "-" for c in cols])
    return f"{word}\t{render_analysis(a) if a else upper}"


def cmd_analyze(args) -> int:
    fst = _load_fst(args.fst)
    out = sys.stdout
    for line in _lines(args.input):
        word = nfc(line.strip())
        found = _analyses(fst, word) if word else []
        if not found:
            if args.format == "structured":
                out.write(json.dumps({"word": word, "upper": None}, ensure_ascii=False) + "\n")
            else:
                out.write(f"{word}\t{UNKNOWN}\n")
            continue
        for upper, a in found:
            out.write(_format_analysis(word, upper, a, args.format) + "\n")
    out.flush()
    return EXIT_OK


# -- generate -----------------------------------------------------------------

def read_analysis(text: str) -> Analysis:
    """Accept the upper-tape form (``ओझा^आइन+Noun+SG+Fem``) or the display form."""
    text = nfc(text.strip())
    if " " not in text and "(" not in text:
        try:
            return parse_analysis(text)
        except MalformedAnalysis:
            pass
    return parse_display(text)


def cmd_generate(args) -> int:
    fst = _load_fst(args.fst)
    ok = seen = 0
    for lineno, line in enumerate(_lines(args.input), 1):
        if not line.strip():
            continue
        seen += 1
        try:
            a = read_analysis(line)
            forms = apply_down(fst, a.upper())
        except MalformedAnalysis as exc:
            _err(f"line {lineno}: {exc}")
            continue
        except FstError as exc:
            forms = []
            _err(f"line {lineno}: {exc}")
        if not forms:
            _err(f"line {lineno}: no surface form for {line.strip()!r}")
            continue
        ok += 1
        for f in forms:
            if args.format == "plain":
                print(f)
            else:
                print(f"{line.strip()}\t{f}")
    return EXIT_OK if ok or not seen else EXIT_EMPTY


# -- evaluate -----------------------------------------------------------------

@dataclass
class CategoryRow:
    category: str
    count: int = 0
    correct: int = 0

    @property
    def percent(self) -> int:
        # integer percent, halves rounded up
        return (200 * self.correct + self.count) // (2 * self.count) if self.count else 0


@dataclass
class EvalReport:
    rows: list[CategoryRow] = field(default_factory=list)
    malformed: int = 0

    @property
    def total(self) -> CategoryRow:
        return CategoryRow("Total", sum(r.count for r in self.rows),
                           sum(r.correct for r in self.rows))

    def to_tsv(self) -> str:
        lines = ["category\twords\tcorrect\tpercent"]
        for r in self.rows + [self.total]:
            lines.append(f"{r.category}\t{r.count}\t{r.correct}\t{r.percent}")
        lines.append(f"malformed\t{self.malformed}\t\t")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        header = ("Word Type Input", "No. of Words", "Correct", "% Correct")
        body = [(f"{CATEGORY_NAMES.get(r.category, r.category)} Inflections",
                 str(r.count), str(r.correct), str(r.percent)) for r in self.rows]
        t = self.total
        body.append(("Total", str(t.count), str(t.correct), str(t.percent)))
        widths = [max(len(row[i]) for row in [header] + body) for i in range(4)]

        def fmt(row):
            return "  ".join([row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])])

        lines = [fmt(header), "  ".join("-" * w for w in widths)]
        lines.extend(fmt(r) for r in body)
        if self.malformed:
            lines.append(f"({self.malformed} malformed gold row(s) skipped)")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({
            "rows": [{"category": r.category, "words": r.count, "correct": r.correct,
                      "percent": r.percent} for r in self.rows],
            "total": {"words": self.total.count, "correct": self.total.correct,
                      "percent": self.total.percent},
            "malformed": self.malformed,
        }, ensure_ascii=False) + "\n"


def evaluate(fst: Transducer, rows: Iterable[str], on_error=None) -> EvalReport:
    """Containment accuracy of *fst* against gold ``word, category, expected`` rows."""
    by_cat: dict[str, CategoryRow] = {}
    report = EvalReport()
    for lineno, line in enumerate(rows, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = [c.strip() for c in line.split("\t")]
        try:
            if len(cols) != 3 or not all(cols):
                raise MalformedAnalysis("expected 'word<TAB>category<TAB>analysis'")
            word, cat_text, expected = cols
            cat = canonical_tag(cat_text)
            if cat is None or tag_category(cat) != "pos":
                raise MalformedAnalysis(f"unknown category {cat_text!r}")
            want = render_analysis(read_analysis(expected))
        except MalformedAnalysis as exc:
            report.malformed += 1
            if on_error:
                on_error(lineno, exc)
            continue
        row = by_cat.setdefault(cat, CategoryRow(cat))
        row.count += 1
        produced = {render_analysis(a) for _, a in _analyses(fst, nfc(word)) if a}
        if want in produced:
            row.correct += 1
    report.rows = [by_cat[c] for c in POS_TAGS if c in by_cat]
    return report


def cmd_evaluate(args) -> int:
    fst = _load_fst(args.fst)
    report = evaluate(fst, _lines([args.gold]),
                      on_error=lambda n, e: _err(f"{args.gold}:{n}: {e}"))
    text = {"plain": report.to_table, "tsv": report.to_tsv,
            "structured": report.to_json}[args.format]()
    sys.stdout.write(text)
    return EXIT_OK if report.total.count else EXIT_EMPTY


# -- words / suggest ------------------------------------------------------------

def cmd_words(args) -> int:
    total = corpus.WordList()
    for path in args.input or ["-"]:
        try:
            fh = sys.stdin.buffer if path == "-" else open(path, "rb")
        except OSError as exc:
            raise CliError(f"{path}: {exc.strerror}") from None
        try:
            wl = corpus.extract_words(fh, sort=args.sort)
        except corpus.Utf8Error as exc:
            raise CliError(f"{path}: {exc}") from None
        finally:
            if path != "-":
                fh.close()
        total = _merge(total, wl, args.sort)
    for w, n in total.entries:
        print(f"{w}\t{n}")
    print(f"types {total.types}  tokens {total.total_tokens}  kept {total.kept_tokens}",
          file=sys.stderr)
    return EXIT_OK


def _merge(a: corpus.WordList, b: corpus.WordList, sort: str) -> corpus.WordList:
    counts = dict(a.entries)
    for w, n in b.entries:
        counts[w] = counts.get(w, 0) + n
    key = (lambda kv: kv[0]) if sort == "codepoint" else (lambda kv: (-kv[1], kv[0]))
    return corpus.WordList(sorted(counts.items(), key=key), a.total_tokens + b.total_tokens)


def cmd_suggest(args) -> int:
    suffixes, _ = load_suffixes(_check_path(args.suffixes or maithili.SUFFIXES))
    rules = load_rules(_check_path(args.rules or maithili.RULES))
    words = []
    for line in _lines(args.input):
        word = line.split("\t", 1)[0].strip()
        if word:
            words.append(word)
    for s in corpus.suggest_classes(words, suffixes, rules):
        print(f"{s.word}\t{s.candidate_root}\t{s.matched_suffix}\t{s.candidate_class}")
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lexfst", description="Finite-state morphology toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile dictionaries and rules (or a lexc file)")
    c.add_argument("--roots")
    c.add_argument("--suffixes")
    c.add_argument("--rules")
    c.add_argument("--listed", help="listed (irregular) forms; bundled file by default")
    c.add_argument("--lexc", help="compile a lexc source instead of dictionaries")
    c.add_argument("-o", "--output", default="-", help="output file (default stdout)")
    c.set_defaults(func=cmd_compile)

    fmt = dict(choices=["plain", "tsv", "structured"], default="plain")

    a = sub.add_parser("analyze", help="apply-up: surface words to analyses")
    a.add_argument("--fst", help="compiled transducer (bundled grammar by default)")
    a.add_argument("--format", **fmt)
    a.add_argument("input", nargs="*")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("generate", help="apply-down: analyses to surface words")
    g.add_argument("--fst")
    g.add_argument("--format", **fmt)
    g.add_argument("input", nargs="*")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("evaluate", help="accuracy against a gold TSV")
    e.add_argument("--fst")
    e.add_argument("--gold", required=True)
    e.add_argument("--format", **fmt)
    e.set_defaults(func=cmd_evaluate)

    w = sub.add_parser("words", help="unique Devanagari words with frequencies")
    w.add_argument("--sort", choices=["codepoint", "freq"], default="codepoint")
    w.add_argument("input", nargs="*")
    w.set_defaults(func=cmd_words)

    s = sub.add_parser("suggest", help="suffix-match class suggestions for a word list")
    s.add_argument("--suffixes")
    s.add_argument("--rules")
    s.add_argument("input", nargs="*")
    s.set_defaults(func=cmd_suggest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        _err(str(exc))
    except FstError as exc:
        _err(str(exc))
    except BrokenPipeError:
        return EXIT_OK
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
