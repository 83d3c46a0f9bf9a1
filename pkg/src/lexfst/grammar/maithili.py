"""The bundled Maithili inflectional grammar.

Data files live in ``data/``: ``roots.tsv``, ``suffixes.tsv``,
``rules.rul`` (orthographic rules), ``listed.tsv`` (forms that do not follow
the rules) and ``gold.tsv`` (reference analyses for evaluation).

The rule set is a reconstruction from attested root/suffix/surface triples,
not an authoritative account of Maithili orthography.
"""
from __future__ import annotations

from functools import lru_cache

from lexfst.fst import Transducer
from lexfst.grammar.dictionaries import Grammar, data_path, load_grammar

ROOTS = data_path("roots.tsv")
SUFFIXES = data_path("suffixes.tsv")
RULES = data_path("rules.rul")
LISTED = data_path("listed.tsv")
GOLD = data_path("gold.tsv")
OJHA_LEXICON = data_path("ojha.lexc")


def load_bundled() -> Grammar:
    return load_grammar(ROOTS, SUFFIXES, RULES, LISTED)


@lru_cache(maxsize=1)
def bundled_analyzer() -> Transducer:
    """The compiled bundled grammar (built once per process)."""
    return load_bundled().build()
