"""Finite-state transducer toolkit for lexicon-based morphological analysis."""
from lexfst.apply import BACKEND, apply_down, apply_up
from lexfst.errors import FstError
from lexfst.fst import (
    Arc,
    Transducer,
    compose,
    concat,
    dumps,
    empty,
    epsilon,
    from_pair,
    identity,
    is_cyclic,
    load,
    loads,
    lower_projection,
    minimize,
    relation,
    save,
    union,
)
from lexfst.symbols import SymbolTable, tokenize

__version__ = "0.1.0"
