"""Analysis (apply-up) and generation (apply-down) over a transducer.

The traversal itself lives in a kernel module: the compiled ``_lookup_c``
when it was built, otherwise ``_lookup_py``. Set ``LEXFST_PURE_PYTHON=1``
to force the fallback.
"""
from __future__ import annotations

import os
import threading
from typing import Sequence

from lexfst import _lookup_py
from lexfst.fst import Transducer
from lexfst.symbols import nfc

_kernel = _lookup_py
if not os.environ.get("LEXFST_PURE_PYTHON"):
    try:
        from lexfst import _lookup_c as _kernel  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = _kernel.BACKEND
_lock = threading.Lock()


def available_kernels():
    """Kernel modules importable in this environment, fallback first."""
    kernels = [_lookup_py]
    try:
        from lexfst import _lookup_c
        kernels.append(_lookup_c)
    except ImportError:
        pass
    return kernels


def _prepared(t: Transducer, direction: str, kernel):
    # cached per transducer instance; building is idempotent so the lock only
    # avoids duplicate work
    cache = t.__dict__.setdefault("_kernel_cache", {})
    key = (direction, kernel.BACKEND)
    prep = cache.get(key)
    if prep is None:
        with _lock:
            prep = cache.get(key)
            if prep is None:
                offsets, upper, lower, target, finals = t._flat
                if direction == "up":
                    prep = kernel.prepare(offsets, lower, upper, target, finals)
                else:
                    prep = kernel.prepare(offsets, upper, lower, target, finals)
                cache[key] = prep
    return prep


def _run(t, direction, ids, kernel):
    raw = kernel.traverse(_prepared(t, direction, kernel), t.start, ids)
    return sorted(set(raw))


def lookup_ids(t: Transducer, ids: Sequence[int], direction: str = "up",
               kernel=None) -> list[tuple[int, ...]]:
    """Raw traversal on symbol ids; results deduplicated and id-sorted."""
    return _run(t, direction, list(ids), kernel or _kernel)


def apply_up(t: Transducer, surface: str, kernel=None) -> list[tuple[str, ...]]:
    """Every upper token sequence paired with *surface*, in symbol-id order."""
    ids = t.symbols.tokenize_ids(nfc(surface))
    text = t.symbols.text_of
    return [tuple(map(text, r)) for r in _run(t, "up", ids, kernel or _kernel)]


def apply_down(t: Transducer, lexical: str | Sequence[str], kernel=None) -> list[str]:
    """Every lower string paired with the upper string *lexical*.

    *lexical* is either a token sequence or a string to be tokenized.
    """
    if isinstance(lexical, str):
        ids = t.symbols.tokenize_ids(nfc(lexical))
    else:
        ids = t.symbols.ids_of([nfc(tok) for tok in lexical])
    text = t.symbols.text_of
    strings = ("".join(map(text, r)) for r in _run(t, "down", ids, kernel or _kernel))
    return list(dict.fromkeys(strings))
