"""Transducer representation and the construction combinators.

A :class:`Transducer` is an immutable value: every combinator returns a new
one in canonical form (trimmed, states renumbered breadth-first from the
start state, arcs sorted). Equal inputs therefore always give equal
transducers, which is what makes :func:`dumps` byte-reproducible.
"""
from __future__ import annotations

import struct
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

from lexfst.errors import CyclicInput, SerializationError
from lexfst.symbols import EPSILON, SymbolTable


class Arc(NamedTuple):
    upper: int
    lower: int
    target: int


@dataclass(frozen=True, eq=False)
class Transducer:
    symbols: SymbolTable
    arcs: tuple[tuple[Arc, ...], ...]
    start: int
    finals: frozenset[int]

    def __post_init__(self):
        n = len(self.arcs)
        if not 0 <= self.start < n:
            raise ValueError(f"start state {self.start} out of range")
        if any(not 0 <= f < n for f in self.finals):
            raise ValueError("final state out of range")
        nsym = len(self.symbols)
        for state_arcs in self.arcs:
            for a in state_arcs:
                if not (0 <= a.upper < nsym and 0 <= a.lower < nsym and 0 <= a.target < n):
                    raise ValueError(f"invalid arc {a}")

    @property
    def num_states(self) -> int:
        return len(self.arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self.arcs)

    def __repr__(self):
        return (f"Transducer({self.num_states} states, {self.num_arcs} arcs, "
                f"{len(self.finals)} finals)")

    def __eq__(self, other):
        if not isinstance(other, Transducer):
            return NotImplemented
        return dumps(self) == dumps(other)

    def __hash__(self):
        return hash(dumps(self))

    @cached_property
    def _flat(self):
        """Arc arrays laid out per state (CSR style) for the lookup kernels."""
        offsets = [0]
        upper, lower, target = [], [], []
        for state_arcs in self.arcs:
            for a in state_arcs:
                upper.append(a.upper)
                lower.append(a.lower)
                target.append(a.target)
            offsets.append(len(upper))
        finals = [1 if s in self.finals else 0 for s in range(self.num_states)]
        return offsets, upper, lower, target, finals


class _Builder:
    def __init__(self, symbols: SymbolTable):
        self.symbols = symbols
        self.arcs: list[list[Arc]] = []
        self.finals: set[int] = set()

    def add_state(self, final=False) -> int:
        self.arcs.append([])
        sid = len(self.arcs) - 1
        if final:
            self.finals.add(sid)
        return sid

    def add_arc(self, src, upper, lower, target):
        self.arcs[src].append(Arc(upper, lower, target))

    def build(self, start=0) -> Transducer:
        return _canonical(self.symbols, self.arcs, start, self.finals)


def _canonical(symbols, arcs, start, finals) -> Transducer:
    """Trim useless states and renumber breadth-first from *start*."""
    n = len(arcs)
    reverse: list[list[int]] = [[] for _ in range(n)]
    for s, state_arcs in enumerate(arcs):
        for a in state_arcs:
            reverse[a.target].append(s)
    coacc = set(finals)
    stack = list(finals)
    while stack:
        s = stack.pop()
        for p in reverse[s]:
            if p not in coacc:
                coacc.add(p)
                stack.append(p)
    if start not in coacc:
        return Transducer(symbols, ((),), 0, frozenset())

    new_id = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for a in sorted(arcs[s]):
            t = a.target
            if t in coacc and t not in new_id:
                new_id[t] = len(order)
                order.append(t)
                queue.append(t)
    new_arcs = []
    for s in order:
        kept = {Arc(a.upper, a.lower, new_id[a.target]) for a in arcs[s] if a.target in new_id}
        new_arcs.append(tuple(sorted(kept)))
    new_finals = frozenset(new_id[f] for f in finals if f in new_id)
    return Transducer(symbols, tuple(new_arcs), 0, new_finals)


def empty(symbols: SymbolTable | None = None) -> Transducer:
    """The transducer with the empty relation."""
    return Transducer(symbols or SymbolTable(), ((),), 0, frozenset())


def epsilon(symbols: SymbolTable | None = None) -> Transducer:
    """The unit for :func:`concat`: relates only the empty pair."""
    return Transducer(symbols or SymbolTable(), ((),), 0, frozenset({0}))


def from_pair(upper: Sequence[str], lower: Sequence[str],
              symbols: SymbolTable | None = None) -> Transducer:
    """Linear transducer relating exactly ``(upper, lower)``.

    The shorter side is padded with epsilon at its end.
    """
    upper, lower = list(upper), list(lower)
    table = (symbols or SymbolTable()).extended(upper + lower)
    b = _Builder(table)
    state = b.add_state()
    for i in range(max(len(upper), len(lower))):
        u = table.lookup(upper[i]) if i < len(upper) else EPSILON
        l = table.lookup(lower[i]) if i < len(lower) else EPSILON
        nxt = b.add_state()
        b.add_arc(state, u, l, nxt)
        state = nxt
    b.finals.add(state)
    return b.build()


def identity(symbols: Iterable[str]) -> Transducer:
    """Identity relation over Sigma* for the given symbol texts."""
    table = SymbolTable(symbols) if not isinstance(symbols, SymbolTable) else symbols
    b = _Builder(table)
    s = b.add_state(final=True)
    for sid in range(1, len(table)):
        b.add_arc(s, sid, sid, s)
    return b.build()


def _copy_into(b: _Builder, t: Transducer, remap: Sequence[int]) -> int:
    """Append *t*'s states to *b*; return the state offset."""
    offset = len(b.arcs)
    for s, state_arcs in enumerate(t.arcs):
        b.add_state(final=s in t.finals)
        for a in state_arcs:
            b.add_arc(offset + s, remap[a.upper], remap[a.lower], offset + a.target)
    return offset


def concat(a: Transducer, b: Transducer) -> Transducer:
    """Relation ``{(u1 u2, l1 l2)}`` over pairs of *a* then *b* (epsilon-free)."""
    table, remap_b = a.symbols.merge(b.symbols)
    remap_a = range(len(a.symbols))
    bld = _Builder(table)
    _copy_into(bld, a, remap_a)
    off = _copy_into(bld, b, remap_b)
    b_start = off + b.start
    b_start_final = b.start in b.finals
    for f in sorted(a.finals):
        for arc in bld.arcs[b_start]:
            bld.add_arc(f, arc.upper, arc.lower, arc.target)
        if not b_start_final:
            bld.finals.discard(f)
    return bld.build(a.start)


def union(a: Transducer, b: Transducer) -> Transducer:
    table, remap_b = a.symbols.merge(b.symbols)
    bld = _Builder(table)
    start = bld.add_state(final=(a.start in a.finals or b.start in b.finals))
    off_a = _copy_into(bld, a, range(len(a.symbols)))
    off_b = _copy_into(bld, b, remap_b)
    for src in (off_a + a.start, off_b + b.start):
        for arc in list(bld.arcs[src]):
            bld.add_arc(start, arc.upper, arc.lower, arc.target)
    return bld.build(start)


def union_all(ts: Iterable[Transducer], symbols: SymbolTable | None = None) -> Transducer:
    """Union of many transducers with one fresh start state."""
    ts = list(ts)
    table = symbols or SymbolTable()
    remaps = []
    for t in ts:
        table, remap = table.merge(t.symbols)
        remaps.append(remap)
    bld = _Builder(table)
    start = bld.add_state()
    for t, remap in zip(ts, remaps):
        off = _copy_into(bld, t, remap)
        if t.start in t.finals:
            bld.finals.add(start)
        for arc in list(bld.arcs[off + t.start]):
            bld.add_arc(start, arc.upper, arc.lower, arc.target)
    return bld.build(start)


def compose(a: Transducer, b: Transducer) -> Transducer:
    """Relational composition with a three-state epsilon filter.

    Filter state 0 allows every move; after an epsilon move on *a*'s lower
    side only further such moves (1) or a real match are allowed, and
    symmetrically for *b*'s upper side (2). Paired epsilon moves are only
    taken from 0. Each pair of paths therefore has exactly one aligned path
    in the result.
    """
    table, remap_b = a.symbols.merge(b.symbols)
    b_eps: list[list[Arc]] = []
    b_index: list[dict[int, list[Arc]]] = []
    for state_arcs in b.arcs:
        eps, idx = [], {}
        for arc in state_arcs:
            u, l = remap_b[arc.upper], remap_b[arc.lower]
            if u == EPSILON:
                eps.append(Arc(u, l, arc.target))
            else:
                idx.setdefault(u, []).append(Arc(u, l, arc.target))
        b_eps.append(eps)
        b_index.append(idx)

    bld = _Builder(table)
    ids: dict[tuple[int, int, int], int] = {}
    queue: deque[tuple[int, int, int]] = deque()

    def state(key):
        sid = ids.get(key)
        if sid is None:
            sid = ids[key] = bld.add_state(final=key[0] in a.finals and key[1] in b.finals)
            queue.append(key)
        return sid

    state((a.start, b.start, 0))
    while queue:
        key = queue.popleft()
        qa, qb, f = key
        src = ids[key]
        for arc_a in a.arcs[qa]:
            if arc_a.lower == EPSILON:
                if f != 2:
                    bld.add_arc(src, arc_a.upper, EPSILON, state((arc_a.target, qb, 1)))
                if f == 0:
                    for arc_b in b_eps[qb]:
                        bld.add_arc(src, arc_a.upper, arc_b.lower,
                                    state((arc_a.target, arc_b.target, 0)))
            else:
                for arc_b in b_index[qb].get(arc_a.lower, ()):
                    bld.add_arc(src, arc_a.upper, arc_b.lower,
                                state((arc_a.target, arc_b.target, 0)))
        if f != 1:
            for arc_b in b_eps[qb]:
                bld.add_arc(src, EPSILON, arc_b.lower, state((qa, arc_b.target, 2)))
    return bld.build(0)


def is_cyclic(t: Transducer) -> bool:
    """True iff the state graph has a directed cycle."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * t.num_states
    for root in range(t.num_states):
        if color[root] != WHITE:
            continue
        color[root] = GREY
        stack = [(root, iter(t.arcs[root]))]
        while stack:
            s, it = stack[-1]
            for arc in it:
                c = color[arc.target]
                if c == GREY:
                    return True
                if c == WHITE:
                    color[arc.target] = GREY
                    stack.append((arc.target, iter(t.arcs[arc.target])))
                    break
            else:
                color[s] = BLACK
                stack.pop()
    return False


def paths(t: Transducer) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every accepting path as (upper ids, lower ids), epsilons removed."""
    if is_cyclic(t):
        raise CyclicInput("cannot enumerate paths of a cyclic transducer")

    def walk(s, up, lo):
        if s in t.finals:
            yield tuple(up), tuple(lo)
        for arc in t.arcs[s]:
            if arc.upper:
                up.append(arc.upper)
            if arc.lower:
                lo.append(arc.lower)
            yield from walk(arc.target, up, lo)
            if arc.upper:
                up.pop()
            if arc.lower:
                lo.pop()

    yield from walk(t.start, [], [])


def relation(t: Transducer) -> set[tuple[tuple[str, ...], tuple[str, ...]]]:
    """The (finite) relation of an acyclic transducer, as symbol texts."""
    text = t.symbols.text_of
    return {(tuple(map(text, u)), tuple(map(text, l))) for u, l in paths(t)}


def lower_projection(t: Transducer) -> set[str]:
    text = t.symbols.text_of
    return {"".join(map(text, l)) for _, l in paths(t)}


def upper_projection(t: Transducer) -> set[str]:
    text = t.symbols.text_of
    return {"".join(map(text, u)) for u, _ in paths(t)}


def minimize(t: Transducer) -> Transducer:
    """Minimal deterministic acyclic form over the pair alphabet.

    The transducer is read as an acceptor of (upper, lower) label pairs,
    determinized, and equivalent states are merged bottom-up. If the
    deterministic form ends up larger than the input (possible for
    nondeterministic input), the trimmed input is returned instead so the
    state count never grows.
    """
    if is_cyclic(t):
        raise CyclicInput("minimize requires an acyclic transducer")
    det_arcs, det_finals = _determinize(t)
    result = _merge_equivalent(t.symbols, det_arcs, det_finals)
    trimmed = _canonical(t.symbols, t.arcs, t.start, t.finals)
    return result if result.num_states <= trimmed.num_states else trimmed


def _eps_closure(t: Transducer, states: Iterable[int]) -> frozenset[int]:
    seen = set(states)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for arc in t.arcs[s]:
            if arc.upper == EPSILON and arc.lower == EPSILON and arc.target not in seen:
                seen.add(arc.target)
                stack.append(arc.target)
    return frozenset(seen)


def _determinize(t: Transducer):
    start = _eps_closure(t, [t.start])
    ids = {start: 0}
    subsets = [start]
    arcs: list[list[Arc]] = []
    finals = set()
    i = 0
    while i < len(subsets):
        subset = subsets[i]
        if subset & t.finals:
            finals.add(i)
        moves: dict[tuple[int, int], set[int]] = {}
        for s in subset:
            for arc in t.arcs[s]:
                if arc.upper == EPSILON and arc.lower == EPSILON:
                    continue
                moves.setdefault((arc.upper, arc.lower), set()).add(arc.target)
        out = []
        for label in sorted(moves):
            target = _eps_closure(t, moves[label])
            tid = ids.get(target)
            if tid is None:
                tid = ids[target] = len(subsets)
                subsets.append(target)
            out.append(Arc(label[0], label[1], tid))
        arcs.append(out)
        i += 1
    return arcs, finals


def _merge_equivalent(symbols, arcs, finals) -> Transducer:
    # postorder over the DAG: a state's signature needs its targets' classes
    n = len(arcs)
    order, seen = [], [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [(root, iter(arcs[root]))]
        while stack:
            s, it = stack[-1]
            for arc in it:
                if not seen[arc.target]:
                    seen[arc.target] = True
                    stack.append((arc.target, iter(arcs[arc.target])))
                    break
            else:
                order.append(s)
                stack.pop()
    cls = [0] * n
    registry: dict[tuple, int] = {}
    class_arcs: list[list[Arc]] = []
    class_final: set[int] = set()
    for s in order:
        sig = (s in finals, tuple(sorted((a.upper, a.lower, cls[a.target]) for a in arcs[s])))
        c = registry.get(sig)
        if c is None:
            c = registry[sig] = len(class_arcs)
            class_arcs.append([Arc(u, l, tc) for u, l, tc in sig[1]])
            if sig[0]:
                class_final.add(c)
        cls[s] = c
    return _canonical(symbols, class_arcs, cls[0], class_final)


def trim(t: Transducer) -> Transducer:
    return _canonical(t.symbols, t.arcs, t.start, t.finals)


# -- canonical serialization ------------------------------------------------

MAGIC = b"LEXFST"
VERSION = 1
_U32 = struct.Struct("<I")
_ARC = struct.Struct("<III")


def dumps(t: Transducer) -> bytes:
    """Versioned little-endian binary form; equal transducers give equal bytes."""
    out = [MAGIC, struct.pack("<H", VERSION), _U32.pack(len(t.symbols) - 1)]
    for text in t.symbols.texts[1:]:
        raw = text.encode("utf-8")
        out.append(_U32.pack(len(raw)))
        out.append(raw)
    out.append(_U32.pack(t.num_states))
    out.append(_U32.pack(t.start))
    finals = sorted(t.finals)
    out.append(_U32.pack(len(finals)))
    out.extend(_U32.pack(f) for f in finals)
    for state_arcs in t.arcs:
        out.append(_U32.pack(len(state_arcs)))
        out.extend(_ARC.pack(*a) for a in state_arcs)
    return b"".join(out)


def loads(data: bytes) -> Transducer:
    view = memoryview(data)
    pos = 0

    def take(n):
        nonlocal pos
        if pos + n > len(view):
            raise SerializationError("truncated transducer data")
        chunk = view[pos:pos + n]
        pos += n
        return chunk

    def u32():
        return _U32.unpack(take(4))[0]

    if bytes(take(len(MAGIC))) != MAGIC:
        raise SerializationError("not a lexfst transducer (bad magic)")
    (version,) = struct.unpack("<H", take(2))
    if version != VERSION:
        raise SerializationError(f"unsupported format version {version}")
    texts = []
    for _ in range(u32()):
        length = u32()
        try:
            texts.append(bytes(take(length)).decode("utf-8"))
        except UnicodeDecodeError as exc:
            raise SerializationError(f"bad symbol text: {exc}") from None
    table = SymbolTable(texts)
    if len(table) != len(texts) + 1:
        raise SerializationError("duplicate symbol text in table")
    nstates = u32()
    start = u32()
    finals = frozenset(u32() for _ in range(u32()))
    arcs = []
    for _ in range(nstates):
        count = u32()
        arcs.append(tuple(Arc(*_ARC.unpack(take(12))) for _ in range(count)))
    if pos != len(view):
        raise SerializationError("trailing bytes after transducer data")
    try:
        return Transducer(table, tuple(arcs), start, finals)
    except ValueError as exc:
        raise SerializationError(str(exc)) from None


def save(t: Transducer, path) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps(t))


def load(path) -> Transducer:
    with open(path, "rb") as fh:
        return loads(fh.read())
