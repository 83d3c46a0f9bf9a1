"""Compare the compiled and pure-Python lookup kernels.

    python benchmarks/bench_apply.py [--tokens N] [--words N] [--repeat N]

Two workloads: analysis of bundled Maithili surface forms, and analysis
over a synthetic lexicon of random Devanagari words (a larger, bushier
network where traversal dominates).
"""
from __future__ import annotations

import argparse
import random
import time

from lexfst.apply import apply_up, available_kernels, lookup_ids
from lexfst.fst import lower_projection
from lexfst.grammar import bundled_analyzer
from lexfst.lexc import LexEntry, LexiconAst, compile_lexicon

CONSONANTS = [chr(c) for c in range(0x0915, 0x0939)]
MATRAS = ["ा", "ि", "ी", "ु", "ू", "े", "ै", "ो"]


def synthetic_lexicon(n_words: int, seed: int = 0):
    rng = random.Random(seed)
    words = set()
    while len(words) < n_words:
        words.add("".join(rng.choice(CONSONANTS) + rng.choice(MATRAS + [""])
                          for _ in range(rng.randint(2, 4))))
    ast = LexiconAst(multichar_symbols=["+Noun", "+SG", "+PL"])
    ast.lexicons["Root"] = [LexEntry(w, w, "Tags") for w in sorted(words)]
    ast.lexicons["Tags"] = [LexEntry("+Noun+SG", "", "#"), LexEntry("+Noun+PL", "ें", "#")]
    return compile_lexicon(ast)


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(fst, tokens, kernel, repeat):
    """(end-to-end apply_up seconds, traversal-only seconds)."""
    apply_up(fst, tokens[0], kernel=kernel)  # build the kernel's tables once
    ids = [fst.symbols.tokenize_ids(w) for w in tokens]

    def full():
        for w in tokens:
            apply_up(fst, w, kernel=kernel)

    def raw():
        for seq in ids:
            lookup_ids(fst, seq, "up", kernel)

    return _best(full, repeat), _best(raw, repeat)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--tokens", type=int, default=50_000)
    p.add_argument("--words", type=int, default=5_000, help="synthetic lexicon size")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    rng = random.Random(1)
    workloads = []
    mai = bundled_analyzer()
    forms = sorted(lower_projection(mai))
    workloads.append(("bundled", mai, [rng.choice(forms) for _ in range(args.tokens)]))
    syn = synthetic_lexicon(args.words)
    syn_forms = sorted(lower_projection(syn))
    workloads.append((f"synthetic-{args.words}", syn, [rng.choice(syn_forms) for _ in range(args.tokens)]))

    kernels = available_kernels()
    if len(kernels) < 2:
        print("compiled kernel not built; only the Python fallback is available")
    print(f"{'workload':<18} {'states':>7} {'kernel':>8} {'apply_up s':>11} {'tok/s':>9} "
          f"{'speedup':>8} {'traverse s':>11} {'speedup':>8}")
    for name, fst, tokens in workloads:
        base = None
        for k in kernels:
            full, raw = bench(fst, tokens, k, args.repeat)
            base = base or (full, raw)
            print(f"{name:<18} {fst.num_states:>7} {k.BACKEND:>8} {full:>11.3f} "
                  f"{len(tokens) / full:>9.0f} {base[0] / full:>7.2f}x {raw:>11.3f} {base[1] / raw:>7.2f}x")


if __name__ == "__main__":
    main()
