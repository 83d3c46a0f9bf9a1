"""Pure-Python lookup kernel (fallback when the compiled one is absent).

Interface shared with ``_lookup_c``:

    prepare(offsets, inlab, outlab, targets, finals) -> opaque
    traverse(prepared, start, word) -> list of output id tuples (may repeat)

``inlab`` is the tape matched against ``word``; ``outlab`` is collected.
"""
from lexfst.errors import CycleBudgetExceeded

BACKEND = "python"


def prepare(offsets, inlab, outlab, targets, finals):
    by_label = []
    eps = []
    for s in range(len(offsets) - 1):
        index, free = {}, []
        for k in range(offsets[s], offsets[s + 1]):
            move = (outlab[k], targets[k])
            if inlab[k] == 0:
                free.append(move)
            else:
                index.setdefault(inlab[k], []).append(move)
        by_label.append(index)
        eps.append(tuple(free))
    return by_label, eps, tuple(bool(f) for f in finals)


def traverse(prepared, start, word):
    by_label, eps, finals = prepared
    n = len(word)
    results = []
    out = []
    # (state, outlen) of frames at the current input position, for cycle checks
    path_at_pos = []

    def visit(state, pos):
        if pos == n and finals[state]:
            results.append(tuple(out))
        for label, target in eps[state]:
            for seen_state, seen_len in reversed(path_at_pos[pos]):
                if seen_state == target:
                    if len(out) + (label != 0) > seen_len:
                        raise CycleBudgetExceeded(
                            f"epsilon cycle through state {target} emits output")
                    break
            else:
                if label:
                    out.append(label)
                path_at_pos[pos].append((target, len(out)))
                visit(target, pos)
                path_at_pos[pos].pop()
                if label:
                    out.pop()
        if pos < n:
            for label, target in by_label[state].get(word[pos], ()):
                if label:
                    out.append(label)
                path_at_pos[pos + 1].append((target, len(out)))
                visit(target, pos + 1)
                path_at_pos[pos + 1].pop()
                if label:
                    out.pop()

    path_at_pos = [[] for _ in range(n + 1)]
    path_at_pos[0].append((start, 0))
    visit(start, 0)
    return results
