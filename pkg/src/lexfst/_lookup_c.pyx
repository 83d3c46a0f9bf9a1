# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled lookup kernel; same interface as ``_lookup_py``."""
from libc.stdlib cimport malloc, realloc, free
from cpython.array cimport array

from lexfst.errors import CycleBudgetExceeded

BACKEND = "cython"


cdef class Prepared:
    cdef int[::1] offsets
    cdef int[::1] inlab
    cdef int[::1] outlab
    cdef int[::1] targets
    cdef unsigned char[::1] finals
    cdef int nstates

    def __init__(self, offsets, inlab, outlab, targets, finals):
        self.offsets = array("i", offsets)
        self.inlab = array("i", inlab)
        self.outlab = array("i", outlab)
        self.targets = array("i", targets)
        self.finals = array("B", finals)
        self.nstates = len(offsets) - 1


def prepare(offsets, inlab, outlab, targets, finals):
    return Prepared(offsets, inlab, outlab, targets, finals)


cdef int _grow(int** buf, int* cap, int need) except -1:
    cdef int newcap
    cdef int* p
    if need <= cap[0]:
        return 0
    newcap = cap[0] * 2
    while newcap < need:
        newcap *= 2
    p = <int*>realloc(buf[0], newcap * sizeof(int))
    if p == NULL:
        raise MemoryError()
    buf[0] = p
    cap[0] = newcap
    return 0


def traverse(Prepared p, int start, word):
    cdef int n = len(word)
    cdef int i, depth, state, pos, k, end, lab, tgt, outlen, j
    cdef bint cyc
    cdef int cap = 64
    cdef int wcap = n if n > 0 else 1
    cdef int* w = <int*>malloc(wcap * sizeof(int))
    # frame arrays: state, pos, next arc index, output length at entry
    cdef int* st = <int*>malloc(cap * sizeof(int))
    cdef int* sp = <int*>malloc(cap * sizeof(int))
    cdef int* sk = <int*>malloc(cap * sizeof(int))
    cdef int* sl = <int*>malloc(cap * sizeof(int))
    cdef int* out = <int*>malloc(cap * sizeof(int))
    cdef int capst = cap, capsp = cap, capsk = cap, capsl = cap, capout = cap
    cdef list results = []
    if w == NULL or st == NULL or sp == NULL or sk == NULL or sl == NULL or out == NULL:
        free(w); free(st); free(sp); free(sk); free(sl); free(out)
        raise MemoryError()
    try:
        for i in range(n):
            w[i] = word[i]
        st[0] = start
        sp[0] = 0
        sk[0] = p.offsets[start]
        sl[0] = 0
        depth = 1
        outlen = 0
        if n == 0 and p.finals[start]:
            results.append(())
        while depth > 0:
            state = st[depth - 1]
            pos = sp[depth - 1]
            k = sk[depth - 1]
            end = p.offsets[state + 1]
            if k >= end:
                depth -= 1
                if depth > 0:
                    outlen = sl[depth - 1]
                continue
            sk[depth - 1] = k + 1
            lab = p.inlab[k]
            tgt = p.targets[k]
            if lab == 0:
                cyc = False
                j = depth - 1
                while j >= 0 and sp[j] == pos:
                    if st[j] == tgt:
                        cyc = True
                        if outlen + (1 if p.outlab[k] != 0 else 0) > sl[j]:
                            raise CycleBudgetExceeded(
                                f"epsilon cycle through state {tgt} emits output")
                        break
                    j -= 1
                if cyc:
                    continue
                _grow(&st, &capst, depth + 1)
                _grow(&sp, &capsp, depth + 1)
                _grow(&sk, &capsk, depth + 1)
                _grow(&sl, &capsl, depth + 1)
                _grow(&out, &capout, outlen + 1)
                if p.outlab[k] != 0:
                    out[outlen] = p.outlab[k]
                    outlen += 1
                st[depth] = tgt
                sp[depth] = pos
                sk[depth] = p.offsets[tgt]
                sl[depth] = outlen
                depth += 1
                if pos == n and p.finals[tgt]:
                    results.append(tuple([out[i] for i in range(outlen)]))
            elif pos < n and lab == w[pos]:
                _grow(&st, &capst, depth + 1)
                _grow(&sp, &capsp, depth + 1)
                _grow(&sk, &capsk, depth + 1)
                _grow(&sl, &capsl, depth + 1)
                _grow(&out, &capout, outlen + 1)
                if p.outlab[k] != 0:
                    out[outlen] = p.outlab[k]
                    outlen += 1
                st[depth] = tgt
                sp[depth] = pos + 1
                sk[depth] = p.offsets[tgt]
                sl[depth] = outlen
                depth += 1
                if pos + 1 == n and p.finals[tgt]:
                    results.append(tuple([out[i] for i in range(outlen)]))
    finally:
        free(w); free(st); free(sp); free(sk); free(sl); free(out)
    return results
