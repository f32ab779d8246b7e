# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled separation kernel; same contract as ``_slt_kernel_py``.

Truth tables live in 64-bit words, so at most six first-order variables are
handled here.  Larger inputs are delegated to the pure-Python kernel.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

from . import _slt_kernel_py

NAME = "cython"

cdef int MAX_VARS = 6


cdef uint64_t _run(int* prog, int plen, int* choice, int* arities, uint64_t* tables,
                   uint64_t full, uint64_t* stack) nogil:
    cdef int sp = 0
    cdef int i, op, j, k, c
    cdef uint64_t value
    for i in range(plen):
        op = prog[i]
        if op >= 0:
            stack[sp] = tables[op]
            sp += 1
            continue
        j = -op - 1
        k = arities[j]
        c = choice[j]
        if c == 0:
            value = 0
        elif c == 1:
            value = full
        else:
            value = stack[sp - k + (c - 2)]
        sp -= k
        stack[sp] = value
        sp += 1
    return stack[sp - 1]


def search(prog1, prog2, int nvars, arities):
    if nvars > MAX_VARS:
        return _slt_kernel_py.search(prog1, prog2, nvars, arities)
    cdef int n1 = len(prog1), n2 = len(prog2), m = len(arities)
    cdef int* p1 = <int*> malloc(max(n1, 1) * sizeof(int))
    cdef int* p2 = <int*> malloc(max(n2, 1) * sizeof(int))
    cdef int* ar = <int*> malloc(max(m, 1) * sizeof(int))
    cdef int* choice = <int*> malloc(max(m, 1) * sizeof(int))
    cdef uint64_t* stack = <uint64_t*> malloc((max(n1, n2) + 1) * sizeof(uint64_t))
    cdef uint64_t tables[6]
    cdef uint64_t full, diff
    cdef int i, pos, row
    cdef int rows = 1 << nvars
    cdef bint found = False
    try:
        for i in range(n1):
            p1[i] = prog1[i]
        for i in range(n2):
            p2[i] = prog2[i]
        for i in range(m):
            ar[i] = arities[i]
            choice[i] = 0
        for i, t in enumerate(_slt_kernel_py.variable_tables(nvars)):
            tables[i] = t
        full = (<uint64_t> 0xFFFFFFFFFFFFFFFF) if rows == 64 else ((<uint64_t> 1) << rows) - 1
        with nogil:
            while True:
                diff = _run(p1, n1, choice, ar, tables, full, stack) ^ _run(p2, n2, choice, ar, tables, full, stack)
                if diff:
                    found = True
                    break
                # advance the mixed-radix counter; the last variable moves fastest
                pos = m - 1
                while pos >= 0:
                    choice[pos] += 1
                    if choice[pos] < ar[pos] + 2:
                        break
                    choice[pos] = 0
                    pos -= 1
                if pos < 0:
                    break
        if not found:
            return None
        row = 0
        while not ((diff >> row) & 1):
            row += 1
        return tuple(choice[i] for i in range(m)), row
    finally:
        free(p1)
        free(p2)
        free(ar)
        free(choice)
        free(stack)
