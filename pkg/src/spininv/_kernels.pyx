# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled state-sum kernel on integer-scaled data.

The caller guarantees (by an a priori bound) that no int64 overflow occurs.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


def state_sum(int n, int rho, int ncross,
              const int64_t[:] mult_off, const int64_t[:] mult_k, const int64_t[:] mult_c,
              const int64_t[:] V, const int64_t[:] slot_cross,
              const int64_t[:] comp_start, const int64_t[:] L):
    cdef Py_ssize_t ncomp = comp_start.shape[0] - 1
    cdef int64_t[:] state = np.zeros(max(ncross, 1), dtype=np.int64)
    cdef int64_t[:] word = np.zeros(n, dtype=np.int64)
    cdef int64_t[:] tmp = np.zeros(n, dtype=np.int64)
    cdef int64_t total = 0, term, val, wi, vj, prod
    cdef Py_ssize_t c, s, i, j, k, p, base
    cdef bint done = False
    while not done:
        term = 1
        for c in range(ncomp):
            s = comp_start[c]
            base = (s * rho + state[slot_cross[s]]) * n
            for i in range(n):
                word[i] = V[base + i]
            for s in range(comp_start[c] + 1, comp_start[c + 1]):
                base = (s * rho + state[slot_cross[s]]) * n
                for k in range(n):
                    tmp[k] = 0
                for i in range(n):
                    wi = word[i]
                    if wi == 0:
                        continue
                    for j in range(n):
                        vj = V[base + j]
                        if vj == 0:
                            continue
                        prod = wi * vj
                        for p in range(mult_off[i * n + j], mult_off[i * n + j + 1]):
                            tmp[mult_k[p]] += prod * mult_c[p]
                for k in range(n):
                    word[k] = tmp[k]
            val = 0
            for i in range(n):
                val += L[c * n + i] * word[i]
            term *= val
            if term == 0:
                break
        total += term
        # next state (mixed radix counter)
        done = True
        for k in range(ncross):
            state[k] += 1
            if state[k] < rho:
                done = False
                break
            state[k] = 0
    return int(total)
