# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: rank over Z/2 and integer diagonalization."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free, llabs

cdef extern from *:
    bint __builtin_mul_overflow(long long a, long long b, long long *r) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long *r) nogil


def gf2_rank(a):
    """Rank over Z/2 of a dense 0/1 matrix (2D integer array)."""
    cdef const long long[:, :] m = _as_int64(a)
    cdef Py_ssize_t nr = m.shape[0], nc = m.shape[1]
    cdef Py_ssize_t words = (nc + 63) // 64
    cdef Py_ssize_t i, j, k, r, rank = 0
    cdef uint64_t *buf
    cdef uint64_t w
    if nr == 0 or nc == 0:
        return 0
    buf = <uint64_t *> malloc(nr * words * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(nr * words):
                buf[i] = 0
            for i in range(nr):
                for j in range(nc):
                    if m[i, j] & 1:
                        buf[i * words + j // 64] |= (<uint64_t> 1) << (j % 64)
            r = 0
            for j in range(nc):
                if r >= nr:
                    break
                k = -1
                for i in range(r, nr):
                    if (buf[i * words + j // 64] >> (j % 64)) & 1:
                        k = i
                        break
                if k < 0:
                    continue
                if k != r:
                    for i in range(words):
                        w = buf[k * words + i]
                        buf[k * words + i] = buf[r * words + i]
                        buf[r * words + i] = w
                for i in range(r + 1, nr):
                    if (buf[i * words + j // 64] >> (j % 64)) & 1:
                        for k in range(j // 64, words):
                            buf[i * words + k] ^= buf[r * words + k]
                r += 1
            rank = r
    finally:
        free(buf)
    return rank


def _as_int64(a):
    import numpy as np
    return np.ascontiguousarray(a, dtype=np.int64)


def snf_diagonal(a, bint check_overflow=True):
    """Nonzero diagonal of a diagonalization of a dense integer matrix.

    Raises ``OverflowError`` when an intermediate entry does not fit in a
    signed 64-bit integer; callers then retry with Python integers.
    """
    import numpy as np
    arr = np.array(a, dtype=np.int64, copy=True, order="C")
    cdef long long[:, :] m = arr
    cdef Py_ssize_t nr = m.shape[0], nc = m.shape[1]
    cdef Py_ssize_t i, j, pi, pj, n_active_r, n_active_c
    cdef long long p, v, q, t, best
    cdef bint done, overflow = False
    out = []
    if nr == 0 or nc == 0:
        return out
    cdef char *rdead = <char *> malloc(nr)
    cdef char *cdead = <char *> malloc(nc)
    if rdead == NULL or cdead == NULL:
        free(rdead)
        free(cdead)
        raise MemoryError()
    try:
        for i in range(nr):
            rdead[i] = 0
        for j in range(nc):
            cdead[j] = 0
        while True:
            best = 0
            pi = -1
            pj = -1
            with nogil:
                for i in range(nr):
                    if rdead[i]:
                        continue
                    for j in range(nc):
                        if cdead[j]:
                            continue
                        v = llabs(m[i, j])
                        if v and (best == 0 or v < best):
                            best = v
                            pi = i
                            pj = j
                            if v == 1:
                                break
                    if best == 1:
                        break
            if pi < 0:
                return out
            with nogil:
                while True:
                    p = m[pi, pj]
                    done = True
                    for i in range(nr):
                        if rdead[i] or i == pi:
                            continue
                        v = m[i, pj]
                        if v:
                            q = v // p
                            if q:
                                for j in range(nc):
                                    if cdead[j] or m[pi, j] == 0:
                                        continue
                                    if __builtin_mul_overflow(q, m[pi, j], &t) or \
                                            __builtin_sub_overflow(m[i, j], t, &m[i, j]):
                                        overflow = True
                                        break
                                if overflow:
                                    break
                            if m[i, pj]:
                                done = False
                    if overflow:
                        break
                    for j in range(nc):
                        if cdead[j] or j == pj:
                            continue
                        v = m[pi, j]
                        if v:
                            q = v // p
                            if q:
                                for i in range(nr):
                                    if rdead[i] or m[i, pj] == 0:
                                        continue
                                    if __builtin_mul_overflow(q, m[i, pj], &t) or \
                                            __builtin_sub_overflow(m[i, j], t, &m[i, j]):
                                        overflow = True
                                        break
                                if overflow:
                                    break
                            if m[pi, j]:
                                done = False
                    if overflow or done:
                        break
                    best = llabs(m[pi, pj])
                    for i in range(nr):
                        if not rdead[i] and m[i, pj] and llabs(m[i, pj]) < best:
                            best = llabs(m[i, pj])
                            pi = i
                    for j in range(nc):
                        if not cdead[j] and m[pi, j] and llabs(m[pi, j]) < best:
                            best = llabs(m[pi, j])
                            pj = j
            if overflow:
                if check_overflow:
                    raise OverflowError("entry left the int64 range")
                raise OverflowError("int64 overflow")
            out.append(int(llabs(m[pi, pj])))
            rdead[pi] = 1
            cdead[pj] = 1
    finally:
        free(rdead)
        free(cdead)
