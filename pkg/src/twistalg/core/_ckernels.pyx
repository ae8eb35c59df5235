# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the prime-field kernels in ``_kernels_py``."""

from libc.stdlib cimport malloc, free


cdef long long _inv(long long a, long long p):
    # extended Euclid; a is nonzero mod p
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(rows, Py_ssize_t ncols, long long p):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, c, r = 0, piv
    cdef long long f, inv, v
    cdef long long *m
    if nrows == 0 or ncols == 0:
        return [], []
    m = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    pivots = []
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                v = row[j] % p
                m[i * ncols + j] = v
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    v = m[r * ncols + j]
                    m[r * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = v
            inv = _inv(m[r * ncols + c], p)
            if inv != 1:
                for j in range(c, ncols):
                    m[r * ncols + j] = m[r * ncols + j] * inv % p
            for i in range(nrows):
                if i != r:
                    f = m[i * ncols + c]
                    if f != 0:
                        for j in range(c, ncols):
                            if m[r * ncols + j] != 0:
                                v = (m[i * ncols + j] - f * m[r * ncols + j]) % p
                                if v < 0:
                                    v += p
                                m[i * ncols + j] = v
            pivots.append(c)
            r += 1
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(m)
    return out, pivots


def series_mul_modp(a, b, Py_ssize_t n, long long p):
    cdef Py_ssize_t la = min(len(a), n), lb = min(len(b), n)
    cdef Py_ssize_t i, j, lim
    cdef long long ai
    cdef long long *acc
    cdef long long *bb
    if n <= 0:
        return []
    acc = <long long *> malloc(n * sizeof(long long))
    bb = <long long *> malloc((lb if lb > 0 else 1) * sizeof(long long))
    if acc == NULL or bb == NULL:
        free(acc)
        free(bb)
        raise MemoryError()
    try:
        for i in range(n):
            acc[i] = 0
        for j in range(lb):
            bb[j] = b[j] % p
        for i in range(la):
            ai = a[i] % p
            if ai != 0:
                lim = lb if lb < n - i else n - i
                for j in range(lim):
                    if bb[j] != 0:
                        acc[i + j] = (acc[i + j] + ai * bb[j]) % p
        out = [acc[i] for i in range(n)]
    finally:
        free(acc)
        free(bb)
    return out
