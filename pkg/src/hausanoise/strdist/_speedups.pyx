# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled edit-distance kernels.

Reference semantics live in ``_pure.py``; the two backends must agree
exactly, including backtrace tie-breaking in ``align_substitutions``.
"""

from libc.stdlib cimport free, malloc

BACKEND = "c-extension"


cdef inline Py_ssize_t _lev_flat(const int *a, Py_ssize_t m,
                                 const int *b, Py_ssize_t n,
                                 Py_ssize_t *prev, Py_ssize_t *cur) noexcept nogil:
    cdef Py_ssize_t i, j, best, up, left
    cdef Py_ssize_t *swp
    cdef int ca
    if m == 0:
        return n
    if n == 0:
        return m
    for j in range(n + 1):
        prev[j] = j
    for i in range(1, m + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, n + 1):
            best = prev[j - 1] + (0 if ca == b[j - 1] else 1)
            up = prev[j] + 1
            if up < best:
                best = up
            left = cur[j - 1] + 1
            if left < best:
                best = left
            cur[j] = best
        swp = prev
        prev = cur
        cur = swp
    return prev[n]


def levenshtein(str a, str b):
    """Edit distance between two strings over Unicode scalar values."""
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(b)
    if m == 0:
        return n
    if n == 0:
        return m
    cdef int *buf = <int *> malloc((m + n) * sizeof(int))
    cdef Py_ssize_t *rows = <Py_ssize_t *> malloc(2 * (min(m, n) + 1) * sizeof(Py_ssize_t))
    if buf == NULL or rows == NULL:
        free(buf)
        free(rows)
        raise MemoryError()
    cdef Py_ssize_t i, dist
    try:
        for i in range(m):
            buf[i] = <int> (<Py_UCS4> a[i])
        for i in range(n):
            buf[m + i] = <int> (<Py_UCS4> b[i])
        if m >= n:
            dist = _lev_flat(buf, m, buf + m, n, rows, rows + n + 1)
        else:
            dist = _lev_flat(buf + m, n, buf, m, rows, rows + m + 1)
        return dist
    finally:
        free(buf)
        free(rows)


def pairwise_normalized(list words, double[:, :] out):
    """Fill ``out`` (zeroed, shape (n, n)) with normalized distances
    between all pairs of ``words``."""
    cdef Py_ssize_t n = len(words)
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t maxlen = 0
    cdef Py_ssize_t i, j, k, li, lj, denom
    cdef str w
    for i in range(n):
        li = len(<str> words[i])
        total += li
        if li > maxlen:
            maxlen = li
    cdef int *flat = <int *> malloc((total if total else 1) * sizeof(int))
    cdef Py_ssize_t *offs = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *rows = <Py_ssize_t *> malloc(2 * (maxlen + 1) * sizeof(Py_ssize_t))
    if flat == NULL or offs == NULL or rows == NULL:
        free(flat)
        free(offs)
        free(rows)
        raise MemoryError()
    cdef double d
    try:
        offs[0] = 0
        for i in range(n):
            w = <str> words[i]
            li = len(w)
            for k in range(li):
                flat[offs[i] + k] = <int> (<Py_UCS4> w[k])
            offs[i + 1] = offs[i] + li
        with nogil:
            for i in range(n):
                li = offs[i + 1] - offs[i]
                for j in range(i + 1, n):
                    lj = offs[j + 1] - offs[j]
                    denom = li if li > lj else lj
                    if denom == 0:
                        d = 0.0
                    elif li >= lj:
                        d = _lev_flat(flat + offs[i], li, flat + offs[j], lj,
                                      rows, rows + lj + 1) / <double> denom
                    else:
                        d = _lev_flat(flat + offs[j], lj, flat + offs[i], li,
                                      rows, rows + li + 1) / <double> denom
                    out[i, j] = d
                    out[j, i] = d
    finally:
        free(flat)
        free(offs)
        free(rows)
    return out


def align_substitutions(str a, str b):
    """Index pairs aligned as substitutions in one optimal alignment.

    Ties resolve match > substitution > deletion > insertion, matching the
    pure backend.
    """
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(b)
    pairs = []
    if m == 0 or n == 0:
        return pairs
    cdef int *ca = <int *> malloc((m + n) * sizeof(int))
    cdef Py_ssize_t *dp = <Py_ssize_t *> malloc((m + 1) * (n + 1) * sizeof(Py_ssize_t))
    if ca == NULL or dp == NULL:
        free(ca)
        free(dp)
        raise MemoryError()
    cdef int *cb = ca + m
    cdef Py_ssize_t i, j, w, best, up, left, here
    try:
        for i in range(m):
            ca[i] = <int> (<Py_UCS4> a[i])
        for j in range(n):
            cb[j] = <int> (<Py_UCS4> b[j])
        w = n + 1
        for i in range(m + 1):
            dp[i * w] = i
        for j in range(n + 1):
            dp[j] = j
        for i in range(1, m + 1):
            for j in range(1, n + 1):
                best = dp[(i - 1) * w + (j - 1)] + (0 if ca[i - 1] == cb[j - 1] else 1)
                up = dp[(i - 1) * w + j] + 1
                if up < best:
                    best = up
                left = dp[i * w + (j - 1)] + 1
                if left < best:
                    best = left
                dp[i * w + j] = best
        i = m
        j = n
        while i > 0 and j > 0:
            here = dp[i * w + j]
            if ca[i - 1] == cb[j - 1] and here == dp[(i - 1) * w + (j - 1)]:
                i -= 1
                j -= 1
            elif here == dp[(i - 1) * w + (j - 1)] + 1:
                pairs.append((i - 1, j - 1))
                i -= 1
                j -= 1
            elif here == dp[(i - 1) * w + j] + 1:
                i -= 1
            else:
                j -= 1
    finally:
        free(ca)
        free(dp)
    pairs.reverse()
    return pairs
