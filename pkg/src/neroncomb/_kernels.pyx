# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice-point enumeration; same contract as ``_kernels_py.enumerate_points``.

All arithmetic is int64; the dispatcher in ``kernels`` only routes inputs here
when every intermediate value fits.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


def enumerate_points(lo, hi, long long total, constraints, long long scale):
    cdef Py_ssize_t n = len(lo)
    if n == 0:
        return [()] if total == 0 else []

    cons = []
    for members, lower, upper in constraints:
        members = tuple(members)
        if members:
            cons.append((max(members), members, lower, upper))
    cons.sort(key=lambda c: c[0])
    cdef Py_ssize_t nc = len(cons)
    cdef Py_ssize_t nmem = 0
    for c in cons:
        nmem += len(c[1])

    cdef int64_t *xlo = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *xhi = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *suf_lo = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *suf_hi = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *x = <int64_t *> malloc(n * sizeof(int64_t))
    cdef int64_t *prefix = <int64_t *> malloc((n + 1) * sizeof(int64_t))
    cdef int64_t *upto = <int64_t *> malloc(n * sizeof(int64_t))
    cdef Py_ssize_t *first = <Py_ssize_t *> malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *moff = <Py_ssize_t *> malloc((nc + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *mem = <Py_ssize_t *> malloc((nmem + 1) * sizeof(Py_ssize_t))
    cdef int64_t *clo = <int64_t *> malloc((nc + 1) * sizeof(int64_t))
    cdef int64_t *chi = <int64_t *> malloc((nc + 1) * sizeof(int64_t))

    cdef Py_ssize_t i, j, k, p
    cdef int64_t a, b, rest, s
    cdef bint ok
    out = []
    try:
        for i in range(n):
            xlo[i] = lo[i]
            xhi[i] = hi[i]
        suf_lo[n] = 0
        suf_hi[n] = 0
        for i in range(n - 1, -1, -1):
            suf_lo[i] = suf_lo[i + 1] + xlo[i]
            suf_hi[i] = suf_hi[i + 1] + xhi[i]
        p = 0
        k = 0
        for i in range(n + 1):
            first[i] = 0
        for j in range(nc):
            depth, members, lower, upper = cons[j]
            moff[j] = p
            for m in members:
                mem[p] = m
                p += 1
            clo[j] = lower
            chi[j] = upper
        moff[nc] = p
        # first[i]..first[i+1] are the constraints completed at depth i
        j = 0
        for i in range(n):
            first[i] = j
            while j < nc and cons[j][0] == i:
                j += 1
        first[n] = nc

        # iterative depth-first search; upto[i] is the last admissible value at depth i
        i = 0
        prefix[0] = 0
        rest = total
        a = xlo[0] if xlo[0] > rest - suf_hi[1] else rest - suf_hi[1]
        b = xhi[0] if xhi[0] < rest - suf_lo[1] else rest - suf_lo[1]
        x[0] = a - 1
        upto[0] = b
        while i >= 0:
            x[i] += 1
            if x[i] > upto[i]:
                i -= 1
                continue
            ok = True
            for j in range(first[i], first[i + 1]):
                s = 0
                for k in range(moff[j], moff[j + 1]):
                    s += x[mem[k]]
                s *= scale
                if s < clo[j] or s > chi[j]:
                    ok = False
                    break
            if not ok:
                continue
            if i == n - 1:
                out.append(tuple([x[k] for k in range(n)]))
                continue
            prefix[i + 1] = prefix[i] + x[i]
            i += 1
            rest = total - prefix[i]
            a = xlo[i] if xlo[i] > rest - suf_hi[i + 1] else rest - suf_hi[i + 1]
            b = xhi[i] if xhi[i] < rest - suf_lo[i + 1] else rest - suf_lo[i + 1]
            x[i] = a - 1
            upto[i] = b
    finally:
        free(xlo); free(xhi); free(suf_lo); free(suf_hi); free(x); free(prefix)
        free(upto); free(first); free(moff); free(mem); free(clo); free(chi)
    return out


def coset_keys(rows, moduli, vectors):
    cdef Py_ssize_t nr = len(rows)
    if nr == 0:
        return [() for _ in vectors]
    cdef Py_ssize_t n = len(rows[0])
    cdef int64_t *r = <int64_t *> malloc(nr * n * sizeof(int64_t))
    cdef int64_t *mods = <int64_t *> malloc(nr * sizeof(int64_t))
    cdef int64_t *v = <int64_t *> malloc(n * sizeof(int64_t))
    cdef Py_ssize_t i, j
    cdef int64_t x, m
    out = []
    try:
        for i in range(nr):
            mods[i] = moduli[i]
            for j in range(n):
                r[i * n + j] = rows[i][j]
        for vec in vectors:
            for j in range(n):
                v[j] = vec[j]
            key = []
            for i in range(nr):
                x = 0
                for j in range(n):
                    x += r[i * n + j] * v[j]
                m = mods[i]
                if m:
                    x %= m
                    if x < 0:
                        x += m
                key.append(x)
            out.append(tuple(key))
    finally:
        free(r); free(mods); free(v)
    return out
