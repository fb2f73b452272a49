# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled enumeration kernel; mirrors _kernel_py.enumerate_counts.

Flattened inputs: value lists and factorization tables come in CSR form.
Only per-coordinate and weak-campana kinds are supported here; the custom
kind stays on the Python fallback.
"""

from libc.stdlib cimport free, malloc


def enumerate_counts_flat(
    long long[::1] vals,        # concatenated admissible values
    long long[::1] voff,        # n+1 offsets into vals
    long long[::1] fprimes,     # concatenated primes, per value
    int[::1] fexps,             # concatenated exponents, per value
    long long[::1] foff,        # len(vals)+1 offsets into fprimes/fexps
    int[:, ::1] expo,           # n x k exponent matrix
    long long[::1] b_list,      # ascending bounds
    int kind_code,              # 0 percoord, 1 weak
    int weak_total,
    const unsigned char[::1] faces,   # 2^n face indicator
    long long[::1] s_primes,
):
    cdef Py_ssize_t n = voff.shape[0] - 1
    cdef Py_ssize_t k = expo.shape[1]
    cdef Py_ssize_t nb = b_list.shape[0]
    cdef long long bmax = b_list[nb - 1]
    cdef Py_ssize_t i, j, t, e, c, lo, hi, mid
    cdef long long v, m, h, p
    cdef int ok

    cdef long long* hist = <long long*> malloc((nb + 1) * sizeof(long long))
    cdef long long* rows = <long long*> malloc((n + 1) * k * sizeof(long long))
    cdef long long* pos = <long long*> malloc(n * sizeof(long long))
    # per-tuple prime merge scratch (at most 64 primes per value, n values)
    cdef Py_ssize_t cap = 64 * n + 8
    cdef long long* mp = <long long*> malloc(cap * sizeof(long long))
    cdef long long* mmask = <long long*> malloc(cap * sizeof(long long))
    cdef long long* msum = <long long*> malloc(cap * sizeof(long long))
    if not hist or not rows or not pos or not mp or not mmask or not msum:
        raise MemoryError()
    for i in range(nb + 1):
        hist[i] = 0
    for j in range(k):
        rows[j] = 1
    for i in range(n):
        pos[i] = 0

    cdef Py_ssize_t nprimes, u, w
    cdef long long minval, vidx
    cdef bint found
    t = 0
    try:
        while t >= 0:
            if pos[t] >= voff[t + 1] - voff[t]:
                t -= 1
                if t >= 0:
                    pos[t] += 1
                continue
            v = vals[voff[t] + pos[t]]
            minval = bmax + 1
            for j in range(k):
                m = rows[t * k + j]
                e = expo[t, j]
                if e and v > 1:
                    while e:
                        if m > bmax // v:
                            m = bmax + 1
                            break
                        m *= v
                        e -= 1
                rows[(t + 1) * k + j] = m
                if m < minval:
                    minval = m
            if minval > bmax:
                t -= 1
                if t >= 0:
                    pos[t] += 1
                continue
            if t == n - 1:
                h = 0
                for j in range(k):
                    if rows[n * k + j] > h:
                        h = rows[n * k + j]
                if h <= bmax:
                    # merge prime supports
                    nprimes = 0
                    ok = 1
                    for i in range(n):
                        vidx = voff[i] + pos[i]
                        for u in range(foff[vidx], foff[vidx + 1]):
                            p = fprimes[u]
                            found = False
                            for w in range(nprimes):
                                if mp[w] == p:
                                    mmask[w] |= <long long> 1 << i
                                    msum[w] += fexps[u]
                                    found = True
                                    break
                            if not found:
                                mp[nprimes] = p
                                mmask[nprimes] = <long long> 1 << i
                                msum[nprimes] = fexps[u]
                                nprimes += 1
                    for w in range(nprimes):
                        if not faces[mmask[w]]:
                            ok = 0
                            break
                        if kind_code == 1 and msum[w] < weak_total:
                            found = False
                            for u in range(s_primes.shape[0]):
                                if s_primes[u] == mp[w]:
                                    found = True
                                    break
                            if not found:
                                ok = 0
                                break
                    if ok:
                        # first schedule index with b >= h
                        lo = 0
                        hi = nb
                        while lo < hi:
                            mid = (lo + hi) >> 1
                            if b_list[mid] < h:
                                lo = mid + 1
                            else:
                                hi = mid
                        hist[lo] += 1
                pos[t] += 1
            else:
                t += 1
                pos[t] = 0

        counts = []
        run = 0
        for i in range(nb):
            run += hist[i]
            counts.append(run)
        return counts
    finally:
        free(hist)
        free(rows)
        free(pos)
        free(mp)
        free(mmask)
        free(msum)
