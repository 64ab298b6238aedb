# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled flag-space kernel: canonical forms, flag indexing and B-orbit closure.

Ring elements are integer codes in ``[0, Q)``; arithmetic goes through the
flattened ``Q x Q`` tables supplied by the caller.  Matrices are row-major
``int`` buffers of length ``n * n``.
"""

import numpy as np
from libc.string cimport memcpy, memset

cdef enum:
    MAXN = 8
    MAXSQ = 64


cdef class FlagKernel:
    cdef readonly int n, Q, p
    cdef readonly long long total
    cdef int nperm
    cdef int[::1] add_t, mul_t, neg_t, inv_t
    cdef long long[::1] offsets
    cdef int[::1] pos_start, pos_r, pos_c, pos_full
    cdef long long fact[MAXN]

    def __init__(self, int n, int Q, int p, add, mul, neg, inv,
                 offsets, pos_start, pos_r, pos_c, pos_full):
        if n < 1 or n > MAXN:
            raise ValueError("n out of range for the compiled kernel")
        self.n = n
        self.Q = Q
        self.p = p
        self.add_t = np.ascontiguousarray(add, dtype=np.int32)
        self.mul_t = np.ascontiguousarray(mul, dtype=np.int32)
        self.neg_t = np.ascontiguousarray(neg, dtype=np.int32)
        self.inv_t = np.ascontiguousarray(inv, dtype=np.int32)
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.pos_start = np.ascontiguousarray(pos_start, dtype=np.int32)
        self.pos_r = np.ascontiguousarray(pos_r, dtype=np.int32)
        self.pos_c = np.ascontiguousarray(pos_c, dtype=np.int32)
        self.pos_full = np.ascontiguousarray(pos_full, dtype=np.int32)
        self.nperm = len(offsets) - 1
        self.total = self.offsets[self.nperm]
        cdef int i
        self.fact[0] = 1
        for i in range(1, MAXN):
            self.fact[i] = self.fact[i - 1] * i

    # -- nogil primitives -------------------------------------------------

    cdef int _canon(self, int* m, int* piv) noexcept nogil:
        cdef int n = self.n, Q = self.Q, p = self.p
        cdef int i, j, r, f, x, pr, s
        for j in range(n):
            for i in range(j):
                f = m[piv[i] * n + j]
                if f != 0:
                    for r in range(n):
                        x = m[r * n + i]
                        if x != 0:
                            m[r * n + j] = self.add_t[m[r * n + j] * Q + self.neg_t[self.mul_t[f * Q + x]]]
            pr = -1
            for r in range(n - 1, -1, -1):
                if m[r * n + j] % p != 0:
                    pr = r
                    break
            if pr < 0:
                return -1
            piv[j] = pr
            s = self.inv_t[m[pr * n + j]]
            if s != 1:
                for r in range(n):
                    x = m[r * n + j]
                    if x != 0:
                        m[r * n + j] = self.mul_t[s * Q + x]
        return 0

    cdef long long _rank(self, int* m, int* piv) noexcept nogil:
        cdef int n = self.n, Q = self.Q, p = self.p
        cdef int j, j2, c, t, x
        cdef int Qp = Q // p
        cdef long long idx = 0, val = 0
        for j in range(n):
            c = 0
            for j2 in range(j + 1, n):
                if piv[j2] < piv[j]:
                    c += 1
            idx += c * self.fact[n - 1 - j]
        for t in range(self.pos_start[idx], self.pos_start[idx + 1]):
            x = m[self.pos_r[t] * n + self.pos_c[t]]
            if self.pos_full[t]:
                val = val * Q + x
            else:
                val = val * Qp + x // p
        return self.offsets[idx] + val

    cdef void _unrank(self, long long r, int* m) noexcept nogil:
        cdef int n = self.n, Q = self.Q, p = self.p
        cdef int lo = 0, hi = self.nperm, mid, j, c, t, i
        cdef int Qp = Q // p
        cdef int avail[MAXN]
        cdef int piv[MAXN]
        cdef long long idx, rem, radix, d
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.offsets[mid] <= r:
                lo = mid
            else:
                hi = mid
        idx = lo
        rem = r - self.offsets[lo]
        for j in range(n):
            avail[j] = j
        for j in range(n):
            c = <int>(idx // self.fact[n - 1 - j])
            idx = idx % self.fact[n - 1 - j]
            piv[j] = avail[c]
            for i in range(c, n - 1 - j):
                avail[i] = avail[i + 1]
        memset(m, 0, n * n * sizeof(int))
        for j in range(n):
            m[piv[j] * n + j] = 1
        for t in range(self.pos_start[lo + 1] - 1, self.pos_start[lo] - 1, -1):
            radix = Q if self.pos_full[t] else Qp
            d = rem % radix
            rem = rem // radix
            m[self.pos_r[t] * n + self.pos_c[t]] = <int>d if self.pos_full[t] else <int>(d * p)

    cdef void _apply(self, int* m, int kind, int u, int v, int a) noexcept nogil:
        cdef int n = self.n, Q = self.Q, c
        if kind == 0:
            for c in range(n):
                m[u * n + c] = self.add_t[m[u * n + c] * Q + self.mul_t[a * Q + m[v * n + c]]]
        else:
            for c in range(n):
                m[u * n + c] = self.mul_t[a * Q + m[u * n + c]]

    # -- Python-facing API ------------------------------------------------

    def canonical_rank(self, entries):
        """Index of the flag spanned by the columns of ``entries`` (row-major codes)."""
        cdef int m[MAXSQ]
        cdef int piv[MAXN]
        cdef int i
        if len(entries) != self.n * self.n:
            raise ValueError("wrong number of entries")
        for i in range(self.n * self.n):
            m[i] = entries[i]
        if self._canon(m, piv) < 0:
            raise ValueError("columns are not a free primitive flag")
        return self._rank(m, piv)

    def canonicalize(self, entries):
        cdef int m[MAXSQ]
        cdef int piv[MAXN]
        cdef int i
        for i in range(self.n * self.n):
            m[i] = entries[i]
        if self._canon(m, piv) < 0:
            raise ValueError("columns are not a free primitive flag")
        return [m[i] for i in range(self.n * self.n)]

    def unrank(self, long long r):
        cdef int m[MAXSQ]
        cdef int i
        if r < 0 or r >= self.total:
            raise IndexError(r)
        self._unrank(r, m)
        return [m[i] for i in range(self.n * self.n)]

    def orbits(self, gens):
        """Left orbits of the generated group on all flags.

        Returns ``(labels, reps, sizes)``: orbit id per flag index, the least
        flag index in each orbit, and orbit sizes, orbits numbered in order of
        their least element.
        """
        cdef int[:, ::1] g = np.ascontiguousarray(gens, dtype=np.int32)
        cdef long long total = self.total
        labels_arr = np.full(total, -1, dtype=np.int32)
        queue_arr = np.empty(max(total, 1), dtype=np.int64)
        reps_arr = np.empty(max(total, 1), dtype=np.int64)
        sizes_arr = np.empty(max(total, 1), dtype=np.int64)
        cdef int[::1] lab = labels_arr
        cdef long long[::1] qu = queue_arr
        cdef long long[::1] reps = reps_arr
        cdef long long[::1] sizes = sizes_arr
        cdef int m[MAXSQ]
        cdef int t[MAXSQ]
        cdef int piv[MAXN]
        cdef long long seed, r, rr, head = 0, tail = 0, start
        cdef int norb = 0, gi, G = g.shape[0], nn = self.n * self.n
        with nogil:
            for seed in range(total):
                if lab[seed] >= 0:
                    continue
                start = tail
                lab[seed] = norb
                qu[tail] = seed
                tail += 1
                while head < tail:
                    r = qu[head]
                    head += 1
                    self._unrank(r, m)
                    for gi in range(G):
                        memcpy(t, m, nn * sizeof(int))
                        self._apply(t, g[gi, 0], g[gi, 1], g[gi, 2], g[gi, 3])
                        self._canon(t, piv)
                        rr = self._rank(t, piv)
                        if lab[rr] < 0:
                            lab[rr] = norb
                            qu[tail] = rr
                            tail += 1
                reps[norb] = seed
                sizes[norb] = tail - start
                norb += 1
        return labels_arr, reps_arr[:norb].copy(), sizes_arr[:norb].copy()

    def orbit_contains(self, long long seed, long long target, gens):
        """Whether ``target`` lies in the orbit of ``seed`` (BFS with early exit)."""
        cdef int[:, ::1] g = np.ascontiguousarray(gens, dtype=np.int32)
        seen_arr = np.zeros(self.total, dtype=np.uint8)
        queue_arr = np.empty(self.total, dtype=np.int64)
        cdef unsigned char[::1] seen = seen_arr
        cdef long long[::1] qu = queue_arr
        cdef int m[MAXSQ]
        cdef int t[MAXSQ]
        cdef int piv[MAXN]
        cdef long long r, rr, head = 0, tail = 0
        cdef int gi, G = g.shape[0], nn = self.n * self.n
        cdef bint found = seed == target
        if found:
            return True
        seen[seed] = 1
        qu[tail] = seed
        tail += 1
        with nogil:
            while head < tail and not found:
                r = qu[head]
                head += 1
                self._unrank(r, m)
                for gi in range(G):
                    memcpy(t, m, nn * sizeof(int))
                    self._apply(t, g[gi, 0], g[gi, 1], g[gi, 2], g[gi, 3])
                    self._canon(t, piv)
                    rr = self._rank(t, piv)
                    if not seen[rr]:
                        if rr == target:
                            found = True
                            break
                        seen[rr] = 1
                        qu[tail] = rr
                        tail += 1
        return bool(found)
