"""Pure-Python flag kernel, interface-compatible with the compiled ``_kernel``.

Used when the extension is not built, and as a cross-check in the tests.
"""

from __future__ import annotations

from collections import deque
from math import factorial

import numpy as np


class FlagKernel:
    def __init__(self, n, Q, p, add, mul, neg, inv, offsets, pos_start, pos_r, pos_c, pos_full):
        self.n = n
        self.Q = Q
        self.p = p
        self.add_t = [int(x) for x in add]
        self.mul_t = [int(x) for x in mul]
        self.neg_t = [int(x) for x in neg]
        self.inv_t = [int(x) for x in inv]
        self.offsets = [int(x) for x in offsets]
        self.pos_start = [int(x) for x in pos_start]
        self.pos_r = [int(x) for x in pos_r]
        self.pos_c = [int(x) for x in pos_c]
        self.pos_full = [int(x) for x in pos_full]
        self.nperm = len(self.offsets) - 1
        self.total = self.offsets[-1]
        self.fact = [factorial(i) for i in range(n + 1)]

    def _canon(self, m):
        n, Q, p = self.n, self.Q, self.p
        add, mul, neg, inv = self.add_t, self.mul_t, self.neg_t, self.inv_t
        piv = []
        for j in range(n):
            for i in range(j):
                f = m[piv[i] * n + j]
                if f:
                    for r in range(n):
                        x = m[r * n + i]
                        if x:
                            m[r * n + j] = add[m[r * n + j] * Q + neg[mul[f * Q + x]]]
            pr = next((r for r in range(n - 1, -1, -1) if m[r * n + j] % p), -1)
            if pr < 0:
                return None
            piv.append(pr)
            s = inv[m[pr * n + j]]
            if s != 1:
                for r in range(n):
                    x = m[r * n + j]
                    if x:
                        m[r * n + j] = mul[s * Q + x]
        return piv

    def _rank(self, m, piv):
        n, Q, p = self.n, self.Q, self.p
        idx = 0
        for j in range(n):
            c = sum(1 for j2 in range(j + 1, n) if piv[j2] < piv[j])
            idx += c * self.fact[n - 1 - j]
        val = 0
        Qp = Q // p
        for t in range(self.pos_start[idx], self.pos_start[idx + 1]):
            x = m[self.pos_r[t] * n + self.pos_c[t]]
            val = val * Q + x if self.pos_full[t] else val * Qp + x // p
        return self.offsets[idx] + val

    def _unrank(self, r):
        n, Q, p = self.n, self.Q, self.p
        lo, hi = 0, self.nperm
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.offsets[mid] <= r:
                lo = mid
            else:
                hi = mid
        rem = r - self.offsets[lo]
        idx = lo
        avail = list(range(n))
        piv = []
        for j in range(n):
            c, idx = divmod(idx, self.fact[n - 1 - j])
            piv.append(avail.pop(c))
        m = [0] * (n * n)
        for j, pr in enumerate(piv):
            m[pr * n + j] = 1
        Qp = Q // p
        for t in range(self.pos_start[lo + 1] - 1, self.pos_start[lo] - 1, -1):
            full = self.pos_full[t]
            rem, d = divmod(rem, Q if full else Qp)
            m[self.pos_r[t] * n + self.pos_c[t]] = d if full else d * p
        return m

    def _apply(self, m, kind, u, v, a):
        n, Q = self.n, self.Q
        if kind == 0:
            for c in range(n):
                m[u * n + c] = self.add_t[m[u * n + c] * Q + self.mul_t[a * Q + m[v * n + c]]]
        else:
            for c in range(n):
                m[u * n + c] = self.mul_t[a * Q + m[u * n + c]]

    def canonical_rank(self, entries):
        m = list(entries)
        if len(m) != self.n * self.n:
            raise ValueError("wrong number of entries")
        piv = self._canon(m)
        if piv is None:
            raise ValueError("columns are not a free primitive flag")
        return self._rank(m, piv)

    def canonicalize(self, entries):
        m = list(entries)
        if self._canon(m) is None:
            raise ValueError("columns are not a free primitive flag")
        return m

    def unrank(self, r):
        if not 0 <= r < self.total:
            raise IndexError(r)
        return self._unrank(r)

    def _neighbours(self, r, gens):
        m = self._unrank(r)
        for kind, u, v, a in gens:
            t = list(m)
            self._apply(t, kind, u, v, a)
            piv = self._canon(t)
            yield self._rank(t, piv)

    def orbits(self, gens):
        gens = [tuple(int(x) for x in g) for g in gens]
        labels = np.full(self.total, -1, dtype=np.int32)
        reps, sizes = [], []
        for seed in range(self.total):
            if labels[seed] >= 0:
                continue
            norb = len(reps)
            labels[seed] = norb
            queue = deque([seed])
            size = 1
            while queue:
                r = queue.popleft()
                for rr in self._neighbours(r, gens):
                    if labels[rr] < 0:
                        labels[rr] = norb
                        queue.append(rr)
                        size += 1
            reps.append(seed)
            sizes.append(size)
        return labels, np.array(reps, dtype=np.int64), np.array(sizes, dtype=np.int64)

    def orbit_contains(self, seed, target, gens):
        if seed == target:
            return True
        gens = [tuple(int(x) for x in g) for g in gens]
        seen = {seed}
        queue = deque([seed])
        while queue:
            r = queue.popleft()
            for rr in self._neighbours(r, gens):
                if rr not in seen:
                    if rr == target:
                        return True
                    seen.add(rr)
                    queue.append(rr)
        return False
