"""Exact equivalence tests for the two-sided Borel action on ``M_{mn}``.

``a ~ b`` iff there are upper triangular invertible ``X`` (``m x m``) and
``Y`` (``n x n``) with ``X a = b Y``.  The equations are linear in the entries
of ``X`` and ``Y``; the solution module ``K`` is computed with the chain-ring
kernel, and a solution with unit diagonals exists iff the reduction of ``K``
modulo the maximal ideal, projected to the diagonal coordinates, contains a
vector with no zero coordinate.  The reduction is an ``F_p``-subspace, so it
can be enumerated.

:func:`bfs_equiv` is the naive alternative: breadth-first search over raw
matrices with elementary generator moves.
"""

from __future__ import annotations

import itertools
from collections import deque

from ..errors import RingMismatch
from ..matrix import Mat, kernel


def _upper_positions(m: int) -> list[tuple[int, int]]:
    return [(r, c) for r in range(m) for c in range(r, m)]


def solution_module(a: Mat, b: Mat):
    """Kernel generators of ``X a - b Y = 0`` and the unknown layout."""
    R = a.ring
    m, n = a.shape
    xs = _upper_positions(m)
    ys = _upper_positions(n)
    nunk = len(xs) + len(ys)
    rows = []
    for r in range(m):
        for c in range(n):
            eq = [0] * nunk
            # (X a)[r, c] = sum_s X[r, s] a[s, c]
            for t, (xr, xc) in enumerate(xs):
                if xr == r:
                    eq[t] = R.add(eq[t], a[xc, c])
            # (b Y)[r, c] = sum_s b[r, s] Y[s, c]
            for t, (yr, yc) in enumerate(ys):
                if yc == c:
                    eq[len(xs) + t] = R.sub(eq[len(xs) + t], b[r, yr])
            rows.append(eq)
    M = Mat(R, len(rows), nunk, tuple(x for row in rows for x in row))
    return kernel(M), xs, ys


def _fp_basis(vectors: list[list[int]], p: int) -> list[list[int]]:
    basis: list[list[int]] = []
    pivots: list[int] = []
    for v in vectors:
        v = [x % p for x in v]
        for b, pc in zip(basis, pivots):
            if v[pc]:
                f = v[pc]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        pc = next((i for i, x in enumerate(v) if x), None)
        if pc is None:
            continue
        s = pow(v[pc], -1, p)
        v = [(s * x) % p for x in v]
        for i, b in enumerate(basis):
            if b[pc]:
                f = b[pc]
                basis[i] = [(x - f * y) % p for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(pc)
    return basis


def linear_equiv(a: Mat, b: Mat) -> bool:
    """Whether ``b`` lies in the ``B_m x B_n`` orbit of ``a``."""
    if a.ring != b.ring:
        raise RingMismatch(f"matrices over {a.ring} and {b.ring}")
    if a.shape != b.shape:
        return False
    p = a.ring.p
    K, xs, ys = solution_module(a, b)
    diag = [t for t, (r, c) in enumerate(xs) if r == c] + [len(xs) + t for t, (r, c) in enumerate(ys) if r == c]
    vectors = [[K[i, col] for i in diag] for col in range(K.cols)]
    basis = _fp_basis(vectors, p)
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [0] * len(diag)
        for c, bvec in zip(coeffs, basis):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, bvec)]
        if all(v):
            return True
    return False


def _moves(a: Mat):
    """Generator moves of the two-sided Borel action on raw matrices."""
    R = a.ring
    m, n = a.shape
    data = a.data
    for u in range(m):
        for v in range(u + 1, m):
            for s in range(1, R.size):
                out = list(data)
                for c in range(n):
                    out[u * n + c] = R.add(out[u * n + c], R.mul(s, data[v * n + c]))
                yield tuple(out)
        for s in R.unit_codes:
            if s != 1:
                out = list(data)
                for c in range(n):
                    out[u * n + c] = R.mul(s, out[u * n + c])
                yield tuple(out)
    for c in range(n):
        for c0 in range(c):
            for s in range(1, R.size):
                out = list(data)
                for r in range(m):
                    out[r * n + c] = R.add(out[r * n + c], R.mul(s, data[r * n + c0]))
                yield tuple(out)
        for s in R.unit_codes:
            if s != 1:
                out = list(data)
                for r in range(m):
                    out[r * n + c] = R.mul(s, out[r * n + c])
                yield tuple(out)


def orbit(a: Mat, limit: int = 2_000_000) -> set[tuple[int, ...]]:
    """The full two-sided orbit of ``a`` as a set of entry tuples."""
    seen = {a.data}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in _moves(x):
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise RuntimeError("orbit exceeds limit")
                queue.append(Mat(a.ring, a.rows, a.cols, y))
    return seen


def bfs_equiv(a: Mat, b: Mat, limit: int = 2_000_000) -> bool:
    if a.ring != b.ring:
        raise RingMismatch(f"matrices over {a.ring} and {b.ring}")
    if a.shape != b.shape:
        return False
    if a.data == b.data:
        return True
    seen = {a.data}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in _moves(x):
            if y == b.data:
                return True
            if y not in seen:
                seen.add(y)
                if len(seen) > limit:
                    raise RuntimeError("orbit exceeds limit")
                queue.append(Mat(a.ring, a.rows, a.cols, y))
    return False


def m2_orbit_labels(ring) -> dict[tuple[int, ...], int]:
    """Orbit id for every matrix of ``M2*``, by BFS from each unlabelled element."""
    p = ring.p
    labels: dict[tuple[int, ...], int] = {}
    nonunits = [x for x in ring.codes if x % p == 0]
    oid = 0
    for b12 in ring.unit_codes:
        for b11, b21, b22 in itertools.product(nonunits, repeat=3):
            seed = (b11, b12, b21, b22)
            if seed in labels:
                continue
            for y in orbit(Mat(ring, 2, 2, seed)):
                labels[y] = oid
            oid += 1
    return labels
