"""The finite flag space ``G/B`` with a perfect index.

A coset ``gB`` is represented by the column-reduced form of ``g`` under right
``B`` moves (scale a column by a unit, add earlier columns to later ones):
column ``j`` has a 1 in its pivot row, zeros in the pivot rows of earlier
columns, and non-units below its pivot.  The pivot row of a column is its
lowest unit entry once earlier pivots are cleared.  Cosets with pivot
sequence ``w`` are indexed by mixed-radix digits of their free entries; the
index blocks are laid out in lexicographic order of ``w``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import NonInvertible
from ..matrix import Mat
from ..ring import RingSpec
from .backend import kernel_class


def residue_flag_count(q: int, n: int) -> int:
    """Number of complete flags in ``F_q^n``."""
    total = 1
    for m in range(1, n + 1):
        total *= (q**m - 1) // (q - 1)
    return total


def flag_count_formula(ring: RingSpec, n: int) -> int:
    return residue_flag_count(ring.q, n) * ring.q ** ((ring.k - 1) * n * (n - 1) // 2)


def ring_tables(ring: RingSpec):
    Q = ring.size
    add = np.array([ring.add(x, y) for x in range(Q) for y in range(Q)], dtype=np.int32)
    mul = np.array([ring.mul(x, y) for x in range(Q) for y in range(Q)], dtype=np.int32)
    neg = np.array([ring.neg(x) for x in range(Q)], dtype=np.int32)
    inv = np.array([ring.inv(x) if ring.is_unit(x) else -1 for x in range(Q)], dtype=np.int32)
    return add, mul, neg, inv


def perm_tables(n: int, Q: int, p: int):
    """Index layout: per pivot sequence, the free positions and their radices."""
    offsets = [0]
    pos_start = [0]
    pos_r, pos_c, pos_full = [], [], []
    for piv in itertools.permutations(range(n)):
        size = 1
        for j in range(n):
            used = set(piv[: j + 1])
            for r in range(n):
                if r in used:
                    continue
                full = r < piv[j]
                pos_r.append(r)
                pos_c.append(j)
                pos_full.append(1 if full else 0)
                size *= Q if full else Q // p
        offsets.append(offsets[-1] + size)
        pos_start.append(len(pos_r))
    return (
        np.array(offsets, dtype=np.int64),
        np.array(pos_start, dtype=np.int32),
        np.array(pos_r, dtype=np.int32),
        np.array(pos_c, dtype=np.int32),
        np.array(pos_full, dtype=np.int32),
    )


def unit_group_generators(ring: RingSpec) -> list[int]:
    """A small generating set of ``A^x``, chosen greedily in code order."""
    units = set(ring.unit_codes)
    gens: list[int] = []
    sub = {1}
    while sub != units:
        g = min(units - sub)
        gens.append(g)
        frontier = list(sub)
        while frontier:
            new = []
            for x in frontier:
                for h in gens:
                    y = ring.mul(x, h)
                    if y not in sub:
                        sub.add(y)
                        new.append(y)
            frontier = new
    return gens


def borel_generators(ring: RingSpec, n: int, kind: str = "full") -> np.ndarray:
    """Left-action generators of ``B`` as rows ``(op, u, v, a)``.

    ``op == 0``: row ``u`` += ``a`` * row ``v`` (``u < v``); ``op == 1``: row ``u`` *= ``a``.
    ``"full"`` uses every nonzero ``a`` and every non-identity unit;
    ``"minimal"`` uses additive generators ``pi^r`` (just 1 for ``zpk``) and a
    greedy generating set of the unit group.
    """
    if kind == "full":
        amounts = list(range(1, ring.size))
        scalars = [u for u in ring.unit_codes if u != 1]
    elif kind == "minimal":
        amounts = [1] if ring.flavor == "zpk" else [ring.pi_power(r) for r in range(ring.k)]
        scalars = unit_group_generators(ring)
    else:
        raise ValueError(f"unknown generator set {kind!r}")
    rows = []
    for u in range(n):
        for v in range(u + 1, n):
            rows.extend((0, u, v, a) for a in amounts)
    for u in range(n):
        rows.extend((1, u, 0, a) for a in scalars)
    return np.array(rows, dtype=np.int32).reshape(-1, 4)


@dataclass(frozen=True)
class FlagRep:
    """Canonical matrix of a coset ``gB`` together with its flag index."""

    mat: Mat
    index: int

    def key(self) -> bytes:
        return bytes(self.mat.data) if self.mat.ring.size <= 256 else np.array(self.mat.data, dtype=np.int32).tobytes()


class FlagSpace:
    """``GL_n(A)/B`` for a finite chain ring ``A``, backed by a flag kernel."""

    def __init__(self, ring: RingSpec, n: int, backend: str = "auto"):
        self.ring = ring
        self.n = n
        self.backend = backend
        add, mul, neg, inv = ring_tables(ring)
        tables = perm_tables(n, ring.size, ring.p)
        self.kernel = kernel_class(backend)(n, ring.size, ring.p, add, mul, neg, inv, *tables)

    @property
    def size(self) -> int:
        return int(self.kernel.total)

    def _entries(self, g: Mat):
        if g.ring != self.ring or g.shape != (self.n, self.n):
            raise ValueError(f"expected a {self.n}x{self.n} matrix over {self.ring}")
        return list(g.data)

    def index(self, g: Mat) -> int:
        try:
            return int(self.kernel.canonical_rank(self._entries(g)))
        except ValueError as exc:
            raise NonInvertible(str(exc)) from None

    def canonical(self, g: Mat) -> Mat:
        try:
            data = self.kernel.canonicalize(self._entries(g))
        except ValueError as exc:
            raise NonInvertible(str(exc)) from None
        return Mat(self.ring, self.n, self.n, tuple(data))

    def flag(self, index: int) -> Mat:
        return Mat(self.ring, self.n, self.n, tuple(self.kernel.unrank(int(index))))

    @cached_property
    def full_generators(self) -> np.ndarray:
        return borel_generators(self.ring, self.n, "full")

    def generators(self, kind: str = "full") -> np.ndarray:
        return self.full_generators if kind == "full" else borel_generators(self.ring, self.n, kind)
