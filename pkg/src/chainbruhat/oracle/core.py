"""Double cosets ``B \\ G / B`` as left ``B``-orbits on the flag space ``G/B``."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..errors import BudgetExceeded, NonInvertible, RingMismatch
from ..invariants import PermMatrix, permutation_invariant
from ..matrix import Mat, format_matrix, iter_gl
from ..ring import RingSpec
from .flags import FlagRep, FlagSpace, flag_count_formula
from .linear import _moves, bfs_equiv, linear_equiv

DEFAULT_BUDGET = 2_000_000


@lru_cache(maxsize=8)
def flag_space(ring: RingSpec, n: int, backend: str = "auto") -> FlagSpace:
    return FlagSpace(ring, n, backend)


def canonical_flag(g: Mat, backend: str = "auto") -> FlagRep:
    space = flag_space(g.ring, g.rows, backend)
    mat = space.canonical(g)
    return FlagRep(mat, space.index(mat))


def flag_count(ring: RingSpec, n: int, method: str = "formula") -> int:
    """``|GL_n(A)/B|`` by the closed formula, or by canonicalising every element of ``GL_n``."""
    if method == "formula":
        return flag_count_formula(ring, n)
    if method == "exhaustive":
        space = flag_space(ring, n)
        return len({space.index(g) for g in iter_gl(ring, n)})
    raise ValueError(f"unknown method {method!r}")


@dataclass
class OrbitReport:
    ring: RingSpec
    n: int
    num_cosets: int
    representatives: list[Mat]
    orbit_sizes: list[int]
    fiber_counts: dict[PermMatrix, int]
    rep_indices: list[int] = field(default_factory=list, repr=False)
    _labels: np.ndarray | None = field(default=None, repr=False)
    _space: FlagSpace | None = field(default=None, repr=False)

    @property
    def num_flags(self) -> int:
        return int(sum(self.orbit_sizes))

    def orbit_index(self, g: Mat) -> int:
        """Position in ``representatives`` of the double coset containing ``g``."""
        if self._labels is None:
            raise RuntimeError("report carries no orbit labels")
        if g.ring != self.ring:
            raise RingMismatch(f"matrix over {g.ring}, report over {self.ring}")
        return int(self._labels[self._space.index(g)])

    def fibers(self) -> list[PermMatrix]:
        return [permutation_invariant(r) for r in self.representatives]

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "n": self.n,
            "num_cosets": self.num_cosets,
            "num_flags": self.num_flags,
            "fiber_counts": [
                {"w": w.one_line(), "count": c} for w, c in sorted(self.fiber_counts.items(), key=lambda t: t[0].perm)
            ],
            "representatives": [format_matrix(r) for r in self.representatives],
            "orbit_sizes": list(self.orbit_sizes),
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["flavor", "p", "k", "n", "fiber", "count", "total"])
        for w, c in sorted(self.fiber_counts.items(), key=lambda t: t[0].perm):
            writer.writerow([self.ring.flavor, self.ring.p, self.ring.k, self.n, str(w), c, self.num_cosets])
        return out.getvalue()

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _fiber_table(reps: list[Mat]) -> dict[PermMatrix, int]:
    table: dict[PermMatrix, int] = {}
    for r in reps:
        w = permutation_invariant(r)
        table[w] = table.get(w, 0) + 1
    return dict(sorted(table.items(), key=lambda t: t[0].perm))


def _union_find_orbits(ring: RingSpec, n: int, budget: int, space: FlagSpace):
    """Orbits of ``B x B`` on raw elements of ``GL_n``, mapped to flag labels."""
    elems = list(iter_gl(ring, n))
    if len(elems) > budget:
        raise BudgetExceeded(f"|GL_{n}({ring})| = {len(elems)} exceeds budget {budget}")
    pos = {g.data: t for t, g in enumerate(elems)}
    parent = list(range(len(elems)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, g in enumerate(elems):
        for y in _moves(g):
            a, b = find(t), find(pos[y])
            if a != b:
                parent[max(a, b)] = min(a, b)
    labels = np.full(space.size, -1, dtype=np.int64)
    roots = {}
    for t, g in enumerate(elems):
        labels[space.index(g)] = roots.setdefault(find(t), len(roots))
    # renumber so orbits are ordered by their least flag index, as in the flag method
    order: dict[int, int] = {}
    for lab in labels:
        if lab >= 0 and lab not in order:
            order[int(lab)] = len(order)
    labels = np.array([order[int(x)] for x in labels], dtype=np.int32)
    reps = np.array([int(np.argmax(labels == o)) for o in range(len(order))], dtype=np.int64)
    sizes = np.bincount(labels, minlength=len(order)).astype(np.int64)
    return labels, reps, sizes


def double_cosets(
    ring: RingSpec,
    n: int,
    budget: int = DEFAULT_BUDGET,
    generators: str = "full",
    backend: str = "auto",
    method: str = "flags",
) -> OrbitReport:
    """Enumerate ``B \\ GL_n(A) / B``.

    ``method="flags"`` closes left ``B``-orbits on the indexed flag space;
    ``method="union_find"`` merges raw group elements under ``B x B`` moves and
    is only feasible for tiny groups.  Both number the orbits by their least
    flag index and take that flag as the representative, so reports coincide.
    """
    nflags = flag_count_formula(ring, n)
    if nflags > budget:
        raise BudgetExceeded(f"|G/B| = {nflags} for GL_{n} over {ring} exceeds budget {budget}")
    space = flag_space(ring, n, backend)
    if method == "flags":
        labels, reps, sizes = space.kernel.orbits(space.generators(generators))
    elif method == "union_find":
        labels, reps, sizes = _union_find_orbits(ring, n, budget, space)
    else:
        raise ValueError(f"unknown method {method!r}")
    rep_mats = [space.flag(int(r)) for r in reps]
    return OrbitReport(
        ring=ring,
        n=n,
        num_cosets=len(rep_mats),
        representatives=rep_mats,
        orbit_sizes=[int(s) for s in sizes],
        fiber_counts=_fiber_table(rep_mats),
        rep_indices=[int(r) for r in reps],
        _labels=labels,
        _space=space,
    )


def fiber_counts(report: OrbitReport) -> dict[PermMatrix, int]:
    return _fiber_table(report.representatives)


def decomposability_check(report: OrbitReport, smaller: dict[int, OrbitReport] | None = None):
    """Rows ``(w, n1, w2, N(w), N(w2), ok)`` for each decomposable ``w = (0 w1; w2 0)``.

    ``N(w2)`` is read from the report for ``GL_{n2}`` over the same ring; those
    reports are computed on demand unless supplied.
    """
    smaller = dict(smaller or {})
    counts = fiber_counts(report)
    rows = []
    for w, nw in counts.items():
        for n1, _w1, w2 in w.decompositions():
            n2 = report.n - n1
            if n2 not in smaller:
                smaller[n2] = double_cosets(report.ring, n2)
            nw2 = fiber_counts(smaller[n2]).get(w2, 0)
            rows.append((w, n1, w2, nw, nw2, nw >= nw2))
    return rows


def equiv(a: Mat, b: Mat, method: str = "auto", budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``a`` and ``b`` lie in the same ``B x B`` orbit.

    ``"orbit"``: search the left ``B``-orbit of the flag of ``a`` for the flag
    of ``b`` (invertible inputs).  ``"linear"``: solve ``X a = b Y`` over the
    ring (any shape).  ``"bfs"``: search raw matrices.  ``"auto"`` takes
    ``"orbit"`` for invertible inputs within the budget, else ``"linear"``.
    """
    if a.ring != b.ring:
        raise RingMismatch(f"matrices over {a.ring} and {b.ring}")
    if a.shape != b.shape:
        return False
    square = a.rows == a.cols
    inv_a = square and a.is_invertible
    inv_b = square and b.is_invertible
    if method == "auto":
        if inv_a != inv_b:
            return False
        method = "orbit" if inv_a and flag_count_formula(a.ring, a.rows) <= budget else "linear"
    if method == "orbit":
        if not (inv_a and inv_b):
            raise NonInvertible("orbit method needs invertible matrices")
        nflags = flag_count_formula(a.ring, a.rows)
        if nflags > budget:
            raise BudgetExceeded(f"|G/B| = {nflags} exceeds budget {budget}")
        space = flag_space(a.ring, a.rows)
        ia, ib = space.index(a), space.index(b)
        return bool(space.kernel.orbit_contains(ia, ib, space.generators("minimal")))
    if method == "linear":
        return linear_equiv(a, b)
    if method == "bfs":
        return bfs_equiv(a, b, limit=budget)
    raise ValueError(f"unknown method {method!r}")
