"""Dense matrices over a chain ring.

Entries are stored as integer codes of the ring (see :mod:`chainbruhat.ring`).
``Mat`` is immutable; every operation returns a fresh value.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import NonInvertible, RingMismatch
from .ring import Elem, RingSpec, parse_ring

Entry = Union[int, str, Elem]


@dataclass(frozen=True)
class Mat:
    ring: RingSpec
    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative shape")
        if len(self.data) != self.rows * self.cols:
            raise ValueError("data length does not match shape")

    def __getitem__(self, rc: tuple[int, int]) -> int:
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(rc)
        return self.data[r * self.cols + c]

    def entry(self, r: int, c: int) -> Elem:
        return Elem(self.ring, self[r, c])

    def row(self, r: int) -> tuple[int, ...]:
        return self.data[r * self.cols : (r + 1) * self.cols]

    def col(self, c: int) -> tuple[int, ...]:
        return self.data[c :: self.cols] if self.cols else ()

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(r)) for r in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Mat":
        rows, cols = list(rows), list(cols)
        return Mat(self.ring, len(rows), len(cols), tuple(self[r, c] for r in rows for c in cols))

    def transpose(self) -> "Mat":
        return Mat(self.ring, self.cols, self.rows, tuple(self[r, c] for c in range(self.cols) for r in range(self.rows)))

    def __matmul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def __str__(self) -> str:
        return format_matrix(self)

    def __repr__(self) -> str:
        return f"Mat({self.ring}, {format_matrix(self)!r})"

    @cached_property
    def is_invertible(self) -> bool:
        return self.is_square and residue_rank(self) == self.rows


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing parts in ``[1, k]``; stands for ``sum A/pi^part``."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        ps = tuple(p for p in self.parts if p)
        if any(a < b for a, b in zip(ps, ps[1:])):
            raise ValueError(f"parts not weakly decreasing: {self.parts}")
        object.__setattr__(self, "parts", ps)

    @property
    def length(self) -> int:
        """Composition length of the module."""
        return sum(self.parts)

    def contains(self, other: "Partition") -> bool:
        """Young-diagram containment ``other <= self``."""
        if len(other.parts) > len(self.parts):
            return False
        return all(a >= b for a, b in zip(self.parts, other.parts))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)


# -- constructors ---------------------------------------------------------


def _code(ring: RingSpec, x: Entry) -> int:
    if isinstance(x, Elem):
        if x.ring != ring:
            raise RingMismatch(f"entry from {x.ring} in a matrix over {ring}")
        return x.value
    if isinstance(x, str):
        return ring.parse(x)
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"unsupported entry {x!r}")
    if not 0 <= x < ring.size:
        raise ValueError(f"code {x} out of range for {ring}")
    return x


def from_rows(ring: RingSpec, rows: Sequence[Sequence[Entry]]) -> Mat:
    """Build a matrix from nested rows; ints are codes, strings use element syntax."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ValueError("ragged rows")
    return Mat(ring, len(rows), ncols, tuple(_code(ring, x) for r in rows for x in r))


def identity(ring: RingSpec, n: int) -> Mat:
    return Mat(ring, n, n, tuple(1 if r == c else 0 for r in range(n) for c in range(n)))


def zeros(ring: RingSpec, rows: int, cols: int) -> Mat:
    return Mat(ring, rows, cols, (0,) * (rows * cols))


def permutation_matrix(ring: RingSpec, perm: Sequence[int]) -> Mat:
    """Matrix with a 1 in row ``perm[c]`` of column ``c`` (0-based)."""
    n = len(perm)
    data = [0] * (n * n)
    for c, r in enumerate(perm):
        data[r * n + c] = 1
    return Mat(ring, n, n, tuple(data))


def block(ring: RingSpec, blocks: Sequence[Sequence[Mat]]) -> Mat:
    """Assemble a block matrix; all blocks of a block-row share a row count."""
    out = []
    for brow in blocks:
        h = brow[0].rows
        for r in range(h):
            line = []
            for b in brow:
                if b.rows != h:
                    raise ValueError("block heights differ")
                line.extend(b.row(r))
            out.append(line)
    return from_rows(ring, out)


# -- arithmetic -----------------------------------------------------------


def _check_same_ring(a: Mat, b: Mat):
    if a.ring != b.ring:
        raise RingMismatch(f"matrices over {a.ring} and {b.ring}")


def mat_mul(a: Mat, b: Mat) -> Mat:
    _check_same_ring(a, b)
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    R = a.ring
    add, mul = R.add, R.mul
    bcols = [b.col(c) for c in range(b.cols)]
    out = []
    for r in range(a.rows):
        arow = a.row(r)
        for bc in bcols:
            s = 0
            for x, y in zip(arow, bc):
                if x and y:
                    s = add(s, mul(x, y))
            out.append(s)
    return Mat(R, a.rows, b.cols, tuple(out))


def mat_add(a: Mat, b: Mat) -> Mat:
    _check_same_ring(a, b)
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    return Mat(a.ring, a.rows, a.cols, tuple(a.ring.add(x, y) for x, y in zip(a.data, b.data)))


def mat_neg(a: Mat) -> Mat:
    return Mat(a.ring, a.rows, a.cols, tuple(a.ring.neg(x) for x in a.data))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return mat_add(a, mat_neg(b))


def scalar_mul(s: int, a: Mat) -> Mat:
    return Mat(a.ring, a.rows, a.cols, tuple(a.ring.mul(s, x) for x in a.data))


def det(a: Mat) -> Elem:
    """Determinant by cofactor expansion memoised over column subsets."""
    if not a.is_square:
        raise ValueError("det of a non-square matrix")
    R, n = a.ring, a.rows
    if n == 0:
        return Elem(R, 1)
    memo: dict[tuple[int, int], int] = {}

    def minor(r: int, mask: int) -> int:
        # determinant of rows r.. using the columns whose bits are set in mask
        if r == n:
            return 1
        key = (r, mask)
        if key in memo:
            return memo[key]
        total = 0
        sign = 0
        for c in range(n):
            if mask >> c & 1:
                x = a[r, c]
                if x:
                    t = R.mul(x, minor(r + 1, mask & ~(1 << c)))
                    total = R.sub(total, t) if sign else R.add(total, t)
                sign ^= 1
        memo[key] = total
        return total

    return Elem(R, minor(0, (1 << n) - 1))


def inverse(a: Mat) -> Mat:
    """Gauss-Jordan inverse; a unit pivot exists in every column iff ``det`` is a unit."""
    if not a.is_square:
        raise NonInvertible("non-square matrix")
    R, n = a.ring, a.rows
    m = [list(a.row(r)) + [1 if c == r else 0 for c in range(n)] for r in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if R.is_unit(m[r][c])), None)
        if piv is None:
            raise NonInvertible(f"determinant {det(a)} is not a unit")
        m[c], m[piv] = m[piv], m[c]
        s = R.inv(m[c][c])
        m[c] = [R.mul(s, x) for x in m[c]]
        for r in range(n):
            f = m[r][c]
            if r != c and f:
                m[r] = [R.sub(x, R.mul(f, y)) for x, y in zip(m[r], m[c])]
    return Mat(R, n, n, tuple(x for row in m for x in row[n:]))


def is_borel(a: Mat) -> bool:
    """Upper triangular with unit diagonal."""
    if not a.is_square:
        return False
    n = a.rows
    for r in range(n):
        for c in range(r):
            if a[r, c]:
                return False
        if not a.ring.is_unit(a[r, r]):
            return False
    return True


def reduce_mod_p(a: Mat) -> Mat:
    """Entrywise reduction to the residue field."""
    F = a.ring.residue_field
    p = a.ring.p
    return Mat(F, a.rows, a.cols, tuple(x % p for x in a.data))


def reduce_to(a: Mat, m: int) -> Mat:
    """Entrywise reduction to ``A_m``."""
    Rm = a.ring.quotient(m)
    return Mat(Rm, a.rows, a.cols, tuple(a.ring.reduce(x, m) for x in a.data))


def lift_to(a: Mat, ring: RingSpec) -> Mat:
    """Reinterpret codes of a quotient-ring matrix in the larger ``ring`` (canonical lift)."""
    if a.ring.flavor != ring.flavor or a.ring.p != ring.p or a.ring.k > ring.k:
        raise RingMismatch(f"cannot lift from {a.ring} to {ring}")
    return Mat(ring, a.rows, a.cols, a.data)


def lower_left_submatrix(a: Mat, i: int, j: int) -> Mat:
    """Rows ``i+1..n`` and columns ``1..j`` (1-based) of ``a``."""
    if not (0 <= i <= a.rows and 0 <= j <= a.cols):
        raise IndexError(f"(i, j) = ({i}, {j}) out of range for shape {a.shape}")
    return a.submatrix(range(i, a.rows), range(j))


def residue_rank(a: Mat) -> int:
    """Rank of the reduction modulo the maximal ideal."""
    p = a.ring.p
    m = [[x % p for x in a.row(r)] for r in range(a.rows)]
    rank = 0
    for c in range(a.cols):
        piv = next((r for r in range(rank, a.rows) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        s = pow(m[rank][c], -1, p)
        m[rank] = [(s * x) % p for x in m[rank]]
        for r in range(a.rows):
            f = m[r][c]
            if r != rank and f:
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


# -- Smith-type reduction -------------------------------------------------


def _smith(a: Mat, want_cols: bool = False):
    """Diagonalise by unimodular row and column operations.

    Pivot is an entry of minimal valuation (first in row-major scan order).
    Returns the list of diagonal valuations (``k`` for zero) of length
    ``min(rows, cols)`` and, if requested, the column transform ``V``
    (list of rows) with ``U a V`` diagonal.
    """
    R = a.ring
    k = R.k
    val = R.valuation
    rows, cols = a.rows, a.cols
    m = [list(a.row(r)) for r in range(rows)]
    V = [[1 if r == c else 0 for c in range(cols)] for r in range(cols)] if want_cols else None
    diag = []
    for t in range(min(rows, cols)):
        best = None
        bv = k
        for r in range(t, rows):
            mr = m[r]
            for c in range(t, cols):
                x = mr[c]
                if x:
                    v = val(x)
                    if v < bv or best is None:
                        best, bv = (r, c), v
                        if v == 0:
                            break
            if bv == 0 and best is not None:
                break
        if best is None:
            diag.extend([k] * (min(rows, cols) - t))
            break
        r0, c0 = best
        if r0 != t:
            m[t], m[r0] = m[r0], m[t]
        if c0 != t:
            for row in m:
                row[t], row[c0] = row[c0], row[t]
            if V is not None:
                for row in V:
                    row[t], row[c0] = row[c0], row[t]
        piv = m[t][t]
        mt = m[t]
        for r in range(t + 1, rows):
            x = m[r][t]
            if x:
                f = R.divide(x, piv)
                m[r] = [R.sub(y, R.mul(f, z)) if z else y for y, z in zip(m[r], mt)]
        for c in range(t + 1, cols):
            x = mt[c]
            if x:
                f = R.divide(x, piv)
                mt[c] = 0
                if V is not None:
                    for row in V:
                        if row[t]:
                            row[c] = R.sub(row[c], R.mul(f, row[t]))
        diag.append(bv)
    return diag, V


def smith_valuations(a: Mat) -> list[int]:
    """Valuations of the elementary divisors (``k`` marks a zero divisor)."""
    return _smith(a)[0]


def module_type(a: Mat) -> Partition:
    """Type of the column span of ``a`` as a module ``sum A/pi^lambda_r``."""
    k = a.ring.k
    return Partition(tuple(sorted((k - e for e in smith_valuations(a) if e < k), reverse=True)))


def kernel(a: Mat) -> Mat:
    """A ``cols x cols`` matrix whose columns generate ``{x : a x = 0}``."""
    R = a.ring
    k = R.k
    diag, V = _smith(a, want_cols=True)
    n = a.cols
    scale = [R.pi_power(k - diag[c]) if c < len(diag) else 1 for c in range(n)]
    data = tuple(R.mul(V[r][c], scale[c]) for r in range(n) for c in range(n))
    return Mat(R, n, n, data)


def enumerate_column_span(a: Mat) -> set[tuple[int, ...]]:
    """Every vector of the column span, by brute force (tiny inputs only)."""
    R = a.ring
    cols = [a.col(c) for c in range(a.cols)]
    span = {(0,) * a.rows}
    for col in cols:
        multiples = {tuple(R.mul(s, x) for x in col) for s in R.codes}
        span = {tuple(R.add(x, y) for x, y in zip(v, w)) for v in span for w in multiples}
    return span


def span_length(vectors: set, p: int) -> int:
    """Composition length of a finite module given as the set of its elements."""
    n = len(vectors)
    length = 0
    while n > 1:
        if n % p:
            raise ValueError("size is not a power of p")
        n //= p
        length += 1
    return length


# -- random sampling ------------------------------------------------------


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_matrix(ring: RingSpec, rows: int, cols: int, seed=None) -> Mat:
    g = _rng(seed)
    return Mat(ring, rows, cols, tuple(g.randrange(ring.size) for _ in range(rows * cols)))


def random_gl(ring: RingSpec, n: int, seed=None) -> Mat:
    """Uniform element of ``GL_n(A)`` by rejection on the residue rank."""
    g = _rng(seed)
    while True:
        m = random_matrix(ring, n, n, g)
        if m.is_invertible:
            return m


def random_borel(ring: RingSpec, n: int, seed=None) -> Mat:
    g = _rng(seed)
    units = ring.unit_codes
    data = []
    for r in range(n):
        for c in range(n):
            if c < r:
                data.append(0)
            elif c == r:
                data.append(g.choice(units))
            else:
                data.append(g.randrange(ring.size))
    return Mat(ring, n, n, tuple(data))


def iter_gl(ring: RingSpec, n: int):
    """All of ``GL_n(A)`` in lexicographic code order (tiny cases only)."""
    for data in itertools.product(ring.codes, repeat=n * n):
        m = Mat(ring, n, n, data)
        if m.is_invertible:
            yield m


# -- text and JSON formats ------------------------------------------------


def parse_matrix(ring: RingSpec, text: str) -> Mat:
    """Parse ``"1,0;2,1"``: rows split by ``;``, entries by ``,``."""
    rows = [r for r in text.strip().split(";")]
    if not rows or any(not r.strip() for r in rows):
        raise ValueError(f"bad matrix text {text!r}")
    return from_rows(ring, [[ring.parse(x) for x in r.split(",")] for r in rows])


def format_matrix(a: Mat) -> str:
    return ";".join(",".join(a.ring.format(x) for x in a.row(r)) for r in range(a.rows))


def matrix_to_json(a: Mat) -> dict:
    return {"ring": str(a.ring), "rows": [[a.ring.format(x) for x in a.row(r)] for r in range(a.rows)]}


def matrix_from_json(obj: Union[dict, str]) -> Mat:
    if isinstance(obj, str):
        obj = json.loads(obj)
    ring = parse_ring(obj["ring"])
    return from_rows(ring, [[ring.parse(str(x)) for x in row] for row in obj["rows"]])
