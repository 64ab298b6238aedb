"""Double-coset invariants of ``alpha`` in ``GL_n(A)``.

Everything here is computed from the pair of flags ``F = alpha F_0`` and the
standard flag ``F_0``:

* the permutation ``W(alpha)`` of the reduction modulo the maximal ideal,
* the lengths ``l(i, j)`` of the intersections ``F^j cap F_0^i``,
* the integer matrix ``r(alpha)`` of graded-piece lengths,
* the intersection types (module types of ``F^j cap F_0^i``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import BlockNotInvertible, NonInvertible
from .matrix import (
    Mat,
    Partition,
    block,
    from_rows,
    inverse,
    lower_left_submatrix,
    kernel,
    mat_mul,
    mat_sub,
    module_type,
    permutation_matrix,
    residue_rank,
    zeros,
)


@dataclass(frozen=True)
class PermMatrix:
    """A permutation of ``{0..n-1}``; ``perm[c]`` is the row of the 1 in column ``c``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")

    @property
    def n(self) -> int:
        return len(self.perm)

    @classmethod
    def from_one_line(cls, images) -> "PermMatrix":
        return cls(tuple(i - 1 for i in images))

    @classmethod
    def identity(cls, n: int) -> "PermMatrix":
        return cls(tuple(range(n)))

    @classmethod
    def longest(cls, n: int) -> "PermMatrix":
        return cls(tuple(range(n - 1, -1, -1)))

    def one_line(self) -> list[int]:
        """1-based images ``w(1), ..., w(n)``."""
        return [i + 1 for i in self.perm]

    def rows(self) -> list[list[int]]:
        out = [[0] * self.n for _ in range(self.n)]
        for c, r in enumerate(self.perm):
            out[r][c] = 1
        return out

    def to_mat(self, ring) -> Mat:
        return permutation_matrix(ring, self.perm)

    def decompositions(self) -> Iterator[tuple[int, "PermMatrix", "PermMatrix"]]:
        """All ``(n1, w1, w2)`` with ``w = (0 w1; w2 0)``, ``w1`` of order ``n1``."""
        n = self.n
        for n1 in range(1, n):
            n2 = n - n1
            # columns 0..n2-1 must map into the bottom n2 rows
            if all(self.perm[c] >= n1 for c in range(n2)):
                w2 = PermMatrix(tuple(self.perm[c] - n1 for c in range(n2)))
                w1 = PermMatrix(tuple(self.perm[c] for c in range(n2, n)))
                yield n1, w1, w2

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.one_line())) + "]"


@dataclass(frozen=True)
class IntersectionMatrix:
    k: int
    r: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.r)

    def row_sums(self) -> list[int]:
        return [sum(row) for row in self.r]

    def col_sums(self) -> list[int]:
        return [sum(col) for col in zip(*self.r)]

    def is_permutation(self) -> bool:
        return all(sorted(row) == [0] * (self.n - 1) + [1] for row in self.r) and all(
            sorted(col) == [0] * (self.n - 1) + [1] for col in zip(*self.r)
        )

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.r]


@dataclass(frozen=True)
class IntersectionProfile:
    """Types of ``F^j cap F_0^i`` for ``0 <= i, j <= n``."""

    n: int
    types: tuple[tuple[Partition, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Partition:
        i, j = ij
        return self.types[i][j]

    def to_json(self) -> dict:
        return {f"{i},{j}": list(self.types[i][j].parts) for i in range(self.n + 1) for j in range(self.n + 1)}


def _require_invertible(alpha: Mat):
    if not alpha.is_invertible:
        raise NonInvertible("expected an element of GL_n(A)")


def _lower_left_ranks(alpha: Mat) -> list[list[int]]:
    """``rank[i][j]`` = residue rank of the lower-left ``(n-i) x j`` block."""
    n = alpha.rows
    return [[residue_rank(lower_left_submatrix(alpha, i, j)) for j in range(n + 1)] for i in range(n + 1)]


def permutation_invariant(alpha: Mat) -> PermMatrix:
    """Bruhat permutation of the reduction of ``alpha``, read off lower-left rank jumps.

    Column ``j`` goes to the lowest row ``i`` such that appending column ``j`` to
    the block of rows ``i..n`` and columns ``1..j-1`` raises its rank.
    """
    _require_invertible(alpha)
    n = alpha.rows
    rk = _lower_left_ranks(alpha)
    perm = []
    for j in range(1, n + 1):
        # rows i-1..n-1 (0-based start i-1); largest start with a rank jump
        w = max(i for i in range(1, n + 1) if rk[i - 1][j] > rk[i - 1][j - 1])
        perm.append(w - 1)
    return PermMatrix(tuple(perm))


def intersection_length(alpha: Mat, i: int, j: int) -> int:
    """Length of ``F^j cap F_0^i``: ``j k`` minus the length of the span of ``[alpha]^{ij}``."""
    n = alpha.rows
    if not (0 <= i <= n and 0 <= j <= n):
        raise IndexError(f"(i, j) = ({i}, {j}) out of range for n = {n}")
    return j * alpha.ring.k - module_type(lower_left_submatrix(alpha, i, j)).length


def intersection_lengths(alpha: Mat) -> list[list[int]]:
    _require_invertible(alpha)
    n = alpha.rows
    return [[intersection_length(alpha, i, j) for j in range(n + 1)] for i in range(n + 1)]


def intersection_numbers(alpha: Mat) -> IntersectionMatrix:
    """Matrix ``r(alpha)`` of graded-piece lengths, by inclusion-exclusion on lengths."""
    ell = intersection_lengths(alpha)
    n = alpha.rows
    r = tuple(
        tuple(ell[i][j] - ell[i - 1][j] - ell[i][j - 1] + ell[i - 1][j - 1] for j in range(1, n + 1))
        for i in range(1, n + 1)
    )
    return IntersectionMatrix(alpha.ring.k, r)


def intersection_type(alpha: Mat, i: int, j: int) -> Partition:
    """Type of ``F^j cap F_0^i`` via the kernel of ``[alpha_{:, :j} | e_1 .. e_i]``."""
    R = alpha.ring
    n = alpha.rows
    if i == 0 or j == 0:
        return Partition()
    first = alpha.submatrix(range(n), range(j))
    cat = from_rows(R, [list(first.row(r)) + [1 if c == r else 0 for c in range(i)] for r in range(n)])
    K = kernel(cat)
    # the x-part of each kernel vector (x, y) maps to a generator alpha x of the intersection
    gens = mat_mul(first, K.submatrix(range(j), range(K.cols)))
    return module_type(gens)


def intersection_profile(alpha: Mat) -> IntersectionProfile:
    _require_invertible(alpha)
    n = alpha.rows
    return IntersectionProfile(
        n, tuple(tuple(intersection_type(alpha, i, j) for j in range(n + 1)) for i in range(n + 1))
    )


def invariants_json(alpha: Mat) -> dict:
    return {
        "W": permutation_invariant(alpha).one_line(),
        "r": intersection_numbers(alpha).tolist(),
        "profile": intersection_profile(alpha).to_json(),
    }


def block_reduce(alpha: Mat, n1: int, n2: int) -> tuple[Mat, Mat]:
    """Split ``alpha = (X1 a1; a2 X2)`` and return ``(a2, a1 - X1 a2^-1 X2)``.

    ``a1`` is the top-right ``n1 x n1`` block and ``a2`` the bottom-left
    ``n2 x n2`` block.  ``alpha`` is equivalent to the antidiagonal matrix
    built from the returned pair (see :func:`reassemble`), so two such
    matrices are equivalent iff the returned pairs are equivalent
    componentwise.
    """
    n = alpha.rows
    if n1 < 1 or n2 < 1 or n1 + n2 != n or not alpha.is_square:
        raise ValueError(f"need n1 + n2 = n with n1, n2 >= 1 (n = {n})")
    a1 = alpha.submatrix(range(n1), range(n2, n))
    a2 = alpha.submatrix(range(n1, n), range(n2))
    x1 = alpha.submatrix(range(n1), range(n2))
    x2 = alpha.submatrix(range(n1, n), range(n2, n))
    try:
        a2inv = inverse(a2)
    except NonInvertible:
        raise BlockNotInvertible("lower-left block is not invertible") from None
    return a2, mat_sub(a1, mat_mul(mat_mul(x1, a2inv), x2))


def reassemble(a2: Mat, a1: Mat) -> Mat:
    """The antidiagonal block matrix ``(0 a1; a2 0)``."""
    R = a1.ring
    return block(R, [[zeros(R, a1.rows, a2.cols), a1], [a2, zeros(R, a2.rows, a1.cols)]])
