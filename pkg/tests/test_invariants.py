import itertools
import random

import pytest

from chainbruhat.errors import BlockNotInvertible, NonInvertible
from chainbruhat.invariants import (
    PermMatrix,
    block_reduce,
    intersection_length,
    intersection_lengths,
    intersection_numbers,
    intersection_profile,
    invariants_json,
    permutation_invariant,
    reassemble,
)
from chainbruhat.matrix import (
    Partition,
    from_rows,
    identity,
    iter_gl,
    mat_mul,
    random_borel,
    random_gl,
)
from chainbruhat.oracle import equiv, flag_space
from chainbruhat.ring import make_ring

from conftest import set_length, span_set


def _invariants(a):
    return permutation_invariant(a), intersection_numbers(a), intersection_profile(a)


def test_perm_matrix_basics():
    w = PermMatrix.from_one_line([3, 1, 2])
    assert w.perm == (2, 0, 1)
    assert w.rows() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert str(w) == "[3 1 2]"
    assert PermMatrix.longest(3).one_line() == [3, 2, 1]
    with pytest.raises(ValueError):
        PermMatrix((0, 0, 1))


def test_permutation_invariant_examples(z4):
    assert permutation_invariant(identity(z4, 3)) == PermMatrix.identity(3)
    w0 = PermMatrix.longest(4)
    assert permutation_invariant(w0.to_mat(z4)) == w0
    assert permutation_invariant(from_rows(z4, [[1, 0], [2, 1]])) == PermMatrix.identity(2)
    with pytest.raises(NonInvertible):
        permutation_invariant(from_rows(z4, [[2, 0], [0, 1]]))


def test_permutation_invariant_recovers_every_permutation():
    R = make_ring("fqtk", 3, 2)
    rng = random.Random(1)
    for perm in itertools.permutations(range(4)):
        w = PermMatrix(perm)
        g = mat_mul(mat_mul(random_borel(R, 4, rng), w.to_mat(R)), random_borel(R, 4, rng))
        assert permutation_invariant(g) == w


def test_intersection_length_examples():
    R = make_ring("zpk", 2, 3)
    for r in range(4):
        a = from_rows(R, [[1, 0], [2**r % 8, 1]])
        assert intersection_length(a, 1, 1) == r
        for j in range(3):
            assert intersection_length(a, 2, j) == 3 * j
            assert intersection_length(a, j, 0) == 0
    with pytest.raises(IndexError):
        intersection_length(identity(R, 2), 3, 0)


def test_intersection_numbers_examples():
    k = 4
    R = make_ring("zpk", 3, k)
    for r in range(k + 1):
        a = from_rows(R, [[1, 0], [3**r % 81, 1]])
        assert intersection_numbers(a).tolist() == [[r, k - r], [k - r, r]]
    for n in (1, 2, 3):
        assert intersection_numbers(identity(R, n)).tolist() == [[k if i == j else 0 for j in range(n)] for i in range(n)]


def _ell_setwise(a, i, j):
    R, n = a.ring, a.rows
    Fj = span_set(R, [a.col(c) for c in range(j)], n)
    F0i = {v for v in itertools.product(R.codes, repeat=n) if all(x == 0 for x in v[i:])}
    return Fj & F0i


def test_lengths_and_types_against_setwise_intersection(z4):
    # every flag of GL_2(Z/4) plus random GL_3(Z/4) elements
    mats = [flag_space(z4, 2).flag(x) for x in range(flag_space(z4, 2).size)]
    rng = random.Random(4)
    mats += [random_gl(z4, 3, rng) for _ in range(15)]
    for a in mats:
        n = a.rows
        prof = intersection_profile(a)
        for i, j in itertools.product(range(n + 1), repeat=2):
            inter = _ell_setwise(a, i, j)
            assert intersection_length(a, i, j) == set_length(z4, inter)
            assert prof[i, j].length == set_length(z4, inter)
            # the intersection is free iff its type has only k's; check the exponent of the socle
            socle = {v for v in inter if all(z4.mul(2, x) == 0 for x in v)}
            assert len(prof[i, j].parts) == set_length(z4, socle)


def test_profile_corner_entry_is_r_not_k_minus_r():
    # (1,1) entry of alpha = (1 0; pi^r 1): F^1 is spanned by (1, pi^r); its
    # intersection with the first coordinate line is pi^(k-r) * F^1, of type (r)
    R = make_ring("zpk", 2, 3)
    for r in range(1, 4):
        a = from_rows(R, [[1, 0], [2**r % 8, 1]])
        prof = intersection_profile(a)
        expected = set_length(R, _ell_setwise(a, 1, 1))
        assert expected == r
        assert prof[1, 1] == Partition((r,) if r else ())


@pytest.mark.parametrize("flavor,p,k,n", [("zpk", 2, 2, 3), ("fqtk", 3, 2, 3), ("zpk", 2, 3, 4)])
def test_profile_shape(flavor, p, k, n):
    R = make_ring(flavor, p, k)
    rng = random.Random(n * k)
    for _ in range(8):
        prof = intersection_profile(random_gl(R, n, rng))
        assert prof[n, n] == Partition((k,) * n)
        for t in range(n + 1):
            assert prof[t, 0] == Partition() and prof[0, t] == Partition()
        for i, j in itertools.product(range(n), range(n + 1)):
            assert prof[i + 1, j].contains(prof[i, j])
            assert prof[j, i + 1].contains(prof[j, i])


def _row_col_sums_ok(a):
    r = intersection_numbers(a)
    k = a.ring.k
    return r.row_sums() == [k] * a.rows and r.col_sums() == [k] * a.rows and all(
        0 <= x <= k for row in r.r for x in row
    )


def test_row_col_sums_exhaustive_gl2_z4(z4):
    mats = list(iter_gl(z4, 2))
    assert len(mats) == 96
    assert all(_row_col_sums_ok(a) for a in mats)


def test_row_col_sums_exhaustive_gl3_z4_by_flags(z4):
    # r depends only on the coset gB, so one representative per flag covers GL_3(Z/4)
    space = flag_space(z4, 3)
    assert space.size == 168
    assert all(_row_col_sums_ok(space.flag(x)) for x in range(space.size))


@pytest.mark.slow
def test_row_col_sums_exhaustive_gl3_z4_full(z4):
    assert all(_row_col_sums_ok(a) for a in iter_gl(z4, 3))


def test_row_col_sums_random_larger():
    rng = random.Random(8)
    for R in (make_ring("zpk", 3, 3), make_ring("fqtk", 2, 4), make_ring("zpk", 5, 2)):
        for n in (3, 4, 5):
            for _ in range(5):
                assert _row_col_sums_ok(random_gl(R, n, rng))


def test_k1_r_is_the_permutation_exhaustive_gl3_f2():
    F2 = make_ring("zpk", 2, 1)
    mats = list(iter_gl(F2, 3))
    assert len(mats) == 168
    for a in mats:
        r = intersection_numbers(a)
        assert r.is_permutation()
        assert r.tolist() == permutation_invariant(a).rows()


@pytest.mark.parametrize("flavor,p,k,n", [("zpk", 2, 2, 3), ("fqtk", 3, 2, 3), ("zpk", 3, 1, 4), ("fqtk", 2, 3, 3)])
def test_two_sided_borel_invariance(flavor, p, k, n):
    R = make_ring(flavor, p, k)
    rng = random.Random(hash((flavor, p, k, n)) & 0xFFFF)
    for _ in range(25):
        a = random_gl(R, n, rng)
        b = mat_mul(mat_mul(random_borel(R, n, rng), a), random_borel(R, n, rng))
        assert _invariants(a) == _invariants(b)


def test_invariants_json_schema(z4):
    a = from_rows(z4, [[1, 0], [2, 1]])
    js = invariants_json(a)
    assert js["W"] == [1, 2]
    assert js["r"] == [[1, 1], [1, 1]]
    assert js["profile"]["2,2"] == [2, 2]
    assert js["profile"]["1,1"] == [1]
    assert js["profile"]["0,1"] == []
    assert len(js["profile"]) == 9
    assert intersection_lengths(a)[1] == [0, 1, 2]


def test_block_reduce_examples(z4):
    a1 = from_rows(z4, [[3]])
    a2 = from_rows(z4, [[1, 2], [0, 3]])
    anti = reassemble(a2, a1)
    assert anti.to_lists() == [[0, 0, 3], [1, 2, 0], [0, 3, 0]]
    assert block_reduce(anti, 1, 2) == (a2, a1)
    # n1 = n2 = 1: (x a; 1 y) reduces to ((1), (a - x y))
    for x, a, y in itertools.product(z4.codes, repeat=3):
        got = block_reduce(from_rows(z4, [[x, a], [1, y]]), 1, 1)
        assert got[0].to_lists() == [[1]] and got[1].to_lists() == [[(a - x * y) % 4]]
    with pytest.raises(BlockNotInvertible):
        block_reduce(from_rows(z4, [[1, 1], [2, 1]]), 1, 1)
    with pytest.raises(ValueError):
        block_reduce(identity(z4, 3), 0, 3)


def test_block_reduce_random_oracle_equivalence(z4):
    rng = random.Random(12)
    checked = 0
    for n, n1 in [(2, 1), (3, 1), (3, 2)]:
        n2 = n - n1
        while checked < 12 * n:
            a = random_gl(z4, n, rng)
            try:
                a2, a1 = block_reduce(a, n1, n2)
            except BlockNotInvertible:
                continue
            assert a1.is_invertible
            assert equiv(a, reassemble(a2, a1), method="orbit")
            checked += 1


def test_block_reduce_detects_inequivalence(z4):
    # components from different GL_2 orbits give inequivalent antidiagonal matrices
    a1 = from_rows(z4, [[1]])
    x = reassemble(identity(z4, 2), a1)
    y = reassemble(from_rows(z4, [[1, 0], [2, 1]]), a1)
    assert not equiv(x, y, method="orbit")
    assert equiv(x, reassemble(identity(z4, 2), from_rows(z4, [[3]])), method="orbit")
