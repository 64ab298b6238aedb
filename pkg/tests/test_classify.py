import itertools
import random

import pytest

from chainbruhat.classify import (
    M2Discrete,
    M2Generic,
    M2Special,
    N2Label,
    S1,
    S1S2,
    S2,
    S2S1,
    Trivial,
    W0,
    alpha_m2,
    bmb_equiv,
    classify_n2,
    classify_n3,
    count_n3,
    count_n3_polynomial,
    enumerate_labels_n2,
    enumerate_labels_n3,
    enumerate_m2_labels,
    exponent_witness,
    label_from_json,
    label_to_json,
    m2_label,
    max_q_exponent,
    rep_of_label,
    standard_form_m2,
)
from chainbruhat.errors import NotInM2Bullet
from chainbruhat.matrix import Mat, from_rows, identity, iter_gl, mat_mul, random_borel, random_gl
from chainbruhat.oracle import double_cosets, equiv
from chainbruhat.oracle.linear import m2_orbit_labels
from chainbruhat.ring import make_ring


def test_classify_n2_examples(z8):
    assert classify_n2(identity(z8, 2)) == N2Label(3)
    assert classify_n2(from_rows(z8, [[0, 1], [1, 0]])) == N2Label(0)
    assert classify_n2(from_rows(z8, [[1, 0], [2, 1]])) == N2Label(1)
    assert [rep_of_label(z8, lab).to_lists() for lab in enumerate_labels_n2(z8)] == [
        [[1, 0], [1, 1]],
        [[1, 0], [2, 1]],
        [[1, 0], [4, 1]],
        [[1, 0], [0, 1]],
    ]


@pytest.mark.parametrize("flavor,q,k", [("zpk", 2, 2), ("fqtk", 3, 2), ("zpk", 2, 3)])
def test_classify_n2_partition_matches_oracle_exhaustively(flavor, q, k):
    R = make_ring(flavor, q, k)
    rep = double_cosets(R, 2)
    pairs = {}
    for g in iter_gl(R, 2):
        pairs.setdefault(classify_n2(g), set()).add(rep.orbit_index(g))
    # labels and orbits are in bijection
    assert all(len(v) == 1 for v in pairs.values())
    assert len(pairs) == rep.num_cosets == k + 1
    for lab in enumerate_labels_n2(R):
        assert classify_n2(rep_of_label(R, lab)) == lab


def test_standard_form_examples():
    z8 = make_ring("zpk", 2, 3)
    sf = standard_form_m2(from_rows(z8, [[2, 1], [0, 2]]))
    assert (sf.i, sf.j, sf.l, sf.a) == (1, 3, 1, None)
    z16 = make_ring("zpk", 2, 4)
    sf = standard_form_m2(from_rows(z16, [[2, 1], [8, 4]]))
    assert (sf.i, sf.j, sf.l, sf.a.value) == (1, 3, 2, 1)
    sf = standard_form_m2(from_rows(z16, [[2, 1], [12, 2]]))
    assert (sf.i, sf.j, sf.l) == (1, 2, 1) and sf.a.value % 4 == 3
    with pytest.raises(NotInM2Bullet):
        standard_form_m2(from_rows(z16, [[1, 1], [2, 2]]))
    with pytest.raises(NotInM2Bullet):
        standard_form_m2(from_rows(z16, [[2, 2], [2, 2]]))


def test_standard_form_entries_above_j_collapse_to_k():
    z16 = make_ring("zpk", 2, 4)
    sf = standard_form_m2(from_rows(z16, [[8, 1], [4, 2]]))
    assert (sf.i, sf.j, sf.l, sf.a) == (4, 2, 1, None)


def test_bmb_equiv_examples():
    z32 = make_ring("zpk", 2, 5)
    assert bmb_equiv(z32, 1, 4, 2, 1, 3)
    z16 = make_ring("zpk", 2, 4)
    assert not bmb_equiv(z16, 1, 2, 1, 1, 3)
    for a in z16.unit_codes:
        assert bmb_equiv(z16, 1, 3, 1, a, a)
    with pytest.raises(ValueError):
        bmb_equiv(z16, 1, 1, 1, 1, 1)
    with pytest.raises(ValueError):
        bmb_equiv(z16, 1, 2, 1, 2, 1)


@pytest.mark.parametrize("flavor,q,k", [("zpk", 2, 3), ("zpk", 2, 4), ("fqtk", 3, 3), ("zpk", 3, 3)])
def test_m2_labels_match_bfs_partition(flavor, q, k):
    R = make_ring(flavor, q, k)
    orbit_of = m2_orbit_labels(R)
    label_orbits = {}
    for data, oid in orbit_of.items():
        lab = m2_label(Mat(R, 2, 2, data))
        label_orbits.setdefault(lab, set()).add(oid)
    assert all(len(v) == 1 for v in label_orbits.values())
    assert len(label_orbits) == len(set(orbit_of.values())) == len(enumerate_m2_labels(R))
    assert set(label_orbits) == set(enumerate_m2_labels(R))


def test_classify_n3_examples(z8):
    assert classify_n3(identity(z8, 3)) == Trivial(M2Discrete(3, 3, 3))
    assert classify_n3(from_rows(z8, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])) == W0()
    assert classify_n3(from_rows(z8, [[0, 1, 0], [1, 0, 0], [2, 4, 1]])) == S1(1, 2)
    assert rep_of_label(z8, S1(1, 2)).to_lists() == [[0, 1, 0], [1, 0, 0], [2, 4, 1]]
    with pytest.raises(ValueError):
        classify_n3(identity(z8, 2))


def test_rep_of_label_embeds_alpha():
    z81 = make_ring("zpk", 3, 4)
    rep = rep_of_label(z81, Trivial(M2Special(1, 2, 1, 0, 2)))
    assert rep.to_lists() == [[1, 0, 0], [3, 1, 0], [18, 3, 1]]
    assert rep.submatrix(range(1, 3), range(2)) == alpha_m2(z81, 1, 2, 1, 2)
    # over F_2 the residue 1 is the only unit, so delta = 0 is empty at q = 2
    with pytest.raises(ValueError):
        rep_of_label(make_ring("zpk", 2, 4), Trivial(M2Special(1, 2, 1, 0, 1)))


@pytest.mark.parametrize(
    "bad",
    [
        S1(0, 1),
        S2(1, 4),
        S1S2(0),
        S2S1(5),
        Trivial(M2Discrete(1, 2, 1)),
        Trivial(M2Generic(1, 2, 1, 1)),
        Trivial(M2Special(1, 3, 1, 0, 1)),
        Trivial(M2Generic(1, 3, 1, 2)),
        N2Label(4),
    ],
)
def test_rep_of_label_rejects_invalid(z8, bad):
    with pytest.raises(ValueError):
        rep_of_label(z8, bad)


@pytest.mark.parametrize("flavor,q,k", [("zpk", 2, 2), ("zpk", 2, 3), ("fqtk", 3, 2), ("fqtk", 2, 4), ("zpk", 3, 3)])
def test_n3_round_trip(flavor, q, k):
    R = make_ring(flavor, q, k)
    labels = enumerate_labels_n3(R)
    assert len(set(labels)) == len(labels) == count_n3(q, k)
    for lab in labels:
        assert classify_n3(rep_of_label(R, lab)) == lab


def test_classify_n3_is_constant_on_double_cosets():
    R = make_ring("fqtk", 3, 3)
    rng = random.Random(0)
    for _ in range(150):
        g = random_gl(R, 3, rng)
        h = mat_mul(mat_mul(random_borel(R, 3, rng), g), random_borel(R, 3, rng))
        assert classify_n3(g) == classify_n3(h)


@pytest.mark.parametrize("flavor,q,k", [("zpk", 2, 2), ("fqtk", 2, 3), ("zpk", 3, 2), ("zpk", 2, 4)])
def test_labels_and_oracle_orbits_are_in_bijection(flavor, q, k):
    R = make_ring(flavor, q, k)
    rep = double_cosets(R, 3)
    labels = [classify_n3(r) for r in rep.representatives]
    assert len(set(labels)) == rep.num_cosets == count_n3(q, k)
    # every label's representative sits in the orbit of the same-labelled oracle representative
    where = {lab: t for t, lab in enumerate(labels)}
    for lab in enumerate_labels_n3(R):
        assert rep.orbit_index(rep_of_label(R, lab)) == where[lab]


def test_count_examples():
    assert [count_n3(q, 1) for q in (2, 3, 5)] == [6, 6, 6]
    assert count_n3(2, 2) == count_n3(3, 2) == count_n3(7, 2) == 18
    assert count_n3(2, 3) == 39 and count_n3(3, 3) == 40
    assert count_n3(2, 4) == 72 and count_n3(3, 4) == 78
    with pytest.raises(ValueError):
        count_n3(2, 0)


@pytest.mark.parametrize("k", range(1, 13))
def test_polynomial_matches_count(k):
    poly = count_n3_polynomial(k)
    for q in (2, 3, 5, 7, 11):
        assert sum(c * q**e for e, c in enumerate(poly)) == count_n3(q, k)
    assert len(poly) - 1 == max_q_exponent(k) if k >= 2 else len(poly) == 1


def test_max_q_exponent_values():
    assert [max_q_exponent(k) for k in range(2, 13)] == [k // 3 for k in range(2, 13)]
    assert max_q_exponent(3) == 1 and exponent_witness(3) == (1, 2, 1)
    assert max_q_exponent(6) == 2 and exponent_witness(6) == (2, 4, 2)
    assert max_q_exponent(2) == 0 and exponent_witness(2) is None
    with pytest.raises(ValueError):
        max_q_exponent(1)


def test_label_json_round_trip():
    R = make_ring("fqtk", 3, 4)
    for lab in itertools.chain(enumerate_labels_n3(R), enumerate_labels_n2(R)):
        js = label_to_json(lab)
        assert set(js) == {"fiber", "payload"}
        assert label_from_json(js) == lab
    assert label_to_json(Trivial(M2Special(1, 2, 1, 0, 3))) == {
        "fiber": "1",
        "payload": {"stratum": "special", "i": 1, "j": 2, "l": 1, "delta": 0, "a": 3},
    }
    with pytest.raises(ValueError):
        label_from_json({"fiber": "s3", "payload": {}})
    with pytest.raises(ValueError):
        label_from_json({"fiber": "1", "payload": {"stratum": "odd", "i": 1, "j": 1, "l": 1}})


def test_orbit_level_equivalence_of_labelled_reps(z4):
    # distinct labels are inequivalent, by the oracle's equivalence test
    labels = enumerate_labels_n3(z4)
    reps = [rep_of_label(z4, lab) for lab in labels]
    for a, b in itertools.combinations(reps[:8], 2):
        assert not equiv(a, b)
