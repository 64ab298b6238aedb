import itertools

import pytest

from chainbruhat.experiments import (
    BOUND_C_HIGH,
    BOUND_C_LOW,
    SUITES,
    W42,
    CheckResult,
    bmb_cases,
    bound_check,
    build_42_matrix,
    census,
    census_grid,
    dependence_table,
    experiment_42,
    format_table,
    growth_table,
    r_separation_42,
    run_suites,
    theory_predicts_d,
    verify_n2,
)
from chainbruhat.invariants import permutation_invariant
from chainbruhat.matrix import det
from chainbruhat.ring import make_ring


def test_build_42_matrix():
    R = make_ring("zpk", 3, 2)
    for a in R.codes:
        m = build_42_matrix(R, a)
        assert permutation_invariant(m) == W42
        assert R.is_unit(det(m).value)
    assert build_42_matrix(R, 1).to_lists() == [[0, 1, 0, 0], [1, 0, 0, 0], [3, 3, 0, 1], [3, 3, 1, 0]]
    with pytest.raises(ValueError):
        build_42_matrix(make_ring("zpk", 3, 3), 1)


def test_experiment_42_q2():
    res = experiment_42(2)
    assert res.num_classes() == 2
    assert res.fiber_count == 16
    assert all(res.checks.values())
    assert res.to_json()["num_classes"] == 2
    assert "~" in res.table()


def test_experiment_42_linear_matches_oracle_q2():
    a = experiment_42(2, "fqtk")
    b = experiment_42(2, "fqtk", method="linear")
    assert a.equivalent == b.equivalent
    assert b.fiber_count is None
    with pytest.raises(ValueError):
        experiment_42(2, method="magic")


def test_r_separates_zero_one_and_other_units_q5():
    # over F_5 the classes a = 2, 3, 4 share r and profile yet are inequivalent
    res = experiment_42(5, method="linear")
    assert res.num_classes() == 5
    assert all(res.checks.values())
    sep = r_separation_42(res)
    assert sep["a = 1 separated by r"]
    assert sep["classes a != 1 inequivalent"]
    assert not sep["classes a != 1 share r"]
    assert res.r[2] == res.r[3] == res.r[4] != res.r[0]
    assert set(res.collisions) == set(itertools.combinations((2, 3, 4), 2))


def test_theory_cases():
    assert [theory_predicts_d(n, k) for n, k in [(2, 5), (3, 1), (3, 2), (3, 3), (4, 1), (4, 2)]] == [
        True,
        True,
        True,
        False,
        True,
        False,
    ]


def test_dependence_table_small():
    tab = dependence_table(cells=[(2, 1), (2, 2), (3, 2), (3, 3)])
    assert tab.cells == {(2, 1): "D", (2, 2): "D", (3, 2): "D", (3, 3): "N"}
    assert tab.evidence[(3, 3)] == {"q=2": 39, "q=3": 40}
    assert tab.agrees()
    assert "observed" in tab.table()
    tab = dependence_table(cells=[(4, 3)], budget=10**5)
    assert tab.cells == {(4, 3): "untested"}


def test_growth_table_and_bounds():
    rows = growth_table(2, 12)
    assert [r["count"] for r in rows[:5]] == [6, 18, 39, 72, 120]
    for r in rows[1:]:
        assert r["exponent"] == r["degree"] == r["floor_k3"]
    assert all(bound_check().values())
    assert 0 < BOUND_C_LOW < BOUND_C_HIGH


def test_verify_n2_suite():
    res = verify_n2(qs=(2,), ks=(1, 2))
    assert isinstance(res, CheckResult) and res.passed
    assert res.seconds >= 0
    assert res.to_json()["passed"] is True


def test_bmb_cases_enumeration():
    R = make_ring("zpk", 3, 4)
    cases = list(bmb_cases(R))
    # j = 2: 1 triple x 6^2 unit pairs of A_2; j = 3: 4 triples x 2^2 pairs of A_1
    assert len(cases) == 36 + 16
    assert all(a % 3 and a2 % 3 for *_, a, a2 in cases)


def test_suites_and_format_table():
    assert set(SUITES) >= {"n2", "n3", "bmb", "42", "cases", "growth"}
    assert format_table(["a", "bb"], [[1, 2]]).splitlines()[0].split() == ["a", "bb"]
    a = run_suites(["n2", "growth"], threads=1)
    b = run_suites(["n2", "growth"], threads=2)
    assert [r.name for r in a] == ["n2", "growth"]
    assert [r.checks for r in a] == [r.checks for r in b]


def test_census_is_deterministic_across_workers():
    cells = census_grid([2, 3], [1, 2], [2, 3])
    assert len(cells) == 8
    one = census(cells, threads=1)
    two = census(cells, threads=2)
    assert one == two
    totals = {(r["p"], r["k"], r["n"]): r["total"] for r in one}
    assert totals[(2, 2, 3)] == 18 and totals[(3, 1, 3)] == 6
    over = census([("zpk", 3, 2, 4)], budget=100)
    assert "error" in over[0]
