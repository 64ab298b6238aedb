import itertools
import math

import pytest

from chainbruhat.ring import make_ring

# criterion id -> list of (part, passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def span_set(ring, cols, n):
    """All A-linear combinations of the given columns (brute force)."""
    span = {tuple([0] * n)}
    for c in cols:
        span = {tuple(ring.add(s[r], ring.mul(x, c[r])) for r in range(n)) for s in span for x in ring.codes}
    return span


def set_length(ring, s) -> int:
    return round(math.log(len(s), ring.p))


def all_matrices(ring, rows, cols):
    for data in itertools.product(ring.codes, repeat=rows * cols):
        yield data


@pytest.fixture
def z4():
    return make_ring("zpk", 2, 2)


@pytest.fixture
def z8():
    return make_ring("zpk", 2, 3)


@pytest.fixture
def f2t2():
    return make_ring("fqtk", 2, 2)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(ACCEPTANCE, key=int):
        parts = ACCEPTANCE[cid]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'pass' if good else 'FAIL'} ({info})" for name, good, info in parts)
        terminalreporter.write_line(f"criterion {cid}: {'PASS' if ok else 'FAIL'} | {detail}")
