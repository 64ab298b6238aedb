import importlib
import random
import sys

import numpy as np
import pytest

from chainbruhat.matrix import random_gl
from chainbruhat.oracle import BACKENDS, double_cosets, flag_space
from chainbruhat.oracle.flags import FlagSpace
from chainbruhat.ring import make_ring

needs_cython = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernel not built")


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert BACKENDS[0] in ("cython", "python")


@needs_cython
@pytest.mark.parametrize("flavor,q,k,n", [("zpk", 2, 2, 3), ("fqtk", 3, 2, 3), ("zpk", 2, 3, 2), ("fqtk", 2, 1, 4)])
def test_kernels_agree(flavor, q, k, n):
    R = make_ring(flavor, q, k)
    cy, py = FlagSpace(R, n, "cython"), FlagSpace(R, n, "python")
    assert cy.size == py.size
    rng = random.Random(3)
    for _ in range(100):
        g = random_gl(R, n, rng)
        assert cy.index(g) == py.index(g)
        assert cy.canonical(g) == py.canonical(g)
    for x in rng.sample(range(cy.size), min(cy.size, 100)):
        assert cy.flag(x) == py.flag(x)
    for kind in ("full", "minimal"):
        gens = cy.generators(kind)
        lc, rc, sc = cy.kernel.orbits(gens)
        lp, rp, sp = py.kernel.orbits(gens)
        assert np.array_equal(np.asarray(lc), np.asarray(lp))
        assert np.array_equal(np.asarray(rc), np.asarray(rp))
        assert np.array_equal(np.asarray(sc), np.asarray(sp))


@needs_cython
def test_orbit_contains_agrees():
    R = make_ring("zpk", 2, 2)
    cy, py = FlagSpace(R, 3, "cython"), FlagSpace(R, 3, "python")
    gens = cy.generators("minimal")
    for a in range(0, cy.size, 7):
        for b in range(0, cy.size, 11):
            assert bool(cy.kernel.orbit_contains(a, b, gens)) == bool(py.kernel.orbit_contains(a, b, gens))


def test_fallback_selected_when_extension_missing(monkeypatch):
    import chainbruhat.oracle as pkg
    import chainbruhat.oracle.backend as backend

    monkeypatch.setitem(sys.modules, "chainbruhat.oracle._kernel", None)
    monkeypatch.delattr(pkg, "_kernel", raising=False)
    try:
        reloaded = importlib.reload(backend)
        assert reloaded.AVAILABLE == ("python",)
        assert reloaded.DEFAULT == "python"
        with pytest.raises(RuntimeError):
            reloaded.kernel_class("cython")
        R = make_ring("zpk", 2, 2)
        space = FlagSpace(R, 3, "auto")
        assert type(space.kernel).__module__.endswith("_pykernel")
    finally:
        monkeypatch.undo()
        importlib.reload(backend)


def test_unknown_backend():
    with pytest.raises(ValueError):
        FlagSpace(make_ring("zpk", 2, 1), 2, "fortran")


def test_report_identical_across_backends():
    R = make_ring("zpk", 3, 1)
    reports = {double_cosets(R, 4, backend=b).dumps() for b in BACKENDS}
    assert len(reports) == 1
    assert flag_space(R, 4).size == 40 * 13 * 4
