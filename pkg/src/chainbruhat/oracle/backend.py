"""Kernel selection: the compiled extension when importable, else pure Python."""

from __future__ import annotations

from . import _pykernel

try:
    from . import _kernel as _ckernel
except ImportError:  # extension not built
    _ckernel = None

AVAILABLE = ("cython", "python") if _ckernel is not None else ("python",)
DEFAULT = AVAILABLE[0]


def kernel_class(name: str = "auto"):
    if name == "auto":
        name = DEFAULT
    if name == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not built; reinstall the package with a C compiler")
        return _ckernel.FlagKernel
    if name == "python":
        return _pykernel.FlagKernel
    raise ValueError(f"unknown backend {name!r}")
