"""Brute-force ground truth: flag space, orbit enumeration and equivalence tests."""

from .backend import AVAILABLE as BACKENDS
from .core import (
    DEFAULT_BUDGET,
    OrbitReport,
    canonical_flag,
    decomposability_check,
    double_cosets,
    equiv,
    fiber_counts,
    flag_count,
    flag_space,
)
from .flags import FlagRep, FlagSpace, borel_generators, flag_count_formula, residue_flag_count
from .linear import bfs_equiv, linear_equiv

__all__ = [
    "BACKENDS",
    "DEFAULT_BUDGET",
    "FlagRep",
    "FlagSpace",
    "OrbitReport",
    "bfs_equiv",
    "borel_generators",
    "canonical_flag",
    "decomposability_check",
    "double_cosets",
    "equiv",
    "fiber_counts",
    "flag_count",
    "flag_count_formula",
    "flag_space",
    "linear_equiv",
    "residue_flag_count",
]
