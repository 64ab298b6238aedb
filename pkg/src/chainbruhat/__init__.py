"""Double cosets ``B \\ GL_n(A) / B`` over finite chain rings."""

from .errors import (
    BlockNotInvertible,
    BudgetExceeded,
    NonInvertible,
    NonUnit,
    NotInM2Bullet,
    RingMismatch,
)
from .ring import Elem, RingSpec, make_ring, parse_ring

__version__ = "0.1.0"

__all__ = [
    "BlockNotInvertible",
    "BudgetExceeded",
    "Elem",
    "NonInvertible",
    "NonUnit",
    "NotInM2Bullet",
    "RingMismatch",
    "RingSpec",
    "make_ring",
    "parse_ring",
]
