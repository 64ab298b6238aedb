"""Exception types raised across the package."""


class ChainBruhatError(Exception):
    pass


class NonUnit(ChainBruhatError, ArithmeticError):
    """Inverse requested for an element of the maximal ideal."""


class NonInvertible(ChainBruhatError, ArithmeticError):
    """A matrix whose determinant is not a unit."""


class BlockNotInvertible(NonInvertible):
    pass


class NotInM2Bullet(ChainBruhatError, ValueError):
    """A 2x2 matrix whose only unit entry is not the top-right one."""


class BudgetExceeded(ChainBruhatError, RuntimeError):
    pass


class RingMismatch(ChainBruhatError, ValueError):
    pass
