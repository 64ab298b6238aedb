"""Finite chain rings ``Z/p^k`` and ``F_p[t]/t^k``.

Elements of either flavor are stored as integer codes in ``[0, p**k)``.
For ``zpk`` the code is the least nonnegative residue; for ``fqtk`` it is
the coefficient vector read as base-``p`` digits, digit ``r`` holding the
coefficient of ``t**r``.  With this encoding several operations coincide
for both flavors:

* ``pi**e`` has code ``p**e``;
* the valuation is the number of trailing base-``p`` zero digits;
* reduction to ``A_m = A / pi**m`` is ``code % p**m``;
* an element lies in the maximal ideal iff ``code % p == 0``;
* exact division by ``pi**e`` of an element of valuation ``>= e`` is
  ``code // p**e``.

Only addition and multiplication differ between the two flavors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterator, Union

from .errors import NonUnit, RingMismatch

ZPK = "zpk"
FQTK = "fqtk"
FLAVORS = (ZPK, FQTK)

# fqtk rings up to this many elements get full add/mul tables
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        x, r = divmod(x, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


@dataclass(frozen=True)
class RingSpec:
    """The chain ring of the given flavor, residue characteristic ``p`` and length ``k``."""

    flavor: str
    p: int
    k: int
    _add: Callable[[int, int], int] = field(init=False, repr=False, compare=False)
    _mul: Callable[[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown ring flavor {self.flavor!r}")
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"residue characteristic must be prime, got {self.p}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"length must be an integer >= 1, got {self.k}")
        Q = self.p**self.k
        if self.flavor == ZPK or self.k == 1:
            add = lambda x, y: (x + y) % Q
            mul = lambda x, y: (x * y) % Q
        elif Q <= _TABLE_LIMIT:
            addt, mult = _poly_tables(self.p, self.k)
            add = lambda x, y: addt[x * Q + y]
            mul = lambda x, y: mult[x * Q + y]
        else:
            p, k = self.p, self.k
            add = lambda x, y: _poly_add(x, y, p, k)
            mul = lambda x, y: _poly_mul(x, y, p, k)
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_mul", mul)

    # -- basic data -------------------------------------------------------

    @property
    def q(self) -> int:
        """Order of the residue field."""
        return self.p

    @cached_property
    def size(self) -> int:
        return self.p**self.k

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def pi(self) -> int:
        return self.p if self.k > 1 else 0

    def pi_power(self, e: int) -> int:
        """Code of ``pi**e`` (zero once ``e >= k``)."""
        if e < 0:
            raise ValueError("negative exponent")
        return self.p**e if e < self.k else 0

    def quotient(self, m: int) -> "RingSpec":
        """The ring ``A_m = A / pi**m`` (same flavor, length ``m``)."""
        if not 1 <= m <= self.k:
            raise ValueError(f"quotient length must lie in [1, {self.k}]")
        return RingSpec(self.flavor, self.p, m)

    @property
    def residue_field(self) -> "RingSpec":
        return self.quotient(1)

    def __str__(self) -> str:
        key = "p" if self.flavor == ZPK else "q"
        return f"{self.flavor}:{key}={self.p},k={self.k}"

    def describe(self) -> str:
        if self.flavor == ZPK:
            return f"Z/{self.size}"
        return f"F_{self.p}[t]/t^{self.k}"

    # -- arithmetic on codes ---------------------------------------------

    def add(self, x: int, y: int) -> int:
        return self._add(x, y)

    def neg(self, x: int) -> int:
        if self.flavor == ZPK or self.k == 1:
            return -x % self.size
        return _undigits([-d % self.p for d in _digits(x, self.p, self.k)], self.p)

    def sub(self, x: int, y: int) -> int:
        return self._add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        return self._mul(x, y)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` under ``Z -> A``."""
        if self.flavor == ZPK:
            return n % self.size
        return n % self.p

    def is_unit(self, x: int) -> bool:
        return x % self.p != 0

    def valuation(self, x: int) -> int:
        """Largest ``r`` with ``x`` in ``pi**r A``; ``valuation(0) == k``."""
        if x == 0:
            return self.k
        v = 0
        p = self.p
        while x % p == 0:
            x //= p
            v += 1
        return v

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise NonUnit(f"{self.format(x)} is not a unit in {self.describe()}")
        if self.flavor == ZPK or self.k == 1:
            return pow(x, -1, self.size)
        return self._inv_table[x]

    @cached_property
    def _inv_table(self) -> dict[int, int]:
        # unit group order is p^(k-1)(p-1)
        e = self.p ** (self.k - 1) * (self.p - 1) - 1
        return {u: self._pow(u, e) for u in self.unit_codes}

    def _pow(self, x: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._mul(result, x)
            x = self._mul(x, x)
            e >>= 1
        return result

    def reduce(self, x: int, m: int) -> int:
        """Residue of ``x`` in ``A_m`` (as a code of ``quotient(m)``)."""
        return x % self.p**m

    def shift_down(self, x: int, e: int) -> int:
        """A ``y`` with ``pi**e * y == x``; requires ``valuation(x) >= e``.

        The result is the canonical choice, unique modulo ``pi**(k-e)``.
        """
        return x // self.p**e

    def unit_part(self, x: int) -> int:
        """A unit ``u`` with ``x == pi**v(x) * u`` (``x`` nonzero)."""
        if x == 0:
            raise ValueError("zero has no unit part")
        return self.shift_down(x, self.valuation(x))

    def divide(self, y: int, x: int) -> int:
        """A quotient ``c`` with ``c * x == y``; requires ``v(y) >= v(x)``."""
        if x == 0:
            if y != 0:
                raise ArithmeticError("division by zero")
            return 0
        e = self.valuation(x)
        if self.valuation(y) < e:
            raise ArithmeticError("valuation of dividend is too small")
        return self._mul(self.shift_down(y, e), self.inv(self.shift_down(x, e)))

    # -- enumeration -----------------------------------------------------

    @property
    def codes(self) -> range:
        return range(self.size)

    @cached_property
    def unit_codes(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.size) if x % self.p)

    def elem(self, value: Union[int, str, "Elem"]) -> "Elem":
        """Wrap a code (or parse a string) as an :class:`Elem`."""
        if isinstance(value, Elem):
            if value.ring != self:
                raise RingMismatch(f"element of {value.ring} used in {self}")
            return value
        if isinstance(value, str):
            return Elem(self, self.parse(value))
        if not 0 <= value < self.size:
            raise ValueError(f"code {value} out of range for {self}")
        return Elem(self, value)

    # -- text syntax -----------------------------------------------------

    def parse(self, text: str) -> int:
        """Parse element syntax: decimal for ``zpk``, polynomial in ``t`` for ``fqtk``."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty element")
        if self.flavor == ZPK:
            try:
                return int(s) % self.size
            except ValueError:
                raise ValueError(f"bad element {text!r} for {self}") from None
        if not _POLY_RE.fullmatch(s):
            raise ValueError(f"bad polynomial {text!r}")
        coeffs = [0] * self.k
        for m in _TERM_RE.finditer(s):
            sign, coef, var, exp = m.groups()
            if not (coef or var):
                continue
            c = int(coef) if coef else 1
            if sign == "-":
                c = -c
            d = 0 if not var else (int(exp) if exp else 1)
            if d < self.k:
                coeffs[d] = (coeffs[d] + c) % self.p
        return _undigits(coeffs, self.p)

    def format(self, x: int) -> str:
        if self.flavor == ZPK:
            return str(x)
        terms = []
        for d, c in enumerate(_digits(x, self.p, self.k)):
            if not c:
                continue
            if d == 0:
                terms.append(str(c))
            else:
                mono = "t" if d == 1 else f"t^{d}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


_POLY_RE = re.compile(r"[+-]?(\d+\*?t(\^\d+)?|\d+|t(\^\d+)?)([+-](\d+\*?t(\^\d+)?|\d+|t(\^\d+)?))*")
_TERM_RE = re.compile(r"([+-]?)(\d*)\*?(t)?(?:\^(\d+))?")


def _poly_add(x: int, y: int, p: int, k: int) -> int:
    return _undigits([(a + b) % p for a, b in zip(_digits(x, p, k), _digits(y, p, k))], p)


def _poly_mul(x: int, y: int, p: int, k: int) -> int:
    a = _digits(x, p, k)
    b = _digits(y, p, k)
    c = [0] * k
    for i, ai in enumerate(a):
        if ai:
            for j in range(k - i):
                c[i + j] += ai * b[j]
    return _undigits([v % p for v in c], p)


def _poly_tables(p: int, k: int) -> tuple[list[int], list[int]]:
    Q = p**k
    add = [_poly_add(x, y, p, k) for x in range(Q) for y in range(Q)]
    mul = [_poly_mul(x, y, p, k) for x in range(Q) for y in range(Q)]
    return add, mul


@dataclass(frozen=True)
class Elem:
    """An element of a :class:`RingSpec`; ``value`` is the canonical code."""

    ring: RingSpec
    value: int

    def _coerce(self, other) -> int:
        if isinstance(other, Elem):
            if other.ring != self.ring:
                raise RingMismatch(f"cannot combine elements of {self.ring} and {other.ring}")
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return Elem(self.ring, self.ring.add(self.value, y))

    __radd__ = __add__

    def __neg__(self):
        return Elem(self.ring, self.ring.neg(self.value))

    def __sub__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return Elem(self.ring, self.ring.sub(self.value, y))

    def __rsub__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return Elem(self.ring, self.ring.sub(y, self.value))

    def __mul__(self, other):
        y = self._coerce(other)
        if y is NotImplemented:
            return y
        return Elem(self.ring, self.ring.mul(self.value, y))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Elem(self.ring, self.ring._pow(self.value, e))

    def inverse(self) -> "Elem":
        return Elem(self.ring, self.ring.inv(self.value))

    @property
    def valuation(self) -> int:
        return self.ring.valuation(self.value)

    @property
    def is_unit(self) -> bool:
        return self.ring.is_unit(self.value)

    def __str__(self) -> str:
        return self.ring.format(self.value)


# -- module-level operations --------------------------------------------------

_RING_RE = re.compile(r"(zpk|fqtk):(p|q)=(\d+),k=(\d+)")


def make_ring(flavor: str, p: int, k: int) -> RingSpec:
    flavor = flavor.lower()
    aliases = {"zpk": ZPK, "z": ZPK, "fqtk": FQTK, "f": FQTK}
    if flavor not in aliases:
        raise ValueError(f"unknown ring flavor {flavor!r}")
    return RingSpec(aliases[flavor], p, k)


def parse_ring(text: str) -> RingSpec:
    """Parse ``zpk:p=2,k=3`` or ``fqtk:q=3,k=2``."""
    m = _RING_RE.fullmatch(text.strip().replace(" ", "").lower())
    if not m:
        raise ValueError(f"bad ring spec {text!r}; expected e.g. zpk:p=2,k=3 or fqtk:q=3,k=2")
    return make_ring(m.group(1), int(m.group(3)), int(m.group(4)))


def add(x: Elem, y: Elem) -> Elem:
    return x + y


def neg(x: Elem) -> Elem:
    return -x


def mul(x: Elem, y: Elem) -> Elem:
    return x * y


def inv(x: Elem) -> Elem:
    return x.inverse()


def valuation(x: Elem) -> int:
    return x.valuation


def enumerate_elements(ring: RingSpec) -> list[Elem]:
    return [Elem(ring, x) for x in ring.codes]


def enumerate_units(ring: RingSpec) -> list[Elem]:
    return [Elem(ring, x) for x in ring.unit_codes]


def iter_units_with_delta(ring: RingSpec, m: int, delta: int) -> Iterator[int]:
    """Codes of ``{a in A_m^x : v(a - 1) = delta}``, valuation taken in ``A_m``."""
    if not 0 <= delta <= m:
        raise ValueError("need 0 <= delta <= m")
    if m == 0:
        yield 0
        return
    sub = ring.quotient(m)
    for a in sub.unit_codes:
        if sub.valuation(sub.sub(a, 1)) == delta:
            yield a


def unit_count(q: int, m: int) -> int:
    """``|A_m^x|`` for residue field order ``q``; ``A_0`` is the zero ring with one unit."""
    if m < 0:
        raise ValueError("m must be >= 0")
    if m == 0:
        return 1
    return q ** (m - 1) * (q - 1)


def units_with_delta_count(q: int, m: int, delta: int) -> int:
    """``|{a in A_m^x : v(a-1) = delta}|`` (with ``v(0) = m`` in ``A_m``)."""
    if m < 0 or not 0 <= delta <= m:
        raise ValueError("need 0 <= delta <= m")
    if delta == m:
        return 1
    if delta == 0:
        return (q - 2) * q ** (m - 1)
    return (q - 1) * q ** (m - delta - 1)
