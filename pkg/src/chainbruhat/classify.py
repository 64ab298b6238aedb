"""Complete classification of ``B \\ GL_n(A) / B`` for ``n <= 3``.

For ``n = 2`` the double cosets are ``(1 0; pi^r 1)``, ``0 <= r <= k``.

For ``n = 3`` the permutation ``W(alpha)`` picks one of six fibers.  Five of
them are described by one or two valuations.  The trivial fiber is
parametrised by the lower-left ``2 x 2`` block, which lies in ``M2*`` (the
matrices whose only unit entry is the top-right one) and moves under
``B_2 x B_2``.  A matrix of ``M2*`` reduces to ``(pi^i 1; pi^j a pi^l)``;
``j`` is always invariant, ``i`` and ``l`` are invariant when below ``j``,
and when both are the unit ``a`` survives modulo a power of ``pi`` set by
``eps = min(j - i, j - l, i, l)`` and, when ``j = i + l``, by
``delta = v(a - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Iterator, NamedTuple, Optional, Union

from .errors import NotInM2Bullet
from .invariants import PermMatrix, intersection_length, permutation_invariant
from .matrix import Mat, from_rows
from .ring import Elem, RingSpec, iter_units_with_delta, unit_count, units_with_delta_count

# -- n = 2 -----------------------------------------------------------------


@dataclass(frozen=True)
class N2Label:
    r: int

    def to_json(self) -> dict:
        return {"fiber": "1" if self.r else "s1", "payload": {"r": self.r}}


def classify_n2(alpha: Mat) -> N2Label:
    if alpha.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    w = permutation_invariant(alpha)
    if w != PermMatrix.identity(2):
        return N2Label(0)
    return N2Label(intersection_length(alpha, 1, 1))


def enumerate_labels_n2(ring: RingSpec) -> list[N2Label]:
    return [N2Label(r) for r in range(ring.k + 1)]


# -- M2* ---------------------------------------------------------------------


class StandardForm(NamedTuple):
    i: int
    j: int
    l: int
    a: Optional[Elem]  # unit of A_{k-j}; None when some valuation equals k


def _eps(i: int, j: int, l: int) -> int:
    return min(j - i, j - l, i, l)


@dataclass(frozen=True)
class M2Discrete:
    i: int
    j: int
    l: int
    stratum: ClassVar[str] = "discrete"

    def payload(self) -> dict:
        return {"stratum": self.stratum, "i": self.i, "j": self.j, "l": self.l}


@dataclass(frozen=True)
class M2Generic:
    """``a`` is a unit code of ``A_m``, ``m = min(eps, k - j)``."""

    i: int
    j: int
    l: int
    a: int
    stratum: ClassVar[str] = "generic"

    def payload(self) -> dict:
        return {"stratum": self.stratum, "i": self.i, "j": self.j, "l": self.l, "a": self.a}


@dataclass(frozen=True)
class M2Special:
    """``j = i + l``; ``a`` is a unit code of ``A_m``, ``m = min(eps + delta, k - j)``."""

    i: int
    j: int
    l: int
    delta: int
    a: int
    stratum: ClassVar[str] = "special"

    def payload(self) -> dict:
        return {"stratum": self.stratum, "i": self.i, "j": self.j, "l": self.l, "delta": self.delta, "a": self.a}


M2Label = Union[M2Discrete, M2Generic, M2Special]


def _check_m2(beta: Mat):
    if beta.shape != (2, 2):
        raise NotInM2Bullet("expected a 2x2 matrix")
    R = beta.ring
    b11, b12, b21, b22 = beta.data
    if not R.is_unit(b12) or R.is_unit(b11) or R.is_unit(b21) or R.is_unit(b22):
        raise NotInM2Bullet("only the top-right entry may (and must) be a unit")


def standard_form_m2(beta: Mat) -> StandardForm:
    """Valuations ``(i, j, l)`` of the standard form of ``beta`` and its unit ``a``.

    ``i`` (resp. ``l``) becomes ``k`` when ``v(b11) >= j`` (resp. ``v(b22) >= j``):
    adding multiples of the bottom-left entry clears it.
    """
    _check_m2(beta)
    R = beta.ring
    k = R.k
    b11, b12, b21, b22 = beta.data
    j = R.valuation(b21)
    i, l = R.valuation(b11), R.valuation(b22)
    if j == k:
        return StandardForm(i, j, l, None)
    if i >= j:
        i = k
    if l >= j:
        l = k
    if i == k or l == k:
        return StandardForm(i, j, l, None)
    # scale to (pi^i 1; pi^j a pi^l): a = w * b12 / (u1 * u2)
    u1, u2, w = R.shift_down(b11, i), R.shift_down(b22, l), R.shift_down(b21, j)
    a = R.mul(R.mul(w, b12), R.inv(R.mul(u1, u2)))
    sub = R.quotient(k - j)
    return StandardForm(i, j, l, sub.elem(R.reduce(a, k - j)))


def _delta(sub: RingSpec, a: int) -> int:
    return sub.valuation(sub.sub(a, 1))


def m2_label(beta: Mat) -> M2Label:
    sf = standard_form_m2(beta)
    i, j, l = sf.i, sf.j, sf.l
    if sf.a is None:
        return M2Discrete(i, j, l)
    k = beta.ring.k
    eps = _eps(i, j, l)
    if i + l != j:
        return M2Generic(i, j, l, sf.a.value % beta.ring.p ** min(eps, k - j))
    d = _delta(sf.a.ring, sf.a.value)
    return M2Special(i, j, l, d, sf.a.value % beta.ring.p ** min(eps + d, k - j))


def alpha_m2(ring: RingSpec, i: int, j: int, l: int, a: int = 1) -> Mat:
    """``(pi^i 1; pi^j a  pi^l)``; ``a`` a code of ``A`` (or of a quotient, lifted by code)."""
    return from_rows(ring, [[ring.pi_power(i), 1], [ring.mul(ring.pi_power(j), a), ring.pi_power(l)]])


def _check_bmb(k: int, i: int, j: int, l: int):
    if not (k > j > max(i, l) and min(i, l) > 0):
        raise ValueError(f"need k > j > max(i, l) >= min(i, l) > 0, got k={k}, (i, j, l)=({i}, {j}, {l})")


def bmb_equiv(ring: RingSpec, i: int, j: int, l: int, a, a2) -> bool:
    """Whether ``alpha(a)`` and ``alpha(a2)`` are ``B_2 x B_2``-equivalent in ``M2*``.

    ``a`` and ``a2`` may be codes or elements of ``A`` or of ``A_{k-j}``; only
    their residues modulo ``pi^{k-j}`` matter.
    """
    k = ring.k
    _check_bmb(k, i, j, l)
    a, a2 = (x.value if isinstance(x, Elem) else int(x) for x in (a, a2))
    if a % ring.p == 0 or a2 % ring.p == 0:
        raise ValueError("a and a' must be units")
    sub = ring.quotient(k - j)
    a, a2 = a % sub.size, a2 % sub.size
    eps = _eps(i, j, l)
    if i + l != j:
        m = min(eps, k - j)
        return a % ring.p**m == a2 % ring.p**m
    d, d2 = _delta(sub, a), _delta(sub, a2)
    if d != d2:
        return False
    m = min(eps + d, k - j)
    return a % ring.p**m == a2 % ring.p**m


# -- n = 3 -----------------------------------------------------------------

FIBERS = {
    "1": PermMatrix((0, 1, 2)),
    "s1": PermMatrix((1, 0, 2)),
    "s2": PermMatrix((0, 2, 1)),
    "s1s2": PermMatrix((1, 2, 0)),
    "s2s1": PermMatrix((2, 0, 1)),
    "w0": PermMatrix((2, 1, 0)),
}
FIBER_OF = {w: name for name, w in FIBERS.items()}


@dataclass(frozen=True)
class Trivial:
    m2: M2Label
    fiber: ClassVar[str] = "1"

    def payload(self) -> dict:
        return self.m2.payload()


@dataclass(frozen=True)
class S1:
    i: int
    j: int
    fiber: ClassVar[str] = "s1"

    def payload(self) -> dict:
        return {"i": self.i, "j": self.j}


@dataclass(frozen=True)
class S2:
    i: int
    j: int
    fiber: ClassVar[str] = "s2"

    def payload(self) -> dict:
        return {"i": self.i, "j": self.j}


@dataclass(frozen=True)
class S1S2:
    i: int
    fiber: ClassVar[str] = "s1s2"

    def payload(self) -> dict:
        return {"i": self.i}


@dataclass(frozen=True)
class S2S1:
    i: int
    fiber: ClassVar[str] = "s2s1"

    def payload(self) -> dict:
        return {"i": self.i}


@dataclass(frozen=True)
class W0:
    fiber: ClassVar[str] = "w0"

    def payload(self) -> dict:
        return {}


N3Label = Union[Trivial, S1, S2, S1S2, S2S1, W0]


def label_to_json(label) -> dict:
    if isinstance(label, N2Label):
        return label.to_json()
    return {"fiber": label.fiber, "payload": label.payload()}


def label_from_json(obj: dict):
    fiber, pl = obj["fiber"], obj.get("payload", {})
    if "r" in pl:
        return N2Label(pl["r"])
    if fiber == "1":
        st = pl["stratum"]
        if st == "discrete":
            return Trivial(M2Discrete(pl["i"], pl["j"], pl["l"]))
        if st == "generic":
            return Trivial(M2Generic(pl["i"], pl["j"], pl["l"], pl["a"]))
        if st == "special":
            return Trivial(M2Special(pl["i"], pl["j"], pl["l"], pl["delta"], pl["a"]))
        raise ValueError(f"unknown stratum {st!r}")
    if fiber == "s1":
        return S1(pl["i"], pl["j"])
    if fiber == "s2":
        return S2(pl["i"], pl["j"])
    if fiber == "s1s2":
        return S1S2(pl["i"])
    if fiber == "s2s1":
        return S2S1(pl["i"])
    if fiber == "w0":
        return W0()
    raise ValueError(f"unknown fiber {fiber!r}")


def classify_n3(alpha: Mat) -> N3Label:
    if alpha.shape != (3, 3):
        raise ValueError("expected a 3x3 matrix")
    name = FIBER_OF[permutation_invariant(alpha)]
    if name == "w0":
        return W0()
    if name == "1":
        return Trivial(m2_label(Mat(alpha.ring, 2, 2, alpha.data[3:5] + alpha.data[6:8])))
    # the displayed representatives carry pi^i, pi^j where l(2,1) = i and l(1,2) = j
    if name == "s1":
        return S1(intersection_length(alpha, 2, 1), intersection_length(alpha, 1, 2))
    if name == "s2":
        return S2(intersection_length(alpha, 2, 1), intersection_length(alpha, 1, 2))
    if name == "s1s2":
        return S1S2(intersection_length(alpha, 2, 1))
    return S2S1(intersection_length(alpha, 1, 2))


def _check_range(k: int, *vals: int):
    if not all(1 <= v <= k for v in vals):
        raise ValueError(f"valuations must lie in [1, {k}], got {vals}")


def _check_m2_label(ring: RingSpec, lab: M2Label):
    k = ring.k
    i, j, l = lab.i, lab.j, lab.l
    _check_range(k, i, j, l)
    if isinstance(lab, M2Discrete):
        ok = j == k or (i < j < k == l) or (l < j < k == i) or (i == l == k > j)
        if not ok:
            raise ValueError(f"(i, j, l) = ({i}, {j}, {l}) is not a discrete stratum")
        return
    _check_bmb(k, i, j, l)
    eps = _eps(i, j, l)
    if isinstance(lab, M2Generic):
        if i + l == j:
            raise ValueError("generic stratum needs j != i + l")
        m = min(eps, k - j)
    else:
        if i + l != j:
            raise ValueError("special stratum needs j == i + l")
        if not 0 <= lab.delta <= k - j:
            raise ValueError("delta out of range")
        m = min(eps + lab.delta, k - j)
        if lab.a < ring.p**m and _delta(ring.quotient(m), lab.a) != min(lab.delta, m):
            raise ValueError("residue a does not have v(a - 1) = delta")
    if not (0 <= lab.a < ring.p**m and lab.a % ring.p):
        raise ValueError(f"a must be a unit code of A_{m}")


def rep_of_label(ring: RingSpec, label) -> Mat:
    """The displayed representative of a label."""
    k = ring.k
    P = ring.pi_power
    if isinstance(label, N2Label):
        if not 0 <= label.r <= k:
            raise ValueError("r out of range")
        return from_rows(ring, [[1, 0], [P(label.r), 1]])
    if isinstance(label, W0):
        return from_rows(ring, [[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    if isinstance(label, S1):
        _check_range(k, label.i, label.j)
        return from_rows(ring, [[0, 1, 0], [1, 0, 0], [P(label.i), P(label.j), 1]])
    if isinstance(label, S2):
        _check_range(k, label.i, label.j)
        return from_rows(ring, [[1, 0, 0], [P(label.j), 0, 1], [P(label.i), 1, 0]])
    if isinstance(label, S1S2):
        _check_range(k, label.i)
        return from_rows(ring, [[0, 0, 1], [1, 0, 0], [P(label.i), 1, 0]])
    if isinstance(label, S2S1):
        _check_range(k, label.i)
        return from_rows(ring, [[0, 1, 0], [0, P(label.i), 1], [1, 0, 0]])
    if isinstance(label, Trivial):
        m2 = label.m2
        _check_m2_label(ring, m2)
        a = 1 if isinstance(m2, M2Discrete) else m2.a
        beta = alpha_m2(ring, m2.i, m2.j, m2.l, a)
        b11, b12, b21, b22 = beta.data
        return from_rows(ring, [[1, 0, 0], [b11, b12, 0], [b21, b22, 1]])
    raise TypeError(f"not a label: {label!r}")


def _nondiscrete_triples(k: int) -> Iterator[tuple[int, int, int]]:
    for j in range(2, k):
        for i in range(1, j):
            for l in range(1, j):
                yield i, j, l


def enumerate_m2_labels(ring: RingSpec) -> list[M2Label]:
    k = ring.k
    out: list[M2Label] = []
    for i in range(1, k + 1):
        for l in range(1, k + 1):
            out.append(M2Discrete(i, k, l))
    for j in range(1, k):
        for i in range(1, j):
            out.append(M2Discrete(i, j, k))
        for l in range(1, j):
            out.append(M2Discrete(k, j, l))
        out.append(M2Discrete(k, j, k))
    for i, j, l in _nondiscrete_triples(k):
        eps = _eps(i, j, l)
        if i + l != j:
            m = min(eps, k - j)
            out.extend(M2Generic(i, j, l, a) for a in ring.quotient(m).unit_codes)
        else:
            for d in range(k - j + 1):
                m = min(eps + d, k - j)
                out.extend(M2Special(i, j, l, d, a) for a in iter_units_with_delta(ring, m, min(d, m)))
    return out


def enumerate_labels_n3(ring: RingSpec) -> list[N3Label]:
    """One label per double coset of ``GL_3(A)``."""
    k = ring.k
    out: list[N3Label] = [Trivial(m) for m in enumerate_m2_labels(ring)]
    vals = range(1, k + 1)
    out += [S1(i, j) for i in vals for j in vals]
    out += [S2(i, j) for i in vals for j in vals]
    out += [S1S2(i) for i in vals]
    out += [S2S1(i) for i in vals]
    out.append(W0())
    return out


def m2_stratum_counts(q: int, k: int) -> Iterator[tuple[str, tuple, int]]:
    """``(stratum, parameters, size)`` for every stratum of ``B_2 \\ M2* / B_2``."""
    yield "discrete", ("j=k",), k * k
    for j in range(1, k):
        yield "discrete", ("i<j<k=l", j), j - 1
        yield "discrete", ("l<j<k=i", j), j - 1
        yield "discrete", ("i=l=k>j", j), 1
    for i, j, l in _nondiscrete_triples(k):
        eps = _eps(i, j, l)
        if i + l != j:
            yield "generic", (i, j, l), unit_count(q, min(eps, k - j))
        else:
            for d in range(k - j + 1):
                m = min(eps + d, k - j)
                yield "special", (i, j, l, d), units_with_delta_count(q, m, min(d, m))


def count_n3(q: int, k: int) -> int:
    """``|B \\ GL_3(A_k) / B|`` from the stratum sizes."""
    if k < 1:
        raise ValueError("k must be >= 1")
    fibers = 2 * k * k + 2 * k + 1
    return fibers + sum(size for _, _, size in m2_stratum_counts(q, k))


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for s, x in enumerate(a):
        for t, y in enumerate(b):
            out[s + t] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[s] if s < len(a) else 0) + (b[s] if s < len(b) else 0) for s in range(n)]


def _unit_poly(m: int) -> list[int]:
    # q^(m-1) (q - 1)
    return [0] * (m - 1) + [-1, 1] if m else [1]


def _delta_poly(m: int, d: int) -> list[int]:
    if d == m:
        return [1]
    if d == 0:
        return [0] * (m - 1) + [-2, 1]
    return [0] * (m - d - 1) + [-1, 1]


def count_n3_polynomial(k: int) -> list[int]:
    """Coefficients (constant first) of ``count_n3(q, k)`` as a polynomial in ``q``."""
    poly = [2 * k * k + 2 * k + 1 + k * k + 2 * (k - 1) * (k - 2) // 2 + (k - 1)]
    for i, j, l in _nondiscrete_triples(k):
        eps = _eps(i, j, l)
        if i + l != j:
            poly = _poly_add(poly, _unit_poly(min(eps, k - j)))
        else:
            for d in range(k - j + 1):
                m = min(eps + d, k - j)
                poly = _poly_add(poly, _delta_poly(m, min(d, m)))
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def stratum_exponents(k: int) -> Iterator[tuple[tuple[int, int, int], int]]:
    """``((i, j, l), e)``: the leading power ``q^e`` of each non-discrete stratum."""
    for i, j, l in _nondiscrete_triples(k):
        yield (i, j, l), min(_eps(i, j, l), k - j)


def max_q_exponent(k: int) -> int:
    """Largest power of ``q`` in any per-stratum count (0 if all strata are discrete)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return max((e for _, e in stratum_exponents(k)), default=0)


def exponent_witness(k: int) -> Optional[tuple[int, int, int]]:
    """A stratum ``(i, j, l)`` attaining :func:`max_q_exponent`, or None."""
    best = max_q_exponent(k)
    for ijl, e in stratum_exponents(k):
        if e == best:
            return ijl
    return None
