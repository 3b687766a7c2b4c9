"""Commutative semirings used as coefficients of weighted terms.

Four semirings are built in:

* ``nat``  -- the natural numbers.
* ``S``    -- pairs ``(a, b)`` read as ``a + bX`` with ``X*X = 2``.
* ``S9``   -- the quotient of ``S`` by ``2 + 1 = 2``; components saturate at 2.
* ``rat``  -- non-negative rationals, exact (``fractions.Fraction``).

Products in ``S`` use the ordinary expansion

    (a1 + b1 X)(a2 + b2 X) = (a1 a2 + 2 b1 b2) + (a1 b2 + a2 b1) X.

The variant with cross coefficient ``a1 b1 + a2 b2`` is not unital
(it gives ``1 * X = 0``), so it is not used.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

from .errors import MixedSemirings, SearchSpaceTooLarge, TermSyntaxError


@dataclass(frozen=True, eq=False)
class Semiring:
    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    parse: Callable[[str], Any]
    fmt: Callable[[Any], str]
    elements: Optional[tuple] = None
    _below: Optional[Callable[[Any], list]] = field(default=None, repr=False)
    _bounded: Optional[Callable[[int], list]] = field(default=None, repr=False)

    def __post_init__(self):
        if self.elements is not None:
            verify_axioms(self)

    def __repr__(self):
        return f"Semiring({self.name})"

    @property
    def finite(self) -> bool:
        return self.elements is not None

    def sum(self, xs: Iterable) -> Any:
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total

    def is_zero(self, x) -> bool:
        return x == self.zero

    def below(self, x) -> list:
        """Every ``r`` such that ``r + s == x`` for some ``s`` (finite cases only)."""
        if self.elements is not None:
            return [r for r in self.elements
                    if any(self.add(r, s) == x for s in self.elements)]
        if self._below is None:
            raise SearchSpaceTooLarge(f"{self.name}: summands of {self.fmt(x)} are not enumerable")
        return self._below(x)

    def bounded_elements(self, bound: int) -> list:
        if self.elements is not None:
            return list(self.elements)
        return self._bounded(bound)

    def le(self, x, y) -> bool:
        """Additive preorder: ``x <= y`` iff ``x + z == y`` for some ``z``."""
        if self.elements is not None:
            return any(self.add(x, z) == y for z in self.elements)
        return x in self.below(y)


def verify_axioms(ring: Semiring) -> None:
    """Exhaustively check the commutative semiring axioms on a finite carrier."""
    els = ring.elements
    add, mul, zero, one = ring.add, ring.mul, ring.zero, ring.one
    for x in els:
        for name, ok in (("additive identity", add(x, zero) == x),
                         ("multiplicative identity", mul(x, one) == x),
                         ("absorption", mul(x, zero) == zero)):
            if not ok:
                raise ValueError(f"{ring.name}: {name} fails at {x!r}")
    for x, y in itertools.product(els, repeat=2):
        if add(x, y) != add(y, x) or mul(x, y) != mul(y, x):
            raise ValueError(f"{ring.name}: commutativity fails at {x!r}, {y!r}")
    for x, y, z in itertools.product(els, repeat=3):
        if add(add(x, y), z) != add(x, add(y, z)):
            raise ValueError(f"{ring.name}: additive associativity fails")
        if mul(mul(x, y), z) != mul(x, mul(y, z)):
            raise ValueError(f"{ring.name}: multiplicative associativity fails")
        if mul(x, add(y, z)) != add(mul(x, y), mul(x, z)):
            raise ValueError(f"{ring.name}: distributivity fails")


# -- literals ---------------------------------------------------------------

_POLY = re.compile(r"^(?:(\d+)|(\d*)X|(\d+)\+(\d*)X)$")


def _parse_poly(text: str):
    m = _POLY.match(text.replace(" ", ""))
    if not m:
        raise TermSyntaxError(f"bad coefficient {text!r}", 0)
    if m.group(1) is not None:
        return (int(m.group(1)), 0)
    if m.group(3) is not None:
        return (int(m.group(3)), int(m.group(4) or 1))
    return (0, int(m.group(2) or 1))


def _fmt_poly(x) -> str:
    a, b = x
    if b == 0:
        return str(a)
    xs = "X" if b == 1 else f"{b}X"
    return xs if a == 0 else f"{a}+{xs}"


def _parse_nat(text: str) -> int:
    if not text.strip().isdigit():
        raise TermSyntaxError(f"bad natural coefficient {text!r}", 0)
    return int(text)


def _parse_rat(text: str) -> Fraction:
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise TermSyntaxError(f"bad rational coefficient {text!r}", 0) from None
    if value < 0:
        raise TermSyntaxError(f"negative coefficient {text!r}", 0)
    return value


def _fmt_rat(x: Fraction) -> str:
    return str(x)


# -- the built-in semirings -------------------------------------------------

def _s_mul(x, y):
    a1, b1 = x
    a2, b2 = y
    return (a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1)


def _sat(v: int) -> int:
    return v if v < 2 else 2


def saturate(x):
    """The quotient map S -> S9."""
    return (_sat(x[0]), _sat(x[1]))


NAT = Semiring(
    "nat", 0, 1, lambda x, y: x + y, lambda x, y: x * y, _parse_nat, str,
    _below=lambda x: list(range(x + 1)),
    _bounded=lambda k: list(range(k + 1)),
)

S = Semiring(
    "S", (0, 0), (1, 0),
    lambda x, y: (x[0] + y[0], x[1] + y[1]), _s_mul, _parse_poly, _fmt_poly,
    _below=lambda x: [(a, b) for a in range(x[0] + 1) for b in range(x[1] + 1)],
    _bounded=lambda k: [(a, b) for a in range(k + 1) for b in range(k + 1)],
)

S9 = Semiring(
    "S9", (0, 0), (1, 0),
    lambda x, y: (_sat(x[0] + y[0]), _sat(x[1] + y[1])),
    lambda x, y: saturate(_s_mul(x, y)),
    lambda text: saturate(_parse_poly(text)), _fmt_poly,
    elements=tuple((a, b) for a in range(3) for b in range(3)),
)


def _rat_bounded(k: int) -> list:
    return sorted({Fraction(p, q) for q in range(1, k + 1) for p in range(q + 1)})


RAT = Semiring(
    "rat", Fraction(0), Fraction(1), lambda x, y: x + y, lambda x, y: x * y,
    _parse_rat, _fmt_rat, _bounded=_rat_bounded,
)

SEMIRINGS = {r.name: r for r in (NAT, S, S9, RAT)}


def get(name: str) -> Semiring:
    try:
        return SEMIRINGS[name]
    except KeyError:
        raise KeyError(f"unknown semiring {name!r}; choose from {sorted(SEMIRINGS)}") from None


# -- tagged elements --------------------------------------------------------

@dataclass(frozen=True)
class SemiringElem:
    ring: Semiring
    value: Any

    def __add__(self, other: "SemiringElem") -> "SemiringElem":
        return add(self, other)

    def __mul__(self, other: "SemiringElem") -> "SemiringElem":
        return mul(self, other)

    def __str__(self):
        return self.ring.fmt(self.value)


def elem(ring, value) -> SemiringElem:
    if isinstance(ring, str):
        ring = get(ring)
    if isinstance(value, str):
        value = ring.parse(value)
    return SemiringElem(ring, value)


def _same(x: SemiringElem, y: SemiringElem) -> Semiring:
    if x.ring is not y.ring:
        raise MixedSemirings(f"{x.ring.name} vs {y.ring.name}")
    return x.ring


def add(x: SemiringElem, y: SemiringElem) -> SemiringElem:
    ring = _same(x, y)
    return SemiringElem(ring, ring.add(x.value, y.value))


def mul(x: SemiringElem, y: SemiringElem) -> SemiringElem:
    ring = _same(x, y)
    return SemiringElem(ring, ring.mul(x.value, y.value))


def _candidates(ring: Semiring, bound: Optional[int]) -> list:
    if ring.finite:
        return list(ring.elements)
    if bound is None:
        raise SearchSpaceTooLarge(f"{ring.name} is infinite; pass a bound")
    return ring.bounded_elements(bound)


def additively_indecomposable(x: SemiringElem, bound: Optional[int] = None) -> bool:
    ring = x.ring
    try:
        pool = ring.below(x.value)
    except SearchSpaceTooLarge:
        pool = _candidates(ring, bound)
    for r in pool:
        for s in pool:
            if ring.add(r, s) == x.value and not ring.is_zero(r) and not ring.is_zero(s):
                return False
    return True


def solve_mul(a: SemiringElem, target: SemiringElem, bound: Optional[int] = None) -> list:
    """All ``r`` (within ``bound`` for infinite semirings) with ``a * r == target``."""
    ring = _same(a, target)
    return [SemiringElem(ring, r) for r in _candidates(ring, bound)
            if ring.mul(a.value, r) == target.value]
