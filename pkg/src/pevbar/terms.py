"""Layered terms: canonical trees whose leaves all sit at the same depth.

A term of level ``n`` is an element of ``T^n X`` for a monad ``T`` presented
by trees.  Level 0 terms are atoms.  A node of level ``n`` has children of
level ``n - 1``; for weighted and action flavors every child carries a
coefficient.  An empty node at level ``k`` stands for the neutral element.

Terms are immutable and always canonical: multiset and weighted children are
sorted by their canonical print string, weighted duplicates are merged and
zero coefficients dropped, list children keep their order.  Equality is
equality of canonical strings (and levels).

Text grammar::

    term  := IDENT | '{' [entry (',' entry)*] '}' | '[' [term (',' term)*] ']'
    entry := term | coeff ':' term
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterator, Optional, Sequence

from .errors import (ConstraintViolation, LevelMismatch, MalformedTerm,
                     SearchSpaceTooLarge, TermSyntaxError)

KINDS = ("mset", "list", "weighted", "action")
IDENT = re.compile(r"^[A-Za-z0-9_*.']+$")


@dataclass(frozen=True, eq=False)
class Flavor:
    """Node kind plus the structural constraints of a term universe.

    ``coeffs`` is a semiring for ``weighted`` and a finite monoid for
    ``action``.  ``arity`` fixes the exact number of children per node,
    ``nonempty`` forbids empty nodes and ``normalized`` demands that weighted
    coefficients at every node sum to one.
    """
    kind: str
    coeffs: Any = None
    nonempty: bool = False
    arity: Optional[int] = None
    normalized: bool = False
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown node kind {self.kind!r}")
        if self.kind in ("weighted", "action") and self.coeffs is None:
            raise ValueError(f"{self.kind} flavor needs a coefficient structure")

    @property
    def weighted(self) -> bool:
        return self.kind in ("weighted", "action")

    @property
    def allows_empty(self) -> bool:
        return not (self.nonempty or self.normalized or (self.arity or 0) > 0)

    def __repr__(self):
        return f"Flavor({self.name or self.kind})"


MSET = Flavor("mset", name="mset")
LIST = Flavor("list", name="list")


class Term:
    """A canonical layered term.  Build with :func:`leaf`, :func:`node` or :func:`parse`."""

    __slots__ = ("level", "flavor", "atom", "children", "key", "size", "_hash")

    def __init__(self, level, flavor, atom, children, key, size):
        self.level = level
        self.flavor = flavor
        self.atom = atom
        self.children = children
        self.key = key
        self.size = size
        self._hash = hash(key)

    @property
    def is_atom(self) -> bool:
        return self.atom is not None

    def subterms(self) -> tuple:
        """Children without coefficients."""
        if self.flavor is not None and self.flavor.weighted:
            return tuple(c for _, c in self.children)
        return self.children

    def entries(self) -> tuple:
        """Children as ``(coefficient, term)`` pairs; coefficient is None when unweighted."""
        if self.flavor is not None and self.flavor.weighted:
            return self.children
        return tuple((None, c) for c in self.children)

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        return self.level == other.level and self.key == other.key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return (self.level, self.key) < (other.level, other.key)

    def __str__(self):
        return self.key

    def __repr__(self):
        return f"Term({self.key!r}, level={self.level})"


@lru_cache(maxsize=None)
def leaf(name: str) -> Term:
    name = str(name)
    if not IDENT.match(name):
        raise MalformedTerm(f"bad atom name {name!r}")
    return Term(0, None, name, (), name, 0)


def _fmt(flavor: Flavor, c) -> str:
    return flavor.coeffs.fmt(c)


def node(flavor: Flavor, children: Sequence, level: Optional[int] = None) -> Term:
    """Build a canonical node.  Weighted flavors take ``(coeff, term)`` pairs."""
    if flavor.weighted:
        pairs = [(c, t) for c, t in children]
        subs = [t for _, t in pairs]
    else:
        subs = list(children)
    child_level = None
    for t in subs:
        if not isinstance(t, Term):
            raise MalformedTerm(f"child {t!r} is not a Term")
        if child_level is None:
            child_level = t.level
        elif t.level != child_level:
            raise MalformedTerm(f"children at mixed levels {sorted({u.level for u in subs})}")
        if t.atom is None and t.flavor is not flavor:
            raise MalformedTerm(f"mixed node kinds: {t.flavor!r} inside {flavor!r}")
    if child_level is not None:
        if level is not None and level != child_level + 1:
            raise MalformedTerm(f"level {level} node with level {child_level} children")
        level = child_level + 1
    elif level is None or level < 1:
        raise MalformedTerm("an empty node needs an explicit level >= 1")

    size = sum(t.size + 1 for t in subs)
    if flavor.kind == "mset":
        kids = tuple(sorted(subs, key=lambda t: t.key))
        key = "{" + ",".join(t.key for t in kids) + "}"
    elif flavor.kind == "list":
        kids = tuple(subs)
        key = "[" + ",".join(t.key for t in kids) + "]"
    elif flavor.kind == "weighted":
        ring = flavor.coeffs
        merged: dict = {}
        for c, t in pairs:
            if t.key in merged:
                merged[t.key] = (ring.add(merged[t.key][0], c), t)
            else:
                merged[t.key] = (c, t)
        kids = tuple(merged[k] for k in sorted(merged) if not ring.is_zero(merged[k][0]))
        size = sum(t.size + 1 for _, t in kids)
        key = "{" + ",".join(f"{_fmt(flavor, c)}:{t.key}" for c, t in kids) + "}"
    else:  # action
        kids = tuple(sorted(pairs, key=lambda p: (p[1].key, _fmt(flavor, p[0]))))
        key = "{" + ",".join(f"{_fmt(flavor, c)}:{t.key}" for c, t in kids) + "}"
    return Term(level, flavor, None, kids, key, size)


def canonicalize(t: Term) -> Term:
    """Rebuild ``t`` bottom-up in canonical form (idempotent)."""
    if t.is_atom:
        return leaf(t.atom)
    if t.flavor is None:
        raise MalformedTerm("node without a flavor")
    if t.flavor.weighted:
        kids = [(c, canonicalize(s)) for c, s in t.children]
    else:
        kids = [canonicalize(s) for s in t.children]
    return node(t.flavor, kids, t.level)


def validate(t: Term, flavor: Flavor) -> None:
    """Raise ConstraintViolation unless every node of ``t`` satisfies ``flavor``."""
    if t.is_atom:
        return
    if t.flavor is not flavor:
        raise MalformedTerm(f"term of flavor {t.flavor!r}, expected {flavor!r}")
    n = len(t.children)
    if flavor.arity is not None and n != flavor.arity:
        raise ConstraintViolation(f"node {t.key} has {n} children, arity is {flavor.arity}")
    if flavor.nonempty and n == 0:
        raise ConstraintViolation(f"empty node in a nonempty flavor: {t.key}")
    if flavor.normalized and flavor.coeffs.sum(c for c, _ in t.children) != flavor.coeffs.one:
        raise ConstraintViolation(f"coefficients of {t.key} do not sum to one")
    if flavor.kind == "action":
        keys = [s.key for _, s in t.children]
        if len(set(keys)) != len(keys):
            raise ConstraintViolation(f"repeated child in action node {t.key}")
    for s in t.subterms():
        validate(s, flavor)


# -- parsing and printing ---------------------------------------------------

_STOP = set("{}[],:") | set(" \t\r\n")


class _Parser:
    def __init__(self, text: str, flavor: Flavor):
        self.text = text
        self.pos = 0
        self.flavor = flavor

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise TermSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def token(self) -> str:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _STOP:
            self.pos += 1
        if self.pos == start:
            found = self.text[start] if start < len(self.text) else "end of input"
            raise TermSyntaxError(f"unexpected {found!r}", start)
        return self.text[start:self.pos]

    def term(self, level: int) -> Term:
        ch = self.peek()
        if ch in ("{", "["):
            if level == 0:
                raise LevelMismatch(f"bracket at position {self.pos} where an atom was expected")
            return self.bracket(level)
        if ch == "":
            raise TermSyntaxError("unexpected end of input", self.pos)
        start = self.pos
        name = self.token()
        if level != 0:
            raise LevelMismatch(f"atom {name!r} at position {start} sits {level} level(s) too high")
        if not IDENT.match(name):
            raise TermSyntaxError(f"bad atom {name!r}", start)
        return leaf(name)

    def bracket(self, level: int) -> Term:
        flavor = self.flavor
        start = self.pos
        opening = self.text[self.pos]
        want = "[" if flavor.kind == "list" else "{"
        if opening != want:
            raise TermSyntaxError(f"{flavor.kind} terms use {want!r}", start)
        closing = "]" if want == "[" else "}"
        self.pos += 1
        kids = []
        if self.peek() != closing:
            while True:
                kids.append(self.entry(level - 1))
                if self.peek() == ",":
                    self.pos += 1
                    continue
                break
        self.expect(closing)
        return node(flavor, kids, level)

    def entry(self, level: int):
        flavor = self.flavor
        save = self.pos
        ch = self.peek()
        coeff = None
        if ch not in ("{", "[", ""):
            tok_start = self.pos
            tok = self.token()
            if self.peek() == ":":
                self.pos += 1
                if not flavor.weighted:
                    raise TermSyntaxError(f"coefficient in a {flavor.kind} term", tok_start)
                try:
                    coeff = flavor.coeffs.parse(tok)
                except TermSyntaxError as exc:
                    raise TermSyntaxError(str(exc).rsplit(" at position", 1)[0], tok_start) from None
            else:
                self.pos = save
        t = self.term(level)
        if flavor.weighted:
            return (flavor.coeffs.one if coeff is None else coeff, t)
        return t


def parse(text: str, flavor: Flavor, level: int) -> Term:
    """Parse ``text`` as a canonical term of ``level`` in ``flavor``.

    >>> str(parse("{{4},{2,2}}", MSET, 2))
    '{{2,2},{4}}'
    """
    p = _Parser(text, flavor)
    t = p.term(level)
    p.skip()
    if p.pos != len(text):
        raise TermSyntaxError(f"trailing input {text[p.pos:]!r}", p.pos)
    validate(t, flavor)
    return t


def to_text(t: Term) -> str:
    return t.key


# -- counting ---------------------------------------------------------------

def leaf_count(t: Term) -> int:
    if t.is_atom:
        return 1
    return sum(leaf_count(s) for s in t.subterms())


def block_count(t: Term) -> int:
    return 0 if t.is_atom else len(t.children)


def count_at_depth(t: Term, depth: int) -> int:
    """Number of nodes (atoms included) at ``depth`` below the root."""
    if depth == 0:
        return 1
    if t.is_atom:
        return 0
    return sum(count_at_depth(s, depth - 1) for s in t.subterms())


def nodes_at_depth(t: Term, depth: int) -> list:
    if depth == 0:
        return [t]
    if t.is_atom:
        return []
    out = []
    for s in t.subterms():
        out.extend(nodes_at_depth(s, depth - 1))
    return out


def leaves(t: Term) -> list:
    """Atom names in canonical order (with multiplicity)."""
    if t.is_atom:
        return [t.atom]
    out = []
    for s in t.subterms():
        out.extend(leaves(s))
    return out


# -- bounded enumeration ----------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    """Caps that make an otherwise infinite term universe finite.

    ``coeff_bound`` bounds semiring coefficients: components for ``S``,
    values for ``nat``, denominators for ``rat``.  ``max_nodes`` caps the
    number of non-root nodes of an enumerated term (None = no cap).
    """
    max_width: int = 6
    carrier_subset: tuple = ("*",)
    coeff_bound: int = 2
    max_candidates: int = 10 ** 9
    max_nodes: Optional[int] = None

    def __post_init__(self):
        if self.max_width < 1 or self.coeff_bound < 1 or self.max_candidates < 1:
            raise ValueError("all caps must be positive")
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if not self.carrier_subset:
            raise ValueError("carrier_subset must be nonempty")
        object.__setattr__(self, "carrier_subset", tuple(str(a) for a in self.carrier_subset))


def _coefficients(flavor: Flavor, bounds: Bounds) -> list:
    if flavor.kind == "action":
        return list(flavor.coeffs.elements)
    ring = flavor.coeffs
    vals = ring.bounded_elements(bounds.coeff_bound)
    vals = [v for v in vals if not ring.is_zero(v)]
    if flavor.normalized:
        vals = [v for v in vals if v <= ring.one]
    return vals


def _width_range(flavor: Flavor, width: int) -> tuple:
    if flavor.arity is not None:
        return flavor.arity, flavor.arity
    low = 1 if (flavor.nonempty or flavor.normalized) else 0
    return low, width


def _combos(flavor: Flavor, pool: list, bounds: Bounds, count_only: bool):
    """Children tuples for one node; yields lists or returns a count."""
    lo, hi = _width_range(flavor, bounds.max_width)
    cap = bounds.max_nodes
    kind = flavor.kind
    n = len(pool)
    sizes = [t.size + 1 for t in pool]
    coeffs = _coefficients(flavor, bounds) if flavor.weighted else [None]
    ring = flavor.coeffs if kind == "weighted" else None
    one = ring.one if flavor.normalized else None

    def fits(budget, i):
        return cap is None or sizes[i] <= budget

    if count_only:
        memo = {}

        def count(start, k, budget, total):
            key = (start, k, budget, total)
            if key in memo:
                return memo[key]
            res = 1 if (k >= lo and (one is None or total == one)) else 0
            if k < hi:
                rng = range(n) if kind == "list" else range(start, n)
                for i in rng:
                    if not fits(budget, i):
                        continue
                    nb = None if cap is None else budget - sizes[i]
                    nxt = i if kind == "mset" else i + 1
                    if kind in ("mset", "list"):
                        res += count(nxt, k + 1, nb, total)
                    else:
                        for c in coeffs:
                            nt = total
                            if one is not None:
                                nt = ring.add(total, c)
                                if nt > one:
                                    continue
                            res += count(nxt, k + 1, nb, nt)
            memo[key] = res
            return res

        zero = ring.zero if one is not None else None
        return count(0, 0, cap, zero)

    def gen(start, chosen, budget, total):
        k = len(chosen)
        if k >= lo and (one is None or total == one):
            yield list(chosen)
        if k == hi:
            return
        rng = range(n) if kind == "list" else range(start, n)
        for i in rng:
            if not fits(budget, i):
                continue
            nb = None if cap is None else budget - sizes[i]
            nxt = i if kind == "mset" else i + 1
            if kind in ("mset", "list"):
                chosen.append(pool[i])
                yield from gen(nxt, chosen, nb, total)
                chosen.pop()
            else:
                for c in coeffs:
                    nt = total
                    if one is not None:
                        nt = ring.add(total, c)
                        if nt > one:
                            continue
                    chosen.append((c, pool[i]))
                    yield from gen(nxt, chosen, nb, nt)
                    chosen.pop()

    zero = ring.zero if one is not None else None
    return gen(0, [], cap, zero)


def _level_pool(flavor: Flavor, level: int, bounds: Bounds) -> list:
    if level == 0:
        return [leaf(a) for a in bounds.carrier_subset]
    below = _level_pool(flavor, level - 1, bounds)
    total = _combos(flavor, below, bounds, True)
    if total > bounds.max_candidates:
        raise SearchSpaceTooLarge(f"{total} level-{level} terms exceed max_candidates={bounds.max_candidates}")
    return [node(flavor, kids, level) for kids in _combos(flavor, below, bounds, False)]


def count_terms(flavor: Flavor, level: int, bounds: Bounds) -> int:
    """Exact number of terms :func:`enumerate_terms` would emit."""
    if level == 0:
        return len(bounds.carrier_subset)
    return _combos(flavor, _level_pool(flavor, level - 1, bounds), bounds, True)


def enumerate_terms(flavor: Flavor, level: int, bounds: Bounds) -> Iterator[Term]:
    """Every canonical term of ``level`` within ``bounds``, without duplicates.

    Raises SearchSpaceTooLarge up front when the count exceeds
    ``bounds.max_candidates``.
    """
    if level == 0:
        yield from (leaf(a) for a in bounds.carrier_subset)
        return
    below = _level_pool(flavor, level - 1, bounds)
    total = _combos(flavor, below, bounds, True)
    if total > bounds.max_candidates:
        raise SearchSpaceTooLarge(f"{total} level-{level} terms exceed max_candidates={bounds.max_candidates}")
    for kids in _combos(flavor, below, bounds, False):
        yield node(flavor, kids, level)
