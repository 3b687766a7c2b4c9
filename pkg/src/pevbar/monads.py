"""Finitary monads acting on layered terms.

Every monad here is a :class:`~pevbar.terms.Flavor` (node kind and
constraints) plus a name.  The structure maps act on trees:

* ``map_leaves``  -- ``T^n f``, relabel the leaves;
* ``mu_at(t, k)`` -- ``T^k mu``, delete the nodes at depth ``k + 1`` and hang
  their children on the parents (coefficients multiply along the way);
* ``eta_at(t, k)`` -- ``T^k eta``, put a singleton node above every node at
  depth ``k``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Optional, Union

from . import semirings
from .errors import ConfigError, IndexOutOfRange, MalformedTerm, TermSyntaxError
from .reports import Report
from .terms import Bounds, Flavor, Term, enumerate_terms, leaf, node, validate


# -- finite monoids ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    """A monoid given by its multiplication table, validated on construction."""
    name: str
    elements: tuple
    unit: str
    table: Mapping

    def __post_init__(self):
        els = self.elements
        if self.unit not in els:
            raise ConfigError(f"unit {self.unit!r} is not an element")
        for a, b in itertools.product(els, repeat=2):
            if self.table.get((a, b)) not in els:
                raise ConfigError(f"{self.name}: product {a}*{b} missing or outside the carrier")
        for a in els:
            if self.mul(a, self.unit) != a or self.mul(self.unit, a) != a:
                raise ConfigError(f"{self.name}: {self.unit} is not a two-sided unit at {a}")
        for a, b, c in itertools.product(els, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ConfigError(f"{self.name}: not associative at ({a},{b},{c})")

    @property
    def one(self) -> str:
        return self.unit

    def mul(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def parse(self, text: str) -> str:
        text = text.strip()
        if text not in self.elements:
            raise TermSyntaxError(f"{text!r} is not an element of {self.name}", 0)
        return text

    def fmt(self, a: str) -> str:
        return a

    def inverse(self, a: str) -> Optional[str]:
        for b in self.elements:
            if self.mul(a, b) == self.unit and self.mul(b, a) == self.unit:
                return b
        return None

    @property
    def is_group(self) -> bool:
        return all(self.inverse(a) is not None for a in self.elements)

    def __repr__(self):
        return f"FiniteMonoid({self.name})"


def monoid_from_json(doc: Union[str, dict], name: str = "M") -> FiniteMonoid:
    """Load ``{"elements": [...], "unit": "e", "mul": {"a,b": "c", ...}}``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        els = tuple(str(x) for x in doc["elements"])
        unit = str(doc["unit"])
        table = {}
        for k, v in doc["mul"].items():
            a, b = (s.strip() for s in k.split(","))
            table[(a, b)] = str(v)
    except (KeyError, ValueError, AttributeError) as exc:
        raise ConfigError(f"bad monoid table: {exc}") from None
    return FiniteMonoid(doc.get("name", name), els, unit, table)


@lru_cache(maxsize=None)
def cyclic_group(k: int) -> FiniteMonoid:
    els = tuple(str(i) for i in range(k))
    table = {(str(a), str(b)): str((a + b) % k) for a in range(k) for b in range(k)}
    return FiniteMonoid(f"Z{k}", els, "0", table)


@lru_cache(maxsize=None)
def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid("trivial", ("e",), "e", {("e", "e"): "e"})


@lru_cache(maxsize=None)
def boolean_monoid() -> FiniteMonoid:
    """({0, 1}, min, 1): its unit has no nontrivial factorization."""
    table = {(a, b): str(min(int(a), int(b))) for a in "01" for b in "01"}
    return FiniteMonoid("bool_and", ("0", "1"), "1", table)


# -- monad instances ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonadInstance:
    """A monad presented by layered terms of one flavor.

    ``cartesian`` records that mu and eta are cartesian; ``cartesian_unit``
    that eta alone is.  Both are used only to pick the cheaper positivity test.
    """
    id: str
    flavor: Flavor
    cartesian: bool = False
    cartesian_unit: bool = False

    def __repr__(self):
        return f"MonadInstance({self.id})"

    def validate(self, t: Term) -> None:
        validate(t, self.flavor)

    def parse(self, text: str, level: int) -> Term:
        from .terms import parse
        return parse(text, self.flavor, level)

    def wrap(self, t: Term):
        """A child entry for ``t`` with unit coefficient."""
        return (self.flavor.coeffs.one, t) if self.flavor.weighted else t

    def unit(self, t: Term) -> Term:
        return node(self.flavor, [self.wrap(t)], t.level + 1)

    def terms(self, level: int, bounds: Bounds):
        return enumerate_terms(self.flavor, level, bounds)


IDENTITY = MonadInstance("identity", Flavor("list", arity=1, name="identity"),
                         cartesian=True, cartesian_unit=True)
COMMUTATIVE_MONOID = MonadInstance("commutative_monoid", Flavor("mset", name="cmon"),
                                   cartesian_unit=True)
MONOID = MonadInstance("monoid", Flavor("list", name="monoid"), cartesian=True, cartesian_unit=True)
SEMIGROUP = MonadInstance("semigroup", Flavor("list", nonempty=True, name="semigroup"),
                          cartesian=True, cartesian_unit=True)
COMMUTATIVE_SEMIGROUP = MonadInstance(
    "commutative_semigroup", Flavor("mset", nonempty=True, name="csemigroup"), cartesian_unit=True)
DISTRIBUTION = MonadInstance(
    "distribution", Flavor("weighted", semirings.RAT, normalized=True, name="dist"))


@lru_cache(maxsize=None)
def m_set(monoid: FiniteMonoid) -> MonadInstance:
    flavor = Flavor("action", monoid, arity=1, name=f"mset_{monoid.name}")
    return MonadInstance(f"m_set({monoid.name})", flavor, cartesian=True, cartesian_unit=True)


@lru_cache(maxsize=None)
def semimodule(ring_name: str) -> MonadInstance:
    ring = semirings.get(ring_name)
    return MonadInstance(f"semimodule({ring.name})",
                         Flavor("weighted", ring, name=f"semimodule_{ring.name}"))


ALIASES = {
    "identity": lambda: IDENTITY, "id": lambda: IDENTITY,
    "commutative_monoid": lambda: COMMUTATIVE_MONOID, "cmon": lambda: COMMUTATIVE_MONOID,
    "monoid": lambda: MONOID, "mon": lambda: MONOID,
    "semigroup": lambda: SEMIGROUP, "sgrp": lambda: SEMIGROUP,
    "commutative_semigroup": lambda: COMMUTATIVE_SEMIGROUP, "csemigroup": lambda: COMMUTATIVE_SEMIGROUP,
    "distribution": lambda: DISTRIBUTION, "dist": lambda: DISTRIBUTION,
}


def get_monad(ident: str, semiring: str = "S9") -> MonadInstance:
    """Resolve a CLI monad name: aliases above, ``semimodule[:ring]``, ``mset:<Zk|file>``."""
    if ident in ALIASES:
        return ALIASES[ident]()
    if ident == "semimodule" or ident.startswith("semimodule:"):
        ring = ident.split(":", 1)[1] if ":" in ident else semiring
        return semimodule(ring)
    if ident.startswith("m_set:") or ident.startswith("mset:"):
        arg = ident.split(":", 1)[1]
        return m_set(load_monoid(arg))
    raise ConfigError(f"unknown monad {ident!r}")


def load_monoid(arg: str) -> FiniteMonoid:
    if arg == "trivial":
        return trivial_monoid()
    if arg == "bool":
        return boolean_monoid()
    if arg.startswith("Z") and arg[1:].isdigit():
        return cyclic_group(int(arg[1:]))
    try:
        with open(arg) as fh:
            return monoid_from_json(fh.read(), name=arg)
    except OSError as exc:
        raise ConfigError(f"cannot read monoid table {arg!r}: {exc}") from None


BUNDLED = (IDENTITY, COMMUTATIVE_MONOID, MONOID, SEMIGROUP, COMMUTATIVE_SEMIGROUP, DISTRIBUTION)


def bundled_instances() -> list:
    return list(BUNDLED) + [m_set(cyclic_group(2)), m_set(trivial_monoid()),
                            semimodule("S9"), semimodule("nat")]


# -- structure maps ------------------------------------------------------------

LeafMap = Union[Callable[[str], Union[str, Term]], Mapping]


def map_leaves(t: Term, f: LeafMap) -> Term:
    """Apply ``f`` to every leaf label (``T^n f``); the result is canonical."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    return _map(t, fn)


def _map(t: Term, fn) -> Term:
    if t.is_atom:
        out = fn(t.atom)
        if isinstance(out, Term):
            if not out.is_atom:
                raise MalformedTerm("leaf map must return atoms")
            return out
        return leaf(out)
    if t.flavor.weighted:
        kids = [(c, _map(s, fn)) for c, s in t.children]
    else:
        kids = [_map(s, fn) for s in t.children]
    return node(t.flavor, kids, t.level)


def _flatten(t: Term) -> Term:
    flavor = t.flavor
    if flavor.weighted:
        mul = flavor.coeffs.mul
        kids = [(mul(c, d), g) for c, s in t.children for d, g in s.children]
    else:
        kids = [g for s in t.children for g in s.children]
    return node(flavor, kids, t.level - 1)


def mu_at(t: Term, k: int) -> Term:
    """``T^k mu``: remove the nodes at depth ``k + 1``."""
    if t.is_atom or not 0 <= k <= t.level - 2:
        raise IndexOutOfRange(f"mu_at depth {k} on a level-{t.level} term")
    return _mu(t, k)


def _mu(t: Term, k: int) -> Term:
    if k == 0:
        return _flatten(t)
    if t.flavor.weighted:
        kids = [(c, _mu(s, k - 1)) for c, s in t.children]
    else:
        kids = [_mu(s, k - 1) for s in t.children]
    return node(t.flavor, kids, t.level - 1)


def eta_at(t: Term, k: int, monad: Optional[MonadInstance] = None) -> Term:
    """``T^k eta``: insert a singleton node above each node at depth ``k``.

    ``monad`` is needed only when ``t`` is an atom.
    """
    if not 0 <= k <= t.level:
        raise IndexOutOfRange(f"eta_at depth {k} on a level-{t.level} term")
    flavor = monad.flavor if monad is not None else _flavor_of(t)
    return _eta(t, k, flavor)


def _flavor_of(t: Term) -> Flavor:
    if t.is_atom:
        raise MalformedTerm("eta_at on an atom needs the monad")
    return t.flavor


_ETA_CACHE: dict = {}
_ETA_CACHE_MAX = 1 << 18


def _eta(t: Term, k: int, flavor: Flavor) -> Term:
    memo = (t, k, flavor)
    hit = _ETA_CACHE.get(memo)
    if hit is None:
        if len(_ETA_CACHE) >= _ETA_CACHE_MAX:
            _ETA_CACHE.clear()
        hit = _ETA_CACHE[memo] = _eta_build(t, k, flavor)
    return hit


def _eta_build(t: Term, k: int, flavor: Flavor) -> Term:
    if k == 0:
        entry = (flavor.coeffs.one, t) if flavor.weighted else t
        return node(flavor, [entry], t.level + 1)
    if flavor.weighted:
        kids = [(c, _eta(s, k - 1, flavor)) for c, s in t.children]
    else:
        kids = [_eta(s, k - 1, flavor) for s in t.children]
    return node(flavor, kids, t.level + 1)


# -- law checking --------------------------------------------------------------

def check_monad_laws(monad: MonadInstance, bounds: Bounds, max_level: int = 3,
                     level_bounds: Optional[Mapping[int, Bounds]] = None) -> Report:
    """Unit and associativity laws on every enumerated term of level <= max_level.

    ``level_bounds`` may override ``bounds`` per level (deep levels usually
    need a ``max_nodes`` cap).
    """
    report = Report("monad_laws", level=max_level)
    report.details["monad"] = monad.id
    checked = 0
    for lvl in range(1, max_level + 1):
        b = (level_bounds or {}).get(lvl, bounds)
        for t in monad.terms(lvl, b):
            checked += 1
            for k in range(lvl + 1):
                s = eta_at(t, k, monad)
                if k <= lvl - 1:
                    lhs = mu_at(s, k)
                    if lhs != t:
                        report.fail(t, lhs, t, law=f"unit (remove old layer) k={k}")
                if k >= 1:
                    lhs = mu_at(s, k - 1)
                    if lhs != t:
                        report.fail(t, lhs, t, law=f"unit (remove wrapper) k={k}")
            for k in range(lvl - 2):
                lhs = mu_at(mu_at(t, k + 1), k)
                rhs = mu_at(mu_at(t, k), k)
                if lhs != rhs:
                    report.fail(t, lhs, rhs, law=f"associativity k={k}")
                else:
                    monad.validate(lhs)
    report.details["terms_checked"] = checked
    return report
