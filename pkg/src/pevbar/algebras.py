"""Algebras ``(A, e)`` for the bundled monads.

An algebra knows how to evaluate a level-1 term over its carrier.  Free
algebras ``(TX, mu)`` are represented one level up: an element of ``TX`` is a
level-1 term over ``X`` and a level-``n`` term over ``TX`` is stored as a
level-``n + 1`` term over ``X``.  The attribute ``offset`` records this shift.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional

from .errors import CarrierMismatch, ConfigError, UnsupportedInstance
from .monads import (COMMUTATIVE_MONOID, DISTRIBUTION, FiniteMonoid, MonadInstance,
                     eta_at, load_monoid, m_set, mu_at)
from .reports import Report
from .terms import Bounds, Term, enumerate_terms, leaf, node

NAT_CAP = 32


@dataclass(frozen=True, eq=False)
class Algebra:
    name: str
    monad: MonadInstance
    carrier: tuple
    rule: Optional[Callable[[Term], str]] = None   # level-1 term -> atom name
    member: Optional[Callable[[str], bool]] = None
    offset: int = 0

    def __repr__(self):
        return f"Algebra({self.name} over {self.monad.id})"

    @property
    def is_free(self) -> bool:
        return self.offset == 1

    def contains(self, atom: str) -> bool:
        if self.member is not None:
            return self.member(atom)
        return atom in self.carrier

    def evaluate(self, t: Term) -> Term:
        """``e`` on one element of ``TA`` (a level ``1 + offset`` term)."""
        if t.level != 1 + self.offset:
            raise CarrierMismatch(f"{self.name}: expected a level-{1 + self.offset} term, got level {t.level}")
        if self.is_free:
            return mu_at(t, 0)
        for _, s in t.entries():
            if not self.contains(s.atom):
                raise CarrierMismatch(f"{s.atom!r} is not in the carrier of {self.name}")
        return leaf(self.rule(t))

    def evaluate_at(self, t: Term) -> Term:
        """``T^n e`` on a level ``n + 1 + offset`` term."""
        n = t.level - 1 - self.offset
        if n < 0:
            raise CarrierMismatch(f"{self.name}: level-{t.level} term is below TA")
        if self.is_free:
            return mu_at(t, n)
        return self._eval_depth(t, n)

    def _eval_depth(self, t: Term, n: int) -> Term:
        if n == 0:
            return self.evaluate(t)
        if t.flavor.weighted:
            kids = [(c, self._eval_depth(s, n - 1)) for c, s in t.children]
        else:
            kids = [self._eval_depth(s, n - 1) for s in t.children]
        return node(t.flavor, kids, t.level - 1)

    def check_bounds(self, bounds: Bounds) -> None:
        for a in bounds.carrier_subset:
            if self.is_free:
                leaf(a)
            elif not self.contains(a):
                raise CarrierMismatch(f"{a!r} is not in the carrier of {self.name}")

    def elements(self, bounds: Bounds) -> Iterator[Term]:
        """Bounded elements of ``A`` (atoms, or level-1 terms when free)."""
        self.check_bounds(bounds)
        return enumerate_terms(self.monad.flavor, self.offset, bounds)

    def terms(self, level: int, bounds: Bounds) -> Iterator[Term]:
        """Bounded elements of ``T^level A``."""
        self.check_bounds(bounds)
        return enumerate_terms(self.monad.flavor, level + self.offset, bounds)

    def bounds(self, **overrides) -> Bounds:
        """Default bounds whose carrier is this algebra's carrier."""
        overrides.setdefault("carrier_subset", self.carrier)
        return Bounds(**overrides)


# -- constructors ----------------------------------------------------------------

def _reject(monad: MonadInstance, what: str, kinds=("mset", "list")):
    if monad.flavor.kind not in kinds or monad.flavor.normalized:
        raise UnsupportedInstance(f"{what} is not an algebra of {monad.id}")


def _int_sum(t: Term) -> int:
    total = 0
    for c, s in t.entries():
        if not s.atom.isdigit():
            raise CarrierMismatch(f"{s.atom!r} is not a natural number")
        total += int(s.atom) * (1 if c is None else c)
    return total


def naturals_add(monad: MonadInstance = COMMUTATIVE_MONOID, cap: int = NAT_CAP) -> Algebra:
    """(N, +).  ``cap`` only limits the default enumeration carrier."""
    kinds = ("mset", "list", "weighted")
    _reject(monad, "(N, +)", kinds)
    if monad.flavor.kind == "weighted" and monad.flavor.coeffs.name != "nat":
        raise UnsupportedInstance(f"(N, +) is not an algebra of {monad.id}")
    return Algebra("nat", monad, tuple(str(i) for i in range(cap + 1)),
                   lambda t: str(_int_sum(t)), lambda a: a.isdigit())


def cyclic(k: int, monad: MonadInstance = COMMUTATIVE_MONOID) -> Algebra:
    if k < 1:
        raise ConfigError("cyclic order must be positive")
    _reject(monad, f"Z/{k}", ("mset", "list", "weighted"))
    if monad.flavor.kind == "weighted" and monad.flavor.coeffs.name != "nat":
        raise UnsupportedInstance(f"Z/{k} is not an algebra of {monad.id}")
    carrier = tuple(str(i) for i in range(k))
    return Algebra(f"cyclic{k}", monad, carrier, lambda t: str(_int_sum(t) % k))


def terminal(monad: MonadInstance) -> Algebra:
    return Algebra("terminal", monad, ("*",), lambda t: "*")


def free(monad: MonadInstance, carrier: tuple = ("*",)) -> Algebra:
    """``(TX, mu)``; ``carrier`` lists the generators ``X``."""
    carrier = tuple(str(a) for a in carrier)
    return Algebra("free", monad, carrier, None, lambda a: True, offset=1)


def monoid_action(monoid: FiniteMonoid) -> Algebra:
    """``M`` acting on itself by left multiplication."""
    monad = m_set(monoid)

    def act(t: Term) -> str:
        (g, s), = t.children
        return monoid.mul(g, s.atom)

    return Algebra(f"self_action({monoid.name})", monad, monoid.elements, act)


def g_set(group: FiniteMonoid) -> Algebra:
    if not group.is_group:
        raise ConfigError(f"{group.name} is not a group")
    return replace(monoid_action(group), name=f"gset({group.name})")


def semilattice(monad: MonadInstance = DISTRIBUTION, carrier: tuple = ("a", "b")) -> Algebra:
    """A chain ``carrier[0] < carrier[1] < ...`` evaluated by the join of the support.

    Positive weights never cancel, so this is an algebra of the distribution
    and of the (commutative) monoid monads; the empty term goes to the bottom.
    """
    if monad.flavor.kind == "action":
        raise UnsupportedInstance(f"join is not an algebra of {monad.id}")
    if monad.flavor.kind == "weighted" and not monad.flavor.normalized:
        raise UnsupportedInstance("join is only bundled for the distribution monad")
    order = {a: i for i, a in enumerate(carrier)}

    def join(t: Term) -> str:
        atoms = [s.atom for _, s in t.entries()]
        return max(atoms, key=order.__getitem__) if atoms else carrier[0]

    return Algebra("join", monad, tuple(carrier), join)


def get_algebra(ident: str, monad: MonadInstance) -> Algebra:
    """Resolve ``nat | cyclic:k | terminal | free | join | gset:<Zk|file>``."""
    if ident == "nat":
        return naturals_add(monad)
    if ident.startswith("cyclic:"):
        return cyclic(int(ident.split(":", 1)[1]), monad)
    if ident == "terminal":
        return terminal(monad)
    if ident == "free":
        return free(monad)
    if ident == "join":
        return semilattice(monad)
    if ident.startswith("gset:") or ident.startswith("action:"):
        group = load_monoid(ident.split(":", 1)[1])
        alg = g_set(group) if ident.startswith("gset:") else monoid_action(group)
        if monad.flavor is not alg.monad.flavor:
            raise ConfigError(f"{ident} needs --monad m_set:{group.name}")
        return alg
    raise ConfigError(f"unknown algebra {ident!r}")


# -- laws --------------------------------------------------------------------------

def check_algebra_laws(algebra: Algebra, bounds: Bounds) -> Report:
    """``e . eta = id`` on bounded elements and ``e . Te = e . mu`` on bounded ``TTA``."""
    report = Report("algebra_laws", level=2)
    report.details.update(algebra=algebra.name, monad=algebra.monad.id)
    flavor = algebra.monad.flavor
    units = 0
    for a in algebra.elements(bounds):
        units += 1
        lhs = algebra.evaluate(eta_at(a, 0, algebra.monad))
        if lhs != a:
            report.fail(a, lhs, a, law="unit")
    assoc = 0
    for tau in algebra.terms(2, bounds):
        assoc += 1
        lhs = algebra.evaluate(algebra.evaluate_at(tau))
        rhs = algebra.evaluate(mu_at(tau, 0))
        if lhs != rhs:
            report.fail(tau, lhs, rhs, law="multiplicativity")
    report.details.update(unit_cases=units, multiplicativity_cases=assoc, flavor=flavor.name)
    return report
