"""Partial evaluations: witnesses, composition, the induced relation and the
algebra-level conditions that govern it (indiscreteness, strict positivity).

A witness for ``t0 -> t1`` is ``tau`` in ``TTA`` with ``mu(tau) = t0`` and
``(Te)(tau) = t1``; it is a 1-simplex of the bar construction with
``d_1 = t0`` and ``d_0 = t1``.
"""
from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

from .algebras import Algebra
from .bar import face_term
from .errors import IncomposableWitnesses, MarginalMismatch, UnsupportedInstance
from .monads import MonadInstance, eta_at, mu_at
from .reports import Report
from .search import fill, regroup_layer, weighted_root_regroupings
from .terms import Bounds, Term, enumerate_terms, leaf, node


class NoCommonEvaluation(UserWarning):
    """Source and target evaluate differently, so no witness can exist."""


@dataclass(frozen=True)
class Witness:
    tau: Term
    source: Term
    target: Term

    def __str__(self):
        return f"{self.source} -> {self.target} via {self.tau}"


def make_witness(tau: Term, algebra: Algebra) -> Witness:
    return Witness(tau, face_term(algebra, tau, 1), face_term(algebra, tau, 0))


def _same_value(algebra: Algebra, t0: Term, t1: Term) -> bool:
    return algebra.evaluate(t0) == algebra.evaluate(t1)


def pe_witnesses(t0: Term, t1: Term, algebra: Algebra, bounds: Optional[Bounds] = None,
                 limit: Optional[int] = None) -> list:
    """Every witness ``t0 -> t1`` (complete unless the instance needs bounded enumeration)."""
    return _witness_search(t0, t1, algebra, bounds, limit)[0]


def _witness_search(t0, t1, algebra, bounds, limit):
    if not _same_value(algebra, t0, t1):
        warnings.warn(f"{t0} and {t1} evaluate differently", NoCommonEvaluation, stacklevel=3)
        return [], True
    res = fill(algebra, 1, {1: t0, 0: t1}, bounds, limit=limit)
    out = [make_witness(tau, algebra) for tau in res.fillers]
    for w in out:
        assert w.source == t0 and w.target == t1
    return out, res.complete


def compose_witnesses(w01: Witness, w12: Witness, algebra: Algebra,
                      bounds: Optional[Bounds] = None, limit: Optional[int] = None) -> list:
    """All composition strategies ``Theta`` for ``w01`` then ``w12``, with ``tau02 = (T mu)(Theta)``."""
    if w01.target != w12.source:
        raise IncomposableWitnesses(f"target {w01.target} differs from source {w12.source}")
    res = fill(algebra, 2, {2: w01.tau, 0: w12.tau}, bounds, limit=limit)
    out = []
    for theta in res.fillers:
        w02 = make_witness(face_term(algebra, theta, 1), algebra)
        assert w02.source == w01.source and w02.target == w12.target
        out.append((theta, w02))
    return out


# -- the relation ---------------------------------------------------------------------

@dataclass
class PERelation:
    algebra: Algebra
    vertices: list
    edges: dict = field(default_factory=dict)   # (source, target) -> witness term
    complete: bool = True

    def related(self, a: Term, b: Term) -> bool:
        return (a, b) in self.edges

    def is_transitive(self) -> Report:
        report = Report("pe_transitive", level=1)
        succ: dict = {}
        for a, b in self.edges:
            succ.setdefault(a, []).append(b)
        checked = 0
        for a, b in sorted(self.edges):
            for c in sorted(succ.get(b, ())):
                checked += 1
                if (a, c) not in self.edges:
                    report.fail(f"{a} -> {b} -> {c}", self.edges[(a, b)], self.edges[(b, c)],
                                missing=f"{a} -> {c}")
        report.details.update(composable_pairs=checked, vertices=len(self.vertices),
                              edges=len(self.edges), complete=self.complete)
        return report

    def is_symmetric(self) -> Report:
        report = Report("pe_symmetric", level=1)
        for a, b in sorted(self.edges):
            if (b, a) not in self.edges:
                report.fail(f"{a} -> {b}", self.edges[(a, b)], "no reverse witness")
        report.details.update(vertices=len(self.vertices), edges=len(self.edges))
        return report

    def kernel_pair(self) -> set:
        value = {v: self.algebra.evaluate(v) for v in self.vertices}
        return {(a, b) for a in self.vertices for b in self.vertices if value[a] == value[b]}

    def is_equivalence(self) -> Report:
        """Equivalence verdict plus the comparison with the kernel pair of ``e``."""
        report = Report("pe_equivalence", level=1)
        trans, sym = self.is_transitive(), self.is_symmetric()
        report.merge(trans)
        report.merge(sym)
        kp = self.kernel_pair()
        edges = set(self.edges)
        if not edges <= kp:
            report.fail("relation", "edges outside the kernel pair", sorted(map(str, edges - kp))[:4])
        reflexive = all((v, v) in edges for v in self.vertices)
        report.details.update(transitive=trans.passed, symmetric=sym.passed, reflexive=reflexive,
                              equals_kernel_pair=(edges == kp), complete=self.complete)
        if not reflexive:
            report.fail("relation", "not reflexive", "")
        return report


def pe_relation(algebra: Algebra, bounds: Bounds) -> PERelation:
    """The partial-evaluation relation on bounded ``TA`` with one witness per edge.

    Targets of edges out of a vertex ``t0`` are found by regrouping ``t0``
    into at most ``bounds.max_width`` groups, which reaches every bounded
    target; weighted instances use the pairwise searches instead.
    """
    vertices = sorted(algebra.terms(1, bounds))
    vset = set(vertices)
    rel = PERelation(algebra, vertices)
    flavor = algebra.monad.flavor
    if flavor.kind != "weighted":
        for t0 in vertices:
            for tau in regroup_layer(t0, 0, flavor, max_groups=bounds.max_width):
                t1 = face_term(algebra, tau, 0)
                if t1 in vset and (t0, t1) not in rel.edges:
                    rel.edges[(t0, t1)] = tau
        return rel
    for t0, t1 in itertools.product(vertices, repeat=2):
        if not _same_value(algebra, t0, t1):
            continue
        found, complete = _witness_search(t0, t1, algebra, bounds, 1)
        rel.complete &= complete
        if found:
            rel.edges[(t0, t1)] = found[0].tau
    return rel


# -- indiscreteness ---------------------------------------------------------------------

def check_indiscrete(algebra: Algebra, bounds: Bounds) -> Report:
    """Does every pair with equal evaluation admit a witness?  Lifts are counted up to two."""
    report = Report("indiscrete", level=1)
    vertices = sorted(algebra.terms(1, bounds))
    pairs = lifts_unique = 0
    complete = True
    for t0, t1 in itertools.product(vertices, repeat=2):
        if not _same_value(algebra, t0, t1):
            continue
        pairs += 1
        found, ok = _witness_search(t0, t1, algebra, bounds, 2)
        complete &= ok
        if not found:
            report.fail(f"({t0}, {t1})", "no witness", "", missing=f"{t0} -> {t1}")
        elif len(found) == 1:
            lifts_unique += 1
    report.details.update(algebra=algebra.name, pairs=pairs, unique_lifts=(lifts_unique == pairs),
                          pairs_with_unique_lift=lifts_unique, complete=complete)
    return report


# -- strict positivity ------------------------------------------------------------------

def _positivity_counterexamples(monad: MonadInstance, atoms: tuple, bounds: Bounds) -> tuple:
    """Elements ``pi`` of ``TTX`` with ``mu(pi) = eta(x)`` but ``pi != eta eta(x)``."""
    flavor = monad.flavor
    found, complete = [], True
    for x in atoms:
        ex = eta_at(leaf(x), 0, monad)
        eex = eta_at(ex, 0, monad)
        if flavor.kind != "weighted":
            cands = regroup_layer(ex, 0, flavor, max_groups=bounds.max_width)
            complete &= not flavor.allows_empty
        elif flavor.coeffs.finite or flavor.coeffs.name == "nat":
            cands = weighted_root_regroupings(ex, flavor, (), None, bounds.max_candidates)
        else:
            b = Bounds(max_width=bounds.max_width, carrier_subset=atoms, coeff_bound=bounds.coeff_bound,
                       max_candidates=bounds.max_candidates, max_nodes=bounds.max_nodes)
            cands = (p for p in enumerate_terms(flavor, 2, b) if mu_at(p, 0) == ex)
            complete = False
        for pi in cands:
            if pi != eex:
                found.append(pi)
    return found, complete


def check_strict_positivity(monad: MonadInstance, bounds: Bounds) -> Report:
    """Search ``TT1`` (and, unless a cartesian reduction applies, ``TT{x, y}``)."""
    report = Report("strict_positivity", level=2)
    one, complete = _positivity_counterexamples(monad, ("x",), bounds)
    for pi in one:
        report.fail(pi, mu_at(pi, 0), "eta eta(x) expected", carrier="{x}")
    if monad.cartesian or monad.cartesian_unit:
        reduction = "cartesian" if monad.cartesian else "cartesian unit"
        report.details["reduction"] = f"{reduction}: X = 1 suffices"
    else:
        report.details["reduction"] = "none: also sampled X = {x, y}"
        two, ok = _positivity_counterexamples(monad, ("x", "y"), bounds)
        complete &= ok
        for pi in two:
            report.fail(pi, mu_at(pi, 0), "eta eta expected", carrier="{x,y}")
    report.details.update(monad=monad.id, complete=complete)
    return report


# -- conditional product ------------------------------------------------------------------

def _as_dist(p) -> dict:
    if isinstance(p, Term):
        return {s.atom: Fraction(c) for c, s in p.children}
    return {str(k): Fraction(v) for k, v in p.items() if Fraction(v) != 0}


def pushforward(p: Mapping, m: Mapping) -> dict:
    out: dict = {}
    for b, w in p.items():
        out[m[b]] = out.get(m[b], Fraction(0)) + w
    return {k: v for k, v in out.items() if v}


def conditional_product(p, q, m: Mapping, n: Mapping) -> dict:
    """``s(b, c) = p(b) q(c) / r(e)`` on the pullback ``B x_E C``.

    ``p`` and ``q`` are level-1 distribution terms or ``{atom: weight}``
    mappings; the result maps pairs ``(b, c)`` to exact fractions.
    """
    p, q = _as_dist(p), _as_dist(q)
    r = pushforward(p, m)
    if r != pushforward(q, n):
        raise MarginalMismatch(f"pushforwards differ: {r} vs {pushforward(q, n)}")
    return {(b, c): p[b] * q[c] / r[m[b]]
            for b in sorted(p) for c in sorted(q) if m[b] == n[c]}


def marginals(s: Mapping) -> tuple:
    left: dict = {}
    right: dict = {}
    for (b, c), w in s.items():
        left[b] = left.get(b, Fraction(0)) + w
        right[c] = right.get(c, Fraction(0)) + w
    return left, right


# -- internality ---------------------------------------------------------------------------

def combine_terms(t: Term, u: Term) -> Term:
    """The monoid/semimodule sum of two terms of equal level (union, concatenation, addition)."""
    flavor = t.flavor or u.flavor
    if flavor is None or flavor.kind == "action" or flavor.arity is not None or flavor.normalized:
        raise UnsupportedInstance("no term-level sum for this monad")
    return node(flavor, list(t.children) + list(u.children), t.level)


def check_internality_sample(algebra: Algebra, bounds: Bounds, samples: int = 200,
                             seed: int = 0) -> Report:
    """Witnesses add: ``t0 -> t1`` and ``u0 -> u1`` give ``t0 + u0 -> t1 + u1``."""
    flavor = algebra.monad.flavor
    if flavor.kind == "action" or flavor.arity is not None or flavor.normalized:
        raise UnsupportedInstance(f"internality sample needs a sum on terms of {algebra.monad.id}")
    report = Report("internality", level=1)
    rel = pe_relation(algebra, bounds)
    edges = sorted(rel.edges.items())
    rng = random.Random(seed)
    pairs = list(itertools.product(range(len(edges)), repeat=2))
    if len(pairs) > samples:
        pairs = sorted(rng.sample(pairs, samples))
    for i, j in pairs:
        (t0, t1), tau = edges[i]
        (u0, u1), sig = edges[j]
        combined = combine_terms(tau, sig)
        src, tgt = combine_terms(t0, u0), combine_terms(t1, u1)
        w = make_witness(combined, algebra)
        if (w.source, w.target) != (src, tgt):
            report.fail(combined, f"{w.source} -> {w.target}", f"{src} -> {tgt}")
    report.details.update(algebra=algebra.name, edge_pairs=len(pairs), edges=len(edges))
    return report


# -- positive + indiscrete ----------------------------------------------------------------

def check_positive_indiscrete_consequence(algebra: Algebra, bounds: Bounds) -> Report:
    """If the monad is strictly positive and the algebra indiscrete, ``e`` is a bijection."""
    report = Report("positive_indiscrete", level=1)
    pos = check_strict_positivity(algebra.monad, bounds)
    ind = check_indiscrete(algebra, bounds)
    report.details.update(strictly_positive=pos.passed, indiscrete=ind.passed)
    if not (pos.passed and ind.passed):
        report.status = "vacuous"
        return report
    values: dict = {}
    for t in algebra.terms(1, bounds):
        values.setdefault(algebra.evaluate(t), []).append(t)
    for a, ts in sorted(values.items()):
        if len(ts) > 1:
            report.fail(a, ts[0], ts[1], reason="e not injective")
    for a in algebra.elements(bounds):
        if a not in values:
            report.fail(a, "no preimage", "", reason="e not surjective")
    rel = pe_relation(algebra, bounds)
    for (s, t), tau in sorted(rel.edges.items()):
        if s != t:
            report.fail(tau, s, t, reason="non-identity partial evaluation")
    report.details.update(edges=len(rel.edges), vertices=len(rel.vertices))
    return report
