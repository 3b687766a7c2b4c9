"""The bar construction ``Bar(T, A)`` with ``X_n = T^{n+1} A``.

Faces: ``d_0 = T^n e`` and ``d_i = T^{n-i} mu`` for ``1 <= i <= n``.
Degeneracies: ``s_i = T^{n-i+1} eta`` for ``0 <= i <= n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebras import Algebra
from .errors import IndexOutOfRange, InvalidHorn, LevelMismatch
from .monads import eta_at, mu_at
from .reports import Report
from .terms import Bounds, Term


@dataclass(frozen=True)
class Simplex:
    algebra: Algebra
    n: int
    term: Term

    def __post_init__(self):
        if self.n < 0:
            raise IndexOutOfRange("simplices have dimension >= 0")
        want = self.n + 1 + self.algebra.offset
        if self.term.level != want:
            raise LevelMismatch(f"a {self.n}-simplex needs a level-{want} term, got level {self.term.level}")

    def __str__(self):
        return str(self.term)

    def __eq__(self, other):
        if not isinstance(other, Simplex):
            return NotImplemented
        return self.algebra is other.algebra and self.n == other.n and self.term == other.term

    def __hash__(self):
        return hash((self.n, self.term))


def simplex_level(algebra: Algebra, t: Term) -> int:
    """Dimension of the simplex carried by ``t``."""
    return t.level - 1 - algebra.offset


def face_term(algebra: Algebra, t: Term, i: int) -> Term:
    n = simplex_level(algebra, t)
    if n < 1 or not 0 <= i <= n:
        raise IndexOutOfRange(f"face d_{i} on a {n}-simplex")
    if i == 0:
        return algebra.evaluate_at(t)
    return mu_at(t, n - i)


def degeneracy_term(algebra: Algebra, t: Term, i: int) -> Term:
    n = simplex_level(algebra, t)
    if n < 0 or not 0 <= i <= n:
        raise IndexOutOfRange(f"degeneracy s_{i} on a {n}-simplex")
    return eta_at(t, n - i + 1, algebra.monad)


def face(s: Simplex, i: int) -> Simplex:
    return Simplex(s.algebra, s.n - 1, face_term(s.algebra, s.term, i))


def degeneracy(s: Simplex, i: int) -> Simplex:
    return Simplex(s.algebra, s.n + 1, degeneracy_term(s.algebra, s.term, i))


def simplices(algebra: Algebra, n: int, bounds: Bounds):
    """Bounded ``X_n`` as a stream of terms."""
    return algebra.terms(n + 1, bounds)


def check_simplicial_identities(algebra: Algebra, max_level: int, bounds: Bounds,
                                level_bounds: Optional[dict] = None) -> Report:
    """All face/degeneracy identities on every bounded simplex of dimension <= max_level."""
    report = Report("simplicial_identities", level=max_level)
    report.details.update(algebra=algebra.name, monad=algebra.monad.id)
    d = lambda t, i: face_term(algebra, t, i)
    s = lambda t, i: degeneracy_term(algebra, t, i)
    counts = {}
    for n in range(max_level + 1):
        b = (level_bounds or {}).get(n, bounds)
        count = 0
        for t in simplices(algebra, n, b):
            count += 1
            for i in range(n + 1):
                for j in range(i, n + 1):
                    lhs, rhs = s(s(t, j), i), s(s(t, i), j + 1)
                    if lhs != rhs:
                        report.fail(t, lhs, rhs, identity=f"s{i}s{j}=s{j + 1}s{i}", n=n)
            if n >= 2:
                for j in range(1, n + 1):
                    for i in range(j):
                        lhs, rhs = d(d(t, j), i), d(d(t, i), j - 1)
                        if lhs != rhs:
                            report.fail(t, lhs, rhs, identity=f"d{i}d{j}=d{j - 1}d{i}", n=n)
            # mixed identities on s_j(t), an (n+1)-simplex
            for j in range(n + 1):
                u = s(t, j)
                for i in range(n + 2):
                    lhs = d(u, i)
                    if i < j:
                        rhs = s(d(t, i), j - 1)
                    elif i in (j, j + 1):
                        rhs = t
                    else:
                        rhs = s(d(t, i - 1), j)
                    if lhs != rhs:
                        report.fail(t, lhs, rhs, identity=f"d{i}s{j}", n=n)
        counts[n] = count
    report.details["simplices_checked"] = counts
    return report


def segal_check(algebra: Algebra, n: int, bounds: Bounds, spines=None) -> Report:
    """Is ``X_n -> X_1 x_{X_0} ... x_{X_0} X_1`` a bijection?

    Only ``n = 2`` is implemented.  Spines ``(t01, t12)`` are enumerated by
    taking every bounded ``t01`` and every regrouping of ``d_0 t01`` (so each
    spine whose first edge is bounded is reached); lifts are counted with the
    complete filler search, capped at two.  An explicit iterable of
    ``(t01, t12)`` pairs may be passed as ``spines`` instead.
    """
    from .search import fill, regroup_layer
    if n != 2:
        raise IndexOutOfRange("segal_check is implemented for n = 2")
    report = Report("segal", level=n)
    report.details.update(algebra=algebra.name, monad=algebra.monad.id)
    injective = surjective = True
    spines_seen = 0
    inj_examples, sur_examples = [], []

    def enumerated():
        for t01 in simplices(algebra, 1, bounds):
            mid = face_term(algebra, t01, 0)
            for t12 in regroup_layer(mid, 0, algebra.monad.flavor, max_groups=bounds.max_width):
                yield t01, t12

    for t01, t12 in (enumerated() if spines is None else spines):
        if face_term(algebra, t01, 0) != face_term(algebra, t12, 1):
            raise InvalidHorn(f"spine ({t01}, {t12}) does not share a vertex")
        spines_seen += 1
        found = fill(algebra, 2, {2: t01, 0: t12}, bounds, limit=2).fillers
        if not found:
            surjective = False
            report.fail(f"({t01}, {t12})", "no lift", "", kind="surjectivity")
            sur_examples.append([str(t01), str(t12)])
        elif len(found) > 1:
            injective = False
            report.fail(f"({t01}, {t12})", found[0], found[1], kind="injectivity")
            if len(inj_examples) < 16:
                inj_examples.append([str(t01), str(t12), str(found[0]), str(found[1])])
    report.details.update(spines=spines_seen, injective=injective, surjective=surjective,
                          injectivity_examples=inj_examples, surjectivity_examples=sur_examples[:16])
    return report


def _tagged(report: Report, width: int, nodes: Optional[int]) -> Report:
    report.details.update(width=width, level3_max_nodes=nodes)
    return report


def bundled_law_suite(width: int = 3, max_level: int = 3, level3_nodes: int = 6,
                      narrow_width: int = 2, progress=None) -> list:
    """Monad laws, algebra laws and simplicial identities for every bundled instance.

    Carriers have at most three atoms and nodes at most ``width`` children.
    Terms of level 3 are additionally capped at ``level3_nodes`` non-root
    nodes, since the uncapped level-3 universes run into the millions; a
    second pass checks every term of every level at ``narrow_width`` with no
    node cap.  S9 coefficients multiply the counts, so S9 uses width 2 with a
    cap of 4 and skips the uncapped pass; distributions use denominators up
    to 4 (up to 3 in the uncapped pass), and the nat-semimodule algebra is
    checked uncapped on the one-atom carrier.  Returns ``(instance label, [reports])`` pairs; ``progress`` is
    called with each label as it finishes.
    """
    from .algebras import (check_algebra_laws, cyclic, free, g_set, monoid_action, naturals_add,
                           semilattice, terminal)
    from .monads import (COMMUTATIVE_MONOID, COMMUTATIVE_SEMIGROUP, DISTRIBUTION, IDENTITY, MONOID,
                         SEMIGROUP, boolean_monoid, check_monad_laws, cyclic_group, semimodule,
                         trivial_monoid)
    s9, natmod = semimodule("S9"), semimodule("nat")
    cases = [
        (IDENTITY, [cyclic(3, IDENTITY), terminal(IDENTITY)], ("a", "b", "c")),
        (COMMUTATIVE_MONOID, [cyclic(2), naturals_add(), terminal(COMMUTATIVE_MONOID),
                              free(COMMUTATIVE_MONOID, ("a",))], ("a", "b")),
        (MONOID, [cyclic(2, MONOID), terminal(MONOID)], ("a", "b")),
        (SEMIGROUP, [cyclic(2, SEMIGROUP), terminal(SEMIGROUP)], ("a", "b")),
        (COMMUTATIVE_SEMIGROUP, [cyclic(2, COMMUTATIVE_SEMIGROUP)], ("a", "b")),
        (DISTRIBUTION, [semilattice(), terminal(DISTRIBUTION)], ("a", "b"), {"coeff": 4, "narrow_coeff": 3}),
        (None, [g_set(cyclic_group(2))], None),
        (None, [g_set(cyclic_group(3))], None),
        (None, [monoid_action(trivial_monoid())], None),
        (None, [monoid_action(boolean_monoid())], None),
        (s9, [terminal(s9)], ("a",), {"nodes": 4, "width": 2, "narrow": False}),
        (natmod, [cyclic(2, natmod)], ("a",), {"narrow_carrier": ("1",)}),
    ]
    out = []
    for monad, algebras, atoms, *opts in cases:
        opts = opts[0] if opts else {}
        nodes = min(opts.get("nodes", level3_nodes), level3_nodes)
        w = min(opts.get("width", width), width)
        coeff = opts.get("coeff", 2)
        monad = monad or algebras[0].monad
        atoms = atoms or tuple(algebras[0].carrier)
        passes = [(w, nodes, coeff)]
        if opts.get("narrow", True) and narrow_width:
            passes.append((min(narrow_width, w), None, opts.get("narrow_coeff", coeff)))
        reports = []
        for pw, pn, coeff in passes:
            narrow = pn is None
            base = Bounds(max_width=pw, carrier_subset=atoms, coeff_bound=coeff)
            deep = Bounds(max_width=pw, carrier_subset=atoms, coeff_bound=coeff, max_nodes=pn)
            reports.append(_tagged(check_monad_laws(monad, base, max_level, {3: deep}), pw, pn))
            for alg in algebras:
                carrier = tuple(alg.carrier[:3]) if alg.name != "nat" else ("1", "2", "3")
                if alg.is_free:
                    carrier = ("a",)
                if narrow and "narrow_carrier" in opts:
                    carrier = opts["narrow_carrier"]
                ab = Bounds(max_width=pw, carrier_subset=carrier, coeff_bound=coeff)
                deep_ab = Bounds(max_width=pw, carrier_subset=carrier, coeff_bound=coeff,
                                 max_nodes=pn)
                reports.append(_tagged(check_algebra_laws(alg, ab), pw, pn))
                # X_n uses level n+1 (+1 for free algebras), so level 3 is reached at n = 2 - offset
                top = max_level - 1 - alg.offset
                per_level = {n: (deep_ab if n + 1 + alg.offset >= 3 else ab) for n in range(top + 1)}
                reports.append(_tagged(check_simplicial_identities(alg, top, ab, per_level), pw, pn))
        label = f"{monad.id} [{', '.join(a.name for a in algebras)}]"
        out.append((label, reports))
        if progress is not None:
            progress(label)
    return out
