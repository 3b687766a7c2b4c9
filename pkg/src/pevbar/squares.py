"""Weak and strong pullbacks of finite squares, and the square-based
properties of bar constructions: BC, inner span completeness, stiffness and
splitness.

A commuting square::

    A --f--> B
    |g       |m
    v        v
    C --n--> D

is a weak pullback when every ``(b, c)`` with ``m(b) = n(c)`` has some lift
``a`` with ``f(a) = b`` and ``g(a) = c``; it is strong when the lift is unique.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .algebras import Algebra
from .bar import degeneracy_term, face_term, simplices
from .errors import ConfigError, NonCommutingSquare, UnsupportedInstance
from .monads import MonadInstance, eta_at, map_leaves, mu_at
from .reports import Report, cut, violation_cap
from .search import fill, fillers_for_faces, regroup_layer, weighted_root_regroupings
from .terms import Bounds, Term, enumerate_terms, leaf, node

__all__ = ["FiniteSquare", "SquareReport", "classify_square", "brute_force_classify",
           "prism_example", "check_bc", "fillers_for_faces", "check_inner_span_complete",
           "check_stiff", "check_split", "distribution_lift"]

VERDICTS = ("strong", "weak_not_strong", "weak", "not_weak")


@dataclass
class FiniteSquare:
    A: list
    B: list
    C: list
    D: list
    f: dict
    g: dict
    m: dict
    n: dict

    def __post_init__(self):
        for name, src, dst in (("f", self.A, self.B), ("g", self.A, self.C),
                               ("m", self.B, self.D), ("n", self.C, self.D)):
            table = getattr(self, name)
            for x in src:
                if x not in table:
                    raise ConfigError(f"map {name} is undefined at {x!r}")
                if table[x] not in dst:
                    raise ConfigError(f"map {name} sends {x!r} outside its codomain")
        for a in self.A:
            if self.m[self.f[a]] != self.n[self.g[a]]:
                raise NonCommutingSquare(f"m(f({a!r})) != n(g({a!r}))")

    @classmethod
    def from_dict(cls, doc: dict) -> "FiniteSquare":
        try:
            sets = {k: [str(x) for x in doc[k]] for k in "ABCD"}
            maps = {k: {str(a): str(b) for a, b in doc[k].items()} for k in "fgmn"}
        except (KeyError, AttributeError, TypeError) as exc:
            raise ConfigError(f"bad square document: {exc}") from None
        return cls(**sets, **maps)

    @classmethod
    def from_json(cls, text: str) -> "FiniteSquare":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad square JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {"A": list(self.A), "B": list(self.B), "C": list(self.C), "D": list(self.D),
                "f": dict(self.f), "g": dict(self.g), "m": dict(self.m), "n": dict(self.n)}


@dataclass
class SquareReport:
    """``weak`` means every pair lifts but uniqueness was not decided."""
    verdict: str
    missing: list = field(default_factory=list)
    ambiguous: list = field(default_factory=list)
    pairs: int = 0
    details: dict = field(default_factory=dict)

    @property
    def is_weak(self) -> bool:
        return self.verdict != "not_weak"

    @property
    def is_strong(self) -> bool:
        return self.verdict == "strong"

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "pairs": self.pairs,
                "missing": [list(map(str, p)) for p in self.missing],
                "ambiguous": [list(map(str, p)) for p in self.ambiguous],
                "details": {k: str(v) if not isinstance(v, (int, bool)) else v
                            for k, v in self.details.items()}}


def _verdict(missing_count: int, ambiguous_count: int, decided: bool = True) -> str:
    if missing_count:
        return "not_weak"
    if not decided:
        return "weak"
    return "weak_not_strong" if ambiguous_count else "strong"


def _is_injective(table: dict, domain: list) -> bool:
    return len({table[x] for x in domain}) == len(domain)


def classify_square(sq: FiniteSquare, cap: Optional[int] = -1) -> SquareReport:
    """Decide weak/strong pullback by grouping lifts per compatible pair.

    At most ``cap`` missing and ambiguous pairs are listed (default: the
    current report cap; None lists all).
    """
    if cap == -1:
        cap = violation_cap()
    lifts = Counter((sq.f[a], sq.g[a]) for a in sq.A)
    by_d_b = defaultdict(list)
    for b in sq.B:
        by_d_b[sq.m[b]].append(b)
    missing, ambiguous = [], []
    n_missing = n_amb = pairs = 0
    for c in sq.C:
        for b in by_d_b.get(sq.n[c], ()):
            pairs += 1
            k = lifts.get((b, c), 0)
            if k == 0:
                n_missing += 1
                if cap is None or len(missing) < cap:
                    missing.append((b, c))
            elif k > 1:
                n_amb += 1
                if cap is None or len(ambiguous) < cap:
                    ambiguous.append((b, c))
    rep = SquareReport(_verdict(n_missing, n_amb), missing, ambiguous, pairs,
                       {"missing_total": n_missing, "ambiguous_total": n_amb})
    monic = _is_injective(sq.f, sq.A) or _is_injective(sq.g, sq.A)
    rep.details["monic_leg"] = monic
    if monic and rep.is_weak and not rep.is_strong:
        raise AssertionError("a weak pullback with a monic leg must be strong")
    return rep


def brute_force_classify(sq: FiniteSquare) -> str:
    """Independent decision: compare the set-theoretic pullback with the image of A."""
    pullback = [(b, c) for b in sq.B for c in sq.C if sq.m[b] == sq.n[c]]
    counts = {p: 0 for p in pullback}
    for a in sq.A:
        counts[(sq.f[a], sq.g[a])] += 1
    if any(v == 0 for v in counts.values()):
        return "not_weak"
    if any(v > 1 for v in counts.values()):
        return "weak_not_strong"
    return "strong"


def prism_example() -> dict:
    """Left square, right square and outer rectangle of the two-square prism
    whose left square fails to be a weak pullback although the other two are."""
    left = FiniteSquare(["*"], ["a", "b"], ["*"], ["*"],
                        {"*": "a"}, {"*": "*"}, {"a": "*", "b": "*"}, {"*": "*"})
    right = FiniteSquare(["a", "b"], ["*"], ["*"], ["*"],
                         {"a": "*", "b": "*"}, {"a": "*", "b": "*"}, {"*": "*"}, {"*": "*"})
    outer = FiniteSquare(["*"], ["*"], ["*"], ["*"],
                         {"*": "*"}, {"*": "*"}, {"*": "*"}, {"*": "*"})
    return {"left": left, "right": right, "outer": outer}


def paste(left: FiniteSquare, right: FiniteSquare) -> FiniteSquare:
    """Outer rectangle of two squares sharing the edge ``left.m == right.g``."""
    if set(left.B) != set(right.A) or set(left.D) != set(right.C):
        raise ConfigError("squares do not share an edge")
    return FiniteSquare(list(left.A), list(right.B), list(left.C), list(right.D),
                        {a: right.f[left.f[a]] for a in left.A}, dict(left.g),
                        dict(right.m), {c: right.n[left.n[c]] for c in left.C})


# -- distribution lift ----------------------------------------------------------------------

def distribution_lift(algebra: Algebra, n: int, i: int, b: Term, c: Term) -> Term:
    """A lift ``sigma`` with ``d_i sigma = b`` and ``d_n sigma = c`` for the distribution monad.

    ``sigma = sum_q b(q) delta(sigma_q)`` with
    ``sigma_q(y) = c(y) q(g y) / r(g y)`` and ``r = (Tg)(c)``; here ``g`` is
    ``d_i`` one level down (``e`` when ``n = 2``).
    """
    flavor = algebra.monad.flavor
    if not flavor.normalized or algebra.offset:
        raise UnsupportedInstance("distribution_lift needs the distribution monad and a non-free algebra")
    if not (0 <= i < n - 1):
        raise UnsupportedInstance("distribution_lift handles d_i against d_n with i < n - 1")
    if n == 2:
        g = algebra.evaluate
    else:
        g = lambda y: face_term(algebra, y, i)
    gy = {y.key: g(y) for _, y in c.children}
    r: dict = {}
    for w, y in c.children:
        r[gy[y.key].key] = r.get(gy[y.key].key, Fraction(0)) + w
    outer = []
    for bq, q in b.children:
        qd = {s.key: w for w, s in q.children}
        inner = [(w * qd.get(gy[y.key].key, Fraction(0)) / r[gy[y.key].key], y) for w, y in c.children]
        outer.append((bq, node(flavor, inner, c.level)))
    return node(flavor, outer, c.level + 1)


# -- BC ----------------------------------------------------------------------------------

def _bounded(monad: MonadInstance, level: int, atoms, bounds: Bounds):
    b = Bounds(max_width=bounds.max_width, carrier_subset=tuple(atoms), coeff_bound=bounds.coeff_bound,
               max_candidates=bounds.max_candidates, max_nodes=bounds.max_nodes)
    return list(enumerate_terms(monad.flavor, level, b))


def _mu_square(monad, X, Y, f, bounds) -> SquareReport:
    flavor = monad.flavor
    tf = lambda t: map_leaves(t, f)
    index = defaultdict(list)
    for bt in _bounded(monad, 2, Y, bounds):
        index[mu_at(bt, 0).key].append(bt)
    missing, ambiguous = [], []
    pairs = 0
    decided = True
    for c in _bounded(monad, 1, X, bounds):
        for bt in index.get(tf(c).key, ()):
            pairs += 1
            if flavor.normalized:
                lift = _dist_mu_lift(flavor, f, bt, c)
                lifts = [lift] if map_leaves(lift, f) == bt and mu_at(lift, 0) == c else []
                decided = False
            elif flavor.kind == "weighted":
                lifts = weighted_root_regroupings(c, flavor, [(tf, bt)], limit=2,
                                                  max_candidates=bounds.max_candidates)
            else:
                lifts = [a for a in regroup_layer(c, 0, flavor, n_groups=len(bt.children))
                         if tf(a) == bt][:2]
            if not lifts:
                missing.append((bt, c))
            elif len(lifts) > 1:
                ambiguous.append((bt, c))
    return SquareReport(_verdict(len(missing), len(ambiguous), decided), cut(missing),
                        cut(ambiguous), pairs, {"square": "mu-naturality", "missing_total": len(missing)})


def _dist_mu_lift(flavor, f, bt: Term, c: Term) -> Term:
    r: dict = {}
    for w, y in c.children:
        r[f[y.atom]] = r.get(f[y.atom], Fraction(0)) + w
    outer = []
    for bq, q in bt.children:
        qd = {s.atom: w for w, s in q.children}
        inner = [(w * qd.get(f[y.atom], Fraction(0)) / r[f[y.atom]], y) for w, y in c.children]
        outer.append((bq, node(flavor, inner, 1)))
    return node(flavor, outer, 2)


def _eta_square(monad, X, Y, f, bounds) -> SquareReport:
    missing, ambiguous = [], []
    pairs = 0
    for c in _bounded(monad, 1, X, bounds):
        image = map_leaves(c, f)
        for y in Y:
            if image != eta_at(leaf(y), 0, monad):
                continue
            pairs += 1
            lifts = [x for x in X if f[x] == y and eta_at(leaf(x), 0, monad) == c]
            if not lifts:
                missing.append((y, c))
            elif len(lifts) > 1:
                ambiguous.append((y, c))
    return SquareReport(_verdict(len(missing), len(ambiguous)), cut(missing),
                        cut(ambiguous), pairs, {"square": "eta-naturality", "missing_total": len(missing)})


def _pair_atom(x: str, y: str) -> str:
    return f"{x}.{y}"


def _kernel_lift(monad, f, c1: Term, c2: Term) -> Optional[Term]:
    """A lift of ``(c1, c2)`` through ``T`` of the kernel pair of ``f``."""
    flavor = monad.flavor
    if flavor.normalized:
        s = _conditional(c1, c2, f)
        return node(flavor, [(w, leaf(_pair_atom(x, y))) for (x, y), w in s.items()], 1)
    if flavor.kind == "mset":
        left = sorted((f[s.atom], s.atom) for s in c1.children)
        right = sorted((f[s.atom], s.atom) for s in c2.children)
        if [k for k, _ in left] != [k for k, _ in right]:
            return None
        return node(flavor, [leaf(_pair_atom(a, b)) for (_, a), (_, b) in zip(left, right)], 1)
    if flavor.kind == "list":
        if [f[s.atom] for s in c1.children] != [f[s.atom] for s in c2.children]:
            return None
        return node(flavor, [leaf(_pair_atom(a.atom, b.atom)) for a, b in zip(c1.children, c2.children)], 1)
    if flavor.kind == "action":
        (g, a), = c1.children
        (h, b), = c2.children
        if g != h or f[a.atom] != f[b.atom]:
            return None
        return node(flavor, [(g, leaf(_pair_atom(a.atom, b.atom)))], 1)
    raise UnsupportedInstance(f"no constructive kernel-pair lift for {monad.id}")


def _conditional(c1: Term, c2: Term, f) -> dict:
    from .pev import conditional_product
    return conditional_product(c1, c2, f, f)


def _kernel_square(monad, X, f, bounds) -> SquareReport:
    cs = _bounded(monad, 1, X, bounds)
    groups = defaultdict(list)
    for c in cs:
        groups[map_leaves(c, f).key].append(c)
    missing = []
    pairs = 0
    for members in groups.values():
        for c1, c2 in itertools.product(members, repeat=2):
            pairs += 1
            s = _kernel_lift(monad, f, c1, c2)
            ok = s is not None
            if ok:
                p1 = map_leaves(s, lambda a: a.split(".")[0])
                p2 = map_leaves(s, lambda a: a.split(".")[1])
                ok = p1 == c1 and p2 == c2
            if not ok:
                missing.append((c1, c2))
    return SquareReport(_verdict(len(missing), 0, decided=False), cut(missing),
                        [], pairs, {"square": "T(kernel pair)", "missing_total": len(missing)})


def check_bc(monad: MonadInstance, sample_maps: Iterable, bounds: Bounds) -> Report:
    """Classify the mu-naturality squares and T-images of kernel pairs of sample maps.

    ``sample_maps`` holds ``(X, Y, f)`` with ``f`` a dict from X to Y.  The
    eta-naturality square is classified too and reported, but it is not part
    of the BC condition.
    """
    report = Report("bc", level=2)
    squares = []
    for X, Y, f in sample_maps:
        if any("." in a for a in X):
            raise ConfigError("atom names used in sample maps may not contain '.'")
        label = ",".join(f"{x}->{f[x]}" for x in X)
        mu_sq = _mu_square(monad, X, Y, f, bounds)
        eta_sq = _eta_square(monad, X, Y, f, bounds)
        try:
            ker_sq = _kernel_square(monad, X, f, bounds)
        except UnsupportedInstance:
            ker_sq = None
        for name, sq, counts in (("mu", mu_sq, True), ("eta", eta_sq, False), ("T(kernel)", ker_sq, True)):
            if sq is None:
                squares.append({"map": label, "square": name, "verdict": "skipped"})
                continue
            squares.append({"map": label, "square": name, "verdict": sq.verdict,
                            "pairs": sq.pairs, "counts_for_bc": counts})
            if counts and not sq.is_weak:
                for b, c in sq.missing:
                    report.fail(f"({b}, {c})", "no lift", "", map=label, square=name)
                report.total_violations += sq.details["missing_total"] - len(sq.missing)
    report.details.update(monad=monad.id, squares=squares)
    return report


# -- bar-construction properties ------------------------------------------------------------

def _lift_count(algebra: Algebra, n: int, i: int, j: int, b: Term, c: Term, bounds: Bounds):
    """Number of lifts (0, 1 or 2 meaning 'several') and whether uniqueness was decided."""
    if algebra.monad.flavor.normalized:
        if j != n:
            raise UnsupportedInstance("distribution squares are lifted only against d_n")
        sigma = distribution_lift(algebra, n, i, b, c)
        ok = face_term(algebra, sigma, i) == b and face_term(algebra, sigma, j) == c
        return (1 if ok else 0), False
    res = fill(algebra, n, {i: b, j: c}, bounds, limit=2)
    return len(res.fillers), res.complete


def check_inner_span_complete(algebra: Algebra, max_level: int, bounds: Bounds,
                              include_adjacent: bool = False) -> Report:
    """Classify every square ``d_i, d_j`` (``i < j - 1``) on bounded ``X_{n-1}`` pairs, ``n <= max_level``.

    With ``include_adjacent`` the ``i = j - 1`` squares are classified as well;
    they are reported but never affect the verdict.
    """
    report = Report("inner_span_complete", level=max_level)
    squares = []
    for n in range(2, max_level + 1):
        lower = list(simplices(algebra, n - 1, bounds))
        for j in range(1 if include_adjacent else 2, n + 1):
            for i in range(0, j):
                adjacent = i == j - 1
                if adjacent and not include_adjacent:
                    continue
                by_key = defaultdict(list)
                for b in lower:
                    by_key[face_term(algebra, b, j - 1).key].append(b)
                missing = ambiguous = pairs = 0
                decided = True
                for c in lower:
                    for b in by_key.get(face_term(algebra, c, i).key, ()):
                        pairs += 1
                        k, ok = _lift_count(algebra, n, i, j, b, c, bounds)
                        decided &= ok
                        if k == 0:
                            missing += 1
                            if not adjacent:
                                report.fail(f"({b}, {c})", "no lift", "", n=n, i=i, j=j)
                        elif k > 1:
                            ambiguous += 1
                squares.append({"n": n, "i": i, "j": j, "pairs": pairs, "adjacent": adjacent,
                                "verdict": _verdict(missing, ambiguous, decided), "missing": missing})
    report.details.update(algebra=algebra.name, monad=algebra.monad.id, squares=squares)
    return report


def _degenerate_at(algebra, x: Term, j: int) -> bool:
    return degeneracy_term(algebra, face_term(algebra, x, j), j) == x


def check_stiff(algebra: Algebra, max_level: int, bounds: Bounds) -> Report:
    """Both families of mixed face/degeneracy squares, with ``c`` ranging over bounded ``X_{n+1}``, ``n + 1 <= max_level``.

    The lift of a compatible pair is forced (degeneracies are monic), so the
    check reduces to: if the relevant face of ``c`` is degenerate then so is ``c``.
    """
    report = Report("stiff", level=max_level)
    squares = []
    for n in range(1, max_level):
        cs = list(simplices(algebra, n + 1, bounds))
        for j in range(1, n + 1):
            for i in range(j):
                bad = _stiff_family(algebra, cs, i, j, i, j - 1, report, n, "left")
                squares.append({"n": n, "i": i, "j": j, "family": "left", "pairs_failing": bad,
                                "verdict": "not_weak" if bad else "strong"})
        for i in range(1, n + 1):
            for j in range(i):
                bad = _stiff_family(algebra, cs, i + 1, j, j, j, report, n, "right")
                squares.append({"n": n, "i": i, "j": j, "family": "right", "pairs_failing": bad,
                                "verdict": "not_weak" if bad else "strong"})
        report.details[f"checked_X{n + 1}"] = len(cs)
    report.details.update(algebra=algebra.name, monad=algebra.monad.id, squares=squares)
    return report


def _stiff_family(algebra, cs, bottom_face, j_top, i_lbl, j_low, report, n, family) -> int:
    """Count ``c`` whose bottom face is ``s_{j_low}``-degenerate while ``c`` is not ``s_{j_top}``-degenerate."""
    bad = 0
    for c in cs:
        x = face_term(algebra, c, bottom_face)
        if _degenerate_at(algebra, x, j_low) and not _degenerate_at(algebra, c, j_top):
            bad += 1
            report.fail(c, x, "not degenerate", n=n, family=family, face=bottom_face, s=j_top)
    return bad


def check_split(algebra: Algebra, max_level: int, bounds: Bounds) -> Report:
    """The ``s_i s_i`` squares with ``c`` in bounded ``X_{n+2}``, ``n + 2 <= max_level``, plus the stiff suite."""
    report = Report("split", level=max_level)
    squares = []
    for n in range(0, max_level - 1):
        cs = list(simplices(algebra, n + 2, bounds))
        for i in range(n + 1):
            bad = 0
            for c in cs:
                x = face_term(algebra, c, i + 1)
                if not _degenerate_at(algebra, x, i):
                    continue
                b = face_term(algebra, x, i)
                lift = degeneracy_term(algebra, degeneracy_term(algebra, b, i), i)
                if lift != c:
                    bad += 1
                    report.fail(c, x, lift, n=n, i=i)
            squares.append({"n": n, "i": i, "pairs_failing": bad,
                            "verdict": "not_weak" if bad else "strong"})
        report.details[f"checked_X{n + 2}"] = len(cs)
    stiff = check_stiff(algebra, max_level, bounds)
    report.merge(stiff)
    report.details.update(algebra=algebra.name, monad=algebra.monad.id, squares=squares,
                          stiff=stiff.status)
    return report
