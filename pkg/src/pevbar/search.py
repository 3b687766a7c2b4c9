"""Constructive simplex search: find every ``sigma`` with prescribed faces.

A face ``d_i`` with ``i >= 1`` (or ``d_0`` of a free algebra) deletes one
layer of nodes from ``sigma``.  Conversely ``sigma`` is recovered from that
face by *regrouping*: under every node at the layer above, the children are
distributed into new groups.  Node counts of the other prescribed faces pin
the total number of new groups, so for node kinds without merging (multiset,
list, action) the search below is complete, not a truncation.

Weighted terms merge duplicates, so counts do not transfer; there the root
layer is regrouped by a dynamic program over candidate groups whose state is
the running coefficient vector of every prescribed face.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

from sympy.utilities.iterables import multiset_partitions

from .errors import (ConstraintViolation, IndexOutOfRange, InvalidHorn, LevelMismatch,
                     SearchSpaceTooLarge, UnsupportedInstance)
from .terms import Bounds, Flavor, Term, count_at_depth, node, nodes_at_depth, validate


# -- unweighted regrouping ---------------------------------------------------------

def _mset_options(kids: tuple, flavor: Flavor, cap: int):
    keyed = {k.key: k for k in kids}
    if kids:
        parts = multiset_partitions(sorted(k.key for k in kids))
    else:
        parts = [[]]
    for part in parts:
        blocks = [[(None, keyed[x]) for x in block] for block in part]
        spare = cap - len(blocks)
        if spare < 0:
            continue
        extra = range(spare + 1) if flavor.allows_empty else (0,)
        for e in extra:
            yield [(None, b) for b in blocks] + [(None, [])] * e


def _list_options(kids: tuple, flavor: Flavor, cap: int):
    m = len(kids)
    if m == 0:
        yield []
        if flavor.allows_empty:
            for g in range(1, cap + 1):
                yield [(None, [])] * g
        return
    if flavor.nonempty:
        for g in range(1, min(m, cap) + 1):
            for cuts in itertools.combinations(range(1, m), g - 1):
                bounds = (0,) + cuts + (m,)
                yield [(None, [(None, k) for k in kids[a:b]]) for a, b in zip(bounds, bounds[1:])]
        return
    for g in range(1, cap + 1):
        for cuts in itertools.combinations_with_replacement(range(m + 1), g - 1):
            bounds = (0,) + cuts + (m,)
            yield [(None, [(None, k) for k in kids[a:b]]) for a, b in zip(bounds, bounds[1:])]


def _action_options(entries: tuple, flavor: Flavor, cap: int):
    monoid = flavor.coeffs
    if cap < 1:
        return
    (g, x), = entries
    for h1 in monoid.elements:
        for h2 in monoid.elements:
            if monoid.mul(h1, h2) == g:
                yield [(h1, [(h2, x)])]


def _options(parent: Term, flavor: Flavor, cap: int) -> list:
    """Every way to regroup the children of one node into at most ``cap`` groups."""
    if flavor.kind == "mset":
        raw = _mset_options(parent.children, flavor, cap)
    elif flavor.kind == "list":
        raw = _list_options(parent.children, flavor, cap)
    elif flavor.kind == "action":
        raw = _action_options(parent.children, flavor, cap)
    else:
        raise UnsupportedInstance("weighted layers are regrouped by weighted_root_regroupings")
    out = []
    for groups in raw:
        if flavor.arity is not None and (len(groups) != flavor.arity
                                         or any(len(g) != flavor.arity for _, g in groups)):
            continue
        if flavor.nonempty and any(not g for _, g in groups):
            continue
        out.append(groups)
    return out


def _build(flavor: Flavor, parent: Term, groups) -> Term:
    level = parent.level
    made = []
    for c, entries in groups:
        kids = [(d, s) if flavor.weighted else s for d, s in entries]
        made.append((c, node(flavor, kids, level)) if flavor.weighted else node(flavor, kids, level))
    return node(flavor, made, level + 1)


def _rebuild(t: Term, k: int, flavor: Flavor, it) -> Term:
    if k == 0:
        return _build(flavor, t, next(it))
    if flavor.weighted:
        kids = [(c, _rebuild(s, k - 1, flavor, it)) for c, s in t.children]
    else:
        kids = [_rebuild(s, k - 1, flavor, it) for s in t.children]
    return node(flavor, kids, t.level + 1)


def regroup_layer(t: Term, k: int, flavor: Flavor, n_groups: Optional[int] = None,
                  max_groups: Optional[int] = None) -> Iterator[Term]:
    """Every valid ``s`` with ``mu_at(s, k) == t`` (new nodes at depth ``k + 1``).

    ``n_groups`` fixes the total number of new nodes; otherwise each node at
    depth ``k`` gets at most ``max_groups`` groups.  Without either, flavors
    that admit empty nodes have infinitely many answers and ValueError is raised.
    """
    if t.is_atom or not 0 <= k < t.level:
        raise IndexOutOfRange(f"cannot regroup below depth {k} of a level-{t.level} term")
    if n_groups is None and max_groups is None and flavor.allows_empty:
        raise ValueError("regrouping needs n_groups or max_groups when empty nodes are allowed")
    parents = nodes_at_depth(t, k)
    total_kids = sum(len(p.children) for p in parents)
    if n_groups is not None:
        per_cap = n_groups
    elif max_groups is not None:
        per_cap = max_groups
    else:
        per_cap = max(total_kids, 1)
    opts = [_options(p, flavor, per_cap) for p in parents]
    seen = set()
    chosen: list = []

    def dfs(i, used):
        if i == len(opts):
            if n_groups is None or used == n_groups:
                s = _rebuild(t, k, flavor, iter(chosen))
                if s.key not in seen:
                    seen.add(s.key)
                    try:
                        validate(s, flavor)
                    except ConstraintViolation:
                        return
                    yield s
            return
        for groups in opts[i]:
            g = len(groups)
            if n_groups is not None and used + g > n_groups:
                continue
            chosen.append(groups)
            yield from dfs(i + 1, used + g)
            chosen.pop()

    yield from dfs(0, 0)


# -- weighted root regrouping -------------------------------------------------------

def _coefficient_pool(ring, targets) -> list:
    if ring.finite:
        return [x for x in ring.elements if not ring.is_zero(x)]
    if ring.name == "nat":
        top = max([c for tgt in targets for c in tgt] + [1])
        return list(range(1, top + 1))
    raise UnsupportedInstance(f"constructive regrouping over {ring.name} is not available")


def weighted_root_regroupings(t: Term, flavor: Flavor, faces=(), limit: Optional[int] = None,
                              max_candidates: int = 10 ** 9) -> list:
    """Every ``s`` with ``mu_at(s, 0) == t`` and ``value(s) == target`` for each face.

    ``faces`` holds pairs ``(value, target)`` where ``value`` maps a candidate
    group ``G`` to the term its singleton ``{1:G}`` is sent to by that face.
    Works for finite semirings and for ``nat`` (no zero divisors, so every
    group coefficient is bounded by the coefficients it produces).
    """
    ring = flavor.coeffs
    if flavor.kind != "weighted":
        raise UnsupportedInstance("weighted_root_regroupings needs a weighted flavor")
    supp = [y for _, y in t.children]
    mu_target = tuple(c for c, _ in t.children)
    face_targets = []
    for value, target in faces:
        face_targets.append(({s.key: i for i, (_, s) in enumerate(target.children)},
                             tuple(c for c, _ in target.children)))
    if not ring.finite and ring.name != "nat":
        raise UnsupportedInstance(f"constructive regrouping over {ring.name} is not available")
    if ring.finite:
        per_slot = [list(ring.elements) for _ in supp]
    else:
        per_slot = [list(range(c + 1)) for c in mu_target]
    size = 1
    for p in per_slot:
        size *= len(p)
    if size > max_candidates:
        raise SearchSpaceTooLarge(f"{size} candidate groups exceed max_candidates={max_candidates}")
    coeffs = _coefficient_pool(ring, [mu_target] + [tg for _, tg in face_targets])

    # each candidate group: (term, mu vector, positions in every face target)
    groups = []
    for vec in itertools.product(*per_slot):
        g = node(flavor, [(e, y) for e, y in zip(vec, supp) if not ring.is_zero(e)], t.level)
        try:
            validate(g, flavor)
        except ConstraintViolation:
            continue
        spots = []
        for (value, _), (index, _) in zip(faces, face_targets):
            v = value(g)
            if v.key not in index:
                break
            spots.append(index[v.key])
        else:
            groups.append((g, vec, tuple(spots)))

    targets = (mu_target,) + tuple(tg for _, tg in face_targets)
    le = _le_table(ring, coeffs, targets)
    zero_state = tuple(tuple(ring.zero for _ in tg) for tg in targets)

    def step(state, vec, spots, d):
        mu_vec = tuple(ring.add(a, ring.mul(d, e)) for a, e in zip(state[0], vec))
        if not all(le(x, y) for x, y in zip(mu_vec, targets[0])):
            return None
        new = [mu_vec]
        for f, pos in enumerate(spots, start=1):
            row = list(state[f])
            row[pos] = ring.add(row[pos], d)
            if not le(row[pos], targets[f][pos]):
                return None
            new.append(tuple(row))
        return tuple(new)

    @lru_cache(maxsize=None)
    def feasible(i, state):
        if i == len(groups):
            return state == targets
        if feasible(i + 1, state):
            return True
        g, vec, spots = groups[i]
        for d in coeffs:
            nxt = step(state, vec, spots, d)
            if nxt is not None and feasible(i + 1, nxt):
                return True
        return False

    out: list = []
    picked: list = []

    def walk(i, state):
        if limit is not None and len(out) >= limit:
            return
        if i == len(groups):
            s = node(flavor, picked, t.level + 1)
            try:
                validate(s, flavor)
            except ConstraintViolation:
                return
            out.append(s)
            return
        if feasible(i + 1, state):
            walk(i + 1, state)
        g, vec, spots = groups[i]
        for d in coeffs:
            nxt = step(state, vec, spots, d)
            if nxt is not None and feasible(i + 1, nxt):
                picked.append((d, g))
                walk(i + 1, nxt)
                picked.pop()

    if feasible(0, zero_state):
        walk(0, zero_state)
    feasible.cache_clear()
    return sorted(out, key=lambda s: s.key)


def _le_table(ring, coeffs, targets):
    if ring.finite:
        table = {(x, y): ring.le(x, y) for x in ring.elements for y in ring.elements}
        return lambda x, y: table[(x, y)]
    return lambda x, y: x <= y


# -- filler search -----------------------------------------------------------------

@dataclass
class FillResult:
    fillers: list
    complete: bool
    method: str
    info: dict = field(default_factory=dict)


def removed_depth(algebra, n: int, i: int) -> int:
    """Depth (in an n-simplex term) of the layer that face ``d_i`` deletes."""
    return n - i + 1 if i >= 1 else n + 1


def check_horn(algebra, n: int, faces: dict) -> None:
    """Raise InvalidHorn unless ``d_i F_j == d_{j-1} F_i`` for all given ``i < j``."""
    from .bar import face_term
    if n < 2:
        return
    for i, j in itertools.combinations(sorted(faces), 2):
        lhs = face_term(algebra, faces[j], i)
        rhs = face_term(algebra, faces[i], j - 1)
        if lhs != rhs:
            raise InvalidHorn(f"d{i}(F{j}) = {lhs} but d{j - 1}(F{i}) = {rhs}")


def _pinned_count(algebra, n: int, base: int, faces: dict) -> Optional[int]:
    depth = removed_depth(algebra, n, base)
    counts = set()
    for k, f in faces.items():
        if k == base:
            continue
        dk = removed_depth(algebra, n, k)
        counts.add(count_at_depth(f, depth) if depth < dk else count_at_depth(f, depth - 1))
    if not counts:
        return None
    if len(counts) > 1:
        return -1
    return counts.pop()


def fill(algebra, n: int, faces: dict, bounds: Optional[Bounds] = None,
         limit: Optional[int] = None) -> FillResult:
    """All ``n``-simplices whose faces listed in ``faces`` match exactly."""
    from .bar import Simplex, face_term, simplices
    bounds = bounds or Bounds(carrier_subset=algebra.carrier)
    faces = {int(i): (f.term if isinstance(f, Simplex) else f) for i, f in faces.items()}
    if n < 1:
        raise IndexOutOfRange("faces exist only for n >= 1")
    want = n + algebra.offset
    for i, f in faces.items():
        if not 0 <= i <= n:
            raise IndexOutOfRange(f"face index {i} on an {n}-simplex")
        if f.level != want:
            raise LevelMismatch(f"face {i} has level {f.level}, expected {want}")
        algebra.monad.validate(f)
    check_horn(algebra, n, faces)
    flavor = algebra.monad.flavor

    def matches(s):
        return all(face_term(algebra, s, i) == f for i, f in faces.items())

    def finish(cands, complete, method, **info):
        out, seen = [], set()
        count = 0
        for s in cands:
            count += 1
            if count > bounds.max_candidates:
                raise SearchSpaceTooLarge(f"more than {bounds.max_candidates} candidates")
            if s.key in seen or not matches(s):
                continue
            seen.add(s.key)
            out.append(s)
            if limit is not None and len(out) >= limit:
                break
        out.sort(key=lambda s: s.key)
        info["candidates"] = count
        return FillResult(out, complete, method, info)

    mu_faces = [j for j in faces if j >= 1] + ([0] if algebra.is_free and 0 in faces else [])
    if flavor.weighted and flavor.kind == "weighted":
        if n in faces and _dp_ok(flavor):
            base = faces[n]
            extra = []
            for k, f in faces.items():
                if k == n:
                    continue
                extra.append((_singleton_face(algebra, flavor, k), f))
            found = weighted_root_regroupings(base, flavor, extra, limit, bounds.max_candidates)
            return finish(found, True, "weighted-dp", base_face=n)
        return finish(simplices(algebra, n, bounds), False, "bounded-enumeration")
    if not mu_faces:
        return finish(simplices(algebra, n, bounds), False, "bounded-enumeration")

    base = max(mu_faces)
    depth = removed_depth(algebra, n, base)
    pinned = _pinned_count(algebra, n, base, faces)
    if pinned == -1:
        return FillResult([], True, "regroup", {"base_face": base, "new_nodes": "inconsistent"})
    if pinned is None:
        complete = not flavor.allows_empty
        cands = regroup_layer(faces[base], depth - 1, flavor, max_groups=bounds.max_width)
        return finish(cands, complete, "regroup", base_face=base, max_groups=bounds.max_width)
    cands = regroup_layer(faces[base], depth - 1, flavor, n_groups=pinned)
    return finish(cands, True, "regroup", base_face=base, new_nodes=pinned)


def _dp_ok(flavor: Flavor) -> bool:
    ring = flavor.coeffs
    return ring.finite or ring.name == "nat"


def _singleton_face(algebra, flavor: Flavor, k: int):
    from .bar import face_term
    one = flavor.coeffs.one

    def value(g: Term) -> Term:
        image = face_term(algebra, node(flavor, [(one, g)], g.level + 1), k)
        (_, v), = image.children
        return v

    return value


def fillers_for_faces(n: int, constraints: dict, algebra, bounds: Optional[Bounds] = None) -> list:
    """Every ``n``-simplex (as a term) whose given faces match ``constraints``."""
    return fill(algebra, n, constraints, bounds).fillers
