import itertools
from collections import Counter

import pytest

from pevbar.algebras import naturals_add, terminal
from pevbar.bar import degeneracy_term, face_term
from pevbar.counterexamples import NONUNIQUENESS, golden_fillers
from pevbar.errors import IndexOutOfRange, InvalidHorn, LevelMismatch, SearchSpaceTooLarge
from pevbar.monads import COMMUTATIVE_MONOID, semimodule
from pevbar.pev import pe_witnesses
from pevbar.search import fill, fillers_for_faces, regroup_layer
from pevbar.terms import Bounds, enumerate_terms

CMON = COMMUTATIVE_MONOID
NAT = naturals_add()


def _brute_force_fillers():
    """Assign each summand of alpha to one of two groups and keep the groupings
    whose group sums give beta; written with plain tuples, not the term engine."""
    alpha = [(2, 2), (3, 3), (3, 1)]
    beta = Counter([tuple(sorted((4, 6))), (4,)])
    out = set()
    for labels in itertools.product(range(2), repeat=len(alpha)):
        groups = [[alpha[k] for k in range(len(alpha)) if labels[k] == g] for g in range(2)]
        if any(not g for g in groups):
            continue
        values = Counter(tuple(sorted(sum(x) for x in g)) for g in groups)
        if values != beta:
            continue
        inner = sorted("{" + ",".join("{" + ",".join(map(str, sorted(x))) + "}" for x in sorted(g)) + "}"
                       for g in groups)
        out.add("{" + ",".join(inner) + "}")
    return out


def test_golden_fillers_match_brute_force():
    expected = {str(CMON.parse(s, 3)) for s in _brute_force_fillers()}
    assert expected == set(golden_fillers())
    alpha = CMON.parse(NONUNIQUENESS["alpha"], 2)
    beta = CMON.parse(NONUNIQUENESS["beta"], 2)
    res = fill(NAT, 2, {2: alpha, 0: beta})
    assert res.complete and [str(s) for s in res.fillers] == golden_fillers()


def test_regroup_layer_counts():
    t = CMON.parse("{a,b,c}", 1)
    # three two-block partitions, plus all atoms beside an empty group
    assert len(list(regroup_layer(t, 0, CMON.flavor, n_groups=2))) == 4
    assert len(list(regroup_layer(t, 0, CMON.flavor, n_groups=1))) == 1


def test_invalid_horn():
    alpha = CMON.parse(NONUNIQUENESS["alpha"], 2)
    with pytest.raises(InvalidHorn):
        fill(NAT, 2, {2: alpha, 0: CMON.parse("{{4,6}}", 2)})


def test_argument_errors():
    with pytest.raises(IndexOutOfRange):
        fill(NAT, 1, {2: CMON.parse("{{1}}", 2)})
    with pytest.raises(LevelMismatch):
        fill(NAT, 1, {1: CMON.parse("{{1}}", 2)})
    with pytest.raises(SearchSpaceTooLarge):
        fill(NAT, 1, {1: CMON.parse("{1,1,1,1,1,1,1,1}", 1)}, Bounds(max_width=8, max_candidates=10))


def test_degenerate_simplex_is_found():
    tau = CMON.parse("{{3,4},{5}}", 2)
    for i in range(2):
        s = degeneracy_term(NAT, tau, i)
        faces = {2: face_term(NAT, s, 2), 0: face_term(NAT, s, 0)}
        assert s in fillers_for_faces(2, faces, NAT)


def test_weighted_dp_matches_enumeration():
    monad = semimodule("nat")
    alg = terminal(monad)
    b = Bounds(max_width=2, coeff_bound=2)
    src, dst = monad.parse("{2:*}", 1), monad.parse("{2:*}", 1)
    fast = sorted(str(w.tau) for w in pe_witnesses(src, dst, alg))
    slow = sorted(str(t) for t in enumerate_terms(monad.flavor, 2, b)
                  if face_term(alg, t, 1) == src and face_term(alg, t, 0) == dst)
    assert fast == slow


def test_weighted_dp_s9():
    monad = semimodule("S9")
    alg = terminal(monad)
    ws = pe_witnesses(monad.parse("{1:*}", 1), monad.parse("{2:*}", 1), alg)
    assert "{1:{1:*},1:{}}" in {str(w.tau) for w in ws}
    assert len(ws) == 2
