import pytest

from pevbar.algebras import cyclic, monoid_action, naturals_add, terminal
from pevbar.bar import (Simplex, bundled_law_suite, check_simplicial_identities, degeneracy,
                        degeneracy_term, face, face_term, segal_check)
from pevbar.errors import IndexOutOfRange, InvalidHorn, LevelMismatch
from pevbar.monads import COMMUTATIVE_MONOID, IDENTITY, MONOID, cyclic_group, semimodule
from pevbar.terms import Bounds

CMON = COMMUTATIVE_MONOID
NAT = naturals_add()


def test_faces_of_witness():
    tau = Simplex(NAT, 1, CMON.parse("{{3,4},{5}}", 2))
    assert str(face(tau, 1)) == "{3,4,5}"
    assert str(face(tau, 0)) == "{5,7}"
    assert face(degeneracy(tau, 0), 0) == tau


def test_identity_edge():
    v = CMON.parse("{3,4,5}", 1)
    e = degeneracy_term(NAT, v, 0)
    assert str(e) == "{{3},{4},{5}}"
    assert face_term(NAT, e, 0) == face_term(NAT, e, 1) == v


def test_double_unit_in_terminal_semimodule():
    s9 = semimodule("S9")
    t = terminal(s9)
    star = s9.parse("{1:*}", 1)    # eta(*) as a 0-simplex
    assert str(degeneracy_term(t, star, 0)) == "{1:{1:*}}"


def test_index_and_level_errors():
    tau = CMON.parse("{{3,4},{5}}", 2)
    with pytest.raises(IndexOutOfRange):
        face_term(NAT, tau, 2)
    with pytest.raises(LevelMismatch):
        Simplex(NAT, 2, tau)


@pytest.mark.parametrize("alg,carrier", [
    (cyclic(2), ("0", "1")),
    (terminal(MONOID), ("*",)),
    (cyclic(2, IDENTITY), ("0", "1")),
])
def test_simplicial_identities(alg, carrier):
    b = Bounds(max_width=2, carrier_subset=carrier)
    deep = Bounds(max_width=2, carrier_subset=carrier, max_nodes=5)
    rep = check_simplicial_identities(alg, 2, b, {2: deep})
    assert rep.passed, rep.violations


def test_degeneracies_injective():
    alg = cyclic(2)
    b = Bounds(max_width=2, carrier_subset=("0", "1"))
    for n in range(2):
        for i in range(n + 1):
            seen = {}
            for t in alg.terms(n + 1, b):
                s = degeneracy_term(alg, t, i)
                assert seen.setdefault(s, t) == t


def test_segal_monoid_terminal():
    rep = segal_check(terminal(MONOID), 2, Bounds(max_width=3))
    assert rep.details["injective"] and rep.details["surjective"]
    assert rep.details["spines"] > 1000


def test_segal_m_set():
    alg = monoid_action(cyclic_group(2))
    rep = segal_check(alg, 2, Bounds(max_width=3, carrier_subset=("0", "1")))
    assert rep.passed and rep.details["spines"] == 16


def test_segal_nonuniqueness_pair():
    alpha = CMON.parse("{{2,2},{3,3},{3,1}}", 2)
    beta = CMON.parse("{{4,6},{4}}", 2)
    rep = segal_check(NAT, 2, Bounds(carrier_subset=("1", "2", "3")), spines=[(alpha, beta)])
    assert not rep.details["injective"] and rep.details["surjective"]
    _, _, d, d2 = rep.details["injectivity_examples"][0]
    assert {d, d2} == {"{{{1,3},{3,3}},{{2,2}}}", "{{{1,3}},{{2,2},{3,3}}}"}
    with pytest.raises(InvalidHorn):
        segal_check(NAT, 2, Bounds(), spines=[(alpha, CMON.parse("{{4,6}}", 2))])


def test_bundled_suite_shape():
    # the full suite runs in the acceptance tests; here only a cheap slice
    res = bundled_law_suite(width=2, level3_nodes=3)
    assert all(r.passed for _, reps in res for r in reps)
