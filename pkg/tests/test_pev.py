from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pevbar.algebras import cyclic, free, monoid_action, naturals_add, terminal
from pevbar.bar import degeneracy_term
from pevbar.errors import IncomposableWitnesses, MarginalMismatch, UnsupportedInstance
from pevbar.monads import (COMMUTATIVE_MONOID, DISTRIBUTION, IDENTITY, MONOID, SEMIGROUP,
                           cyclic_group, m_set, semimodule, trivial_monoid)
from pevbar.pev import (NoCommonEvaluation, check_indiscrete, combine_terms, make_witness, check_internality_sample,
                        check_positive_indiscrete_consequence, check_strict_positivity,
                        compose_witnesses, conditional_product, marginals, pe_relation,
                        pe_witnesses, pushforward)
from pevbar.reports import DEFAULT_VIOLATION_CAP, set_violation_cap
from pevbar.terms import Bounds

CMON = COMMUTATIVE_MONOID
NAT = naturals_add()


def p(s, level=1):
    return CMON.parse(s, level)


def test_witness_examples():
    ws = pe_witnesses(p("{3,4,5}"), p("{7,5}"), NAT)
    assert [str(w.tau) for w in ws] == ["{{3,4},{5}}"]
    assert len(pe_witnesses(p("{2,2}"), p("{4}"), NAT)) == 1
    assert pe_witnesses(p("{4}"), p("{2,2}"), NAT) == []
    assert len(pe_witnesses(p("{1,2,3}"), p("{3,3}"), NAT)) == 1
    assert len(pe_witnesses(p("{1,2,3,3}"), p("{3,6}"), NAT)) == 2


def test_no_common_evaluation_warns():
    with pytest.warns(NoCommonEvaluation):
        assert pe_witnesses(p("{1}"), p("{2}"), NAT) == []


def test_witness_count_oracle():
    # witnesses {1,1,1,1} -> {2,2} are the ways to pair four equal leaves
    ws = pe_witnesses(p("{1,1,1,1}"), p("{2,2}"), NAT)
    assert [str(w.tau) for w in ws] == ["{{1,1},{1,1}}"]
    ws = pe_witnesses(p("{1,1,2}"), p("{2,2}"), NAT)
    assert [str(w.tau) for w in ws] == ["{{1,1},{2}}"]


def test_compose():
    w01, = pe_witnesses(p("{2,3,4,5}"), p("{5,4,5}"), NAT)
    w12, = pe_witnesses(p("{5,4,5}"), p("{9,5}"), NAT)
    out = compose_witnesses(w01, w12, NAT)
    assert out
    for theta, w02 in out:
        assert w02.source == w01.source and w02.target == w12.target
    taus = {str(w02.tau) for _, w02 in out}
    assert "{{2,3,4},{5}}" in taus
    with pytest.raises(IncomposableWitnesses):
        compose_witnesses(w12, w01, NAT)


def test_compose_contains_expected_strategy():
    w01, = pe_witnesses(p("{2,3,4}"), p("{5,4}"), NAT)
    w12, = pe_witnesses(p("{5,4}"), p("{9}"), NAT)
    out = compose_witnesses(w01, w12, NAT)
    assert [str(t) for t, _ in out] == ["{{{2,3},{4}}}"]
    assert str(out[0][1].tau) == "{{2,3,4}}"


def test_relation_on_cyclic():
    rel = pe_relation(cyclic(2), Bounds(max_width=2, carrier_subset=("0", "1")))
    assert rel.is_transitive().passed
    eq = rel.is_equivalence()
    assert eq.details["reflexive"]
    assert rel.related(p("{1,1}"), p("{0}"))
    assert not rel.related(p("{0}"), p("{1,1}"))
    assert not rel.is_symmetric().passed


def test_relation_is_kernel_pair_for_group_action():
    alg = monoid_action(cyclic_group(2))
    rel = pe_relation(alg, Bounds(max_width=2, carrier_subset=("0", "1")))
    rep = rel.is_equivalence()
    assert rep.passed and rep.details["equals_kernel_pair"]


def test_indiscrete():
    assert check_indiscrete(terminal(IDENTITY), Bounds(max_width=1)).passed
    rep = check_indiscrete(terminal(CMON), Bounds(max_width=3))
    assert "({*,*,*}, {})" in {v["term"] for v in rep.violations}
    assert check_indiscrete(monoid_action(cyclic_group(3)),
                            Bounds(max_width=2, carrier_subset=("0", "1", "2"))).passed
    rep = check_indiscrete(NAT, Bounds(max_width=2, carrier_subset=("0", "1", "2")))
    assert not rep.passed
    assert rep.total_violations > 0


def test_strict_positivity():
    assert check_strict_positivity(IDENTITY, Bounds(max_width=2)).passed
    assert check_strict_positivity(SEMIGROUP, Bounds(max_width=3)).passed
    assert check_strict_positivity(m_set(trivial_monoid()), Bounds(max_width=2)).passed
    inverse = check_strict_positivity(m_set(cyclic_group(2)), Bounds(max_width=2))
    assert [v["term"] for v in inverse.violations] == ["{1:{1:x}}"]
    rep = check_strict_positivity(CMON, Bounds(max_width=2))
    assert not rep.passed
    assert "{{x},{}}" in {v["term"] for v in rep.violations}
    assert check_strict_positivity(DISTRIBUTION, Bounds(max_width=2, coeff_bound=2)).passed


def test_conditional_product_example():
    pb = {"b1": Fraction(1, 2), "b2": Fraction(1, 2)}
    qc = {"c1": Fraction(1, 4), "c2": Fraction(3, 4)}
    m = {"b1": "e", "b2": "e"}
    n = {"c1": "e", "c2": "e"}
    s = conditional_product(pb, qc, m, n)
    assert s[("b1", "c2")] == Fraction(3, 8)
    left, right = marginals(s)
    assert left == pb and right == qc
    with pytest.raises(MarginalMismatch):
        conditional_product(pb, qc, m, {"c1": "e", "c2": "f"})


@st.composite
def coupled(draw):
    e = draw(st.integers(1, 3))
    nb, nc = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    m = {f"b{i}": f"e{draw(st.integers(0, e - 1))}" for i in range(nb)}
    n = {f"c{i}": f"e{draw(st.integers(0, e - 1))}" for i in range(nc)}
    pb = {b: Fraction(draw(st.integers(1, 5))) for b in m}
    tot = sum(pb.values())
    pb = {b: w / tot for b, w in pb.items()}
    r = pushforward(pb, m)
    qc = {}
    for ev, mass in r.items():
        fibre = [c for c in n if n[c] == ev]
        if not fibre:
            return None
        ws = [Fraction(draw(st.integers(1, 5))) for _ in fibre]
        for c, w in zip(fibre, ws):
            qc[c] = mass * w / sum(ws)
    return pb, qc, m, {c: n[c] for c in qc}


@given(coupled())
def test_conditional_product_marginals(case):
    if case is None:
        return
    pb, qc, m, n = case
    s = conditional_product(pb, qc, m, n)
    assert sum(s.values()) == 1
    left, right = marginals(s)
    assert left == pb and right == qc
    assert all(m[b] == n[c] for b, c in s)


def test_internality():
    rep = check_internality_sample(NAT, Bounds(max_width=2, carrier_subset=("0", "1", "2")))
    assert rep.passed and rep.details["edge_pairs"] == 200
    assert check_internality_sample(cyclic(2, MONOID), Bounds(max_width=2, carrier_subset=("0", "1"))).passed
    with pytest.raises(UnsupportedInstance):
        check_internality_sample(monoid_action(cyclic_group(2)), Bounds(max_width=1))


def test_positive_indiscrete():
    rep = check_positive_indiscrete_consequence(terminal(IDENTITY), Bounds(max_width=1))
    assert rep.status == "pass"
    rep = check_positive_indiscrete_consequence(monoid_action(trivial_monoid()),
                                                Bounds(max_width=1, carrier_subset=trivial_monoid().elements))
    assert rep.status == "pass"
    rep = check_positive_indiscrete_consequence(terminal(SEMIGROUP), Bounds(max_width=2))
    assert rep.status == "vacuous" and not rep.details["indiscrete"]
    rep = check_positive_indiscrete_consequence(terminal(CMON), Bounds(max_width=2))
    assert rep.status == "vacuous" and not rep.details["strictly_positive"]


def test_free_algebra_relation():
    f = free(CMON, ("a",))
    rel = pe_relation(f, Bounds(max_width=2, carrier_subset=("a",)))
    assert rel.is_transitive().passed
    # e = mu, so an edge flattens one layer without changing the leaves
    a2, = pe_witnesses(CMON.parse("{{a},{a}}", 2), CMON.parse("{{a,a}}", 2), f)
    assert str(a2.tau) == "{{{a},{a}}}"


def test_compose_nonuniqueness_pair():
    alpha = make_witness(p("{{2,2},{3,3},{3,1}}", 2), NAT)
    beta = make_witness(p("{{4,6},{4}}", 2), NAT)
    out = compose_witnesses(alpha, beta, NAT)
    thetas = {str(t) for t, _ in out}
    assert {"{{{1,3},{3,3}},{{2,2}}}", "{{{1,3}},{{2,2},{3,3}}}"} <= thetas
    assert len({str(w.tau) for _, w in out}) >= 2


def test_compose_degenerate_edges():
    t = p("{3,4,5}")
    e = make_witness(degeneracy_term(NAT, t, 0), NAT)
    out = compose_witnesses(e, e, NAT)
    ss = degeneracy_term(NAT, degeneracy_term(NAT, t, 0), 1)
    assert ss in {theta for theta, _ in out}


def test_s9_relation_not_transitive():
    s9 = semimodule("S9")
    rel = pe_relation(terminal(s9), Bounds(max_width=1))
    one, two, x = (s9.parse(f"{{{c}:*}}", 1) for c in ("1", "2", "X"))
    assert rel.related(one, two) and rel.related(two, x) and not rel.related(one, x)
    set_violation_cap(None)
    try:
        rep = rel.is_transitive()
    finally:
        set_violation_cap(DEFAULT_VIOLATION_CAP)
    assert f"{one} -> {two} -> {x}" in {v["term"] for v in rep.violations}


def test_terminal_cmon_relation():
    rel = pe_relation(terminal(CMON), Bounds(max_width=3))
    assert rel.is_transitive().passed
    assert rel.related(p("{}"), p("{*}")) and not rel.related(p("{*}"), p("{}"))
    assert not rel.is_symmetric().passed


def test_independent_product_when_e_is_a_point():
    s = conditional_product({"0": Fraction(1, 2), "1": Fraction(1, 2)},
                            {"0": Fraction(1, 3), "1": Fraction(2, 3)},
                            {"0": "*", "1": "*"}, {"0": "*", "1": "*"})
    assert s == {("0", "0"): Fraction(1, 6), ("0", "1"): Fraction(1, 3),
                 ("1", "0"): Fraction(1, 6), ("1", "1"): Fraction(1, 3)}


def test_internality_examples():
    tau = p("{{3,4},{5}}", 2)
    unit = degeneracy_term(NAT, p("{2}"), 0)
    w = make_witness(combine_terms(tau, unit), NAT)
    assert (str(w.source), str(w.target)) == ("{2,3,4,5}", "{2,5,7}")
    w = make_witness(combine_terms(tau, tau), NAT)
    assert (str(w.source), str(w.target)) == ("{3,3,4,4,5,5}", "{5,5,7,7}")
