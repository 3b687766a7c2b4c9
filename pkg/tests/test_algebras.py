import pytest

from pevbar.algebras import (check_algebra_laws, cyclic, free, g_set, get_algebra, monoid_action,
                             naturals_add, semilattice, terminal)
from pevbar.errors import CarrierMismatch, ConfigError, UnsupportedInstance
from pevbar.monads import (COMMUTATIVE_MONOID, DISTRIBUTION, MONOID, boolean_monoid, cyclic_group,
                           mu_at)
from pevbar.terms import Bounds, leaf, leaves

CMON = COMMUTATIVE_MONOID
NAT = naturals_add()


def test_te_on_witness():
    tau = CMON.parse("{{3,4},{5}}", 2)
    assert str(NAT.evaluate_at(tau)) == "{5,7}"
    assert NAT.evaluate(CMON.parse("{}", 1)) == leaf("0")


def test_t2e_on_alpha_is_mu_beta():
    alpha = CMON.parse("{{{2,2},{3,3}},{{3,1}}}", 3)
    beta = CMON.parse("{{4,6},{4}}", 2)
    assert NAT.evaluate_at(alpha) == CMON.parse("{{4,6},{4}}", 2)
    assert NAT.evaluate_at(CMON.parse("{{2,2},{3,3},{3,1}}", 2)) == mu_at(beta, 0)


@pytest.mark.parametrize("alg,carrier", [
    (naturals_add(), tuple(str(i) for i in range(21))),
    (cyclic(3), ("0", "1", "2")),
    (terminal(CMON), ("*",)),
    (terminal(DISTRIBUTION), ("*",)),
    (semilattice(), ("a", "b")),
    (g_set(cyclic_group(2)), ("0", "1")),
])
def test_algebra_laws(alg, carrier):
    width = 3 if alg.name != "nat" else 2
    rep = check_algebra_laws(alg, Bounds(max_width=width, carrier_subset=carrier, coeff_bound=3))
    assert rep.passed, rep.violations


def test_nat_width3_small_carrier():
    rep = check_algebra_laws(NAT, Bounds(max_width=3, carrier_subset=("0", "5", "20")))
    assert rep.passed and rep.details["multiplicativity_cases"] > 100


def test_free_algebra_is_mu():
    f = free(CMON, ("a", "b"))
    b = Bounds(max_width=2, carrier_subset=("a", "b"))
    for t in f.terms(2, b):      # level-3 terms over X
        assert f.evaluate_at(t) == mu_at(t, 1)
        assert f.evaluate(mu_at(t, 1)) == mu_at(mu_at(t, 1), 0)


def test_terminal_forgets_everything():
    t = terminal(CMON)
    for s in t.terms(2, Bounds(max_width=3)):
        e = t.evaluate_at(s)
        assert all(x == "*" for x in leaves(e))
        assert len(e.children) == len(s.children)


def test_cyclic_is_sum_mod_k():
    c = cyclic(4)
    for s in c.terms(1, Bounds(max_width=3, carrier_subset=c.carrier)):
        assert c.evaluate(s).atom == str(sum(int(x) for x in leaves(s)) % 4)


def test_errors():
    with pytest.raises(CarrierMismatch):
        cyclic(2).evaluate(CMON.parse("{7}", 1))
    with pytest.raises(UnsupportedInstance):
        naturals_add(DISTRIBUTION)
    with pytest.raises(ConfigError):
        g_set(boolean_monoid())
    with pytest.raises(ConfigError):
        get_algebra("nope", CMON)
    assert monoid_action(boolean_monoid()).contains("0")
    assert get_algebra("cyclic:5", MONOID).carrier == ("0", "1", "2", "3", "4")
