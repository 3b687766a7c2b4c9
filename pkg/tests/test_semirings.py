import itertools

import pytest
from hypothesis import given, strategies as st

from pevbar.errors import MixedSemirings
from pevbar.semirings import (NAT, RAT, S, S9, additively_indecomposable, elem, get, saturate,
                              solve_mul, verify_axioms)


def test_x_squared_is_two():
    assert S.mul(S.parse("X"), S.parse("X")) == (2, 0)
    assert S9.mul(S9.parse("X"), S9.parse("X")) == (2, 0)


def test_s9_saturates():
    assert S9.add(S9.parse("2"), S9.parse("1")) == S9.parse("2")
    assert S9.add(S9.parse("2X"), S9.parse("X")) == S9.parse("2X")
    assert len(S9.elements) == 9


@pytest.mark.parametrize("ring", [NAT, S, S9, RAT])
def test_identities(ring):
    for x in ring.bounded_elements(3):
        assert ring.add(x, ring.zero) == x
        assert ring.mul(x, ring.one) == x
        assert ring.mul(x, ring.zero) == ring.zero


def test_standard_cross_term_is_used():
    # (1 + X)(1 + X) = 3 + 2X; the transposed cross term would give 3 + 2X too,
    # so use (1 + 2X)(2 + X) = (2 + 4) + (1 + 4)X
    assert S.mul((1, 2), (2, 1)) == (6, 5)
    assert S.mul((1, 0), (0, 1)) == (0, 1)


def test_s9_axioms_exhaustive():
    verify_axioms(S9)     # raises on any failure
    els = S9.elements
    for a, b, c in itertools.product(els, repeat=3):
        assert S9.mul(a, S9.add(b, c)) == S9.add(S9.mul(a, b), S9.mul(a, c))
        assert S9.mul(S9.mul(a, b), c) == S9.mul(a, S9.mul(b, c))
        assert S9.add(S9.add(a, b), c) == S9.add(a, S9.add(b, c))


@given(st.tuples(st.integers(0, 6), st.integers(0, 6)), st.tuples(st.integers(0, 6), st.integers(0, 6)))
def test_quotient_map_is_homomorphism(x, y):
    assert saturate(S.add(x, y)) == S9.add(saturate(x), saturate(y))
    assert saturate(S.mul(x, y)) == S9.mul(saturate(x), saturate(y))


def test_indecomposability():
    assert additively_indecomposable(elem("S9", "X"))
    assert not additively_indecomposable(elem("S9", "2"))
    assert additively_indecomposable(elem("nat", 1))
    assert additively_indecomposable(elem("S", "X"))


def test_indecomposable_oracle():
    # brute force over all 81 pairs
    for x in S9.elements:
        decomposable = any(S9.add(r, s) == x and r != S9.zero and s != S9.zero
                           for r in S9.elements for s in S9.elements)
        assert additively_indecomposable(elem(S9, x)) == (not decomposable)


def test_solve_mul():
    assert solve_mul(elem("S9", "X"), elem("S9", "1")) == []
    assert elem("S9", "X") in solve_mul(elem("S9", "X"), elem("S9", "2"))
    assert [str(r) for r in solve_mul(elem("nat", 1), elem("nat", 5), bound=10)] == ["5"]
    for y in S9.elements:
        assert [r.value for r in solve_mul(elem(S9, S9.one), elem(S9, y))] == [y]


def test_mixed_semirings_rejected():
    with pytest.raises(MixedSemirings):
        elem("S9", "1") + elem("S", "1")
    with pytest.raises(KeyError):
        get("Q")


def test_rationals_exact():
    from fractions import Fraction
    x = RAT.parse("1/3")
    assert RAT.add(RAT.add(x, x), x) == Fraction(1)
    assert RAT.fmt(Fraction(2, 4)) == "1/2"
