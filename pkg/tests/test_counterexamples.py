import numpy as np
import pytest

from pevbar.counterexamples import (TA_COEFFS, _tau_term, s9_exhaustive, verify,
                                    verify_nontransitivity, verify_nonuniqueness,
                                    verify_unfillable_horns)
from pevbar.semirings import S9

# S9 written independently: a + bX with X^2 = 2 and both coordinates capped at 2,
# element (a, b) encoded as 3a + b
ELEMS = [(a, b) for a in range(3) for b in range(3)]


def _cap(v):
    return min(v, 2)


ADD = np.array([[3 * _cap(a + c) + _cap(b + d) for (c, d) in ELEMS] for (a, b) in ELEMS], dtype=np.int8)
MUL = np.array([[3 * _cap(a * c + 2 * b * d) + _cap(a * d + b * c) for (c, d) in ELEMS]
                for (a, b) in ELEMS], dtype=np.int8)


def _numpy_count(mu_target: int, te_target: int) -> int:
    """Unpruned count of all 9^9 assignments TA -> S9 with the given mu and Te sums.

    The last six coordinates are materialised as one array of 9^6 states; the
    first three are looped over, merging equal partial sums by multiplicity.
    """
    coeffs = [3 * a + b for a, b in TA_COEFFS]
    grid = np.indices((9,) * 6).reshape(6, -1).astype(np.int8)
    mu_tail = np.zeros(grid.shape[1], dtype=np.int8)
    te_tail = np.zeros(grid.shape[1], dtype=np.int8)
    for k in range(6):
        mu_tail = ADD[mu_tail, MUL[grid[k], coeffs[3 + k]]]
        te_tail = ADD[te_tail, grid[k]]
    heads = {}
    for v0 in range(9):
        for v1 in range(9):
            for v2 in range(9):
                mu = ADD[ADD[MUL[v0, coeffs[0]], MUL[v1, coeffs[1]]], MUL[v2, coeffs[2]]]
                te = ADD[ADD[v0, v1], v2]
                heads[(int(mu), int(te))] = heads.get((int(mu), int(te)), 0) + 1
    total = 0
    for (mu, te), mult in heads.items():
        hits = (ADD[mu, mu_tail] == mu_target) & (ADD[te, te_tail] == te_target)
        total += mult * int(hits.sum())
    return total


def test_tables_agree_with_semiring():
    for i, x in enumerate(ELEMS):
        for j, y in enumerate(ELEMS):
            assert ELEMS[ADD[i, j]] == S9.add(x, y)
            assert ELEMS[MUL[i, j]] == S9.mul(x, y)


@pytest.mark.parametrize("src,dst,expected", [("1", "X", 0), ("1", "2", 2), ("2", "X", 2)])
def test_numpy_oracle_matches_dfs(src, dst, expected):
    a, b = S9.parse(src), S9.parse(dst)
    found, covered = s9_exhaustive(a, b)
    assert covered == 9 ** 9
    count = _numpy_count(3 * a[0] + a[1], 3 * b[0] + b[1])
    assert count == len(found) == expected


def test_nontransitivity():
    rep = verify_nontransitivity()
    assert rep.passed, rep.to_text()
    assert rep.claims[2].evidence["covered"] == 387420489


def test_dfs_witnesses_are_terms():
    found, _ = s9_exhaustive(S9.parse("1"), S9.parse("2"))
    assert "{1:{1:*},1:{}}" in {str(_tau_term(v)) for v in found}


def test_jobs_do_not_change_results():
    a = verify("nontransitivity", jobs=1)[0]
    b = verify("nontransitivity", jobs=2)[0]
    assert a.to_json(timing=False) == b.to_json(timing=False)


def test_nonuniqueness():
    rep = verify_nonuniqueness()
    assert rep.passed, rep.to_text()
    d1 = rep.claims[3].evidence
    assert d1["d1"] != d1["d1_prime"]


def test_horns():
    rep = verify_unfillable_horns()
    assert rep.passed, rep.to_text()
    assert len(rep.claims) == 12


def test_verify_all_is_deterministic():
    first = [r.to_json(timing=False) for r in verify("all")]
    second = [r.to_json(timing=False) for r in verify("all")]
    assert first == second and len(first) == 3


def test_outer_faces_of_the_two_fillers():
    rep = verify_nonuniqueness()
    ev = rep.claims[3].evidence
    assert {ev["d1"], ev["d1_prime"]} == {"{{1,3},{2,2,3,3}}", "{{1,3,3,3},{2,2}}"}
