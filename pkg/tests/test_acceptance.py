"""End-to-end acceptance checks; each prints one PASS/FAIL line."""
import io
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction


from pevbar.algebras import cyclic, g_set, monoid_action, naturals_add, semilattice, terminal
from pevbar.bar import bundled_law_suite, segal_check
from pevbar.cli import run
from pevbar.counterexamples import NONUNIQUENESS, golden_fillers
from pevbar.monads import (COMMUTATIVE_MONOID, COMMUTATIVE_SEMIGROUP, DISTRIBUTION, IDENTITY,
                           MONOID, SEMIGROUP, boolean_monoid, cyclic_group, trivial_monoid)
from pevbar.pev import check_indiscrete, conditional_product, marginals, pe_relation, pushforward
from pevbar.reports import set_violation_cap, DEFAULT_VIOLATION_CAP
from pevbar.squares import (FiniteSquare, brute_force_classify, check_inner_span_complete,
                            check_split, check_stiff, classify_square)
from pevbar.terms import Bounds

CMON = COMMUTATIVE_MONOID


@contextmanager
def criterion(capsys, number, title):
    status = "FAIL"
    t0 = time.perf_counter()
    try:
        yield
        status = "PASS"
    finally:
        with capsys.disabled():
            print(f"\n[acceptance {number}] {status} ({time.perf_counter() - t0:.1f}s): {title}")


def verify_json(which):
    out = io.StringIO()
    code = run(["verify", which, "--format", "json"], out, io.StringIO())
    return code, json.loads(out.getvalue())


def claims(doc):
    return {c["description"]: c for c in doc["details"]["claims"]}


def test_1_nontransitivity(capsys):
    with criterion(capsys, 1, "no partial evaluation {1:*} -> {X:*} over S9; both steps exist"):
        t0 = time.perf_counter()
        code, doc = verify_json("nontransitivity")
        assert code == 0 and doc["status"] == "pass"
        c = claims(doc)
        assert c["{1:{},1:{1:*}} witnesses {1:*} -> {2:*}"]["status"] == "pass"
        assert c["{X:{X:*}} witnesses {2:*} -> {X:*}"]["status"] == "pass"
        full = c["no witness {1:*} -> {X:*} among all 9^9 elements of TTA"]["evidence"]
        assert full["witnesses"] == 0 and full["covered"] == 9 ** 9 == full["space"]
        assert time.perf_counter() - t0 < 120


def test_2_nonuniqueness(capsys):
    with criterion(capsys, 2, "two fillers of one inner 2-horn with different d1 faces"):
        t0 = time.perf_counter()
        code, doc = verify_json("nonuniqueness")
        assert code == 0 and doc["status"] == "pass"
        c = claims(doc)
        listed = c["complete filler search returns delta and delta'"]["evidence"]["fillers"]
        delta = str(CMON.parse(NONUNIQUENESS["delta"], 3))
        delta2 = str(CMON.parse(NONUNIQUENESS["delta_prime"], 3))
        assert delta in listed and delta2 in listed and listed == golden_fillers()
        d1 = c["the d1 faces of delta and delta' differ"]["evidence"]
        assert d1["d1"] != d1["d1_prime"]
        assert time.perf_counter() - t0 < 5


def test_3_horns(capsys):
    with criterion(capsys, 3, "two compatible inner 3-horns without fillers or missing faces"):
        t0 = time.perf_counter()
        code, doc = verify_json("horns")
        assert code == 0 and doc["status"] == "pass"
        c = claims(doc)
        for k in (1, 2):
            reorder = [d for d in c if d.startswith(f"horn {k}") and "reordering" in d]
            assert len(reorder) == 1 and c[reorder[0]]["status"] == "pass"
            missing = [d for d in c if d.startswith(f"horn {k}: no 2-simplex")]
            assert len(missing) == 1 and c[missing[0]]["status"] == "pass"
        assert time.perf_counter() - t0 < 30


def test_4_law_suites(capsys):
    with criterion(capsys, 4, "monad, algebra and simplicial laws on every bundled instance"):
        t0 = time.perf_counter()
        results = bundled_law_suite(width=3, max_level=3)
        failed = [(label, r.check) for label, reps in results for r in reps if not r.passed]
        assert not failed, failed
        checks = {r.check for _, reps in results for r in reps}
        assert checks == {"monad_laws", "algebra_laws", "simplicial_identities"}
        assert len(results) >= 12
        assert time.perf_counter() - t0 < 60


def test_5_square_properties(capsys):
    with criterion(capsys, 5, "inner span completeness, stiffness and splitness verdicts"):
        two = ("0", "1")
        isc = check_inner_span_complete(cyclic(2), 2, Bounds(max_width=3, carrier_subset=two))
        assert isc.passed
        isc3 = check_inner_span_complete(cyclic(2), 3, Bounds(max_width=2, carrier_subset=two, max_nodes=5))
        assert isc3.passed
        dist = check_inner_span_complete(semilattice(), 2,
                                         Bounds(max_width=3, carrier_subset=("a", "b"), coeff_bound=3))
        assert dist.passed and dist.details["squares"][0]["pairs"] > 0
        deep = Bounds(max_width=3, carrier_subset=two, max_nodes=6)
        assert check_stiff(cyclic(2), 3, deep).passed
        assert check_stiff(terminal(CMON), 3, Bounds(max_width=3, max_nodes=6)).passed
        assert check_split(cyclic(2, COMMUTATIVE_SEMIGROUP), 3, deep).passed
        set_violation_cap(None)
        try:
            bad = check_split(terminal(CMON), 2, Bounds(max_width=2))
        finally:
            set_violation_cap(DEFAULT_VIOLATION_CAP)
        assert not bad.passed
        # a degenerate face hides a group next to an empty group: {{*},{}} flattens to {*}
        assert "{{{*},{}}}" in {v["term"] for v in bad.violations}


def test_6_segal(capsys):
    with criterion(capsys, 6, "Segal maps: two bijective cases and one non-injective case"):
        mono = segal_check(terminal(MONOID), 2, Bounds(max_width=3))
        assert mono.details["injective"] and mono.details["surjective"]
        act = segal_check(monoid_action(cyclic_group(2)), 2, Bounds(max_width=3, carrier_subset=("0", "1")))
        assert act.details["injective"] and act.details["surjective"]
        alpha = CMON.parse(NONUNIQUENESS["alpha"], 2)
        beta = CMON.parse(NONUNIQUENESS["beta"], 2)
        nat = segal_check(naturals_add(), 2, Bounds(carrier_subset=("1", "2", "3")), spines=[(alpha, beta)])
        assert not nat.details["injective"]
        _, _, d, d2 = nat.details["injectivity_examples"][0]
        assert sorted([d, d2]) == sorted(golden_fillers())


def _random_coupling(rng):
    e = [f"e{k}" for k in range(rng.randint(1, 3))]
    m = {f"b{k}": rng.choice(e) for k in range(rng.randint(1, 4))}
    n = {f"c{k}": rng.choice(e) for k in range(rng.randint(1, 4))}
    for ev in e:     # every fibre of n over the image of m must be inhabited
        if ev in m.values() and ev not in n.values():
            n[f"c{len(n)}"] = ev
    p = {b: Fraction(rng.randint(1, 9)) for b in m}
    total = sum(p.values())
    p = {b: w / total for b, w in p.items()}
    r = pushforward(p, m)
    q = {}
    for ev, mass in r.items():
        fibre = sorted(c for c in n if n[c] == ev)
        ws = [Fraction(rng.randint(1, 9)) for _ in fibre]
        for c, w in zip(fibre, ws):
            q[c] = mass * w / sum(ws)
    return p, q, m, {c: n[c] for c in q}


def test_7_conditional_products(capsys):
    with criterion(capsys, 7, "200 conditional products reproduce both marginals exactly"):
        rng = random.Random(20261016)
        for _ in range(200):
            p, q, m, n = _random_coupling(rng)
            s = conditional_product(p, q, m, n)
            left, right = marginals(s)
            assert left == p and right == q
            assert sum(s.values()) == 1
            assert all(isinstance(w, Fraction) for w in s.values())


def _random_square(rng):
    D = [f"d{k}" for k in range(rng.randint(1, 4))]
    B = [f"b{k}" for k in range(rng.randint(1, 4))]
    C = [f"c{k}" for k in range(rng.randint(1, 4))]
    m = {b: rng.choice(D) for b in B}
    n = {c: rng.choice(D) for c in C}
    pb = [(b, c) for b in B for c in C if m[b] == n[c]]
    picks = [rng.choice(pb) for _ in range(rng.randint(0, 4))] if pb else []
    A = [f"a{k}" for k in range(len(picks))]
    return FiniteSquare(A, B, C, D, {a: p[0] for a, p in zip(A, picks)},
                        {a: p[1] for a, p in zip(A, picks)}, m, n)


def test_8_square_oracle(capsys):
    with criterion(capsys, 8, "classify_square agrees with brute force on 1000 random squares"):
        rng = random.Random(8)
        verdicts = set()
        for _ in range(1000):
            sq = _random_square(rng)
            rep = classify_square(sq)
            assert rep.verdict == brute_force_classify(sq)
            if rep.details["monic_leg"] and rep.is_weak:
                assert rep.is_strong
            verdicts.add(rep.verdict)
        assert verdicts == {"strong", "weak_not_strong", "not_weak"}


BUNDLED_ALGEBRAS = [
    (terminal(IDENTITY), Bounds(max_width=1)),
    (g_set(cyclic_group(2)), Bounds(max_width=3, carrier_subset=("0", "1"))),
    (g_set(cyclic_group(3)), Bounds(max_width=3, carrier_subset=("0", "1", "2"))),
    (monoid_action(trivial_monoid()), Bounds(max_width=1, carrier_subset=trivial_monoid().elements)),
    (monoid_action(boolean_monoid()), Bounds(max_width=1, carrier_subset=boolean_monoid().elements)),
    (terminal(CMON), Bounds(max_width=3)),
    (cyclic(2), Bounds(max_width=3, carrier_subset=("0", "1"))),
    (naturals_add(), Bounds(max_width=3, carrier_subset=("0", "1", "2"))),
    (terminal(MONOID), Bounds(max_width=3)),
    (cyclic(2, MONOID), Bounds(max_width=2, carrier_subset=("0", "1"))),
    (terminal(SEMIGROUP), Bounds(max_width=3)),
    (cyclic(2, COMMUTATIVE_SEMIGROUP), Bounds(max_width=3, carrier_subset=("0", "1"))),
    (terminal(DISTRIBUTION), Bounds(max_width=2, coeff_bound=2)),
    (semilattice(), Bounds(max_width=2, carrier_subset=("a", "b"), coeff_bound=2)),
]


def test_9_indiscreteness(capsys):
    with criterion(capsys, 9, "group actions indiscrete, terminal cmon not, equivalence iff indiscrete"):
        for k in (2, 3):
            alg = g_set(cyclic_group(k))
            rep = check_indiscrete(alg, Bounds(max_width=3, carrier_subset=alg.carrier))
            assert rep.passed and rep.details["unique_lifts"]
        set_violation_cap(None)
        try:
            bad = check_indiscrete(terminal(CMON), Bounds(max_width=3))
        finally:
            set_violation_cap(DEFAULT_VIOLATION_CAP)
        assert not bad.passed and "({*}, {})" in {v["term"] for v in bad.violations}
        for alg, bounds in BUNDLED_ALGEBRAS:
            indiscrete = check_indiscrete(alg, bounds).passed
            equivalence = pe_relation(alg, bounds).is_equivalence().passed
            assert indiscrete == equivalence, alg.name
