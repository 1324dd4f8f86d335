"""One-way problems, quantum and classical protocols, advice examples."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadvice import groups as grp
from qadvice import protocols as pr
from qadvice.rng import stream


def brute_vc(matrix):
    m = np.asarray(matrix)
    best = 0
    for k in range(1, m.shape[1] + 1):
        found = False
        for cols in itertools.combinations(range(m.shape[1]), k):
            if len({tuple(r) for r in m[:, cols]}) == 2**k:
                found = True
                break
        if not found:
            break
        best = k
    return best


def test_equality_table():
    eq = pr.equality(2)
    assert np.array_equal(eq.table, np.eye(4, dtype=np.int8))
    assert eq.is_total and eq.n == 2 and eq.f(3, 3) == 1 and eq.f(3, 2) == 0


def test_coset_problem_structure():
    p = 5
    c = pr.coset_problem(p)
    t = c.table
    # each point lies on exactly p lines, each line holds exactly p points
    assert (t.sum(axis=1) == p).all() and (t.sum(axis=0) == p).all()
    x, y, a, b = 2, 3, 4, 0
    assert c.f(x * p + y, a * p + b) == int(y == (a * x + b) % p)
    with pytest.raises(pr.ProblemError):
        pr.coset_problem(4)


def test_promise_against_definition():
    n = 4
    prob = pr.promise_example(n)
    for x in range(2**n):
        for y in range(2**n):
            z = x & y
            first, second = bin(z >> 2).count("1"), bin(z & 3).count("1")
            if first >= 1 and second == 0:
                expect = 1
            elif first == 0 and second >= 1:
                expect = 0
            else:
                expect = None
            assert prob.f(x, y) == expect
    assert prob.f(12, 12) == 1 and prob.f(3, 3) == 0 and prob.f(15, 15) is None
    assert not prob.is_total


def test_parse_problem_ids():
    assert pr.parse_problem("eq:3").alice_inputs == 8
    assert pr.parse_problem("coset:3").bob_inputs == 9
    s = pr.parse_problem("subset:z5:0,1")
    assert s.f(0, 0) == 1 and s.f(0, 2) == 0
    m = pr.parse_problem("membership:z2^2:1")
    assert m.table.tolist() == [[1, 1, 0, 0]]
    for bad in ("foo:1", "eq:x", "subset:z5:0,1,2"):
        with pytest.raises(pr.ProblemError):
            pr.parse_problem(bad)


def test_from_function_and_validation():
    prob = pr.OneWayProblem.from_function("lt", 3, 3, lambda x, y: None if x == y else int(x < y))
    assert prob.domain_of(1) == [0, 2]
    assert len(prob.domain()) == 6
    with pytest.raises(pr.ProblemError):
        pr.OneWayProblem.from_table("bad", [[2]])
    with pytest.raises(pr.ProblemError):
        prob.row(3)


@pytest.mark.parametrize("spec", ["eq:1", "eq:2", "eq:3", "promise:4", "coset:3"])
def test_basis_protocol_is_exact(spec):
    prob = pr.parse_problem(spec)
    ev = pr.evaluate_protocol(pr.basis_protocol(prob), prob)
    assert ev.worst_case_error == pytest.approx(0, abs=1e-12)


def test_coin_protocol_error_half():
    prob = pr.equality(2)
    ev = pr.evaluate_protocol(pr.random_bit_protocol(prob), prob)
    assert np.allclose(ev.errors, 0.5)
    assert not ev.certifies_bounded_error()


@pytest.mark.parametrize("noise,r", [(0.2, 3), (0.3, 3), (0.1, 1)])
def test_boost_matches_binomial(noise, r):
    prob = pr.equality(1)
    base = pr.basis_protocol(prob, noise)
    e = pr.evaluate_protocol(base, prob).worst_case_error
    assert e == pytest.approx(noise / 2)
    boosted = pr.boost(base, r)
    assert boosted.L == r * base.L
    assert pr.evaluate_protocol(boosted, prob).worst_case_error == pytest.approx(pr.boosted_error(e, r), abs=1e-10)
    with pytest.raises(ValueError):
        pr.boost(base, 2)


def test_boosted_error_values():
    assert pr.boosted_error(0.1, 3) == pytest.approx(3 * 0.01 * 0.9 + 0.001)
    assert pr.boosted_error(0.5, 5) == pytest.approx(0.5)


def test_fingerprint_exact_vs_sampled():
    fp = pr.equality_fingerprint(8, 0.1, seed=3)
    assert all(fp.lo <= p <= fp.hi for p in fp.primes)
    assert fp.accept_probability(5, 5) == 1
    worst = max(fp.accept_probability(x, y) for x in range(0, 256, 7) for y in range(0, 256, 5) if x != y)
    assert worst <= Fraction(1, 10)
    # Monte Carlo over the prime draw agrees with the exact probability
    x, y = 0, 2 * 3 * 5 * 7 * 11 * 13
    fp2 = pr.FingerprintProtocol(2, 20, 9, lambda v: (v,))
    exact = fp2.accept_probability(x, y)
    assert exact == Fraction(6, 8)
    runs = [fp2.run(x, y, t) for t in range(4000)]
    assert abs(np.mean(runs) - float(exact)) < 4 * math.sqrt(0.75 * 0.25 / 4000)


def test_subset_fingerprint_candidates():
    inst = grp.SubsetInstance(grp.cyclic(11), (0, 1, 3))
    fp = pr.subset_fingerprint(inst, seed=1)
    g = inst.group
    for y in range(11):
        assert set(fp.candidates(y)) == {z for z in g.elements if g.op(z, y) in inst.S}
    prob = pr.subset_problem(inst)
    for x in range(11):
        for y in range(11):
            if prob.f(x, y) == 1:
                assert fp.accept_probability(x, y) == 1
            else:
                assert fp.accept_probability(x, y) < Fraction(1, 3)


@pytest.mark.parametrize("spec", ["z2^3", "z4xz2", "z6", "z2xz3"])
def test_membership_advice(spec):
    g = grp.parse_group(spec)
    for h in pr.all_subgroups(g):
        for x in g.elements:
            expect = 1.0 if x in h else 0.5
            assert pr.group_membership_advice(g, h, x) == pytest.approx(expect, abs=1e-9)


def test_membership_advice_nonabelian():
    from small_groups import all_groups_up_to_12

    s3 = next(g for g in all_groups_up_to_12() if g.name == "S3")
    for h in pr.all_subgroups(s3):
        for x in s3.elements:
            assert pr.group_membership_advice(s3, h, x) == pytest.approx(1.0 if x in h else 0.5, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.data())
def test_pqp_success(n, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n))
    x = data.draw(st.integers(0, 2**n - 1))
    assert pr.pqp_advice(bits, x) == Fraction(1, 2) + Fraction(1, 2 ** (n + 1))


def test_pqp_rejects_bad_length():
    with pytest.raises(pr.ProblemError):
        pr.pqp_advice([0, 1, 1], 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4), st.integers(1, 3))
def test_vc_dimension_brute_force(seed, n, m):
    t = stream(seed).integers(0, 2, size=(2**n, 2**m))
    assert pr.vc_dimension(t) == brute_vc(t)


def test_vc_known_values():
    assert pr.vc_dimension(np.eye(8, dtype=np.int8)) == 1
    # all 3-bit rows shatter all three columns
    full = np.array(list(itertools.product((0, 1), repeat=3)))
    assert pr.vc_dimension(full) == 3
    assert pr.vc_dimension(np.zeros((4, 4))) == 0


def test_diagnostics_equality():
    cm, reports = pr.matrix_diagnostics(pr.equality(3))
    assert (cm.rows, cm.cols, cm.vc) == (8, 8, 1)
    assert cm.sauer_holds
    d1 = [r for r in reports if r.measure == "D1"]
    assert [r.value for r in d1] == [3, 3]
    assert {r.kind for r in reports} == {"upper", "lower"}
    with pytest.raises(pr.ProblemError):
        pr.matrix_diagnostics(pr.promise_example(4))


def test_bound_report_validation():
    with pytest.raises(ValueError):
        pr.BoundReport("p", "D1", "upper", -1, "x")
    with pytest.raises(ValueError):
        pr.BoundReport("p", "D1", "sideways", 1, "x")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 6))
def test_sauer_lemma_random(seed, n, m):
    prob = pr.random_total_problem(n, m, stream(seed))
    cm, _ = pr.matrix_diagnostics(prob)
    assert cm.rows <= sum(math.comb(cm.cols, i) for i in range(cm.vc + 1))
    assert cm.sauer_holds
