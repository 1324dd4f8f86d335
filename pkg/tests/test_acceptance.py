"""Acceptance criteria 1-10, each at its stated tolerance and time limit.

Every test prints one ``[criterion N] PASS|FAIL`` line to the terminal,
bypassing output capture.
"""

import io
import json
import math
import time
from contextlib import redirect_stdout
from fractions import Fraction

import numpy as np
import pytest

from qadvice import cli
from qadvice import groups as grp
from qadvice import lowerbounds as lb
from qadvice import polymethod as pm
from qadvice import protocols as pr
from qadvice import qcore as qc
from qadvice import reconstruct as rc
from qadvice.experiments import floor_instance, random_rational_poly, random_small_protocol, random_subset_instance
from qadvice.rng import stream
from small_groups import all_groups_up_to_12

SEED = 20240601


@pytest.fixture
def report(capsys):
    """``report(n, ok, seconds, limit, detail)`` prints the verdict line and
    returns whether both the check and the time limit passed."""

    def emit(n, ok, seconds, limit, detail=""):
        passed = bool(ok) and (limit is None or seconds < limit)
        budget = f" < {limit:g}s" if limit is not None else ""
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if passed else 'FAIL'} ({seconds:.1f}s{budget}) {detail}")
        return passed

    return emit


def test_criterion_1_good_as_new(report):
    start = time.perf_counter()
    worst_gap, worst_mid, pure_count = -1.0, 0.0, 0
    for i in range(1000):
        rng = stream(SEED, i)
        dim = 2 + i % 7
        pure = i % 2 == 0
        rho = qc.random_pure_state(dim, rng).density() if pure else qc.random_density_matrix(dim, rng)
        meas = qc.random_measurement(dim, rng, ancilla_qubits=int(rng.integers(0, 3)))
        res = qc.measure_and_recover(rho, meas)
        worst_gap = max(worst_gap, res.distance - math.sqrt(res.epsilon))
        if pure:
            pure_count += 1
            worst_mid = max(worst_mid, abs(res.intermediate_distance - math.sqrt(res.epsilon * (1 - res.epsilon))))
    elapsed = time.perf_counter() - start
    ok = worst_gap <= 1e-8 and worst_mid <= 1e-8
    assert report(1, ok, elapsed, 30, f"max(dist - sqrt(eps)) = {worst_gap:.3e}, intermediate err {worst_mid:.1e} on {pure_count} pure")


def test_criterion_2_reconstruction(report):
    start = time.perf_counter()
    cases = [
        ("eq:1", 0.005, 3),
        ("eq:2", 0.005, 3),
        ("eq:3", 0.005, 3),
        ("promise:4", 0.0, 1),  # already exact; three copies would need 12 qubits
    ]
    lines, ok = [], True
    for spec, noise, r in cases:
        prob = pr.parse_problem(spec)
        proto = pr.boost(pr.basis_protocol(prob, noise), r)
        max_T = 0
        for x in range(prob.alice_inputs):
            adv = rc.simulate_message(proto, prob, x)  # enforces the error budget
            max_T = max(max_T, adv.T)
            ok &= adv.T <= adv.K
            ok &= all(rc.bob_decode(adv, proto, y) == prob.f(x, y) for y in prob.domain_of(x))
        lines.append(f"{spec}: K={proto.L} T={max_T}")
    elapsed = time.perf_counter() - start
    assert report(2, ok, elapsed, 120, "; ".join(lines))


def test_criterion_3_coset(report):
    start = time.perf_counter()
    ok = True
    for p in (2, 3, 5, 7, 11, 101):
        ok &= lb.coset_delta_exact(p) == Fraction(1, p) - Fraction(1, p * p)
        ok &= lb.coset_prob_f0(p) == 1 - Fraction(1, p)
    elapsed = time.perf_counter() - start
    assert report(3, ok, elapsed, 60, "delta = 1/p - 1/p^2 and Pr[f=0] = 1 - 1/p for p in 2,3,5,7,11,101")


def test_criterion_4_subset(report):
    start = time.perf_counter()
    ok, orders = True, []
    for i in range(50):
        inst = random_subset_instance(i, SEED)
        assert inst.group.order <= 256
        orders.append(inst.group.order)
        ok &= lb.subset_delta(inst).equality_verdict
    z5 = lb.subset_delta(grp.SubsetInstance(grp.cyclic(5), (0, 1)))
    ok &= z5.delta == Fraction(2, 5) == z5.pair_delta
    elapsed = time.perf_counter() - start
    assert report(4, ok, elapsed, 60, f"50 instances, |G| up to {max(orders)}; Z5/{{0,1}} gives {z5.delta}")


def test_criterion_5_random_subset(report):
    start = time.perf_counter()
    groups = all_groups_up_to_12()
    checked = 0
    ok = lb.randset_expectation(grp.cyclic(3), 2) == Fraction(1, 24)
    for g in groups:
        for K in range(1, min(4, g.order) + 1):
            ok &= lb.randset_expectation(g, K) == lb.randset_enumeration(g, K)
            checked += 1
    rep = lb.randset_check(grp.cyclic(101), 10, 10_000, seed=SEED)
    ok &= rep.mean_within_4se
    elapsed = time.perf_counter() - start
    z = (rep.empirical_mean - float(rep.exact_expectation)) / rep.standard_error
    assert report(
        5, ok, elapsed, 120, f"{checked} (group, K) pairs over {len(groups)} groups exact; Z101 K=10 z = {z:+.2f}"
    )


def test_criterion_6_certificate(report):
    start = time.perf_counter()
    reps = []
    for p in (2, 3):
        family, B = lb.coset_family(p)
        reps.append(lb.vardist_certificate(pr.coset_basis_protocol(p), family, B))
    reps += [lb.vardist_certificate(*random_small_protocol(i, SEED)) for i in range(20)]
    ok = all(r.expected_tdist <= r.bound + 1e-8 for r in reps)
    slack = max(r.expected_tdist - r.bound for r in reps)
    elapsed = time.perf_counter() - start
    assert report(6, ok, elapsed, 120, f"{len(reps)} instances, max(E tdist - bound) = {slack:.3f}")


def test_criterion_7_polynomial_method(report):
    start = time.perf_counter()
    algs = pm.constructed_algorithms()
    ok = len(algs) >= 10 and all(a.N <= 8 for a in algs)
    for alg in algs:
        ok &= pm.acceptance_polynomial(alg).degree <= 2 * alg.T
    for d in range(21):
        for m in range(6):
            ok &= pm.chebyshev(d).derivative(m)(Fraction(1)) == pm.chebyshev_derivative_at_one(d, m)
    va_checks = 0
    for i in range(200):
        rng = stream(SEED, i)
        d, N = int(rng.integers(1, 9)), int(rng.integers(1, 11))
        p = random_rational_poly(rng, d)
        r0 = pm.sup_norm(p, 0, N)
        for m in range(1, d + 1):
            _, va = pm.markov_bounds(r0, 0, N, d, m)
            ok &= float(pm.sup_norm(p, 0, N, m)) <= va * (1 + 1e-12)
            va_checks += 1
    for i in range(100):
        p, K, delta, N = floor_instance(i, SEED)
        ok &= pm.derivative_floor_check(p, K, delta, N).verdict
    for d in range(1, 11):
        N = 2 * d + 3
        t = pm.rescaled_chebyshev(d, N)
        aa, _ = pm.markov_bounds(pm.sup_norm(t, 0, N), 0, N, d, 1, r1=pm.sup_norm(t, 0, N, 1))
        ok &= aa == d
    elapsed = time.perf_counter() - start
    assert report(7, ok, elapsed, 180, f"{len(algs)} algorithms, {va_checks} V.A. checks, 100 floor checks, A.A. equality d=1..10")


def test_criterion_8_direct_product(report):
    start = time.perf_counter()
    ok, parts = True, []
    for N, K in ((64, 2), (256, 2), (256, 4)):
        rep = pm.grover_find_all(N, K, [1] * K, seed=SEED, trials=10_000)
        ok &= rep.empirical <= rep.bound + 4 * rep.standard_error
        parts.append(f"({N},{K}) {rep.empirical:.4f} <= {rep.bound:.3g}")
    small = pm.grover_find_all(4, 1, [1], seed=SEED, trials=10_000)
    ok &= small.empirical == 1.0 and small.bound == 1.0
    parts.append(f"(4,1) {small.empirical}")
    elapsed = time.perf_counter() - start
    assert report(8, ok, elapsed, 300, "; ".join(parts))


def test_criterion_9_protocols(report):
    start = time.perf_counter()
    ok = True
    for spec in ("z2^3", "z4xz2"):
        g = grp.parse_group(spec)
        for h in pr.all_subgroups(g):
            for x in g.elements:
                ok &= abs(pr.group_membership_advice(g, h, x) - (1.0 if x in h else 0.5)) <= 1e-9
    for n in range(1, 7):
        for t in range(3):
            table = stream(SEED, 100 * n + t).integers(0, 2, size=2**n)
            ok &= all(pr.pqp_advice(table, x) == Fraction(1, 2) + Fraction(1, 2 ** (n + 1)) for x in range(2**n))
    problems = [pr.equality(n) for n in range(1, 7)] + [pr.coset_problem(p) for p in (2, 3, 5, 7)]
    for i in range(50):
        rng = stream(SEED, i)
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, min(10, 16 - n) + 1))
        problems.append(pr.random_total_problem(n, m, rng))
    for prob in problems:
        cm, _ = pr.matrix_diagnostics(prob)
        ok &= cm.sauer_holds and cm.vc <= math.log2(cm.rows) + 1e-12
    elapsed = time.perf_counter() - start
    assert report(9, ok, elapsed, 60, f"membership, pqp n<=6, Sauer on {len(problems)} matrices")


DETERMINISM_RUNS = [
    ["goodasnew", "--trials", "200"],
    ["reconstruct", "--problem", "promise:4"],
    ["coset-delta", "--p", "11"],
    ["subset-delta"],
    ["randset", "--group", "z4xz3", "--K", "4", "--trials", "2000"],
    ["vardist-check"],
    ["membership", "--group", "z4xz2"],
    ["pqp", "--n", "5"],
    ["diagnostics", "--problems", "eq:3;coset:3", "--random", "10"],
    ["cheb"],
    ["markov", "--trials", "50", "--floor-trials", "20"],
    ["degree-bound", "--N", "64", "--K", "3", "--delta", "0.25", "--r0", "1.5"],
    ["direct-product", "--N", "10000", "--K", "2", "--T", "10"],
    ["grover-all", "--N", "64", "--K", "2", "--schedule", "1,1", "--trials", "2000"],
    ["fingerprint", "--kind", "subset", "--group", "z13", "--set", "0,2,5", "--trials", "1000"],
]


def _cli_bytes(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue().encode()


def test_criterion_10_determinism(report):
    start = time.perf_counter()
    commands = {run[0] for run in DETERMINISM_RUNS}
    ok = commands == set(cli.experiments.RUNNERS)
    for run in DETERMINISM_RUNS:
        argv = run + ["--seed", str(SEED)]
        c1, first = _cli_bytes(argv)
        c2, second = _cli_bytes(argv)
        c3, parallel = _cli_bytes(argv + ["--jobs", "2"])
        json.loads(first)
        ok &= c1 == c2 == c3 == 0 and first == second == parallel
    elapsed = time.perf_counter() - start
    assert report(10, ok, elapsed, None, f"{len(DETERMINISM_RUNS)} subcommands byte-identical across reruns and --jobs 2")
