"""Reproducible experiments behind the command-line interface.

Each runner takes a parameter dict, a seed and a worker count and returns a
results dict with ``summary``, ``records`` (one per instance) and
``verdict``.  Trial ``i`` always draws from ``stream(seed, i)``, and parallel
chunks are reassembled in trial order, so results do not depend on ``jobs``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import groups as grp
from . import lowerbounds as lb
from . import protocols as pr
from . import reconstruct as rc
from .polymethod import markov as mk
from .polymethod import poly as pl
from .polymethod import query as qy
from .qcore import measure_and_recover, random_density_matrix, random_measurement, random_pure_state
from .rng import sample_without_replacement, stream
from .serialize import ARTIFACT_VERSION, rational, to_plain


@dataclass(frozen=True)
class ExperimentReport:
    experiment: str
    params: dict
    seed: int
    results: dict
    artifact_version: str = ARTIFACT_VERSION

    @property
    def verdict(self) -> bool:
        return bool(self.results.get("verdict", True))

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "params": to_plain(self.params),
            "seed": self.seed,
            "results": to_plain(self.results),
            "artifact_version": self.artifact_version,
        }


def _chunks(total: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, min(jobs, total))
    step = math.ceil(total / jobs) if total else 1
    return [(a, min(total, a + step)) for a in range(0, total, step)]


def parallel_map(fn, args_list: list, jobs: int) -> list:
    """Order-preserving map; serial when ``jobs <= 1``."""
    if jobs <= 1 or len(args_list) <= 1:
        return [fn(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*args_list)))


def _trials(fn, total: int, jobs: int, *args) -> list:
    parts = parallel_map(_run_range, [(fn, a, b, *args) for a, b in _chunks(total, jobs)], jobs)
    return [r for part in parts for r in part]


def _run_range(fn, start: int, stop: int, *args) -> list:
    return [fn(i, *args) for i in range(start, stop)]


# ---------------------------------------------------------------------------
# good-as-new


def goodasnew_instance(i: int, seed: int, dim: int | None, ancillas: int | None) -> dict:
    rng = stream(seed, i)
    d = int(rng.integers(2, 9)) if dim is None else dim
    a = int(rng.integers(0, 3)) if ancillas is None else ancillas
    pure = i % 2 == 0
    rho = random_pure_state(d, rng).density() if pure else random_density_matrix(d, rng)
    res = measure_and_recover(rho, random_measurement(d, rng, a))
    intermediate_error = abs(res.intermediate_distance - math.sqrt(res.epsilon * (1 - res.epsilon)))
    return {
        "trial": i,
        "dim": d,
        "ancillas": a,
        "pure": pure,
        "epsilon": res.epsilon,
        "distance": res.distance,
        "bound": res.bound,
        "violation": res.distance - res.bound,
        "intermediate_error": intermediate_error,
    }


def run_goodasnew(params: dict, seed: int, jobs: int = 1) -> dict:
    trials = int(params.get("trials", 1000))
    records = _trials(goodasnew_instance, trials, jobs, seed, params.get("dim"), params.get("ancillas"))
    max_violation = max(r["violation"] for r in records)
    pure_err = max((r["intermediate_error"] for r in records if r["pure"]), default=0.0)
    verdict = max_violation <= 1e-8 and pure_err <= 1e-8
    return {
        "summary": {
            "instances": trials,
            "max_violation": max_violation,
            "violations": sum(r["violation"] > 1e-8 for r in records),
            "max_intermediate_error": pure_err,
        },
        "max_violation": max_violation,
        "records": records,
        "verdict": verdict,
    }


# ---------------------------------------------------------------------------
# reconstruction


def reconstruction_protocol(problem: pr.OneWayProblem, noise: float = 0.0, boost: int = 1) -> pr.QuantumOneWayProtocol:
    return pr.boost(pr.basis_protocol(problem, noise), boost)


def run_reconstruct(params: dict, seed: int, jobs: int = 1) -> dict:
    problem = pr.parse_problem(params["problem"])
    protocol = reconstruction_protocol(problem, float(params.get("noise", 0.0)), int(params.get("boost", 1)))
    records = parallel_map(_reconstruct_one, [(params, x) for x in range(problem.alice_inputs)], jobs)
    all_correct = all(r["correct"] for r in records)
    max_T = max(r["T"] for r in records)
    return {
        "K": protocol.L,
        "T": max_T,
        "all_correct": all_correct,
        "eta_budget": rc.error_budget(protocol.L),
        "worst_error": max(r["worst_error"] for r in records),
        "records": records,
        "verdict": all_correct and max_T <= protocol.L,
    }


def _reconstruct_one(params: dict, x: int) -> dict:
    problem = pr.parse_problem(params["problem"])
    protocol = reconstruction_protocol(problem, float(params.get("noise", 0.0)), int(params.get("boost", 1)))
    worst = rc.check_error_budget(protocol, problem, x)
    advice = rc.simulate_message(protocol, problem, x, check_budget=False)
    correct = all(rc.bob_decode(advice, protocol, y) == problem.f(x, y) for y in problem.domain_of(x))
    return {
        "x": x,
        "T": advice.T,
        "advice": advice.to_json(),
        "ties": list(advice.ties),
        "worst_error": worst,
        "correct": correct,
    }


# ---------------------------------------------------------------------------
# trace-distance method


def run_coset_delta(params: dict, seed: int, jobs: int = 1) -> dict:
    p = int(params["p"])
    delta = lb.coset_delta_exact(p)
    closed = Fraction(1, p) - Fraction(1, p * p)
    f0 = lb.coset_prob_f0(p)
    return {
        "p": p,
        "delta": delta,
        "closed_form": closed,
        "prob_f0": f0,
        "required_L": lb.required_L(float(params.get("beta", 1 / 3)), delta),
        "records": [{"p": p, "delta": delta, "closed_form": closed, "prob_f0": f0}],
        "verdict": delta == closed and f0 == 1 - Fraction(1, p),
    }


def random_subset_instance(i: int, seed: int, max_order: int = 256) -> grp.SubsetInstance:
    rng = stream(seed, i)
    while True:
        moduli = [int(m) for m in rng.integers(2, 9, size=int(rng.integers(1, 4)))]
        if math.prod(moduli) <= max_order:
            break
    g = grp.direct_product(*moduli) if len(moduli) > 1 else grp.cyclic(moduli[0])
    k = int(rng.integers(1, g.order // 2 + 1))
    return grp.SubsetInstance(g, tuple(sample_without_replacement(rng, g.order, k)))


def _subset_record(inst: grp.SubsetInstance) -> dict:
    sd = lb.subset_delta(inst)
    cosets, q = grp.cosets_and_periodicity(inst.group, inst.S)
    return {
        "group": inst.group.name,
        "S": list(inst.S),
        "delta": sd.delta,
        "pair_delta": sd.pair_delta,
        "equal": sd.equality_verdict,
        "periodicity": q,
        "is_subgroup": cosets is not None,
    }


def _subset_trial(i: int, seed: int) -> dict:
    return _subset_record(random_subset_instance(i, seed))


def run_subset_delta(params: dict, seed: int, jobs: int = 1) -> dict:
    if params.get("group"):
        g = grp.parse_group(params["group"])
        records = [_subset_record(grp.SubsetInstance(g, pr.parse_int_list(params["set"])))]
    else:
        records = _trials(_subset_trial, int(params.get("instances", 50)), jobs, seed)
    return {
        "delta": records[0]["delta"],
        "records": records,
        "verdict": all(r["equal"] for r in records),
    }


def _randset_trial(i: int, g: grp.FiniteGroup, K: int, seed: int) -> tuple[float, float]:
    return lb.randset_trial(g, K, seed, i)


def run_randset(params: dict, seed: int, jobs: int = 1) -> dict:
    g = grp.parse_group(params["group"])
    K = int(params["K"])
    trials = int(params.get("trials", 10_000))
    exact = lb.randset_expectation(g, K)
    samples = _trials(_randset_trial, trials, jobs, g, K, seed)
    vals = np.array([s[0] for s in samples])
    deltas = np.array([s[1] for s in samples])
    report = lb.RandsetReport(
        group=g.name,
        K=K,
        trials=trials,
        seed=seed,
        exact_expectation=exact,
        printed_expectation=lb.randset_expectation_printed(g, K),
        empirical_mean=float(vals.mean()),
        standard_error=float(vals.std(ddof=1) / math.sqrt(trials)),
        median_delta=float(np.median(deltas)),
        group_order=g.order,
    )
    out = report.to_json()
    enumeration = None
    if math.comb(g.order, K) <= int(params.get("enumerate_limit", 5000)):
        enumeration = lb.randset_enumeration(g, K)
    out["enumeration"] = None if enumeration is None else rational(enumeration)
    out["records"] = [{"group": g.name, "K": K, "exact": exact, "empirical_mean": report.empirical_mean}]
    out["verdict"] = report.verdict and (enumeration is None or enumeration == exact)
    return out


def random_small_protocol(i: int, seed: int):
    """A random protocol with a random hard-distribution family."""
    rng = stream(seed, i)
    L = int(rng.integers(1, 3))
    nx = int(rng.integers(2, 7))
    ny = int(rng.integers(2, 5))
    states = [random_density_matrix(2**L, rng) for _ in range(nx)]
    family = {}
    for y in range(ny):
        k = int(rng.integers(1, nx + 1))
        support = sorted(sample_without_replacement(rng, nx, k))
        w = [int(v) for v in rng.integers(1, 6, size=k)]
        family[y] = lb.FiniteDistribution(tuple(support), tuple(Fraction(v, sum(w)) for v in w))
    bw = [int(v) for v in rng.integers(1, 6, size=ny)]
    B = lb.FiniteDistribution(tuple(range(ny)), tuple(Fraction(v, sum(bw)) for v in bw))
    protocol = pr.QuantumOneWayProtocol(L, lambda x: states[x], lambda y: None, name=f"random-{i}")
    return protocol, family, B


def _vardist_trial(i: int, seed: int, beta: float) -> dict:
    protocol, family, B = random_small_protocol(i, seed)
    rep = lb.vardist_certificate(protocol, family, B, beta)
    return {"instance": f"random-{i}", **rep.to_json()}


def run_vardist_check(params: dict, seed: int, jobs: int = 1) -> dict:
    beta = float(params.get("beta", 1 / 3))
    records = []
    for p in params.get("primes") or []:
        family, B = lb.coset_family(int(p))
        rep = lb.vardist_certificate(pr.coset_basis_protocol(int(p)), family, B, beta)
        records.append({"instance": f"coset:{p}", **rep.to_json()})
    records += _trials(_vardist_trial, int(params.get("random", 0)), jobs, seed, beta)
    return {
        "max_slack": max((r["expected_tdist"] - r["bound"] for r in records), default=0.0),
        "records": records,
        "verdict": all(r["verdict"] for r in records),
    }


# ---------------------------------------------------------------------------
# protocols


def run_membership(params: dict, seed: int, jobs: int = 1) -> dict:
    g = grp.parse_group(params["group"])
    if params.get("subgroup"):
        subgroups = [grp.Subgroup.generated_by(g, pr.parse_int_list(params["subgroup"]))]
    else:
        subgroups = pr.all_subgroups(g)
    records = []
    for h in subgroups:
        for x in g.elements:
            p = pr.group_membership_advice(g, h, x)
            expected = 1.0 if x in h else 0.5
            records.append({"subgroup": list(h.elements), "x": x, "probability": p, "expected": expected, "ok": abs(p - expected) <= 1e-9})
    return {"group": g.name, "subgroups": len(subgroups), "records": records, "verdict": all(r["ok"] for r in records)}


def run_pqp(params: dict, seed: int, jobs: int = 1) -> dict:
    n = int(params["n"])
    if params.get("table"):
        table = [int(c) for c in params["table"]]
    else:
        table = [int(b) for b in stream(seed, 0).integers(0, 2, size=2**n)]
    target = Fraction(1, 2) + Fraction(1, 2 ** (n + 1))
    records = [{"x": x, "bit": table[x], "probability": pr.pqp_advice(table, x)} for x in range(2**n)]
    return {
        "n": n,
        "expected": target,
        "records": records,
        "verdict": all(r["probability"] == target for r in records),
    }


def _diagnostics_record(problem: pr.OneWayProblem) -> dict:
    cm, reports = pr.matrix_diagnostics(problem)
    return {
        "problem": problem.name,
        "rows": cm.rows,
        "cols": cm.cols,
        "vc": cm.vc,
        "D1": math.ceil(math.log2(cm.rows)) if cm.rows > 1 else 0,
        "sauer_sum": cm.sauer_sum,
        "sauer": cm.sauer_holds,
        "bounds": [r.to_json() for r in reports],
    }


def _diagnostics_trial(i: int, seed: int) -> dict:
    rng = stream(seed, i)
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, min(10, 16 - n) + 1))
    return _diagnostics_record(pr.random_total_problem(n, m, rng, name=f"random-{i}:{n}x{m}"))


def run_diagnostics(params: dict, seed: int, jobs: int = 1) -> dict:
    records = [_diagnostics_record(pr.parse_problem(p)) for p in params.get("problems") or []]
    records += _trials(_diagnostics_trial, int(params.get("random", 0)), jobs, seed)
    return {"records": records, "verdict": all(r["sauer"] and r["vc"] <= math.log2(r["rows"]) + 1e-12 for r in records)}


def _fingerprint_eq_trial(i: int, seed: int, n: int, target: float) -> dict:
    proto = pr.equality_fingerprint(n, target, seed)
    rng = stream(seed, i)
    x = int(rng.integers(2**n))
    y = int(rng.integers(2**n - 1)) if n else 0
    y = y + (y >= x)
    return {"false_accept": proto.decide(proto.message_with(x, rng), y), "yes_accept": proto.decide(proto.message_with(x, rng), x)}


def _fingerprint_subset_trial(i: int, seed: int, group: str, S: tuple) -> dict:
    inst = grp.SubsetInstance(grp.parse_group(group), S)
    proto = pr.subset_fingerprint(inst, seed)
    g = inst.group
    rng = stream(seed, i)
    s = set(inst.S)
    while True:
        x, y = int(rng.integers(g.order)), int(rng.integers(g.order))
        if g.op(x, y) not in s:
            break
    x_yes = g.op(int(inst.S[int(rng.integers(len(inst.S)))]), g.inv(y))
    return {"false_accept": proto.decide(proto.message_with(x, rng), y), "yes_accept": proto.decide(proto.message_with(x_yes, rng), y)}


def run_fingerprint(params: dict, seed: int, jobs: int = 1) -> dict:
    trials = int(params.get("trials", 10_000))
    if params.get("kind", "eq") == "eq":
        n = int(params.get("n", 16))
        target = float(params.get("target", 0.1))
        proto = pr.equality_fingerprint(n, target, seed)
        rows = _trials(_fingerprint_eq_trial, trials, jobs, seed, n, target)
        limit = target
        estimate = math.log2(n) if n > 1 else 1.0
    else:
        g = grp.parse_group(params["group"])
        S = tuple(pr.parse_int_list(params["set"]))
        inst = grp.SubsetInstance(g, S)
        proto = pr.subset_fingerprint(inst, seed)
        rows = _trials(_fingerprint_subset_trial, trials, jobs, seed, params["group"], inst.S)
        limit = float(params.get("target", 0.2))
        estimate = pr.subset_message_estimate(inst)
    rate = sum(r["false_accept"] for r in rows) / trials
    yes = sum(r["yes_accept"] for r in rows) / trials
    report = pr.BoundReport(proto.name, "R1_2", "upper", proto.message_bits, "fingerprint (p, x mod p)")
    return {
        "prime_range": [proto.lo, proto.hi],
        "primes": len(proto.primes),
        "message_bits": proto.message_bits,
        "message_estimate": estimate,
        "false_accept_rate": rate,
        "yes_accept_rate": yes,
        "bound_report": report.to_json(),
        "records": [{"trials": trials, "false_accept_rate": rate, "yes_accept_rate": yes}],
        "verdict": rate <= limit and yes == 1.0,
    }


# ---------------------------------------------------------------------------
# polynomial method


def run_cheb(params: dict, seed: int, jobs: int = 1) -> dict:
    dmax, mmax = int(params.get("d", 20)), int(params.get("m", 5))
    records = []
    for d in range(dmax + 1):
        for m in range(mmax + 1):
            t = pl.chebyshev(d)
            rec = t.derivative(m)(Fraction(1))
            closed = pl.chebyshev_derivative_at_one(d, m)
            records.append({"d": d, "m": m, "recurrence": rec, "closed_form": closed, "equal": rec == closed})
    return {"records": records, "verdict": all(r["equal"] for r in records)}


def random_rational_poly(rng: np.random.Generator, degree: int) -> pl.Poly:
    while True:
        cs = [Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 9))) for _ in range(degree + 1)]
        p = pl.Poly(tuple(cs))
        if p.degree == degree:
            return p


def _markov_trial(i: int, seed: int, degree: int, N: int) -> dict:
    rng = stream(seed, i)
    p = random_rational_poly(rng, degree)
    r = [pl.sup_norm(p, 0, N, m) for m in range(degree + 1)]
    rows = []
    for m in range(1, degree + 1):
        _, va = mk.markov_bounds(r[0], r[m], N, degree, m)
        rows.append(float(r[m]) <= va * (1 + 1e-12))
    return {"trial": i, "poly": p.to_json()["coefficients"], "r0": float(r[0]), "holds": all(rows)}


def floor_instance(i: int, seed: int) -> tuple[pl.Poly, int, Fraction, int]:
    """Random interpolant vanishing on ``0..K-1`` with ``p(K) = delta``."""
    rng = stream(seed, i)
    K = int(rng.integers(1, 5))
    extra = int(rng.integers(0, 3))
    delta = Fraction(int(rng.integers(1, 100)), 100)
    xs = list(range(K + 1 + extra))
    ys = [Fraction(0)] * K + [delta] + [Fraction(int(rng.integers(0, 101)), 100) for _ in range(extra)]
    return pl.Poly.interpolate(xs, ys), K, delta, K + extra


def _floor_trial(i: int, seed: int) -> dict:
    p, K, delta, N = floor_instance(i, seed)
    chk = mk.derivative_floor_check(p, K, delta, N)
    return {"trial": i, "K": K, "delta": delta, "N": N, "holds": chk.verdict}


def run_markov(params: dict, seed: int, jobs: int = 1) -> dict:
    degree, N = int(params.get("degree", 3)), int(params.get("N", 4))
    va = _trials(_markov_trial, int(params.get("trials", 200)), jobs, seed, degree, N)
    floors = _trials(_floor_trial, int(params.get("floor_trials", 100)), jobs, seed)
    records = [{"kind": "va", **r} for r in va] + [{"kind": "floor", **r} for r in floors]
    d = int(params.get("cheb_degree", 7))
    t = pl.rescaled_chebyshev(d, N)
    aa, _ = mk.markov_bounds(pl.sup_norm(t, 0, N), pl.sup_norm(t, 0, N, 1), N, d, 1)
    return {
        "va_holds": all(r["holds"] for r in va),
        "floor_holds": all(r["holds"] for r in floors),
        "aa_equality_degree": aa,
        "records": records,
        "verdict": all(r["holds"] for r in records) and aa == d,
    }


def run_degree_bound(params: dict, seed: int, jobs: int = 1) -> dict:
    b = mk.degree_lower_bound(int(params["N"]), int(params["K"]), float(params["delta"]), float(params["r0"]))
    return {**b.to_json(), "records": [b.to_json()], "verdict": True}


def run_direct_product(params: dict, seed: int, jobs: int = 1) -> dict:
    N, K, T = int(params["N"]), int(params["K"]), int(params["T"])
    value = mk.direct_product_bound(N, K, T)
    return {"delta_max": value, "vacuous": value >= 1.0, "records": [{"N": N, "K": K, "T": T, "delta_max": value}], "verdict": True}


def _grover_trial(i: int, N: int, K: int, schedule: tuple, seed: int) -> bool:
    return qy.find_all_trial(N, K, schedule, seed, i)


def run_grover_all(params: dict, seed: int, jobs: int = 1) -> dict:
    N, K = int(params["N"]), int(params["K"])
    sched = params.get("schedule")
    schedule = qy._normalize_schedule(qy.optimal_schedule(N, K) if sched is None else sched, K)
    trials = int(params.get("trials", 10_000))
    if not 1 <= N <= 2**10 or not 0 <= K <= min(8, N):
        raise qy.QueryError("need N <= 1024 and K <= min(8, N)")
    wins = sum(_trials(_grover_trial, trials, jobs, N, K, tuple(schedule), seed))
    rep = qy.FindAllReport(N, K, tuple(schedule), trials, seed, wins, qy.exact_find_all(N, K, schedule))
    out = rep.to_json()
    out["records"] = [{k: v for k, v in out.items() if k != "schedule"}]
    return out


RUNNERS = {
    "goodasnew": run_goodasnew,
    "reconstruct": run_reconstruct,
    "coset-delta": run_coset_delta,
    "subset-delta": run_subset_delta,
    "randset": run_randset,
    "vardist-check": run_vardist_check,
    "membership": run_membership,
    "pqp": run_pqp,
    "diagnostics": run_diagnostics,
    "cheb": run_cheb,
    "markov": run_markov,
    "degree-bound": run_degree_bound,
    "direct-product": run_direct_product,
    "grover-all": run_grover_all,
    "fingerprint": run_fingerprint,
}


def run(name: str, params: dict, seed: int = 0, jobs: int = 1) -> ExperimentReport:
    clean = {k: v for k, v in params.items() if v is not None}
    return ExperimentReport(name, clean, seed, RUNNERS[name](clean, seed, jobs))
