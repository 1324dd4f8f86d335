"""Exact distributions and the trace-distance lower-bound method.

A hard input distribution is a distribution ``B`` over Bob's inputs and, for
each ``y``, a distribution ``A_y`` over Alice inputs with ``f(x, y) = 1``.
``D_1`` is the marginal of ``x`` and ``D_2`` the law of two independent
samples from ``A_y`` for a common ``y``.  If ``||D_2 - D_1^2||`` is small,
the averaged messages ``rho_y`` stay close to ``rho`` and Bob learns little.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Mapping

import numpy as np

from . import groups as grp
from .primes import is_prime
from .protocols import OneWayProblem, QuantumOneWayProtocol, coset_problem
from .qcore import trace_distance
from .rng import sample_without_replacement, stream
from .serialize import rational

MAX_PAIR_SUPPORT = 2**16


class DistributionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteDistribution:
    """Exact rational distribution; zero-mass points are dropped."""

    support: tuple
    probabilities: tuple[Fraction, ...]

    def __post_init__(self):
        probs = tuple(Fraction(p) for p in self.probabilities)
        if len(probs) != len(self.support):
            raise DistributionError("support and probabilities differ in length")
        if any(p < 0 for p in probs):
            raise DistributionError("negative probability")
        if sum(probs) != 1:
            raise DistributionError(f"probabilities sum to {sum(probs)}")
        pairs = sorted((s, p) for s, p in zip(self.support, probs) if p)
        if len({s for s, _ in pairs}) != len(pairs):
            raise DistributionError("repeated support point")
        object.__setattr__(self, "support", tuple(s for s, _ in pairs))
        object.__setattr__(self, "probabilities", tuple(p for _, p in pairs))

    @classmethod
    def from_mapping(cls, mass: Mapping) -> "FiniteDistribution":
        return cls(tuple(mass), tuple(mass.values()))

    @classmethod
    def uniform(cls, items) -> "FiniteDistribution":
        items = sorted(set(items))
        if not items:
            raise DistributionError("uniform distribution over an empty set")
        return cls(tuple(items), (Fraction(1, len(items)),) * len(items))

    def as_dict(self) -> dict:
        return dict(zip(self.support, self.probabilities))

    def __getitem__(self, item) -> Fraction:
        return self.as_dict().get(item, Fraction(0))

    def product(self, other: "FiniteDistribution") -> "PairDistribution":
        return PairDistribution({(a, b): p * q for a, p in zip(self.support, self.probabilities) for b, q in zip(other.support, other.probabilities)})


class PairDistribution(FiniteDistribution):
    """Distribution over ordered pairs ``(x, z)``."""

    def __init__(self, mass: Mapping[tuple, Fraction]):
        super().__init__(tuple(mass), tuple(mass.values()))

    def marginals(self) -> tuple[FiniteDistribution, FiniteDistribution]:
        first: dict = defaultdict(Fraction)
        second: dict = defaultdict(Fraction)
        for (a, b), p in zip(self.support, self.probabilities):
            first[a] += p
            second[b] += p
        return FiniteDistribution.from_mapping(first), FiniteDistribution.from_mapping(second)


def variation_distance(d: FiniteDistribution, e: FiniteDistribution, universe=None) -> Fraction:
    """``1/2 sum |D(x) - E(x)|`` over the union of supports, exactly.

    With ``universe`` given, both supports must lie inside it.
    """
    a, b = d.as_dict(), e.as_dict()
    if universe is not None:
        u = set(universe)
        if not (set(a) <= u and set(b) <= u):
            raise DistributionError("support outside the common universe")
    keys = set(a) | set(b)
    return sum((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), Fraction(0)) / 2


def build_pair_distributions(
    family: Mapping[Hashable, FiniteDistribution],
    B: FiniteDistribution,
    problem: OneWayProblem | None = None,
) -> tuple[FiniteDistribution, PairDistribution]:
    """``D_1(x) = sum_y B(y) A_y(x)`` and ``D_2(x, z) = sum_y B(y) A_y(x) A_y(z)``."""
    if problem is not None:
        if not problem.is_total:
            raise DistributionError("D_1 need not make sense for a partial function; supply a total problem")
        for y in B.support:
            bad = [x for x in family[y].support if problem.f(x, y) != 1]
            if bad:
                raise DistributionError(f"A_{y} puts mass on inputs with f(x, y) != 1: {bad[:5]}")
    pair_count = sum(len(family[y].support) ** 2 for y in B.support)
    if pair_count > MAX_PAIR_SUPPORT * 16:
        raise DistributionError("pair support too large")
    d1: dict = defaultdict(Fraction)
    d2: dict = defaultdict(Fraction)
    for y, by in zip(B.support, B.probabilities):
        a = family[y]
        for x, px in zip(a.support, a.probabilities):
            d1[x] += by * px
            for z, pz in zip(a.support, a.probabilities):
                d2[(x, z)] += by * px * pz
    if len(d2) > MAX_PAIR_SUPPORT:
        raise DistributionError(f"D_2 support {len(d2)} exceeds {MAX_PAIR_SUPPORT}")
    return FiniteDistribution.from_mapping(d1), PairDistribution(d2)


def pair_delta(d1: FiniteDistribution, d2: PairDistribution) -> Fraction:
    """``||D_2 - D_1^2||``."""
    return variation_distance(d2, d1.product(d1))


# ---------------------------------------------------------------------------
# coset problem


def coset_family(p: int) -> tuple[dict, FiniteDistribution]:
    """``B`` uniform over lines ``y = ax + b``; ``A_(a,b)`` uniform on the line.

    Alice points ``<x, y>`` and Bob lines ``<a, b>`` use labels ``x*p + y`` and
    ``a*p + b``.
    """
    family = {}
    for a in range(p):
        for b in range(p):
            family[a * p + b] = FiniteDistribution.uniform(x * p + (a * x + b) % p for x in range(p))
    return family, FiniteDistribution.uniform(range(p * p))


def _coset_delta_full(p: int) -> Fraction:
    family, B = coset_family(p)
    d1, d2 = build_pair_distributions(family, B, coset_problem(p) if p <= 13 else None)
    return pair_delta(d1, d2)


def _coset_delta_translation(p: int) -> Fraction:
    """Uses translation invariance: ``D_2(P, P + v)`` does not depend on ``P``
    and ``D_1`` is uniform, so ``||D_2 - D_1^2|| = p^2/2 sum_v |D_2(0, v) - p^-4|``.
    Only lines through the origin contribute to ``D_2(0, .)``."""
    family, B = coset_family(p)
    d1: Counter = Counter()
    for y in B.support:
        for x in family[y].support:
            d1[x] += 1
    if set(d1.values()) != {p}:
        raise AssertionError("D_1 is not uniform")
    origin_row: dict = defaultdict(Fraction)
    for y, by in zip(B.support, B.probabilities):
        a = family[y]
        p0 = a[0]
        if p0:
            for v, pv in zip(a.support, a.probabilities):
                origin_row[v] += by * p0 * pv
    base = Fraction(1, p**4)
    total = sum((abs(origin_row.get(v, 0) - base) for v in range(p * p)), Fraction(0))
    return Fraction(p * p, 2) * total


def coset_delta_exact(p: int) -> Fraction:
    """``||D_2 - D_1^2||`` for the coset distribution, computed by enumeration.

    Small primes use the full pair distribution; larger primes the
    translation-reduced sum, which is cross-checked against the full route
    whenever both are affordable.
    """
    if not is_prime(p):
        raise DistributionError(f"{p} is not prime")
    if p > 101:
        raise DistributionError("p must be at most 101")
    reduced = _coset_delta_translation(p)
    if p <= 13:
        full = _coset_delta_full(p)
        if full != reduced:
            raise AssertionError(f"coset routes disagree at p = {p}: {full} vs {reduced}")
    return reduced


def coset_prob_f0(p: int) -> Fraction:
    """``Pr[f(x, y) = 0]`` for ``x ~ D_1`` and ``y ~ B`` independently."""
    family, B = coset_family(p)
    d1_count: Counter = Counter()
    for y in B.support:
        for x in family[y].support:
            d1_count[x] += 1
    total = sum(d1_count.values())
    # Pr[f = 1] = sum over lines of B(line) * D_1(points on the line)
    hit = sum(Fraction(sum(d1_count[x] for x in family[y].support), total) for y in B.support) / len(B.support)
    return 1 - hit


# ---------------------------------------------------------------------------
# subset problem


def subset_family(inst: grp.SubsetInstance) -> tuple[dict, FiniteDistribution]:
    """``B`` uniform on ``G``; ``A_y`` uniform on ``{x : xy in S}``."""
    g = inst.group
    s = np.zeros(g.order, dtype=bool)
    s[list(inst.S)] = True
    family = {y: FiniteDistribution.uniform(np.flatnonzero(s[g.table[:, y]]).tolist()) for y in g.elements}
    return family, FiniteDistribution.uniform(g.elements)


def difference_distribution(inst: grp.SubsetInstance) -> FiniteDistribution:
    """``M``: law of ``s t^{-1}`` for independent uniform ``s, t in S``."""
    g = inst.group
    counts = Counter(g.op(s, g.inv(t)) for s in inst.S for t in inst.S)
    k2 = len(inst.S) ** 2
    return FiniteDistribution.from_mapping({a: Fraction(c, k2) for a, c in counts.items()})


@dataclass(frozen=True)
class SubsetDelta:
    delta: Fraction
    pair_delta: Fraction

    @property
    def equality_verdict(self) -> bool:
        return self.delta == self.pair_delta


def subset_delta(inst: grp.SubsetInstance) -> SubsetDelta:
    """``Delta = ||M - D_1||`` and, independently, ``||D_2 - D_1^2||``.

    ``D_1`` is uniform.  The pair route counts ``#{y : xy in S, zy in S}``
    with an integer matrix product, so it is exact for every ``|G| <= 1024``.
    """
    g = inst.group
    n, k = g.order, len(inst.S)
    if n > 1024:
        raise DistributionError("|G| must be at most 1024")
    m = difference_distribution(inst)
    delta = variation_distance(m, FiniteDistribution.uniform(g.elements))
    s = np.zeros(n, dtype=np.int64)
    s[list(inst.S)] = 1
    ind = s[g.table]  # ind[x, y] = [xy in S]
    common = ind @ ind.T
    # D_2(x, z) = common / (n k^2) and D_1^2 = 1/n^2; common denominator n^2 k^2
    num = int(np.abs(n * common - k * k).sum())
    return SubsetDelta(delta, Fraction(num, 2 * n * n * k * k))


# ---------------------------------------------------------------------------
# random subsets


def _falling(k: int, j: int) -> int:
    return math.perm(k, j) if k >= j else 0


def _term(count: int, num: int, den: int) -> Fraction:
    # a term whose combinatorial count vanishes contributes 0 even if den = 0
    return Fraction(0) if count == 0 or num == 0 else Fraction(count * num, den)


def randset_expectation(group: grp.FiniteGroup, K: int) -> Fraction:
    """``E_S sum_x (M(x) - 1/|G|)^2`` for a uniform ``K``-subset ``S``.

    Counts ordered quadruples ``(s, t, u, v)`` in ``S^4`` with
    ``s t^-1 = u v^-1`` by their coincidence pattern; ``r`` counts the
    involutions and ``r' = |G| - r - 1``.
    """
    n = group.order
    if not 1 <= K <= n:
        raise ValueError("need 1 <= K <= |G|")
    _, r = grp.order_stats(group)
    rp = n - r - 1
    k2, k3, k4 = _falling(K, 2), _falling(K, 3), _falling(K, 4)
    total = (
        Fraction(K * K)
        + _term(2 * r + rp, k2, n - 1)
        + _term(2 * rp, k3, (n - 1) * (n - 2))
        + _term(r, k4, (n - 1) * (n - 3))
        + _term(rp, k4, (n - 1) * (n - 2))
    )
    return total / K**4 - Fraction(1, n)


def randset_expectation_printed(group: grp.FiniteGroup, K: int) -> Fraction:
    """The closed form in the form it is usually quoted, kept for comparison.

    It agrees with :func:`randset_expectation` for ``K <= 2`` but not in
    general: the three-distinct-element and four-distinct-element counts
    are off.
    """
    n = group.order
    if not 1 <= K <= n:
        raise ValueError("need 1 <= K <= |G|")
    _, r = grp.order_stats(group)
    rp = n - r - 1
    k2, k3, k4 = _falling(K, 2), _falling(K, 3), _falling(K, 4)
    total = (
        Fraction(K * K)
        + _term(2 * r + rp, k2, n - 1)
        + _term(rp, k3, (n - 1) * (n - 2))
        + _term(r + rp, k4, (n - 1) * (n - 3))
    )
    return total / K**4 - Fraction(1, n)


def squared_deviation(group: grp.FiniteGroup, S) -> Fraction:
    """``sum_x (M(x) - 1/|G|)^2`` for a concrete ``S``."""
    S = list(S)
    k = len(S)
    diffs = group.table[np.ix_(S, group.inverses[S])].ravel()
    counts = np.bincount(diffs, minlength=group.order)
    return Fraction(int((counts.astype(np.int64) ** 2).sum()), k**4) - Fraction(1, group.order)


def randset_enumeration(group: grp.FiniteGroup, K: int) -> Fraction:
    """Average of :func:`squared_deviation` over every ``K``-subset."""
    subsets = list(combinations(group.elements, K))
    return sum((squared_deviation(group, s) for s in subsets), Fraction(0)) / len(subsets)


@dataclass(frozen=True)
class RandsetReport:
    group: str
    K: int
    trials: int
    seed: int
    exact_expectation: Fraction
    printed_expectation: Fraction
    empirical_mean: float
    standard_error: float
    median_delta: float
    group_order: int

    @property
    def delta_threshold(self) -> float:
        """Markov plus Cauchy-Schwarz: at least half of all ``S`` have
        ``||M - U|| <= sqrt(2 E |G|) / 2``."""
        return math.sqrt(2 * float(self.exact_expectation) * self.group_order) / 2

    @property
    def mean_within_4se(self) -> bool:
        return abs(self.empirical_mean - float(self.exact_expectation)) <= 4 * self.standard_error + 1e-15

    @property
    def verdict(self) -> bool:
        return self.mean_within_4se and self.median_delta <= self.delta_threshold + 1e-12

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "order": self.group_order,
            "K": self.K,
            "trials": self.trials,
            "seed": self.seed,
            "exact_expectation": rational(self.exact_expectation),
            "printed_expectation": rational(self.printed_expectation),
            "empirical_mean": self.empirical_mean,
            "standard_error": self.standard_error,
            "median_delta": self.median_delta,
            "delta_threshold": self.delta_threshold,
            "verdict": self.verdict,
        }


def randset_trial(group: grp.FiniteGroup, K: int, seed: int, index: int) -> tuple[float, float]:
    """One Monte Carlo draw: ``(sum_x (M - 1/n)^2, ||M - U||)``."""
    S = sample_without_replacement(stream(seed, index), group.order, K)
    diffs = group.table[np.ix_(S, group.inverses[S])].ravel()
    m = np.bincount(diffs, minlength=group.order) / K**2
    dev = m - 1 / group.order
    return float(dev @ dev), float(np.abs(dev).sum() / 2)


def randset_check(group: grp.FiniteGroup, K: int, trials: int, seed: int = 0) -> RandsetReport:
    if K > group.order:
        raise ValueError("K exceeds |G|")
    if group.order > 1024:
        raise ValueError("|G| must be at most 1024")
    if trials < 2:
        raise ValueError("need at least two trials")
    vals = np.empty(trials)
    deltas = np.empty(trials)
    for i in range(trials):
        vals[i], deltas[i] = randset_trial(group, K, seed, i)
    return RandsetReport(
        group=group.name,
        K=K,
        trials=trials,
        seed=seed,
        exact_expectation=randset_expectation(group, K),
        printed_expectation=randset_expectation_printed(group, K),
        empirical_mean=float(vals.mean()),
        standard_error=float(vals.std(ddof=1) / math.sqrt(trials)),
        median_delta=float(np.median(deltas)),
        group_order=group.order,
    )


# ---------------------------------------------------------------------------
# the certificate


def required_L(beta: float, delta) -> int | None:
    """Least ``L`` with ``beta <= sqrt(2^(L-1) delta)``; ``None`` if ``delta = 0``."""
    delta = float(delta)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if delta == 0:
        return None
    return math.ceil(1 + math.log2(beta * beta / delta))


@dataclass(frozen=True)
class TraceDistanceReport:
    L: int
    delta: Fraction
    expected_tdist: float
    bound: float
    required_L: int | None
    beta: float = 1 / 3

    @property
    def verdict(self) -> bool:
        return self.expected_tdist <= self.bound + 1e-8

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "delta": rational(self.delta),
            "expected_tdist": self.expected_tdist,
            "bound": self.bound,
            "beta": self.beta,
            "required_L": self.required_L,
            "verdict": self.verdict,
        }


def vardist_certificate(
    protocol: QuantumOneWayProtocol,
    family: Mapping[Hashable, FiniteDistribution],
    B: FiniteDistribution,
    beta: float = 1 / 3,
) -> TraceDistanceReport:
    """Compare ``EX_y ||rho - rho_y||`` with ``sqrt(2^(L-1) delta)``."""
    if protocol.L > 8:
        raise ValueError("certificate supports L <= 8")
    d1, d2 = build_pair_distributions(family, B)
    delta = pair_delta(d1, d2)

    def average(dist: FiniteDistribution) -> np.ndarray:
        out = np.zeros((protocol.message_dim,) * 2, dtype=complex)
        for x, px in zip(dist.support, dist.probabilities):
            out += float(px) * protocol.message(x).matrix
        return out

    rho = average(d1)
    expected = sum(float(by) * trace_distance(rho, average(family[y])) for y, by in zip(B.support, B.probabilities))
    bound = math.sqrt(2 ** (protocol.L - 1) * float(delta))
    return TraceDistanceReport(protocol.L, delta, expected, bound, required_L(beta, delta), beta)
