"""Exact distributions, the coset and subset bounds, random subsets and the
trace-distance certificate."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadvice import groups as grp
from qadvice import lowerbounds as lb
from qadvice import protocols as pr
from qadvice.experiments import random_small_protocol
from small_groups import all_groups_up_to_12

F = Fraction


def dist_strategy(universe=6):
    def build(weights):
        total = sum(weights)
        return lb.FiniteDistribution(tuple(range(len(weights))), tuple(F(w, total) for w in weights))

    return st.lists(st.integers(0, 9), min_size=1, max_size=universe).filter(any).map(build)


def test_distribution_validation():
    with pytest.raises(lb.DistributionError):
        lb.FiniteDistribution((0, 1), (F(1, 2), F(1, 3)))
    with pytest.raises(lb.DistributionError):
        lb.FiniteDistribution((0, 1), (F(3, 2), F(-1, 2)))
    with pytest.raises(lb.DistributionError):
        lb.FiniteDistribution((0, 0), (F(1, 2), F(1, 2)))
    d = lb.FiniteDistribution((2, 1, 0), (F(1, 2), F(1, 2), F(0)))
    assert d.support == (1, 2)
    assert d[0] == 0 and d[2] == F(1, 2)


def test_variation_distance_example():
    d = lb.FiniteDistribution.from_mapping({"a": F(1, 2), "b": F(1, 2)})
    e = lb.FiniteDistribution.from_mapping({"a": F(3, 4), "c": F(1, 4)})
    assert lb.variation_distance(d, e) == F(1, 2)
    u = lb.FiniteDistribution.uniform(range(4))
    v = lb.FiniteDistribution.from_mapping({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)})
    assert lb.variation_distance(u, v) == F(1, 4)
    with pytest.raises(lb.DistributionError):
        lb.variation_distance(u, v, universe=range(2))


@settings(max_examples=60, deadline=None)
@given(dist_strategy(), dist_strategy(), dist_strategy())
def test_variation_distance_metric(a, b, c):
    ab = lb.variation_distance(a, b)
    assert 0 <= ab <= 1
    assert ab == lb.variation_distance(b, a)
    assert lb.variation_distance(a, a) == 0
    assert ab <= lb.variation_distance(a, c) + lb.variation_distance(c, b)
    # float oracle: max over events of |a(E) - b(E)|
    keys = sorted(set(a.support) | set(b.support))
    best = max(abs(sum(float(a[k] - b[k]) for k in ev)) for r in range(len(keys) + 1) for ev in itertools.combinations(keys, r))
    assert float(ab) == pytest.approx(best)


def test_product_marginals():
    a = lb.FiniteDistribution.uniform(range(3))
    b = lb.FiniteDistribution.from_mapping({"x": F(1, 3), "y": F(2, 3)})
    pa, pb = a.product(b).marginals()
    assert pa == a and pb == b


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_coset_delta_closed_form(p):
    expect = F(1, p) - F(1, p * p)
    assert lb._coset_delta_full(p) == expect
    assert lb._coset_delta_translation(p) == expect
    assert lb.coset_delta_exact(p) == expect
    assert lb.coset_prob_f0(p) == 1 - F(1, p)


def test_coset_prob_f0_by_counting():
    p = 5
    t = pr.coset_problem(p).table
    assert lb.coset_prob_f0(p) == F(int((t == 0).sum()), t.size)


def test_coset_family_supported_on_ones():
    family, B = lb.coset_family(3)
    d1, d2 = lb.build_pair_distributions(family, B, pr.coset_problem(3))
    assert d1 == lb.FiniteDistribution.uniform(range(9))
    assert sum(d2.probabilities) == 1
    bad = dict(family)
    bad[0] = lb.FiniteDistribution.uniform([1])
    with pytest.raises(lb.DistributionError):
        lb.build_pair_distributions(bad, B, pr.coset_problem(3))
    with pytest.raises(lb.DistributionError):
        lb.build_pair_distributions(family, B, pr.promise_example(4))


def test_subset_example_z5():
    res = lb.subset_delta(grp.SubsetInstance(grp.cyclic(5), (0, 1)))
    assert res.delta == F(2, 5) and res.pair_delta == F(2, 5)
    assert res.equality_verdict


def test_subset_subgroup_is_one_minus_index_ratio():
    # S = H makes M uniform on H
    for g in all_groups_up_to_12():
        for h in g.subgroups():
            if 2 * len(h) <= g.order:
                res = lb.subset_delta(grp.SubsetInstance(g, tuple(h)))
                assert res.delta == res.pair_delta == 1 - F(len(h), g.order)


def test_subset_pair_route_matches_generic_builder():
    inst = grp.SubsetInstance(grp.parse_group("z2xz4"), (1, 2, 7))
    family, B = lb.subset_family(inst)
    d1, d2 = lb.build_pair_distributions(family, B, pr.subset_problem(inst))
    assert lb.pair_delta(d1, d2) == lb.subset_delta(inst).pair_delta


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=3), st.data())
def test_subset_dual_path(moduli, data):
    g = grp.direct_product(*moduli)
    k = data.draw(st.integers(1, g.order // 2))
    S = data.draw(st.lists(st.integers(0, g.order - 1), min_size=k, max_size=k, unique=True))
    assert lb.subset_delta(grp.SubsetInstance(g, tuple(S))).equality_verdict


def test_randset_small_example():
    assert lb.randset_expectation(grp.cyclic(3), 2) == F(1, 24)
    assert lb.randset_enumeration(grp.cyclic(3), 2) == F(1, 24)


def test_randset_closed_form_matches_enumeration_small():
    for g in all_groups_up_to_12():
        if g.order > 8:
            continue
        for K in range(1, min(4, g.order) + 1):
            assert lb.randset_expectation(g, K) == lb.randset_enumeration(g, K), (g.name, K)


def test_randset_printed_form_differs():
    # the printed coefficients disagree with enumeration once K >= 3 on a
    # group with elements of order > 2
    g = grp.cyclic(7)
    assert lb.randset_expectation_printed(g, 3) != lb.randset_enumeration(g, 3)


def test_randset_monte_carlo():
    rep = lb.randset_check(grp.cyclic(11), 3, 3000, seed=5)
    assert rep.mean_within_4se and rep.verdict
    assert rep.to_json()["exact_expectation"]["den"] > 0
    with pytest.raises(ValueError):
        lb.randset_check(grp.cyclic(3), 4, 10)


def test_randset_trial_matches_exact_deviation():
    g = grp.cyclic(9)
    from qadvice.rng import sample_without_replacement, stream

    S = sample_without_replacement(stream(3, 7), g.order, 4)
    sq, _ = lb.randset_trial(g, 4, 3, 7)
    assert sq == pytest.approx(float(lb.squared_deviation(g, S)))


def test_required_L():
    assert lb.required_L(1 / 3, F(1, 101) - F(1, 101**2)) == 5
    assert lb.required_L(1 / 3, 0) is None
    for delta in (0.3, 0.01, 1e-4):
        L = lb.required_L(1 / 3, delta)
        assert 1 / 3 <= math.sqrt(2 ** (L - 1) * delta) + 1e-12
        assert 1 / 3 > math.sqrt(2 ** (L - 2) * delta)


@pytest.mark.parametrize("p", [2, 3])
def test_certificate_coset(p):
    family, B = lb.coset_family(p)
    rep = lb.vardist_certificate(pr.coset_basis_protocol(p), family, B)
    assert rep.delta == F(1, p) - F(1, p * p)
    assert rep.verdict


@pytest.mark.parametrize("i", range(10))
def test_certificate_random(i):
    rep = lb.vardist_certificate(*random_small_protocol(i, 11))
    assert rep.verdict
    assert rep.expected_tdist >= 0
