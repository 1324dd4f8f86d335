"""Finite groups, subgroups, cosets and periodicity."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadvice import groups as grp
from small_groups import all_groups_up_to_12

# subgroup counts from standard tables
SUBGROUP_COUNTS = {"z2^3": 16, "z4xz2": 8, "z12": 6, "z2^2": 5, "z3^2": 6, "S3": 6, "D4": 10, "Q8": 6, "A4": 10, "D6": 16}


def test_parse_and_names():
    g = grp.parse_group("z3xz4")
    assert g.order == 12 and g.is_abelian()
    assert grp.parse_group("z2^3").order == 8
    assert grp.make_group(5).order == 5
    assert grp.make_group([2, 2]).order == 4
    with pytest.raises(grp.GroupError):
        grp.parse_group("q8")
    with pytest.raises(grp.GroupError):
        grp.cyclic(0)


def test_encode_decode_round_trip():
    g = grp.direct_product(2, 3, 4)
    for a in g.elements:
        assert g.encode(g.decode(a)) == a
    # the operation is coordinatewise addition
    for a, b in [(5, 7), (23, 23), (0, 11)]:
        expect = tuple((x + y) % m for x, y, m in zip(g.decode(a), g.decode(b), (2, 3, 4)))
        assert g.decode(g.op(a, b)) == expect


def test_table_validation():
    with pytest.raises(grp.GroupError):
        grp.FiniteGroup(np.array([[0, 1], [0, 1]]))
    with pytest.raises(grp.GroupError):
        # latin square that is not associative
        grp.FiniteGroup(np.array([[0, 1, 2], [1, 0, 2], [2, 2, 0]]))


def test_small_group_catalogue():
    groups = all_groups_up_to_12()
    assert len(groups) == 24
    assert sum(not g.is_abelian() for g in groups) == 7
    by_name = {g.name: g for g in groups}
    for name, count in SUBGROUP_COUNTS.items():
        g = by_name.get(name) or grp.parse_group(name)
        assert len(g.subgroups()) == count, name


@pytest.mark.parametrize("n", [1, 6, 7, 12, 30])
def test_cyclic_subgroups_match_divisors(n):
    g = grp.cyclic(n)
    assert sorted(len(h) for h in g.subgroups()) == [d for d in range(1, n + 1) if n % d == 0]


def test_lagrange_and_cosets():
    for g in all_groups_up_to_12():
        for h in g.subgroups():
            assert g.order % len(h) == 0
            sub = grp.Subgroup(g, tuple(h))
            cosets = sub.cosets()
            assert len(cosets) == g.order // len(h)
            assert sorted(itertools.chain(*cosets)) == list(g.elements)
            assert grp.periodicity(g, h) == len(cosets)


def test_element_orders_divide_group_order():
    for g in all_groups_up_to_12():
        orders, r = grp.order_stats(g)
        assert all(g.order % o == 0 for o in orders.values())
        assert orders[g.identity] == 1
        # r counts self-inverse non-identity elements
        assert r == sum(1 for a in g.elements if a != g.identity and g.inv(a) == a)


def test_subgroup_rejects_non_subgroup():
    g = grp.cyclic(6)
    with pytest.raises(grp.GroupError):
        grp.Subgroup(g, (0, 1))
    assert grp.Subgroup.generated_by(g, [2]).elements == (0, 2, 4)


def test_subset_instance_validation():
    g = grp.cyclic(5)
    assert grp.SubsetInstance(g, (1, 0, 1)).S == (0, 1)
    with pytest.raises(grp.GroupError):
        grp.SubsetInstance(g, (0, 1, 2))
    with pytest.raises(grp.GroupError):
        grp.SubsetInstance(g, ())


def test_periodicity_examples():
    assert grp.periodicity(grp.cyclic(5), [0, 1]) == 5
    assert grp.periodicity(grp.cyclic(8), [3, 7]) == 4
    cosets, q = grp.cosets_and_periodicity(grp.cyclic(6), [0, 3])
    assert q == 3 and cosets == [(0, 3), (1, 4), (2, 5)]
    assert grp.cosets_and_periodicity(grp.cyclic(6), [0, 1])[0] is None


def test_generated_permutation_group():
    s3 = grp.generated_group([(1, 0, 2), (1, 2, 0)], grp.compose_permutations, name="S3")
    assert s3.order == 6 and not s3.is_abelian()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 5), min_size=1, max_size=3), st.data())
def test_closure_is_smallest_subgroup(moduli, data):
    g = grp.direct_product(*moduli)
    gens = data.draw(st.lists(st.integers(0, g.order - 1), max_size=3))
    h = g.closure(gens)
    assert g.is_subgroup(h)
    assert set(gens) <= h
    # every subgroup containing the generators contains the closure
    for k in g.subgroups():
        if set(gens) <= k:
            assert h <= k
