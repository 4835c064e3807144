import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tymtc.abelian import (
    Character,
    all_characters,
    character_eval,
    enumerate_subgroups,
    make_group,
    parse_element,
    parse_group,
)
from tymtc.cyclotomic import root_of_unity
from tymtc.errors import ArityError, ResourceBoundError


def small_groups(max_order):
    """Every finite abelian group of order <= max_order, once each."""
    seen = {}
    for n in range(1, max_order + 1):
        for parts in _factorizations(n):
            g = make_group(parts)
            seen[g.invariant_factors] = g
    return list(seen.values())


def _factorizations(n, smallest=2):
    if n == 1:
        yield []
        return
    for d in range(smallest, n + 1):
        if n % d == 0:
            for rest in _factorizations(n // d, d):
                yield [d] + rest


def test_make_group_normalizes():
    assert make_group([3, 3]).invariant_factors == (3, 3)
    assert make_group([]).order == 1
    assert make_group([1, 1]).invariant_factors == ()
    assert make_group([2, 3]).invariant_factors == (6,)
    assert make_group([4, 2, 3]).invariant_factors == (2, 12)
    assert make_group([9, 3, 2, 4]).invariant_factors == (6, 36)


def _order_profile(g):
    return sorted(g.order_of(x) for x in g.elements)


def test_normalization_matches_isomorphism_oracle():
    # abelian groups are determined by their element-order statistics; compare
    # the raw product presentation with the normalized one for every order <= 12
    for n in range(1, 13):
        for parts in _factorizations(n):
            raw = list(itertools.product(*(range(m) for m in parts)))

            def raw_order(x):
                k, y = 1, x
                while any(y):
                    y = tuple((a + b) % m for a, b, m in zip(y, x, parts))
                    k += 1
                return k

            assert sorted(raw_order(x) for x in raw) == _order_profile(make_group(parts))


def test_arithmetic_examples():
    g = make_group([3, 3])
    assert g.add((1, 2), (2, 2)) == (0, 1)
    assert g.neg((1, 0)) == (2, 0)
    assert make_group([2, 4]).order_of((1, 1)) == 4
    assert g.zero() == (0, 0)
    with pytest.raises(ArityError):
        g.add((1,), (1, 2))


@pytest.mark.parametrize("g", small_groups(64), ids=str)
def test_group_axioms_exhaustive(g):
    T = g.add_table
    n = g.order
    assert (T[0] == list(range(n))).all()
    assert (T == T.T).all()
    assert (T[range(n), g.neg_table] == 0).all()
    if n <= 24:
        for i in range(n):
            assert (T[T[i]] == T[i][T]).all()  # (i + j) + k == i + (j + k)
    assert g.exponent and g.order % g.exponent == 0


@pytest.mark.parametrize("g", small_groups(64), ids=str)
def test_characters_are_distinct_homomorphisms(g):
    tables = set()
    for phi in all_characters(g):
        vals = phi.phases(g)
        tables.add(tuple(vals))
        T = g.add_table
        L = g.exponent
        assert ((vals[:, None] + vals[None, :]) % L == vals[T]).all()
    assert len(tables) == g.order


def test_character_eval_examples():
    z3 = make_group([3])
    assert character_eval(z3, Character((0,)), (2,)) == 1
    assert character_eval(z3, Character((1,)), (1,)) == root_of_unity(3, 1)
    g = make_group([3, 3])
    assert character_eval(g, Character((1, 2)), (2, 2)) == 1


def _brute_force_subgroups(g):
    n = g.order
    T = g.add_table
    found = set()
    for mask in range(1 << n):
        if not mask & 1:
            continue
        S = [i for i in range(n) if mask >> i & 1]
        if all(mask >> int(T[a, b]) & 1 for a in S for b in S):
            found.add(frozenset(S))
    return found


@pytest.mark.parametrize("factors", [[2], [3], [4], [2, 2], [5], [6], [7], [8], [2, 4]])
def test_subgroups_match_subset_scan(factors):
    g = make_group(factors)
    subs = enumerate_subgroups(g)
    sets = [s.indices for s in subs]
    assert len(sets) == len(set(sets))
    assert set(sets) == _brute_force_subgroups(g)
    for s in subs:
        assert g.order % s.order == 0
        gen = {g.index(x) for x in s.generators}
        assert gen <= s.indices


def test_subgroup_counts():
    assert len(enumerate_subgroups(make_group([3, 3]))) == 6
    assert len(enumerate_subgroups(make_group([7]))) == 2
    assert len(enumerate_subgroups(make_group([4]))) == 3
    assert len(enumerate_subgroups(make_group([2, 2, 2]))) == 16


def test_subgroup_generators_minimal():
    subs = enumerate_subgroups(make_group([2, 2, 2]))
    assert max(len(s.generators) for s in subs) == 3
    for s in subs:
        assert 2 ** len(s.generators) == s.order


def test_subgroup_bound(monkeypatch):
    monkeypatch.setenv("MTC_MAX_GROUP_ORDER", "8")
    with pytest.raises(ResourceBoundError):
        enumerate_subgroups(make_group([3, 3]))


def test_parsers():
    g = parse_group("3,3")
    assert g.invariant_factors == (3, 3)
    assert parse_element(g, "(1,2)") == (1, 2)
    assert parse_group("2,4").invariant_factors == (2, 4)
    with pytest.raises(ValueError):
        parse_group("3,x")


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 12), max_size=3), st.data())
def test_reduction_idempotent(factors, data):
    g = make_group(factors)
    x = tuple(data.draw(st.integers(-50, 50)) for _ in range(g.rank))
    assert g.reduce(g.reduce(x)) == g.reduce(x)
    y = g.reduce(x)
    assert g.scale(g.order_of(y), y) == g.zero()
