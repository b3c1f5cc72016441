import itertools
import math

import pytest
from hypothesis import given, strategies as st

from gradcon.groups import (
    GroupSpec,
    invariant_factors,
    make_pair,
    mul,
    pair_index,
    pair_key,
    parse_element,
    parse_group,
    parse_pair_key,
)

SMALL_GROUPS = ["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z2xZ4", "Z2xZ2xZ2"]


@pytest.mark.parametrize(
    "text, factors, order",
    [("Z2", (2,), 2), ("Z2xZ3", (6,), 6), ("Z2xZ4", (2, 4), 8), ("z4xz2", (2, 4), 8), ("Z1", (), 1)],
)
def test_parse_group(text, factors, order):
    spec = parse_group(text)
    assert spec.invariant_factors == factors
    assert spec.order == order


@pytest.mark.parametrize("text", ["", "Z", "Z0", "Z2xZ1", "Q8", "Z2*Z3", "Z-2"])
def test_parse_group_rejects(text):
    with pytest.raises(ValueError):
        parse_group(text)


def test_str_round_trips():
    for name in SMALL_GROUPS:
        spec = parse_group(name)
        assert parse_group(str(spec)) == spec


@given(st.lists(st.integers(1, 30), min_size=1, max_size=4))
def test_invariant_factors_divide_and_keep_order(orders):
    factors = invariant_factors(orders)
    assert math.prod(factors) == math.prod(orders)
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0
    assert all(k >= 2 for k in factors)


@given(st.integers(2, 40), st.integers(2, 40))
def test_coprime_product_is_cyclic(a, b):
    if math.gcd(a, b) == 1:
        assert parse_group(f"Z{a}xZ{b}") == parse_group(f"Z{a * b}")


def test_mul_examples():
    z4 = parse_group("Z4")
    assert mul((1,), (3,), z4) == (0,)
    z24 = parse_group("Z2xZ4")
    assert mul((1, 2), (1, 3), z24) == (0, 1)
    for g in z24.elements:
        assert mul(g, z24.identity, z24) == g
    with pytest.raises(ValueError):
        mul((1,), (1, 1), z24)


@pytest.mark.parametrize("name", [g for g in SMALL_GROUPS if parse_group(g).order <= 8])
def test_mul_associative_commutative(name):
    spec = parse_group(name)
    els = spec.elements
    for g, h in itertools.product(els, repeat=2):
        assert spec.mul(g, h) == spec.mul(h, g)
        assert spec.mul(g, spec.inverse(g)) == spec.identity
    for g, h, k in itertools.product(els, repeat=3):
        assert spec.mul(spec.mul(g, h), k) == spec.mul(g, spec.mul(h, k))


def test_pair_index_examples():
    z2 = pair_index(parse_group("Z2"))
    assert list(z2) == [((0,), (0,)), ((0,), (1,)), ((1,), (1,))]
    assert len(pair_index(parse_group("Z3"))) == 6
    assert len(pair_index(parse_group("Z8"))) == 36
    assert list(pair_index(parse_group("Z1"))) == [((), ())]


@pytest.mark.parametrize("name", SMALL_GROUPS)
def test_pair_index_is_bijective(name):
    spec = parse_group(name)
    pidx = pair_index(spec)
    n = spec.order
    assert len(pidx) == n * (n + 1) // 2
    assert list(pidx) == sorted(pidx)
    for i, (g, h) in enumerate(pidx):
        assert g <= h
        assert pidx.index(g, h) == pidx.index(h, g) == i
    table = pidx.by_element_index
    for a, g in enumerate(spec.elements):
        for b, h in enumerate(spec.elements):
            assert table[a][b] == pidx.index(g, h)


def test_pair_keys_round_trip():
    spec = parse_group("Z2xZ4")
    for p in pair_index(spec):
        assert parse_pair_key(pair_key(p), spec) == p
    assert parse_pair_key("1,3|0,1", spec) == make_pair((1, 3), (0, 1))
    assert parse_element("1,5", spec) == (1, 1)
    with pytest.raises(ValueError):
        parse_pair_key("0,1", spec)
    with pytest.raises(ValueError):
        parse_element("1", spec)


def test_group_spec_normalizes_on_construction():
    assert GroupSpec((4, 2)) == GroupSpec((2, 4))
    assert GroupSpec((3, 2)).invariant_factors == (6,)
    assert parse_group("Z2xZ2").two_rank() == 2
    assert parse_group("Z2xZ4").two_rank() == 2
    assert parse_group("Z3").two_rank() == 0
