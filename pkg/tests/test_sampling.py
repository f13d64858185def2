from collections import Counter
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from abcycle.sampling import (
    SeedSpec,
    derive_seed,
    sample_ab_partition,
    sample_ab_partition_given,
    sample_matching,
    sample_product_matchings,
)


def test_derive_seed_is_deterministic():
    a = derive_seed(123, 7).integers(0, 2**63, size=5)
    b = derive_seed(123, 7).integers(0, 2**63, size=5)
    c = derive_seed(123, 8).integers(0, 2**63, size=5)
    assert (a == b).all() and not (a == c).all()
    assert SeedSpec(123, 7).rng().integers(0, 10**9) == derive_seed(123, 7).integers(0, 10**9)


def test_same_seed_same_partition_sequence():
    first = [sample_ab_partition(12, 1, 2, SeedSpec(5, i)) for i in range(100)]
    again = [sample_ab_partition(12, 1, 2, SeedSpec(5, i)) for i in range(100)]
    assert first == again
    assert len(set(first)) > 90


def test_t1_partition_both_outcomes():
    counts = Counter(sample_ab_partition(2, 1, 1, SeedSpec(1, i)).A_blocks for i in range(2000))
    assert set(counts) == {((1,),), ((2,),)}
    assert abs(counts[((1,),)] - 1000) < 150


def test_n4_outcomes_enumerate_24():
    # every ordered choice of 4 disjoint singletons is reachable
    outcomes = {
        (P.A_blocks, P.B_blocks)
        for P in (sample_ab_partition(4, 1, 1, SeedSpec(2, i)) for i in range(3000))
    }
    expected = {
        (((p[0],), (p[1],)), ((p[2],), (p[3],))) for p in permutations(range(1, 5))
    }
    assert outcomes == expected and len(expected) == 24


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), t=st.integers(1, 6), a=st.integers(1, 3), b=st.integers(1, 3))
def test_partition_invariants(seed, t, a, b):
    P = sample_ab_partition(t * (a + b), a, b, seed)
    P.check()
    assert P.t == t


def test_partition_rejects_indivisible():
    with pytest.raises(ValueError):
        sample_ab_partition(7, 1, 2, 0)


def test_conditioned_partition_keeps_fixed_block():
    for i in range(50):
        P = sample_ab_partition_given(range(1, 10), 1, 2, [4], SeedSpec(3, i))
        assert P.A_blocks[0] == (4,)
        P.check()


def test_matching_examples():
    assert sample_matching(5, 2, 0, 1).blocks == ()
    pairings = Counter(sample_matching(4, 2, 2, SeedSpec(9, i)).blocks for i in range(3000))
    assert set(pairings) == {((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))}
    triples = Counter(sample_matching(6, 3, 2, SeedSpec(9, i)).blocks for i in range(5000))
    assert len(triples) == 10
    with pytest.raises(ValueError):
        sample_matching(5, 2, 3, 0)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), m=st.integers(1, 20), l=st.integers(1, 4), data=st.data())
def test_matching_invariants(seed, m, l, data):
    t = data.draw(st.integers(0, m // l))
    M = sample_matching(m, l, t, seed)
    flat = [v for blk in M.blocks for v in blk]
    assert len(M) == t and len(set(flat)) == len(flat) and set(flat) <= set(range(1, m + 1))
    assert all(len(b) == l for b in M.blocks)
    assert list(M.blocks) == sorted(M.blocks, key=min)


def test_product_matchings():
    X, Y = sample_product_matchings(2, 2, 1, 1, 0)
    assert X.blocks == ((1,), (2,)) and Y.blocks == ((3,), (4,))
    combos = Counter(sample_product_matchings(4, 4, 2, 2, SeedSpec(4, i)) for i in range(4500))
    assert len(combos) == 9
    assert min(combos.values()) > 350
    for i in range(50):
        X, Y = sample_product_matchings(6, 9, 2, 3, i)
        assert sorted(v for b in X.blocks for v in b) == list(range(1, 7))
        assert sorted(v for b in Y.blocks for v in b) == list(range(7, 16))
    with pytest.raises(ValueError):
        sample_product_matchings(4, 6, 2, 2, 0)
