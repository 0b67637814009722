"""Kernel bit algebra against the naive pair-set oracle."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from snverify.kernel import (
    BRel,
    BSet,
    ElementOutOfRange,
    UniverseConfig,
    UniverseError,
    identity_on,
    product,
)


def rand_set(rng, n):
    return BSet(rng.getrandbits(n), n)


def rand_rel(rng, n):
    return BRel(rng.getrandbits(n * n), n)


def test_universe_config_bounds():
    assert UniverseConfig().n == 8
    assert UniverseConfig(16).rel_mask == (1 << 256) - 1
    with pytest.raises(UniverseError):
        UniverseConfig(0)
    with pytest.raises(UniverseError):
        UniverseConfig(17)


def test_singleton_is_low_bit():
    # element 0 occupies the lowest bit
    assert BSet.singleton(0, 8).bits == 0b00000001
    assert BSet.singleton(7, 8).bits == 0b10000000


def test_pair_bit_position():
    # pair (2,1) sits at bit 8*2+1 = 17
    assert BRel.pair(2, 1, 8).bits == 1 << 17


def test_element_range_errors():
    with pytest.raises(ElementOutOfRange):
        BSet.singleton(8, 8)
    with pytest.raises(ElementOutOfRange):
        BRel.pair(0, 9, 8)
    with pytest.raises(ElementOutOfRange):
        BSet.empty(4).member(4)


def test_mixed_universe_rejected():
    with pytest.raises(UniverseError):
        BSet.empty(4).union(BSet.empty(8))


def test_set_examples():
    e = BSet.empty(8)
    assert e.subset(BSet.from_elements([1, 5], 8))
    got = BSet.from_elements([1, 3], 8).union(BSet.from_elements([3, 5], 8))
    assert got == BSet.from_elements([1, 3, 5], 8)
    assert got.cardinality() == 3


def test_rel_examples():
    n = 8
    assert BRel.empty(n).union(BRel.pair(3, 4, n)) == BRel.pair(3, 4, n)
    assert BRel.from_pairs([(0, 1)], n).subset(BRel.from_pairs([(0, 1), (3, 5)], n))
    r = BRel.from_pairs([(0, 1), (0, 2), (3, 5)], n)
    assert r.ran() == BSet.from_elements([1, 2, 5], n)
    assert r.dom() == BSet.from_elements([0, 3], n)
    assert r.ran_restrict(BSet.from_elements([1, 5], n)) == BRel.from_pairs([(0, 1), (3, 5)], n)
    assert r.dom_subtract(BSet.singleton(0, n)) == BRel.from_pairs([(3, 5)], n)
    assert r.image(BSet.singleton(0, n)) == BSet.from_elements([1, 2], n)
    assert BRel.empty(n).apply(4) == BSet.empty(n)
    assert r.image(BSet.empty(n)) == BSet.empty(n)
    assert BRel.from_pairs([(0, 2)], n).compose(BRel.from_pairs([(2, 5)], n)) == BRel.from_pairs(
        [(0, 5)], n
    )
    assert BRel.empty(n).inverse() == BRel.empty(n)


def test_product_examples():
    n = 8
    got = product(BSet.singleton(2, n), BSet.from_elements([1, 3], n))
    assert got == BRel.from_pairs([(2, 1), (2, 3)], n)
    assert product(BSet.empty(n), BSet.universe(n)) == BRel.empty(n)
    assert product(BSet.singleton(0, n), BSet.singleton(0, n)) == BRel.pair(0, 0, n)


def test_override_disjoint_is_union():
    n = 8
    r = BRel.from_pairs([(0, 1)], n)
    q = BRel.from_pairs([(3, 5)], n)
    assert r.override(q) == r.union(q)


def test_function_predicates():
    n = 8
    assert not BRel.from_pairs([(0, 1), (0, 2)], n).is_partial_function()
    assert BRel.from_pairs([(0, 1)], n).is_total_on(BSet.empty(n))
    assert BRel.from_pairs([(0, 1), (3, 1)], n).is_surjective_onto(BSet.singleton(1, n))


def test_rendering():
    n = 8
    assert str(BSet.from_elements([5, 1, 3], n)) == "{1,3,5}"
    assert str(BSet.empty(n)) == "{}"
    assert str(BRel.from_pairs([(3, 5), (0, 1)], n)) == "{(0,1),(3,5)}"
    assert BSet.singleton(0, n).hex() == "0x01"
    assert BRel.pair(2, 1, n).hex() == "0x0000000000020000"
    assert BSet.singleton(0, 6).hex() == "0x01"  # ceil(6/4) digits


# ---------------------------------------------------------------------------
# oracle equivalence

SET_OPS = ["union", "inter", "diff", "subset", "member", "cardinality"]


def check_rel_against_oracle(r: BRel, q: BRel, s: BSet, d: int) -> None:
    n = r.n
    rp, qp, se = naive.decode_rel(r), naive.decode_rel(q), naive.decode_set(s)
    assert naive.decode_rel(r.union(q)) == rp | qp
    assert naive.decode_rel(r.inter(q)) == rp & qp
    assert naive.decode_rel(r.diff(q)) == rp - qp
    assert r.subset(q) == (rp <= qp)
    assert naive.decode_set(r.dom()) == naive.n_dom(rp)
    assert naive.decode_set(r.ran()) == naive.n_ran(rp)
    assert naive.decode_rel(r.dom_restrict(s)) == naive.n_domres(se, rp)
    assert naive.decode_rel(r.dom_subtract(s)) == naive.n_domsub(se, rp)
    assert naive.decode_rel(r.ran_restrict(s)) == naive.n_ranres(rp, se)
    assert naive.decode_rel(r.ran_subtract(s)) == naive.n_ransub(rp, se)
    assert naive.decode_set(r.image(s)) == naive.n_image(rp, se)
    assert naive.decode_set(r.apply(d)) == naive.n_image(rp, {d})
    assert naive.decode_rel(r.compose(q)) == naive.n_compose(rp, qp)
    assert naive.decode_rel(r.inverse()) == naive.n_inverse(rp)
    assert naive.decode_rel(r.override(q)) == naive.n_override(rp, qp)
    assert naive.decode_rel(identity_on(s)) == naive.n_identity(se)
    assert r.is_partial_function() == naive.n_is_partial_function(rp)
    assert r.is_total_on(s) == naive.n_is_total_on(rp, se)
    assert r.is_surjective_onto(s) == naive.n_is_surjective_onto(rp, se)


def check_set_against_oracle(a: BSet, b: BSet, e: int) -> None:
    ae, be = naive.decode_set(a), naive.decode_set(b)
    assert naive.decode_set(a.union(b)) == ae | be
    assert naive.decode_set(a.inter(b)) == ae & be
    assert naive.decode_set(a.diff(b)) == ae - be
    assert a.subset(b) == (ae <= be)
    assert a.member(e) == (e in ae)
    assert a.cardinality() == len(ae)
    assert naive.decode_rel(product(a, b)) == naive.n_product(ae, be)


def test_oracle_equivalence_random_n8():
    rng = random.Random(0x5E7)
    n = 8
    for _ in range(1500):
        r, q = rand_rel(rng, n), rand_rel(rng, n)
        s = rand_set(rng, n)
        d = rng.randrange(n)
        check_rel_against_oracle(r, q, s, d)
        check_set_against_oracle(s, rand_set(rng, n), d)


def test_oracle_equivalence_exhaustive_n2():
    n = 2
    for rb in range(1 << 4):
        for qb in range(1 << 4):
            for sb in range(1 << 2):
                check_rel_against_oracle(BRel(rb, n), BRel(qb, n), BSet(sb, n), rb % n)


def test_no_stray_bits_after_operations():
    rng = random.Random(7)
    for n in (3, 5, 8, 16):
        set_mask = (1 << n) - 1
        rel_mask = (1 << (n * n)) - 1
        for _ in range(300):
            r, q, s = rand_rel(rng, n), rand_rel(rng, n), rand_set(rng, n)
            for value in (
                r.union(q), r.diff(q), r.dom_subtract(s), r.ran_subtract(s),
                r.compose(q), r.inverse(), r.override(q), product(s, s),
            ):
                assert value.bits & ~rel_mask == 0
            for value in (s.diff(BSet(set_mask, n)), r.dom(), r.ran(), r.image(s)):
                assert value.bits & ~set_mask == 0


# ---------------------------------------------------------------------------
# algebraic laws


def _laws(r: BRel, s: BSet) -> None:
    # relational image via domain restriction
    assert r.image(s) == r.dom_restrict(s).ran()
    # domain subtraction via restriction by the complement of s inside dom
    assert r.dom_subtract(s) == r.dom_restrict(r.dom().diff(s))
    # range restriction as composition with the identity on s
    assert r.ran_restrict(s) == r.compose(identity_on(s))


def test_laws_exhaustive_small():
    for n in (1, 2, 3):
        for rb in range(1 << (n * n)):
            for sb in range(1 << n):
                _laws(BRel(rb, n), BSet(sb, n))


@pytest.mark.slow
def test_laws_exhaustive_n4():
    n = 4
    for sb in range(1 << n):
        s = BSet(sb, n)
        for rb in range(1 << (n * n)):
            _laws(BRel(rb, n), s)


@given(st.integers(0, (1 << 64) - 1), st.integers(0, 255), st.integers(0, 255))
@settings(max_examples=300, deadline=None)
def test_laws_random_n8(rb, sb1, sb2):
    r = BRel(rb, 8)
    _laws(r, BSet(sb1, 8))
    # image monotonicity
    a, b = BSet(sb1 & sb2, 8), BSet(sb2, 8)
    assert a.subset(b)
    assert r.image(a).subset(r.image(b))
