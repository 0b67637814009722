"""Naive reference implementations used as test oracles.

Everything here works on explicit element sets and pair sets (frozensets
of ints and int tuples), never on bit masks, so it is an independent
route to the same answers as the kernel.
"""

from __future__ import annotations

from snverify.kernel import BRel, BSet
from snverify.snstate import SnState

Elems = frozenset
Pairs = frozenset


def set_of_mask(mask: int, n: int) -> frozenset:
    return frozenset(e for e in range(n) if mask >> e & 1)


def rel_of_mask(mask: int, n: int) -> frozenset:
    return frozenset((i // n, i % n) for i in range(n * n) if mask >> i & 1)


def decode_set(b: BSet) -> frozenset:
    return set_of_mask(b.bits, b.n)


def decode_rel(r: BRel) -> frozenset:
    return rel_of_mask(r.bits, r.n)


def encode_set(elems, n: int) -> BSet:
    return BSet.from_elements(elems, n)


def encode_rel(pairs, n: int) -> BRel:
    return BRel.from_pairs(pairs, n)


def n_dom(pairs) -> frozenset:
    return frozenset(d for d, _ in pairs)


def n_ran(pairs) -> frozenset:
    return frozenset(r for _, r in pairs)


def n_domres(s, pairs) -> frozenset:
    return frozenset((d, r) for d, r in pairs if d in s)


def n_domsub(s, pairs) -> frozenset:
    return frozenset((d, r) for d, r in pairs if d not in s)


def n_ranres(pairs, s) -> frozenset:
    return frozenset((d, r) for d, r in pairs if r in s)


def n_ransub(pairs, s) -> frozenset:
    return frozenset((d, r) for d, r in pairs if r not in s)


def n_image(pairs, s) -> frozenset:
    return frozenset(r for d, r in pairs if d in s)


def n_compose(q, r) -> frozenset:
    return frozenset((x, z) for x, y in q for y2, z in r if y == y2)


def n_inverse(pairs) -> frozenset:
    return frozenset((r, d) for d, r in pairs)


def n_override(r, q) -> frozenset:
    qdom = n_dom(q)
    return frozenset(q) | frozenset((d, e) for d, e in r if d not in qdom)


def n_identity(s) -> frozenset:
    return frozenset((x, x) for x in s)


def n_product(a, b) -> frozenset:
    return frozenset((x, y) for x in a for y in b)


def n_is_partial_function(pairs) -> bool:
    return len(n_dom(pairs)) == len(pairs)


def n_is_total_on(pairs, a) -> bool:
    return frozenset(a) <= n_dom(pairs)


def n_is_surjective_onto(pairs, b) -> bool:
    return frozenset(b) <= n_ran(pairs)


def naive_violated_invariants(s: SnState) -> set[str]:
    """Re-derive I1..I7 from decoded sets; returns violated invariant ids."""
    persons = decode_set(s.persons)
    contents = decode_set(s.contents)
    owner = decode_rel(s.owner)
    pages = decode_rel(s.pages)
    viewp = decode_rel(s.viewp)
    editp = decode_rel(s.editp)
    listpe = decode_rel(s.listpe)
    listow = decode_rel(s.listow)
    policies = decode_rel(s.policies)
    disjointness = decode_rel(s.disjointness)
    cp = n_product(contents, persons)

    bad: set[str] = set()
    if not (
        n_is_partial_function(owner)
        and n_dom(owner) == contents
        and n_ran(owner) == persons
    ):
        bad.add("I1")
    if not (pages <= cp and owner <= pages):
        bad.add("I2")
    if not (owner <= viewp and owner <= editp and editp <= viewp and pages <= viewp):
        bad.add("I3")
    if not (viewp <= cp and editp <= cp):
        bad.add("I4")
    if not (
        n_is_partial_function(listow)
        and n_ran(listow) <= persons
        and n_ran(listpe) <= persons
        and n_dom(listpe) <= n_dom(listow)
    ):
        bad.add("I5")
    lo = n_dom(listow)
    if not (policies <= n_product(lo, lo) and all(l1 != l2 for l1, l2 in policies)):
        bad.add("I6")
    if not disjointness <= policies:
        bad.add("I7")
    return bad
