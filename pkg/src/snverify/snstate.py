"""The ten-field social-network state and its safety-invariant checker.

The state mirrors the verification back end's tuple layout:

    persons contents owner pages viewp editp
    listpe listow policies disjointness

Safety invariants checked by :func:`check_invariants`:

  I1  owner is a partial function, total on contents and surjective onto
      persons (dom(owner) = contents, ran(owner) = persons)
  I2  pages ⊆ contents × persons and owner ⊆ pages
  I3  owner ⊆ viewp, owner ⊆ editp, editp ⊆ viewp, pages ⊆ viewp
  I4  viewp ⊆ contents × persons and editp ⊆ contents × persons
  I5  listow is a partial function with ran(listow) ⊆ persons,
      ran(listpe) ⊆ persons and dom(listpe) ⊆ dom(listow)
  I6  policies ⊆ dom(listow) × dom(listow) and policies is irreflexive
  I7  disjointness ⊆ policies

Person, content and list sorts may reuse the same integer id; relations
are interpreted by field, never by id alone.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .kernel import BRel, BSet, product

FIELDS = (
    "persons",
    "contents",
    "owner",
    "pages",
    "viewp",
    "editp",
    "listpe",
    "listow",
    "policies",
    "disjointness",
)


@dataclass(frozen=True, slots=True)
class SnState:
    persons: BSet
    contents: BSet
    owner: BRel
    pages: BRel
    viewp: BRel
    editp: BRel
    listpe: BRel
    listow: BRel
    policies: BRel
    disjointness: BRel

    @property
    def n(self) -> int:
        return self.persons.n

    def replace(self, **changes) -> "SnState":
        return dataclasses.replace(self, **changes)


def empty_state(n: int = 8) -> SnState:
    return SnState(
        persons=BSet.empty(n),
        contents=BSet.empty(n),
        owner=BRel.empty(n),
        pages=BRel.empty(n),
        viewp=BRel.empty(n),
        editp=BRel.empty(n),
        listpe=BRel.empty(n),
        listow=BRel.empty(n),
        policies=BRel.empty(n),
        disjointness=BRel.empty(n),
    )


@dataclass(frozen=True)
class InvariantViolation:
    invariant_id: str
    message: str
    witness: tuple[int, ...] | None = None


def _first_pair(rel: BRel) -> tuple[int, int] | None:
    pairs = rel.pairs()
    return pairs[0] if pairs else None


def _containment(rel_name: str, rel: BRel, other_name: str, other: BRel, inv: str) -> InvariantViolation | None:
    stray = rel.diff(other)
    if stray.is_empty():
        return None
    pair = _first_pair(stray)
    assert pair is not None
    return InvariantViolation(inv, f"{rel_name} has pair {pair} outside {other_name}", pair)


def _check_i1(s: SnState) -> InvariantViolation | None:
    for d in s.owner.dom():
        img = s.owner.apply(d)
        if img.cardinality() > 1:
            e1, e2 = img.elements()[:2]
            return InvariantViolation("I1", f"content {d} has two owners ({e1} and {e2})", (d, e1, e2))
    stray = s.owner.dom().diff(s.contents)
    if not stray.is_empty():
        c = stray.elements()[0]
        return InvariantViolation("I1", f"owner maps non-content {c}", (c,))
    unowned = s.contents.diff(s.owner.dom())
    if not unowned.is_empty():
        c = unowned.elements()[0]
        return InvariantViolation("I1", f"content {c} has no owner", (c,))
    stray = s.owner.ran().diff(s.persons)
    if not stray.is_empty():
        p = stray.elements()[0]
        return InvariantViolation("I1", f"owner maps to non-person {p}", (p,))
    idle = s.persons.diff(s.owner.ran())
    if not idle.is_empty():
        p = idle.elements()[0]
        return InvariantViolation("I1", f"person {p} owns no content", (p,))
    return None


def _check_i2(s: SnState) -> InvariantViolation | None:
    cp = product(s.contents, s.persons)
    return _containment("pages", s.pages, "contents x persons", cp, "I2") or _containment(
        "owner", s.owner, "pages", s.pages, "I2"
    )


def _check_i3(s: SnState) -> InvariantViolation | None:
    return (
        _containment("owner", s.owner, "viewp", s.viewp, "I3")
        or _containment("owner", s.owner, "editp", s.editp, "I3")
        or _containment("editp", s.editp, "viewp", s.viewp, "I3")
        or _containment("pages", s.pages, "viewp", s.viewp, "I3")
    )


def _check_i4(s: SnState) -> InvariantViolation | None:
    cp = product(s.contents, s.persons)
    return _containment("viewp", s.viewp, "contents x persons", cp, "I4") or _containment(
        "editp", s.editp, "contents x persons", cp, "I4"
    )


def _check_i5(s: SnState) -> InvariantViolation | None:
    if not s.listow.is_partial_function():
        for d in s.listow.dom():
            img = s.listow.apply(d)
            if img.cardinality() > 1:
                e1, e2 = img.elements()[:2]
                return InvariantViolation("I5", f"list {d} has two owners ({e1} and {e2})", (d, e1, e2))
    stray = s.listow.ran().diff(s.persons)
    if not stray.is_empty():
        p = stray.elements()[0]
        return InvariantViolation("I5", f"listow maps to non-person {p}", (p,))
    stray = s.listpe.ran().diff(s.persons)
    if not stray.is_empty():
        p = stray.elements()[0]
        return InvariantViolation("I5", f"list member {p} is not a person", (p,))
    orphan = s.listpe.dom().diff(s.listow.dom())
    if not orphan.is_empty():
        l = orphan.elements()[0]
        return InvariantViolation("I5", f"list {l} has members but no owner", (l,))
    return None


def _check_i6(s: SnState) -> InvariantViolation | None:
    ll = product(s.listow.dom(), s.listow.dom())
    bad = _containment("policies", s.policies, "dom(listow) x dom(listow)", ll, "I6")
    if bad is not None:
        return bad
    for l1, l2 in s.policies.pairs():
        if l1 == l2:
            return InvariantViolation("I6", f"policy pair constrains list {l1} with itself", (l1, l2))
    return None


def _check_i7(s: SnState) -> InvariantViolation | None:
    return _containment("disjointness", s.disjointness, "policies", s.policies, "I7")


def check_invariants(s: SnState) -> list[InvariantViolation]:
    """Empty list iff I1..I7 all hold; else one entry per violated invariant."""
    checks = (_check_i1, _check_i2, _check_i3, _check_i4, _check_i5, _check_i6, _check_i7)
    out = []
    for check in checks:
        v = check(s)
        if v is not None:
            out.append(v)
    return out


def state_to_json(s: SnState) -> dict:
    """Canonical serialization: ten keys in tuple order, sorted element/pair lists."""
    out: dict = {}
    for name in FIELDS:
        value = getattr(s, name)
        if isinstance(value, BSet):
            out[name] = value.elements()
        else:
            out[name] = [list(p) for p in value.pairs()]
    return out
