"""Guarded state transformers for the social-network machine.

Every operation is a precondition predicate over the prestate plus a pure
prestate-to-poststate transformer, mirroring the two-function solver
encoding.  Guards are evaluated in the order the events list them;
extension events (transmit-to-list and the restricted variant) evaluate
the inherited transmit guards first, prefixed ``transmit.``, then their
own guards.  The first failing guard is reported.

Each call carries an acting person.  Where ownership determines the actor
(the owner transmits, deletes, grants, edits own content, runs lists) the
actor defaults to that person and an explicit mismatching actor fails the
``actor`` guard.  ``comment`` takes any actor holding view permission on
the commented content; this is the transitive-delegation mechanism under
study, so no ownership guard applies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .kernel import BRel, BSet, ElemId, product
from .snstate import SnState


@dataclass(frozen=True, slots=True)
class OpCall:
    """One operation invocation: surface-order arguments plus the actor."""

    name: str
    args: tuple
    actor: ElemId | None = None


@dataclass(frozen=True)
class FailedGuard:
    op: str
    guard_id: str
    message: str
    kind: str = "guard"  # "guard" or "disjointness"
    witness: tuple = ()


class OperationError(Exception):
    def __init__(self, failure: FailedGuard):
        super().__init__(f"{failure.op}: {failure.guard_id}: {failure.message}")
        self.failure = failure


class PreconditionFailure(OperationError):
    """A guard of the operation does not hold in the prestate."""


class DisjointnessViolation(OperationError):
    """A declared disjointness policy forbids this transmission."""


def owner_of(s: SnState, c: ElemId) -> ElemId | None:
    img = s.owner.apply(c)
    elems = img.elements()
    return elems[0] if elems else None


def listow_of(s: SnState, l: ElemId) -> ElemId | None:
    img = s.listow.apply(l)
    elems = img.elements()
    return elems[0] if elems else None


def owned_contents(s: SnState, p: ElemId) -> BSet:
    return s.owner.ran_restrict(BSet.singleton(p, s.n)).dom()


# ---------------------------------------------------------------------------
# preconditions and transformers, one pair per operation


def _fail(op: str, gid: str, msg: str, kind: str = "guard", witness: tuple = ()) -> FailedGuard:
    return FailedGuard(op, gid, msg, kind, witness)


def _pre_create_account(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    p, c = call.args
    if s.persons.member(p):
        return _fail(call.name, "guard1", f"p ∉ persons fails: person {p} already exists")
    if s.contents.member(c):
        return _fail(call.name, "guard2", f"c ∉ contents fails: content {c} already exists")
    return None


def _tr_create_account(s: SnState, call: OpCall, actor) -> SnState:
    p, c = call.args
    pair = BRel.pair(c, p, s.n)
    return s.replace(
        persons=s.persons.add(p),
        contents=s.contents.add(c),
        owner=s.owner.union(pair),
        pages=s.pages.union(pair),
        viewp=s.viewp.union(pair),
        editp=s.editp.union(pair),
    )


def _pre_upload(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, pe = call.args
    if s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ CONTENTS∖contents fails: content {c} already exists")
    if not s.persons.member(pe):
        return _fail(call.name, "guard2", f"pe ∈ persons fails: person {pe} does not exist")
    return None


def _tr_upload(s: SnState, call: OpCall, actor) -> SnState:
    c, pe = call.args
    pair = BRel.pair(c, pe, s.n)
    return s.replace(
        contents=s.contents.add(c),
        owner=s.owner.union(pair),
        pages=s.pages.union(pair),
        viewp=s.viewp.union(pair),
        editp=s.editp.union(pair),
    )


def _pre_hide(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, pe = call.args
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    if not s.persons.member(pe):
        return _fail(call.name, "guard2", f"pe ∈ persons fails: person {pe} does not exist")
    if not s.pages.member(c, pe):
        return _fail(call.name, "guard3", f"c↦pe ∈ pages fails: ({c},{pe}) not on page")
    if owner_of(s, c) == pe:
        return _fail(call.name, "guard4", f"owner(c) ≠ pe fails: {pe} owns content {c}")
    return None


def _tr_hide(s: SnState, call: OpCall, actor) -> SnState:
    c, pe = call.args
    pair = BRel.pair(c, pe, s.n)
    return s.replace(
        pages=s.pages.diff(pair),
        viewp=s.viewp.diff(pair),
        editp=s.editp.diff(pair),
    )


def _pre_make_visible(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, pe = call.args
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    if not s.persons.member(pe):
        return _fail(call.name, "guard2", f"pe ∈ persons fails: person {pe} does not exist")
    if not s.viewp.member(c, pe):
        return _fail(call.name, "guard3", f"c↦pe ∈ viewp fails: {pe} has no view permission on {c}")
    return None


def _tr_make_visible(s: SnState, call: OpCall, actor) -> SnState:
    c, pe = call.args
    return s.replace(pages=s.pages.union(BRel.pair(c, pe, s.n)))


def _transmit_guards(op: str, s: SnState, c: ElemId, prs: BSet, prefix: str = "") -> FailedGuard | None:
    if not s.contents.member(c):
        return _fail(op, prefix + "guard1", f"c ∈ contents fails: content {c} does not exist")
    if not prs.subset(s.persons):
        bad = prs.diff(s.persons).elements()[0]
        return _fail(op, prefix + "guard2", f"prs ⊆ persons fails: {bad} is not a person")
    ow = owner_of(s, c)
    if ow is not None and prs.member(ow):
        return _fail(op, prefix + "guard3", f"owner(c) ∉ prs fails: owner {ow} among recipients")
    return None


def _pre_transmit(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, prs = call.args
    return _transmit_guards(call.name, s, c, prs)


def _tr_transmit_with(s: SnState, c: ElemId, prs: BSet) -> SnState:
    grant = product(BSet.singleton(c, s.n), prs)
    return s.replace(pages=s.pages.union(grant), viewp=s.viewp.union(grant))


def _tr_transmit(s: SnState, call: OpCall, actor) -> SnState:
    c, prs = call.args
    return _tr_transmit_with(s, c, prs)


def _pre_transmit_to_list(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, l = call.args
    prs = s.listpe.apply(l)
    fail = _transmit_guards(call.name, s, c, prs, prefix="transmit.")
    if fail is not None:
        return fail
    if not s.listow.dom().member(l):
        return _fail(call.name, "guard1", f"l ∈ dom(listow) fails: list {l} has no owner")
    if s.owner.apply(c) != s.listow.apply(l):
        return _fail(
            call.name,
            "guard3",
            f"owner(c) = listow(l) fails: content {c} owned by {owner_of(s, c)}, list {l} by {listow_of(s, l)}",
        )
    for l1, l2 in s.disjointness.pairs():
        if l1 != l:
            continue
        overlap = prs.inter(s.listpe.apply(l2))
        if not overlap.is_empty():
            return _fail(
                call.name,
                "disjointness",
                f"disjointness policy ({l1},{l2}) violated: members {overlap} in both lists",
                kind="disjointness",
                witness=(l1, l2),
            )
    return None


def _tr_transmit_to_list(s: SnState, call: OpCall, actor) -> SnState:
    c, l = call.args
    return _tr_transmit_with(s, c, s.listpe.apply(l))


def _pre_ttl_restricted(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, l1, l2 = call.args
    prs = s.listpe.apply(l1).diff(s.listpe.apply(l2))
    fail = _transmit_guards(call.name, s, c, prs, prefix="transmit.")
    if fail is not None:
        return fail
    if not s.listow.dom().member(l1):
        return _fail(call.name, "guard1", f"l1 ∈ dom(listow) fails: list {l1} has no owner")
    if not s.listow.dom().member(l2):
        return _fail(call.name, "guard2", f"l2 ∈ dom(listow) fails: list {l2} has no owner")
    if l1 == l2:
        return _fail(call.name, "guard3", f"l1 ≠ l2 fails: both are list {l1}")
    if s.owner.apply(c) != s.listow.apply(l1):
        return _fail(call.name, "guard4", f"owner(c) = listow(l1) fails for list {l1}")
    if s.owner.apply(c) != s.listow.apply(l2):
        return _fail(call.name, "guard5", f"owner(c) = listow(l2) fails for list {l2}")
    return None


def _tr_ttl_restricted(s: SnState, call: OpCall, actor) -> SnState:
    c, l1, l2 = call.args
    prs = s.listpe.apply(l1).diff(s.listpe.apply(l2))
    return _tr_transmit_with(s, c, prs)


def _pre_delete(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, cts = call.args
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    ow = owner_of(s, c)
    owned = owned_contents(s, ow) if ow is not None else BSet.empty(s.n)
    if owned.cardinality() <= 1:
        return _fail(
            call.name,
            "guard2",
            f"{{c}} ⊂ dom(owner ▷ {{owner(c)}}) fails: {c} is the only content of {ow}",
        )
    if not cts.subset(s.contents):
        bad = cts.diff(s.contents).elements()[0]
        return _fail(call.name, "guard3", f"cts ⊆ contents fails: content {bad} does not exist")
    if cts.member(c):
        return _fail(call.name, "guard4", f"c ∉ cts fails: {c} listed among cts")
    removed = cts.add(c)
    for q in s.persons:
        if owned_contents(s, q).subset(removed):
            return _fail(
                call.name,
                "guard5",
                f"removal leaves person {q} with no content",
                witness=(q,),
            )
    return None


def _tr_delete(s: SnState, call: OpCall, actor) -> SnState:
    c, cts = call.args
    removed = cts.add(c)
    return s.replace(
        contents=s.contents.diff(removed),
        owner=s.owner.dom_subtract(removed),
        pages=s.pages.dom_subtract(removed),
        viewp=s.viewp.dom_subtract(removed),
        editp=s.editp.dom_subtract(removed),
    )


def _pre_comment(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, cmt, prs = call.args
    if actor is None:
        return _fail(call.name, "actor", "comment requires an explicit actor")
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    if s.contents.member(cmt):
        return _fail(call.name, "guard2", f"cmt ∉ contents fails: content {cmt} already exists")
    if not prs.subset(s.persons):
        bad = prs.diff(s.persons).elements()[0]
        return _fail(call.name, "guard3", f"prs ⊆ persons fails: {bad} is not a person")
    if not s.viewp.member(c, actor):
        return _fail(
            call.name, "guard4", f"c↦actor ∈ viewp fails: {actor} has no view permission on {c}"
        )
    return None


def _tr_comment(s: SnState, call: OpCall, actor) -> SnState:
    c, cmt, prs = call.args
    pa = prs.add(actor)
    cmt_grant = product(BSet.singleton(cmt, s.n), pa)
    c_grant = product(BSet.singleton(c, s.n), prs)
    return s.replace(
        contents=s.contents.add(cmt),
        owner=s.owner.union(BRel.pair(cmt, actor, s.n)),
        pages=s.pages.union(cmt_grant).union(c_grant),
        viewp=s.viewp.union(c_grant).union(cmt_grant),
        editp=s.editp.union(cmt_grant),
    )


def _pre_edit_owned(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, ow, newc = call.args
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    if owner_of(s, c) != ow:
        return _fail(call.name, "guard2", f"owner(c) = actor fails: {ow} does not own {c}")
    if s.contents.member(newc):
        return _fail(call.name, "guard3", f"newc ∉ contents fails: content {newc} already exists")
    return None


def _tr_edit_owned(s: SnState, call: OpCall, actor) -> SnState:
    c, ow, newc = call.args
    n = s.n
    c_set = BSet.singleton(c, n)
    new_single = BSet.singleton(newc, n)
    viewers = s.viewp.apply(c)
    on_pages = s.pages.apply(c)
    return s.replace(
        contents=s.contents.remove(c).add(newc),
        owner=s.owner.dom_subtract(c_set).union(BRel.pair(newc, ow, n)),
        pages=s.pages.dom_subtract(c_set).union(product(new_single, on_pages)),
        viewp=s.viewp.dom_subtract(c_set).union(product(new_single, viewers)),
        editp=s.editp.dom_subtract(c_set).union(BRel.pair(newc, ow, n)),
    )


def _pre_edit_not_owned(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, newc, p = call.args
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    if owner_of(s, c) == p:
        return _fail(call.name, "guard2", f"p ≠ owner(c) fails: {p} owns {c}")
    if not s.editp.member(c, p):
        return _fail(call.name, "guard3", f"c↦p ∈ editp fails: {p} has no edit permission on {c}")
    if s.contents.member(newc):
        return _fail(call.name, "guard4", f"newc ∉ contents fails: content {newc} already exists")
    return None


def _tr_edit_not_owned(s: SnState, call: OpCall, actor) -> SnState:
    c, newc, p = call.args
    n = s.n
    u = owner_of(s, c)
    u_set = BSet.singleton(u, n) if u is not None else BSet.empty(n)
    c_single = BSet.singleton(c, n)
    new_single = BSet.singleton(newc, n)
    p_pair = BRel.pair(newc, p, n)

    def move(rel: BRel) -> BRel:
        moved = rel.apply(c).diff(u_set)
        return rel.diff(product(c_single, moved)).union(product(new_single, moved))

    return s.replace(
        contents=s.contents.add(newc),
        owner=s.owner.union(p_pair),
        pages=move(s.pages).union(p_pair),
        viewp=move(s.viewp).union(p_pair),
        editp=move(s.editp).union(p_pair),
    )


def _pre_grant(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    c, p = call.args
    if not s.contents.member(c):
        return _fail(call.name, "guard1", f"c ∈ contents fails: content {c} does not exist")
    if not s.persons.member(p):
        return _fail(call.name, "guard2", f"p ∈ persons fails: person {p} does not exist")
    if owner_of(s, c) == p:
        return _fail(call.name, "guard3", f"p ≠ owner(c) fails: {p} owns {c}")
    return None


def _tr_grant_view(s: SnState, call: OpCall, actor) -> SnState:
    c, p = call.args
    return s.replace(viewp=s.viewp.union(BRel.pair(c, p, s.n)))


def _tr_grant_edit(s: SnState, call: OpCall, actor) -> SnState:
    c, p = call.args
    pair = BRel.pair(c, p, s.n)
    # editp ⊆ viewp is a safety invariant, so edit carries view along
    return s.replace(editp=s.editp.union(pair), viewp=s.viewp.union(pair))


def _pre_create_list(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    l, ow = call.args
    if s.listow.dom().member(l):
        return _fail(call.name, "guard1", f"l ∉ dom(listow) fails: list {l} already exists")
    if not s.persons.member(ow):
        return _fail(call.name, "guard2", f"ow ∈ persons fails: person {ow} does not exist")
    return None


def _tr_create_list(s: SnState, call: OpCall, actor) -> SnState:
    l, ow = call.args
    return s.replace(listow=s.listow.union(BRel.pair(l, ow, s.n)))


def _pre_add_to_list(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    l, p = call.args
    if not s.listow.dom().member(l):
        return _fail(call.name, "guard1", f"l ∈ dom(listow) fails: list {l} has no owner")
    if not s.persons.member(p):
        return _fail(call.name, "guard2", f"p ∈ persons fails: person {p} does not exist")
    return None


def _tr_add_to_list(s: SnState, call: OpCall, actor) -> SnState:
    l, p = call.args
    return s.replace(listpe=s.listpe.union(BRel.pair(l, p, s.n)))


def _pre_declare_policy(s: SnState, call: OpCall, actor) -> FailedGuard | None:
    l1, l2, _disjoint = call.args
    if not s.listow.dom().member(l1):
        return _fail(call.name, "guard1", f"l1 ∈ dom(listow) fails: list {l1} has no owner")
    if not s.listow.dom().member(l2):
        return _fail(call.name, "guard2", f"l2 ∈ dom(listow) fails: list {l2} has no owner")
    if l1 == l2:
        return _fail(call.name, "guard3", f"l1 ≠ l2 fails: a policy cannot constrain list {l1} with itself")
    return None


def _tr_declare_policy(s: SnState, call: OpCall, actor) -> SnState:
    l1, l2, disjoint = call.args
    pair = BRel.pair(l1, l2, s.n)
    out = s.replace(policies=s.policies.union(pair))
    if disjoint:
        out = out.replace(disjointness=out.disjointness.union(pair))
    return out


# ---------------------------------------------------------------------------
# registry

PERSON, CONTENT, LIST, PERSON_SET, CONTENT_SET, RECIPIENTS, FLAG = (
    "person",
    "content",
    "list",
    "person_set",
    "content_set",
    "recipients",  # person set literal or list name
    "flag",
)


@dataclass(frozen=True)
class Operation:
    name: str
    params: tuple[str, ...]
    frame: frozenset[str]
    pre: Callable
    tr: Callable
    expected_actor: Callable[[SnState, OpCall], ElemId | None]
    introduces: tuple[int, ...] = ()

    def resolve_actor(self, s: SnState, call: OpCall) -> ElemId | None:
        return call.actor if call.actor is not None else self.expected_actor(s, call)

    def precondition(self, s: SnState, call: OpCall) -> FailedGuard | None:
        actor = self.resolve_actor(s, call)
        fail = self.pre(s, call, actor)
        if fail is not None:
            return fail
        expected = self.expected_actor(s, call)
        if call.actor is not None and expected is not None and call.actor != expected:
            return _fail(self.name, "actor", f"actor {call.actor} must be {expected}")
        return None

    def transform(self, s: SnState, call: OpCall) -> SnState:
        return self.tr(s, call, self.resolve_actor(s, call))


def _arg(i: int) -> Callable[[SnState, OpCall], ElemId | None]:
    return lambda s, call: call.args[i]


def _owner_arg0(s: SnState, call: OpCall) -> ElemId | None:
    return owner_of(s, call.args[0])


def _listow_arg0(s: SnState, call: OpCall) -> ElemId | None:
    return listow_of(s, call.args[0])


def _no_default(s: SnState, call: OpCall) -> ElemId | None:
    return None


_FR = frozenset

OPERATIONS: dict[str, Operation] = {
    op.name: op
    for op in (
        Operation("create-account", (PERSON, CONTENT),
                  _FR({"persons", "contents", "owner", "pages", "viewp", "editp"}),
                  _pre_create_account, _tr_create_account, _arg(0), introduces=(0, 1)),
        Operation("upload", (CONTENT, PERSON),
                  _FR({"contents", "owner", "pages", "viewp", "editp"}),
                  _pre_upload, _tr_upload, _arg(1), introduces=(0,)),
        Operation("hide", (CONTENT, PERSON), _FR({"pages", "viewp", "editp"}),
                  _pre_hide, _tr_hide, _arg(1)),
        Operation("make-visible", (CONTENT, PERSON), _FR({"pages"}),
                  _pre_make_visible, _tr_make_visible, _arg(1)),
        Operation("transmit", (CONTENT, PERSON_SET), _FR({"pages", "viewp"}),
                  _pre_transmit, _tr_transmit, _owner_arg0),
        Operation("transmit-to-list", (CONTENT, LIST), _FR({"pages", "viewp"}),
                  _pre_transmit_to_list, _tr_transmit_to_list, _owner_arg0),
        Operation("transmit-to-list-restricted", (CONTENT, LIST, LIST), _FR({"pages", "viewp"}),
                  _pre_ttl_restricted, _tr_ttl_restricted, _owner_arg0),
        Operation("delete", (CONTENT, CONTENT_SET),
                  _FR({"contents", "owner", "pages", "viewp", "editp"}),
                  _pre_delete, _tr_delete, _owner_arg0),
        Operation("comment", (CONTENT, CONTENT, RECIPIENTS),
                  _FR({"contents", "owner", "pages", "viewp", "editp"}),
                  _pre_comment, _tr_comment, _no_default, introduces=(1,)),
        Operation("edit", (CONTENT, PERSON, CONTENT),
                  _FR({"contents", "owner", "pages", "viewp", "editp"}),
                  _pre_edit_owned, _tr_edit_owned, _arg(1), introduces=(2,)),
        Operation("edit-not-owned", (CONTENT, CONTENT, PERSON),
                  _FR({"contents", "owner", "pages", "viewp", "editp"}),
                  _pre_edit_not_owned, _tr_edit_not_owned, _arg(2), introduces=(1,)),
        Operation("grant-view", (CONTENT, PERSON), _FR({"viewp"}),
                  _pre_grant, _tr_grant_view, _owner_arg0),
        Operation("grant-edit", (CONTENT, PERSON), _FR({"editp", "viewp"}),
                  _pre_grant, _tr_grant_edit, _owner_arg0),
        Operation("create-list", (LIST, PERSON), _FR({"listow"}),
                  _pre_create_list, _tr_create_list, _arg(1), introduces=(0,)),
        Operation("add-to-list", (LIST, PERSON), _FR({"listpe"}),
                  _pre_add_to_list, _tr_add_to_list, _listow_arg0),
        Operation("declare-policy-pair", (LIST, LIST, FLAG), _FR({"policies", "disjointness"}),
                  _pre_declare_policy, _tr_declare_policy, _listow_arg0),
    )
}

# names reachable from the policy language (declare-policy-pair is API-only)
INSTRUCTION_NAMES = tuple(n for n in OPERATIONS if n != "declare-policy-pair")


def apply(s: SnState, call: OpCall) -> SnState:
    """Check the precondition, then run the transformer."""
    op = OPERATIONS[call.name]
    failure = op.precondition(s, call)
    if failure is not None:
        if failure.kind == "disjointness":
            raise DisjointnessViolation(failure)
        raise PreconditionFailure(failure)
    return op.transform(s, call)


# ---------------------------------------------------------------------------
# direct functional surface


def create_account(s: SnState, p: ElemId, c: ElemId) -> SnState:
    return apply(s, OpCall("create-account", (p, c)))


def upload(s: SnState, c: ElemId, pe: ElemId) -> SnState:
    return apply(s, OpCall("upload", (c, pe)))


def hide(s: SnState, c: ElemId, pe: ElemId) -> SnState:
    return apply(s, OpCall("hide", (c, pe)))


def make_visible(s: SnState, c: ElemId, pe: ElemId) -> SnState:
    return apply(s, OpCall("make-visible", (c, pe)))


def transmit(s: SnState, c: ElemId, prs: BSet) -> SnState:
    return apply(s, OpCall("transmit", (c, prs)))


def transmit_to_list(s: SnState, c: ElemId, l: ElemId) -> SnState:
    return apply(s, OpCall("transmit-to-list", (c, l)))


def transmit_to_list_restricted(s: SnState, c: ElemId, l1: ElemId, l2: ElemId) -> SnState:
    return apply(s, OpCall("transmit-to-list-restricted", (c, l1, l2)))


def delete(s: SnState, c: ElemId, cts: BSet, actor: ElemId | None = None) -> SnState:
    return apply(s, OpCall("delete", (c, cts), actor))


def comment(s: SnState, c: ElemId, cmt: ElemId, prs: BSet, actor: ElemId) -> SnState:
    return apply(s, OpCall("comment", (c, cmt, prs), actor))


def edit_owned(s: SnState, c: ElemId, newc: ElemId, actor: ElemId) -> SnState:
    return apply(s, OpCall("edit", (c, actor, newc)))


def edit_not_owned(s: SnState, c: ElemId, newc: ElemId, p: ElemId) -> SnState:
    return apply(s, OpCall("edit-not-owned", (c, newc, p)))


def grant_view_permission(s: SnState, c: ElemId, p: ElemId) -> SnState:
    return apply(s, OpCall("grant-view", (c, p)))


def grant_edit_permission(s: SnState, c: ElemId, p: ElemId) -> SnState:
    return apply(s, OpCall("grant-edit", (c, p)))


def create_list(s: SnState, l: ElemId, ow: ElemId) -> SnState:
    return apply(s, OpCall("create-list", (l, ow)))


def add_to_list(s: SnState, l: ElemId, p: ElemId, actor: ElemId | None = None) -> SnState:
    return apply(s, OpCall("add-to-list", (l, p), actor))


def declare_policy_pair(s: SnState, l1: ElemId, l2: ElemId, disjoint: bool) -> SnState:
    return apply(s, OpCall("declare-policy-pair", (l1, l2, disjoint)))
