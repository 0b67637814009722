"""Random generators for fuzz tests: reachable states, valid operation
calls, and small random scenarios for the checker-level tests."""

from __future__ import annotations

import random

from snverify.kernel import BSet
from snverify.operations import OPERATIONS, OpCall, apply, owner_of
from snverify.policy_lang import (
    Declaration,
    EqualityAssumption,
    Instruction,
    NameArg,
    NotSubsetAssumption,
    PolicyScript,
    Scenario,
    SetArg,
    SetName,
    SetUnion,
    SubsetAssumption,
    resolve,
)
from snverify.snstate import SnState, empty_state


def _subset(rng: random.Random, elems: list[int], n: int) -> BSet:
    return BSet.from_elements((e for e in elems if rng.random() < 0.5), n)


def valid_call(rng: random.Random, s: SnState, name: str) -> OpCall | None:
    """A parameter choice satisfying `name`'s precondition, or None."""
    n = s.n
    persons = s.persons.elements()
    contents = s.contents.elements()
    free_contents = [c for c in range(n) if c not in contents]
    free_persons = [p for p in range(n) if p not in persons]
    lists = s.listow.dom().elements()
    free_lists = [l for l in range(n) if l not in lists]

    if name == "create-account":
        if not free_persons or not free_contents:
            return None
        return OpCall(name, (rng.choice(free_persons), rng.choice(free_contents)))
    if name == "upload":
        if not free_contents or not persons:
            return None
        return OpCall(name, (rng.choice(free_contents), rng.choice(persons)))
    if name == "hide":
        candidates = [(c, p) for c, p in s.pages.pairs() if owner_of(s, c) != p]
        if not candidates:
            return None
        return OpCall(name, rng.choice(candidates))
    if name == "make-visible":
        pairs = s.viewp.pairs()
        if not pairs:
            return None
        return OpCall(name, rng.choice(pairs))
    if name == "transmit":
        owned = [c for c in contents if owner_of(s, c) is not None]
        if not owned:
            return None
        c = rng.choice(owned)
        prs = _subset(rng, [p for p in persons if p != owner_of(s, c)], n)
        return OpCall(name, (c, prs))
    if name == "transmit-to-list":
        options = []
        for l in lists:
            u = s.listow.apply(l).elements()[0]
            members = s.listpe.apply(l)
            if members.member(u):
                continue
            if any(
                l1 == l and not members.inter(s.listpe.apply(l2)).is_empty()
                for l1, l2 in s.disjointness.pairs()
            ):
                continue
            for c in s.owner.ran_restrict(BSet.singleton(u, n)).dom():
                options.append((c, l))
        if not options:
            return None
        return OpCall(name, rng.choice(options))
    if name == "transmit-to-list-restricted":
        options = []
        for l1 in lists:
            for l2 in lists:
                if l1 == l2 or s.listow.apply(l1) != s.listow.apply(l2):
                    continue
                u = s.listow.apply(l1).elements()[0]
                prs = s.listpe.apply(l1).diff(s.listpe.apply(l2))
                if prs.member(u):
                    continue
                for c in s.owner.ran_restrict(BSet.singleton(u, n)).dom():
                    options.append((c, l1, l2))
        if not options:
            return None
        return OpCall(name, rng.choice(options))
    if name == "delete":
        options = []
        for u in persons:
            owned = s.owner.ran_restrict(BSet.singleton(u, n)).dom().elements()
            if len(owned) >= 2:
                options.extend(owned)
        if not options:
            return None
        c = rng.choice(options)
        others = [x for x in contents if x != c]
        for _ in range(4):
            cts = _subset(rng, others, n)
            call = OpCall(name, (c, cts))
            if OPERATIONS[name].precondition(s, call) is None:
                return call
        return OpCall(name, (c, BSet.empty(n)))
    if name == "comment":
        pairs = s.viewp.pairs()
        if not pairs or not free_contents:
            return None
        c, actor = rng.choice(pairs)
        return OpCall(name, (c, rng.choice(free_contents), _subset(rng, persons, n)), actor)
    if name == "edit":
        owned = [(c, owner_of(s, c)) for c in contents if owner_of(s, c) is not None]
        if not owned or not free_contents:
            return None
        c, u = rng.choice(owned)
        return OpCall(name, (c, u, rng.choice(free_contents)))
    if name == "edit-not-owned":
        candidates = [(c, p) for c, p in s.editp.pairs() if owner_of(s, c) != p]
        if not candidates or not free_contents:
            return None
        c, p = rng.choice(candidates)
        return OpCall(name, (c, rng.choice(free_contents), p))
    if name in ("grant-view", "grant-edit"):
        options = [
            (c, p) for c in contents for p in persons if owner_of(s, c) != p
        ]
        if not options:
            return None
        return OpCall(name, rng.choice(options))
    if name == "create-list":
        if not free_lists or not persons:
            return None
        return OpCall(name, (rng.choice(free_lists), rng.choice(persons)))
    if name == "add-to-list":
        if not lists or not persons:
            return None
        return OpCall(name, (rng.choice(lists), rng.choice(persons)))
    if name == "declare-policy-pair":
        options = [(l1, l2) for l1 in lists for l2 in lists if l1 != l2]
        if not options:
            return None
        l1, l2 = rng.choice(options)
        return OpCall(name, (l1, l2, rng.random() < 0.5))
    raise ValueError(name)


# weighted towards account/content creation so later operations have
# material to work with
_STEP_WEIGHTS = [
    ("create-account", 4),
    ("upload", 3),
    ("create-list", 2),
    ("add-to-list", 3),
    ("transmit", 3),
    ("transmit-to-list", 2),
    ("transmit-to-list-restricted", 1),
    ("grant-view", 2),
    ("grant-edit", 2),
    ("comment", 2),
    ("make-visible", 1),
    ("hide", 1),
    ("edit", 1),
    ("edit-not-owned", 1),
    ("delete", 1),
    ("declare-policy-pair", 1),
]
_STEP_NAMES = [name for name, w in _STEP_WEIGHTS for _ in range(w)]


def reachable_state(rng: random.Random, n: int = 8, steps: int = 14) -> SnState:
    """A random state produced by applying valid operations from empty."""
    s = empty_state(n)
    for _ in range(steps):
        call = valid_call(rng, s, rng.choice(_STEP_NAMES))
        if call is not None:
            s = apply(s, call)
    return s


def state_pool(seed: int, count: int, n: int = 8, steps: int = 14) -> list[SnState]:
    rng = random.Random(seed)
    return [reachable_state(rng, n, steps) for _ in range(count)]


# ---------------------------------------------------------------------------
# random scenarios (for the VC-chain and compliance agreement tests)

_TEMPLATE_OPS = [
    "create-account",
    "upload",
    "create-list",
    "add-to-list",
    "transmit",
    "transmit-to-list",
    "grant-view",
    "grant-edit",
    "edit",
    "hide",
    "make-visible",
]


def random_policy(rng: random.Random, name: str, length: int,
                  declared: list[str], contents: list[str], lists: list[str]) -> PolicyScript:
    """A random instruction sequence; may or may not be executable.

    Declared persons carry accounts in the base state, so uploads and
    grants over them work; guard violations come from ordering (content
    used before upload, lists used before creation, duplicate uploads).
    """
    instrs = []
    for _ in range(length):
        op = rng.choice(_TEMPLATE_OPS)
        if op == "create-account":
            args = (NameArg("fresh-ow"), NameArg("fresh-rc"))
        elif op == "upload":
            args = (NameArg(rng.choice(contents)), NameArg(rng.choice(declared)))
        elif op == "create-list":
            args = (NameArg(rng.choice(lists)), NameArg(rng.choice(declared)))
        elif op == "add-to-list":
            args = (NameArg(rng.choice(lists)), NameArg(rng.choice(declared)))
        elif op == "transmit":
            members = tuple(x for x in declared if rng.random() < 0.5)
            args = (NameArg(rng.choice(contents)), SetArg(members))
        elif op == "transmit-to-list":
            args = (NameArg(rng.choice(contents)), NameArg(rng.choice(lists)))
        elif op in ("grant-view", "grant-edit", "hide", "make-visible"):
            args = (NameArg(rng.choice(contents)), NameArg(rng.choice(declared)))
        else:  # edit
            args = (
                NameArg(rng.choice(contents)),
                NameArg(rng.choice(declared)),
                NameArg(rng.choice(contents)),
            )
        instrs.append(Instruction(op, args))
    return PolicyScript(name, tuple(instrs))


def random_scenario(rng: random.Random, n: int = 4, length: int = 6):
    """A resolved one-policy scenario over a tiny name pool, or None."""
    declared = ["d0", "d1"]
    contents = ["c0"]
    lists = ["l0"]
    sc = Scenario(
        universe=n,
        declarations=(
            Declaration("person", tuple(declared)),
            Declaration("content", tuple(contents)),
            Declaration("list", tuple(lists)),
        ),
        facts=(),
        assumptions=(),
        policies=(random_policy(rng, "P", rng.randint(1, length), declared, contents, lists),),
        checks=(),
    )
    try:
        return resolve(sc)
    except Exception:
        return None


def random_compliance_scenario(rng: random.Random):
    """An old/new policy pair at n=4 with up to two varying lists.

    Mostly-executable shapes: both policies create the same account and
    upload the same content, then differ in how they publish it.
    """
    base = (
        Instruction("create-account", (NameArg("ow"), NameArg("rc"))),
        Instruction("upload", (NameArg("content"), NameArg("ow"))),
    )

    def publisher(list_name: str) -> tuple[Instruction, ...]:
        return (
            Instruction("create-list", (NameArg(list_name), NameArg("ow"))),
            Instruction("transmit-to-list", (NameArg("content"), NameArg(list_name))),
        )

    old = PolicyScript("Old", base + publisher("l0"))
    shapes = []
    shapes.append(base + publisher("l0"))  # identical
    shapes.append(base + publisher("l1"))  # different list
    shapes.append(  # restricted send over both lists
        base
        + (
            Instruction("create-list", (NameArg("l0"), NameArg("ow"))),
            Instruction("create-list", (NameArg("l1"), NameArg("ow"))),
            Instruction("transmit-to-list-restricted",
                        (NameArg("content"), NameArg("l0"), NameArg("l1"))),
        )
    )
    shapes.append(base + publisher("l0") + (  # extra direct grant
        Instruction("grant-view", (NameArg("content"), NameArg("d0"))),
    ))
    shapes.append(base + publisher("l0") + (  # extra direct transmit
        Instruction("transmit", (NameArg("content"), SetArg(("d1",)))),
    ))
    shapes.append(base)  # publishes nothing
    shapes.append(base + publisher("l1") + (  # both lists
        Instruction("transmit-to-list", (NameArg("content"), NameArg("l1"))),
    ))
    shapes.append(base + (  # inexecutable: the list is never created
        Instruction("transmit-to-list", (NameArg("content"), NameArg("l1"))),
    ))
    new = PolicyScript("New", rng.choice(shapes))

    assumption_choices: list[tuple] = [
        (),
        (SubsetAssumption(SetName("l0"), SetName("l1")),),
        (SubsetAssumption(SetName("l1"), SetName("l0")),),
        (NotSubsetAssumption("l1", "l0"),),
        (EqualityAssumption(SetName("l1"), SetName("l0")),),
        (EqualityAssumption(SetName("l1"), SetUnion(SetName("l0"), SetName("l0"))),),
    ]
    sc = Scenario(
        universe=4,
        declarations=(
            Declaration("person", ("d0", "d1")),
            Declaration("list", ("l0", "l1")),
        ),
        facts=(),
        assumptions=rng.choice(assumption_choices),
        policies=(old, new),
        checks=(),
    )
    try:
        return resolve(sc)
    except Exception:
        return None
