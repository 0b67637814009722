"""Observation semantics, purge, and the non-interference check.

A user's observation over a trace is the pair of (view, edit) permission
relations built by folding a per-operation rule over the trace, oldest
operation first; each rule's guard (content ownership, list ownership,
edit permission) is evaluated in the state holding immediately before
that operation executed.  Purging removes from the trace the operations a
given user owns, by per-operation ownership conditions evaluated the same
way.  User t does not interfere with user u's observations exactly when
the purged trace observes the same pair.

The purge walk keeps or drops each operation and continues over the rest.
The literal calculus instead stops at the first kept operation (it returns
the whole remaining sequence untouched), which makes purging a no-op on
most traces; that behaviour is available behind ``strict_paper_purge``.

``comment`` is owned by the content owner and by every recipient, since
recipients receive edit permission over the comment; under the
``owner-only`` ownership mode only the commented content's owner counts,
which models networks where only a comment's author may edit it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .kernel import BRel, BSet, product
from .operations import listow_of, owner_of
from .policy_lang import ResolvedScenario, RInstr
from .snstate import SnState
from .vcgen import RunResult, StepRecord, ground_environment, run_instructions

PRS_MEMBERS_OWN = "prs-members-own"
OWNER_ONLY = "owner-only"


@dataclass(frozen=True)
class Observation:
    view: BRel
    edit: BRel

    @staticmethod
    def empty(n: int) -> "Observation":
        return Observation(BRel.empty(n), BRel.empty(n))

    def sym_diff(self, other: "Observation") -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
        dv = self.view.union(other.view).diff(self.view.inter(other.view))
        de = self.edit.union(other.edit).diff(self.edit.inter(other.edit))
        return dv.pairs(), de.pairs()


@dataclass(frozen=True)
class NiConfig:
    comment_ownership: str = PRS_MEMBERS_OWN
    strict_paper_purge: bool = False

    def __post_init__(self) -> None:
        if self.comment_ownership not in (PRS_MEMBERS_OWN, OWNER_ONLY):
            raise ValueError(f"unknown comment ownership mode {self.comment_ownership!r}")


@dataclass
class NiVerdict:
    status: str  # "clean", "interferes", "trace-inexecutable", "purged-trace-inexecutable"
    actor: int
    observer: int
    observation: Observation | None = None
    observation_purged: Observation | None = None
    diff_view: list[tuple[int, int]] = dataclass_field(default_factory=list)
    diff_edit: list[tuple[int, int]] = dataclass_field(default_factory=list)
    removed_indices: list[int] = dataclass_field(default_factory=list)
    failing_index: int | None = None
    failing_message: str | None = None


def _pair(c: int, p: int, n: int) -> BRel:
    return BRel.pair(c, p, n)


def _grant(c: int, prs: BSet) -> BRel:
    return product(BSet.singleton(c, prs.n), prs)


def observe_step(obs: Observation, step: StepRecord, u: int) -> Observation:
    """Apply one operation's observation rule for observer u."""
    name = step.call.name
    args = step.call.args
    pre: SnState = step.prestate
    n = pre.n
    view, edit = obs.view, obs.edit

    if name == "create-account":
        p, c = args
        if p == u:
            add = _pair(c, u, n)
            return Observation(view.union(add), edit.union(add))
        return obs
    if name == "upload":
        c, pe = args
        if pe == u:
            add = _pair(c, u, n)
            return Observation(view.union(add), edit.union(add))
        return obs
    if name == "hide":
        c, pe = args
        if owner_of(pre, c) != pe and pe == u:
            gone = _pair(c, pe, n)
            return Observation(view.diff(gone), edit.diff(gone))
        return obs
    if name == "make-visible":
        return obs
    if name == "transmit":
        c, prs = args
        if owner_of(pre, c) == u and not prs.member(u):
            return Observation(view.union(_grant(c, prs)), edit)
        return obs
    if name == "transmit-to-list":
        c, l = args
        prs = pre.listpe.apply(l)
        if not prs.member(u) and owner_of(pre, c) == u and listow_of(pre, l) == u:
            return Observation(view.union(_grant(c, prs)), edit)
        return obs
    if name == "transmit-to-list-restricted":
        c, l1, l2 = args
        prs = pre.listpe.apply(l1).diff(pre.listpe.apply(l2))
        if not prs.member(u) and owner_of(pre, c) == u and listow_of(pre, l1) == u:
            return Observation(view.union(_grant(c, prs)), edit)
        return obs
    if name == "delete":
        c, cts = args
        if owner_of(pre, c) == u:
            removed = cts.add(c)
            return Observation(view.dom_subtract(removed), edit.dom_subtract(removed))
        return obs
    if name == "comment":
        c, cmt, prs = args
        # the comment's owner is its author, fixed by this very operation
        if owner_of(pre, c) == u or (step.actor is not None and prs.member(step.actor)):
            add = _grant(cmt, prs.add(u))
            return Observation(view.union(add), edit.union(add))
        return obs
    if name == "edit":
        c, ow, newc = args
        if owner_of(pre, c) == u:
            c_set = BSet.singleton(c, n)
            moved_view = product(BSet.singleton(newc, n), view.apply(c))
            return Observation(
                view.dom_subtract(c_set).union(moved_view),
                edit.dom_subtract(c_set).union(_pair(newc, u, n)),
            )
        return obs
    if name == "edit-not-owned":
        c, newc, p = args
        if owner_of(pre, c) == u and p != u and pre.editp.member(c, p):
            old = _pair(c, p, n)
            new = _pair(newc, p, n)
            return Observation(view.diff(old).union(new), edit.diff(old).union(new))
        return obs
    if name == "grant-view":
        c, p = args
        if owner_of(pre, c) == u and p != u:
            return Observation(view.union(_pair(c, p, n)), edit)
        return obs
    if name == "grant-edit":
        c, p = args
        if owner_of(pre, c) == u and p != u:
            return Observation(view, edit.union(_pair(c, p, n)))
        return obs
    # list plumbing touches no permissions
    return obs


def observe(steps: list[StepRecord], u: int, n: int) -> Observation:
    obs = Observation.empty(n)
    for step in steps:
        obs = observe_step(obs, step, u)
    return obs


def owned_by(step: StepRecord, t: int, cfg: NiConfig) -> bool:
    """The per-operation purge condition: does user t own this operation?"""
    name = step.call.name
    args = step.call.args
    pre = step.prestate
    if name == "create-account":
        return args[0] == t
    if name == "upload":
        return args[1] == t
    if name in (
        "hide",
        "make-visible",
        "transmit",
        "transmit-to-list",
        "transmit-to-list-restricted",
        "delete",
        "edit",
    ):
        return owner_of(pre, args[0]) == t
    if name == "comment":
        c, _cmt, prs = args
        if cfg.comment_ownership == OWNER_ONLY:
            return owner_of(pre, c) == t
        return owner_of(pre, c) == t or prs.member(t)
    if name == "edit-not-owned":
        return owner_of(pre, args[0]) != t
    if name in ("grant-view", "grant-edit"):
        return owner_of(pre, args[0]) == t and args[1] != t
    # operations the calculus does not cover belong to their actor
    return step.actor == t


def purge_indices(steps: list[StepRecord], t: int, cfg: NiConfig) -> list[int]:
    """Indices of the operations kept after purging user t."""
    if cfg.strict_paper_purge:
        # literal reading: examine only the newest operation
        if steps and owned_by(steps[-1], t, cfg):
            return list(range(len(steps) - 1))
        return list(range(len(steps)))
    return [i for i, step in enumerate(steps) if not owned_by(step, t, cfg)]


def purge(
    rs: ResolvedScenario, run: RunResult, t: int, cfg: NiConfig
) -> tuple[list[int], list[RInstr]]:
    kept = purge_indices(run.steps, t, cfg)
    return kept, [run.steps[i].instr for i in kept]


def check_noninterference(
    rs: ResolvedScenario,
    t: int,
    u: int,
    cfg: NiConfig = NiConfig(),
) -> NiVerdict:
    """Decide whether user t's operations are invisible to user u."""
    if rs.trace is None:
        raise ValueError("scenario has no trace block")
    env = ground_environment(rs)
    run = run_instructions(rs, rs.trace, env)
    if not run.ok:
        return NiVerdict(
            "trace-inexecutable",
            t,
            u,
            failing_index=run.failing_index,
            failing_message=run.failure.message,
        )
    kept, purged_instrs = purge(rs, run, t, cfg)
    removed = [i for i in range(len(run.steps)) if i not in set(kept)]
    obs_full = observe(run.steps, u, rs.n)

    purged_run = run_instructions(rs, purged_instrs, env)
    if not purged_run.ok:
        return NiVerdict(
            "purged-trace-inexecutable",
            t,
            u,
            observation=obs_full,
            removed_indices=removed,
            failing_index=purged_run.failing_index,
            failing_message=purged_run.failure.message,
        )
    obs_purged = observe(purged_run.steps, u, rs.n)

    if obs_full == obs_purged:
        return NiVerdict(
            "clean", t, u, observation=obs_full, observation_purged=obs_purged,
            removed_indices=removed,
        )
    dv, de = obs_full.sym_diff(obs_purged)
    return NiVerdict(
        "interferes",
        t,
        u,
        observation=obs_full,
        observation_purged=obs_purged,
        diff_view=dv,
        diff_edit=de,
        removed_indices=removed,
    )
