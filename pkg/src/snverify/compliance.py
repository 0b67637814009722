"""Policy compliance: permission-set inclusion on protected contents.

A new policy complies with an old one when, in every admissible
environment, the view and edit permissions it grants on each protected
content are a subset of those the old policy grants.  Protected contents
are the contents named in the old policy; contents the new policy creates
carry no prior policy to violate.  A breach is existential: the verdict
reports the lexicographically least witnessing environment together with
the leaked (content, person, permission-kind) triple and a per-content
permission diff.

When the new policy references entities only the old one creates (the
comment-on-existing-content pattern), it is evaluated as a continuation
of the old policy's world; otherwise the two run as alternatives from the
same base state.
"""

from __future__ import annotations

from dataclasses import dataclass

from .operations import CONTENT
from .policy_lang import ResolvedScenario
from .vcgen import (
    DEFAULT_MAX_ENVS,
    Environment,
    base_state,
    check_executability,
    enumerate_environments,
    needs_context,
)


class CompareSetupError(Exception):
    pass


@dataclass
class BreachWitness:
    env: Environment
    content: int
    person: int
    kind: str  # "view" or "edit"


@dataclass
class ContentDiff:
    content: int
    extra_view: list[int]
    extra_edit: list[int]


@dataclass
class InexecutableDetail:
    policy: str
    env: Environment
    failing_index: int
    failing_op: str
    failing_guard: str
    message: str


@dataclass
class ComplianceVerdict:
    status: str  # "compliant", "breach", "inexecutable", "vacuous"
    witness: BreachWitness | None = None
    per_content_diff: list[ContentDiff] | None = None
    detail: InexecutableDetail | None = None
    envs_checked: int = 0

    @property
    def compliant(self) -> bool:
        return self.status == "compliant"


def protected_contents(rs: ResolvedScenario, old_name: str) -> list[int]:
    """Contents named anywhere in the old policy, in id order."""
    return sorted(i for sort, i in rs.policy_references[old_name] if sort == CONTENT)


def _inexecutable(policy: str, env: Environment, verdict) -> ComplianceVerdict:
    return ComplianceVerdict(
        status="inexecutable",
        detail=InexecutableDetail(
            policy=policy,
            env=env,
            failing_index=verdict.failing_index,
            failing_op=verdict.failure.op,
            failing_guard=verdict.failure.guard_id,
            message=verdict.failure.message,
        ),
    )


def compare(
    rs: ResolvedScenario,
    old_name: str,
    new_name: str,
    max_envs: int = DEFAULT_MAX_ENVS,
) -> ComplianceVerdict:
    for name in (old_name, new_name):
        if name not in rs.policies:
            raise CompareSetupError(f"no policy named {name!r} in the scenario")
    new_after_old = needs_context(rs, new_name, old_name)
    old_after_new = needs_context(rs, old_name, new_name)
    if new_after_old and old_after_new:
        raise CompareSetupError(
            f"policies {old_name!r} and {new_name!r} each use entities only the other creates"
        )

    protected = protected_contents(rs, old_name)
    base = base_state(rs)
    envs_checked = 0
    for env in enumerate_environments(rs, max_envs):
        envs_checked += 1
        if old_after_new:
            new_run = check_executability(rs, new_name, env, base)
            if not new_run.executable:
                return _inexecutable(new_name, env, new_run)
            old_run = check_executability(rs, old_name, env, new_run.final_state)
            if not old_run.executable:
                return _inexecutable(old_name, env, old_run)
        else:
            old_run = check_executability(rs, old_name, env, base)
            if not old_run.executable:
                return _inexecutable(old_name, env, old_run)
            new_initial = old_run.final_state if new_after_old else base
            new_run = check_executability(rs, new_name, env, new_initial)
            if not new_run.executable:
                return _inexecutable(new_name, env, new_run)

        s_old = old_run.final_state
        s_new = new_run.final_state
        diffs: list[ContentDiff] = []
        witness: BreachWitness | None = None
        for c in protected:
            extra_view = s_new.viewp.apply(c).diff(s_old.viewp.apply(c))
            extra_edit = s_new.editp.apply(c).diff(s_old.editp.apply(c))
            diffs.append(ContentDiff(c, extra_view.elements(), extra_edit.elements()))
            if witness is None:
                if not extra_view.is_empty():
                    witness = BreachWitness(env, c, extra_view.elements()[0], "view")
                elif not extra_edit.is_empty():
                    witness = BreachWitness(env, c, extra_edit.elements()[0], "edit")
        if witness is not None:
            # environments arrive in lexicographic order, so the first hit
            # is the least witnessing environment
            return ComplianceVerdict("breach", witness, diffs, envs_checked=envs_checked)

    if envs_checked == 0:
        return ComplianceVerdict("vacuous")
    return ComplianceVerdict(
        "compliant",
        per_content_diff=[ContentDiff(c, [], []) for c in protected],
        envs_checked=envs_checked,
    )


def list_subset_check(
    rs: ResolvedScenario,
    l1_name: str,
    l2_name: str,
    max_envs: int = DEFAULT_MAX_ENVS,
) -> bool:
    """True when every admissible environment puts list l1 inside l2."""
    l1 = rs.table.id_of("list", l1_name)
    l2 = rs.table.id_of("list", l2_name)
    for env in enumerate_environments(rs, max_envs):
        if not env[l1].subset(env[l2]):
            return False
    return True
