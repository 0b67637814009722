"""Executability checking: the per-instruction verification-condition chain.

Every instruction contributes one condition: its precondition must hold in
the state produced by its predecessors.  Transformers are deterministic,
so the nested chain  p1 ∧ (q1 ⇒ p2 ∧ (q2 ⇒ ...))  with each q_i the
poststate equality reduces to "every p_i holds sequentially from the
initial state".  Both formulations are implemented; the test suite checks
they agree.

List memberships that no instruction determines come from an environment:
an assignment of declared persons to free lists, filtered by the scenario
assumptions.  Environments are enumerated in lexicographic mask order and
the enumeration is capped (default 2**20) with an explicit bound-exceeded
error rather than silent truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .kernel import BSet, product
from .operations import OPERATIONS, FailedGuard, OpCall
from .policy_lang import ListRef, ResolvedScenario, RInstr
from .snstate import SnState, check_invariants, empty_state
from . import operations

DEFAULT_MAX_ENVS = 1 << 20

Environment = dict[int, BSet]  # list id -> effective members


class EnvBoundExceeded(Exception):
    def __init__(self, total: int, max_envs: int):
        super().__init__(
            f"environment space has {total} assignments, above the cap of {max_envs};"
            " raise --max-envs or constrain the scenario"
        )
        self.total = total
        self.max_envs = max_envs


class InvariantBroken(RuntimeError):
    """An operation produced a state violating I1..I7 (internal error)."""


class TraceNotGround(Exception):
    """Non-interference traces must fix every list membership."""


@dataclass
class StepRecord:
    index: int
    instr: RInstr
    call: OpCall
    actor: int | None
    prestate: SnState
    poststate: SnState


@dataclass
class RunResult:
    ok: bool
    failing_index: int | None
    failure: FailedGuard | None
    states: list[SnState]
    steps: list[StepRecord]
    attachments: dict[int, int]

    @property
    def final_state(self) -> SnState | None:
        return self.states[-1] if self.ok else None


@dataclass
class ExecutabilityVerdict:
    executable: bool
    failing_index: int | None
    failure: FailedGuard | None
    final_state: SnState | None
    run: RunResult


def base_state(rs: ResolvedScenario) -> SnState:
    """Declared persons exist up front, each owning a profile content."""
    s = empty_state(rs.n)
    for p in rs.declared_persons:
        s = operations.create_account(s, p, rs.profile_of[p])
    return s


def static_members(rs: ResolvedScenario, l: int) -> BSet:
    """Facts plus every add-to-list insertion, for assumption filtering."""
    members = rs.facts.get(l, BSet.empty(rs.n))
    for instrs in list(rs.policies.values()) + ([rs.trace] if rs.trace else []):
        for ri in instrs:
            if ri.name == "add-to-list" and ri.args[0] == l:
                members = members.add(ri.args[1])
    return members


def eval_setexpr(rexpr: tuple, env: Environment, n: int) -> BSet:
    if rexpr[0] == "list":
        return env.get(rexpr[1], BSet.empty(n))
    return eval_setexpr(rexpr[1], env, n).union(eval_setexpr(rexpr[2], env, n))


def _assumption_holds(a: tuple, env: Environment, n: int) -> bool:
    kind, left, right = a
    lv = eval_setexpr(left, env, n)
    rv = eval_setexpr(right, env, n)
    if kind == "subset":
        return lv.subset(rv)
    if kind == "equal":
        return lv == rv
    if kind == "not-subset":
        return not lv.subset(rv)
    raise ValueError(f"unknown assumption kind {kind}")


def _complete_environment(rs: ResolvedScenario, env: Environment) -> Environment | None:
    """Fill in fixed and derived lists; None if facts contradict a derived value."""
    for l in rs.fixed_lists:
        env[l] = static_members(rs, l)
    for l, rexpr in rs.derived_lists.items():
        value = eval_setexpr(rexpr, env, rs.n)
        facts = rs.facts.get(l)
        if facts is not None and not facts.subset(value):
            return None
        env[l] = value
    return env


def environment_space(rs: ResolvedScenario) -> int:
    """Number of raw assignments before assumption filtering."""
    total = 1
    pool = BSet.from_elements(rs.declared_persons, rs.n)
    for l in rs.free_lists:
        free_slots = pool.diff(rs.facts.get(l, BSet.empty(rs.n))).cardinality()
        total *= 1 << free_slots
    return total


def enumerate_environments(rs: ResolvedScenario, max_envs: int = DEFAULT_MAX_ENVS):
    """Yield admissible environments in lexicographic mask order."""
    total = environment_space(rs)
    if total > max_envs:
        raise EnvBoundExceeded(total, max_envs)
    pool = BSet.from_elements(rs.declared_persons, rs.n)
    per_list: list[list[BSet]] = []
    for l in rs.free_lists:
        facts = rs.facts.get(l, BSet.empty(rs.n))
        slots = pool.diff(facts).elements()
        masks = []
        for combo in range(1 << len(slots)):
            delta = BSet.from_elements(
                (slots[i] for i in range(len(slots)) if combo >> i & 1), rs.n
            )
            masks.append(facts.union(delta))
        masks.sort(key=lambda m: m.bits)
        per_list.append(masks)
    for choice in itertools.product(*per_list):
        env: Environment = dict(zip(rs.free_lists, choice))
        completed = _complete_environment(rs, env)
        if completed is None:
            continue
        if all(_assumption_holds(a, completed, rs.n) for a in rs.assumptions):
            yield completed


def ground_environment(rs: ResolvedScenario) -> Environment:
    """The single environment of a membership-ground scenario (traces)."""
    if rs.free_lists:
        names = ", ".join(rs.list_name(l) for l in rs.free_lists)
        raise TraceNotGround(f"lists with undetermined membership: {names}")
    env = _complete_environment(rs, {})
    if env is None or not all(_assumption_holds(a, env, rs.n) for a in rs.assumptions):
        raise TraceNotGround("scenario assumptions contradict the fixed memberships")
    return env


def creation_members(rs: ResolvedScenario, env: Environment, l: int) -> BSet:
    """Members a list receives the moment it is created."""
    if l in rs.fixed_lists:
        return rs.facts.get(l, BSet.empty(rs.n))
    return env.get(l, rs.facts.get(l, BSet.empty(rs.n)))


def build_call(rs: ResolvedScenario, state: SnState, ri: RInstr) -> OpCall | FailedGuard:
    """Materialize a resolved instruction against the current state."""
    args: list = []
    actor = ri.actor
    for a in ri.args:
        if isinstance(a, ListRef):
            args.append(state.listpe.apply(a.list_id))
            if actor is None:
                actor = operations.listow_of(state, a.list_id)
                if actor is None:
                    return FailedGuard(
                        ri.name,
                        "recipients-list",
                        f"list {rs.list_name(a.list_id)} has no owner to act for",
                    )
        elif isinstance(a, tuple) and a and a[0] == "set":
            args.append(BSet.from_elements(a[2], rs.n))
        else:
            args.append(a)
    return OpCall(ri.name, tuple(args), actor)


def _step(
    rs: ResolvedScenario, state: SnState, ri: RInstr, env: Environment
) -> tuple[FailedGuard, None] | tuple[None, tuple[OpCall, int | None, SnState]]:
    call = build_call(rs, state, ri)
    if isinstance(call, FailedGuard):
        return call, None
    op = OPERATIONS[ri.name]
    failure = op.precondition(state, call)
    if failure is not None:
        return failure, None
    post = op.transform(state, call)
    if ri.name == "create-list":
        members = creation_members(rs, env, call.args[0])
        if not members.is_empty():
            post = post.replace(
                listpe=post.listpe.union(product(BSet.singleton(call.args[0], rs.n), members))
            )
    violations = check_invariants(post)
    if violations:
        raise InvariantBroken(
            f"{ri.name} at line {ri.line} broke {violations[0].invariant_id}: {violations[0].message}"
        )
    return None, (call, op.resolve_actor(state, call), post)


def run_instructions(
    rs: ResolvedScenario,
    instrs: list[RInstr],
    env: Environment,
    initial: SnState | None = None,
) -> RunResult:
    state = initial if initial is not None else base_state(rs)
    states = [state]
    steps: list[StepRecord] = []
    attachments: dict[int, int] = {}
    for idx, ri in enumerate(instrs):
        failure, outcome = _step(rs, state, ri, env)
        if failure is not None:
            return RunResult(False, idx, failure, states, steps, attachments)
        call, actor, post = outcome
        steps.append(StepRecord(idx, ri, call, actor, state, post))
        if ri.name == "comment":
            attachments[call.args[1]] = call.args[0]
        states.append(post)
        state = post
    return RunResult(True, None, None, states, steps, attachments)


def check_executability(
    rs: ResolvedScenario,
    policy_name: str,
    env: Environment,
    initial: SnState | None = None,
) -> ExecutabilityVerdict:
    instrs = rs.policies[policy_name]
    for l in rs.free_lists:
        if l not in env:
            raise KeyError(f"environment misses free list {rs.list_name(l)}")
    run = run_instructions(rs, instrs, env, initial)
    return ExecutabilityVerdict(run.ok, run.failing_index, run.failure, run.final_state, run)


def literal_vc_chain(
    rs: ResolvedScenario,
    instrs: list[RInstr],
    env: Environment,
    initial: SnState | None = None,
) -> tuple[bool, int | None]:
    """Evaluate the nested formula  VC_i = p_i ∧ (q_i ⇒ VC_{i+1})  directly.

    The transformer is only invoked once p_i is known to hold, so q_i is
    the (true) poststate equality and the implication recurses on it.
    Returns the chain value and the first failing instruction index.
    """
    state = initial if initial is not None else base_state(rs)

    def vc(idx: int, state: SnState) -> tuple[bool, int | None]:
        if idx == len(instrs):
            return True, None
        failure, outcome = _step(rs, state, instrs[idx], env)
        p_i = failure is None
        if not p_i:
            return False, idx
        post = outcome[2]
        q_i = True
        tail, tail_idx = vc(idx + 1, post)
        return p_i and ((not q_i) or tail), tail_idx

    return vc(0, state)


def needs_context(rs: ResolvedScenario, dependent: str, provider: str) -> bool:
    """True when `dependent` uses entities only `provider` introduces."""
    missing = rs.policy_references[dependent] - rs.policy_introduces[dependent]
    declared = {
        (d.sort, rs.table.id_of(d.sort, name))
        for d in rs.scenario.declarations
        for name in d.names
    }
    missing -= declared
    return bool(missing & rs.policy_introduces[provider])
