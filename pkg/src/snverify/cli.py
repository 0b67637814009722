"""Command-line front end.

Subcommands: check, compare, noninterf, emit-smt.  Exit codes:
0 success/compliant/clean, 2 parse or usage error, 3 breach/interference,
4 inexecutable, 5 vacuous assumptions.  ``--json`` switches the report to
a schema-versioned JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .compliance import CompareSetupError, ComplianceVerdict, compare
from .kernel import BSet
from .noninterference import NiConfig, NiVerdict, Observation, check_noninterference
from .operations import CONTENT, LIST, PERSON
from .policy_lang import ParseError, ResolveError, ResolvedScenario, parse, resolve
from .smt_emit import DIALECTS, EmitError, emit_vc_script
from .snstate import state_to_json
from .vcgen import (
    DEFAULT_MAX_ENVS,
    EnvBoundExceeded,
    TraceNotGround,
    base_state,
    check_executability,
    enumerate_environments,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BREACH = 3
EXIT_INEXECUTABLE = 4
EXIT_VACUOUS = 5

SCHEMA_VERSION = 1


def _env_json(rs: ResolvedScenario, env: dict[int, BSet]) -> dict:
    varying = sorted(set(rs.free_lists) | set(rs.derived_lists))
    return {
        rs.list_name(l): [rs.person_name(p) for p in env[l]]
        for l in varying
        if l in env
    }


def _obs_json(rs: ResolvedScenario, obs: Observation) -> dict:
    return {
        "view": [[rs.content_name(c), rs.person_name(p)] for c, p in obs.view.pairs()],
        "edit": [[rs.content_name(c), rs.person_name(p)] for c, p in obs.edit.pairs()],
    }


def _load(args) -> ResolvedScenario:
    with open(args.scenario, encoding="utf-8") as fh:
        source = fh.read()
    return resolve(parse(source), args.universe)


def _report(args, subcommand: str, inputs: dict, verdict: dict, exit_code: int, started: float,
            human: list[str]) -> int:
    elapsed = time.perf_counter() - started
    if args.json:
        print(json.dumps({
            "schema": SCHEMA_VERSION,
            "tool": "snverify",
            "subcommand": subcommand,
            "inputs": inputs,
            "verdict": verdict,
            "elapsed_s": round(elapsed, 6),
            "exit_code": exit_code,
        }, indent=2))
    else:
        for line in human:
            print(line)
    return exit_code


def _cmd_check(args) -> int:
    started = time.perf_counter()
    rs = _load(args)
    if args.policy not in rs.policies:
        print(f"error: no policy named {args.policy!r}", file=sys.stderr)
        return EXIT_USAGE
    initial = None
    if args.context:
        if args.context not in rs.policies:
            print(f"error: no context policy named {args.context!r}", file=sys.stderr)
            return EXIT_USAGE

    inputs = {"scenario": args.scenario, "policy": args.policy, "context": args.context,
              "universe": rs.n, "max_envs": args.max_envs}
    envs_checked = 0
    final_state = None
    for env in enumerate_environments(rs, args.max_envs):
        envs_checked += 1
        initial = None
        if args.context:
            ctx = check_executability(rs, args.context, env, base_state(rs))
            if not ctx.executable:
                verdict = {
                    "executable": False,
                    "failing_policy": args.context,
                    "failing_env": _env_json(rs, env),
                    "failing_index": ctx.failing_index,
                    "failing_op": ctx.failure.op,
                    "failing_guard": ctx.failure.guard_id,
                    "message": ctx.failure.message,
                }
                human = [f"NOT EXECUTABLE: context policy {args.context} fails at instruction"
                         f" {ctx.failing_index} ({ctx.failure.guard_id}): {ctx.failure.message}",
                         f"  environment: {_env_json(rs, env)}"]
                return _report(args, "check", inputs, verdict, EXIT_INEXECUTABLE, started, human)
            initial = ctx.final_state
        v = check_executability(rs, args.policy, env, initial)
        if not v.executable:
            verdict = {
                "executable": False,
                "failing_env": _env_json(rs, env),
                "failing_index": v.failing_index,
                "failing_op": v.failure.op,
                "failing_guard": v.failure.guard_id,
                "message": v.failure.message,
            }
            human = [f"NOT EXECUTABLE: instruction {v.failing_index} ({v.failure.op},"
                     f" {v.failure.guard_id}): {v.failure.message}",
                     f"  environment: {_env_json(rs, env)}"]
            return _report(args, "check", inputs, verdict, EXIT_INEXECUTABLE, started, human)
        if final_state is None:
            final_state = v.final_state

    if envs_checked == 0:
        verdict = {"executable": None, "status": "vacuous", "envs_checked": 0}
        return _report(args, "check", inputs, verdict, EXIT_VACUOUS, started,
                       ["VACUOUS: the assumptions admit no environment"])
    verdict = {"executable": True, "envs_checked": envs_checked}
    if args.dump_state and final_state is not None:
        verdict["final_state"] = state_to_json(final_state)
    human = [f"EXECUTABLE: policy {args.policy} runs under all {envs_checked} admissible"
             " environment(s)"]
    if args.dump_state and final_state is not None:
        human.append(json.dumps(state_to_json(final_state), indent=2))
    return _report(args, "check", inputs, verdict, EXIT_OK, started, human)


def _diff_table(rs: ResolvedScenario, verdict: ComplianceVerdict) -> list[str]:
    rows = []
    for cd in verdict.per_content_diff or []:
        extra_v = ", ".join(rs.person_name(p) for p in cd.extra_view) or "-"
        extra_e = ", ".join(rs.person_name(p) for p in cd.extra_edit) or "-"
        rows.append(f"  {rs.content_name(cd.content):<16} {extra_v:<24} {extra_e}")
    if rows:
        rows.insert(0, f"  {'content':<16} {'extra view':<24} extra edit")
    return rows


def _cmd_compare(args) -> int:
    started = time.perf_counter()
    rs = _load(args)
    inputs = {"scenario": args.scenario, "old": args.old, "new": args.new,
              "universe": rs.n, "max_envs": args.max_envs}
    verdict = compare(rs, args.old, args.new, args.max_envs)

    if verdict.status == "compliant":
        v = {"compliant": True, "status": "compliant", "envs_checked": verdict.envs_checked,
             "per_content_diff": []}
        human = [f"COMPLIANT: {args.new} grants no permission beyond {args.old} on protected"
                 f" contents across {verdict.envs_checked} admissible environment(s)"]
        return _report(args, "compare", inputs, v, EXIT_OK, started, human)
    if verdict.status == "breach":
        w = verdict.witness
        v = {
            "compliant": False,
            "status": "breach",
            "witness": {
                "env": _env_json(rs, w.env),
                "content": rs.content_name(w.content),
                "person": rs.person_name(w.person),
                "kind": w.kind,
            },
            "per_content_diff": [
                {
                    "content": rs.content_name(cd.content),
                    "extra_view": [rs.person_name(p) for p in cd.extra_view],
                    "extra_edit": [rs.person_name(p) for p in cd.extra_edit],
                }
                for cd in verdict.per_content_diff
            ],
        }
        human = [
            f"BREACH: {args.new} grants {w.kind} permission on"
            f" {rs.content_name(w.content)} to {rs.person_name(w.person)},"
            f" which {args.old} does not",
            f"  witness environment: {_env_json(rs, w.env)}",
        ] + _diff_table(rs, verdict)
        return _report(args, "compare", inputs, v, EXIT_BREACH, started, human)
    if verdict.status == "inexecutable":
        det = verdict.detail
        v = {"compliant": False, "status": "inexecutable",
             "detail": {"policy": det.policy, "env": _env_json(rs, det.env),
                        "failing_index": det.failing_index, "failing_op": det.failing_op,
                        "failing_guard": det.failing_guard, "message": det.message}}
        human = [f"INEXECUTABLE: policy {det.policy} fails at instruction {det.failing_index}"
                 f" ({det.failing_op}, {det.failing_guard}): {det.message}",
                 f"  environment: {_env_json(rs, det.env)}"]
        return _report(args, "compare", inputs, v, EXIT_INEXECUTABLE, started, human)
    v = {"compliant": None, "status": "vacuous"}
    return _report(args, "compare", inputs, v, EXIT_VACUOUS, started,
                   ["VACUOUS: the assumptions admit no environment"])


def _cmd_noninterf(args) -> int:
    started = time.perf_counter()
    rs = _load(args)
    try:
        t = rs.table.id_of(PERSON, args.actor)
        u = rs.table.id_of(PERSON, args.observer)
    except ResolveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    cfg = NiConfig(comment_ownership=args.comment_ownership,
                   strict_paper_purge=args.strict_paper_purge)
    verdict = check_noninterference(rs, t, u, cfg)
    inputs = {"scenario": args.scenario, "actor": args.actor, "observer": args.observer,
              "comment_ownership": args.comment_ownership,
              "strict_paper_purge": args.strict_paper_purge, "universe": rs.n}
    return _ni_report(args, rs, verdict, inputs, started)


def _ni_report(args, rs: ResolvedScenario, verdict: NiVerdict, inputs: dict, started: float) -> int:
    v: dict = {"status": verdict.status, "actor": rs.person_name(verdict.actor),
               "observer": rs.person_name(verdict.observer),
               "removed_indices": verdict.removed_indices}
    if verdict.observation is not None:
        v["observation"] = _obs_json(rs, verdict.observation)
    if verdict.observation_purged is not None:
        v["observation_purged"] = _obs_json(rs, verdict.observation_purged)
    if verdict.status == "clean":
        human = [f"CLEAN: purging {rs.person_name(verdict.actor)}'s operations leaves"
                 f" {rs.person_name(verdict.observer)}'s observations unchanged"]
        return _report(args, "noninterf", inputs, v, EXIT_OK, started, human)
    if verdict.status == "interferes":
        v["diff"] = {
            "view": [[rs.content_name(c), rs.person_name(p)] for c, p in verdict.diff_view],
            "edit": [[rs.content_name(c), rs.person_name(p)] for c, p in verdict.diff_edit],
        }
        human = [
            f"INTERFERES: {rs.person_name(verdict.actor)} changes what"
            f" {rs.person_name(verdict.observer)} observes",
            f"  removed operations: {verdict.removed_indices}",
            f"  observation difference (view): {v['diff']['view']}",
            f"  observation difference (edit): {v['diff']['edit']}",
        ]
        return _report(args, "noninterf", inputs, v, EXIT_BREACH, started, human)
    v["failing_index"] = verdict.failing_index
    v["message"] = verdict.failing_message
    human = [f"{verdict.status.upper().replace('-', ' ')}: instruction"
             f" {verdict.failing_index}: {verdict.failing_message}"]
    return _report(args, "noninterf", inputs, v, EXIT_INEXECUTABLE, started, human)


def _cmd_emit_smt(args) -> int:
    started = time.perf_counter()
    rs = _load(args)
    env = None
    if args.ground:
        env = next(enumerate_environments(rs, args.max_envs), None)
        if env is None:
            print("error: no admissible environment to ground the script", file=sys.stderr)
            return EXIT_VACUOUS
    script = emit_vc_script(rs, args.policy, dialect=args.dialect, env=env,
                            context=args.context, max_envs=args.max_envs)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(script)
        message = [f"wrote {args.output}"]
    else:
        message = [script.rstrip("\n")]
    if args.json:
        inputs = {"scenario": args.scenario, "policy": args.policy, "context": args.context,
                  "dialect": args.dialect, "ground": args.ground, "universe": rs.n}
        return _report(args, "emit-smt", inputs, {"script": script}, EXIT_OK, started, message)
    for line in message:
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snverify",
        description="verify social-network privacy policies: executability,"
                    " compliance and non-interference",
    )
    parser.add_argument("--universe", type=int, default=None,
                        help="universe size override (default: scenario header or 8)")
    parser.add_argument("--json", action="store_true", help="machine-readable report")
    parser.add_argument("--max-envs", type=int, default=DEFAULT_MAX_ENVS,
                        help="cap on enumerated environments")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("check", help="check a policy's executability")
    p.add_argument("scenario")
    p.add_argument("--policy", required=True)
    p.add_argument("--context", default=None,
                   help="policy whose poststate seeds the run")
    p.add_argument("--dump-state", action="store_true",
                   help="include the final state in the report")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("compare", help="check a new policy's compliance with an old one")
    p.add_argument("scenario")
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("noninterf", help="check non-interference over a trace")
    p.add_argument("scenario")
    p.add_argument("--actor", required=True, help="user whose operations are purged")
    p.add_argument("--observer", required=True, help="user whose observations are compared")
    p.add_argument("--comment-ownership", choices=["prs-members-own", "owner-only"],
                   default="prs-members-own")
    p.add_argument("--strict-paper-purge", action="store_true",
                   help="stop the purge walk at the first kept operation")
    p.set_defaults(func=_cmd_noninterf)

    p = sub.add_parser("emit-smt", help="emit the policy's VC chain as a solver script")
    p.add_argument("scenario")
    p.add_argument("--policy", required=True)
    p.add_argument("--context", default=None)
    p.add_argument("--dialect", choices=sorted(DIALECTS), default="smtlib2")
    p.add_argument("--ground", action="store_true",
                   help="substitute the least admissible environment")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_emit_smt)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ResolveError, CompareSetupError, TraceNotGround,
            EnvBoundExceeded, EmitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
