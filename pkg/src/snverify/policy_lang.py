"""Parser and name resolver for policy scenario files.

Grammar (``//`` comments run to end of line; semicolons after header,
declaration, assumption and check lines are optional):

    scenario    ::= header? decl* assumption* policy+ check*          (.snp)
    tracefile   ::= header? decl* assumption* trace                   (.snt)
    header      ::= "universe" NUMBER
    decl        ::= ("person" | "content" | "list") IDENT ("," IDENT)*
                  | "member" IDENT "in" IDENT
    assumption  ::= "assume" "not" "subset-of" "(" IDENT "," IDENT ")"
                  | "assume" setexpr ("subset-of" | "=") setexpr
    setexpr     ::= IDENT | "union" "(" setexpr "," setexpr ")"
    policy      ::= "policy" IDENT "{" (instr ";")* "}"
    trace       ::= "trace" "{" (IDENT ":" instr ";")* "}"
    instr       ::= IDENT "(" arglist? ")"
    arglist     ::= arg ("," arg)*
    arg         ::= IDENT | "{" (IDENT ("," IDENT)*)? "}"
    check       ::= "check" IDENT "(" arglist? ")"

Instruction names are the fifteen operation names (create-account, upload,
create-list, add-to-list, transmit, transmit-to-list,
transmit-to-list-restricted, comment, delete, hide, make-visible, edit,
edit-not-owned, grant-view, grant-edit).

Resolution assigns every distinct name a distinct id per sort in order of
first appearance starting at 0, scanning declarations, membership facts,
assumptions, policies, then the trace.  Names shared between policies map
to the same id.  Each declared person additionally receives a synthesized
profile content (id allocated after all named contents) so the base state
satisfies the ownership invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .kernel import MAX_UNIVERSE, BSet
from .operations import (
    CONTENT,
    CONTENT_SET,
    INSTRUCTION_NAMES,
    LIST,
    OPERATIONS,
    PERSON,
    PERSON_SET,
    RECIPIENTS,
)

SORTS = (PERSON, CONTENT, LIST)


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ResolveError(Exception):
    pass


# ---------------------------------------------------------------------------
# tokens

_PUNCT = "{}(),;:="


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "number", "punct", "eof"
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, end = 0, len(source)
    while i < end:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < end and source[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < end and source[j].isdigit():
                j += 1
            tokens.append(Token("number", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < end and (source[j].isalnum() or source[j] in "_-"):
                j += 1
            tokens.append(Token("ident", source[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class SetName:
    name: str


@dataclass(frozen=True)
class SetUnion:
    left: "SetExpr"
    right: "SetExpr"


SetExpr = SetName | SetUnion


@dataclass(frozen=True)
class NameArg:
    name: str


@dataclass(frozen=True)
class SetArg:
    names: tuple[str, ...]


Arg = NameArg | SetArg


@dataclass(frozen=True)
class Instruction:
    name: str
    args: tuple[Arg, ...]
    actor: str | None = None
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PolicyScript:
    name: str
    instructions: tuple[Instruction, ...]


@dataclass(frozen=True)
class Declaration:
    sort: str
    names: tuple[str, ...]


@dataclass(frozen=True)
class MembershipFact:
    person: str
    list_name: str


@dataclass(frozen=True)
class SubsetAssumption:
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class EqualityAssumption:
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class NotSubsetAssumption:
    left: str
    right: str


Assumption = SubsetAssumption | EqualityAssumption | NotSubsetAssumption


@dataclass(frozen=True)
class CheckDirective:
    kind: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class Scenario:
    universe: int | None
    declarations: tuple[Declaration, ...]
    facts: tuple[MembershipFact, ...]
    assumptions: tuple[Assumption, ...]
    policies: tuple[PolicyScript, ...]
    checks: tuple[CheckDirective, ...]
    trace: tuple[Instruction, ...] | None = None


# ---------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, expected: str) -> ParseError:
        tok = self.peek()
        got = tok.value or "end of input"
        return ParseError(f"expected {expected}, found {got!r}", tok.line, tok.col)

    def expect_punct(self, ch: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != ch:
            raise self.error(f"'{ch}'")
        return self.next()

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(what)
        return self.next()

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value in words

    def skip_semi(self) -> None:
        if self.peek().kind == "punct" and self.peek().value == ";":
            self.next()

    def parse_scenario(self) -> Scenario:
        universe = None
        decls: list[Declaration] = []
        facts: list[MembershipFact] = []
        assumptions: list[Assumption] = []
        policies: list[PolicyScript] = []
        checks: list[CheckDirective] = []
        trace: tuple[Instruction, ...] | None = None

        while self.peek().kind != "eof":
            if self.at_keyword("universe"):
                self.next()
                tok = self.peek()
                if tok.kind != "number":
                    raise self.error("universe size")
                if universe is not None:
                    raise ParseError("duplicate universe header", tok.line, tok.col)
                universe = int(self.next().value)
                self.skip_semi()
            elif self.at_keyword("person", "content", "list"):
                sort = self.next().value
                names = [self.expect_ident("name").value]
                while self.peek().value == ",":
                    self.next()
                    names.append(self.expect_ident("name").value)
                decls.append(Declaration(sort, tuple(names)))
                self.skip_semi()
            elif self.at_keyword("member"):
                self.next()
                person = self.expect_ident("person name").value
                if not self.at_keyword("in"):
                    raise self.error("'in'")
                self.next()
                list_name = self.expect_ident("list name").value
                facts.append(MembershipFact(person, list_name))
                self.skip_semi()
            elif self.at_keyword("assume"):
                self.next()
                assumptions.append(self.parse_assumption())
                self.skip_semi()
            elif self.at_keyword("policy"):
                self.next()
                name = self.expect_ident("policy name").value
                self.expect_punct("{")
                instrs = []
                while not (self.peek().kind == "punct" and self.peek().value == "}"):
                    instrs.append(self.parse_instruction())
                    self.expect_punct(";")
                self.expect_punct("}")
                policies.append(PolicyScript(name, tuple(instrs)))
            elif self.at_keyword("trace"):
                tok = self.next()
                if trace is not None:
                    raise ParseError("duplicate trace block", tok.line, tok.col)
                self.expect_punct("{")
                instrs = []
                while not (self.peek().kind == "punct" and self.peek().value == "}"):
                    actor = self.expect_ident("actor name").value
                    self.expect_punct(":")
                    instr = self.parse_instruction()
                    instrs.append(
                        Instruction(instr.name, instr.args, actor, instr.line, instr.col)
                    )
                    self.expect_punct(";")
                self.expect_punct("}")
                trace = tuple(instrs)
            elif self.at_keyword("check"):
                self.next()
                kind = self.expect_ident("check kind").value
                self.expect_punct("(")
                args = []
                if not (self.peek().kind == "punct" and self.peek().value == ")"):
                    args.append(self.expect_ident("name").value)
                    while self.peek().value == ",":
                        self.next()
                        args.append(self.expect_ident("name").value)
                self.expect_punct(")")
                checks.append(CheckDirective(kind, tuple(args)))
                self.skip_semi()
            else:
                raise self.error("'universe', a declaration, 'assume', 'policy', 'trace' or 'check'")

        if not policies and trace is None:
            tok = self.peek()
            raise ParseError("a scenario needs at least one policy or a trace", tok.line, tok.col)
        return Scenario(
            universe,
            tuple(decls),
            tuple(facts),
            tuple(assumptions),
            tuple(policies),
            tuple(checks),
            trace,
        )

    def parse_assumption(self) -> Assumption:
        if self.at_keyword("not"):
            self.next()
            if not self.at_keyword("subset-of"):
                raise self.error("'subset-of'")
            self.next()
            self.expect_punct("(")
            left = self.expect_ident("list name").value
            self.expect_punct(",")
            right = self.expect_ident("list name").value
            self.expect_punct(")")
            return NotSubsetAssumption(left, right)
        left = self.parse_setexpr()
        if self.at_keyword("subset-of"):
            self.next()
            return SubsetAssumption(left, self.parse_setexpr())
        if self.peek().kind == "punct" and self.peek().value == "=":
            self.next()
            return EqualityAssumption(left, self.parse_setexpr())
        raise self.error("'subset-of' or '='")

    def parse_setexpr(self) -> SetExpr:
        if self.at_keyword("union"):
            self.next()
            self.expect_punct("(")
            left = self.parse_setexpr()
            self.expect_punct(",")
            right = self.parse_setexpr()
            self.expect_punct(")")
            return SetUnion(left, right)
        return SetName(self.expect_ident("list name").value)

    def parse_instruction(self) -> Instruction:
        tok = self.expect_ident("instruction name")
        self.expect_punct("(")
        args: list[Arg] = []
        if not (self.peek().kind == "punct" and self.peek().value == ")"):
            args.append(self.parse_arg())
            while self.peek().value == ",":
                self.next()
                args.append(self.parse_arg())
        self.expect_punct(")")
        return Instruction(tok.value, tuple(args), None, tok.line, tok.col)

    def parse_arg(self) -> Arg:
        tok = self.peek()
        if tok.kind == "ident":
            return NameArg(self.next().value)
        if tok.kind == "punct" and tok.value == "{":
            self.next()
            names = []
            if not (self.peek().kind == "punct" and self.peek().value == "}"):
                names.append(self.expect_ident("name").value)
                while self.peek().value == ",":
                    self.next()
                    names.append(self.expect_ident("name").value)
            self.expect_punct("}")
            return SetArg(tuple(names))
        raise self.error("argument (name or {set})")


def parse(source: str) -> Scenario:
    return _Parser(tokenize(source)).parse_scenario()


# ---------------------------------------------------------------------------
# pretty printer


def _setexpr_text(e: SetExpr) -> str:
    if isinstance(e, SetName):
        return e.name
    return f"union({_setexpr_text(e.left)}, {_setexpr_text(e.right)})"


def _arg_text(a: Arg) -> str:
    if isinstance(a, NameArg):
        return a.name
    return "{" + ", ".join(a.names) + "}"


def _instr_text(i: Instruction) -> str:
    return f"{i.name}(" + ", ".join(_arg_text(a) for a in i.args) + ")"


def pretty_print(sc: Scenario) -> str:
    lines: list[str] = []
    if sc.universe is not None:
        lines.append(f"universe {sc.universe}")
    for d in sc.declarations:
        lines.append(f"{d.sort} " + ", ".join(d.names))
    for f in sc.facts:
        lines.append(f"member {f.person} in {f.list_name}")
    for a in sc.assumptions:
        if isinstance(a, NotSubsetAssumption):
            lines.append(f"assume not subset-of({a.left}, {a.right})")
        elif isinstance(a, SubsetAssumption):
            lines.append(f"assume {_setexpr_text(a.left)} subset-of {_setexpr_text(a.right)}")
        else:
            lines.append(f"assume {_setexpr_text(a.left)} = {_setexpr_text(a.right)}")
    for p in sc.policies:
        lines.append(f"policy {p.name} {{")
        for i in p.instructions:
            lines.append(f"  {_instr_text(i)};")
        lines.append("}")
    for c in sc.checks:
        lines.append(f"check {c.kind}(" + ", ".join(c.args) + ")")
    if sc.trace is not None:
        lines.append("trace {")
        for i in sc.trace:
            lines.append(f"  {i.actor}: {_instr_text(i)};")
        lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# resolution


@dataclass(frozen=True)
class ListRef:
    """A recipients argument naming a list, dereferenced at execution time."""

    list_id: int


@dataclass(frozen=True)
class RInstr:
    name: str
    args: tuple
    actor: int | None
    line: int = field(default=0, compare=False)


class NameTable:
    def __init__(self) -> None:
        self.ids: dict[str, dict[str, int]] = {s: {} for s in SORTS}
        self.sort_of: dict[str, str] = {}

    def intern(self, sort: str, name: str) -> int:
        prior = self.sort_of.get(name)
        if prior is not None and prior != sort:
            raise ResolveError(f"name {name!r} used both as {prior} and as {sort}")
        table = self.ids[sort]
        if name not in table:
            table[name] = len(table)
            self.sort_of[name] = sort
        return table[name]

    def id_of(self, sort: str, name: str) -> int:
        try:
            return self.ids[sort][name]
        except KeyError:
            raise ResolveError(f"unknown {sort} name {name!r}") from None

    def name_of(self, sort: str, elem_id: int) -> str:
        for name, i in self.ids[sort].items():
            if i == elem_id:
                return name
        return f"<{sort}:{elem_id}>"

    def count(self, sort: str) -> int:
        return len(self.ids[sort])


@dataclass
class ResolvedScenario:
    n: int
    table: NameTable
    declared_persons: list[int]
    profile_of: dict[int, int]
    facts: dict[int, BSet]
    assumptions: list[tuple]
    free_lists: list[int]
    derived_lists: dict[int, tuple]
    fixed_lists: set[int]
    policies: dict[str, list[RInstr]]
    policy_order: list[str]
    trace: list[RInstr] | None
    checks: tuple[CheckDirective, ...]
    policy_introduces: dict[str, set[tuple[str, int]]]
    policy_references: dict[str, set[tuple[str, int]]]
    scenario: Scenario

    def person_name(self, i: int) -> str:
        return self.table.name_of(PERSON, i)

    def content_name(self, i: int) -> str:
        return self.table.name_of(CONTENT, i)

    def list_name(self, i: int) -> str:
        return self.table.name_of(LIST, i)


def _resolve_setexpr(e: SetExpr, table: NameTable) -> tuple:
    if isinstance(e, SetName):
        return ("list", table.intern(LIST, e.name))
    return ("union", _resolve_setexpr(e.left, table), _resolve_setexpr(e.right, table))


def _setexpr_leaves(rexpr: tuple) -> Iterator[int]:
    if rexpr[0] == "list":
        yield rexpr[1]
    else:
        yield from _setexpr_leaves(rexpr[1])
        yield from _setexpr_leaves(rexpr[2])


def resolve(sc: Scenario, universe: int | None = None) -> ResolvedScenario:
    n = universe if universe is not None else (sc.universe if sc.universe is not None else 8)
    if not 1 <= n <= MAX_UNIVERSE:
        raise ResolveError(f"universe size {n} outside 1..{MAX_UNIVERSE}")

    table = NameTable()
    declared: dict[str, list[str]] = {s: [] for s in SORTS}
    for d in sc.declarations:
        for name in d.names:
            if name in table.sort_of:
                raise ResolveError(f"duplicate declaration of {name!r}")
            table.intern(d.sort, name)
            declared[d.sort].append(name)

    declared_person_names = set(declared[PERSON])
    fact_pairs: list[tuple[int, int]] = []
    for f in sc.facts:
        if f.person not in declared_person_names:
            raise ResolveError(
                f"membership fact names {f.person!r}, which is not a declared person"
            )
        p = table.id_of(PERSON, f.person)
        l = table.intern(LIST, f.list_name)
        fact_pairs.append((l, p))

    rassumptions: list[tuple] = []
    for a in sc.assumptions:
        if isinstance(a, NotSubsetAssumption):
            rassumptions.append(
                ("not-subset", ("list", table.intern(LIST, a.left)), ("list", table.intern(LIST, a.right)))
            )
        elif isinstance(a, SubsetAssumption):
            rassumptions.append(
                ("subset", _resolve_setexpr(a.left, table), _resolve_setexpr(a.right, table))
            )
        else:
            rassumptions.append(
                ("equal", _resolve_setexpr(a.left, table), _resolve_setexpr(a.right, table))
            )

    introduced: set[tuple[str, str]] = set()  # (sort, name)
    referenced: set[tuple[str, str]] = set()
    policy_introduces: dict[str, set[tuple[str, int]]] = {}
    policy_references: dict[str, set[tuple[str, int]]] = {}

    def resolve_instr(instr: Instruction, in_trace: bool, intro: set, refs: set) -> RInstr:
        if instr.name not in INSTRUCTION_NAMES:
            raise ResolveError(f"line {instr.line}: unknown instruction {instr.name!r}")
        op = OPERATIONS[instr.name]
        if len(instr.args) != len(op.params):
            raise ResolveError(
                f"line {instr.line}: {instr.name} takes {len(op.params)} arguments, got {len(instr.args)}"
            )
        actor_id = None
        if instr.actor is not None:
            actor_id = table.intern(PERSON, instr.actor)
            refs.add((PERSON, actor_id))
            referenced.add((PERSON, instr.actor))
        rargs: list = []
        for pos, (param, arg) in enumerate(zip(op.params, instr.args)):
            if param in (PERSON, CONTENT, LIST):
                if not isinstance(arg, NameArg):
                    raise ResolveError(
                        f"line {instr.line}: {instr.name} argument {pos + 1} must be a {param} name"
                    )
                i = table.intern(param, arg.name)
                rargs.append(i)
                if pos in op.introduces:
                    introduced.add((param, arg.name))
                    intro.add((param, i))
                else:
                    referenced.add((param, arg.name))
                refs.add((param, i))
            elif param in (PERSON_SET, CONTENT_SET):
                sort = PERSON if param == PERSON_SET else CONTENT
                if not isinstance(arg, SetArg):
                    raise ResolveError(
                        f"line {instr.line}: {instr.name} argument {pos + 1} must be a {{...}} set of {sort} names"
                    )
                ids = []
                for name in arg.names:
                    i = table.intern(sort, name)
                    ids.append(i)
                    referenced.add((sort, name))
                    refs.add((sort, i))
                rargs.append(("set", sort, tuple(ids)))
            elif param == RECIPIENTS:
                if isinstance(arg, SetArg):
                    if not in_trace:
                        raise ResolveError(
                            f"line {instr.line}: comment with a literal recipient set needs an"
                            " actor prefix; use a list name inside policies"
                        )
                    ids = []
                    for name in arg.names:
                        i = table.intern(PERSON, name)
                        ids.append(i)
                        referenced.add((PERSON, name))
                        refs.add((PERSON, i))
                    rargs.append(("set", PERSON, tuple(ids)))
                else:
                    i = table.intern(LIST, arg.name)
                    referenced.add((LIST, arg.name))
                    refs.add((LIST, i))
                    rargs.append(ListRef(i))
            else:  # pragma: no cover - FLAG has no language surface
                raise ResolveError(f"line {instr.line}: argument kind {param} not expressible")
        return RInstr(instr.name, tuple(rargs), actor_id, instr.line)


    rpolicies: dict[str, list[RInstr]] = {}
    order: list[str] = []
    for p in sc.policies:
        if p.name in rpolicies:
            raise ResolveError(f"duplicate policy name {p.name!r}")
        intro: set[tuple[str, int]] = set()
        refs: set[tuple[str, int]] = set()
        rpolicies[p.name] = [resolve_instr(i, False, intro, refs) for i in p.instructions]
        policy_introduces[p.name] = intro
        policy_references[p.name] = refs
        order.append(p.name)

    rtrace: list[RInstr] | None = None
    if sc.trace is not None:
        intro, refs = set(), set()
        rtrace = []
        for i in sc.trace:
            if i.actor is None:
                raise ResolveError(f"line {i.line}: trace instructions need an actor prefix")
            rtrace.append(resolve_instr(i, True, intro, refs))

    # every referenced name must be declared or introduced by some instruction
    declared_set = {(sort, name) for sort in SORTS for name in declared[sort]}
    for sort, name in sorted(referenced):
        if (sort, name) not in declared_set and (sort, name) not in introduced:
            raise ResolveError(f"{sort} {name!r} is referenced but never declared or created")

    # universe capacity, including one profile content per declared person
    declared_persons = [table.id_of(PERSON, name) for name in declared[PERSON]]
    if table.count(PERSON) > n:
        raise ResolveError(f"{table.count(PERSON)} persons exceed universe size {n}")
    if table.count(CONTENT) + len(declared_persons) > n:
        raise ResolveError(
            f"{table.count(CONTENT)} contents plus {len(declared_persons)} profile contents"
            f" exceed universe size {n}"
        )
    if table.count(LIST) > n:
        raise ResolveError(f"{table.count(LIST)} lists exceed universe size {n}")

    profile_of = {}
    next_content = table.count(CONTENT)
    for p in declared_persons:
        profile_of[p] = next_content
        next_content += 1

    facts: dict[int, BSet] = {}
    for l, p in fact_pairs:
        facts[l] = facts.get(l, BSet.empty(n)).add(p)

    all_lists = set(table.ids[LIST].values())
    fixed_lists: set[int] = set()
    for instrs in list(rpolicies.values()) + ([rtrace] if rtrace else []):
        for ri in instrs:
            if ri.name == "add-to-list":
                fixed_lists.add(ri.args[0])

    # equality assumptions `name = expr` become derived lists when the
    # expression bottoms out in non-derived lists (no cycles)
    candidates: dict[int, tuple] = {}
    for a in rassumptions:
        if a[0] == "equal" and a[1][0] == "list" and a[1][1] not in fixed_lists:
            lhs = a[1][1]
            if lhs not in candidates and lhs not in {l for l in _setexpr_leaves(a[2])}:
                candidates[lhs] = a[2]
    derived: dict[int, tuple] = {}
    changed = True
    while changed:
        changed = False
        for lhs, rhs in candidates.items():
            if lhs in derived:
                continue
            if all(leaf not in candidates or leaf in derived for leaf in _setexpr_leaves(rhs)):
                derived[lhs] = rhs
                changed = True
    filters = [
        a
        for a in rassumptions
        if not (a[0] == "equal" and a[1][0] == "list" and a[1][1] in derived and a[2] == derived[a[1][1]])
    ]

    free_lists = sorted(all_lists - fixed_lists - set(derived))

    return ResolvedScenario(
        n=n,
        table=table,
        declared_persons=declared_persons,
        profile_of=profile_of,
        facts=facts,
        assumptions=filters,
        free_lists=free_lists,
        derived_lists=derived,
        fixed_lists=fixed_lists,
        policies=rpolicies,
        policy_order=order,
        trace=rtrace,
        checks=sc.checks,
        policy_introduces=policy_introduces,
        policy_references=policy_references,
        scenario=sc,
    )


def load(source: str, universe: int | None = None) -> ResolvedScenario:
    return resolve(parse(source), universe)
