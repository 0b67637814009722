"""Bit-vector SMT script emission for cross-checking verdicts externally.

The prelude defines the set sort as an n-bit vector, the relation sort as
an n*n-bit vector, and every set/relation operation as a solver-level
function matching the kernel's bit layout (slice d = image of domain
element d, low slices = low ids).  Policy scripts declare one state per
instruction, define each instruction's precondition p_i and poststate
equality q_i, assert the state chain, and chain the verification
conditions

    (assert (= VC_i (and p_i (=> q_i VC_{i+1}))))

with the final condition written (and p_N (=> p_N q_N)).  Satisfiability
of the conjunction of all VC_i then tracks executability.

Two dialects are supported: standard SMT-LIB2 (QF_BV; the default, since
helper definitions are plain macros there) and the Yices 1 surface syntax
(define-type / :: / mk-bv / lambda) for fidelity demonstrations.

List-membership sets that the scenario leaves free are emitted as
declared symbols constrained by the scenario assumptions; passing a
concrete environment grounds them instead, which makes the whole script a
closed bit-vector formula that the test suite evaluates without any
external solver.
"""

from __future__ import annotations

from .kernel import BSet, _expand
from .operations import listow_of
from .policy_lang import ListRef, ResolvedScenario, RInstr
from .snstate import FIELDS, SnState
from .vcgen import (
    DEFAULT_MAX_ENVS,
    Environment,
    base_state,
    enumerate_environments,
    run_instructions,
    static_members,
)


class EmitError(Exception):
    pass


# ---------------------------------------------------------------------------
# dialects


class SmtLib2:
    name = "smtlib2"
    set_sort = "BSet"
    rel_sort = "BRel"
    bool_sort = "Bool"
    true = "true"
    false = "false"

    def header(self, n: int) -> list[str]:
        return [
            "(set-logic QF_BV)",
            f"(define-sort {self.set_sort} () (_ BitVec {n}))",
            f"(define-sort {self.rel_sort} () (_ BitVec {n * n}))",
        ]

    def bv(self, value: int, width: int) -> str:
        if width % 4 == 0:
            return "#x" + format(value, f"0{width // 4}x")
        return "#b" + format(value, f"0{width}b")

    def app(self, fn: str, *args: str) -> str:
        return "(" + " ".join((fn,) + args) + ")"

    def eq(self, a: str, b: str) -> str:
        return self.app("=", a, b)

    def and_(self, *xs: str) -> str:
        xs = tuple(x for x in xs if x != self.true)
        if not xs:
            return self.true
        if len(xs) == 1:
            return xs[0]
        return self.app("and", *xs)

    def or_(self, *xs: str) -> str:
        if not xs:
            return self.false
        if len(xs) == 1:
            return xs[0]
        return self.app("or", *xs)

    def not_(self, x: str) -> str:
        return self.app("not", x)

    def implies(self, a: str, b: str) -> str:
        return self.app("=>", a, b)

    def ite(self, c: str, a: str, b: str) -> str:
        return self.app("ite", c, a, b)

    def bvand(self, a: str, b: str) -> str:
        return self.app("bvand", a, b)

    def bvor(self, *xs: str) -> str:
        out = xs[0]
        for x in xs[1:]:
            out = self.app("bvor", out, x)
        return out

    def bvnot(self, a: str) -> str:
        return self.app("bvnot", a)

    def bvsub(self, a: str, b: str) -> str:
        return self.app("bvsub", a, b)

    def extract(self, hi: int, lo: int, e: str) -> str:
        return f"((_ extract {hi} {lo}) {e})"

    def concat(self, parts: list[str]) -> str:
        # parts high to low; SMT-LIB concat is binary
        out = parts[0]
        for p in parts[1:]:
            out = self.app("concat", out, p)
        return out

    def declare_const(self, name: str, sort: str) -> str:
        return f"(declare-const {name} {sort})"

    def define_const(self, name: str, sort: str, body: str) -> str:
        return f"(define-fun {name} () {sort} {body})"

    def define_fun(self, name: str, params: list[tuple[str, str]], ret: str, body: str) -> str:
        plist = " ".join(f"({p} {s})" for p, s in params)
        return f"(define-fun {name} ({plist}) {ret} {body})"

    def assert_(self, e: str) -> str:
        return f"(assert {e})"

    def check(self) -> str:
        return "(check-sat)"

    def comment(self, text: str) -> str:
        return f"; {text}"


class Yices1(SmtLib2):
    name = "yices1"
    set_sort = "bset"
    rel_sort = "brel"
    bool_sort = "bool"

    def header(self, n: int) -> list[str]:
        return [
            f"(define-type {self.set_sort} (bitvector {n}))",
            f"(define-type {self.rel_sort} (bitvector {n * n}))",
        ]

    def bv(self, value: int, width: int) -> str:
        return f"(mk-bv {width} {value})"

    def bvand(self, a: str, b: str) -> str:
        return self.app("bv-and", a, b)

    def bvor(self, *xs: str) -> str:
        out = xs[0]
        for x in xs[1:]:
            out = self.app("bv-or", out, x)
        return out

    def bvnot(self, a: str) -> str:
        return self.app("bv-not", a)

    def bvsub(self, a: str, b: str) -> str:
        return self.app("bv-sub", a, b)

    def extract(self, hi: int, lo: int, e: str) -> str:
        return f"(bv-extract {hi} {lo} {e})"

    def concat(self, parts: list[str]) -> str:
        out = parts[0]
        for p in parts[1:]:
            out = self.app("bv-concat", out, p)
        return out

    def declare_const(self, name: str, sort: str) -> str:
        return f"(define {name}::{sort})"

    def define_const(self, name: str, sort: str, body: str) -> str:
        return f"(define {name}::{sort} {body})"

    def define_fun(self, name: str, params: list[tuple[str, str]], ret: str, body: str) -> str:
        sig = " ".join(s for _, s in params) + f" {ret}"
        plist = " ".join(f"{p}::{s}" for p, s in params)
        return f"(define {name}::(-> {sig}) (lambda ({plist}) {body}))"

    def check(self) -> str:
        return "(check)"

    def comment(self, text: str) -> str:
        return f";; {text}"


DIALECTS = {"smtlib2": SmtLib2(), "yices1": Yices1()}


# ---------------------------------------------------------------------------
# prelude


def _spread(d: SmtLib2, s: str, n: int) -> str:
    """Each bit of s widened to a full slice (domain selection mask)."""
    parts = []
    for i in range(n - 1, -1, -1):
        bit = d.extract(i, i, s)
        parts.append(d.concat([bit] * n))
    return d.concat(parts)


def _replicate(d: SmtLib2, s: str, n: int) -> str:
    """n copies of s, one per slice (range selection mask)."""
    return d.concat([s] * n)


def emit_prelude(n: int, dialect: str = "smtlib2") -> str:
    if not 1 <= n <= 16:
        raise EmitError(f"unsupported universe size {n}")
    d = DIALECTS[dialect]
    S, R, B = d.set_sort, d.rel_sort, d.bool_sort
    zero_s = d.bv(0, n)
    zero_r = d.bv(0, n * n)
    lines: list[str] = []
    lines += d.header(n)
    lines.append(d.comment(f"universe of {n} element ids; slice d of a {R} is the image of d"))

    lines.append(d.define_const("bset-empty", S, zero_s))
    if dialect == "yices1":
        lines.append(d.define_const("bset-0", S, d.bv(1, n)))
        for e in range(1, n):
            lines.append(d.define_const(f"bset-{e}", S, f"(bv-shift-left0 bset-0 {e})"))
    else:
        for e in range(n):
            lines.append(d.define_const(f"bset-{e}", S, d.bv(1 << e, n)))
    lines.append(d.define_const("brel-empty", R, zero_r))

    s1s2 = [("s1", S), ("s2", S)]
    lines.append(d.define_fun("bset-union", s1s2, S, d.bvor("s1", "s2")))
    lines.append(d.define_fun("bset-inter", s1s2, S, d.bvand("s1", "s2")))
    lines.append(d.define_fun("bset-diff", s1s2, S, d.bvand("s1", d.bvnot("s2"))))
    lines.append(d.define_fun("bset-is-subset", s1s2, B, d.eq("s1", d.bvand("s1", "s2"))))
    lines.append(d.define_fun("bset-is-equal", s1s2, B, d.eq("s1", "s2")))
    lines.append(
        d.define_fun("bset-is-member", [("e", S), ("s", S)], B, d.eq("e", d.bvand("e", "s")))
    )

    r1r2 = [("r1", R), ("r2", R)]
    lines.append(d.define_fun("brel-union", r1r2, R, d.bvor("r1", "r2")))
    lines.append(d.define_fun("brel-inter", r1r2, R, d.bvand("r1", "r2")))
    lines.append(d.define_fun("brel-diff", r1r2, R, d.bvand("r1", d.bvnot("r2"))))
    lines.append(d.define_fun("brel-is-subset", r1r2, B, d.eq("r1", d.bvand("r1", "r2"))))
    lines.append(d.define_fun("brel-is-equal", r1r2, B, d.eq("r1", "r2")))

    def slice_of(r: str, i: int) -> str:
        return d.extract(n * i + n - 1, n * i, r)

    range_body = slice_of("r", 0)
    for i in range(1, n):
        range_body = d.app("bset-union", slice_of("r", i), range_body)
    lines.append(d.define_fun("brel-get-range", [("r", R)], S, range_body))

    dom_bits = [
        d.ite(d.eq(slice_of("r", i), zero_s), d.bv(0, 1), d.bv(1, 1))
        for i in range(n - 1, -1, -1)
    ]
    lines.append(d.define_fun("brel-get-domain", [("r", R)], S, d.concat(dom_bits)))

    rs_ = [("r", R), ("s", S)]
    sr_ = [("s", S), ("r", R)]
    lines.append(d.define_fun("brel-ran-restriction", rs_, R, d.bvand("r", _replicate(d, "s", n))))
    lines.append(
        d.define_fun("brel-ran-subtraction", rs_, R, d.bvand("r", d.bvnot(_replicate(d, "s", n))))
    )
    lines.append(d.define_fun("brel-dom-restriction", sr_, R, d.bvand("r", _spread(d, "s", n))))
    lines.append(
        d.define_fun("brel-dom-subtraction", sr_, R, d.bvand("r", d.bvnot(_spread(d, "s", n))))
    )

    def image_body(r: str, s: str) -> str:
        body = "bset-empty"
        for i in range(n - 1, -1, -1):
            body = d.ite(
                d.eq(d.extract(i, i, s), d.bv(1, 1)),
                d.app("bset-union", slice_of(r, i), body),
                body,
            )
        return body

    lines.append(d.define_fun("brel-image", [("r", R), ("s", S)], S, image_body("r", "s")))
    lines.append(
        d.define_fun("brel-apply", [("r", R), ("e", S)], S, d.app("brel-image", "r", "e"))
    )
    lines.append(
        d.define_fun(
            "brel-product",
            [("a", S), ("b", S)],
            R,
            d.bvand(_spread(d, "a", n), _replicate(d, "b", n)),
        )
    )

    compose_parts = [
        d.app("brel-image", "r2", slice_of("r1", i)) for i in range(n - 1, -1, -1)
    ]
    lines.append(d.define_fun("brel-compose", [("r1", R), ("r2", R)], R, d.concat(compose_parts)))

    inverse_parts = []
    for i in range(n * n - 1, -1, -1):
        dd, rr = divmod(i, n)
        src = n * rr + dd
        inverse_parts.append(d.extract(src, src, "r"))
    lines.append(d.define_fun("brel-inverse", [("r", R)], R, d.concat(inverse_parts)))

    diag = sum(1 << (n * i + i) for i in range(n))
    lines.append(
        d.define_fun(
            "brel-identity", [("s", S)], R, d.bvand(_spread(d, "s", n), d.bv(diag, n * n))
        )
    )
    lines.append(
        d.define_fun(
            "brel-override",
            [("r", R), ("q", R)],
            R,
            d.app("brel-union", "q", d.app("brel-dom-subtraction", d.app("brel-get-domain", "q"), "r")),
        )
    )

    one_s = d.bv(1, n)
    pf_clauses = [
        d.eq(d.bvand(slice_of("r", i), d.bvsub(slice_of("r", i), one_s)), zero_s)
        for i in range(n)
    ]
    lines.append(d.define_fun("brel-is-partial-function", [("r", R)], B, d.and_(*pf_clauses)))
    lines.append(
        d.define_fun(
            "brel-is-total-on", [("r", R), ("a", S)], B,
            d.app("bset-is-subset", "a", d.app("brel-get-domain", "r")),
        )
    )
    lines.append(
        d.define_fun(
            "brel-is-surjective-onto", [("r", R), ("b", S)], B,
            d.app("bset-is-subset", "b", d.app("brel-get-range", "r")),
        )
    )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# per-instruction compilation


class _Compiler:
    def __init__(self, d: SmtLib2, rs: ResolvedScenario, member_expr):
        self.d = d
        self.n = rs.n
        self.rs = rs
        self.member_expr = member_expr

    def slit(self, mask: int) -> str:
        return self.d.bv(mask, self.n)

    def rlit(self, mask: int) -> str:
        return self.d.bv(mask, self.n * self.n)

    def elem(self, e: int) -> str:
        return self.slit(1 << e)

    def pair(self, c: int, p: int) -> str:
        return self.rlit(1 << (self.n * c + p))

    def slice_(self, rel: str, i: int) -> str:
        n = self.n
        return self.d.extract(n * i + n - 1, n * i, rel)

    def inject(self, parts: dict[int, str]) -> str:
        """A relation with the given slice expressions, zeros elsewhere."""
        n = self.n
        segments: list[str] = []
        zero_run = 0

        def flush() -> None:
            nonlocal zero_run
            if zero_run:
                segments.append(self.d.bv(0, zero_run))
                zero_run = 0

        for i in range(n - 1, -1, -1):
            if i in parts:
                flush()
                segments.append(parts[i])
            else:
                zero_run += n
        flush()
        return self.d.concat(segments)

    def member(self, e_expr: str, s_expr: str) -> str:
        return self.d.app("bset-is-member", e_expr, s_expr)

    def subset(self, a: str, b: str) -> str:
        return self.d.app("bset-is-subset", a, b)

    def rel_member(self, pair_lit: str, rel: str) -> str:
        return self.d.app("brel-is-subset", pair_lit, rel)

    def domsub_mask(self, removed: BSet) -> str:
        n = self.n
        keep = ~_expand(removed.bits, n) & ((1 << (n * n)) - 1)
        return self.rlit(keep)

    def compile(self, ri: RInstr, sp: dict[str, str]) -> tuple[str, dict[str, str]]:
        """Precondition expression and changed-field poststate expressions."""
        d = self.d
        n = self.n
        name = ri.name
        args = ri.args
        empty_s = self.slit(0)

        def ground_set(a) -> BSet:
            return BSet.from_elements(a[2], n)

        if name == "create-account":
            p, c = args
            pre = d.and_(
                d.not_(self.member(self.elem(p), sp["persons"])),
                d.not_(self.member(self.elem(c), sp["contents"])),
            )
            pair = self.pair(c, p)
            post = {
                "persons": d.bvor(sp["persons"], self.elem(p)),
                "contents": d.bvor(sp["contents"], self.elem(c)),
            }
            for f in ("owner", "pages", "viewp", "editp"):
                post[f] = d.bvor(sp[f], pair)
            return pre, post

        if name == "upload":
            c, pe = args
            pre = d.and_(
                d.not_(self.member(self.elem(c), sp["contents"])),
                self.member(self.elem(pe), sp["persons"]),
            )
            pair = self.pair(c, pe)
            post = {"contents": d.bvor(sp["contents"], self.elem(c))}
            for f in ("owner", "pages", "viewp", "editp"):
                post[f] = d.bvor(sp[f], pair)
            return pre, post

        if name == "hide":
            c, pe = args
            pair = self.pair(c, pe)
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                self.member(self.elem(pe), sp["persons"]),
                self.rel_member(pair, sp["pages"]),
                d.not_(d.eq(self.slice_(sp["owner"], c), self.elem(pe))),
            )
            post = {f: d.bvand(sp[f], d.bvnot(pair)) for f in ("pages", "viewp", "editp")}
            return pre, post

        if name == "make-visible":
            c, pe = args
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                self.member(self.elem(pe), sp["persons"]),
                self.rel_member(self.pair(c, pe), sp["viewp"]),
            )
            return pre, {"pages": d.bvor(sp["pages"], self.pair(c, pe))}

        if name in ("transmit", "transmit-to-list", "transmit-to-list-restricted"):
            c = args[0]
            extra: list[str] = []
            if name == "transmit":
                prs = self.slit(ground_set(args[1]).bits)
            elif name == "transmit-to-list":
                l = args[1]
                prs = self.slice_(sp["listpe"], l)
                extra = [
                    d.not_(d.eq(self.slice_(sp["listow"], l), empty_s)),
                    d.eq(self.slice_(sp["owner"], c), self.slice_(sp["listow"], l)),
                ]
            else:
                l1, l2 = args[1], args[2]
                prs = d.bvand(
                    self.slice_(sp["listpe"], l1), d.bvnot(self.slice_(sp["listpe"], l2))
                )
                extra = [
                    d.not_(d.eq(self.slice_(sp["listow"], l1), empty_s)),
                    d.not_(d.eq(self.slice_(sp["listow"], l2), empty_s)),
                    d.true if l1 != l2 else d.false,
                    d.eq(self.slice_(sp["owner"], c), self.slice_(sp["listow"], l1)),
                    d.eq(self.slice_(sp["owner"], c), self.slice_(sp["listow"], l2)),
                ]
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                self.subset(prs, sp["persons"]),
                d.not_(self.subset(self.slice_(sp["owner"], c), prs)),
                *extra,
            )
            grant = self.inject({c: prs})
            post = {
                "pages": d.bvor(sp["pages"], grant),
                "viewp": d.bvor(sp["viewp"], grant),
            }
            return pre, post

        if name == "delete":
            c = args[0]
            cts = ground_set(args[1])
            removed = cts.add(c)
            own_c = self.slice_(sp["owner"], c)
            owned_bits = [
                d.ite(
                    d.and_(
                        d.not_(d.eq(self.slice_(sp["owner"], i), empty_s)),
                        d.eq(self.slice_(sp["owner"], i), own_c),
                    ),
                    d.bv(1, 1),
                    d.bv(0, 1),
                )
                for i in range(n - 1, -1, -1)
            ]
            owned = d.concat(owned_bits)
            keep_alive = []
            for q in range(n):
                owned_q = d.concat(
                    [
                        d.ite(
                            d.eq(self.slice_(sp["owner"], i), self.elem(q)),
                            d.bv(1, 1),
                            d.bv(0, 1),
                        )
                        for i in range(n - 1, -1, -1)
                    ]
                )
                keep_alive.append(
                    d.implies(
                        self.member(self.elem(q), sp["persons"]),
                        d.not_(self.subset(owned_q, self.slit(removed.bits))),
                    )
                )
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                self.subset(self.elem(c), owned),
                d.not_(d.eq(owned, self.elem(c))),
                self.subset(self.slit(cts.bits), sp["contents"]),
                d.true if not cts.member(c) else d.false,
                *keep_alive,
            )
            keep = self.domsub_mask(removed)
            post = {"contents": d.bvand(sp["contents"], d.bvnot(self.slit(removed.bits)))}
            for f in ("owner", "pages", "viewp", "editp"):
                post[f] = d.bvand(sp[f], keep)
            return pre, post

        if name == "comment":
            c, cmt, recip = args
            if isinstance(recip, ListRef):
                l = recip.list_id
                prs = self.slice_(sp["listpe"], l)
                actor_set = self.slice_(sp["listow"], l)
            else:
                prs = self.slit(ground_set(recip).bits)
                actor_set = self.elem(ri.actor)
            pre = d.and_(
                d.not_(d.eq(actor_set, empty_s)),
                self.member(self.elem(c), sp["contents"]),
                d.not_(self.member(self.elem(cmt), sp["contents"])),
                self.subset(prs, sp["persons"]),
                self.rel_member(self.inject({c: actor_set}), sp["viewp"]),
            )
            pa = d.bvor(prs, actor_set)
            cmt_grant = self.inject({cmt: pa})
            c_grant = self.inject({c: prs})
            post = {
                "contents": d.bvor(sp["contents"], self.elem(cmt)),
                "owner": d.bvor(sp["owner"], self.inject({cmt: actor_set})),
                "pages": d.bvor(sp["pages"], cmt_grant, c_grant),
                "viewp": d.bvor(sp["viewp"], c_grant, cmt_grant),
                "editp": d.bvor(sp["editp"], cmt_grant),
            }
            return pre, post

        if name == "edit":
            c, ow, newc = args
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                d.eq(self.slice_(sp["owner"], c), self.elem(ow)),
                d.not_(self.member(self.elem(newc), sp["contents"])),
            )
            keep = self.domsub_mask(BSet.singleton(c, n))
            post = {
                "contents": d.bvor(
                    d.bvand(sp["contents"], d.bvnot(self.elem(c))), self.elem(newc)
                ),
                "owner": d.bvor(d.bvand(sp["owner"], keep), self.pair(newc, ow)),
                "pages": d.bvor(
                    d.bvand(sp["pages"], keep), self.inject({newc: self.slice_(sp["pages"], c)})
                ),
                "viewp": d.bvor(
                    d.bvand(sp["viewp"], keep), self.inject({newc: self.slice_(sp["viewp"], c)})
                ),
                "editp": d.bvor(d.bvand(sp["editp"], keep), self.pair(newc, ow)),
            }
            return pre, post

        if name == "edit-not-owned":
            c, newc, p = args
            u_set = self.slice_(sp["owner"], c)
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                d.not_(d.eq(u_set, self.elem(p))),
                self.rel_member(self.pair(c, p), sp["editp"]),
                d.not_(self.member(self.elem(newc), sp["contents"])),
            )
            post = {
                "contents": d.bvor(sp["contents"], self.elem(newc)),
                "owner": d.bvor(sp["owner"], self.pair(newc, p)),
            }
            for f in ("pages", "viewp", "editp"):
                moved = d.bvand(self.slice_(sp[f], c), d.bvnot(u_set))
                post[f] = d.bvor(
                    d.bvand(sp[f], d.bvnot(self.inject({c: moved}))),
                    self.inject({newc: moved}),
                    self.pair(newc, p),
                )
            return pre, post

        if name in ("grant-view", "grant-edit"):
            c, p = args
            pre = d.and_(
                self.member(self.elem(c), sp["contents"]),
                self.member(self.elem(p), sp["persons"]),
                d.not_(d.eq(self.slice_(sp["owner"], c), self.elem(p))),
            )
            pair = self.pair(c, p)
            if name == "grant-view":
                return pre, {"viewp": d.bvor(sp["viewp"], pair)}
            return pre, {"editp": d.bvor(sp["editp"], pair), "viewp": d.bvor(sp["viewp"], pair)}

        if name == "create-list":
            l, ow = args
            pre = d.and_(
                d.eq(self.slice_(sp["listow"], l), empty_s),
                self.member(self.elem(ow), sp["persons"]),
            )
            post = {"listow": d.bvor(sp["listow"], self.pair(l, ow))}
            members = self.member_expr(l)
            if members != self.slit(0):
                post["listpe"] = d.bvor(sp["listpe"], self.inject({l: members}))
            return pre, post

        if name == "add-to-list":
            l, p = args
            pre = d.and_(
                d.not_(d.eq(self.slice_(sp["listow"], l), empty_s)),
                self.member(self.elem(p), sp["persons"]),
            )
            return pre, {"listpe": d.bvor(sp["listpe"], self.pair(l, p))}

        raise EmitError(f"instruction {name} has no script encoding")


# ---------------------------------------------------------------------------
# script assembly


def _state_literals(d: SmtLib2, c: _Compiler, state: SnState) -> dict[str, str]:
    out = {}
    for f in FIELDS:
        v = getattr(state, f)
        out[f] = c.slit(v.bits) if isinstance(v, BSet) else c.rlit(v.bits)
    return out


def emit_vc_script(
    rs: ResolvedScenario,
    policy_name: str,
    dialect: str = "smtlib2",
    env: Environment | None = None,
    context: str | None = None,
    max_envs: int = DEFAULT_MAX_ENVS,
) -> str:
    """The per-policy chain of verification conditions as solver input."""
    if policy_name not in rs.policies:
        raise EmitError(f"no policy named {policy_name!r}")
    d = DIALECTS[dialect]
    n = rs.n
    ground = env is not None

    env0: Environment | None = env
    context_lists: set[int] = set()
    if context is not None:
        if context not in rs.policies:
            raise EmitError(f"no context policy named {context!r}")
        context_lists = {
            ri.args[0] for ri in rs.policies[context] if ri.name == "create-list"
        }
    if env0 is None and context is not None:
        env0 = next(enumerate_environments(rs, max_envs), None)
        if env0 is None:
            raise EmitError("no admissible environment to ground the context policy")

    symbols: dict[int, str] = {}

    def member_expr(l: int) -> str:
        if ground:
            return d.bv(env0.get(l, BSet.empty(n)).bits, n)
        if l in context_lists:
            return d.bv(env0[l].bits, n)
        if l in rs.fixed_lists:
            return d.bv(static_members(rs, l).bits, n)
        if l in rs.derived_lists:
            return setexpr_expr(rs.derived_lists[l])
        if l not in symbols:
            symbols[l] = f"{rs.list_name(l)}-members"
        return symbols[l]

    def setexpr_expr(rexpr: tuple) -> str:
        if rexpr[0] == "list":
            return member_expr(rexpr[1])
        return d.app("bset-union", setexpr_expr(rexpr[1]), setexpr_expr(rexpr[2]))

    comp = _Compiler(d, rs, member_expr)

    initial = base_state(rs)
    if context is not None:
        run = run_instructions(rs, rs.policies[context], env0, initial)
        if not run.ok:
            raise EmitError(
                f"context policy {context!r} is not executable: {run.failure.message}"
            )
        initial = run.final_state

    instrs = rs.policies[policy_name]
    N = len(instrs)

    lines: list[str] = [
        d.comment(f"executability of policy {policy_name}"
                  + (f" after {context}" if context else "")),
    ]
    lines.append(emit_prelude(n, dialect).rstrip("\n"))
    lines.append(d.comment("symbol bindings: "
                           + ", ".join(f"{sort} {name}={i}"
                                       for sort in ("person", "content", "list")
                                       for name, i in sorted(rs.table.ids[sort].items(), key=lambda kv: kv[1]))))

    # force symbol creation for free lists referenced anywhere in the chain,
    # in list-id order, so declarations precede use
    assumption_exprs: list[str] = []
    if not ground:
        for l in rs.free_lists:
            if l not in context_lists:
                member_expr(l)
    for a in rs.assumptions:
        kind, left, right = a
        le, re_ = setexpr_expr(left), setexpr_expr(right)
        if kind == "subset":
            assumption_exprs.append(d.app("bset-is-subset", le, re_))
        elif kind == "equal":
            assumption_exprs.append(d.app("bset-is-equal", le, re_))
        else:
            assumption_exprs.append(d.not_(d.app("bset-is-subset", le, re_)))

    for l, sym in sorted(symbols.items()):
        lines.append(d.declare_const(sym, d.set_sort))
    for e in assumption_exprs:
        lines.append(d.assert_(e))

    s0 = _state_literals(d, comp, initial)
    for f in FIELDS:
        sort = d.set_sort if f in ("persons", "contents") else d.rel_sort
        lines.append(d.define_const(f"s0-{f}", sort, s0[f]))

    for i in range(1, N + 1):
        lines.append(d.declare_const(f"VC{i}", d.bool_sort))

    for i, ri in enumerate(instrs, start=1):
        sp = {f: f"s{i - 1}-{f}" for f in FIELDS}
        pre_expr, post = comp.compile(ri, sp)
        lines.append(d.comment(f"instruction {i}: {ri.name}"))
        lines.append(d.define_const(f"p{i}", d.bool_sort, pre_expr))
        eqs = []
        for f in FIELDS:
            sort = d.set_sort if f in ("persons", "contents") else d.rel_sort
            lines.append(d.declare_const(f"s{i}-{f}", sort))
            eqs.append(d.eq(f"s{i}-{f}", post.get(f, sp[f])))
        lines.append(d.define_const(f"q{i}", d.bool_sort, d.app("and", *eqs)))
        lines.append(d.assert_(f"q{i}"))
        if i < N:
            vc_body = d.app("and", f"p{i}", d.implies(f"q{i}", f"VC{i + 1}"))
        else:
            vc_body = d.app("and", f"p{i}", d.implies(f"p{i}", f"q{i}"))
        lines.append(d.assert_(d.eq(f"VC{i}", vc_body)))

    if N:
        lines.append(d.assert_(d.app("and", *(f"VC{i}" for i in range(1, N + 1))) if N > 1 else "VC1"))
    else:
        lines.append(d.assert_(d.true))
    lines.append(d.check())
    return "\n".join(lines) + "\n"
