"""Bit-vector encoded finite sets and binary relations over a fixed universe.

Sets over a universe of ``n`` identifiers (0..n-1) are n-bit masks: bit
``j`` is set exactly when element ``j`` is a member.  Binary relations are
n*n-bit masks with bit ``n*d + r`` set exactly when the pair ``(d, r)``
belongs to the relation, so the n-bit slice starting at ``n*d`` is the
image of domain element ``d`` and low slices belong to low domain ids.
This layout is normative; the SMT emitter reproduces it bit for bit.

All values are immutable and every operation is pure, straight-line bit
manipulation (no recursion).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

ElemId = int

MAX_UNIVERSE = 16


class UniverseError(ValueError):
    """Bad universe size, or operands from different universes."""


class ElementOutOfRange(ValueError):
    """An element id outside 0..n-1 was supplied."""


def _check_universe(n: int) -> None:
    if not 1 <= n <= MAX_UNIVERSE:
        raise UniverseError(f"universe size must be within 1..{MAX_UNIVERSE}, got {n}")


def _check_elem(e: int, n: int) -> None:
    if not 0 <= e < n:
        raise ElementOutOfRange(f"element id {e} outside universe 0..{n - 1}")


def _same_universe(a: "BSet | BRel", b: "BSet | BRel") -> None:
    if a.n != b.n:
        raise UniverseError(f"operands from different universes ({a.n} vs {b.n})")


@dataclass(frozen=True, slots=True)
class UniverseConfig:
    """Number of element identifiers shared by all sorts (default 8)."""

    n: int = 8

    def __post_init__(self) -> None:
        _check_universe(self.n)

    @property
    def set_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def rel_mask(self) -> int:
        return (1 << (self.n * self.n)) - 1


@dataclass(frozen=True, slots=True)
class BSet:
    """Finite set of element ids encoded as an n-bit mask."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        _check_universe(self.n)
        if self.bits & ~((1 << self.n) - 1):
            raise UniverseError(f"set mask 0x{self.bits:x} has bits beyond position {self.n - 1}")

    @staticmethod
    def empty(n: int) -> "BSet":
        return BSet(0, n)

    @staticmethod
    def universe(n: int) -> "BSet":
        return BSet((1 << n) - 1, n)

    @staticmethod
    def singleton(e: ElemId, n: int) -> "BSet":
        _check_elem(e, n)
        return BSet(1 << e, n)

    @staticmethod
    def from_elements(elems: Iterable[ElemId], n: int) -> "BSet":
        bits = 0
        for e in elems:
            _check_elem(e, n)
            bits |= 1 << e
        return BSet(bits, n)

    def union(self, other: "BSet") -> "BSet":
        _same_universe(self, other)
        return BSet(self.bits | other.bits, self.n)

    def inter(self, other: "BSet") -> "BSet":
        _same_universe(self, other)
        return BSet(self.bits & other.bits, self.n)

    def diff(self, other: "BSet") -> "BSet":
        _same_universe(self, other)
        return BSet(self.bits & ~other.bits, self.n)

    def member(self, e: ElemId) -> bool:
        _check_elem(e, self.n)
        return bool(self.bits >> e & 1)

    def subset(self, other: "BSet") -> bool:
        _same_universe(self, other)
        return self.bits == self.bits & other.bits

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def is_empty(self) -> bool:
        return self.bits == 0

    def elements(self) -> list[ElemId]:
        return [e for e in range(self.n) if self.bits >> e & 1]

    def __iter__(self) -> Iterator[ElemId]:
        return iter(self.elements())

    def __contains__(self, e: object) -> bool:
        return isinstance(e, int) and 0 <= e < self.n and bool(self.bits >> e & 1)

    def add(self, e: ElemId) -> "BSet":
        _check_elem(e, self.n)
        return BSet(self.bits | 1 << e, self.n)

    def remove(self, e: ElemId) -> "BSet":
        _check_elem(e, self.n)
        return BSet(self.bits & ~(1 << e), self.n)

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements()) + "}"

    def hex(self) -> str:
        return "0x" + format(self.bits, "0{}x".format(-(-self.n // 4)))


def _expand(s_bits: int, n: int) -> int:
    """Relation mask whose slice d is all-ones exactly when d is in s."""
    slice_ones = (1 << n) - 1
    out = 0
    bits = s_bits
    while bits:
        low = bits & -bits
        d = low.bit_length() - 1
        out |= slice_ones << (n * d)
        bits ^= low
    return out


def _replicate(s_bits: int, n: int) -> int:
    """Relation mask with every slice equal to s."""
    out = 0
    for d in range(n):
        out |= s_bits << (n * d)
    return out


@dataclass(frozen=True, slots=True)
class BRel:
    """Binary relation over element ids encoded as an n*n-bit mask."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        _check_universe(self.n)
        if self.bits & ~((1 << (self.n * self.n)) - 1):
            raise UniverseError(
                f"relation mask 0x{self.bits:x} has bits beyond position {self.n * self.n - 1}"
            )

    @staticmethod
    def empty(n: int) -> "BRel":
        return BRel(0, n)

    @staticmethod
    def pair(d: ElemId, r: ElemId, n: int) -> "BRel":
        _check_elem(d, n)
        _check_elem(r, n)
        return BRel(1 << (n * d + r), n)

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[ElemId, ElemId]], n: int) -> "BRel":
        bits = 0
        for d, r in pairs:
            _check_elem(d, n)
            _check_elem(r, n)
            bits |= 1 << (n * d + r)
        return BRel(bits, n)

    def union(self, other: "BRel") -> "BRel":
        _same_universe(self, other)
        return BRel(self.bits | other.bits, self.n)

    def inter(self, other: "BRel") -> "BRel":
        _same_universe(self, other)
        return BRel(self.bits & other.bits, self.n)

    def diff(self, other: "BRel") -> "BRel":
        _same_universe(self, other)
        return BRel(self.bits & ~other.bits, self.n)

    def member(self, d: ElemId, r: ElemId) -> bool:
        _check_elem(d, self.n)
        _check_elem(r, self.n)
        return bool(self.bits >> (self.n * d + r) & 1)

    def subset(self, other: "BRel") -> bool:
        _same_universe(self, other)
        return self.bits == self.bits & other.bits

    def is_empty(self) -> bool:
        return self.bits == 0

    def cardinality(self) -> int:
        return self.bits.bit_count()

    def pairs(self) -> list[tuple[ElemId, ElemId]]:
        out = []
        bits = self.bits
        n = self.n
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            out.append((i // n, i % n))
            bits ^= low
        return out

    def slice_bits(self, d: ElemId) -> int:
        _check_elem(d, self.n)
        return self.bits >> (self.n * d) & ((1 << self.n) - 1)

    def dom(self) -> BSet:
        bits = 0
        for d in range(self.n):
            if self.slice_bits(d):
                bits |= 1 << d
        return BSet(bits, self.n)

    def ran(self) -> BSet:
        out = 0
        mask = (1 << self.n) - 1
        for d in range(self.n):
            out |= self.bits >> (self.n * d) & mask
        return BSet(out, self.n)

    def dom_restrict(self, s: BSet) -> "BRel":
        """s ◁ r: pairs whose domain element lies in s."""
        _same_universe(self, s)
        return BRel(self.bits & _expand(s.bits, self.n), self.n)

    def dom_subtract(self, s: BSet) -> "BRel":
        """s ⩤ r: pairs whose domain element lies outside s."""
        _same_universe(self, s)
        rel_mask = (1 << (self.n * self.n)) - 1
        return BRel(self.bits & ~_expand(s.bits, self.n) & rel_mask, self.n)

    def ran_restrict(self, s: BSet) -> "BRel":
        """r ▷ s: pairs whose range element lies in s."""
        _same_universe(self, s)
        return BRel(self.bits & _replicate(s.bits, self.n), self.n)

    def ran_subtract(self, s: BSet) -> "BRel":
        """r ⩥ s: pairs whose range element lies outside s."""
        _same_universe(self, s)
        rel_mask = (1 << (self.n * self.n)) - 1
        return BRel(self.bits & ~_replicate(s.bits, self.n) & rel_mask, self.n)

    def image(self, s: BSet) -> BSet:
        """r[s]: union of the image slices of the elements of s."""
        _same_universe(self, s)
        out = 0
        mask = (1 << self.n) - 1
        bits = s.bits
        while bits:
            low = bits & -bits
            d = low.bit_length() - 1
            out |= self.bits >> (self.n * d) & mask
            bits ^= low
        return BSet(out, self.n)

    def apply(self, d: ElemId) -> BSet:
        """Image of a single domain element."""
        return BSet(self.slice_bits(d), self.n)

    def compose(self, other: "BRel") -> "BRel":
        """Forward composition self;other."""
        _same_universe(self, other)
        n = self.n
        out = 0
        for d in range(n):
            mid = self.slice_bits(d)
            if mid:
                out |= other.image(BSet(mid, n)).bits << (n * d)
        return BRel(out, n)

    def inverse(self) -> "BRel":
        n = self.n
        out = 0
        bits = self.bits
        while bits:
            low = bits & -bits
            i = low.bit_length() - 1
            out |= 1 << (n * (i % n) + i // n)
            bits ^= low
        return BRel(out, n)

    def override(self, q: "BRel") -> "BRel":
        """r ⊕ q: pairs of q plus pairs of r outside q's domain."""
        _same_universe(self, q)
        return q.union(self.dom_subtract(q.dom()))

    def is_partial_function(self) -> bool:
        for d in range(self.n):
            sl = self.slice_bits(d)
            if sl & (sl - 1):
                return False
        return True

    def is_total_on(self, a: BSet) -> bool:
        _same_universe(self, a)
        return a.subset(self.dom())

    def is_surjective_onto(self, b: BSet) -> bool:
        _same_universe(self, b)
        return b.subset(self.ran())

    def __str__(self) -> str:
        return "{" + ",".join(f"({d},{r})" for d, r in self.pairs()) + "}"

    def hex(self) -> str:
        return "0x" + format(self.bits, "0{}x".format(-(-(self.n * self.n) // 4)))


def identity_on(s: BSet) -> BRel:
    """id(s): the pairs (x, x) for x in s."""
    bits = 0
    for x in s.elements():
        bits |= 1 << (s.n * x + x)
    return BRel(bits, s.n)


def product(a: BSet, b: BSet) -> BRel:
    """a × b: every pair with domain element in a and range element in b."""
    _same_universe(a, b)
    return BRel(_expand(a.bits, a.n) & _replicate(b.bits, a.n), a.n)
