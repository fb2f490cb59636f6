"""Nullability, symbol derivatives, and derivative-class partitions.

Everything here is a pure function over canonical trees.  Position
values are plain integers supplied by the caller; a derivative taken at
position ``p`` stamps ``p`` into the slot writes it emits for every tag
it crosses.  Fresh banks created by copy-on-distribution come from a
caller-supplied allocator so one matching step stays deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .charset import ANCHORS, FULL, Alphabet, CharSet, is_anchor
from .syntax import (
    EMPTY,
    EPSILON,
    Alt,
    Bank,
    BankAlloc,
    Cat,
    Empty,
    Eps,
    Inter,
    Not,
    Regex,
    Star,
    Sym,
    Tag,
    Write,
    alt,
    bank,
    cat,
    comp,
    inter,
    is_nullable,
    star,
    writes_chain,
)

# A "way" to accept the empty string: the owning bank (None below a bank
# head) plus the slot writes accumulated by nulling tags on that path.
Way = tuple[Optional[int], tuple[tuple[int, int], ...]]


def _merge(w1: tuple[tuple[int, int], ...], w2: Iterable[tuple[int, int]]):
    d = dict(w1)
    for s, v in w2:
        d[s] = v
    return tuple(sorted(d.items()))


def _combine_ways(a: Way, b: Way) -> Way:
    bank_a, wa = a
    bank_b, wb = b
    owner = bank_a if bank_a is not None else bank_b
    return owner, _merge(wa, wb)


def nu_ways(r: Regex, pos: int) -> list[Way]:
    """All distinct memory outcomes of accepting the empty string."""
    if isinstance(r, (Empty, Sym)):
        return []
    if isinstance(r, Eps):
        return [(None, ())]
    if isinstance(r, Star):
        return [(None, ())]
    if isinstance(r, Tag):
        return [(None, ((r.index, pos),))]
    if isinstance(r, Write):
        return [(None, ((r.slot, r.value),))]
    if isinstance(r, Bank):
        out = []
        for owner, w in nu_ways(r.body, pos):
            out.append((r.bank, _merge(r.writes, w)))
        return _dedup(out)
    if isinstance(r, Cat):
        left = nu_ways(r.head, pos)
        if not left:
            return []
        right = nu_ways(r.tail, pos)
        return _dedup([_combine_ways(a, b) for a in left for b in right])
    if isinstance(r, Alt):
        out: list[Way] = []
        for t in r.terms:
            out.extend(nu_ways(t, pos))
        return _dedup(out)
    if isinstance(r, Inter):
        acc: list[Way] = [(None, ())]
        for t in r.terms:
            ways = nu_ways(t, pos)
            if not ways:
                return []
            acc = [_combine_ways(a, b) for a in acc for b in ways]
        return _dedup(acc)
    if isinstance(r, Not):
        # The complement of a tagged language ignores memory.
        return [] if nu_ways(r.body, pos) else [(None, ())]
    raise TypeError(f"not a Regex: {r!r}")


def _dedup(ways: list[Way]) -> list[Way]:
    seen = set()
    out = []
    for w in ways:
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


NOT_NULLABLE = "not-nullable"
NULLABLE_PLAIN = "nullable"
NULLABLE_WITH_MEMORY = "nullable-with-memory"


@dataclass(frozen=True)
class NullifyResult:
    kind: str
    entries: tuple[Way, ...] = ()

    def __bool__(self) -> bool:
        return self.kind != NOT_NULLABLE


def nullify(r: Regex, pos: int = 0) -> NullifyResult:
    """Decide the empty-string membership, reporting memory outcomes.

    For tag-bearing expressions each entry names the bank of a nullable
    alternative together with the slot writes produced by nulling its
    tags at ``pos``.
    """
    ways = nu_ways(r, pos)
    if not ways:
        return NullifyResult(NOT_NULLABLE)
    if all(owner is None and not w for owner, w in ways):
        return NullifyResult(NULLABLE_PLAIN, tuple(ways))
    return NullifyResult(NULLABLE_WITH_MEMORY, tuple(ways))


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------


def derive(r: Regex, cp: int, pos: int = 0, alloc: Optional[BankAlloc] = None) -> Regex:
    """The derivative of ``r`` with respect to one working-alphabet symbol.

    Tags crossed on the way emit pending slot writes stamped with
    ``pos``; bank copies created by distributing over a union draw fresh
    ids from ``alloc`` (one is created from the tree when omitted).
    """
    if alloc is None:
        alloc = BankAlloc.after(r)
    return _derive(r, cp, pos, alloc)


def _derive(r: Regex, cp: int, pos: int, alloc: BankAlloc) -> Regex:
    if isinstance(r, (Empty, Eps, Tag, Write)):
        return EMPTY
    if isinstance(r, Sym):
        if cp in r.chars:
            return EPSILON
        if r.transparent and is_anchor(cp):
            return r
        return EMPTY
    if isinstance(r, Star):
        return cat(_derive(r.body, cp, pos, alloc), r)
    if isinstance(r, Cat):
        parts = [cat(_derive(r.head, cp, pos, alloc), r.tail)]
        for owner, writes in nu_ways(r.head, pos):
            d = _derive(r.tail, cp, pos, alloc)
            piece = cat(writes_chain(writes), d) if writes else d
            if owner is not None:
                piece = bank(owner, (), piece, alloc)
            parts.append(piece)
        return alt(parts)
    if isinstance(r, Alt):
        return alt([_derive(t, cp, pos, alloc) for t in r.terms])
    if isinstance(r, Inter):
        return inter([_derive(t, cp, pos, alloc) for t in r.terms])
    if isinstance(r, Not):
        return comp(_derive(r.body, cp, pos, alloc))
    if isinstance(r, Bank):
        return bank(r.bank, r.writes, _derive(r.body, cp, pos, alloc), alloc, src=r.src)
    raise TypeError(f"not a Regex: {r!r}")


def derive_string(r: Regex, symbols, start_pos: int = 0) -> Regex:
    """Left fold of ``derive`` along a symbol sequence.

    ``symbols`` may be a str (taken as code points) or an iterable of
    ints.  The position increments after each consumed symbol.
    """
    pos = start_pos
    for s in symbols:
        cp = ord(s) if isinstance(s, str) else s
        r = derive(r, cp, pos, BankAlloc.after(r))
        pos += 1
    return r


# ---------------------------------------------------------------------------
# Derivative classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolPartition:
    """Disjoint symbol blocks covering the working alphabet.

    Within one block every symbol produces the identical derivative.
    """

    blocks: tuple[CharSet, ...]

    def block_of(self, cp: int) -> Optional[CharSet]:
        for b in self.blocks:
            if cp in b:
                return b
        return None

    def is_partition_of(self, universe: CharSet) -> bool:
        seen = CharSet()
        for b in self.blocks:
            if b.is_empty() or not seen.intersect(b).is_empty():
                return False
            seen = seen.union(b)
        return seen == universe


def _meet(a: tuple[CharSet, ...], b: tuple[CharSet, ...]) -> tuple[CharSet, ...]:
    out = []
    for x in a:
        for y in b:
            z = x.intersect(y)
            if not z.is_empty():
                out.append(z)
    return tuple(out)


@lru_cache(maxsize=None)
def _dca(r: Regex) -> tuple[CharSet, ...]:
    if isinstance(r, (Empty, Eps, Tag, Write)):
        return (FULL,)
    if isinstance(r, Sym):
        if r.transparent:
            # The atom's derivative distinguishes members, foreign
            # anchors (skipped) and foreign base symbols (dead).
            blocks = [
                r.chars,
                ANCHORS.difference(r.chars),
                FULL.difference(ANCHORS).difference(r.chars),
            ]
        else:
            blocks = [r.chars, FULL.difference(r.chars)]
        return tuple(b for b in blocks if not b.is_empty())
    if isinstance(r, (Star, Not)):
        return _dca(r.body)
    if isinstance(r, Bank):
        return _dca(r.body)
    if isinstance(r, Cat):
        if is_nullable(r.head):
            return _meet(_dca(r.head), _dca(r.tail))
        return _dca(r.head)
    if isinstance(r, (Alt, Inter)):
        acc = (FULL,)
        for t in r.terms:
            acc = _meet(acc, _dca(t))
        return acc
    raise TypeError(f"not a Regex: {r!r}")


def derivative_classes(r: Regex, alphabet: Alphabet = Alphabet()) -> SymbolPartition:
    """A partition refining the true derivative classes of ``r``.

    Equal derivatives are guaranteed within each block; distinct blocks
    may still share a derivative (the approximation may over-partition).
    """
    working = alphabet.working
    blocks = []
    for b in _dca(r):
        cut = b.intersect(working)
        if not cut.is_empty():
            blocks.append(cut)
    return SymbolPartition(tuple(blocks))
