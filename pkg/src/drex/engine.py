"""Lazy matching: derivatives computed on the fly per input symbol.

``match_lazy`` is the plain recognizer (derive, then test nullability).
``match_full`` adds anchors and submatch memory: it injects anchor
symbols, steps through derivative + tag evaluation + disambiguation per
symbol, collects a candidate whenever the current expression is
nullable, and finally picks a winner per the disambiguation policy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .anchors import ANCHOR_RUN, inject_anchors
from .semantics import derive, nu_ways
from .submatch import (
    POLICY_POSIX,
    Cells,
    HIGHER,
    InitBank,
    Store,
    apply_ops,
    apply_writes,
    bank_compare,
    extract_submatches,
    normalize_step,
)
from .syntax import (
    EMPTY,
    Bank,
    BankAlloc,
    Regex,
    TagTable,
    cat,
    is_nullable,
)

Span = tuple[int, int]


@dataclass(frozen=True)
class MatchResult:
    """Match verdict plus resolved submatch spans.

    ``groups[0]`` is the whole match; further entries follow the user
    group numbering.  ``consumed`` counts stream symbols (anchors
    included) up to the match end.
    """

    matched: bool
    bank: Optional[Cells] = None
    groups: tuple[Optional[Span], ...] = ()
    consumed: int = 0

    def to_dict(self) -> dict:
        return {
            "matched": self.matched,
            "groups": [
                None if g is None else {"start": g[0], "end": g[1]}
                for g in self.groups
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def match_lazy(r: Regex, s) -> bool:
    """Whole-string recognition by iterated derivatives (no anchors)."""
    pos = 0
    for c in s:
        cp = ord(c) if isinstance(c, str) else c
        r = derive(r, cp, pos)
        pos += 1
        if r == EMPTY:
            return False
    return is_nullable(r)


def _pad(r: Regex) -> Regex:
    # The trailing anchor run of the stream belongs to no atom of the
    # pattern; absorb it explicitly.  Leading anchors are skipped by the
    # pattern's own transparent atoms (or this same pad when the pattern
    # consumes nothing).
    return cat(r, ANCHOR_RUN)


@dataclass
class _Candidate:
    pos: int
    cells: Optional[Cells]


def _pick_way(ways, store: Store, tags: TagTable) -> Optional[Cells]:
    best: Optional[Cells] = None
    for owner, writes in ways:
        if owner is None:
            continue
        cells = apply_writes(store[owner], writes)
        if best is None or bank_compare(cells, best, tags) == HIGHER:
            best = cells
    return best


def match_full(
    r: Regex,
    tags: TagTable,
    s: str,
    policy: str = POLICY_POSIX,
    stream_offsets: bool = False,
) -> MatchResult:
    """Anchored-prefix matching with submatch extraction.

    The match always starts at the beginning of the text; candidates at
    every nullable point are ranked by the policy (longest for posix,
    bank priority otherwise).  Offsets are reported in text coordinates
    unless ``stream_offsets`` is set.
    """
    stream = inject_anchors(s)
    n_slots = tags.num_tags
    tagged = n_slots > 0
    expr: Regex = _pad(r)
    store: Store = {}
    if tagged:
        expr = Bank(1, (), expr)
        apply_ops(store, [InitBank(1)], n_slots)

    def step_normalize(e: Regex, pos: int, alloc: BankAlloc) -> Regex:
        e, _ = normalize_step(e, tags, store, pos, alloc)
        return e

    best: Optional[_Candidate] = None

    def consider(e: Regex, pos: int) -> None:
        nonlocal best
        ways = nu_ways(e, pos)
        if not ways:
            return
        cells = _pick_way(ways, store, tags) if tagged else None
        if tagged and cells is None:
            return
        if best is None:
            best = _Candidate(pos, cells)
        elif policy == POLICY_POSIX:
            best = _Candidate(pos, cells)  # longer prefix always wins
        elif tagged and bank_compare(cells, best.cells, tags) == HIGHER:
            best = _Candidate(pos, cells)

    pos = 0
    alloc = BankAlloc.after(expr)
    if tagged:
        expr = step_normalize(expr, 0, alloc)
    consider(expr, 0)
    for cp in stream.symbols:
        alloc = BankAlloc.after(expr)
        expr = derive(expr, cp, pos, alloc)
        pos += 1
        if expr == EMPTY:
            break
        if tagged:
            expr = step_normalize(expr, pos, alloc)
        consider(expr, pos)

    if best is None:
        return MatchResult(False)
    origin = None if stream_offsets else stream.boundary_origin
    end = best.pos if stream_offsets else stream.boundary_origin[best.pos]
    groups: list[Optional[Span]] = [(0, end)]
    if tagged:
        groups.extend(extract_submatches(best.cells, tags, origin))
    return MatchResult(True, best.cells, tuple(groups), best.pos)
