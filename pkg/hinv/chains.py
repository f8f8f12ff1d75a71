"""Special chains and the chains that ride on them.

A special chain is a maximal chain ending at the zero tuple in which every
element but the last has exactly one son. V(α) has one or two of them, of
three possible shapes:

    C1  (1,…,1), (1,…,1,0), …, (1,0,…,0), 0                length r+1
    C2  (α₁−α₂,0,…,0), …, (1,0,…,0), 0                     length α₁−α₂+1
    C3  (α₁−α₃, α₂−α₃, 0,…), (α₂−α₃, α₂−α₃, 0,…), …, 0     length 2(α₁−α₃)

with α₃ = 0 when r = 2. Which ones exist depends only on r and α₁−α₂.

A riding chain on a special chain C is a chain beside C whose elements
hang off it: a run of single-son elements, then elements with exactly two
sons (the next element and one element of C), the last element's only son
being on C. Lengths of special and riding chains are invariant under
isomorphism, which is what makes them useful for telling lattices apart.

Special chains are detected from the definition and the closed forms above
only name what was found. Riding chains go the other way: the chains listed
case by case on r, α₁−α₂, α₂−α₃ and α₃ are authoritative and are checked
against the lattice. ``check_riding_chains`` reports where a search from the
definition alone would pick something else.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from enum import Enum

from .errors import ConsistencyError, InvalidTuple
from .hyperlattice import Hyperlattice, Hypertuple, format_tuple
from .models import ChainBody, RidingCheck
from .segre import SegreChar

log = logging.getLogger(__name__)


class ChainKind(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"


class RidingKind(str, Enum):
    RC1 = "RC1"
    RC2 = "RC2"
    RC3 = "RC3"


RIDES_ON = {ChainKind.C1: RidingKind.RC1, ChainKind.C2: RidingKind.RC2, ChainKind.C3: RidingKind.RC3}


@dataclass(frozen=True)
class Chain:
    """Tuples w₁, …, w_t, each meant to be a son of the one before."""

    tuples: tuple[Hypertuple, ...]

    @classmethod
    def of(cls, tuples: Sequence[Sequence[int]]) -> Chain:
        return cls(tuple(tuple(u) for u in tuples))

    @property
    def length(self) -> int:
        return len(self.tuples)

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[Hypertuple]:
        return iter(self.tuples)

    def __str__(self) -> str:
        return " - ".join(format_tuple(u) for u in self.tuples)


@dataclass(frozen=True)
class SpecialChain:
    kind: ChainKind
    chain: Chain

    def __str__(self) -> str:
        return f"{self.kind.value} (length {self.chain.length}): {self.chain}"


@dataclass(frozen=True)
class RidingChain:
    kind: RidingKind
    chain: Chain
    attached_to: ChainKind

    def __str__(self) -> str:
        return f"{self.kind.value} on {self.attached_to.value} (length {self.chain.length}): {self.chain}"


def _closed_form(alpha: SegreChar, kind: ChainKind) -> Chain:
    def rest(width: int) -> tuple[int, ...]:
        return (0,) * (alpha.r - width)

    if kind is ChainKind.C1:
        return Chain(tuple((1,) * k + rest(k) for k in range(alpha.r, -1, -1)))
    if kind is ChainKind.C2:
        gap = alpha.at(1) - alpha.at(2)
        return Chain(tuple((m,) + rest(1) for m in range(gap, -1, -1)))
    d = alpha.at(2) - alpha.at(3)
    return Chain(tuple(((w + 1) // 2, w // 2) + rest(2) for w in range(2 * d + 1, -1, -1)))


def expected_special_chains(alpha: SegreChar) -> tuple[SpecialChain, ...]:
    """The special chains V(α) has, from the closed forms and the r / α₁−α₂ case split."""
    if alpha.r == 1:
        kinds = [ChainKind.C2]
    elif alpha.at(1) - alpha.at(2) == 1:
        kinds = [ChainKind.C3] if alpha.r == 2 else [ChainKind.C1, ChainKind.C3]
    else:
        kinds = [ChainKind.C1, ChainKind.C2]
    return tuple(SpecialChain(kind, _closed_form(alpha, kind)) for kind in kinds)


def expected_length(alpha: SegreChar, kind: ChainKind) -> int:
    if kind is ChainKind.C1:
        return alpha.r + 1
    if kind is ChainKind.C2:
        return alpha.at(1) - alpha.at(2) + 1
    return 2 * (alpha.at(1) - alpha.at(3))


def _classify(lattice: Hyperlattice, found: list[tuple[Hypertuple, ...]]) -> tuple[SpecialChain, ...]:
    expected = {sc.chain.tuples: sc for sc in expected_special_chains(lattice.alpha)}
    unknown = [c for c in found if c not in expected]
    if unknown or len(set(found)) != len(expected):
        raise ConsistencyError(
            f"Special chains of {lattice.alpha.label} do not match their closed forms",
            detail="; ".join(str(Chain(c)) for c in unknown) or f"found {len(found)}",
        )
    return tuple(sorted((expected[c] for c in set(found)), key=lambda sc: sc.kind.value))


def special_chains(lattice: Hyperlattice) -> tuple[SpecialChain, ...]:
    """Grow the tree of single-son fathers up from zero; each leaf tops one special chain."""
    found = []
    stack = [(lattice.bottom,)]
    while stack:
        path = stack.pop()
        head = path[-1]
        ups = [f for f in lattice.fathers(head) if lattice.sons(f) == (head,)]
        if not ups:
            found.append(tuple(reversed(path)))
        stack.extend(path + (f,) for f in ups)
    return _classify(lattice, found)


def special_chains_brute_force(lattice: Hyperlattice) -> tuple[SpecialChain, ...]:
    """Follow single sons down from every node, keep the maximal runs that reach zero."""
    found = []
    for u in lattice.nodes:
        path = [u]
        while len(lattice.sons(path[-1])) == 1:
            path.append(lattice.sons(path[-1])[0])
        if path[-1] == lattice.bottom:
            found.append(tuple(path))
    maximal = [
        p for p in found
        if not any(len(q) > len(p) and q[len(q) - len(p):] == p for q in found)
    ]
    return _classify(lattice, maximal)


def validate_chain(lattice: Hyperlattice, chain: Chain) -> bool:
    """True iff every tuple is a son of the one before it."""
    for u in chain.tuples:
        if u not in lattice:
            raise InvalidTuple(f"{format_tuple(u)} is not an element of {lattice.alpha.label}")
    return all(v in lattice.sons(u) for u, v in zip(chain.tuples, chain.tuples[1:]))


def _hangs_off(lattice: Hyperlattice, tuples: tuple[Hypertuple, ...], on: set[Hypertuple]) -> bool:
    """Single-son elements, then elements whose other son is on the special chain, then one son on it."""
    if len(tuples) < 2 or on & set(tuples) or any(u not in lattice for u in tuples):
        return False
    last = lattice.sons(tuples[-1])
    if len(last) != 1 or last[0] not in on:
        return False
    seen_double = False
    for w, nxt in zip(tuples, tuples[1:]):
        kids = lattice.sons(w)
        if kids == (nxt,) and not seen_double:
            continue
        if len(kids) == 2 and nxt in kids and sum(k in on for k in kids) == 1:
            seen_double = True
            continue
        return False
    return True


def _listed(alpha: SegreChar, kind: ChainKind) -> list[Chain]:
    r = alpha.r
    gap = alpha.at(1) - alpha.at(2)

    def pad(*head: int) -> Hypertuple:
        return head + (0,) * (r - len(head))

    if kind is ChainKind.C2:
        # (g+1,1,0…) down to (1,1,0…)
        chains = [Chain(tuple(pad(m, 1) for m in range(gap + 1, 0, -1)))]
        if r == 3 and gap == 2 and alpha.at(2) - alpha.at(3) > 1:
            chains.append(Chain.of([pad(2, 2), pad(2, 1), pad(1, 1)]))
        return chains
    if kind is ChainKind.C3:
        a = alpha.at(1) - alpha.at(3)
        return [Chain(tuple(pad((w + 1) // 2, w // 2, 1) for w in range(2 * a + 1, 1, -1)))]

    # C1: the run (2,1,…,1), (2,1,…,1,0), … with a few small-rank heads and tails.
    def run(ones_from: int, ones_to: int) -> list[Hypertuple]:
        return [pad(2, *(1,) * k) for k in range(ones_from, ones_to - 1, -1)]

    lowest = 0 if gap > 1 else 1
    if r == 2:
        if alpha.at(2) > 1:
            return [Chain.of([(2, 2), (2, 1), (2, 0)])]
        head = [(3, 1)] if alpha.at(1) == 3 else []
        return [Chain.of(head + run(1, 0))]
    if r == 3:
        d23, a3 = alpha.at(2) - alpha.at(3), alpha.at(3)
        if d23 > 1:
            head = []
        elif a3 >= 2:
            head = [(2, 2, 2), (2, 2, 1)]
        elif gap > 1:
            head = [(2, 2, 1)]
        else:
            head = [(3, 2, 1), (2, 2, 1)]
        return [Chain.of(head + run(2, lowest))]
    return [Chain.of(run(r - 1, lowest))]


def expected_riding_chains(alpha: SegreChar) -> tuple[RidingChain, ...]:
    """The riding chains as the closed forms list them, case by case on r, α₁−α₂, α₂−α₃ and α₃."""
    if alpha.r == 1:
        return ()
    result = []
    for sc in expected_special_chains(alpha):
        # V(l,l−1) is C3 and nothing else.
        if sc.kind is ChainKind.C3 and alpha.r == 2:
            continue
        result.extend(RidingChain(RIDES_ON[sc.kind], chain, sc.kind) for chain in _listed(alpha, sc.kind))
    return tuple(result)


def _search(lattice: Hyperlattice, special: SpecialChain) -> list[tuple[Hypertuple, ...]]:
    """Every chain that hangs off ``special``, grown upwards from its last element."""
    on = set(special.chain.tuples)

    def single(w: Hypertuple, nxt: Hypertuple) -> bool:
        return lattice.sons(w) == (nxt,)

    def double(w: Hypertuple, nxt: Hypertuple) -> bool:
        kids = lattice.sons(w)
        return len(kids) == 2 and nxt in kids and sum(k in on for k in kids) == 1

    found = []
    for last in lattice.nodes:
        kids = lattice.sons(last)
        if last in on or len(kids) != 1 or kids[0] not in on:
            continue
        # (chain top-down, still in the two-son part)
        stack: list[tuple[tuple[Hypertuple, ...], bool]] = [((last,), True)]
        while stack:
            path, in_double = stack.pop()
            if len(path) > 1:
                found.append(path)
            head = path[0]
            for f in lattice.fathers(head):
                if f in on:
                    continue
                if in_double and double(f, head):
                    stack.append(((f,) + path, True))
                elif len(path) > 1 and single(f, head):
                    stack.append(((f,) + path, False))
    return found


def riding_chains_by_definition(lattice: Hyperlattice) -> tuple[RidingChain, ...]:
    """The longest chains hanging off each special chain, found by search alone."""
    if lattice.alpha.r == 1:
        return ()
    result = []
    for special in special_chains(lattice):
        found = _search(lattice, special)
        if not found:
            continue
        longest = max(map(len, found))
        for tuples in sorted({t for t in found if len(t) == longest}, reverse=True):
            result.append(RidingChain(RIDES_ON[special.kind], Chain(tuples), special.kind))
    return tuple(result)


def riding_chains(lattice: Hyperlattice) -> tuple[RidingChain, ...]:
    """The listed riding chains of V(α), each checked to hang off its special chain in ``lattice``."""
    specials = {sc.kind: set(sc.chain.tuples) for sc in special_chains(lattice)}
    result = expected_riding_chains(lattice.alpha)
    for rc in result:
        if not _hangs_off(lattice, rc.chain.tuples, specials[rc.attached_to]):
            raise ConsistencyError(
                f"{rc.kind.value} of {lattice.alpha.label} does not ride on {rc.attached_to.value}",
                detail=str(rc.chain),
            )
    log.debug("%s: %d riding chains", lattice.alpha.label, len(result))
    return result


def check_riding_chains(lattice: Hyperlattice) -> RidingCheck:
    """Compare the listed riding chains with what a search from the definition finds.

    The listed chains stay authoritative. A search turning up a longer chain,
    or a different set of longest chains, is logged and flagged.
    """
    listed = expected_riding_chains(lattice.alpha)
    specials = {sc.kind: set(sc.chain.tuples) for sc in special_chains(lattice)}
    searched = riding_chains_by_definition(lattice)
    notes = []
    for rc in listed:
        if not _hangs_off(lattice, rc.chain.tuples, specials[rc.attached_to]):
            notes.append(f"{rc.kind.value} {rc.chain} does not ride on {rc.attached_to.value}")
    for kind in RidingKind:
        mine = sorted(rc.chain.tuples for rc in listed if rc.kind is kind)
        theirs = sorted(rc.chain.tuples for rc in searched if rc.kind is kind)
        if mine == theirs:
            continue
        longest = max((len(t) for t in theirs), default=0)
        listed_len = max((len(t) for t in mine), default=0)
        notes.append(
            f"{kind.value}: listed {len(mine)} of length {listed_len}, "
            f"search finds {len(theirs)} of length {longest}"
        )
    if notes:
        log.warning("%s riding chains: %s", lattice.alpha.label, "; ".join(notes))
    return RidingCheck(
        alpha=list(lattice.alpha.parts),
        listed=[ChainBody.from_riding(rc) for rc in listed],
        searched=[ChainBody.from_riding(rc) for rc in searched],
        notes=notes,
        discrepancy=bool(notes),
    )
