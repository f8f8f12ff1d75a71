"""The congruences ∼₂ and ∼₃ and their factor lattices.

u ∼₂ v when u and v agree from position 2 on, u ∼₃ v when they agree from
position 3 on. ∼₂ is used when α₁−α₂ > 1, ∼₃ when α₁−α₂ = 1 and r ≥ 3.
Either way the factor lattice is a copy of V(α) with the leading one or two
entries of α dropped, which is what lets isomorphism questions be pushed
down to lattices of smaller rank.

Each class is a chain. Its representative is its smallest element, e.g.
(u₂, u₂, u₃, …, u_r) under ∼₂, and joins and meets of classes are taken on
representatives.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import networkx as nx

from .errors import CongruenceUndefined, ConsistencyError
from .hyperlattice import (
    Hyperlattice,
    Hypertuple,
    enumerate_lattice,
    format_tuple,
    join,
    meet,
    require_member,
    weight,
)
from .models import QuotientCheck
from .segre import SegreChar

log = logging.getLogger(__name__)


class CongruenceKind(str, Enum):
    SIM2 = "sim2"
    SIM3 = "sim3"

    @property
    def skip(self) -> int:
        """Number of leading entries ignored when comparing tuples."""
        return 1 if self is CongruenceKind.SIM2 else 2


@dataclass(frozen=True)
class Congruence:
    kind: CongruenceKind
    alpha: SegreChar

    def __post_init__(self) -> None:
        gap = self.alpha.at(1) - self.alpha.at(2)
        if self.kind is CongruenceKind.SIM2 and not (self.alpha.r >= 2 and gap > 1):
            raise CongruenceUndefined(
                f"sim2 needs r >= 2 and α1-α2 > 1, {self.alpha.label} has r={self.alpha.r}, α1-α2={gap}"
            )
        if self.kind is CongruenceKind.SIM3 and not (self.alpha.r >= 3 and gap == 1):
            raise CongruenceUndefined(
                f"sim3 needs r >= 3 and α1-α2 = 1, {self.alpha.label} has r={self.alpha.r}, α1-α2={gap}"
            )

    @classmethod
    def for_alpha(cls, alpha: SegreChar) -> Congruence:
        """Whichever of ∼₂ and ∼₃ applies to α."""
        if alpha.r >= 2 and alpha.at(1) - alpha.at(2) > 1:
            return cls(CongruenceKind.SIM2, alpha)
        if alpha.r >= 3:
            return cls(CongruenceKind.SIM3, alpha)
        raise CongruenceUndefined(f"Neither sim2 nor sim3 is defined on {alpha.label}")

    def tail(self, u: Sequence[int]) -> Hypertuple:
        return tuple(u[self.kind.skip :])

    @property
    def tail_alpha(self) -> SegreChar:
        return SegreChar(self.alpha.parts[self.kind.skip :])


def congruent(congruence: Congruence, u: Sequence[int], v: Sequence[int]) -> bool:
    u = require_member(congruence.alpha, u)
    v = require_member(congruence.alpha, v)
    return congruence.tail(u) == congruence.tail(v)


@dataclass(frozen=True, eq=False)
class FactorLattice:
    """V(α)/∼ with classes ordered like the nodes of V(tail α)."""

    congruence: Congruence
    lattice: Hyperlattice
    # Each class in increasing order, so the representative comes first.
    classes: tuple[tuple[Hypertuple, ...], ...]
    # (upper_class, lower_class), sorted.
    covers: tuple[tuple[int, int], ...]

    @cached_property
    def _class_index(self) -> dict[Hypertuple, int]:
        return {u: i for i, members in enumerate(self.classes) for u in members}

    def __len__(self) -> int:
        return len(self.classes)

    def representative(self, i: int) -> Hypertuple:
        return self.classes[i][0]

    def class_of(self, u: Sequence[int]) -> int:
        return self._class_index[self.lattice.require(u)]

    def join(self, i: int, j: int) -> int:
        return self.class_of(join(self.representative(i), self.representative(j)))

    def meet(self, i: int, j: int) -> int:
        return self.class_of(meet(self.representative(i), self.representative(j)))

    def below(self, i: int, j: int) -> bool:
        """[i] ≤ [j] in the factor lattice."""
        return self.join(i, j) == j

    def to_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph(name=f"{self.lattice.alpha.label}/{self.congruence.kind.value}")
        for i in range(len(self.classes)):
            rep = self.representative(i)
            graph.add_node(
                i,
                label=f"[{format_tuple(rep)}]",
                rank=weight(self.congruence.tail(rep)),
                tuple=rep,
            )
        graph.add_edges_from(self.covers)
        return graph


def factor(lattice: Hyperlattice, congruence: Congruence) -> FactorLattice:
    if congruence.alpha != lattice.alpha:
        raise CongruenceUndefined(
            f"Congruence on {congruence.alpha.label} applied to {lattice.alpha.label}"
        )
    groups: dict[Hypertuple, list[Hypertuple]] = {}
    for u in lattice.nodes:
        groups.setdefault(congruence.tail(u), []).append(u)
    classes = tuple(tuple(sorted(groups[t])) for t in sorted(groups, reverse=True))

    partial = FactorLattice(congruence, lattice, classes, ())
    order = nx.DiGraph()
    order.add_nodes_from(range(len(classes)))
    order.add_edges_from(
        (j, i)
        for i in range(len(classes))
        for j in range(len(classes))
        if i != j and partial.below(i, j)
    )
    covers = tuple(sorted(nx.transitive_reduction(order).edges))
    log.debug("%s/%s: %d classes", lattice.alpha.label, congruence.kind.value, len(classes))
    return FactorLattice(congruence, lattice, classes, covers)


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """A verified isomorphism [u] ↦ tail(u) from V(α)/∼ onto V(tail α)."""

    factor: FactorLattice
    target: Hyperlattice
    mapping: dict[int, Hypertuple]

    def pairs(self) -> list[tuple[Hypertuple, Hypertuple]]:
        return [(self.factor.representative(i), self.mapping[i]) for i in sorted(self.mapping)]


def quotient_iso(lattice: Hyperlattice, congruence: Congruence) -> QuotientMap:
    """Build the class-to-tail map and check it is a lattice isomorphism, exhaustively."""
    fl = factor(lattice, congruence)
    target = enumerate_lattice(congruence.tail_alpha)
    mapping = {i: congruence.tail(fl.representative(i)) for i in range(len(fl))}

    images = set(mapping.values())
    if len(images) != len(mapping) or images != set(target.nodes):
        raise ConsistencyError(
            f"{lattice.alpha.label}/{congruence.kind.value} does not map onto {target.alpha.label}",
            detail=f"{len(fl)} classes, {target.node_count} target nodes",
        )
    for i in range(len(fl)):
        for j in range(i, len(fl)):
            if mapping[fl.join(i, j)] != target.join(mapping[i], mapping[j]):
                raise ConsistencyError(
                    "Class map does not preserve joins",
                    detail=f"[{format_tuple(fl.representative(i))}] v [{format_tuple(fl.representative(j))}]",
                )
            if mapping[fl.meet(i, j)] != target.meet(mapping[i], mapping[j]):
                raise ConsistencyError(
                    "Class map does not preserve meets",
                    detail=f"[{format_tuple(fl.representative(i))}] ^ [{format_tuple(fl.representative(j))}]",
                )
    return QuotientMap(fl, target, mapping)


def expected_class_size(congruence: Congruence) -> int:
    alpha = congruence.alpha
    if congruence.kind is CongruenceKind.SIM2:
        return alpha.at(1) - alpha.at(2) + 1
    return 2 * (alpha.at(1) - alpha.at(3))


def expected_class_count(congruence: Congruence) -> int:
    alpha = congruence.alpha
    start = congruence.kind.skip + 1
    return math.prod(alpha.at(i) - alpha.at(i + 1) + 1 for i in range(start, alpha.r + 1))


def check_formulas(fl: FactorLattice, *, iso_verified: bool = True) -> QuotientCheck:
    """Compare enumerated class sizes and count with the closed forms; enumeration wins."""
    congruence = fl.congruence
    sizes = sorted({len(members) for members in fl.classes})
    want_size = expected_class_size(congruence)
    want_count = expected_class_count(congruence)
    discrepancy = sizes != [want_size] or len(fl) != want_count
    if discrepancy:
        log.warning(
            "%s/%s: enumerated %d classes of size %s, formulas give %d of size %d",
            congruence.alpha.label, congruence.kind.value, len(fl), sizes, want_count, want_size,
        )
    return QuotientCheck(
        alpha=list(congruence.alpha.parts),
        kind=congruence.kind.value,
        class_count=len(fl),
        expected_class_count=want_count,
        class_sizes=sizes,
        expected_class_size=want_size,
        iso_verified=iso_verified,
        discrepancy=discrepancy,
    )
