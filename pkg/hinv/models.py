"""Output models.

Every model carries an ``as_text()`` rendering for ``--format text``; the
JSON form is plain ``model_dump_json()``. Hypertuples are lists of integers
in JSON and "(a,b,c)" in text, the notation used throughout the literature
on these lattices, so text output can be compared to worked examples by eye.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from pydantic import BaseModel, Field

from .hyperlattice import format_tuple

if TYPE_CHECKING:
    from .chains import RidingChain, SpecialChain
    from .hyperlattice import Hyperlattice
    from .quotient import FactorLattice


class LatticeBody(BaseModel):
    alpha: list[int]
    nodes: list[list[int]] = Field(description="Every hypertuple, lexicographic descending")
    covers: list[tuple[int, int]] = Field(description="Sorted [father_index, son_index] pairs")

    @classmethod
    def from_lattice(cls, lattice: Hyperlattice) -> LatticeBody:
        return cls(
            alpha=list(lattice.alpha.parts),
            nodes=[list(u) for u in lattice.nodes],
            covers=lattice.edges(),
        )

    def as_text(self) -> str:
        sons: dict[int, list[int]] = {i: [] for i in range(len(self.nodes))}
        for father, son in self.covers:
            sons[father].append(son)
        label = ",".join(map(str, self.alpha))
        lines = [f"V({label}): {len(self.nodes)} nodes, {len(self.covers)} covers"]
        for i, u in enumerate(self.nodes):
            below = ", ".join(format_tuple(self.nodes[j]) for j in sons[i]) or "-"
            lines.append(f"{format_tuple(u)}  sons: {below}")
        return "\n".join(lines)


class FactorBody(BaseModel):
    alpha: list[int]
    kind: str
    classes: list[list[int]] = Field(description="Node indices of each class, representative first")
    covers: list[tuple[int, int]] = Field(description="Sorted [upper_class, lower_class] pairs")
    nodes: list[list[int]] = Field(exclude=True, default_factory=list)

    @classmethod
    def from_factor(cls, factor: FactorLattice) -> FactorBody:
        index = factor.lattice.index
        return cls(
            alpha=list(factor.lattice.alpha.parts),
            kind=factor.congruence.kind.value,
            classes=[[index[u] for u in members] for members in factor.classes],
            covers=list(factor.covers),
            nodes=[list(u) for u in factor.lattice.nodes],
        )

    def as_text(self) -> str:
        label = ",".join(map(str, self.alpha))
        lines = [f"V({label})/{self.kind}: {len(self.classes)} classes"]
        for members in self.classes:
            rep = format_tuple(self.nodes[members[0]]) if self.nodes else str(members[0])
            body = ", ".join(format_tuple(self.nodes[i]) for i in members) if self.nodes else str(members)
            lines.append(f"[{rep}] = {{{body}}}")
        return "\n".join(lines)


class NeighboursBody(BaseModel):
    alpha: list[int]
    node: list[int]
    weight: int
    sons: list[list[int]]
    fathers: list[list[int]]
    unique_son: list[int] | None = None
    dual: list[int]

    def as_text(self) -> str:
        def many(items: list[list[int]]) -> str:
            return ", ".join(format_tuple(u) for u in items) or "-"

        unique = format_tuple(self.unique_son) if self.unique_son is not None else "-"
        return "\n".join([
            f"tuple:      {format_tuple(self.node)} (weight {self.weight})",
            f"sons:       {many(self.sons)}",
            f"fathers:    {many(self.fathers)}",
            f"unique son: {unique}",
            f"dual:       {format_tuple(self.dual)}",
        ])


class ChainBody(BaseModel):
    kind: str
    attached_to: str | None = None
    length: int
    tuples: list[list[int]]

    @classmethod
    def from_special(cls, special: SpecialChain) -> ChainBody:
        return cls(
            kind=special.kind.value,
            length=special.chain.length,
            tuples=[list(u) for u in special.chain],
        )

    @classmethod
    def from_riding(cls, riding: RidingChain) -> ChainBody:
        return cls(
            kind=riding.kind.value,
            attached_to=riding.attached_to.value,
            length=riding.chain.length,
            tuples=[list(u) for u in riding.chain],
        )

    def as_text(self) -> str:
        on = f" on {self.attached_to}" if self.attached_to else ""
        chain = " - ".join(format_tuple(u) for u in self.tuples)
        return f"{self.kind}{on} (length {self.length}): {chain}"


class ChainList(BaseModel):
    alpha: list[int]
    chains: list[ChainBody]

    def as_text(self) -> str:
        if not self.chains:
            return f"No chains in V({','.join(map(str, self.alpha))})"
        return "\n".join(c.as_text() for c in self.chains)


class VerdictBody(BaseModel):
    alpha: list[int]
    beta: list[int]
    isomorphic: bool
    rule: str = Field(description="EQUAL, PAIR_52_421, PAIR_CHAIN or NOT_ISOMORPHIC")
    chain_l: int | None = Field(default=None, description="l for the (l,l-1) ~ (2l-1) family")
    dim_ok: bool
    card_ok: bool

    def as_text(self) -> str:
        word = "isomorphic" if self.isomorphic else "not isomorphic"
        return f"{word} (rule: {self.rule})"


class WitnessBody(BaseModel):
    alpha: list[int]
    beta: list[int]
    pairs: list[tuple[list[int], list[int]]] | None = Field(
        default=None, description="[source, image] pairs in source node order; null if none"
    )

    def as_text(self) -> str:
        if self.pairs is None:
            return "no isomorphism"
        return "\n".join(f"{format_tuple(u)} -> {format_tuple(v)}" for u, v in self.pairs)


class PairRecord(BaseModel):
    alpha: list[int]
    beta: list[int]
    theorem_verdict: bool
    rule: str
    oracle_verdict: bool | None = Field(default=None, description="None when the pair was skipped")
    agree: bool | None = None
    witness_found: bool = False
    elapsed_ms: float
    skipped: bool = False
    weight_preserved: bool | None = None
    sons_preserved: bool | None = None
    special_chains_preserved: bool | None = None
    meet_join_preserved: bool | None = None
    automorphisms: int | None = Field(
        default=None, description="Automorphism count (capped) when alpha == beta"
    )
    automorphism_classes: int | None = Field(
        default=None, description="Automorphisms grouped by where they send the special chains"
    )

    @property
    def witness_ok(self) -> bool:
        checks = (
            self.weight_preserved,
            self.sons_preserved,
            self.special_chains_preserved,
            self.meet_join_preserved,
        )
        return all(c is not False for c in checks)


class QuotientCheck(BaseModel):
    alpha: list[int]
    kind: str
    class_count: int
    expected_class_count: int
    class_sizes: list[int] = Field(description="Distinct class sizes found by enumeration")
    expected_class_size: int
    iso_verified: bool
    discrepancy: bool

    def as_text(self) -> str:
        label = ",".join(map(str, self.alpha))
        sizes = "/".join(map(str, self.class_sizes))
        flag = "  DISCREPANCY" if self.discrepancy else ""
        iso = "iso ok" if self.iso_verified else "ISO FAILED"
        return (
            f"V({label})/{self.kind}: {self.class_count} classes "
            f"(formula {self.expected_class_count}), size {sizes} "
            f"(formula {self.expected_class_size}), {iso}{flag}"
        )


class RidingCheck(BaseModel):
    alpha: list[int]
    listed: list[ChainBody]
    searched: list[ChainBody] = Field(description="Longest chains a search from the definition finds")
    notes: list[str] = Field(default_factory=list)
    discrepancy: bool

    def as_text(self) -> str:
        label = ",".join(map(str, self.alpha))
        if not self.discrepancy:
            return f"V({label}): riding chains as listed"
        return f"V({label}): riding chains DISCREPANCY: " + "; ".join(self.notes)


class VerificationReport(BaseModel):
    n_max: int
    records: list[PairRecord]
    quotient_checks: list[QuotientCheck] = Field(default_factory=list)
    riding_checks: list[RidingCheck] = Field(
        default_factory=list, description="Only the lattices where search and listed chains differ"
    )
    disagreements: list[tuple[list[int], list[int]]] = Field(default_factory=list)
    skipped: list[tuple[list[int], list[int]]] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.disagreements
            and all(r.witness_ok for r in self.records)
            and all(q.iso_verified for q in self.quotient_checks)
        )

    def as_text(self) -> str:
        def fmt(parts: list[int]) -> str:
            return ",".join(map(str, parts))

        iso = [r for r in self.records if r.oracle_verdict and r.alpha != r.beta]
        lines = [
            f"Verified {len(self.records)} pairs up to dimension {self.n_max}: "
            f"{len(self.disagreements)} disagreements, {len(self.skipped)} skipped",
            "",
            f"{'alpha':<14}{'beta':<14}{'theorem':<10}{'oracle':<10}{'ms':>10}",
        ]
        for r in iso:
            oracle = "-" if r.oracle_verdict is None else str(r.oracle_verdict).lower()
            lines.append(
                f"{fmt(r.alpha):<14}{fmt(r.beta):<14}{str(r.theorem_verdict).lower():<10}"
                f"{oracle:<10}{r.elapsed_ms:>10.1f}"
            )
        for a, b in self.disagreements:
            lines.append(f"DISAGREEMENT: {fmt(a)} vs {fmt(b)}")
        for a, b in self.skipped:
            lines.append(f"skipped: {fmt(a)} vs {fmt(b)}")
        nontrivial = [r for r in self.records if r.alpha == r.beta and (r.automorphisms or 0) > 1]
        if nontrivial:
            lines.append("")
            lines.append("Lattices with non-trivial automorphisms:")
            lines.extend(
                f"  V({fmt(r.alpha)}): {r.automorphisms}, {r.automorphism_classes} classes on the special chains"
                for r in nontrivial
            )
        if self.quotient_checks:
            lines.append("")
            lines.extend(q.as_text() for q in self.quotient_checks)
        if self.riding_checks:
            lines.append("")
            lines.extend(c.as_text() for c in self.riding_checks)
        return "\n".join(lines)
