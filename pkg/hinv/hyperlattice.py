"""The hypertuple lattice V(α).

A hypertuple for α = (α₁ > … > α_r) is an integer tuple u with

    u₁ ≥ u₂ ≥ … ≥ u_r ≥ 0
    α₁−u₁ ≥ α₂−u₂ ≥ … ≥ α_r−u_r ≥ 0

and V(α) is the set of them under the entrywise order. Meet and join are the
entrywise min and max. Hyperinvariant subspaces of a nilpotent matrix with
Segre characteristic α are in bijection with V(α), so everything here is
about tuples and never about matrices.

Hypertuples are plain ``tuple[int, ...]``. The α they belong to is passed in
per call, which lets tuples from different lattices of the same rank be
compared directly by the isomorphism code.

Covers are computed straight from the son characterisation: position i can
be decremented iff uᵢ > u_{i+1} (u_{r+1} = 0) and, for i > 1,
α_{i−1}−u_{i−1} > αᵢ−uᵢ. That is O(r) per node, against O(|V|²) for the
pairwise method, which survives only as a test oracle.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .config import get_settings
from .errors import BoundExceeded, InvalidTuple
from .segre import SegreChar

log = logging.getLogger(__name__)

Hypertuple = tuple[int, ...]


def format_tuple(u: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in u) + ")"


def _is_member(parts: Sequence[int], u: Sequence[int]) -> bool:
    prev_u = prev_s = None
    for a, x in zip(parts, u):
        s = a - x
        if x < 0 or s < 0:
            return False
        if prev_u is not None and (x > prev_u or s > prev_s):
            return False
        prev_u, prev_s = x, s
    return True


def _sons(parts: Sequence[int], u: Hypertuple) -> tuple[Hypertuple, ...]:
    r = len(u)
    found = []
    for i in range(r):
        below = u[i + 1] if i + 1 < r else 0
        if u[i] <= below:
            continue
        if i > 0 and parts[i - 1] - u[i - 1] <= parts[i] - u[i]:
            continue
        found.append(u[:i] + (u[i] - 1,) + u[i + 1 :])
    # Decrementing a later position gives a lexicographically larger tuple.
    return tuple(reversed(found))


def _fathers(parts: Sequence[int], u: Hypertuple) -> tuple[Hypertuple, ...]:
    found = []
    for i in range(len(u)):
        w = u[:i] + (u[i] + 1,) + u[i + 1 :]
        # A single-entry increment inside V(α) is always a cover: weights differ by one.
        if _is_member(parts, w):
            found.append(w)
    return tuple(found)


def _check_length(alpha: SegreChar, u: Hypertuple) -> None:
    if len(u) != alpha.r:
        raise InvalidTuple(
            f"{format_tuple(u)} has length {len(u)}, {alpha.label} needs {alpha.r}"
        )


def require_member(alpha: SegreChar, u: Sequence[int]) -> Hypertuple:
    u = tuple(u)
    if not contains(alpha, u):
        raise InvalidTuple(f"{format_tuple(u)} is not an element of {alpha.label}")
    return u


def contains(alpha: SegreChar, u: Sequence[int]) -> bool:
    u = tuple(u)
    _check_length(alpha, u)
    return _is_member(alpha.parts, u)


def _pair(u: Sequence[int], v: Sequence[int], alpha: SegreChar | None) -> tuple[Hypertuple, Hypertuple]:
    u, v = tuple(u), tuple(v)
    if len(u) != len(v):
        raise InvalidTuple(
            "Tuples belong to lattices of different rank",
            detail=f"{format_tuple(u)} vs {format_tuple(v)}",
        )
    if alpha is not None:
        require_member(alpha, u)
        require_member(alpha, v)
    return u, v


def meet(u: Sequence[int], v: Sequence[int], alpha: SegreChar | None = None) -> Hypertuple:
    """Entrywise minimum. With ``alpha`` given, both tuples must lie in V(α)."""
    u, v = _pair(u, v, alpha)
    return tuple(map(min, u, v))


def join(u: Sequence[int], v: Sequence[int], alpha: SegreChar | None = None) -> Hypertuple:
    """Entrywise maximum. With ``alpha`` given, both tuples must lie in V(α)."""
    u, v = _pair(u, v, alpha)
    return tuple(map(max, u, v))


def is_below(u: Sequence[int], v: Sequence[int]) -> bool:
    """The lattice order: u ⊂ v iff uᵢ ≤ vᵢ for every i."""
    return all(x <= y for x, y in zip(u, v, strict=True))


def weight(u: Iterable[int]) -> int:
    return sum(u)


def cardinality(alpha: SegreChar) -> int:
    """(α₁−α₂+1)(α₂−α₃+1)…(α_r+1)."""
    return math.prod(alpha.at(i) - alpha.at(i + 1) + 1 for i in range(1, alpha.r + 1))


def sons(alpha: SegreChar, u: Sequence[int]) -> tuple[Hypertuple, ...]:
    return _sons(alpha.parts, require_member(alpha, u))


def fathers(alpha: SegreChar, u: Sequence[int]) -> tuple[Hypertuple, ...]:
    return _fathers(alpha.parts, require_member(alpha, u))


def unique_son(alpha: SegreChar, u: Sequence[int]) -> Hypertuple | None:
    """The only son of u, or None when u has two or more.

    With k the last position of the leading run of equal entries and q the
    last non-zero position, u has a single son (position k decremented)
    exactly when α_k−u_k = … = α_q−u_q.
    """
    u = require_member(alpha, u)
    if not any(u):
        raise InvalidTuple("The zero tuple has no sons")
    k = 1
    while k < len(u) and u[k] == u[0]:
        k += 1
    q = max(i for i, x in enumerate(u, start=1) if x > 0)
    slack = {a - x for a, x in zip(alpha.parts[k - 1 : q], u[k - 1 : q])}
    if len(slack) != 1:
        return None
    return u[: k - 1] + (u[k - 1] - 1,) + u[k:]


def dual(alpha: SegreChar, u: Sequence[int]) -> Hypertuple:
    """u ↦ α − u, the order-reversing involution of V(α)."""
    u = require_member(alpha, u)
    return tuple(a - x for a, x in zip(alpha.parts, u))


def _generate(parts: Sequence[int]) -> Iterator[Hypertuple]:
    r = len(parts)

    def extend(prefix: Hypertuple, prev_u: int, prev_s: int) -> Iterator[Hypertuple]:
        i = len(prefix)
        if i == r:
            yield prefix
            return
        a = parts[i]
        # uᵢ ≤ u_{i−1} and αᵢ−uᵢ ≤ α_{i−1}−u_{i−1}; the range is never empty.
        for x in range(min(prev_u, a), max(0, a - prev_s) - 1, -1):
            yield from extend(prefix + (x,), x, a - x)

    yield from extend((), parts[0], parts[0])


@dataclass(frozen=True, eq=False)
class Hyperlattice:
    """A materialized V(α): every node, in lexicographic descending order, with its sons.

    ``nodes[0]`` is the top (α itself) and ``nodes[-1]`` the zero tuple.
    """

    alpha: SegreChar
    nodes: tuple[Hypertuple, ...]
    covers: Mapping[Hypertuple, tuple[Hypertuple, ...]]

    @cached_property
    def index(self) -> dict[Hypertuple, int]:
        return {u: i for i, u in enumerate(self.nodes)}

    @cached_property
    def _fathers(self) -> dict[Hypertuple, tuple[Hypertuple, ...]]:
        up: dict[Hypertuple, list[Hypertuple]] = {u: [] for u in self.nodes}
        for u in self.nodes:
            for v in self.covers[u]:
                up[v].append(u)
        return {u: tuple(fs) for u, fs in up.items()}

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def top(self) -> Hypertuple:
        return self.nodes[0]

    @property
    def bottom(self) -> Hypertuple:
        return self.nodes[-1]

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Hypertuple]:
        return iter(self.nodes)

    def __contains__(self, u: object) -> bool:
        return isinstance(u, Sequence) and tuple(u) in self.index

    def require(self, u: Sequence[int]) -> Hypertuple:
        u = tuple(u)
        if u not in self.index:
            raise InvalidTuple(f"{format_tuple(u)} is not an element of {self.alpha.label}")
        return u

    def sons(self, u: Sequence[int]) -> tuple[Hypertuple, ...]:
        return self.covers[self.require(u)]

    def fathers(self, u: Sequence[int]) -> tuple[Hypertuple, ...]:
        return self._fathers[self.require(u)]

    def meet(self, u: Sequence[int], v: Sequence[int]) -> Hypertuple:
        return meet(self.require(u), self.require(v))

    def join(self, u: Sequence[int], v: Sequence[int]) -> Hypertuple:
        return join(self.require(u), self.require(v))

    def levels(self) -> dict[int, tuple[Hypertuple, ...]]:
        """Nodes grouped by weight, each group in node order."""
        grouped: dict[int, list[Hypertuple]] = {}
        for u in self.nodes:
            grouped.setdefault(weight(u), []).append(u)
        return {w: tuple(grouped[w]) for w in sorted(grouped)}

    def edges(self) -> list[tuple[int, int]]:
        """Covers as sorted ``(father_index, son_index)`` pairs."""
        index = self.index
        return sorted((index[u], index[v]) for u in self.nodes for v in self.covers[u])

    def to_graph(self) -> nx.DiGraph:
        """The Hasse diagram, edges pointing father → son, keyed by node index."""
        graph = nx.DiGraph(name=self.alpha.label)
        for i, u in enumerate(self.nodes):
            graph.add_node(i, label=format_tuple(u), rank=weight(u), tuple=u)
        graph.add_edges_from(self.edges())
        return graph


def enumerate_lattice(alpha: SegreChar, max_nodes: int | None = None) -> Hyperlattice:
    """Materialize V(α). The closed-form size is checked against the bound first."""
    bound = get_settings().max_nodes if max_nodes is None else max_nodes
    size = cardinality(alpha)
    if size > bound:
        raise BoundExceeded(f"{alpha.label} is too large to enumerate", size=size, bound=bound)
    nodes = tuple(_generate(alpha.parts))
    covers = {u: _sons(alpha.parts, u) for u in nodes}
    log.debug("Enumerated %s: %d nodes", alpha.label, len(nodes))
    return Hyperlattice(alpha, nodes, covers)


def render_dot(graph: nx.DiGraph) -> str:
    """DOT text for a Hasse diagram built by ``to_graph``.

    Nodes of equal rank share a row, highest rank first.
    """
    lines = ["digraph hasse {", f'  label="{graph.graph.get("name", "")}";', "  node [shape=plaintext];"]
    for node in sorted(graph.nodes):
        lines.append(f'  n{node} [label="{graph.nodes[node]["label"]}"];')
    ranks: dict[int, list[int]] = {}
    for node in sorted(graph.nodes):
        ranks.setdefault(graph.nodes[node]["rank"], []).append(node)
    for rank in sorted(ranks, reverse=True):
        members = " ".join(f"n{node};" for node in ranks[rank])
        lines.append(f"  {{ rank=same; {members} }}")
    for a, b in sorted(graph.edges):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_dot(lattice: Hyperlattice) -> str:
    return render_dot(lattice.to_graph())
