"""Deciding when two hyperlattices are isomorphic, twice.

``decide_iso`` applies the classification: for reduced α ≠ β, V(α) ≅ V(β)
only for {(5,2), (4,2,1)} and {(l,l−1), (2l−1)} with l ≥ 2. ``brute_force_iso``
ignores all of that and searches for an order isomorphism between the two
Hasse diagrams. ``verify_range`` runs both over every pair of equal
dimension and reports any disagreement, which is the point of the package.

The oracle works on node indices:

1. Quick rejection on node count, weight-level sizes and the multiset of
   (level, number of fathers, number of sons).
2. Colour refinement run jointly on both diagrams: a node's colour is
   replaced by (colour, sorted son colours, sorted father colours) until the
   number of colours stops growing. Different colour histograms mean no
   isomorphism.
3. Backtracking from the top down, one weight level at a time, rarest
   colour first. A node's candidates are the like-coloured sons of its
   first father's image, and a choice stands only if the node's fathers map
   onto exactly the candidate's fathers. Each level is fully mapped before
   the next, so that check covers every edge.

For finite lattices an order isomorphism is a lattice isomorphism. Found
witnesses are still checked for meet/join preservation, on every pair up to
``exhaustive_check_nodes`` and on a fixed-seed sample above.
"""

from __future__ import annotations

import itertools
import logging
import random
import time
from collections import Counter
from collections.abc import Iterator, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import partial
from typing import NamedTuple

from .chains import ChainKind, check_riding_chains, special_chains
from .config import get_settings
from .errors import BoundExceeded, CongruenceUndefined, ConsistencyError
from .hyperlattice import (
    Hyperlattice,
    Hypertuple,
    cardinality,
    enumerate_lattice,
    join,
    meet,
    weight,
)
from .models import PairRecord, QuotientCheck, VerificationReport
from .quotient import Congruence, check_formulas, factor, quotient_iso
from .segre import SegreChar, enumerate_reduced, reduce

log = logging.getLogger(__name__)

Witness = dict[Hypertuple, Hypertuple]

_EXCEPTIONAL = frozenset({(5, 2), (4, 2, 1)})


class Rule(str, Enum):
    EQUAL = "EQUAL"
    PAIR_52_421 = "PAIR_52_421"
    PAIR_CHAIN = "PAIR_CHAIN"
    NOT_ISOMORPHIC = "NOT_ISOMORPHIC"


@dataclass(frozen=True)
class IsoVerdict:
    alpha: SegreChar
    beta: SegreChar
    isomorphic: bool
    rule: Rule
    # l of the (l,l−1) ~ (2l−1) pair.
    chain_l: int | None = None

    def as_text(self) -> str:
        word = "isomorphic" if self.isomorphic else "not isomorphic"
        return f"{word} (rule: {self.rule.value})"


class NecessaryConditions(NamedTuple):
    dim_ok: bool
    card_ok: bool


def _normalize(x: SegreChar | Sequence[int]) -> SegreChar:
    alpha = reduce(x)
    if alpha.was_reduced:
        log.warning(
            "Reduced %s to %s before classifying; the result is about the reduced lattice",
            ",".join(map(str, alpha.original)), alpha,
        )
    return alpha


def necessary_conditions(alpha: SegreChar, beta: SegreChar) -> NecessaryConditions:
    """Equal dimension and equal cardinality, both needed for V(α) ≅ V(β)."""
    return NecessaryConditions(
        dim_ok=alpha.n == beta.n,
        card_ok=cardinality(alpha) == cardinality(beta),
    )


def _chain_pair(a: SegreChar, b: SegreChar) -> int | None:
    for x, y in ((a, b), (b, a)):
        if x.r == 2 and x[0] - x[1] == 1 and y.r == 1 and y[0] == 2 * x[0] - 1:
            return x[0]
    return None


def decide_iso(alpha: SegreChar | Sequence[int], beta: SegreChar | Sequence[int]) -> IsoVerdict:
    a, b = _normalize(alpha), _normalize(beta)
    if a == b:
        return IsoVerdict(a, b, True, Rule.EQUAL)
    if {a.parts, b.parts} == _EXCEPTIONAL:
        return IsoVerdict(a, b, True, Rule.PAIR_52_421)
    if (chain_l := _chain_pair(a, b)) is not None:
        return IsoVerdict(a, b, True, Rule.PAIR_CHAIN, chain_l=chain_l)
    return IsoVerdict(a, b, False, Rule.NOT_ISOMORPHIC)


@dataclass(frozen=True)
class _Diagram:
    """A Hasse diagram by node index."""

    lattice: Hyperlattice
    weights: list[int]
    sons: list[list[int]]
    fathers: list[list[int]]

    @classmethod
    def of(cls, lattice: Hyperlattice) -> _Diagram:
        index = lattice.index
        return cls(
            lattice,
            [weight(u) for u in lattice.nodes],
            [[index[v] for v in lattice.sons(u)] for u in lattice.nodes],
            [[index[f] for f in lattice.fathers(u)] for u in lattice.nodes],
        )

    def profile(self) -> Counter:
        return Counter(
            (w, len(up), len(down)) for w, up, down in zip(self.weights, self.fathers, self.sons)
        )


def _quick_reject(a: _Diagram, b: _Diagram) -> bool:
    if len(a.weights) != len(b.weights):
        return True
    if Counter(a.weights) != Counter(b.weights):
        return True
    return a.profile() != b.profile()


def _refine(a: _Diagram, b: _Diagram) -> tuple[list[int], list[int]] | None:
    def relabel(sig_a: list, sig_b: list) -> tuple[list[int], list[int], int]:
        palette = {sig: n for n, sig in enumerate(sorted(set(sig_a) | set(sig_b)))}
        return [palette[s] for s in sig_a], [palette[s] for s in sig_b], len(palette)

    def signature(d: _Diagram, colours: list[int]) -> list:
        return [
            (
                colours[i],
                tuple(sorted(colours[j] for j in d.sons[i])),
                tuple(sorted(colours[j] for j in d.fathers[i])),
            )
            for i in range(len(colours))
        ]

    col_a, col_b, count = relabel(
        [(w, len(f), len(s)) for w, f, s in zip(a.weights, a.fathers, a.sons)],
        [(w, len(f), len(s)) for w, f, s in zip(b.weights, b.fathers, b.sons)],
    )
    while True:
        if Counter(col_a) != Counter(col_b):
            return None
        new_a, new_b, new_count = relabel(signature(a, col_a), signature(b, col_b))
        if new_count == count:
            return col_a, col_b
        col_a, col_b, count = new_a, new_b, new_count


def _search(a: _Diagram, b: _Diagram, col_a: list[int], col_b: list[int]) -> Iterator[list[int]]:
    n = len(col_a)
    class_size = Counter(col_a)
    order = sorted(range(n), key=lambda i: (-a.weights[i], class_size[col_a[i]], i))
    pool_by_colour: dict[int, list[int]] = {}
    for j, c in enumerate(col_b):
        pool_by_colour.setdefault(c, []).append(j)

    mapping = [-1] * n
    used = [False] * n

    def candidates(node: int) -> Iterator[int]:
        ups = a.fathers[node]
        pool = b.sons[mapping[ups[0]]] if ups else pool_by_colour.get(col_a[node], [])
        return (j for j in pool if col_b[j] == col_a[node])

    def fits(node: int, image: int) -> bool:
        if used[image]:
            return False
        return sorted(mapping[f] for f in a.fathers[node]) == sorted(b.fathers[image])

    iters: list[Iterator[int] | None] = [None] * n
    pos = 0
    iters[0] = candidates(order[0])
    while pos >= 0:
        node = order[pos]
        if mapping[node] != -1:
            used[mapping[node]] = False
            mapping[node] = -1
        for image in iters[pos]:
            if fits(node, image):
                mapping[node] = image
                used[image] = True
                break
        else:
            pos -= 1
            continue
        if pos == n - 1:
            yield list(mapping)
            continue
        pos += 1
        iters[pos] = candidates(order[pos])


def _check_bound(lattice: Hyperlattice, bound: int) -> None:
    if lattice.node_count > bound:
        raise BoundExceeded(
            f"{lattice.alpha.label} is too large for the isomorphism search",
            size=lattice.node_count,
            bound=bound,
        )


def iter_isomorphisms(
    la: Hyperlattice, lb: Hyperlattice, max_nodes: int | None = None
) -> Iterator[Witness]:
    """Every order isomorphism V(α) → V(β), lazily. Bounds are checked up front."""
    bound = get_settings().oracle_max_nodes if max_nodes is None else max_nodes
    _check_bound(la, bound)
    _check_bound(lb, bound)
    a, b = _Diagram.of(la), _Diagram.of(lb)
    if _quick_reject(a, b):
        return iter(())
    colours = _refine(a, b)
    if colours is None:
        return iter(())
    return (
        {la.nodes[i]: lb.nodes[j] for i, j in enumerate(found)}
        for found in _search(a, b, *colours)
    )


def preserves_meet_join(la: Hyperlattice, lb: Hyperlattice, f: Mapping[Hypertuple, Hypertuple]) -> bool:
    settings = get_settings()
    nodes = la.nodes
    if len(nodes) <= settings.exhaustive_check_nodes:
        pairs = itertools.combinations_with_replacement(nodes, 2)
    else:
        rng = random.Random(settings.sample_seed)
        pairs = ((rng.choice(nodes), rng.choice(nodes)) for _ in range(settings.sampled_pairs))
    for u, v in pairs:
        if f[meet(u, v)] != meet(f[u], f[v]) or f[join(u, v)] != join(f[u], f[v]):
            return False
    return True


def brute_force_iso(
    la: Hyperlattice, lb: Hyperlattice, max_nodes: int | None = None
) -> Witness | None:
    """An isomorphism V(α) → V(β) if there is one, else None."""
    f = next(iter_isomorphisms(la, lb, max_nodes), None)
    if f is not None and not preserves_meet_join(la, lb, f):
        raise ConsistencyError(
            f"Order isomorphism {la.alpha.label} -> {lb.alpha.label} does not preserve meet and join"
        )
    return f


def count_automorphisms(lattice: Hyperlattice, limit: int | None = None, max_nodes: int | None = None) -> int:
    return sum(1 for _ in itertools.islice(iter_isomorphisms(lattice, lattice, max_nodes), limit))


ChainAction = tuple[tuple[ChainKind, ChainKind | None], ...]


def automorphism_classes(
    lattice: Hyperlattice, limit: int | None = None, max_nodes: int | None = None
) -> dict[ChainAction, int]:
    """Automorphisms counted by where they send each special chain.

    V(5,2,1) has one class fixing C1 and C2 and one swapping them; the
    V(l+2,l+1,l) family has one fixing C1 and one sending C1 to C3. A class
    can hold more than one map.
    """
    specials = special_chains(lattice)
    kind_of = {frozenset(sc.chain.tuples): sc.kind for sc in specials}
    classes: Counter[ChainAction] = Counter()
    for f in itertools.islice(iter_isomorphisms(lattice, lattice, max_nodes), limit):
        action = tuple((sc.kind, kind_of.get(frozenset(f[u] for u in sc.chain))) for sc in specials)
        classes[action] += 1
    return dict(classes)


def build_witness(
    alpha: SegreChar | Sequence[int], beta: SegreChar | Sequence[int], max_nodes: int | None = None
) -> Witness | None:
    """An explicit isomorphism when ``decide_iso`` says there is one."""
    verdict = decide_iso(alpha, beta)
    if not verdict.isomorphic:
        return None
    la = enumerate_lattice(verdict.alpha, max_nodes)
    if verdict.rule is Rule.EQUAL:
        return {u: u for u in la.nodes}
    lb = enumerate_lattice(verdict.beta, max_nodes)
    f = brute_force_iso(la, lb, max_nodes)
    if f is None:
        raise ConsistencyError(
            f"{la.alpha.label} and {lb.alpha.label} should be isomorphic but no map was found",
            detail=f"rule {verdict.rule.value}",
        )
    return f


@dataclass(frozen=True)
class WitnessCheck:
    bijective: bool
    weight_preserved: bool
    sons_preserved: bool
    ends_preserved: bool
    special_chains_preserved: bool
    meet_join_preserved: bool

    @property
    def ok(self) -> bool:
        return all(vars(self).values())


def check_witness(la: Hyperlattice, lb: Hyperlattice, f: Mapping[Hypertuple, Hypertuple]) -> WitnessCheck:
    """Everything an isomorphism has to carry across, checked one property at a time."""
    bijective = set(f) == set(la.nodes) and sorted(f.values()) == sorted(lb.nodes)
    if not bijective:
        return WitnessCheck(False, False, False, False, False, False)
    chains_a = {frozenset(f[u] for u in sc.chain) for sc in special_chains(la)}
    chains_b = {frozenset(sc.chain) for sc in special_chains(lb)}
    return WitnessCheck(
        bijective=True,
        weight_preserved=all(weight(u) == weight(f[u]) for u in la.nodes),
        sons_preserved=all(
            sorted(f[v] for v in la.sons(u)) == sorted(lb.sons(f[u])) for u in la.nodes
        ),
        ends_preserved=f[la.top] == lb.top and f[la.bottom] == lb.bottom,
        special_chains_preserved=chains_a == chains_b,
        meet_join_preserved=preserves_meet_join(la, lb, f),
    )


def _evaluate_pair(pair: tuple[tuple[int, ...], tuple[int, ...]], max_nodes: int | None) -> PairRecord:
    alpha, beta = SegreChar(pair[0]), SegreChar(pair[1])
    settings = get_settings()
    bound = settings.oracle_max_nodes if max_nodes is None else max_nodes
    start = time.perf_counter()
    verdict = decide_iso(alpha, beta)
    record = dict(
        alpha=list(alpha.parts),
        beta=list(beta.parts),
        theorem_verdict=verdict.isomorphic,
        rule=verdict.rule.value,
    )
    try:
        la = enumerate_lattice(alpha, bound)
        lb = la if alpha == beta else enumerate_lattice(beta, bound)
        f = brute_force_iso(la, lb, bound)
        if f is not None:
            check = check_witness(la, lb, f)
            record.update(
                witness_found=True,
                weight_preserved=check.weight_preserved,
                sons_preserved=check.sons_preserved and check.ends_preserved,
                special_chains_preserved=check.special_chains_preserved,
                meet_join_preserved=check.meet_join_preserved,
            )
        if alpha == beta:
            classes = automorphism_classes(la, settings.automorphism_limit, bound)
            record.update(automorphisms=sum(classes.values()), automorphism_classes=len(classes))
    except BoundExceeded as exc:
        log.warning("Skipping %s vs %s: %s (%s)", alpha.label, beta.label, exc.message, exc.detail)
        return PairRecord(
            **record, skipped=True, elapsed_ms=(time.perf_counter() - start) * 1000
        )
    oracle = f is not None
    if oracle != verdict.isomorphic:
        log.error(
            "Disagreement on %s vs %s: theorem says %s, search says %s",
            alpha.label, beta.label, verdict.isomorphic, oracle,
        )
    return PairRecord(
        **record,
        oracle_verdict=oracle,
        agree=oracle == verdict.isomorphic,
        elapsed_ms=(time.perf_counter() - start) * 1000,
    )


def _quotient_check(alpha: SegreChar) -> QuotientCheck | None:
    try:
        congruence = Congruence.for_alpha(alpha)
    except CongruenceUndefined:
        return None
    lattice = enumerate_lattice(alpha)
    try:
        quotient_iso(lattice, congruence)
        verified = True
    except ConsistencyError as exc:
        log.error("%s: %s", alpha.label, exc.message)
        verified = False
    return check_formulas(factor(lattice, congruence), iso_verified=verified)


def verify_range(
    n_max: int | None = None, workers: int | None = None, max_nodes: int | None = None
) -> VerificationReport:
    """Compare ``decide_iso`` with ``brute_force_iso`` on every pair of equal dimension ≤ n_max."""
    settings = get_settings()
    n_max = settings.verify_n_max if n_max is None else n_max
    workers = settings.verify_workers if workers is None else workers
    alphas = list(enumerate_reduced(n_max))
    rank = {a.parts: i for i, a in enumerate(alphas)}
    pairs = [
        (a.parts, b.parts)
        for _, group in itertools.groupby(alphas, key=lambda a: a.n)
        for a, b in itertools.combinations_with_replacement(list(group), 2)
    ]
    log.info("Verifying %d pairs up to dimension %d with %d worker(s)", len(pairs), n_max, workers)

    job = partial(_evaluate_pair, max_nodes=max_nodes)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(job, pairs, chunksize=8))
    else:
        records = [job(p) for p in pairs]
    records.sort(key=lambda r: (rank[tuple(r.alpha)], rank[tuple(r.beta)]))

    checks, riding = [], []
    for alpha in alphas:
        if cardinality(alpha) > settings.max_nodes:
            continue
        if (check := _quotient_check(alpha)) is not None:
            checks.append(check)
        if (rc := check_riding_chains(enumerate_lattice(alpha))).discrepancy:
            riding.append(rc)

    report = VerificationReport(
        n_max=n_max,
        records=records,
        quotient_checks=checks,
        riding_checks=riding,
        disagreements=[(r.alpha, r.beta) for r in records if r.agree is False],
        skipped=[(r.alpha, r.beta) for r in records if r.skipped],
    )
    log.info(
        "Verified %d pairs: %d disagreements, %d skipped, %d riding-chain discrepancies",
        len(records), len(report.disagreements), len(report.skipped), len(riding),
    )
    return report
