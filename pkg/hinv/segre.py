"""Segre characteristics: the one parameter every lattice is built from.

A Segre characteristic lists the Jordan block sizes of a nilpotent matrix,
largest first. Repeated sizes do not change the shape of the hyperinvariant
lattice, so everything downstream works with the *reduced* form, where the
sizes are strictly decreasing. Reducing loses the dimension, which is why
``reduce`` keeps the original around and callers warn when it changed.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field

from .errors import HinvError, InvalidSegre

log = logging.getLogger(__name__)


def _check(parts: Sequence[int], *, strict: bool) -> tuple[int, ...]:
    """Validate a sequence of block sizes, naming the first bad position (1-based)."""
    if isinstance(parts, (str, bytes)):
        raise InvalidSegre("Segre characteristic must be a sequence of integers", detail=repr(parts))
    values = tuple(parts)
    if not values:
        raise InvalidSegre("Segre characteristic is empty")
    for pos, value in enumerate(values, start=1):
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidSegre(f"Entry at position {pos} is not an integer", detail=repr(value))
        if value <= 0:
            raise InvalidSegre(f"Entry at position {pos} must be positive", detail=f"got {value}")
    for pos in range(1, len(values)):
        prev, cur = values[pos - 1], values[pos]
        if cur > prev or (strict and cur == prev):
            order = "strictly decreasing" if strict else "non-increasing"
            raise InvalidSegre(
                f"Entry at position {pos + 1} breaks the {order} order",
                detail=f"{cur} follows {prev}",
            )
    return values


@dataclass(frozen=True)
class SegreChar:
    """A reduced Segre characteristic α = (α₁ > … > α_r > 0).

    ``original`` is the non-reduced input this was produced from, if any. It
    does not take part in equality.
    """

    parts: tuple[int, ...]
    original: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", _check(self.parts, strict=True))

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def was_reduced(self) -> bool:
        return self.original is not None

    def at(self, i: int) -> int:
        """α_i for 1-based ``i``, with α_i = 0 past the end."""
        return self.parts[i - 1] if 1 <= i <= self.r else 0

    @property
    def label(self) -> str:
        return f"V({self})"

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.parts)

    def __len__(self) -> int:
        return self.r

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, index: int) -> int:
        return self.parts[index]


def reduce(raw: SegreChar | Sequence[int]) -> SegreChar:
    """Drop repeated block sizes, keeping the first occurrence of each."""
    if isinstance(raw, SegreChar):
        return raw
    values = _check(raw, strict=False)
    deduped = tuple(dict.fromkeys(values))
    return SegreChar(deduped, original=values if deduped != values else None)


def dimension(alpha: SegreChar) -> int:
    return alpha.n


def parse(text: str) -> SegreChar:
    """Parse the comma-separated text form, e.g. ``"5,3,1"``, reducing if needed."""
    raw = []
    for pos, chunk in enumerate(text.split(","), start=1):
        try:
            raw.append(int(chunk.strip()))
        except ValueError:
            raise InvalidSegre(
                f"Entry at position {pos} is not an integer", detail=repr(chunk.strip())
            ) from None
    alpha = reduce(raw)
    if alpha.was_reduced:
        log.warning(
            "Reduced Segre characteristic %s to %s; dimension drops from %d to %d",
            ",".join(map(str, alpha.original)), alpha, sum(alpha.original), alpha.n,
        )
    return alpha


def distinct_partitions(total: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``total`` into distinct parts, each part at most ``largest``.

    Parts come out largest first and partitions in lexicographic descending
    order.
    """
    top = total if largest is None else min(total, largest)
    for first in range(top, 0, -1):
        if first == total:
            yield (first,)
            continue
        for rest in distinct_partitions(total - first, first - 1):
            yield (first,) + rest


def enumerate_reduced(n_max: int) -> Iterator[SegreChar]:
    """Every reduced Segre characteristic of dimension at most ``n_max``.

    Ordered by dimension, then lexicographic descending.
    """
    if n_max < 1:
        raise HinvError("n_max must be at least 1", detail=f"got {n_max}")
    for total in range(1, n_max + 1):
        for parts in distinct_partitions(total):
            yield SegreChar(parts)
