"""Segre characteristic validation, reduction and enumeration."""

from __future__ import annotations

import logging

import pytest
from hypothesis import given, strategies as st

from hinv.errors import HinvError, InvalidSegre
from hinv.segre import SegreChar, dimension, distinct_partitions, enumerate_reduced, parse, reduce

raw_segre = st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=7).map(
    lambda xs: sorted(xs, reverse=True)
)


def distinct_partition_counts(n: int) -> list[int]:
    """q(m) for m ≤ n, as coefficients of (1+x)(1+x²)…(1+xⁿ)."""
    counts = [1] + [0] * n
    for k in range(1, n + 1):
        for m in range(n, k - 1, -1):
            counts[m] += counts[m - k]
    return counts


# ---------------- reduce ----------------


@pytest.mark.parametrize(
    "raw,reduced",
    [
        ((3, 3, 2), (3, 2)),
        ((5, 2), (5, 2)),
        ((4, 4, 4, 1), (4, 1)),
    ],
)
def test_reduce_examples(raw, reduced):
    assert reduce(raw).parts == reduced


def test_reduce_records_whether_anything_was_dropped():
    """Callers warn on reduction because the dimension changes."""
    changed = reduce((3, 3, 2))
    assert changed.was_reduced
    assert changed.original == (3, 3, 2)
    assert dimension(changed) == 5

    unchanged = reduce((5, 2))
    assert not unchanged.was_reduced
    assert unchanged.original is None


def test_reduce_keeps_equality_independent_of_origin():
    assert reduce((3, 3, 2)) == SegreChar((3, 2))


@given(raw_segre)
def test_reduce_is_idempotent(raw):
    once = reduce(raw)
    assert reduce(once) == once
    assert reduce(once.parts) == once
    assert not reduce(once.parts).was_reduced


@given(raw_segre)
def test_reduce_output_is_strictly_decreasing(raw):
    parts = reduce(raw).parts
    assert all(a > b for a, b in zip(parts, parts[1:]))
    assert set(parts) == set(raw)


@pytest.mark.parametrize(
    "raw,position",
    [
        ((3, 0), 2),
        ((0,), 1),
        ((2, 3), 2),
        ((5, 4, -1), 3),
        ((4, 2, 3), 3),
    ],
)
def test_reduce_rejects_bad_entries_naming_the_position(raw, position):
    with pytest.raises(InvalidSegre) as info:
        reduce(raw)
    assert f"position {position}" in info.value.message


def test_reduce_rejects_empty_input():
    with pytest.raises(InvalidSegre, match="empty"):
        reduce(())


def test_reduce_rejects_non_integers():
    with pytest.raises(InvalidSegre):
        reduce((3, 2.5))
    with pytest.raises(InvalidSegre):
        reduce("32")


def test_segre_char_itself_must_be_reduced():
    with pytest.raises(InvalidSegre, match="strictly decreasing"):
        SegreChar((3, 3))


# ---------------- dimension & text form ----------------


@pytest.mark.parametrize("parts,n", [((5, 2), 7), ((4, 2, 1), 7), ((9,), 9)])
def test_dimension(parts, n):
    assert dimension(SegreChar(parts)) == n


def test_text_form_round_trips():
    alpha = parse("5, 3,1")
    assert alpha == SegreChar((5, 3, 1))
    assert str(alpha) == "5,3,1"
    assert alpha.label == "V(5,3,1)"


def test_parse_reduces_and_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="hinv.segre"):
        alpha = parse("3,3,2")
    assert alpha.parts == (3, 2)
    assert "dimension drops from 8 to 5" in caplog.text


@pytest.mark.parametrize("text", ["5,x", "", "5,,2", "5;2"])
def test_parse_rejects_garbage(text):
    with pytest.raises(InvalidSegre):
        parse(text)


def test_padded_access_past_the_end_is_zero():
    alpha = SegreChar((4, 3))
    assert (alpha.at(1), alpha.at(2), alpha.at(3)) == (4, 3, 0)


# ---------------- enumerate_reduced ----------------


def test_enumerate_reduced_small():
    assert [a.parts for a in enumerate_reduced(3)] == [(1,), (2,), (3,), (2, 1)]
    assert [a.parts for a in enumerate_reduced(1)] == [(1,)]


def test_enumerate_reduced_order_is_sum_then_lexicographic_descending():
    sevens = [a.parts for a in enumerate_reduced(7) if a.n == 7]
    assert sevens == [(7,), (6, 1), (5, 2), (4, 3), (4, 2, 1)]


@pytest.mark.parametrize("n_max", [1, 2, 5, 7, 12, 20])
def test_enumerate_reduced_count_matches_independent_counter(n_max):
    expected = sum(distinct_partition_counts(n_max)[1:])
    produced = list(enumerate_reduced(n_max))
    assert len(produced) == expected
    assert len({a.parts for a in produced}) == expected


def test_enumerate_reduced_up_to_seven_has_eighteen_entries():
    assert len(list(enumerate_reduced(7))) == 18


def test_enumerate_reduced_rejects_zero():
    with pytest.raises(HinvError):
        list(enumerate_reduced(0))


def test_distinct_partitions_respect_the_largest_part():
    assert list(distinct_partitions(6, 3)) == [(3, 2, 1)]
    assert list(distinct_partitions(2, 1)) == []
