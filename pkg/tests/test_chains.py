"""Special chains and riding chains."""

from __future__ import annotations

import logging

import pytest

from hinv import chains
from hinv.chains import (
    Chain,
    ChainKind,
    RidingChain,
    RidingKind,
    check_riding_chains,
    expected_length,
    expected_special_chains,
    riding_chains,
    riding_chains_by_definition,
    special_chains,
    special_chains_brute_force,
    validate_chain,
)
from hinv.errors import ConsistencyError, InvalidTuple
from hinv.models import ChainBody, ChainList

from tests.conftest import lattice_of, lattices


def chains_by_kind(parts) -> dict[str, list[str]]:
    found: dict[str, list[str]] = {}
    for rc in riding_chains(lattice_of(*parts)):
        found.setdefault(rc.kind.value, []).append(str(rc.chain))
    return found


# ---------------- special chains ----------------


def test_c2_of_7321():
    (c1, c2) = special_chains(lattice_of(7, 3, 2, 1))
    assert c2.kind is ChainKind.C2
    assert str(c2) == (
        "C2 (length 5): (4,0,0,0) - (3,0,0,0) - (2,0,0,0) - (1,0,0,0) - (0,0,0,0)"
    )
    assert c1.kind is ChainKind.C1
    assert c1.chain.length == 5


def test_c3_of_6532():
    (c1, c3) = special_chains(lattice_of(6, 5, 3, 2))
    assert c3.kind is ChainKind.C3
    assert str(c3.chain) == (
        "(3,2,0,0) - (2,2,0,0) - (2,1,0,0) - (1,1,0,0) - (1,0,0,0) - (0,0,0,0)"
    )
    assert c1.kind is ChainKind.C1


def test_c1_of_5432():
    c1 = special_chains(lattice_of(5, 4, 3, 2))[0]
    assert c1.chain.tuples == (
        (1, 1, 1, 1),
        (1, 1, 1, 0),
        (1, 1, 0, 0),
        (1, 0, 0, 0),
        (0, 0, 0, 0),
    )


@pytest.mark.parametrize(
    "parts,kinds",
    [
        ((9,), ["C2"]),
        ((4, 3), ["C3"]),
        ((2, 1), ["C3"]),
        ((5, 2), ["C1", "C2"]),
        ((4, 3, 1), ["C1", "C3"]),
        ((7, 4, 1), ["C1", "C2"]),
    ],
)
def test_which_special_chains_exist(parts, kinds):
    assert [sc.kind.value for sc in special_chains(lattice_of(*parts))] == kinds


def test_single_block_lattice_is_one_chain():
    (c2,) = special_chains(lattice_of(9))
    assert c2.chain.tuples == tuple((m,) for m in range(9, -1, -1))


@pytest.mark.parametrize("lattice", lattices(14), ids=lambda L: L.alpha.label)
def test_special_chains_three_ways_agree(lattice):
    """Tree walk, brute force and closed forms give the same chains."""
    structured = special_chains(lattice)
    assert structured == special_chains_brute_force(lattice)
    assert structured == expected_special_chains(lattice.alpha)
    for sc in structured:
        assert sc.chain.length == expected_length(lattice.alpha, sc.kind)
        assert sc.chain.tuples[-1] == lattice.bottom
        assert validate_chain(lattice, sc.chain)
        for u, v in zip(sc.chain.tuples, sc.chain.tuples[1:]):
            assert lattice.sons(u) == (v,)
        # Maximal: nothing with a single son sits on top.
        head = sc.chain.tuples[0]
        assert not any(lattice.sons(f) == (head,) for f in lattice.fathers(head))


# ---------------- validate_chain ----------------


def test_validate_chain():
    lattice = lattice_of(7, 3, 2, 1)
    c2 = special_chains(lattice)[1].chain
    assert validate_chain(lattice, c2)
    assert not validate_chain(lattice, Chain(tuple(reversed(c2.tuples))))
    assert validate_chain(lattice, Chain.of([(1, 1, 0, 0)]))
    # Comparable but not a cover.
    assert not validate_chain(lattice, Chain.of([(3, 0, 0, 0), (1, 0, 0, 0)]))


def test_validate_chain_rejects_foreign_tuples():
    with pytest.raises(InvalidTuple):
        validate_chain(lattice_of(5, 2), Chain.of([(6, 0), (5, 0)]))


# ---------------- riding chains ----------------

RIDING = [
    (
        (5, 2),
        {
            "RC1": ["(2,2) - (2,1) - (2,0)"],
            "RC2": ["(4,1) - (3,1) - (2,1) - (1,1)"],
        },
    ),
    (
        (3, 1),
        {
            "RC1": ["(3,1) - (2,1) - (2,0)"],
            "RC2": ["(3,1) - (2,1) - (1,1)"],
        },
    ),
    (
        (4, 1),
        {
            "RC1": ["(2,1) - (2,0)"],
            "RC2": ["(4,1) - (3,1) - (2,1) - (1,1)"],
        },
    ),
    (
        (7, 4, 1),
        {
            "RC1": ["(2,1,1) - (2,1,0) - (2,0,0)"],
            "RC2": ["(4,1,0) - (3,1,0) - (2,1,0) - (1,1,0)"],
        },
    ),
    (
        (6, 4, 2),
        {
            "RC1": ["(2,1,1) - (2,1,0) - (2,0,0)"],
            "RC2": [
                "(3,1,0) - (2,1,0) - (1,1,0)",
                "(2,2,0) - (2,1,0) - (1,1,0)",
            ],
        },
    ),
    (
        (5, 4, 2),
        {
            "RC1": ["(2,1,1) - (2,1,0)"],
            "RC3": ["(4,3,1) - (3,3,1) - (3,2,1) - (2,2,1) - (2,1,1) - (1,1,1)"],
        },
    ),
    (
        (4, 3, 1),
        {
            "RC1": ["(2,1,1) - (2,1,0)"],
            "RC3": ["(4,3,1) - (3,3,1) - (3,2,1) - (2,2,1) - (2,1,1) - (1,1,1)"],
        },
    ),
    (
        (9, 5, 3, 1),
        {
            "RC1": ["(2,1,1,1) - (2,1,1,0) - (2,1,0,0) - (2,0,0,0)"],
            "RC2": ["(5,1,0,0) - (4,1,0,0) - (3,1,0,0) - (2,1,0,0) - (1,1,0,0)"],
        },
    ),
    (
        (6, 5, 3, 1),
        {
            "RC1": ["(2,1,1,1) - (2,1,1,0) - (2,1,0,0)"],
            "RC3": ["(4,3,1,0) - (3,3,1,0) - (3,2,1,0) - (2,2,1,0) - (2,1,1,0) - (1,1,1,0)"],
        },
    ),
    (
        (5, 2, 1),
        {
            "RC1": ["(2,2,1) - (2,1,1) - (2,1,0) - (2,0,0)"],
            "RC2": ["(4,1,0) - (3,1,0) - (2,1,0) - (1,1,0)"],
        },
    ),
    (
        (7, 3, 2),
        {
            "RC1": ["(2,2,2) - (2,2,1) - (2,1,1) - (2,1,0) - (2,0,0)"],
            "RC2": ["(5,1,0) - (4,1,0) - (3,1,0) - (2,1,0) - (1,1,0)"],
        },
    ),
    (
        (3, 2, 1),
        {
            "RC1": ["(3,2,1) - (2,2,1) - (2,1,1) - (2,1,0)"],
            "RC3": ["(3,2,1) - (2,2,1) - (2,1,1) - (1,1,1)"],
        },
    ),
    (
        (4, 3, 2),
        {
            "RC1": ["(2,2,2) - (2,2,1) - (2,1,1) - (2,1,0)"],
            "RC3": ["(3,2,1) - (2,2,1) - (2,1,1) - (1,1,1)"],
        },
    ),
    (
        (5, 4, 3, 2),
        {
            "RC1": ["(2,1,1,1) - (2,1,1,0) - (2,1,0,0)"],
            "RC3": ["(3,2,1,0) - (2,2,1,0) - (2,1,1,0) - (1,1,1,0)"],
        },
    ),
    (
        (6, 4, 3, 1),
        {
            "RC1": ["(2,1,1,1) - (2,1,1,0) - (2,1,0,0) - (2,0,0,0)"],
            "RC2": ["(3,1,0,0) - (2,1,0,0) - (1,1,0,0)"],
        },
    ),
    (
        (6, 4, 2, 1),
        {
            "RC1": ["(2,1,1,1) - (2,1,1,0) - (2,1,0,0) - (2,0,0,0)"],
            "RC2": ["(3,1,0,0) - (2,1,0,0) - (1,1,0,0)"],
        },
    ),
]


@pytest.mark.parametrize("parts,expected", RIDING, ids=[str(p) for p, _ in RIDING])
def test_riding_chain_examples(parts, expected):
    assert chains_by_kind(parts) == expected


@pytest.mark.parametrize("parts", [(1,), (7,), (2, 1), (4, 3), (9, 8)])
def test_lattices_without_riding_chains(parts):
    """r = 1 and r = 2 with α₁−α₂ = 1 are themselves chains or close to it."""
    assert riding_chains(lattice_of(*parts)) == ()


@pytest.mark.parametrize("parts", [(9, 5, 3, 1), (7, 4, 1)])
def test_riding_chain_lengths_for_a_wide_first_gap(parts):
    lattice = lattice_of(*parts)
    alpha = lattice.alpha
    lengths = {rc.kind: rc.chain.length for rc in riding_chains(lattice)}
    assert lengths[RidingKind.RC1] == alpha.r
    assert lengths[RidingKind.RC2] == alpha.at(1) - alpha.at(2) + 1


@pytest.mark.parametrize("lattice", lattices(12), ids=lambda L: L.alpha.label)
def test_riding_chains_hang_off_their_special_chain(lattice):
    specials = {sc.kind: set(sc.chain.tuples) for sc in special_chains(lattice)}
    for rc in riding_chains(lattice):
        on = specials[rc.attached_to]
        tuples = rc.chain.tuples
        assert rc.chain.length >= 2
        assert validate_chain(lattice, rc.chain)
        assert not on & set(tuples)
        last = tuples[-1]
        assert len(lattice.sons(last)) == 1 and lattice.sons(last)[0] in on
        assert rc.kind.value == "R" + rc.attached_to.value


def listed_lengths(alpha) -> dict[str, list[int]]:
    """Riding chain lengths straight from the closed forms, case by case."""
    r, gap = alpha.r, alpha.at(1) - alpha.at(2)
    if r == 1 or (r == 2 and gap == 1):
        return {}
    if r == 2:
        rc1 = 2 if alpha.at(2) == 1 and alpha.at(1) != 3 else 3
        return {"RC1": [rc1], "RC2": [gap + 1]}
    d23, a3 = alpha.at(2) - alpha.at(3), alpha.at(3)
    if r == 3:
        rc1 = 3 if d23 > 1 else (5 if a3 >= 2 else 4)
        if gap == 1:
            rc1 = 2 if d23 > 1 else 4
            return {"RC1": [rc1], "RC3": [2 * (alpha.at(1) - a3)]}
        rc2 = [gap + 1, gap + 1] if gap == 2 and d23 > 1 else [gap + 1]
        return {"RC1": [rc1], "RC2": rc2}
    if gap == 1:
        return {"RC1": [r - 1], "RC3": [2 * (alpha.at(1) - a3)]}
    return {"RC1": [r], "RC2": [gap + 1]}


@pytest.mark.parametrize("lattice", lattices(14), ids=lambda L: L.alpha.label)
def test_riding_chain_lengths_follow_the_case_split(lattice):
    found: dict[str, list[int]] = {}
    for rc in riding_chains(lattice):
        found.setdefault(rc.kind.value, []).append(rc.chain.length)
    assert found == listed_lengths(lattice.alpha)


def test_listed_chains_are_not_checked_blindly(monkeypatch):
    bogus = RidingChain(RidingKind.RC1, Chain.of([(2, 2), (2, 1)]), ChainKind.C1)
    monkeypatch.setattr(chains, "expected_riding_chains", lambda alpha: (bogus,))
    with pytest.raises(ConsistencyError, match="does not ride on C1"):
        riding_chains(lattice_of(5, 2))


def test_search_agrees_where_the_listed_chain_is_the_only_longest():
    lattice = lattice_of(5, 2)
    assert riding_chains_by_definition(lattice) == riding_chains(lattice)
    check = check_riding_chains(lattice)
    assert not check.discrepancy
    assert check.as_text() == "V(5,2): riding chains as listed"


def test_search_finding_other_chains_is_reported(caplog):
    """V(4,3,2) admits a second RC1 of the same length; the listed one is kept."""
    lattice = lattice_of(4, 3, 2)
    with caplog.at_level(logging.WARNING, logger="hinv.chains"):
        check = check_riding_chains(lattice)
    assert check.discrepancy
    assert "RC1: listed 1 of length 4, search finds 2 of length 4" in check.notes
    searched_rc1 = [c.tuples for c in check.searched if c.kind == "RC1"]
    assert [[3, 2, 1], [2, 2, 1], [2, 1, 1], [2, 1, 0]] in searched_rc1
    assert [c.tuples for c in check.listed if c.kind == "RC1"] == [
        [[2, 2, 2], [2, 2, 1], [2, 1, 1], [2, 1, 0]]
    ]
    assert "V(4,3,2) riding chains" in caplog.text
    assert check.as_text().startswith("V(4,3,2): riding chains DISCREPANCY: ")


# ---------------- output ----------------


def test_chain_body_text_and_json():
    sc = special_chains(lattice_of(5, 2))[1]
    body = ChainBody.from_special(sc)
    assert body.as_text() == "C2 (length 4): (3,0) - (2,0) - (1,0) - (0,0)"
    assert body.model_dump()["tuples"] == [[3, 0], [2, 0], [1, 0], [0, 0]]

    rc = riding_chains(lattice_of(5, 2))[0]
    assert ChainBody.from_riding(rc).as_text() == "RC1 on C1 (length 3): (2,2) - (2,1) - (2,0)"


def test_empty_chain_list_text():
    assert ChainList(alpha=[4, 3], chains=[]).as_text() == "No chains in V(4,3)"
