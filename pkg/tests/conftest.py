"""Shared fixtures.

Lattices are cached per Segre characteristic for the whole session: the
exhaustive suites walk the same small V(α) many times over.
"""

from __future__ import annotations

from functools import lru_cache

import pytest

from hinv.config import get_settings
from hinv.hyperlattice import Hyperlattice, enumerate_lattice
from hinv.segre import SegreChar, enumerate_reduced


@lru_cache(maxsize=None)
def lattice_of(*parts: int) -> Hyperlattice:
    return enumerate_lattice(SegreChar(parts))


def alphas(n_max: int) -> list[SegreChar]:
    return list(enumerate_reduced(n_max))


def lattices(n_max: int) -> list[Hyperlattice]:
    return [lattice_of(*a.parts) for a in alphas(n_max)]


def ids(values) -> list[str]:
    return [",".join(map(str, v)) for v in values]


@pytest.fixture
def configure(monkeypatch):
    """Override settings through HINV_* variables, as a deployment would."""

    def apply(**values):
        for key, value in values.items():
            monkeypatch.setenv(f"HINV_{key.upper()}", str(value))
        get_settings.cache_clear()
        return get_settings()

    yield apply
    get_settings.cache_clear()
