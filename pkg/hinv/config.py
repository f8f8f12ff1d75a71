"""Application settings, loaded from environment / .env."""

from functools import lru_cache
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

BASE_DIR = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Runtime configuration.

    Every field can be set as ``HINV_<NAME>`` in the environment or in a
    ``.env`` file next to ``pyproject.toml``. CLI flags win over both.
    """

    # --- Bounds ---
    # Checked against the closed-form cardinality before anything is allocated.
    max_nodes: int = 1_000_000
    # The isomorphism oracle is exponential in the worst case.
    oracle_max_nodes: int = 20_000

    # --- Verification ---
    verify_n_max: int = 12
    # 1 evaluates pairs in-process; more uses a process pool.
    verify_workers: int = 1
    # Meet/join preservation of a witness is checked on all pairs up to this
    # many nodes, and on ``sampled_pairs`` random pairs above it.
    exhaustive_check_nodes: int = 2_000
    sampled_pairs: int = 20_000
    sample_seed: int = 0
    # Automorphism counts in the report stop here.
    automorphism_limit: int = 64

    # --- Logging ---
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="HINV_",
        env_file=str(BASE_DIR / ".env"),
        env_file_encoding="utf-8",
        extra="ignore",
    )


@lru_cache
def get_settings() -> Settings:
    return Settings()
