"""
Runtime settings: YAML defaults shipped with the package, overridden by
environment variables (a ``.env`` file is honoured through python-dotenv).
"""

import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field

CONFIG_DIR = Path(__file__).resolve().parent / "config"


def _load_yaml(filename: str) -> Dict[str, Any]:
    """Load a YAML file from the package config directory."""
    with open(CONFIG_DIR / filename, "r", encoding="utf-8") as file:
        return yaml.safe_load(file) or {}


class Settings(BaseModel):
    budget: int = Field(ge=1)
    threads: int = Field(ge=1)
    small_side_cap: int = Field(ge=1)
    kappa_h_size_cap: int = Field(ge=1)
    oracle_budget: int = Field(ge=1)
    lemma33_samples: int = Field(ge=0)
    lemma33_exhaustive_max_size: int = Field(ge=1)
    lemma33_exhaustive_max_order: int = Field(ge=1)
    lemma33_seed: int = 0
    cut_exhaustive_max_order: int = Field(ge=0)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    load_dotenv()
    raw = _load_yaml("defaults.yaml")
    search = raw.get("search", {})
    lemma33 = raw.get("boundary_connectivity", {})
    return Settings(
        budget=int(os.getenv("TOPODIAG_BUDGET", search.get("budget", 10**9))),
        threads=int(os.getenv("TOPODIAG_THREADS", search.get("threads", 1))),
        small_side_cap=search.get("small_side_cap", 8),
        kappa_h_size_cap=search.get("kappa_h_size_cap", 4),
        oracle_budget=raw.get("oracle", {}).get("budget", 5_000_000),
        lemma33_samples=lemma33.get("samples", 200),
        lemma33_exhaustive_max_size=lemma33.get("exhaustive_max_size", 3),
        lemma33_exhaustive_max_order=lemma33.get("exhaustive_max_order", 60),
        lemma33_seed=lemma33.get("seed", 0),
        cut_exhaustive_max_order=raw.get("cut_structure", {}).get("exhaustive_max_order", 24),
        log_level=os.getenv("TOPODIAG_LOG_LEVEL", "WARNING"),
    )
