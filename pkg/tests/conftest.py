"""Shared fixtures: memoized table construction so the expensive coupled
pipelines run once per session."""

import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from su3canon import IrrepLabel, build_table


@lru_cache(maxsize=None)
def cached_table(lam: int, mu: int, basis: str, max_L=None):
    return build_table(IrrepLabel(lam, mu), basis, max_L=max_L)


@pytest.fixture
def get_table():
    return cached_table
