"""Shared fixtures: the tiny preset code, the decoder-check code and seeded RNGs."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from frs_gaps.field import FieldContext
from frs_gaps.frs import CodeParams
from frs_gaps.rng import SeededRNG


@pytest.fixture
def ctx17() -> FieldContext:
    return FieldContext(17, 3)


@pytest.fixture
def tiny(ctx17: FieldContext) -> CodeParams:
    """q=17, gamma=3, m=2, n=4, k=2; basepoints 1, 9, 13, 15."""
    return CodeParams.standard(ctx17, 2, 4, 2)


@pytest.fixture
def decoder_code(ctx17: FieldContext) -> CodeParams:
    """q=17, gamma=3, m=4, n=4, k=3; basepoints 1, 13, 16, 4."""
    return CodeParams.standard(ctx17, 4, 4, 3)


@pytest.fixture
def rng() -> SeededRNG:
    return SeededRNG(0)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs on the small preset (q = 8191), seconds per case")
