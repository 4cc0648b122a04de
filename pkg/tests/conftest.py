"""Pytest configuration and shared fixtures."""
import numpy as np
import pytest

from config import config
from models import RadialFunction, StepFunction


def random_step_corpus(count: int, seed: int):
    """Seeded step functions with integer values 0..9 and lengths in [0.1, 3)."""
    rng = np.random.default_rng(seed)
    corpus = []
    for _ in range(count):
        pieces = int(rng.integers(1, 8))
        lengths = rng.uniform(0.1, 3.0, pieces)
        values = rng.integers(0, 10, pieces)
        corpus.append(StepFunction.from_pairs(zip(lengths.tolist(), values.astype(float).tolist())))
    return corpus


@pytest.fixture(scope="session")
def step_corpus():
    """1000 seeded random step functions."""
    return random_step_corpus(1000, config.seed)


@pytest.fixture
def two_step():
    """3 on a set of measure 2, 1 on a set of measure 3 (unsorted order)."""
    return StepFunction.from_pairs([(3, 1.0), (2, 3.0)])


@pytest.fixture
def unit_indicator():
    """χ_[0, 1)."""
    return StepFunction.indicator(1.0)


@pytest.fixture
def unit_ball_1d():
    """χ_B(0, 1) on the real line."""
    return RadialFunction.ball(1, 1.0)
