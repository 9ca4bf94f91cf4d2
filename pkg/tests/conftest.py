import pathlib

import numpy as np
import pytest

from pairrank.core import ComparisonMatrix, Scale, load_matrix

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def disagree_csv() -> pathlib.Path:
    """4x4 multiplicative matrix whose tropical ranking splits from the other two."""
    return DATA / "disagree_4x4.csv"


@pytest.fixture(scope="session")
def disagree_matrix(disagree_csv) -> ComparisonMatrix:
    return load_matrix(disagree_csv, reciprocity_tol=0.05)


@pytest.fixture
def rand_add():
    """Factory for random additive matrices with Gaussian upper triangles."""

    def make(rng: np.random.Generator, n: int, sd: float = 1.0) -> ComparisonMatrix:
        g = np.triu(rng.normal(0.0, sd, size=(n, n)), 1)
        return ComparisonMatrix(g - g.T, Scale.ADDITIVE)

    return make
