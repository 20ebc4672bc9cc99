import numpy as np
import pytest

import pcx


def random_matrix(rng: np.random.Generator, n: int, lo: float = 0.2, hi: float = 5.0) -> pcx.PCMatrix:
    """Random reciprocal matrix with upper-triangle entries log-uniform in [lo, hi]."""
    count = n * (n - 1) // 2
    upper = np.exp(rng.uniform(np.log(lo), np.log(hi), size=count))
    return pcx.build_matrix(n, upper)


def random_consistent(rng: np.random.Generator, n: int, span: float = 1.2):
    """Consistent matrix plus its generating weights (log-uniform in e^[-span, span])."""
    w = np.exp(rng.uniform(-span, span, size=n))
    return pcx.from_weights(w), w


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20250810)


@pytest.fixture
def matrix_353() -> pcx.PCMatrix:
    return pcx.build_matrix(3, [3.0, 5.0, 3.0])


@pytest.fixture
def matrix_232() -> pcx.PCMatrix:
    return pcx.build_matrix(3, [2.0, 3.0, 2.0])
