from __future__ import annotations

import numpy as np
import pytest

from qsample.codes import GeneratorMatrix, rank_f2


def random_full_rank(rng: np.random.Generator, n: int, k: int) -> GeneratorMatrix:
    while True:
        rows = rng.integers(0, 2, size=(n, k), dtype=np.uint8)
        if rank_f2(rows) == k:
            return GeneratorMatrix(rows)


def naive_walsh(values: np.ndarray) -> np.ndarray:
    """O(4^m) double loop, the reference for the fast transform."""
    n = len(values)
    out = np.zeros(n)
    for s in range(n):
        for z in range(n):
            out[s] += values[z] * (-1) ** bin(s & z).count("1")
    return out


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
