"""Pretty Good Measurement success probabilities and outcome sampling.

For an ensemble ``{(p_i, |psi_i>)}`` with weighted Gram matrix
``G(i, j) = sqrt(p_i p_j) <psi_i|psi_j>``, the PGM succeeds with probability
``sum_i sqrt(G)(i, i)^2`` and, given state ``i``, reports ``j`` with
probability ``sqrt(G)(j, i)^2 / p_i``.

When ``G(x, y) = g(x xor y) / 2^k`` the Walsh-Hadamard basis diagonalizes
``G``; its eigenvalues are the Fourier coefficients of ``g`` and no ``2^k x 2^k``
matrix is needed (:func:`pgm_success_xor`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import QuantumExampleState, _state_matrix, check_probabilities, gram_matrix_direct
from .errors import InvalidArgumentError, NotPSDError
from .fourier import BooleanFunction, fourier_coefficients
from .spectral import PSD_TOL, ZERO_REL, psd_inv_sqrt, psd_sqrt

FOURIER_NEG_TOL = 1e-10


@dataclass(frozen=True)
class PgmResult:
    success_probability: float
    diagonal_of_sqrt: np.ndarray
    method: str


def pgm_success_gram(G: np.ndarray, tol: float = PSD_TOL) -> PgmResult:
    root = psd_sqrt(G, tol)
    diag = np.diag(root).copy()
    return PgmResult(float(diag @ diag), diag, "dense")


def pgm_success_generic(states, probabilities, T: int = 1, tol: float = PSD_TOL) -> PgmResult:
    return pgm_success_gram(gram_matrix_direct(states, probabilities, T), tol)


def xor_eigenvalues(g: BooleanFunction) -> np.ndarray:
    """Eigenvalues ``2^k g^(Q)`` of ``P(x, y) = g(x xor y)``, indexed by ``Q``."""
    return fourier_coefficients(g).coefficients * (1 << g.m)


def _clamped_spectrum(g: BooleanFunction) -> np.ndarray:
    coeffs = fourier_coefficients(g).coefficients
    low = float(coeffs.min())
    if low < -FOURIER_NEG_TOL:
        raise NotPSDError(low, FOURIER_NEG_TOL)
    top = float(coeffs.max(initial=0.0))
    return np.where(coeffs <= ZERO_REL * top, 0.0, coeffs)


def xor_sqrt_diagonal(g: BooleanFunction) -> float:
    """``sqrt(A)(x, x) = 2^{-k/2} sum_Q sqrt(g^(Q))`` for ``A(x, y) = g(x xor y)``.

    The same value for every ``x``.
    """
    return float(np.sqrt(_clamped_spectrum(g)).sum() / math.sqrt(1 << g.m))


def pgm_success_xor(g: BooleanFunction) -> PgmResult:
    """PGM on the uniform ensemble with Gram matrix ``g(x xor y) / 2^k``.

    ``g(0)`` must be 1 (unit-norm states).
    """
    if abs(g.values[0] - 1.0) > 1e-9:
        raise InvalidArgumentError(f"g(0) must be 1 for unit-norm states, got {g.values[0]}")
    N = 1 << g.m
    total = float(np.sqrt(_clamped_spectrum(g)).sum())
    diag = np.full(N, total / N)
    return PgmResult(total * total / N, diag, "fourier")


def helstrom_two_state(p0: float, psi0, psi1) -> float:
    """Optimal probability of telling two pure states apart.

    ``1/2 + 1/2 sqrt(1 - 4 p0 (1 - p0) |<psi0|psi1>|^2)``; with ``p0 = 1/2`` this is
    the familiar ``1/2 + 1/2 sqrt(1 - |<psi0|psi1>|^2)``.
    """
    if not 0.0 <= p0 <= 1.0:
        raise InvalidArgumentError(f"p0 must lie in [0, 1], got {p0}")
    a = np.asarray(getattr(psi0, "amplitudes", psi0), dtype=float)
    b = np.asarray(getattr(psi1, "amplitudes", psi1), dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError("states have different dimensions")
    for v in (a, b):
        if abs(float(v @ v) - 1.0) > 1e-10:
            raise InvalidArgumentError("states must have unit norm")
    c = float(a @ b)
    return helstrom_from_overlap(p0, c)


def helstrom_from_overlap(p0: float, overlap: float) -> float:
    inside = max(0.0, 1.0 - 4.0 * p0 * (1.0 - p0) * overlap * overlap)
    return 0.5 + 0.5 * math.sqrt(inside)


def pgm_vectors(states, probabilities, tol: float = PSD_TOL) -> np.ndarray:
    """Measurement vectors ``nu_i = rho^{-1/2} sqrt(p_i) psi_i`` as rows (single copy)."""
    psi = _state_matrix(states)
    p = check_probabilities(probabilities, psi.shape[0])
    weighted = psi * np.sqrt(p)[:, None]
    rho = weighted.T @ weighted
    return weighted @ psd_inv_sqrt(rho, tol)


def outcome_distributions(G: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """``dist[i, j]`` = probability that the PGM reports ``j`` when given state ``i``."""
    G = np.asarray(G, dtype=float)
    root = psd_sqrt(G, tol)
    p = np.diag(G)
    with np.errstate(divide="ignore", invalid="ignore"):
        dist = np.where(p[:, None] > 0, root.T**2 / p[:, None], 0.0)
    return dist


def _normalized(row: np.ndarray) -> np.ndarray:
    total = row.sum()
    if abs(total - 1.0) > 1e-10:
        raise NotPSDError(total - 1.0, 1e-10)
    return row / total


def sample_pgm_outcome(
    states, probabilities, true_index: int, rng: np.random.Generator, T: int = 1
) -> int:
    """Draw the PGM outcome for ``T`` copies of ``states[true_index]``."""
    G = gram_matrix_direct(states, probabilities, T)
    if not 0 <= true_index < G.shape[0]:
        raise InvalidArgumentError(f"true_index {true_index} out of range")
    row = _normalized(outcome_distributions(G)[true_index])
    return int(rng.choice(G.shape[0], p=row))


class PgmSampler:
    """Reusable outcome sampler: one PSD square root, many draws."""

    def __init__(self, G: np.ndarray, tol: float = PSD_TOL):
        dist = outcome_distributions(G, tol)
        for row in dist:
            _normalized(row)
        self._cdf = np.cumsum(dist, axis=1)
        self._cdf[:, -1] = 1.0
        self.size = dist.shape[0]

    def sample(self, true_index: int, rng: np.random.Generator) -> int:
        return int(np.searchsorted(self._cdf[true_index], rng.random(), side="right"))


def is_orthogonal_ensemble(states: list[QuantumExampleState]) -> bool:
    psi = _state_matrix(states)
    overlaps = psi @ psi.T
    return bool(np.allclose(overlaps, np.eye(len(states)), atol=1e-12))
