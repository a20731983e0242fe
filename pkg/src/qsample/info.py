"""Entropy and per-example information quantities.

These use the lighter hard distributions (weights ``4 eps`` instead of
``20 eps``): PAC puts ``1 - 4 eps`` on a heavy point ``s_0`` and ``4 eps / d`` on
each of ``s_1..s_d``; agnostic uses ``D_a(i, l) = (1 + (-1)^{a_i + l} 4 eps) / (2d)``.

Register layouts:

* PAC: ``2d + 1`` basis states, index 0 is ``(s_0, 0)`` and ``1 + 2(i - 1) + b`` is ``(s_i, b)``.
* agnostic: ``2d`` basis states, index ``2i + l`` is ``(i, l)`` for ``i`` in ``0..d-1``.

Entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import binary_entropy
from .errors import InvalidArgumentError
from .spectral import PSD_TOL, eigvalsh

INFO_WEIGHT = 4.0
TRACE_TOL = 1e-10
ENTROPY_CLAMP = 1e-14
BRUTE_FORCE_MAX_D = 12
SETTINGS = ("pac", "agnostic")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Real symmetric PSD matrix with unit trace."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        rho = np.array(self.entries, dtype=float)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidArgumentError(f"density matrix must be square, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.T), initial=0.0) > 1e-12:
            raise InvalidArgumentError("density matrix must be symmetric")
        if abs(np.trace(rho) - 1.0) > TRACE_TOL:
            raise InvalidArgumentError(f"density matrix has trace {np.trace(rho)!r}, expected 1")
        rho = (rho + rho.T) / 2
        w = eigvalsh(rho)
        if w.size and w[0] < -PSD_TOL:
            raise InvalidArgumentError(f"density matrix has eigenvalue {w[0]!r} < -{PSD_TOL}")
        rho.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "eigenvalues", w)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_pure(cls, psi) -> DensityMatrix:
        v = np.asarray(psi, dtype=float)
        return cls(np.outer(v, v))


def _as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def von_neumann_entropy(rho) -> float:
    """``-Tr(rho log2 rho)`` from the eigenvalues; those below ``1e-14`` count as zero."""
    w = _as_density(rho).eigenvalues
    w = w[w > ENTROPY_CLAMP]
    return float(-(w * np.log2(w)).sum())


def _check_eps(epsilon: float) -> None:
    if not 0.0 < epsilon < 0.25:
        raise InvalidArgumentError(f"epsilon must lie in (0, 1/4), got {epsilon}")


def _check_d(d: int) -> None:
    if d < 1:
        raise InvalidArgumentError(f"d must be positive, got {d}")


def _check_setting(setting: str) -> None:
    if setting not in SETTINGS:
        raise InvalidArgumentError(f"setting must be one of {SETTINGS}, got {setting!r}")


def pac_example_vector(d: int, epsilon: float, a) -> np.ndarray:
    """Amplitudes of ``sum_i sqrt(D(s_i)) |s_i, c_a(s_i)>`` with ``c_a(s_0) = 0``."""
    a = np.asarray(a, dtype=np.int64)
    psi = np.zeros(2 * d + 1)
    psi[0] = math.sqrt(1 - INFO_WEIGHT * epsilon)
    psi[1 + 2 * np.arange(d) + a] = math.sqrt(INFO_WEIGHT * epsilon / d)
    return psi


def agnostic_example_vector(d: int, epsilon: float, a) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    psi = np.empty(2 * d)
    base = 2 * np.arange(d)
    psi[base + a] = math.sqrt((1 + INFO_WEIGHT * epsilon) / (2 * d))
    psi[base + 1 - a] = math.sqrt((1 - INFO_WEIGHT * epsilon) / (2 * d))
    return psi


def reduced_pac_example_density(d: int, epsilon: float) -> DensityMatrix:
    """Average of ``|psi_a><psi_a|`` over uniform ``a`` in ``{0,1}^d``, in closed form."""
    _check_d(d)
    _check_eps(epsilon)
    heavy = 1 - INFO_WEIGHT * epsilon
    light = INFO_WEIGHT * epsilon / d
    rho = np.full((2 * d + 1, 2 * d + 1), light / 4)
    cross = math.sqrt(heavy * light) / 2
    rho[0, :] = cross
    rho[:, 0] = cross
    rho[0, 0] = heavy
    for i in range(d):
        block = slice(1 + 2 * i, 3 + 2 * i)
        rho[block, block] = np.array([[light / 2, 0.0], [0.0, light / 2]])
    return DensityMatrix(rho)


def reduced_agnostic_example_density(d: int, epsilon: float) -> DensityMatrix:
    _check_d(d)
    _check_eps(epsilon)
    x = INFO_WEIGHT * epsilon
    mean_amp = (math.sqrt(1 + x) + math.sqrt(1 - x)) / 2
    rho = np.full((2 * d, 2 * d), mean_amp**2 / (2 * d))
    same_point = np.array([[1.0, math.sqrt(1 - x * x)], [math.sqrt(1 - x * x), 1.0]]) / (2 * d)
    for i in range(d):
        rho[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = same_point
    return DensityMatrix(rho)


def _all_concepts(d: int) -> np.ndarray:
    if d > BRUTE_FORCE_MAX_D:
        raise InvalidArgumentError(f"brute force enumerates 2^d concepts; d must be at most {BRUTE_FORCE_MAX_D}")
    idx = np.arange(1 << d)
    return ((idx[:, None] >> np.arange(d)) & 1).astype(np.int64)


def reduced_density_brute_force(setting: str, d: int, epsilon: float) -> DensityMatrix:
    """Explicit average of ``|psi_a><psi_a|`` over all ``2^d`` concepts."""
    _check_setting(setting)
    _check_d(d)
    _check_eps(epsilon)
    make = pac_example_vector if setting == "pac" else agnostic_example_vector
    psi = np.vstack([make(d, epsilon, a) for a in _all_concepts(d)])
    return DensityMatrix(psi.T @ psi / psi.shape[0])


def uniform_overlap(d: int, epsilon: float) -> float:
    """``<psi|rho|psi>`` for the agnostic density and the uniform vector: ``((sqrt(1+4e)+sqrt(1-4e))/2)^2``."""
    _check_eps(epsilon)
    x = INFO_WEIGHT * epsilon
    return ((math.sqrt(1 + x) + math.sqrt(1 - x)) / 2) ** 2


def classical_per_example_info(setting: str, epsilon: float) -> float:
    """``I(A : B_1)`` in bits: ``4 eps`` (pac) or ``1 - H(1/2 + 2 eps)`` (agnostic)."""
    _check_setting(setting)
    _check_eps(epsilon)
    if setting == "pac":
        return INFO_WEIGHT * epsilon
    return 1.0 - binary_entropy(0.5 + 2 * epsilon)


def _example_distribution(setting: str, d: int, epsilon: float, a: np.ndarray) -> np.ndarray:
    if setting == "pac":
        p = np.zeros(2 * d + 1)
        p[0] = 1 - INFO_WEIGHT * epsilon
        p[1 + 2 * np.arange(d) + a] = INFO_WEIGHT * epsilon / d
        return p
    p = np.empty(2 * d)
    base = 2 * np.arange(d)
    p[base + a] = (1 + INFO_WEIGHT * epsilon) / (2 * d)
    p[base + 1 - a] = (1 - INFO_WEIGHT * epsilon) / (2 * d)
    return p


def mutual_information(joint: np.ndarray) -> float:
    """``I(X : Y)`` in bits for a joint probability table ``joint[x, y]``."""
    joint = np.asarray(joint, dtype=float)
    px = joint.sum(axis=1, keepdims=True)
    py = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    return float((joint[nz] * np.log2(joint[nz] / (px @ py)[nz])).sum())


def classical_info_brute_force(setting: str, d: int, epsilon: float) -> float:
    """Mutual information of the explicit joint table of (concept, one example)."""
    _check_setting(setting)
    _check_d(d)
    _check_eps(epsilon)
    concepts = _all_concepts(d)
    joint = np.vstack([_example_distribution(setting, d, epsilon, a) for a in concepts]) / len(concepts)
    return mutual_information(joint)


def quantum_per_example_info_bound(setting: str, d: int, epsilon: float, strict: bool = True) -> float:
    """``H(4 eps) + 4 eps log2(2d)`` (pac) or ``H(4 eps^2) + 4 eps^2 log2(2d)`` (agnostic).

    The entropy split behind it needs the light weight to be at most 1/2;
    ``strict=False`` evaluates the formula past that point.
    """
    _check_setting(setting)
    _check_d(d)
    _check_eps(epsilon)
    w = INFO_WEIGHT * epsilon if setting == "pac" else INFO_WEIGHT * epsilon**2
    if strict and w > 0.5:
        raise InvalidArgumentError(f"the entropy split needs weight <= 1/2, got {w}")
    return binary_entropy(w) + w * math.log2(2 * d)


def vc_independent_inner_product(setting: str, epsilon: float, T: int) -> float:
    """``(1 - eps)^T`` (pac) or ``(1 - eps^2)^{T/2}`` (agnostic)."""
    _check_setting(setting)
    _check_eps(epsilon)
    if T < 0:
        raise InvalidArgumentError(f"T must be non-negative, got {T}")
    if setting == "pac":
        return (1 - epsilon) ** T
    return (1 - epsilon**2) ** (T / 2)


def vc_independent_states(setting: str, epsilon: float) -> tuple[np.ndarray, np.ndarray]:
    """The two single-copy states whose overlap drives the ``log(1/delta)`` terms.

    pac: ``sqrt(1-eps)|x1,0> + sqrt(eps)|x2,c_i(x2)>`` on basis
    ``(x1,0), (x1,1), (x2,0), (x2,1)``; agnostic:
    ``sqrt((1 +- eps)/2)|x,c1(x)> + sqrt((1 -+ eps)/2)|x,c2(x)>`` on basis ``(x,0), (x,1)``.
    """
    _check_setting(setting)
    _check_eps(epsilon)
    if setting == "pac":
        first = np.array([math.sqrt(1 - epsilon), 0.0, math.sqrt(epsilon), 0.0])
        second = np.array([math.sqrt(1 - epsilon), 0.0, 0.0, math.sqrt(epsilon)])
        return first, second
    plus = np.array([math.sqrt((1 + epsilon) / 2), math.sqrt((1 - epsilon) / 2)])
    minus = np.array([math.sqrt((1 - epsilon) / 2), math.sqrt((1 + epsilon) / 2)])
    return plus, minus


def partial_trace(rho, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite matrix; ``keep`` is 0 (A) or 1 (B)."""
    rho = np.asarray(getattr(rho, "entries", rho), dtype=float)
    dA, dB = dims
    if dA < 1 or dB < 1 or dA * dB != rho.shape[0]:
        raise InvalidArgumentError(f"dimension {rho.shape[0]} does not factor as {dA} x {dB}")
    t = rho.reshape(dA, dB, dA, dB)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    if keep == 1:
        return np.einsum("ijil->jl", t)
    raise InvalidArgumentError(f"keep must be 0 or 1, got {keep}")


def subadditivity_check(rho_ab, dims: tuple[int, int], tol: float = 1e-9) -> bool:
    """``S(AB) <= S(A) + S(B)`` up to ``tol``."""
    rho_ab = _as_density(rho_ab)
    s_a = von_neumann_entropy(partial_trace(rho_ab, dims, 0))
    s_b = von_neumann_entropy(partial_trace(rho_ab, dims, 1))
    return von_neumann_entropy(rho_ab) <= s_a + s_b + tol
