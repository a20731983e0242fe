"""Fourier analysis on the Boolean cube.

Bit convention: bit ``i`` of a point ``z`` in ``{0,1}^m`` is the ``i``-th least
significant bit of its integer index. The same convention is used for Fourier
sets ``S`` and for messages/codewords in :mod:`qsample.codes`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import InvalidArgumentError, ResourceError

if TYPE_CHECKING:
    from .codes import GeneratorMatrix

MAX_ARITY = 26


def _check_arity(m: int) -> None:
    if m < 0:
        raise InvalidArgumentError(f"arity must be non-negative, got {m}")
    if m > MAX_ARITY:
        raise ResourceError(f"arity {m} exceeds the cap of {MAX_ARITY} bits")


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class BooleanFunction:
    """Real-valued table ``f: {0,1}^m -> R`` indexed by little-endian integers."""

    m: int
    values: np.ndarray

    def __post_init__(self) -> None:
        _check_arity(self.m)
        values = _frozen(self.values)
        if values.shape != (1 << self.m,):
            raise InvalidArgumentError(
                f"expected {1 << self.m} values for arity {self.m}, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidArgumentError("function values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Sequence[float] | np.ndarray) -> BooleanFunction:
        values = np.asarray(values, dtype=float)
        return cls(_log2_length(values.shape[0]), values)

    def __call__(self, z: int) -> float:
        return float(self.values[z])


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients ``f^(S) = E_z[f(z) (-1)^{S.z}]`` indexed like :class:`BooleanFunction`."""

    m: int
    coefficients: np.ndarray

    def __post_init__(self) -> None:
        _check_arity(self.m)
        coefficients = _frozen(self.coefficients)
        if coefficients.shape != (1 << self.m,):
            raise InvalidArgumentError(
                f"expected {1 << self.m} coefficients for arity {self.m}, got shape {coefficients.shape}"
            )
        object.__setattr__(self, "coefficients", coefficients)


def _log2_length(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise InvalidArgumentError(f"length must be a power of two, got {n}")
    m = n.bit_length() - 1
    _check_arity(m)
    return m


def popcount(x: np.ndarray | int) -> np.ndarray | int:
    """Hamming weight of non-negative integers (scalar or array)."""
    if isinstance(x, (int, np.integer)):
        return int(x).bit_count()
    return np.bitwise_count(np.asarray(x, dtype=np.uint64)).astype(np.int64)


def fwht(values: Sequence[float] | np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform.

    ``out[S] = sum_z values[z] * (-1)^{popcount(S & z)}``. Applying it twice
    multiplies by the length.
    """
    out = np.array(values, dtype=float)
    if out.ndim != 1:
        raise InvalidArgumentError("fwht expects a one-dimensional vector")
    n = out.shape[0]
    _log2_length(n)
    h = 1
    while h < n:
        blocks = out.reshape(-1, 2, h)
        lo = blocks[:, 0, :].copy()
        hi = blocks[:, 1, :]
        blocks[:, 0, :] += hi
        blocks[:, 1, :] = lo - hi
        h *= 2
    return out


def fourier_coefficients(f: BooleanFunction) -> FourierSpectrum:
    return FourierSpectrum(f.m, fwht(f.values) / (1 << f.m))


def inverse_fourier(spec: FourierSpectrum) -> BooleanFunction:
    """Rebuild the full function table from its spectrum."""
    return BooleanFunction(spec.m, fwht(spec.coefficients))


def _bits_to_index(z: int | Sequence[int] | np.ndarray, m: int) -> int:
    if isinstance(z, (int, np.integer)):
        z = int(z)
        if z < 0 or z >> m:
            raise InvalidArgumentError(f"index {z} out of range for {m} bits")
        return z
    bits = np.asarray(z, dtype=np.int64).ravel()
    if bits.shape[0] != m:
        raise InvalidArgumentError(f"expected {m} bits, got {bits.shape[0]}")
    if np.any((bits != 0) & (bits != 1)):
        raise InvalidArgumentError("bit vector entries must be 0 or 1")
    return int(np.dot(bits, 1 << np.arange(m, dtype=np.int64)))


def evaluate_from_spectrum(spec: FourierSpectrum, z: int | Sequence[int] | np.ndarray) -> float:
    """Evaluate ``sum_S f^(S) (-1)^{S.z}`` at a single point."""
    idx = _bits_to_index(z, spec.m)
    signs = 1 - 2 * (popcount(np.arange(1 << spec.m, dtype=np.uint64) & np.uint64(idx)) & 1)
    return float(np.dot(spec.coefficients, signs))


def hardness_profile(beta: float, m: int, T: int) -> BooleanFunction:
    """``f(z) = (1 - beta |z| / m)^T``.

    ``T = 0`` is accepted and gives the constant function 1.
    """
    if not 0.0 < beta <= 1.0:
        raise InvalidArgumentError(f"beta must lie in (0, 1], got {beta}")
    if m < 1:
        raise InvalidArgumentError(f"m must be positive, got {m}")
    if T < 0:
        raise InvalidArgumentError(f"T must be non-negative, got {T}")
    _check_arity(m)
    weights = popcount(np.arange(1 << m, dtype=np.uint64))
    base = 1.0 - beta * np.arange(m + 1) / m
    return BooleanFunction(m, (base**T)[weights])


def compose_with_matrix(f: BooleanFunction, M: GeneratorMatrix) -> BooleanFunction:
    """``(f o M)(x) = f(Mx)`` over F2; ``M`` must have full column rank."""
    from .codes import codeword_indices, rank_f2

    if M.n != f.m:
        raise InvalidArgumentError(f"matrix has {M.n} rows but f has arity {f.m}")
    if rank_f2(M.rows) != M.k:
        raise InvalidArgumentError("matrix must have full column rank")
    return BooleanFunction(M.k, f.values[codeword_indices(M)])


def transpose_images(M: GeneratorMatrix) -> np.ndarray:
    """``Q = M^t S`` for every ``S`` in ``{0,1}^n``, as integer indices."""
    S = np.arange(1 << M.n, dtype=np.uint64)
    Q = np.zeros(S.shape[0], dtype=np.int64)
    for j, col in enumerate(M.column_ints()):
        Q |= (popcount(S & np.uint64(col)) & 1) << j
    return Q


def compose_spectrum(spec: FourierSpectrum, M: GeneratorMatrix) -> FourierSpectrum:
    """Spectrum of ``f o M`` via preimage sums ``sum_{S: M^t S = Q} f^(S)``."""
    if M.n != spec.m:
        raise InvalidArgumentError(f"matrix has {M.n} rows but spectrum has arity {spec.m}")
    coeffs = np.bincount(transpose_images(M), weights=spec.coefficients, minlength=1 << M.k)
    return FourierSpectrum(M.k, coeffs)


def spectra_close(a: np.ndarray, b: np.ndarray, atol: float = 1e-10) -> bool:
    """Absolute comparison scaled by the larger max-norm of the two vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return bool(np.all(np.abs(a - b) <= atol * scale))
