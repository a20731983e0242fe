"""Closed-form bound evaluators and exact-versus-bound reports.

Exponential bounds use the natural base; entropies are in bits.

Each bound carries its admissible range of ``T``. With ``strict=True`` (the
default) leaving that range raises :class:`InvalidArgumentError` naming the
constraint; ``strict=False`` evaluates the formula anyway, which is how sweeps
report points outside the range without dropping them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError

E = math.e
E3 = math.e**3
SATISFIED_TOL = 1e-12

# pinned remainder constants for the binary-entropy expansions, verified on
# the grids in the test-suite
ENTROPY_GAP_QUARTIC = 3.0
ENTROPY_LOG_FACTOR = 2.0


@dataclass(frozen=True)
class BoundReport:
    """A bound value, optionally paired with the exact quantity it should dominate."""

    bound_value: float
    exact_value: float | None = None
    parameters: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool | None:
        if self.exact_value is None:
            return None
        return bool(self.exact_value <= self.bound_value + SATISFIED_TOL)

    def to_dict(self) -> dict:
        return {
            **self.parameters,
            "exact_value": self.exact_value,
            "bound_value": self.bound_value,
            "satisfied": self.satisfied,
        }


def _exp(x: float) -> float:
    # vacuous bounds far outside the admissible range overflow; report them as inf
    return math.exp(x) if x < 709.0 else math.inf


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidArgumentError(message)


def _check_beta(beta: float) -> None:
    _require(0.0 < beta <= 1.0, f"beta must lie in (0, 1], got {beta}")


def _check_T_range(T: float, upper: float, label: str, strict: bool) -> None:
    _require(T >= 0, f"T must be non-negative, got {T}")
    if strict:
        _require(T >= 1, f"T must be at least 1, got {T}")
        _require(T <= upper, f"T={T} exceeds {label}={upper:.6g}")


def fourier_t_max(m: int, beta: float) -> float:
    return m / (E3 * beta)


def fourier_coeff_bound(q: int, m: int, T: float, beta: float, strict: bool = True) -> float:
    """``4e (1 - beta/2)^T (T beta / m)^q exp(22 T^2 beta^2 / m)``.

    Dominates every coefficient ``f^(S)`` with ``|S| = q`` of
    ``f(z) = (1 - beta |z| / m)^T`` for ``1 <= T <= m / (e^3 beta)``, ``m >= 10``.
    """
    _check_beta(beta)
    _require(0 <= q <= m, f"q must lie in [0, m], got q={q}, m={m}")
    if strict:
        _require(m >= 10, f"m must be at least 10, got {m}")
    _check_T_range(T, fourier_t_max(m, beta), "m/(e^3 beta)", strict)
    return 4 * E * (1 - beta / 2) ** T * (T * beta / m) ** q * _exp(22 * T * T * beta * beta / m)


def sqrt_diag_bound(m: int, k: int, T: float, beta: float, strict: bool = True) -> float:
    """``(2 sqrt(e) / 2^{k/2}) (1 - beta/2)^{T/2} exp(11 T^2 beta^2 / m + sqrt(T m beta))``."""
    _check_beta(beta)
    _require(0 <= k <= m, f"k must lie in [0, m], got k={k}, m={m}")
    if strict:
        _require(m >= 10, f"m must be at least 10, got {m}")
    _check_T_range(T, fourier_t_max(m, beta), "m/(e^3 beta)", strict)
    return (
        2 * math.sqrt(E) / 2 ** (k / 2)
        * (1 - beta / 2) ** (T / 2)
        * _exp(11 * T * T * beta * beta / m + math.sqrt(T * m * beta))
    )


def pgm_pac_bound(d: int, k: int, T: float, epsilon: float, strict: bool = True) -> float:
    """``(4e / 2^{k + T eps}) exp(8800 T^2 eps^2 / d + 4 sqrt(5 T d eps))``, valid for ``T <= d/(20 e^3 eps)``."""
    _require(0 < epsilon < 1 / 20, f"epsilon must lie in (0, 1/20), got {epsilon}")
    _check_T_range(T, d / (20 * E3 * epsilon), "d/(20 e^3 eps)", strict)
    return 4 * E * _exp(
        -(k + T * epsilon) * math.log(2)
        + 8800 * T * T * epsilon**2 / d
        + 4 * math.sqrt(5 * T * d * epsilon)
    )


def pgm_agnostic_bound(d: int, k: int, T: float, epsilon: float, strict: bool = True) -> float:
    """``4e exp(-k ln 2 - 25 T eps^2) exp(220000 T^2 eps^4 / d + 20 sqrt(T d eps^2))``.

    Valid for ``T <= d / (100 e^3 eps^2)``.
    """
    _require(0 < epsilon < 1 / 10, f"epsilon must lie in (0, 1/10), got {epsilon}")
    _check_T_range(T, d / (100 * E3 * epsilon**2), "d/(100 e^3 eps^2)", strict)
    return 4 * E * _exp(
        -k * math.log(2)
        - 25 * T * epsilon**2
        + 220000 * T * T * epsilon**4 / d
        + 20 * math.sqrt(T * d * epsilon**2)
    )


def noisy_beta(epsilon: float, eta: float) -> float:
    """Effective ``beta = 20 eps (1 - 2 sqrt(eta (1 - eta)))`` of the noisy PAC ensemble."""
    _require(0.0 <= eta < 0.5, f"eta must lie in [0, 1/2), got {eta}")
    return 20 * epsilon * (1 - 2 * math.sqrt(eta * (1 - eta)))


def pgm_noisy_bound(d: int, k: int, T: float, epsilon: float, eta: float, strict: bool = True) -> float:
    """Square of :func:`sqrt_diag_bound` at ``beta = beta_eff`` (``P = sqrt(A)(x, x)^2``).

    ``(4e / 2^k) (1 - beta/2)^T exp(22 T^2 beta^2 / d + 2 sqrt(T d beta))``.
    """
    _require(0 < epsilon < 1 / 20, f"epsilon must lie in (0, 1/20), got {epsilon}")
    beta = noisy_beta(epsilon, eta)
    _check_T_range(T, d / (E3 * beta), "d/(e^3 beta_eff)", strict)
    return 4 * E * _exp(
        -k * math.log(2)
        + T * math.log1p(-beta / 2)
        + 22 * T * T * beta * beta / d
        + 2 * math.sqrt(T * d * beta)
    )


def codeword_bound(n: int, k: int, T: float, strict: bool = True) -> float:
    """``(4e / 2^{k+T}) exp(22 T^2 / n + 2 sqrt(T n))`` for ``T <= n``."""
    _require(n >= 1, f"n must be positive, got {n}")
    _check_T_range(T, n, "n", strict)
    return 4 * E * _exp(-(k + T) * math.log(2) + 22 * T * T / n + 2 * math.sqrt(T * n))


def _check_delta(delta: float) -> None:
    _require(0 < delta < 1, f"delta must lie in (0, 1), got {delta}")


def sample_bounds(setting: str, d: int, epsilon: float, delta: float, eta: float | None = None) -> float:
    """Reference-line sample complexity with every implied constant set to 1, log base 2.

    pac: ``d/eps + log(1/delta)/eps``; agnostic: the same with ``eps^2``;
    pac_noisy: both terms divided by ``(1 - 2 eta)^2``.
    """
    _require(d >= 1, f"d must be positive, got {d}")
    _require(0 < epsilon < 1, f"epsilon must lie in (0, 1), got {epsilon}")
    _check_delta(delta)
    log_term = math.log2(1 / delta)
    if setting == "pac":
        return d / epsilon + log_term / epsilon
    if setting == "agnostic":
        return d / epsilon**2 + log_term / epsilon**2
    if setting == "pac_noisy":
        _require(eta is not None, "pac_noisy needs eta")
        return sample_bound_noisy(d, epsilon, eta, delta)
    raise InvalidArgumentError(f"unknown setting {setting!r}")


def sample_bound_noisy(d: int, epsilon: float, eta: float, delta: float) -> float:
    _require(0.0 <= eta < 0.5, f"eta must lie in [0, 1/2), got {eta}")
    _require(0 < epsilon < 1, f"epsilon must lie in (0, 1), got {epsilon}")
    _check_delta(delta)
    scale = (1 - 2 * eta) ** 2 * epsilon
    return d / scale + math.log2(1 / delta) / scale


def minimax_agnostic_bound(d: int, epsilon: float) -> float:
    """``(d / eps^2) (1/62 - log2(2d + 2) / (4d))``; negative for small ``d``."""
    _require(d >= 1, f"d must be positive, got {d}")
    _require(0 < epsilon <= 0.1, f"epsilon must lie in (0, 1/10], got {epsilon}")
    return d / epsilon**2 * (1 / 62 - math.log2(2 * d + 2) / (4 * d))


def binary_entropy(p: float) -> float:
    """``H(p)`` in bits, with ``H(0) = H(1) = 0``."""
    _require(0.0 <= p <= 1.0, f"p must lie in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy(probabilities: Sequence[float] | np.ndarray) -> float:
    """Shannon entropy in bits; zero entries contribute nothing."""
    p = np.asarray(probabilities, dtype=float)
    _require(p.ndim == 1 and p.size > 0, "expected a non-empty probability vector")
    _require(bool(np.all(p >= 0)), "probabilities must be non-negative")
    _require(abs(p.sum() - 1.0) <= 1e-10, f"probabilities sum to {p.sum()!r}, expected 1")
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def binomial_tail_bound(n: int, m: int) -> float:
    """``2^{n H(m/n)}``, an upper bound on ``sum_{i <= m} C(n, i)`` for ``m <= n/2``."""
    _require(n >= 1, f"n must be positive, got {n}")
    _require(0 <= m <= n / 2, f"m must lie in [0, n/2], got m={m}, n={n}")
    return 2.0 ** (n * binary_entropy(m / n))


def max_c_over_sqrt_t(c: float) -> float:
    """``max_{t in [1, c^2]} (c / sqrt(t))^t``.

    The unconstrained maximiser is ``t = c^2 / e`` with value ``e^{c^2 / (2e)}``;
    for ``c^2 < e`` it lies below 1 and the maximum is ``c`` at ``t = 1``.
    """
    _require(c >= 1, f"c must be at least 1, got {c}")
    if c * c < E:
        return float(c)
    return math.exp(c * c / (2 * E))


def entropy_gap_bound(epsilon: float) -> float:
    """Upper bound on ``1 - H(1/2 + eps)``: ``2 eps^2 / ln 2 + 3 eps^4``."""
    return 2 * epsilon**2 / math.log(2) + ENTROPY_GAP_QUARTIC * epsilon**4


def small_entropy_bound(epsilon: float) -> float:
    """Upper bound on ``H(eps)`` for ``eps`` in ``(0, 1/2]``: ``2 eps log2(1/eps)``."""
    _require(0 < epsilon <= 0.5, f"epsilon must lie in (0, 1/2], got {epsilon}")
    return ENTROPY_LOG_FACTOR * epsilon * math.log2(1 / epsilon)


def report(bound_value: float, exact_value: float | None = None, **parameters) -> BoundReport:
    return BoundReport(float(bound_value), None if exact_value is None else float(exact_value), parameters)
