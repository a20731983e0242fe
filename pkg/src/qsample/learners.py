"""Learner simulations: Bernstein-Vazirani from one quantum example, majority-vote
ERM on the hard PAC/agnostic distributions, and PGM identification experiments.

Every trial draws from its own generator derived from ``(seed, ..., trial)``, so
results do not depend on how trials are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ensembles import EnsembleParams, ensemble_states, gram_matrix_direct, gram_profile, uniform_probabilities
from .errors import InvalidArgumentError, ResourceError
from .fourier import fwht
from .info import INFO_WEIGHT
from .pgm import PgmSampler, pgm_success_xor

BV_MAX_N = 16
PGM_MAX_K = 8
SEARCH_CEILING = 1_000_000
ERM_SETTINGS = ("pac", "agnostic")


@dataclass(frozen=True)
class LearnerTrialReport:
    trials: int
    successes: int
    parameters: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InvalidArgumentError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.successes <= self.trials:
            raise InvalidArgumentError("successes must lie in [0, trials]")

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def standard_error(self) -> float:
        p = self.success_rate
        return math.sqrt(p * (1 - p) / self.trials)

    def to_dict(self) -> dict:
        return {
            **self.parameters,
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
        }


def base_seed(rng: int | np.random.Generator) -> int:
    """An integer seed: taken as-is, or drawn once from a generator."""
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63))
    if isinstance(rng, (int, np.integer)) and rng >= 0:
        return int(rng)
    raise InvalidArgumentError(f"expected a non-negative integer seed or a Generator, got {rng!r}")


def trial_rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng([seed, *path])


# Bernstein-Vazirani


def bv_example_state(n: int, a: int) -> np.ndarray:
    """``2^{-n/2} sum_x |x, a.x>``; ``x`` in the low ``n`` bits, the label at bit ``n``."""
    _check_bv_size(n)
    if not 0 <= a < (1 << n):
        raise InvalidArgumentError(f"a must be an {n}-bit integer, got {a}")
    x = np.arange(1 << n, dtype=np.uint64)
    label = (np.bitwise_count(x & np.uint64(a)) & 1).astype(np.int64)
    state = np.zeros(1 << (n + 1))
    state[x.astype(np.int64) + (label << n)] = 1.0 / math.sqrt(1 << n)
    return state


def _check_bv_size(n: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"n must be positive, got {n}")
    if n > BV_MAX_N:
        raise ResourceError(f"n={n} exceeds the statevector cap of {BV_MAX_N}")


def bv_output_distribution(n: int, a: int) -> np.ndarray:
    """Measurement distribution after a Hadamard on each of the ``n + 1`` qubits."""
    amps = fwht(bv_example_state(n, a)) / math.sqrt(1 << (n + 1))
    return amps * amps


def bv_quantum_learner(n: int, a, rng: np.random.Generator) -> int | None:
    """Measure one transformed quantum example; return ``a`` on outcome ``(a, 1)``, else ``None``."""
    if not isinstance(a, (int, np.integer)):
        bits = np.asarray(a, dtype=np.int64)
        a = int(np.dot(bits, 1 << np.arange(bits.shape[0])))
    probs = bv_output_distribution(n, int(a))
    outcome = int(np.searchsorted(np.cumsum(probs), rng.random(), side="right"))
    outcome = min(outcome, probs.shape[0] - 1)
    if outcome >> n == 1:
        return outcome & ((1 << n) - 1)
    return None


def bv_trials(n: int, trials: int, rng: int | np.random.Generator) -> LearnerTrialReport:
    """Uniformly random hidden ``a`` per trial; success when the learner returns it."""
    _check_bv_size(n)
    seed = base_seed(rng)
    successes = 0
    for t in range(trials):
        g = trial_rng(seed, t)
        a = int(g.integers(0, 1 << n))
        successes += bv_quantum_learner(n, a, g) == a
    return LearnerTrialReport(trials, successes, {"n": n, "seed": seed})


# classical ERM


def _check_erm(setting: str, d: int, epsilon: float) -> None:
    if setting not in ERM_SETTINGS:
        raise InvalidArgumentError(f"setting must be one of {ERM_SETTINGS}, got {setting!r}")
    if d < 1:
        raise InvalidArgumentError(f"d must be positive, got {d}")
    if not 0 < epsilon < 0.25:
        raise InvalidArgumentError(f"epsilon must lie in (0, 1/4), got {epsilon}")


def sample_pac_examples(d: int, epsilon: float, a, T: int, rng: np.random.Generator):
    """``T`` labeled examples from ``D(s_0) = 1 - 4 eps``, ``D(s_i) = 4 eps / d``.

    Returns ``(points, labels)``; point 0 is ``s_0`` (label 0), point ``i`` has label ``a_i``.
    """
    _check_erm("pac", d, epsilon)
    a = np.asarray(a, dtype=np.int64)
    p = np.full(d + 1, INFO_WEIGHT * epsilon / d)
    p[0] = 1 - INFO_WEIGHT * epsilon
    points = rng.choice(d + 1, size=T, p=p)
    labels = np.concatenate([[0], a])[points]
    return points, labels


def sample_agnostic_examples(d: int, epsilon: float, a, T: int, rng: np.random.Generator):
    """``T`` examples from ``D_a(i, l) = (1 + (-1)^{a_i + l} 4 eps) / (2d)``; points are ``1..d``."""
    _check_erm("agnostic", d, epsilon)
    a = np.asarray(a, dtype=np.int64)
    idx = rng.integers(0, d, size=T)
    flip = rng.random(T) < 0.5 - 2 * epsilon
    return idx + 1, a[idx] ^ flip.astype(np.int64)


def erm_pac_learner(d: int, epsilon: float, points, labels) -> np.ndarray:
    """Majority label per point ``s_1..s_d``; unseen points and ties get label 0."""
    points = np.asarray(points, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if points.shape != labels.shape:
        raise InvalidArgumentError("points and labels must have the same length")
    ones = np.bincount(points, weights=labels, minlength=d + 1)[1:]
    seen = np.bincount(points, minlength=d + 1)[1:]
    return (2 * ones > seen).astype(np.int64)


def hypothesis_error(d: int, epsilon: float, a, hypothesis) -> float:
    """Error (PAC) or excess error (agnostic) ``d_H(a, l) 4 eps / d``."""
    return int(np.count_nonzero(np.asarray(a) != np.asarray(hypothesis))) * INFO_WEIGHT * epsilon / d


def erm_trial(setting: str, d: int, epsilon: float, T: int, rng: np.random.Generator) -> float:
    """One run with a uniformly random concept; returns the hypothesis error."""
    a = rng.integers(0, 2, size=d)
    sampler = sample_pac_examples if setting == "pac" else sample_agnostic_examples
    points, labels = sampler(d, epsilon, a, T, rng)
    return hypothesis_error(d, epsilon, a, erm_pac_learner(d, epsilon, points, labels))


def erm_success_rate(setting: str, d: int, epsilon: float, T: int, trials: int, seed: int) -> float:
    _check_erm(setting, d, epsilon)
    wins = sum(erm_trial(setting, d, epsilon, T, trial_rng(seed, T, t)) <= epsilon + 1e-12 for t in range(trials))
    return wins / trials


def empirical_sample_complexity(
    setting: str, d: int, epsilon: float, delta: float, trials: int, rng: int | np.random.Generator
) -> int:
    """Smallest ``T`` whose empirical success rate is at least ``1 - delta``.

    Doubling from ``T = 1`` brackets the answer, then binary search narrows it.
    Trial ``t`` at sample size ``T`` always uses the generator for ``(seed, T, t)``.
    """
    _check_erm(setting, d, epsilon)
    if not 0 < delta < 1:
        raise InvalidArgumentError(f"delta must lie in (0, 1), got {delta}")
    if not 1 <= trials <= 10_000:
        raise InvalidArgumentError(f"trials must lie in [1, 10^4], got {trials}")
    seed = base_seed(rng)

    def good(T: int) -> bool:
        return erm_success_rate(setting, d, epsilon, T, trials, seed) >= 1 - delta

    if good(0):
        return 0
    hi = 1
    while not good(hi):
        if hi >= SEARCH_CEILING:
            raise ResourceError(f"no T <= {SEARCH_CEILING} reached success rate {1 - delta}")
        hi = min(2 * hi, SEARCH_CEILING)
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if good(mid):
            hi = mid
        else:
            lo = mid
    return hi


# PGM as a learner


def pgm_identification_experiment(
    params: EnsembleParams, trials: int, rng: int | np.random.Generator
) -> LearnerTrialReport:
    """Hide a uniform ``x``, hand over ``T`` copies of its state, run the PGM."""
    if params.k > PGM_MAX_K:
        raise ResourceError(f"k={params.k} exceeds the dense PGM cap of {PGM_MAX_K}")
    if trials < 1:
        raise InvalidArgumentError(f"trials must be positive, got {trials}")
    N = 1 << params.k
    G = gram_matrix_direct(ensemble_states(params), uniform_probabilities(N), params.T)
    sampler = PgmSampler(G)
    seed = base_seed(rng)
    successes = 0
    for t in range(trials):
        g = trial_rng(seed, t)
        x = int(g.integers(0, N))
        successes += sampler.sample(x, g) == x
    analytic = pgm_success_xor(gram_profile(params)).success_probability
    parameters = {"kind": params.kind, "d": params.d, "k": params.k, "t": params.T, "seed": seed, "analytic": analytic}
    return LearnerTrialReport(trials, successes, parameters)
