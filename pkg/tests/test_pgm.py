from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_full_rank
from qsample.codes import GeneratorMatrix
from qsample.ensembles import (
    AgnosticEnsembleParams,
    CodewordEnsembleParams,
    NoisyPacEnsembleParams,
    PacEnsembleParams,
    ensemble_states,
    gram_matrix_direct,
    gram_profile,
    uniform_probabilities,
    with_T,
)
from qsample.errors import InvalidArgumentError, NotPSDError
from qsample.fourier import BooleanFunction
from qsample.pgm import (
    PgmSampler,
    helstrom_two_state,
    is_orthogonal_ensemble,
    outcome_distributions,
    pgm_success_generic,
    pgm_success_gram,
    pgm_success_xor,
    pgm_vectors,
    sample_pgm_outcome,
    xor_eigenvalues,
    xor_sqrt_diagonal,
)

PAIR = [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / math.sqrt(2)]


def random_unit(rng, dim):
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def test_orthogonal_and_single_state():
    basis = [np.eye(5)[i] for i in range(5)]
    assert pgm_success_generic(basis, uniform_probabilities(5)).success_probability == pytest.approx(1.0)
    assert pgm_success_generic([PAIR[1]], [1.0]).success_probability == pytest.approx(1.0)


def test_two_state_example():
    p = pgm_success_generic(PAIR, [0.5, 0.5]).success_probability
    assert p == pytest.approx((1 + math.sqrt(1 - 0.5)) / 2, abs=1e-12)
    assert p == pytest.approx(0.8535533906, abs=1e-10)
    assert helstrom_two_state(0.5, *PAIR) == pytest.approx(0.8535533906, abs=1e-10)


def test_helstrom_examples():
    assert helstrom_two_state(0.5, [1.0, 0.0], [0.0, 1.0]) == 1.0
    assert helstrom_two_state(0.5, PAIR[1], PAIR[1]) == pytest.approx(0.5)
    assert helstrom_two_state(0.8, PAIR[1], PAIR[1]) == pytest.approx(0.8)
    with pytest.raises(InvalidArgumentError):
        helstrom_two_state(0.5, [1.0, 1.0], [1.0, 0.0])


def test_helstrom_against_matrix_oracle(rng):
    # optimal success = 1/2 + 1/2 * trace norm of p0 P0 - p1 P1
    for _ in range(50):
        a, b = random_unit(rng, 4), random_unit(rng, 4)
        p0 = rng.uniform()
        M = p0 * np.outer(a, a) - (1 - p0) * np.outer(b, b)
        oracle = 0.5 + 0.5 * np.abs(np.linalg.eigvalsh(M)).sum()
        assert helstrom_two_state(p0, a, b) == pytest.approx(oracle, abs=1e-12)


def test_xor_special_profiles():
    k = 5
    delta = np.zeros(1 << k)
    delta[0] = 1.0
    assert pgm_success_xor(BooleanFunction(k, delta)).success_probability == pytest.approx(1.0, abs=1e-12)
    assert pgm_success_xor(BooleanFunction(k, np.ones(1 << k))).success_probability == pytest.approx(2**-k, abs=1e-15)
    with pytest.raises(InvalidArgumentError):
        pgm_success_xor(BooleanFunction(k, np.full(1 << k, 0.5)))


def test_xor_negative_spectrum_rejected():
    g = BooleanFunction(1, np.array([1.0, -1.5]))
    with pytest.raises(NotPSDError):
        xor_sqrt_diagonal(g)


def test_xor_eigenvalues_match_dense(rng):
    for k in range(1, 7):
        g = BooleanFunction(k, rng.uniform(-1, 1, 1 << k))
        x = np.arange(1 << k)
        P = g.values[x[:, None] ^ x[None, :]]
        assert np.allclose(np.sort(xor_eigenvalues(g)), np.linalg.eigvalsh(P), atol=1e-10)


def test_pac_dense_equals_fourier(rng):
    code = random_full_rank(rng, 16, 4)
    params = PacEnsembleParams(16, 0.04, 10, code)
    dense = pgm_success_generic(ensemble_states(params), uniform_probabilities(16), 10).success_probability
    assert pgm_success_xor(gram_profile(params)).success_probability == pytest.approx(dense, abs=1e-9)


@pytest.mark.parametrize("k", [2, 5, 8])
def test_dense_fourier_all_kinds(rng, k):
    code = random_full_rank(rng, 16, k)
    for base in (
        PacEnsembleParams(16, 0.02, 1, code),
        AgnosticEnsembleParams(16, 0.05, 1, code),
        NoisyPacEnsembleParams(16, 0.04, 1, code, 0.1),
        CodewordEnsembleParams(code, 1),
    ):
        for T in (1, 9, 40):
            params = with_T(base, T)
            G = gram_matrix_direct(ensemble_states(params), uniform_probabilities(1 << k), T)
            dense = pgm_success_gram(G)
            fourier = pgm_success_xor(gram_profile(params))
            assert abs(dense.success_probability - fourier.success_probability) <= 1e-9
            assert np.allclose(dense.diagonal_of_sqrt, fourier.diagonal_of_sqrt, atol=1e-9)


def test_povm_completeness(rng):
    for dim, count in ((3, 6), (6, 4), (8, 8)):
        states = [random_unit(rng, dim) for _ in range(count)]
        p = rng.dirichlet(np.ones(count))
        nu = pgm_vectors(states, p)
        total = nu.T @ nu
        psi = np.vstack(states)
        # projector onto the span of the states
        U, s, _ = np.linalg.svd(psi.T, full_matrices=False)
        U = U[:, s > 1e-10]
        assert np.allclose(total, U @ U.T, atol=1e-8)
        # success from measurement vectors equals the Gram formula
        direct = sum(p[i] * float(nu[i] @ states[i]) ** 2 for i in range(count))
        assert direct == pytest.approx(pgm_success_generic(states, p).success_probability, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_equiprobable_pair_equals_helstrom(seed):
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 6))
    a, b = random_unit(rng, dim), random_unit(rng, dim)
    pgm = pgm_success_generic([a, b], [0.5, 0.5]).success_probability
    assert abs(pgm - helstrom_two_state(0.5, a, b)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 0.99))
def test_barnum_knill_sandwich(seed, p0):
    rng = np.random.default_rng(seed)
    a, b = random_unit(rng, 3), random_unit(rng, 3)
    opt = helstrom_two_state(p0, a, b)
    pgm = pgm_success_generic([a, b], [p0, 1 - p0]).success_probability
    assert opt**2 - 1e-12 <= pgm <= opt + 1e-12


def test_monotone_in_T(rng):
    code = random_full_rank(rng, 16, 6)
    for base in (
        PacEnsembleParams(16, 0.04, 0, code),
        AgnosticEnsembleParams(16, 0.06, 0, code),
        NoisyPacEnsembleParams(16, 0.04, 0, code, 0.25),
        CodewordEnsembleParams(code, 0),
    ):
        values = [pgm_success_xor(gram_profile(with_T(base, T))).success_probability for T in range(0, 101)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert values[0] == pytest.approx(2**-6)


def test_outcome_distributions_are_stochastic(rng):
    code = random_full_rank(rng, 12, 3)
    params = PacEnsembleParams(12, 0.04, 5, code)
    G = gram_matrix_direct(ensemble_states(params), uniform_probabilities(8), 5)
    dist = outcome_distributions(G)
    assert np.all(dist >= 0)
    assert np.allclose(dist.sum(axis=1), 1.0, atol=1e-12)
    # averaged diagonal is the success probability
    assert np.mean(np.diag(dist)) == pytest.approx(pgm_success_gram(G).success_probability, abs=1e-12)


def test_sampling_orthogonal_and_single():
    rng = np.random.default_rng(3)
    basis = [np.eye(4)[i] for i in range(4)]
    assert is_orthogonal_ensemble(basis)
    for i in range(4):
        assert sample_pgm_outcome(basis, uniform_probabilities(4), i, rng) == i
    assert all(sample_pgm_outcome([PAIR[1]], [1.0], 0, rng) == 0 for _ in range(10))
    with pytest.raises(InvalidArgumentError):
        sample_pgm_outcome(basis, uniform_probabilities(4), 4, rng)


def test_sampling_frequency_matches_analytic():
    rng = np.random.default_rng(99)
    states = [PAIR[0], PAIR[1], np.array([0.0, 1.0])]
    probs = uniform_probabilities(3)
    analytic = pgm_success_generic(states, probs).success_probability
    sampler = PgmSampler(gram_matrix_direct(states, probs))
    trials = 10_000
    hits = 0
    for _ in range(trials):
        x = int(rng.integers(0, 3))
        hits += sampler.sample(x, rng) == x
    sigma = math.sqrt(analytic * (1 - analytic) / trials)
    assert abs(hits / trials - analytic) <= 3 * sigma


def test_mismatched_dimensions():
    with pytest.raises(InvalidArgumentError):
        pgm_success_generic([np.array([1.0]), np.array([1.0, 0.0])], [0.5, 0.5])
    with pytest.raises(InvalidArgumentError):
        pgm_success_generic(PAIR, [0.3, 0.3])


def test_rank_deficient_code_rejected():
    with pytest.raises(InvalidArgumentError):
        GeneratorMatrix(np.zeros((4, 1), dtype=np.uint8))
