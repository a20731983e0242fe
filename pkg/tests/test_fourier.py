from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_walsh, random_full_rank
from qsample.codes import GeneratorMatrix
from qsample.errors import InvalidArgumentError, ResourceError
from qsample.fourier import (
    BooleanFunction,
    FourierSpectrum,
    compose_spectrum,
    compose_with_matrix,
    evaluate_from_spectrum,
    fourier_coefficients,
    fwht,
    hardness_profile,
    inverse_fourier,
    popcount,
)


def test_fwht_delta_and_constant():
    assert np.array_equal(fwht([1, 0, 0, 0]), [1, 1, 1, 1])
    assert np.array_equal(fwht([1, 1, 1, 1]), [4, 0, 0, 0])


def test_fwht_matches_naive_and_is_involution(rng):
    v = rng.normal(size=64)
    assert np.allclose(fwht(v), naive_walsh(v), atol=1e-12)
    assert np.max(np.abs(fwht(fwht(v)) - 64 * v)) <= 1e-12


def test_fwht_rejects_non_power_of_two():
    with pytest.raises(InvalidArgumentError):
        fwht([1.0, 2.0, 3.0])


def test_fourier_coefficients_of_linear_profile():
    coeffs = fourier_coefficients(BooleanFunction(2, np.array([1, 0.5, 0.5, 0]))).coefficients
    assert np.allclose(coeffs, [0.5, 0.25, 0.25, 0.0], atol=1e-15)
    assert np.allclose(coeffs, naive_walsh(np.array([1, 0.5, 0.5, 0])) / 4)


def test_parity_and_constant_spectra():
    m = 5
    z = np.arange(1 << m)
    parity = BooleanFunction(m, (-1.0) ** popcount(z))
    coeffs = fourier_coefficients(parity).coefficients
    expected = np.zeros(1 << m)
    expected[-1] = 1.0
    assert np.allclose(coeffs, expected, atol=1e-15)
    const = fourier_coefficients(BooleanFunction(m, np.ones(1 << m))).coefficients
    assert const[0] == 1.0 and np.all(const[1:] == 0)


def test_evaluate_from_spectrum_delta():
    delta = np.zeros(8)
    delta[0] = 1.0
    spec = fourier_coefficients(BooleanFunction(3, delta))
    assert evaluate_from_spectrum(spec, 0) == pytest.approx(1.0, abs=1e-15)
    for z in range(1, 8):
        assert abs(evaluate_from_spectrum(spec, z)) <= 1e-15
    assert evaluate_from_spectrum(spec, [0, 0, 0]) == pytest.approx(1.0)


def test_evaluate_from_spectrum_dimension_mismatch():
    spec = fourier_coefficients(BooleanFunction(3, np.ones(8)))
    with pytest.raises(InvalidArgumentError):
        evaluate_from_spectrum(spec, [0, 1])


def test_round_trip_random(rng):
    f = BooleanFunction(7, rng.normal(size=128))
    spec = fourier_coefficients(f)
    back = np.array([evaluate_from_spectrum(spec, z) for z in range(128)])
    assert np.max(np.abs(back - f.values)) <= 1e-12
    assert np.allclose(inverse_fourier(spec).values, f.values, atol=1e-12)


def test_hardness_profile_values():
    assert np.allclose(hardness_profile(1.0, 2, 1).values, [1, 0.5, 0.5, 0])
    assert hardness_profile(1.0, 3, 2).values[0b111] == 0.0
    assert hardness_profile(0.3, 6, 9).values[0] == 1.0
    for beta in (0.0, 1.5):
        with pytest.raises(InvalidArgumentError):
            hardness_profile(beta, 4, 1)


def test_compose_identity_and_all_ones(rng):
    f = BooleanFunction(4, rng.normal(size=16))
    ident = GeneratorMatrix(np.eye(4, dtype=np.uint8))
    assert np.array_equal(compose_with_matrix(f, ident).values, f.values)
    ones = GeneratorMatrix(np.ones((4, 1), dtype=np.uint8))
    assert np.array_equal(compose_with_matrix(f, ones).values, [f.values[0], f.values[15]])


def test_compose_preimage_example():
    # columns (1,0,1) and (0,1,1): rows are (1,0), (0,1), (1,1)
    M = GeneratorMatrix(np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8))
    delta = np.zeros(8)
    delta[0] = 1.0
    f = BooleanFunction(3, delta)
    composed = compose_with_matrix(f, M)
    assert np.array_equal(composed.values, [1, 0, 0, 0])
    assert np.allclose(fourier_coefficients(composed).coefficients, 0.25)
    # each Q has exactly two preimages S with M^t S = Q, each contributing 1/8
    fhat = fourier_coefficients(f).coefficients
    grouped = np.zeros(4)
    counts = np.zeros(4, dtype=int)
    for S in range(8):
        bits = np.array([(S >> i) & 1 for i in range(3)])
        q = bits @ M.rows % 2
        Q = int(q[0] + 2 * q[1])
        grouped[Q] += fhat[S]
        counts[Q] += 1
    assert np.all(counts == 2)
    assert np.allclose(grouped, 0.25)


def test_compose_rejects_rank_deficient():
    with pytest.raises(InvalidArgumentError):
        GeneratorMatrix(np.array([[1, 1], [1, 1], [0, 0]], dtype=np.uint8))


def test_arity_cap():
    with pytest.raises(ResourceError):
        BooleanFunction(27, np.zeros(1))


def test_wrong_length_and_non_finite():
    with pytest.raises(InvalidArgumentError):
        BooleanFunction(3, np.zeros(7))
    with pytest.raises(InvalidArgumentError):
        BooleanFunction(1, np.array([0.0, np.nan]))


def brute_preimage_spectrum(f: BooleanFunction, M: GeneratorMatrix) -> np.ndarray:
    fhat = fourier_coefficients(f).coefficients
    out = np.zeros(1 << M.k)
    weights = 1 << np.arange(M.k)
    for S in range(1 << M.n):
        bits = np.array([(S >> i) & 1 for i in range(M.n)])
        out[int((bits @ M.rows % 2) @ weights)] += fhat[S]
    return out


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 10), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_claim_preimage_sum(m, k, seed):
    k = min(k, m)
    rng = np.random.default_rng(seed)
    f = BooleanFunction(m, rng.normal(size=1 << m))
    M = random_full_rank(rng, m, k)
    direct = fourier_coefficients(compose_with_matrix(f, M)).coefficients
    assert np.allclose(direct, brute_preimage_spectrum(f, M), atol=1e-10)
    assert np.allclose(compose_spectrum(fourier_coefficients(f), M).coefficients, direct, atol=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_involution_and_parseval(m, seed):
    v = np.random.default_rng(seed).normal(size=1 << m)
    assert np.max(np.abs(fwht(fwht(v)) - (1 << m) * v)) <= 1e-12 * max(1.0, float(np.abs(v).max())) * (1 << m)
    coeffs = fourier_coefficients(BooleanFunction(m, v)).coefficients
    mean_sq = float(np.mean(v * v))
    assert abs(float(coeffs @ coeffs) - mean_sq) <= 1e-10 * mean_sq


@pytest.mark.parametrize("m", [4, 8, 12, 14])
@pytest.mark.parametrize("beta", [0.1, 0.5, 1.0])
def test_hardness_spectrum_nonnegative(m, beta):
    upper = m / (np.e**3 * beta)
    for T in sorted({1, max(1, int(upper)), 3 * max(1, int(upper)) + 5, 60}):
        coeffs = fourier_coefficients(hardness_profile(beta, m, T)).coefficients
        assert coeffs.min() >= -1e-12


def test_spectrum_type_checks():
    with pytest.raises(InvalidArgumentError):
        FourierSpectrum(2, np.zeros(3))
