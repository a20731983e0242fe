"""Acceptance criteria as executable checks.

Each criterion returns a :class:`CriterionResult`; :func:`format_result` renders
one deterministic line per criterion (no timings, so identical seeds give
byte-identical output). Runtime limits are still enforced and only show up as a
failure.
"""

from __future__ import annotations

import math
import subprocess
import sys
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bounds, info, learners
from .codes import GeneratorMatrix, find_good_code, min_distance, rank_f2
from .ensembles import (
    AgnosticEnsembleParams,
    CodewordEnsembleParams,
    NoisyPacEnsembleParams,
    PacEnsembleParams,
    ensemble_states,
    gram_matrix_closed_form,
    gram_matrix_direct,
    gram_profile,
    uniform_probabilities,
)
from .fourier import BooleanFunction, compose_with_matrix, fourier_coefficients, hardness_profile, popcount
from .pgm import helstrom_two_state, pgm_success_generic, pgm_success_xor, xor_eigenvalues, xor_sqrt_diagonal
from .spectral import eigvalsh, psd_sqrt

DEFAULT_SEED = 7


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str


def format_result(r: CriterionResult) -> str:
    return f"criterion {r.number:02d} [{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}"


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng([seed, number])


def random_full_rank(rng: np.random.Generator, n: int, k: int) -> GeneratorMatrix:
    while True:
        rows = rng.integers(0, 2, size=(n, k), dtype=np.uint8)
        if rank_f2(rows) == k:
            return GeneratorMatrix(rows)


def _timed(limit: float, ok: bool, start: float, detail: str) -> tuple[bool, str]:
    if time.perf_counter() - start >= limit:
        return False, detail + f"; runtime limit of {limit:g} s exceeded"
    return ok, detail + f"; within {limit:g} s"


def c01_diagonalization(seed: int) -> CriterionResult:
    start = time.perf_counter()
    rng = _rng(seed, 1)
    worst = 0.0
    for i in range(100):
        k = 2 + i % 7
        g = BooleanFunction(k, rng.uniform(-1.0, 1.0, 1 << k))
        x = np.arange(1 << k)
        P = g.values[x[:, None] ^ x[None, :]]
        dense = eigvalsh(P)
        fourier = np.sort(xor_eigenvalues(g))
        worst = max(worst, float(np.max(np.abs(dense - fourier))))
    ok, detail = _timed(30.0, worst <= 1e-9, start, f"100 matrices k=2..8, max |dense - 2^k g^| = {worst:.3e} (tol 1e-9)")
    return CriterionResult(1, "XOR Gram eigenvalues are 2^k times the Fourier coefficients", ok, detail)


def _ensemble_grid(d: int, T: int, code: GeneratorMatrix):
    yield PacEnsembleParams(d, 0.04, T, code)
    yield AgnosticEnsembleParams(d, 0.06, T, code)
    yield NoisyPacEnsembleParams(d, 0.04, T, code, 0.1)
    yield CodewordEnsembleParams(code, T)


C2_T = (1, 2, 5, 10, 20, 35, 50)


def c02_sqrt_diagonal(seed: int) -> CriterionResult:
    start = time.perf_counter()
    rng = _rng(seed, 2)
    worst = 0.0
    count = 0
    for d in (8, 12, 16):
        for k in (2, 4, 6):
            code = random_full_rank(rng, d, k)
            for T in C2_T:
                for params in _ensemble_grid(d, T, code):
                    N = 1 << k
                    A = gram_matrix_direct(ensemble_states(params), uniform_probabilities(N), T) * N
                    dense = np.diag(psd_sqrt(A))
                    structured = xor_sqrt_diagonal(gram_profile(params))
                    worst = max(worst, float(np.max(np.abs(dense - structured))))
                    count += 1
    ok, detail = _timed(
        60.0, worst <= 1e-9, start, f"{count} ensembles (4 kinds, d<=16, k<=6, T<=50), max diff = {worst:.3e} (tol 1e-9)"
    )
    return CriterionResult(2, "structured sqrt(A) diagonal matches dense PSD square root", ok, detail)


def lemma44_grid():
    for m in (10, 12, 14):
        for beta in (0.1, 0.5, 1.0):
            upper = m / (math.e**3 * beta)
            Ts = sorted({t for t in (1, math.floor(upper / 2), math.floor(upper)) if t >= 1})
            for T in Ts:
                yield m, beta, T, T <= upper


def c03_fourier_bound(seed: int) -> CriterionResult:
    checked = 0
    failures = []
    lowest = 0.0
    out_of_range = 0
    for m, beta, T, in_range in lemma44_grid():
        coeffs = fourier_coefficients(hardness_profile(beta, m, T)).coefficients
        weights = popcount(np.arange(1 << m, dtype=np.uint64))
        per_q = np.array([bounds.fourier_coeff_bound(q, m, T, beta, strict=False) for q in range(m + 1)])
        lowest = min(lowest, float(coeffs.min()))
        above = coeffs > per_q[weights] + bounds.SATISFIED_TOL
        if coeffs.min() < -1e-12 or above.any():
            failures.append(f"(m={m}, beta={beta}, T={T})")
        checked += coeffs.size
        out_of_range += not in_range
    detail = (
        f"{checked} coefficients, min = {lowest:.3e}, "
        f"{out_of_range} grid points outside T <= m/(e^3 beta) evaluated as stated"
    )
    if failures:
        detail += "; violations at " + ", ".join(failures)
    return CriterionResult(3, "hardness-profile Fourier coefficients within [-1e-12, bound]", not failures, detail)


def c04_sqrt_diag_bound(seed: int) -> CriterionResult:
    rng = _rng(seed, 4)
    failures = []
    worst_ratio = 0.0
    count = 0
    for m, beta, T, _ in lemma44_grid():
        k = math.ceil(m / 4)
        code = random_full_rank(rng, m, k)
        g = compose_with_matrix(hardness_profile(beta, m, T), code)
        exact = xor_sqrt_diagonal(g)
        rep = bounds.report(bounds.sqrt_diag_bound(m, k, T, beta, strict=False), exact)
        worst_ratio = max(worst_ratio, exact / rep.bound_value)
        count += 1
        if not rep.satisfied:
            failures.append(f"(m={m}, beta={beta}, T={T})")
    detail = f"{count} grid points, max exact/bound = {worst_ratio:.4f}"
    if failures:
        detail += "; violations at " + ", ".join(failures)
    return CriterionResult(4, "exact sqrt(A)(x,x) below the square-root-diagonal bound", not failures, detail)


EXTENDED_T = 50


def _pgm_rows(seed: int):
    """Every (label, exact, bound, in_range) checked for the PGM bound criterion."""
    code16, _ = find_good_code(16, _rng(seed, 5))
    d, k = 16, code16.k
    for eps in (0.02, 0.04):
        upper = d / (20 * math.e**3 * eps)
        for T in range(1, EXTENDED_T + 1):
            exact = pgm_success_xor(gram_profile(PacEnsembleParams(d, eps, T, code16))).success_probability
            yield f"pac eps={eps}", exact, bounds.pgm_pac_bound(d, k, T, eps, strict=False), T <= upper
        for eta in (0.0, 0.1, 0.25):
            beta = bounds.noisy_beta(eps, eta)
            for T in range(1, EXTENDED_T + 1):
                params = NoisyPacEnsembleParams(d, eps, T, code16, eta)
                exact = pgm_success_xor(gram_profile(params)).success_probability
                bound = bounds.pgm_noisy_bound(d, k, T, eps, eta, strict=False)
                yield f"noisy eps={eps} eta={eta}", exact, bound, T <= d / (math.e**3 * beta)
    for eps in (0.04, 0.06):
        upper = d / (100 * math.e**3 * eps**2)
        for T in range(1, EXTENDED_T + 1):
            exact = pgm_success_xor(gram_profile(AgnosticEnsembleParams(d, eps, T, code16))).success_probability
            yield f"agnostic eps={eps}", exact, bounds.pgm_agnostic_bound(d, k, T, eps, strict=False), T <= upper
    for n in (16, 32):
        code, _ = find_good_code(n, _rng(seed, 50 + n))
        for T in range(1, n + 1):
            exact = pgm_success_xor(gram_profile(CodewordEnsembleParams(code, T))).success_probability
            yield f"codeword n={n}", exact, bounds.codeword_bound(n, code.k, T), True


def c05_pgm_bounds(seed: int) -> CriterionResult:
    admissible = extended = 0
    failures = []
    for label, exact, bound, in_range in _pgm_rows(seed):
        admissible += in_range
        extended += not in_range
        if not bounds.report(bound, exact).satisfied:
            failures.append(label)
    detail = f"{admissible} admissible and {extended} extended-range points, all T<={EXTENDED_T} or T<=n"
    if failures:
        detail += "; violations in " + ", ".join(sorted(set(failures)))
    return CriterionResult(5, "exact PGM success below the PAC/noisy/agnostic/codeword bounds", not failures, detail)


def c06_gram_closed_form(seed: int) -> CriterionResult:
    rng = _rng(seed, 6)
    worst = 0.0
    count = 0
    for d in (8, 16, 24):
        for k in (1, 3, 6):
            code = random_full_rank(rng, d, k)
            for T in (1, 3, 10, 50):
                for params in _ensemble_grid(d, T, code):
                    direct = gram_matrix_direct(ensemble_states(params), uniform_probabilities(1 << k), T)
                    worst = max(worst, float(np.max(np.abs(direct - gram_matrix_closed_form(params)))))
                    count += 1
    detail = f"{count} Gram matrices (4 kinds, d<=24, k<=6, T<=50), max diff = {worst:.3e} (tol 1e-12)"
    return CriterionResult(6, "direct Gram matrices equal the closed forms", worst <= 1e-12, detail)


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def c07_two_state(seed: int) -> CriterionResult:
    rng = _rng(seed, 7)
    worst_eq = 0.0
    for _ in range(200):
        dim = int(rng.integers(2, 7))
        a, b = _random_unit(rng, dim), _random_unit(rng, dim)
        pgm = pgm_success_generic([a, b], [0.5, 0.5]).success_probability
        worst_eq = max(worst_eq, abs(pgm - helstrom_two_state(0.5, a, b)))
    sandwich_fail = 0
    for _ in range(200):
        dim = int(rng.integers(2, 7))
        a, b = _random_unit(rng, dim), _random_unit(rng, dim)
        p0 = float(rng.uniform(0.01, 0.99))
        pgm = pgm_success_generic([a, b], [p0, 1 - p0]).success_probability
        opt = helstrom_two_state(p0, a, b)
        if not opt * opt - 1e-12 <= pgm <= opt + 1e-12:
            sandwich_fail += 1
    ok = worst_eq <= 1e-12 and sandwich_fail == 0
    detail = f"equiprobable max |PGM - Helstrom| = {worst_eq:.3e} (tol 1e-12); sandwich failures {sandwich_fail}/200"
    return CriterionResult(7, "two-state PGM vs Helstrom and the Barnum-Knill sandwich", ok, detail)


INFO_D = (2, 4, 6, 8, 10)
INFO_DENSITY_D = (2, 4, 6, 8, 10, 12)
INFO_EPS = (0.05, 0.1, 0.2)


def c08_information(seed: int) -> CriterionResult:
    worst_classical = 0.0
    entropy_failures = []
    worst_density = 0.0
    for setting in info.SETTINGS:
        closed = info.reduced_pac_example_density if setting == "pac" else info.reduced_agnostic_example_density
        for eps in INFO_EPS:
            for d in INFO_D:
                brute = info.classical_info_brute_force(setting, d, eps)
                worst_classical = max(worst_classical, abs(brute - info.classical_per_example_info(setting, eps)))
                S = info.von_neumann_entropy(closed(d, eps))
                bound = info.quantum_per_example_info_bound(setting, d, eps, strict=False)
                if S > bound + bounds.SATISFIED_TOL:
                    entropy_failures.append(f"{setting} d={d} eps={eps} (S={S:.4f} > {bound:.4f})")
            for d in INFO_DENSITY_D:
                diff = closed(d, eps).entries - info.reduced_density_brute_force(setting, d, eps).entries
                worst_density = max(worst_density, float(np.max(np.abs(diff))))
    ok = worst_classical <= 1e-10 and not entropy_failures and worst_density <= 1e-12
    detail = (
        f"classical max diff = {worst_classical:.3e} (tol 1e-10); "
        f"density max diff = {worst_density:.3e} (tol 1e-12); "
        f"entropy bound violations {len(entropy_failures)}"
    )
    if entropy_failures:
        detail += ": " + "; ".join(entropy_failures)
    return CriterionResult(8, "per-example information quantities", ok, detail)


EIGEN_EPS = tuple(round(0.01 * i, 2) for i in range(1, 21))
EIGEN_QUARTIC = 5.0


def c09_top_eigenvalue(seed: int) -> CriterionResult:
    worst_formula = 0.0
    failures = []
    for eps in EIGEN_EPS:
        for d in (4, 8):
            rho = info.reduced_agnostic_example_density(d, eps).entries
            psi = np.full(2 * d, 1.0 / math.sqrt(2 * d))
            overlap = float(psi @ rho @ psi)
            worst_formula = max(worst_formula, abs(overlap - info.uniform_overlap(d, eps)))
        floor = 1 - 4 * eps**2 - EIGEN_QUARTIC * eps**4
        if overlap < floor:
            failures.append(eps)
    ok = worst_formula <= 1e-12 and not failures
    detail = f"max |<psi|rho|psi> - formula| = {worst_formula:.3e} (tol 1e-12)"
    if failures:
        detail += f"; below 1-4eps^2-5eps^4 at {len(failures)}/{len(EIGEN_EPS)} eps values, e.g. eps={failures[-1]}"
    return CriterionResult(9, "uniform-vector overlap of the agnostic density", ok, detail)


def c10_vc_independent(seed: int) -> CriterionResult:
    worst = 0.0
    for setting in info.SETTINGS:
        for eps in (0.05, 0.1, 0.2):
            a, b = info.vc_independent_states(setting, eps)
            single = float(a @ b)
            ta, tb = np.ones(1), np.ones(1)
            for T in range(0, 101):
                if T <= 6:
                    explicit = float(ta @ tb)
                    worst = max(worst, abs(explicit - info.vc_independent_inner_product(setting, eps, T)))
                    ta, tb = np.kron(ta, a), np.kron(tb, b)
                worst = max(worst, abs(single**T - info.vc_independent_inner_product(setting, eps, T)))
    detail = f"max diff over T<=100 (explicit tensor powers for T<=6) = {worst:.3e} (tol 1e-12)"
    return CriterionResult(10, "VC-independent two-state inner products", worst <= 1e-12, detail)


def c11_bernstein_vazirani(seed: int) -> CriterionResult:
    report = learners.bv_trials(8, 10_000, int(_rng(seed, 11).integers(0, 2**63)))
    rate = report.success_rate
    ok = 0.485 <= rate <= 0.515
    detail = f"n=8, 10000 trials, success rate {rate:.4f} (window [0.485, 0.515])"
    return CriterionResult(11, "Bernstein-Vazirani single-example learner", ok, detail)


def c12_pgm_sampling(seed: int) -> CriterionResult:
    code, _ = find_good_code(16, _rng(seed, 12))
    params = PacEnsembleParams(16, 0.04, 20, code)
    report = learners.pgm_identification_experiment(params, 10_000, int(_rng(seed, 120).integers(0, 2**63)))
    p = report.parameters["analytic"]
    sigma = math.sqrt(p * (1 - p) / report.trials)
    gap = abs(report.success_rate - p)
    ok = gap <= 3 * sigma
    detail = f"empirical {report.success_rate:.4f} vs analytic {p:.6f}, gap {gap:.2e} vs 3 sigma {3 * sigma:.2e}"
    return CriterionResult(12, "PGM outcome sampling matches the analytic success", ok, detail)


def c13_code_search(seed: int) -> CriterionResult:
    parts = []
    ok = True
    for n in (32, 64):
        start = time.perf_counter()
        M, spec = find_good_code(n, _rng(seed, 1300 + n))
        verified = rank_f2(M.rows) == M.k and M.k >= n / 4 and min_distance(M) >= n / 8
        good, text = _timed(10.0, verified, start, f"n={n}: k={spec.k}, distance={spec.min_distance}")
        ok &= good
        parts.append(text)
    return CriterionResult(13, "random search finds good codes", ok, "; ".join(parts))


CRITERIA: dict[int, Callable[[int], CriterionResult]] = {
    1: c01_diagonalization,
    2: c02_sqrt_diagonal,
    3: c03_fourier_bound,
    4: c04_sqrt_diag_bound,
    5: c05_pgm_bounds,
    6: c06_gram_closed_form,
    7: c07_two_state,
    8: c08_information,
    9: c09_top_eigenvalue,
    10: c10_vc_independent,
    11: c11_bernstein_vazirani,
    12: c12_pgm_sampling,
    13: c13_code_search,
}


def c14_determinism(seed: int) -> CriterionResult:
    """Run the ``verify`` command twice in fresh interpreters and compare the bytes."""
    cmd = [sys.executable, "-m", "qsample", "verify", "--seed", str(seed), "--skip-determinism"]
    outputs = [subprocess.run(cmd, capture_output=True, check=False).stdout for _ in range(2)]
    same = outputs[0] == outputs[1] and len(outputs[0]) > 0
    detail = f"two runs, {len(outputs[0])} bytes each, {'identical' if same else 'different'}"
    return CriterionResult(14, "verify output is byte-identical across runs", same, detail)


CRITERIA[14] = c14_determinism


def run_criteria(seed: int = DEFAULT_SEED, numbers=None) -> list[CriterionResult]:
    chosen = sorted(CRITERIA) if numbers is None else sorted(numbers)
    return [CRITERIA[n](seed) for n in chosen]
