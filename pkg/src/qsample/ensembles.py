"""Quantum-example states for the hard learning instances and their Gram matrices.

Every state lives on a register of ``(point, label)`` pairs; basis index
``2 * point + label``. PAC and noisy states use points ``0..d`` (point 0 is the
heavy point), agnostic states use points ``0..d-1``, codeword states ``0..n-1``.

``T``-fold tensor powers are never built: Gram entries use ``<psi_x|psi_y>^T``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .codes import GeneratorMatrix, codeword_weights, encode
from .errors import InvalidArgumentError
from .fourier import BooleanFunction, hardness_profile

PAC_WEIGHT = 20.0
# label bias of the agnostic ensemble: D_x(i, b) = (1 +- 10 eps) / (2d), the
# only choice consistent with beta = 1 - sqrt(1 - 100 eps^2) and eps < 1/10
AGNOSTIC_BIAS = 10.0


@dataclass(frozen=True, eq=False)
class QuantumExampleState:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=float)
        if amps.ndim != 1:
            raise InvalidArgumentError("amplitudes must be a vector")
        if np.any(amps < 0):
            raise InvalidArgumentError("amplitudes must be non-negative")
        if abs(float(amps @ amps) - 1.0) > 1e-12:
            raise InvalidArgumentError(f"state has squared norm {float(amps @ amps)!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def amplitude(self, point: int, label: int) -> float:
        return float(self.amplitudes[2 * point + label])

    def inner(self, other: QuantumExampleState) -> float:
        if other.dimension != self.dimension:
            raise InvalidArgumentError("states have different dimensions")
        return float(self.amplitudes @ other.amplitudes)


def _check_code(code: GeneratorMatrix, d: int) -> None:
    if code.n != d:
        raise InvalidArgumentError(f"code length {code.n} does not match d={d}")


def _check_T(T: int) -> None:
    if T < 0:
        raise InvalidArgumentError(f"T must be non-negative, got {T}")


@dataclass(frozen=True)
class PacEnsembleParams:
    """Heavy point with weight ``1 - 20 eps``, ``d`` light points with ``20 eps / d`` each."""

    d: int
    epsilon: float
    T: int
    code: GeneratorMatrix

    kind = "pac"

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0 / 20:
            raise InvalidArgumentError(f"PAC epsilon must lie in (0, 1/20), got {self.epsilon}")
        _check_T(self.T)
        _check_code(self.code, self.d)

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def beta(self) -> float:
        return PAC_WEIGHT * self.epsilon


@dataclass(frozen=True)
class AgnosticEnsembleParams:
    """``D_x(i, b) = (1 + (-1)^{(Mx)_i + b} alpha) / (2d)`` with ``alpha = 10 eps``."""

    d: int
    epsilon: float
    T: int
    code: GeneratorMatrix

    kind = "agnostic"

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0 / 10:
            raise InvalidArgumentError(f"agnostic epsilon must lie in (0, 1/10), got {self.epsilon}")
        _check_T(self.T)
        _check_code(self.code, self.d)

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def alpha(self) -> float:
        return AGNOSTIC_BIAS * self.epsilon

    @property
    def beta(self) -> float:
        return 1.0 - math.sqrt(1.0 - 100.0 * self.epsilon**2)


@dataclass(frozen=True)
class NoisyPacEnsembleParams:
    """PAC ensemble whose labels are flipped coherently with rate ``eta``."""

    d: int
    epsilon: float
    T: int
    code: GeneratorMatrix
    eta: float

    kind = "noisy"

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0 / 20:
            raise InvalidArgumentError(f"PAC epsilon must lie in (0, 1/20), got {self.epsilon}")
        if not 0.0 <= self.eta < 0.5:
            raise InvalidArgumentError(f"eta must lie in [0, 1/2), got {self.eta}")
        _check_T(self.T)
        _check_code(self.code, self.d)

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def beta(self) -> float:
        return PAC_WEIGHT * self.epsilon * (1.0 - 2.0 * math.sqrt(self.eta * (1.0 - self.eta)))


@dataclass(frozen=True)
class CodewordEnsembleParams:
    """Uniform superposition over ``(i, (Mx)_i)``; ``d`` is the code length ``n``."""

    code: GeneratorMatrix
    T: int

    kind = "codeword"

    def __post_init__(self) -> None:
        _check_T(self.T)

    @property
    def d(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def beta(self) -> float:
        return 1.0


EnsembleParams = Union[
    PacEnsembleParams, AgnosticEnsembleParams, NoisyPacEnsembleParams, CodewordEnsembleParams
]
KINDS = ("pac", "agnostic", "noisy", "codeword")


def pac_example_state(params: PacEnsembleParams | NoisyPacEnsembleParams, x) -> QuantumExampleState:
    word = encode(params.code, x)
    d, eps = params.d, params.epsilon
    amps = np.zeros(2 * (d + 1))
    amps[0] = math.sqrt(1.0 - PAC_WEIGHT * eps)
    light = math.sqrt(PAC_WEIGHT * eps / d)
    amps[2 * np.arange(1, d + 1) + word] = light
    return QuantumExampleState(amps)


def noisy_pac_example_state(params: NoisyPacEnsembleParams, x) -> QuantumExampleState:
    word = encode(params.code, x)
    d, eps, eta = params.d, params.epsilon, params.eta
    weights = np.concatenate([[1.0 - PAC_WEIGHT * eps], np.full(d, PAC_WEIGHT * eps / d)])
    labels = np.concatenate([[0], word]).astype(np.int64)
    amps = np.zeros(2 * (d + 1))
    base = 2 * np.arange(d + 1)
    amps[base + labels] = np.sqrt((1.0 - eta) * weights)
    amps[base + 1 - labels] = np.sqrt(eta * weights)
    return QuantumExampleState(amps)


def agnostic_example_state(params: AgnosticEnsembleParams, x) -> QuantumExampleState:
    word = encode(params.code, x).astype(np.int64)
    d, alpha = params.d, params.alpha
    amps = np.zeros(2 * d)
    base = 2 * np.arange(d)
    # label agreeing with the codeword bit gets the larger weight
    amps[base + word] = math.sqrt((1.0 + alpha) / (2 * d))
    amps[base + 1 - word] = math.sqrt((1.0 - alpha) / (2 * d))
    return QuantumExampleState(amps)


def codeword_state(M: GeneratorMatrix, x) -> QuantumExampleState:
    word = encode(M, x)
    amps = np.zeros(2 * M.n)
    amps[2 * np.arange(M.n) + word] = 1.0 / math.sqrt(M.n)
    return QuantumExampleState(amps)


def example_state(params: EnsembleParams, x) -> QuantumExampleState:
    if params.kind == "pac":
        return pac_example_state(params, x)
    if params.kind == "agnostic":
        return agnostic_example_state(params, x)
    if params.kind == "noisy":
        return noisy_pac_example_state(params, x)
    return codeword_state(params.code, x)


def ensemble_states(params: EnsembleParams) -> list[QuantumExampleState]:
    """One state per message ``x = 0 .. 2^k - 1``."""
    return [example_state(params, x) for x in range(1 << params.k)]


def uniform_probabilities(count: int) -> np.ndarray:
    return np.full(count, 1.0 / count)


def _state_matrix(states: Sequence[QuantumExampleState | np.ndarray]) -> np.ndarray:
    vecs = [s.amplitudes if isinstance(s, QuantumExampleState) else np.asarray(s, dtype=float) for s in states]
    dims = {v.shape for v in vecs}
    if len(dims) != 1:
        raise InvalidArgumentError(f"states have mismatched dimensions: {sorted(dims)}")
    return np.vstack(vecs)


def check_probabilities(probabilities, count: int) -> np.ndarray:
    p = np.asarray(probabilities, dtype=float)
    if p.shape != (count,):
        raise InvalidArgumentError(f"expected {count} probabilities, got shape {p.shape}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise InvalidArgumentError("probabilities must be non-negative and sum to 1")
    return p


def gram_matrix_direct(states, probabilities, T: int = 1) -> np.ndarray:
    """``G(x, y) = sqrt(p_x p_y) <psi_x|psi_y>^T`` from explicit amplitude vectors."""
    _check_T(T)
    psi = _state_matrix(states)
    p = check_probabilities(probabilities, psi.shape[0])
    overlaps = psi @ psi.T
    root = np.sqrt(p)
    G = np.outer(root, root) * overlaps**T
    return (G + G.T) / 2


def overlap_closed_form(params: EnsembleParams, hamming) -> np.ndarray | float:
    """Single-copy ``<psi_x|psi_y>`` as a function of ``d_H(Mx, My)``."""
    h = np.asarray(hamming, dtype=float)
    if np.any(h < 0) or np.any(h > params.d):
        raise InvalidArgumentError(f"hamming distance must lie in [0, {params.d}]")
    out = 1.0 - params.beta * h / params.d
    return float(out) if out.ndim == 0 else out


def gram_entry_closed_form(kind: str, params: EnsembleParams, hamming: int) -> float:
    """``2^-k (1 - beta d_H / d)^T`` with the kind-specific ``beta``.

    pac: ``20 eps``; agnostic: ``1 - sqrt(1 - 100 eps^2)``;
    noisy: ``20 eps (1 - 2 sqrt(eta (1 - eta)))``; codeword: 1.
    """
    if kind != params.kind:
        raise InvalidArgumentError(f"kind {kind!r} does not match parameters of kind {params.kind!r}")
    return overlap_closed_form(params, hamming) ** params.T / (1 << params.k)


def gram_matrix_closed_form(params: EnsembleParams) -> np.ndarray:
    weights = codeword_weights(params.code)
    x = np.arange(1 << params.k)
    dist = weights[x[:, None] ^ x[None, :]]
    return np.asarray(overlap_closed_form(params, dist)) ** params.T / (1 << params.k)


def gram_profile(params: EnsembleParams) -> BooleanFunction:
    """``g = f o M`` with ``f(z) = (1 - beta |z| / d)^T``; the Gram matrix is ``g(x xor y) / 2^k``."""
    weights = codeword_weights(params.code)
    base = 1.0 - params.beta * np.arange(params.d + 1) / params.d
    return BooleanFunction(params.k, (base**params.T)[weights])


def hardness_function(params: EnsembleParams) -> BooleanFunction:
    """Full ``f`` on ``{0,1}^d`` before composing with the code."""
    return hardness_profile(params.beta, params.d, params.T)


def concept_distance(params: PacEnsembleParams, x, y) -> float:
    """``Pr_{s ~ D}[c^x(s) != c^y(s)] = 20 eps d_H(Mx, My) / d``."""
    diff = np.count_nonzero(encode(params.code, x) != encode(params.code, y))
    return PAC_WEIGHT * params.epsilon * diff / params.d


def with_T(params: EnsembleParams, T: int) -> EnsembleParams:
    from dataclasses import replace

    return replace(params, T=T)


# JSON round trip: {kind, d, epsilon, T, eta?, code}


def params_to_dict(params: EnsembleParams) -> dict:
    out = {"kind": params.kind, "d": params.d}
    if params.kind != "codeword":
        out["epsilon"] = params.epsilon
    out["T"] = params.T
    if params.kind == "noisy":
        out["eta"] = params.eta
    out["code"] = params.code.to_dict()
    return out


def params_from_dict(data: dict) -> EnsembleParams:
    try:
        kind = data["kind"]
        code = GeneratorMatrix.from_dict(data["code"])
        T = int(data["T"])
    except KeyError as exc:
        raise InvalidArgumentError(f"ensemble JSON missing field {exc}") from None
    if kind == "codeword":
        if "d" in data and int(data["d"]) != code.n:
            raise InvalidArgumentError("codeword ensemble d must equal the code length")
        return CodewordEnsembleParams(code, T)
    try:
        d, eps = int(data["d"]), float(data["epsilon"])
    except KeyError as exc:
        raise InvalidArgumentError(f"ensemble JSON missing field {exc}") from None
    if kind == "pac":
        return PacEnsembleParams(d, eps, T, code)
    if kind == "agnostic":
        return AgnosticEnsembleParams(d, eps, T, code)
    if kind == "noisy":
        return NoisyPacEnsembleParams(d, eps, T, code, float(data.get("eta", 0.0)))
    raise InvalidArgumentError(f"unknown ensemble kind {kind!r}")


def params_to_json(params: EnsembleParams) -> str:
    return json.dumps(params_to_dict(params))


def params_from_json(text: str) -> EnsembleParams:
    return params_from_dict(json.loads(text))
