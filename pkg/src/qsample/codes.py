"""Binary linear codes: generator matrices, encoding, rank, distance, random search."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, ResourceError, SearchFailureError

MAX_DISTANCE_K = 24
SEARCH_BUDGET = 10_000
_WORD = 64
_LOW_BITS = 16


def _as_bit_matrix(bits) -> np.ndarray:
    arr = np.array(bits, dtype=np.uint8)
    if arr.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-D bit matrix, got shape {arr.shape}")
    if np.any(arr > 1):
        raise InvalidArgumentError("bit matrix entries must be 0 or 1")
    return arr


def _pack_columns(rows: np.ndarray) -> np.ndarray:
    """Column-major packing: ``packed[j, w]`` holds rows ``64w..64w+63`` of column ``j``."""
    n, k = rows.shape
    words = max(1, -(-n // _WORD))
    packed = np.zeros((k, words), dtype=np.uint64)
    for i in range(n):
        w, b = divmod(i, _WORD)
        packed[:, w] |= rows[i].astype(np.uint64) << np.uint64(b)
    return packed


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """``n x k`` matrix over F2 whose columns generate an ``[n, k]`` code.

    ``rows[i, j]`` is entry ``(i, j)``; ``packed`` holds the columns in 64-bit words.
    """

    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = _as_bit_matrix(self.rows)
        n, k = rows.shape
        if k > n:
            raise InvalidArgumentError(f"k={k} exceeds n={n}")
        if rank_f2(rows) != k:
            raise InvalidArgumentError("generator matrix must have rank k over F2")
        rows.setflags(write=False)
        packed = _pack_columns(rows)
        packed.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "packed", packed)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def k(self) -> int:
        return self.rows.shape[1]

    def column_ints(self) -> list[int]:
        """Columns as Python integers, bit ``i`` = row ``i``."""
        weights = [1 << i for i in range(self.n)]
        return [sum(w for w, b in zip(weights, self.rows[:, j]) if b) for j in range(self.k)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneratorMatrix):
            return NotImplemented
        return self.rows.shape == other.rows.shape and bool(np.array_equal(self.rows, other.rows))

    def __hash__(self) -> int:
        return hash((self.rows.shape, self.rows.tobytes()))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "rows": ["".join(str(int(b)) for b in row) for row in self.rows],
        }

    @classmethod
    def from_dict(cls, data: dict) -> GeneratorMatrix:
        try:
            n, k, rows = int(data["n"]), int(data["k"]), data["rows"]
        except KeyError as exc:
            raise InvalidArgumentError(f"code JSON missing field {exc}") from None
        if len(rows) != n or any(len(r) != k for r in rows):
            raise InvalidArgumentError(f"code JSON rows do not form a {n}x{k} matrix")
        if any(ch not in "01" for r in rows for ch in r):
            raise InvalidArgumentError("code JSON rows must be bitstrings")
        return cls(np.array([[int(ch) for ch in r] for r in rows], dtype=np.uint8).reshape(n, k))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> GeneratorMatrix:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CodeSpec:
    n: int
    k: int
    min_distance: int

    def __post_init__(self) -> None:
        if self.min_distance < 1:
            raise InvalidArgumentError("min_distance must be at least 1")


def identity_code(k: int) -> GeneratorMatrix:
    return GeneratorMatrix(np.eye(k, dtype=np.uint8))


def repetition_code(n: int) -> GeneratorMatrix:
    return GeneratorMatrix(np.ones((n, 1), dtype=np.uint8))


def _message_bits(x, k: int) -> np.ndarray:
    if isinstance(x, (int, np.integer)):
        if x < 0 or int(x) >> k:
            raise InvalidArgumentError(f"message {x} does not fit in {k} bits")
        return ((int(x) >> np.arange(k)) & 1).astype(np.uint8)
    bits = np.asarray(x, dtype=np.int64).ravel()
    if bits.shape[0] != k:
        raise InvalidArgumentError(f"message has {bits.shape[0]} bits, expected {k}")
    if np.any((bits != 0) & (bits != 1)):
        raise InvalidArgumentError("message entries must be 0 or 1")
    return bits.astype(np.uint8)


def encode(M: GeneratorMatrix, x) -> np.ndarray:
    """Codeword ``Mx`` over F2, as a length-``n`` uint8 vector.

    ``x`` is a bit vector of length ``k`` or a little-endian integer.
    """
    bits = _message_bits(x, M.k)
    acc = np.zeros(M.packed.shape[1], dtype=np.uint64)
    for j in np.flatnonzero(bits):
        acc ^= M.packed[j]
    out = np.empty(M.n, dtype=np.uint8)
    for i in range(M.n):
        w, b = divmod(i, _WORD)
        out[i] = (int(acc[w]) >> b) & 1
    return out


def codeword_indices(M: GeneratorMatrix) -> np.ndarray:
    """Integer index of ``Mx`` for every message ``x`` in ``0 .. 2^k - 1``."""
    if M.n > 63:
        raise ResourceError("codeword indices need n <= 63")
    idx = np.zeros(1, dtype=np.int64)
    for col in M.column_ints():
        idx = np.concatenate([idx, idx ^ col])
    return idx


def codeword_weights(M: GeneratorMatrix) -> np.ndarray:
    """Hamming weight ``|Mx|`` for every message ``x``."""
    if M.k > MAX_DISTANCE_K:
        raise ResourceError(f"k={M.k} exceeds the exhaustive-enumeration cap of {MAX_DISTANCE_K}")
    table = np.zeros((1, M.packed.shape[1]), dtype=np.uint64)
    for j in range(M.k):
        table = np.concatenate([table, table ^ M.packed[j]])
    return np.bitwise_count(table).sum(axis=1).astype(np.int64)


def rank_f2(bits) -> int:
    """Rank over F2 by Gaussian elimination on rows packed into integers."""
    arr = _as_bit_matrix(bits)
    weights = [1 << j for j in range(arr.shape[1])]
    work = [sum(w for w, b in zip(weights, row) if b) for row in arr]
    rank = 0
    for col in range(arr.shape[1]):
        mask = 1 << col
        pivot = next((r for r in range(rank, len(work)) if work[r] & mask), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for r in range(len(work)):
            if r != rank and work[r] & mask:
                work[r] ^= work[rank]
        rank += 1
        if rank == len(work):
            break
    return rank


def min_distance(M: GeneratorMatrix) -> int:
    """Minimum weight over nonzero codewords, by exhaustive enumeration."""
    k = M.k
    if k > MAX_DISTANCE_K:
        raise ResourceError(f"k={k} exceeds the exhaustive-enumeration cap of {MAX_DISTANCE_K}")
    if k == 0:
        raise InvalidArgumentError("a code with k=0 has no nonzero codewords")
    low = min(k, _LOW_BITS)
    table = np.zeros((1, M.packed.shape[1]), dtype=np.uint64)
    for j in range(low):
        table = np.concatenate([table, table ^ M.packed[j]])
    low_weights = np.bitwise_count(table).sum(axis=1)
    best = int(low_weights[1:].min()) if low_weights.shape[0] > 1 else M.n + 1
    # Gray-code walk over the high columns
    hi = np.zeros(M.packed.shape[1], dtype=np.uint64)
    for g in range(1, 1 << (k - low)):
        flip = (g & -g).bit_length() - 1
        hi ^= M.packed[low + flip]
        w = int(np.bitwise_count(table ^ hi).sum(axis=1).min())
        if w < best:
            best = w
    return best


def hamming(a, b) -> int:
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))


def find_good_code(
    n: int, rng: int | np.random.Generator, budget: int = SEARCH_BUDGET
) -> tuple[GeneratorMatrix, CodeSpec]:
    """Random search for an ``[n, ceil(n/4)]`` code with distance ``>= ceil(n/8)``.

    Candidates are uniform random ``n x k`` bit matrices drawn in order from
    ``rng``; the first with full rank and verified distance is returned.
    """
    if not 16 <= n <= 96:
        raise InvalidArgumentError(f"n must lie in [16, 96], got {n}")
    rng = np.random.default_rng(rng)
    k = math.ceil(n / 4)
    target = math.ceil(n / 8)
    best = 0
    for _ in range(budget):
        rows = rng.integers(0, 2, size=(n, k), dtype=np.uint8)
        if rank_f2(rows) != k:
            continue
        M = GeneratorMatrix(rows)
        dist = min_distance(M)
        if dist >= target:
            return M, CodeSpec(n, k, dist)
        best = max(best, dist)
    raise SearchFailureError(n, budget, best)


def parse_bits(text: str | Sequence[int]) -> np.ndarray:
    if isinstance(text, str):
        return np.array([int(ch) for ch in text], dtype=np.uint8)
    return np.asarray(text, dtype=np.uint8)
