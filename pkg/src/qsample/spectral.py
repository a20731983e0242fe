"""Symmetric eigensolver and PSD matrix functions.

The eigensolver is a cyclic Jacobi method (row-by-row sweep order), compiled
with numba. Rotation order is fixed, so results are bit-reproducible.
"""

from __future__ import annotations

import numba
import numpy as np

from .errors import InvalidArgumentError, NotPSDError

PSD_TOL = 1e-9
# eigenvalues at or below this fraction of the largest are treated as exact zeros
ZERO_REL = 1e-12
JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


@numba.njit(cache=True)
def _jacobi_sweeps(A, rel_tol, max_sweeps):
    n = A.shape[0]
    Vt = np.eye(n)
    norm = np.sqrt((A * A).sum())
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * A[i, j] * A[i, j]
        if np.sqrt(off) <= rel_tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                app = A[p, p]
                aqq = A[q, q]
                tau = (aqq - app) / (2.0 * apq)
                sign = 1.0 if tau >= 0.0 else -1.0
                t = sign / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # rows p, q are contiguous; columns are mirrored afterwards
                for i in range(n):
                    api = A[p, i]
                    aqi = A[q, i]
                    A[p, i] = c * api - s * aqi
                    A[q, i] = s * api + c * aqi
                for i in range(n):
                    A[i, p] = A[p, i]
                    A[i, q] = A[q, i]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    vp = Vt[p, i]
                    vq = Vt[q, i]
                    Vt[p, i] = c * vp - s * vq
                    Vt[q, i] = s * vp + c * vq
    return A, Vt


def _check_symmetric(A: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgumentError("matrix entries must be finite")
    scale = max(1.0, float(np.max(np.abs(A), initial=0.0)))
    if np.max(np.abs(A - A.T), initial=0.0) > atol * scale:
        raise InvalidArgumentError("matrix is not symmetric")
    return np.ascontiguousarray((A + A.T) / 2)


def jacobi_eigh(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm is at most ``1e-13`` times the
    matrix Frobenius norm, or 100 sweeps have run.
    """
    A = _check_symmetric(A)
    if A.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0))
    D, Vt = _jacobi_sweeps(A, JACOBI_REL_TOL, JACOBI_MAX_SWEEPS)
    w = np.diag(D).copy()
    order = np.argsort(w, kind="stable")
    return w[order], Vt.T[:, order].copy()


def eigvalsh(A: np.ndarray) -> np.ndarray:
    return jacobi_eigh(A)[0]


def clamp_spectrum(w: np.ndarray, tol: float = PSD_TOL, zero_rel: float = ZERO_REL) -> np.ndarray:
    """Validate near-PSD eigenvalues and zero the ones within tolerance of zero."""
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise NotPSDError(w.min(), tol)
    top = float(w.max(initial=0.0))
    return np.where(w <= zero_rel * top, 0.0, w)


def psd_sqrt(A: np.ndarray, tol: float = PSD_TOL, zero_rel: float = ZERO_REL) -> np.ndarray:
    """Unique PSD square root via eigendecomposition.

    Eigenvalues in ``[-tol, zero_rel * lambda_max]`` are set to zero; anything
    below ``-tol`` raises :class:`NotPSDError`.
    """
    w, V = jacobi_eigh(A)
    root = np.sqrt(clamp_spectrum(w, tol, zero_rel))
    S = (V * root) @ V.T
    return (S + S.T) / 2


def psd_inv_sqrt(A: np.ndarray, tol: float = PSD_TOL, zero_rel: float = ZERO_REL) -> np.ndarray:
    """Pseudo-inverse square root, taken over eigenvalues above ``zero_rel * lambda_max``."""
    w, V = jacobi_eigh(A)
    w = clamp_spectrum(w, tol, zero_rel)
    inv = np.zeros_like(w)
    nz = w > 0
    inv[nz] = 1.0 / np.sqrt(w[nz])
    S = (V * inv) @ V.T
    return (S + S.T) / 2
