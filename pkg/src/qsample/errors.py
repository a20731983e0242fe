"""Exception types shared across the package."""

from __future__ import annotations


class InvalidArgumentError(ValueError):
    """A parameter is outside the range an operation accepts."""


class ResourceError(RuntimeError):
    """A size guard tripped (memory or exhaustive-enumeration limit)."""


class NotPSDError(ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, eigenvalue: float, tol: float):
        self.eigenvalue = float(eigenvalue)
        self.tol = float(tol)
        super().__init__(f"matrix is not PSD: eigenvalue {self.eigenvalue:.3e} < -{self.tol:.1e}")


class SearchFailureError(RuntimeError):
    """Randomized code search exhausted its attempt budget."""

    def __init__(self, n: int, attempts: int, best_distance: int):
        self.n = n
        self.attempts = attempts
        self.best_distance = best_distance
        super().__init__(
            f"no code of length {n} met the distance target after {attempts} attempts "
            f"(best distance found: {best_distance})"
        )
