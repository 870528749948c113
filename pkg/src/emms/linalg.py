"""Dense float64 kernels shared by every solver step.

Ridge least squares is solved on the normal equations with a Cholesky
factorization (the feature dimension is at most a few thousand in every
intended workload, and the gram matrix is reused across alternating
iterations). ``NormalEquationsSolver`` exposes the factor-once / solve-many
split that the fast solver relies on.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    EmptyInputError,
    NonFiniteInputError,
    RankDeficientError,
    ShapeMismatchError,
)

# A pivot this far below the largest one marks the normal system singular.
PIVOT_RTOL = 1e-12

_POWER_ITERS = 100
_SAFETY_FACTOR = 1.01


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Coerce to a C-contiguous float64 2-D array, rejecting NaN/Inf.

    32-bit input is widened; the result is a copy whenever widening or
    re-layout was needed.
    """
    a = np.ascontiguousarray(np.asarray(data, dtype=np.float64))
    if a.ndim != 2:
        raise ShapeMismatchError(f"{name}: expected a 2-D matrix, got ndim={a.ndim}")
    if a.size and not np.isfinite(a).all():
        raise NonFiniteInputError(f"{name}: contains NaN or Inf entries")
    return a


class NormalEquationsSolver:
    """Cholesky factorization of a^T a + ridge*I, reusable across right-hand sides.

    Use this when the design matrix is fixed and many systems share it; the
    O(cols^3) factorization then happens once.
    """

    def __init__(self, a: np.ndarray, ridge: float = 0.0):
        if ridge < 0:
            raise ValueError(f"ridge must be nonnegative, got {ridge}")
        a = np.asarray(a, dtype=np.float64)
        self.a = a
        self.ridge = ridge
        gram = a.T @ a
        if ridge > 0.0:
            gram[np.diag_indices_from(gram)] += ridge
        self._lower = self._factor(gram, ridge)

    @staticmethod
    def _factor(gram: np.ndarray, ridge: float) -> np.ndarray:
        try:
            lower = np.linalg.cholesky(gram)
        except np.linalg.LinAlgError:
            if ridge == 0.0:
                raise RankDeficientError(
                    "normal system is numerically singular (factorization failed); "
                    "pass ridge > 0 to regularize"
                ) from None
            # Only reachable when the requested ridge underflows the gram's own
            # rounding noise; bump to eps scale so a positive ridge never errors.
            n = gram.shape[0]
            jitter = max(ridge, np.finfo(np.float64).eps * max(gram.diagonal().max(), 1.0) * n)
            for _ in range(60):
                g = gram.copy()
                g[np.diag_indices_from(g)] += jitter
                try:
                    return np.linalg.cholesky(g)
                except np.linalg.LinAlgError:
                    jitter *= 10.0
            raise RankDeficientError("ridged normal system could not be factorized") from None
        if ridge == 0.0 and lower.shape[0]:
            pivots = np.square(lower.diagonal())
            if pivots.min() < PIVOT_RTOL * pivots.max():
                raise RankDeficientError(
                    "normal system is numerically singular "
                    f"(pivot ratio {pivots.min() / pivots.max():.3e} below {PIVOT_RTOL:g}); "
                    "pass ridge > 0 to regularize"
                )
        return lower

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve (a^T a + ridge*I) x = rhs for one or many columns."""
        y = solve_triangular(self._lower, rhs, lower=True)
        return solve_triangular(self._lower.T, y, lower=False)

    def solve_lstsq(self, b: np.ndarray) -> np.ndarray:
        """Minimize ||a x - b|| (+ ridge penalty) for the stored design matrix."""
        return self.solve(self.a.T @ b)


def least_squares(a, b, ridge: float = 0.0) -> np.ndarray:
    """Return W minimizing ||a W - b||_F^2 + ridge * ||W||_F^2.

    Solved via the normal equations a^T a + ridge*I. With ridge = 0 and a of
    full column rank this is the unique least-squares solution; a numerically
    singular normal system raises RankDeficientError (pivot below
    ``PIVOT_RTOL`` times the largest pivot).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeMismatchError(
            f"least_squares needs 2-D operands, got {a.ndim}-D and {b.ndim}-D"
        )
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatchError(
            f"row counts differ: a has {a.shape[0]} rows, b has {b.shape[0]}"
        )
    return NormalEquationsSolver(a, ridge).solve_lstsq(b)


def default_ridge(a: np.ndarray) -> float:
    """Adaptive ridge used by the solvers: 1e-10 * trace(a^T a) / cols.

    Keeps collinear feature matrices solvable without visibly perturbing
    well-posed instances.
    """
    a = np.asarray(a, dtype=np.float64)
    cols = a.shape[1] if a.ndim == 2 else 1
    if cols == 0 or a.size == 0:
        return 0.0
    trace = float(np.einsum("ij,ij->", a, a))
    ridge = 1e-10 * trace / cols
    # An exactly zero matrix still needs a positive pivot to be "solvable".
    return ridge if ridge > 0.0 else np.finfo(np.float64).tiny


def spectral_norm_upper_bound(a) -> float:
    """Upper bound on the spectral norm ||a||_2.

    Runs at most 100 power-iteration steps (deterministic seeded start) and
    multiplies the converged estimate by a 1.01 safety factor, so the result
    dominates the true norm whenever power iteration has converged. A zero
    matrix returns 0.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.size == 0:
        raise EmptyInputError("spectral_norm_upper_bound: empty matrix")
    if a.ndim == 1:
        a = a[:, None]
    if not a.any():
        return 0.0
    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(a.shape[1])
    nv = np.linalg.norm(v)
    while nv == 0.0:  # astronomically unlikely; keep the loop total anyway
        v = rng.standard_normal(a.shape[1])
        nv = np.linalg.norm(v)
    v /= nv
    sigma = 0.0
    for _ in range(_POWER_ITERS):
        u = a @ v
        su = np.linalg.norm(u)
        if su == 0.0:
            v = rng.standard_normal(a.shape[1])
            v /= np.linalg.norm(v)
            continue
        w = a.T @ (u / su)
        estimate = np.linalg.norm(w)
        if abs(estimate - sigma) <= 1e-13 * max(estimate, 1.0):
            sigma = estimate
            break
        sigma = estimate
        v = w / estimate
    return _SAFETY_FACTOR * sigma
