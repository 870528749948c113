"""Geometry of the probability simplex.

``project_simplex`` is the Euclidean projection computed by the classical
sort-and-threshold closed form; ``sparsemax`` is the same map under the name
the fast solver uses, kept as an alias so both solver listings read
one-to-one against the code.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, NonFiniteInputError

SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SimplexVector:
    """K nonnegative weights summing to 1 (within ``SUM_TOL``)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64, copy=True).ravel()
        if arr.size == 0:
            raise EmptyInputError("SimplexVector needs at least one entry")
        if (arr < 0).any():
            raise ValueError(f"negative entry in simplex vector: {arr.min()}")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"simplex vector sums to {total!r}, not 1")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]


def _validated(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInputError("cannot project an empty vector")
    if not np.isfinite(arr).all():
        raise NonFiniteInputError("cannot project a vector with NaN/Inf entries")
    return arr


def project_simplex(v) -> SimplexVector:
    """Euclidean projection of ``v`` onto the probability simplex.

    Sort descending (stable, ties by original index), find the largest prefix
    length rho with u_rho + (1 - sum of the prefix)/rho > 0, set
    theta = (prefix sum - 1)/rho, and clip ``v - theta`` at zero.

    A vector already satisfying the simplex invariants is returned unchanged,
    which makes the map bit-exactly idempotent; the skipped correction is
    below ``SUM_TOL``.
    """
    arr = _validated(v)
    k = arr.size
    if k == 1:
        return SimplexVector(np.array([1.0]))
    if (arr >= 0).all() and abs(arr.sum() - 1.0) <= SUM_TOL:
        return SimplexVector(arr)
    # Shift so the top entry is 0 (the projection is translation invariant);
    # every surviving entry then lies in (-1, 0] and the threshold arithmetic
    # stays well-scaled no matter how large the raw inputs are.
    shifted = arr - arr.max()
    order = np.argsort(-shifted, kind="stable")
    u = shifted[order]
    css = np.cumsum(u)
    rho_candidates = np.nonzero(u + (1.0 - css) / np.arange(1, k + 1) > 0)[0]
    rho = int(rho_candidates[-1]) + 1
    theta = (css[rho - 1] - 1.0) / rho
    return SimplexVector(np.maximum(shifted - theta, 0.0))


def sparsemax(v) -> SimplexVector:
    """Sparsemax transformation: identical to ``project_simplex``.

    The fast solver's projection step is named sparsemax; keeping the alias
    makes that listing map directly onto code.
    """
    return project_simplex(v)
