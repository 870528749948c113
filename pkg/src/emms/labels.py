"""Label-embedding stacks and model feature matrices.

An F-Label slice is an N x L matrix of per-sample label embeddings from one
encoder; a stack holds K such slices over the same samples. Rows produced by
``normalize_flabels`` have unit l2 norm. ``flatten_for_t`` turns a stack into
the (N*L) x K design matrix the solvers regress the oracle weights on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, OutOfRangeError, ShapeMismatchError, ZeroRowError
from .linalg import as_matrix

_ZERO_ROW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """N x D features extracted by one candidate pre-trained model."""

    data: np.ndarray

    def __post_init__(self):
        arr = as_matrix(self.data, "features").copy()
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True, eq=False)
class FLabelStack:
    """K label-embedding slices, each N x L, in encoder order."""

    slices: tuple[np.ndarray, ...]

    def __post_init__(self):
        slices = tuple(self.slices)
        if not slices:
            raise EmptyInputError("FLabelStack needs at least one slice")
        frozen = []
        shape = None
        for i, s in enumerate(slices):
            arr = as_matrix(s, f"flabel slice {i}").copy()
            if shape is None:
                shape = arr.shape
            elif arr.shape != shape:
                raise ShapeMismatchError(
                    f"slice {i} has shape {arr.shape}, expected {shape}"
                )
            arr.flags.writeable = False
            frozen.append(arr)
        object.__setattr__(self, "slices", tuple(frozen))

    @property
    def n(self) -> int:
        return self.slices[0].shape[0]

    @property
    def l(self) -> int:
        return self.slices[0].shape[1]

    @property
    def k(self) -> int:
        return len(self.slices)

    def to_array(self) -> np.ndarray:
        """Stacked (K, N, L) view of the slices."""
        return np.stack(self.slices)


def normalize_flabels(raw) -> np.ndarray:
    """Divide every row by its l2 norm so each embedding has unit length."""
    a = as_matrix(raw, "flabels")
    norms = np.linalg.norm(a, axis=1)
    small = np.nonzero(norms < _ZERO_ROW_TOL)[0]
    if small.size:
        raise ZeroRowError(int(small[0]))
    return a / norms[:, None]


def stack_flabels(slices) -> FLabelStack:
    """Stack same-shaped N x L slices into an FLabelStack, preserving order."""
    return FLabelStack(tuple(slices))


def flatten_for_t(stack: FLabelStack) -> np.ndarray:
    """(N*L) x K matrix whose column k is the row-major ravel of slice k.

    Row-major means the flat index of entry (n, l) is n*L + l. With the same
    ravel applied to the regression prediction, the stack objective
    0.5 * ||Xw - Zt||_F^2 equals 0.5 * ||ravel(Xw) - flatten_for_t(Z) @ t||^2
    for every (w, t); that identity is the contract this layout exists for.
    """
    return np.column_stack([s.ravel() for s in stack.slices])


def one_hot_stack(labels, class_count: int) -> FLabelStack:
    """K=1 stack of one-hot rows: the degenerate single-oracle label embedding.

    Rows are already unit-norm, so no normalization is applied.
    """
    ids = np.asarray(labels)
    if ids.ndim != 1:
        ids = ids.ravel()
    if ids.size == 0:
        raise EmptyInputError("one_hot_stack needs at least one label")
    if not np.issubdtype(ids.dtype, np.integer):
        as_int = ids.astype(np.int64)
        if not np.array_equal(as_int, ids):
            raise OutOfRangeError("labels must be integers")
        ids = as_int
    if class_count < 1:
        raise OutOfRangeError(f"class_count must be >= 1, got {class_count}")
    bad = np.nonzero((ids < 0) | (ids >= class_count))[0]
    if bad.size:
        raise OutOfRangeError(
            f"label id {int(ids[bad[0]])} at row {int(bad[0])} "
            f"outside [0, {class_count})"
        )
    slice_ = np.zeros((ids.size, class_count))
    slice_[np.arange(ids.size), ids] = 1.0
    return FLabelStack((slice_,))
