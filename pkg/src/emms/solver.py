"""Transferability scoring by alternating minimization.

Both solvers minimize the bilinear objective

    s(w, t) = 0.5 * ||X w - Z t||_F^2,   t on the probability simplex,

over regression weights w (D x L) and oracle weights t (K entries). The
projected-gradient solver (``solve_pgd``) descends monotonically: each w step
uses a step size below the inverse curvature bound and each t step is a
projected gradient step with the same guarantee, so the recorded trace never
increases. The fast solver (``solve_fast``) replaces both steps with exact
ridge least squares plus a sparsemax projection; it converges empirically and
is the production default.

A model's transferability score is the negated final objective: the better
the features explain the label embeddings, the closer to zero (and to the
maximum) the score is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFiniteError, ShapeMismatchError
from .labels import FeatureMatrix, FLabelStack, flatten_for_t
from .linalg import NormalEquationsSolver, default_ridge, spectral_norm_upper_bound
from .simplex import SimplexVector, project_simplex, sparsemax

ALGORITHMS = ("pgd", "fast")

_DEFAULT_OUTER = {"pgd": 10, "fast": 3}
_REL_CHANGE_FLOOR = 1e-30
_INNER_STALL_TOL = 1e-15


@dataclass
class SolverConfig:
    """Knobs for both solvers.

    ``max_outer_iters=None`` resolves to 10 for pgd and 3 for fast (a small
    iteration budget is enough to preserve rankings). ``ridge=None`` resolves
    to the adaptive default 1e-10 * trace(A^T A)/cols per subproblem; pass 0.0
    to disable regularization entirely. ``eta_override``/``beta_override``
    replace the spectral-bound step sizes of the pgd solver. ``intercept``
    appends a constant-1 feature column. ``instrument`` records per-step
    diagnostics on the returned solution (slower; for analysis and tests).
    """

    algorithm: str = "fast"
    max_outer_iters: int | None = None
    inner_t_iters: int = 100
    tol: float = 1e-6
    ridge: float | None = None
    eta_override: float | None = None
    beta_override: float | None = None
    intercept: bool = False
    instrument: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.max_outer_iters is not None and self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be >= 1")
        if self.inner_t_iters < 1:
            raise ValueError("inner_t_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.ridge is not None and self.ridge < 0:
            raise ValueError("ridge must be nonnegative")

    def resolved_max_outer(self) -> int:
        if self.max_outer_iters is not None:
            return self.max_outer_iters
        return _DEFAULT_OUTER[self.algorithm]


@dataclass
class InnerStepRecord:
    """One instrumented projected-gradient step on t."""

    score_before: float
    score_after: float
    step_sq_norm: float
    beta: float


@dataclass
class WlsrSolution:
    """Final (w, t), the score, and the per-iteration objective trace."""

    w: np.ndarray
    t: SimplexVector
    score: float
    trace: list[float]
    iters: int
    converged: bool
    inner_steps: list[InnerStepRecord] | None = None
    t_trace: list[np.ndarray] | None = field(default=None, repr=False)


def _prepared(x: FeatureMatrix, z: FLabelStack, cfg: SolverConfig):
    if x.n != z.n:
        raise ShapeMismatchError(
            f"features have {x.n} rows but the label stack has {z.n}"
        )
    xmat = np.asarray(x.data)
    if cfg.intercept:
        xmat = np.hstack([xmat, np.ones((xmat.shape[0], 1))])
    zarr = z.to_array()           # (K, N, L)
    zflat = flatten_for_t(z)      # (N*L, K)
    return xmat, zarr, zflat


def _combine(zarr: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Contract the oracle axis: sum_k t_k * slice_k, shape (N, L)."""
    return np.tensordot(t, zarr, axes=1)


def _objective(xmat: np.ndarray, zarr: np.ndarray, w: np.ndarray, t: np.ndarray) -> float:
    r = xmat @ w - _combine(zarr, t)
    return 0.5 * float(np.einsum("ij,ij->", r, r))


def _check_finite(s: float) -> float:
    if not np.isfinite(s):
        raise NonFiniteError(
            f"objective became {s!r}; inputs are likely badly scaled"
        )
    return s


def _rel_change(prev: float, cur: float) -> float:
    return abs(prev - cur) / max(prev, _REL_CHANGE_FLOOR)


def wlsr_objective(x: FeatureMatrix, z: FLabelStack, w, t) -> float:
    """0.5 * ||X w - Z t||_F^2 with the oracle axis contracted by t."""
    tvec = t.values if isinstance(t, SimplexVector) else np.asarray(t, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if w.ndim == 1:
        w = w[:, None]
    xmat, zarr, _ = _prepared(x, z, SolverConfig())
    if w.shape != (xmat.shape[1], z.l):
        raise ShapeMismatchError(
            f"w has shape {w.shape}, expected {(xmat.shape[1], z.l)}"
        )
    if tvec.size != z.k:
        raise ShapeMismatchError(f"t has {tvec.size} entries, expected {z.k}")
    return _objective(xmat, zarr, w, tvec)


def solve_pgd(x: FeatureMatrix, z: FLabelStack, cfg: SolverConfig | None = None) -> WlsrSolution:
    """Alternating projected-gradient minimization with a monotone trace.

    Starts from uniform t and constant w = 1/D, takes one gradient step on w
    per outer iteration (step 1/bound(2 X^T X)) followed by an inner loop of
    projected gradient steps on t (step 1/bound(2 Zf^T Zf) on the flattened
    stack), and stops when the relative objective change drops below ``tol``
    or the outer budget is exhausted.
    """
    cfg = cfg or SolverConfig(algorithm="pgd")
    xmat, zarr, zflat = _prepared(x, z, cfg)
    n, d = xmat.shape
    k, _, l = zarr.shape

    if cfg.eta_override is not None:
        eta = cfg.eta_override
    else:
        bound = spectral_norm_upper_bound(2.0 * (xmat.T @ xmat))
        eta = 1.0 / bound if bound > 0 else 0.0
    if cfg.beta_override is not None:
        beta = cfg.beta_override
    else:
        bound = spectral_norm_upper_bound(2.0 * (zflat.T @ zflat))
        beta = 1.0 / bound if bound > 0 else 0.0

    w = np.full((d, l), 1.0 / d)
    t = np.full(k, 1.0 / k)
    inner_records: list[InnerStepRecord] | None = [] if cfg.instrument else None
    t_trace: list[np.ndarray] | None = [t.copy()] if cfg.instrument else None

    trace = [_check_finite(_objective(xmat, zarr, w, t))]
    converged = False
    iters = 0
    for _ in range(cfg.resolved_max_outer()):
        grad_w = xmat.T @ (xmat @ w - _combine(zarr, t))
        w = w - eta * grad_w
        if not np.isfinite(w).all():
            raise NonFiniteError(
                "regression weights diverged to NaN/Inf; "
                "lower the step size or rescale the input"
            )

        target = (xmat @ w).ravel()
        if beta > 0:
            for _ in range(cfg.inner_t_iters):
                resid = zflat @ t - target
                t_next = project_simplex(t - beta * (zflat.T @ resid)).values
                if inner_records is not None:
                    before = 0.5 * float(resid @ resid)
                    r_next = zflat @ t_next - target
                    after = 0.5 * float(r_next @ r_next)
                    delta = t - t_next
                    inner_records.append(
                        InnerStepRecord(before, after, float(delta @ delta), beta)
                    )
                moved = np.abs(t_next - t).max()
                t = t_next
                if moved <= _INNER_STALL_TOL:
                    break
        if t_trace is not None:
            t_trace.append(t.copy())

        iters += 1
        s = _check_finite(_objective(xmat, zarr, w, t))
        trace.append(s)
        if _rel_change(trace[-2], s) <= cfg.tol:
            converged = True
            break

    return WlsrSolution(
        w=w,
        t=SimplexVector(t),
        score=trace[-1],
        trace=trace,
        iters=iters,
        converged=converged,
        inner_steps=inner_records,
        t_trace=t_trace,
    )


def solve_fast(x: FeatureMatrix, z: FLabelStack, cfg: SolverConfig | None = None) -> WlsrSolution:
    """Alternating exact least squares with sparsemax projection.

    Each outer iteration solves the ridge normal equations for w given t,
    then for the raw t given w, and projects the raw t with sparsemax. Both
    gram matrices are fixed across iterations, so they are factorized once.
    Convergence is empirical; only termination and the final score are
    guaranteed, not a monotone trace.
    """
    cfg = cfg or SolverConfig(algorithm="fast")
    xmat, zarr, zflat = _prepared(x, z, cfg)
    k = zarr.shape[0]

    ridge_x = cfg.ridge if cfg.ridge is not None else default_ridge(xmat)
    ridge_z = cfg.ridge if cfg.ridge is not None else default_ridge(zflat)
    x_solver = NormalEquationsSolver(xmat, ridge_x)
    z_solver = NormalEquationsSolver(zflat, ridge_z)

    w = np.full((xmat.shape[1], zarr.shape[2]), 1.0 / xmat.shape[1])
    t = np.full(k, 1.0 / k)
    t_trace: list[np.ndarray] | None = [t.copy()] if cfg.instrument else None

    trace = [_check_finite(_objective(xmat, zarr, w, t))]
    converged = False
    iters = 0
    for _ in range(cfg.resolved_max_outer()):
        w = x_solver.solve_lstsq(_combine(zarr, t))
        t_raw = z_solver.solve_lstsq((xmat @ w).ravel())
        t = sparsemax(t_raw).values
        if t_trace is not None:
            t_trace.append(t.copy())

        iters += 1
        s = _check_finite(_objective(xmat, zarr, w, t))
        trace.append(s)
        if _rel_change(trace[-2], s) <= cfg.tol:
            converged = True
            break

    return WlsrSolution(
        w=w,
        t=SimplexVector(t),
        score=trace[-1],
        trace=trace,
        iters=iters,
        converged=converged,
        t_trace=t_trace,
    )


def solve(x: FeatureMatrix, z: FLabelStack, cfg: SolverConfig | None = None) -> WlsrSolution:
    """Dispatch on ``cfg.algorithm``."""
    cfg = cfg or SolverConfig()
    if cfg.algorithm == "pgd":
        return solve_pgd(x, z, cfg)
    return solve_fast(x, z, cfg)


def emms_score(x: FeatureMatrix, z: FLabelStack, cfg: SolverConfig | None = None) -> float:
    """Transferability score: the negated final objective, higher is better."""
    return -solve(x, z, cfg).score
