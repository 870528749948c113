"""Rank-quality measures between transferability scores and ground truth.

Sign convention throughout: sgn(x) is -1 for x < 0 and +1 otherwise, so tied
pairs count as concordant. The weighted variants use hyperbolic additive rank
weights: element weight 1/(r+1) where r is the zero-based rank by descending
ground-truth score (weighting by predicted rank instead is the documented
alternative; absolute weighted values depend on this choice, orderings of
methods should not).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadKError, TooFewModelsError, ZeroVarianceError


@dataclass(frozen=True)
class ScorePair:
    """One model's transferability score next to its fine-tuning score."""

    model_id: str
    t_score: float
    g_score: float


def _arrays(pairs) -> tuple[np.ndarray, np.ndarray, list[str]]:
    pairs = list(pairs)
    if len(pairs) < 2:
        raise TooFewModelsError(f"need at least 2 models, got {len(pairs)}")
    t = np.array([p.t_score for p in pairs], dtype=np.float64)
    g = np.array([p.g_score for p in pairs], dtype=np.float64)
    return t, g, [p.model_id for p in pairs]


def _pair_signs(values: np.ndarray) -> np.ndarray:
    """sgn(v_i - v_j) over all i < j, ties counting as +1."""
    m = values.size
    iu = np.triu_indices(m, k=1)
    diffs = values[iu[0]] - values[iu[1]]
    return np.where(diffs < 0, -1.0, 1.0)


def _gt_rank_weights(g: np.ndarray) -> np.ndarray:
    """1/(rank+1) with rank by descending g_score (stable on ties)."""
    order = np.argsort(-g, kind="stable")
    ranks = np.empty_like(order)
    ranks[order] = np.arange(g.size)
    return 1.0 / (ranks + 1.0)


def kendall_tau(pairs) -> float:
    """Concordant-minus-discordant pair ratio in [-1, 1]."""
    t, g, _ = _arrays(pairs)
    m = t.size
    concordance = _pair_signs(g) * _pair_signs(t)
    return 2.0 / (m * (m - 1)) * float(concordance.sum())


def weighted_kendall_tau(pairs) -> float:
    """Kendall tau with pairs up-weighted toward the top-ranked models.

    A pair's weight is the sum of its two element weights; the result is the
    weighted concordance sum over the total weight.
    """
    t, g, _ = _arrays(pairs)
    weights = _gt_rank_weights(g)
    iu = np.triu_indices(t.size, k=1)
    pair_w = weights[iu[0]] + weights[iu[1]]
    concordance = _pair_signs(g) * _pair_signs(t)
    return float((pair_w * concordance).sum() / pair_w.sum())


def _require_spread(values: np.ndarray, name: str) -> None:
    # Constant coordinates are degenerate even when weighted arithmetic leaves
    # a rounding-level nonzero variance.
    if values.max() == values.min():
        raise ZeroVarianceError(f"{name} undefined: a coordinate has zero variance")


def pearson(pairs) -> float:
    """Product-moment correlation between t_score and g_score."""
    t, g, _ = _arrays(pairs)
    _require_spread(t, "pearson")
    _require_spread(g, "pearson")
    tc = t - t.mean()
    gc = g - g.mean()
    var_t = float(tc @ tc)
    var_g = float(gc @ gc)
    if var_t == 0.0 or var_g == 0.0:
        raise ZeroVarianceError("pearson undefined: a coordinate has zero variance")
    return float(tc @ gc) / np.sqrt(var_t * var_g)


def weighted_pearson(pairs) -> float:
    """Pearson correlation under the hyperbolic ground-truth rank weights."""
    t, g, _ = _arrays(pairs)
    _require_spread(t, "weighted pearson")
    _require_spread(g, "weighted pearson")
    u = _gt_rank_weights(g)
    u = u / u.sum()
    tc = t - float(u @ t)
    gc = g - float(u @ g)
    var_t = float(u @ (tc * tc))
    var_g = float(u @ (gc * gc))
    if var_t == 0.0 or var_g == 0.0:
        raise ZeroVarianceError("weighted pearson undefined: a coordinate has zero variance")
    return float(u @ (tc * gc)) / np.sqrt(var_t * var_g)


def rel_at_k(pairs, k: int) -> float:
    """Best ground truth among the top-k predicted models over the best overall.

    Ties in t_score break by model_id lexicographic order so the selection is
    deterministic.
    """
    t, g, ids = _arrays(pairs)
    m = t.size
    if not 1 <= k <= m:
        raise BadKError(f"k must be in [1, {m}], got {k}")
    order = sorted(range(m), key=lambda i: (-t[i], ids[i]))
    top = max(g[i] for i in order[:k])
    return float(top / g.max())
