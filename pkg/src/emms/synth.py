"""Synthetic noisy-oracle regression tasks.

The generative model: features X are iid standard normal, the true mapping
w* is iid normal scaled by 1/sqrt(D), the latent embedding is
z = X w* + eps with eps ~ N(0, sigma_0^2 I), and oracle k observes
z_k = z + nu_k with nu_k ~ N(0, sigma_k^2 I). ``sigma`` is therefore
(K+1)-long: the regression error first, then one level per oracle.

Everything is a pure function of the seed (numpy default_rng / PCG64,
recorded as ``GENERATOR_NAME`` for reproducibility notes in emitted suites).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labels import FeatureMatrix, FLabelStack, normalize_flabels, stack_flabels

GENERATOR_NAME = "numpy.random.default_rng(PCG64)"


@dataclass(frozen=True, eq=False)
class SyntheticTask:
    """One generated (X, Z, w*, sigma) instance."""

    x: FeatureMatrix
    z: FLabelStack
    true_w: np.ndarray
    sigma: tuple[float, ...]
    seed: int


def generate_task(
    n: int,
    d: int,
    l: int,
    k: int,
    sigma,
    seed: int,
    normalize_rows: bool = False,
) -> SyntheticTask:
    """Generate a task; deterministic for a fixed seed.

    ``normalize_rows=True`` additionally l2-normalizes each slice's rows to
    mimic real encoder output; by default slices are left unnormalized, as
    the generative model produces them.
    """
    if min(n, d, l, k) < 1:
        raise ValueError("n, d, l, k must all be >= 1")
    sigma = tuple(float(s) for s in sigma)
    if len(sigma) != k + 1:
        raise ValueError(f"sigma must have {k + 1} entries (sigma_0 then one per oracle)")
    if any(s < 0 for s in sigma):
        raise ValueError("noise levels must be nonnegative")

    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    true_w = rng.standard_normal((d, l)) / np.sqrt(d)
    z_latent = x @ true_w + sigma[0] * rng.standard_normal((n, l))
    slices = [z_latent + sigma[1 + j] * rng.standard_normal((n, l)) for j in range(k)]
    if normalize_rows:
        slices = [normalize_flabels(s) for s in slices]
    return SyntheticTask(
        x=FeatureMatrix(x),
        z=stack_flabels(slices),
        true_w=true_w,
        sigma=sigma,
        seed=seed,
    )


def generate_model_suite(
    m: int,
    quality,
    *,
    n: int,
    d: int,
    l: int,
    k: int,
    sigma,
    seed: int,
) -> tuple[SyntheticTask, list[tuple[str, FeatureMatrix, float]]]:
    """Fake model zoo over one task: model i's features are a convex mixture
    quality_i * signal + (1 - quality_i) * fresh noise, and quality_i doubles
    as its synthetic ground-truth score.

    Returns the shared task (its z stack is what every model is scored
    against) and the (model_id, features, g_score) list.
    """
    quality = [float(q) for q in quality]
    if len(quality) != m:
        raise ValueError(f"quality must have {m} entries")
    if any(not 0.0 <= q <= 1.0 for q in quality):
        raise ValueError("quality entries must lie in [0, 1]")

    task = generate_task(n, d, l, k, sigma, seed)
    noise_rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))
    signal = np.asarray(task.x.data)
    models = []
    for i, q in enumerate(quality):
        noise = noise_rng.standard_normal((n, d))
        feats = FeatureMatrix(q * signal + (1.0 - q) * noise)
        models.append((f"model_{i:02d}", feats, q))
    return task, models
