import numpy as np
import pytest
import scipy.stats

from emms.errors import TooFewModelsError, ZeroVarianceError
from emms.metrics import ScorePair, kendall_tau, pearson
from emms.solver import SolverConfig, emms_score, solve_pgd
from emms.synth import generate_model_suite, generate_task


class TestGenerateTask:
    def test_deterministic_for_fixed_seed(self):
        a = generate_task(n=12, d=4, l=2, k=3, sigma=(0.1, 0.2, 0.3, 0.4), seed=9)
        b = generate_task(n=12, d=4, l=2, k=3, sigma=(0.1, 0.2, 0.3, 0.4), seed=9)
        assert np.array_equal(a.x.data, b.x.data)
        assert np.array_equal(a.true_w, b.true_w)
        for sa, sb in zip(a.z.slices, b.z.slices):
            assert np.array_equal(sa, sb)

    def test_noiseless_slices_equal_signal(self):
        task = generate_task(n=10, d=3, l=2, k=3, sigma=(0.0, 0.0, 0.0, 0.0), seed=10)
        signal = np.asarray(task.x.data) @ task.true_w
        for s in task.z.slices:
            np.testing.assert_allclose(s, signal, atol=1e-15)

    def test_sigma_length_validated(self):
        with pytest.raises(ValueError):
            generate_task(n=5, d=2, l=1, k=2, sigma=(0.1, 0.2), seed=0)
        with pytest.raises(ValueError):
            generate_task(n=5, d=2, l=1, k=1, sigma=(0.1, -0.2), seed=0)

    def test_empirical_noise_levels(self):
        # sigma_0 = 0 so the per-slice deviation from the signal is exactly nu_k
        sigmas = (0.0, 0.5, 2.0)
        task = generate_task(n=2600, d=4, l=4, k=2, sigma=sigmas, seed=11)
        signal = np.asarray(task.x.data) @ task.true_w
        for j, s in enumerate(task.z.slices):
            measured = float(np.std(np.asarray(s) - signal))
            assert abs(measured - sigmas[1 + j]) <= 0.1 * sigmas[1 + j]

    def test_normalize_rows_flag(self):
        task = generate_task(n=10, d=3, l=4, k=2, sigma=(0.1, 0.2, 0.3), seed=12, normalize_rows=True)
        for s in task.z.slices:
            np.testing.assert_allclose(np.linalg.norm(s, axis=1), 1.0, atol=1e-10)

    def test_clean_oracle_attracts_t_mass(self):
        hits = 0
        for seed in range(20):
            task = generate_task(n=100, d=8, l=4, k=2, sigma=(0.0, 0.01, 10.0), seed=seed)
            sol = solve_pgd(task.x, task.z, SolverConfig(algorithm="pgd", max_outer_iters=30, tol=1e-12))
            hits += sol.t.values[0] >= 0.9
        assert hits >= 18


class TestGenerateModelSuite:
    def test_quality_extremes_rank_correctly(self):
        wins = 0
        for seed in range(40):
            task, models = generate_model_suite(
                2, (1.0, 0.0), n=40, d=5, l=2, k=2, sigma=(0.3, 0.2, 0.6), seed=seed
            )
            scores = [emms_score(f, task.z) for _, f, _ in models]
            wins += scores[0] > scores[1]
        assert wins >= 38

    def test_equal_quality_degenerates_gracefully(self):
        task, models = generate_model_suite(
            3, (0.5, 0.5, 0.5), n=30, d=4, l=2, k=2, sigma=(0.3, 0.2, 0.6), seed=3
        )
        pairs = [ScorePair(mid, emms_score(f, task.z), g) for mid, f, g in models]
        with pytest.raises(ZeroVarianceError):
            pearson(pairs)
        assert -1.0 <= kendall_tau(pairs) <= 1.0  # ties handled by the sign convention

    def test_single_model_surfaces_too_few(self):
        task, models = generate_model_suite(
            1, (0.7,), n=20, d=3, l=1, k=1, sigma=(0.2, 0.3), seed=4
        )
        pairs = [ScorePair(mid, emms_score(f, task.z), g) for mid, f, g in models]
        with pytest.raises(TooFewModelsError):
            kendall_tau(pairs)

    def test_quality_validation(self):
        with pytest.raises(ValueError):
            generate_model_suite(2, (0.5,), n=10, d=2, l=1, k=1, sigma=(0.1, 0.2), seed=0)
        with pytest.raises(ValueError):
            generate_model_suite(2, (0.5, 1.5), n=10, d=2, l=1, k=1, sigma=(0.1, 0.2), seed=0)

    def test_monotone_quality_gives_monotone_average_score(self):
        quality = np.linspace(0.0, 1.0, 6)
        averaged = np.zeros(6)
        for seed in range(20):
            task, models = generate_model_suite(
                6, quality, n=60, d=6, l=3, k=2, sigma=(0.3, 0.2, 0.6), seed=seed
            )
            averaged += np.array([emms_score(f, task.z) for _, f, _ in models])
        averaged /= 20
        rho = scipy.stats.spearmanr(quality, averaged).statistic
        assert rho >= 0.9
