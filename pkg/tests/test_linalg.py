import numpy as np
import pytest

from emms.errors import NonFiniteInputError, RankDeficientError, ShapeMismatchError
from emms.linalg import as_matrix, least_squares, spectral_norm_upper_bound

from oracles import normal_equations_lstsq, sym_max_abs_eigenvalue


class TestAsMatrix:
    def test_widens_float32(self):
        a = as_matrix(np.array([[1.5, 2.25]], dtype=np.float32))
        assert a.dtype == np.float64
        assert a[0, 0] == 1.5 and a[0, 1] == 2.25

    def test_rejects_nan_and_inf(self):
        with pytest.raises(NonFiniteInputError):
            as_matrix([[1.0, np.nan]])
        with pytest.raises(NonFiniteInputError):
            as_matrix([[np.inf, 0.0]])

    def test_rejects_1d(self):
        with pytest.raises(ShapeMismatchError):
            as_matrix([1.0, 2.0])


class TestLeastSquares:
    def test_identity_design(self):
        w = least_squares(np.eye(2), np.array([[1.0], [0.0]]))
        np.testing.assert_array_equal(w, [[1.0], [0.0]])

    def test_intercept_only_is_mean(self):
        w = least_squares(np.array([[1.0], [1.0]]), np.array([[0.0], [2.0]]))
        np.testing.assert_allclose(w, [[1.0]], atol=1e-14)

    def test_matches_full_pivot_oracle(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((8, 3))
        b = rng.standard_normal((8, 2))
        w = least_squares(a, b)
        expected = normal_equations_lstsq(a, b)
        np.testing.assert_allclose(w, expected, atol=1e-9)

    def test_normal_equation_stationarity(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            a = rng.standard_normal((20, 5))
            b = rng.standard_normal((20, 3))
            w = least_squares(a, b)
            resid = a.T @ (a @ w - b)
            assert np.abs(resid).max() < 1e-8

    def test_rank_deficient_raises_without_ridge(self):
        a = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        b = np.ones((3, 1))
        with pytest.raises(RankDeficientError):
            least_squares(a, b)

    def test_ridge_never_errors_and_converges_to_unridged(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((30, 6))
        b = rng.standard_normal((30, 2))
        w0 = least_squares(a, b)
        diffs = []
        for eps in (1e-4, 1e-8):
            w_eps = least_squares(a, b, ridge=eps)
            diffs.append(np.linalg.norm(w_eps - w0))
        assert diffs[1] < diffs[0]
        assert diffs[1] < 1e-6

        # collinear columns: ridge keeps it solvable
        degenerate = np.column_stack([a[:, 0], a[:, 0]])
        least_squares(degenerate, b, ridge=1e-8)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatchError):
            least_squares(np.eye(3), np.ones((2, 1)))


class TestSpectralNormBound:
    def test_diagonal(self):
        bound = spectral_norm_upper_bound(np.diag([3.0, 1.0]))
        assert 3.0 <= bound <= 3.03

    def test_zero_matrix(self):
        assert spectral_norm_upper_bound(np.zeros((3, 3))) == 0.0

    def test_dominates_bisection_oracle(self):
        rng = np.random.default_rng(14)
        for _ in range(5):
            m = rng.standard_normal((5, 5))
            sym = 0.5 * (m + m.T)
            bound = spectral_norm_upper_bound(sym)
            true_norm = sym_max_abs_eigenvalue(sym)
            assert bound >= true_norm - 1e-9

    def test_dominates_rayleigh_quotients(self):
        rng = np.random.default_rng(15)
        a = rng.standard_normal((7, 4))
        bound = spectral_norm_upper_bound(a)
        for _ in range(100):
            v = rng.standard_normal(4)
            v /= np.linalg.norm(v)
            assert bound >= np.linalg.norm(a @ v) - 1e-12
