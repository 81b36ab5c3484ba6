import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalrank import regression
from causalrank.errors import (
    ConvergenceError,
    DegenerateLeverageError,
    DimensionError,
    InputError,
    InsufficientSamplesError,
    SingularityError,
)
from conftest import brute_force_loo


def soft(z, lam):
    return np.sign(z) * max(abs(z) - lam, 0.0)


class TestOls:
    def test_orthonormal_identity(self, rng):
        Q, _ = np.linalg.qr(rng.standard_normal((3, 2)))
        np.testing.assert_allclose(regression.ols_fit(Q, Q), np.eye(2), atol=1e-12)

    def test_zero_design_min_norm(self, rng):
        coef = regression.ols_fit(np.zeros((4, 2)), rng.standard_normal((4, 3)))
        assert coef.shape == (3, 2)
        assert np.all(coef == 0)

    def test_noiseless_recovery_matches_normal_equations(self, rng):
        X = rng.standard_normal((10, 3))
        C = rng.standard_normal((2, 3))
        Y = X @ C.T
        oracle = np.linalg.solve(X.T @ X, X.T @ Y).T
        got = regression.ols_fit(X, Y)
        np.testing.assert_allclose(got, C, atol=1e-10)
        np.testing.assert_allclose(got, oracle, atol=1e-10)

    def test_vector_response(self, rng):
        X = rng.standard_normal((20, 3))
        assert regression.ols_fit(X, X[:, 0]).shape == (3,)

    def test_rank_deficient_is_minimum_norm(self, rng):
        x = rng.standard_normal(30)
        X = np.column_stack([x, x])
        np.testing.assert_allclose(regression.ols_fit(X, 2 * x), [1.0, 1.0], atol=1e-10)

    def test_errors(self, rng):
        with pytest.raises(DimensionError):
            regression.ols_fit(np.ones((4, 2)), np.ones(5))
        with pytest.raises(InputError):
            regression.ols_fit(np.array([[np.nan, 1.0]]), np.ones(1))

    def test_perturbation_never_improves(self, rng):
        for _ in range(20):
            X = rng.standard_normal((15, 3))
            Y = rng.standard_normal((15, 2))
            A = regression.ols_fit(X, Y)
            base = np.sum((Y - X @ A.T) ** 2)
            for idx in np.ndindex(A.shape):
                for eps in (1e-3, -1e-3):
                    B = A.copy()
                    B[idx] += eps
                    assert np.sum((Y - X @ B.T) ** 2) >= base

    def test_deterministic(self, rng):
        X = rng.standard_normal((40, 5))
        Y = rng.standard_normal((40, 2))
        assert regression.ols_fit(X, Y).tobytes() == regression.ols_fit(X, Y).tobytes()


class TestRidge:
    def test_kappa_zero_is_ols(self, rng):
        X = rng.standard_normal((30, 4))
        Y = rng.standard_normal((30, 2))
        np.testing.assert_allclose(regression.ridge_fit(X, Y, 0.0), regression.ols_fit(X, Y), atol=1e-10)

    def test_infinite_shrinkage(self, rng):
        X = rng.standard_normal((50, 3))
        Y = rng.standard_normal((50, 3))
        assert np.max(np.abs(regression.ridge_fit(X, Y, 1e12))) < 1e-6

    def test_scalar_closed_form(self, rng):
        x = rng.standard_normal(25)
        y = 0.7 * x + rng.standard_normal(25)
        kappa = 3.5
        got = regression.ridge_fit(x[:, None], y, kappa)
        assert got.shape == (1,)
        assert got[0] == pytest.approx((x @ y) / (x @ x + kappa), rel=1e-12)

    def test_negative_kappa(self, rng):
        with pytest.raises(InputError):
            regression.ridge_fit(np.ones((3, 1)), np.ones(3), -1.0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.0, 50.0), st.floats(0.0, 50.0))
    def test_norm_monotone_in_kappa(self, seed, k1, k2):
        k1, k2 = sorted((k1, k2))
        r = np.random.default_rng(seed)
        X = r.standard_normal((20, 4))
        Y = r.standard_normal((20, 2))
        n1 = np.linalg.norm(regression.ridge_fit(X, Y, k1))
        n2 = np.linalg.norm(regression.ridge_fit(X, Y, k2))
        assert n1 >= n2 - 1e-12


def kkt_violation(X, y, b, lam):
    n = X.shape[0]
    grad = X.T @ (y - X @ b) / n
    worst = 0.0
    for g, bi in zip(grad, b):
        if bi == 0:
            worst = max(worst, abs(g) - lam)
        else:
            worst = max(worst, abs(g - lam * np.sign(bi)))
    return worst


class TestLasso:
    def test_lambda_zero_is_ols(self, rng):
        X = rng.standard_normal((60, 4))
        y = X @ np.array([1.0, -2.0, 0.0, 0.5]) + rng.standard_normal(60)
        b = regression.lasso_fit(X, y, 0.0, tol=1e-10)
        np.testing.assert_allclose(b, regression.ols_fit(X, y), atol=1e-6)

    def test_above_kkt_threshold_all_zero(self, rng):
        X = rng.standard_normal((40, 5))
        y = rng.standard_normal(40)
        lam_max = np.max(np.abs(X.T @ y)) / 40
        b = regression.lasso_fit(X, y, lam_max)
        assert np.all(b == 0)
        assert kkt_violation(X, y, b, lam_max) <= 1e-12
        # just below the threshold something enters
        assert np.any(regression.lasso_fit(X, y, 0.99 * lam_max) != 0)

    def test_single_predictor_soft_threshold(self, rng):
        x = rng.standard_normal(30)
        y = 0.4 * x + rng.standard_normal(30)
        n = 30
        for lam in (0.0, 0.05, 0.2, 5.0):
            expected = soft(x @ y / n, lam) / (x @ x / n)
            assert regression.lasso_fit(x[:, None], y, lam)[0] == pytest.approx(expected, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10_000), st.floats(0.001, 1.0))
    def test_kkt(self, seed, lam):
        r = np.random.default_rng(seed)
        X = r.standard_normal((50, 6))
        y = X[:, 0] - 0.5 * X[:, 3] + r.standard_normal(50)
        b = regression.lasso_fit(X, y, lam, tol=1e-9)
        assert kkt_violation(X, y, b, lam) <= 1e-6

    def test_convergence_error_carries_sweeps(self, rng):
        X = rng.standard_normal((50, 6))
        y = rng.standard_normal(50)
        with pytest.raises(ConvergenceError) as info:
            regression.lasso_fit(X, y, 1e-4, tol=1e-300, max_sweeps=3)
        assert info.value.iterations == 3

    def test_path_matches_individual_fits(self, rng):
        X = rng.standard_normal((50, 4))
        y = X[:, 1] + rng.standard_normal(50)
        grid = [0.5, 0.1, 0.01]
        path = regression.lasso_path(X, y, grid, tol=1e-10)
        for lam, row in zip(grid, path):
            np.testing.assert_allclose(row, regression.lasso_fit(X, y, lam, tol=1e-10), atol=1e-7)

    def test_negative_lambda(self, rng):
        with pytest.raises(InputError):
            regression.lasso_fit(np.ones((3, 1)), np.ones(3), -0.1)


class TestLooRss:
    def test_perfect_fit(self, rng):
        X = rng.standard_normal((20, 3))
        y = X @ np.array([1.0, 2.0, -1.0])
        assert regression.loo_rss(X, y) < 1e-16 * (y @ y)

    def test_single_predictor_brute_force(self, rng):
        X = rng.standard_normal((5, 1))
        y = rng.standard_normal(5)
        assert regression.loo_rss(X, y) == pytest.approx(brute_force_loo(X, y), rel=1e-10)

    def test_constant_column_brute_force(self, rng):
        X = np.column_stack([np.ones(12), rng.standard_normal(12)])
        y = rng.standard_normal(12)
        assert regression.loo_rss(X, y) == pytest.approx(brute_force_loo(X, y), rel=1e-10)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000), st.integers(3, 50), st.integers(1, 6))
    def test_matches_brute_force(self, seed, n, p):
        if n <= p + 1:
            p = n - 2
        r = np.random.default_rng(seed)
        X = r.standard_normal((n, p))
        y = r.standard_normal(n)
        assert regression.loo_rss(X, y) == pytest.approx(brute_force_loo(X, y), rel=1e-8)

    def test_degenerate_leverage(self):
        X = np.zeros((6, 1))
        X[0, 0] = 1.0
        with pytest.raises(DegenerateLeverageError):
            regression.loo_rss(X, np.arange(6.0))

    def test_singular_and_short(self, rng):
        x = rng.standard_normal(10)
        with pytest.raises(SingularityError):
            regression.loo_rss(np.column_stack([x, x]), rng.standard_normal(10))
        with pytest.raises(InsufficientSamplesError):
            regression.loo_rss(rng.standard_normal((3, 3)), rng.standard_normal(3))

    def test_empty_design(self, rng):
        y = rng.standard_normal(8)
        assert regression.loo_rss(np.empty((8, 0)), y) == pytest.approx(y @ y)


def literal_residual_stats(X):
    n, d = X.shape
    resvar = np.empty(d)
    pcorr = np.eye(d)
    for j in range(d):
        others = [k for k in range(d) if k != j]
        b = np.linalg.lstsq(X[:, others], X[:, j], rcond=None)[0]
        e = X[:, j] - X[:, others] @ b
        resvar[j] = e @ e / (n - d + 1)
    for i in range(d):
        for j in range(i + 1, d):
            rest = [k for k in range(d) if k not in (i, j)]
            ri, rj = X[:, i].copy(), X[:, j].copy()
            if rest:
                Z = X[:, rest]
                ri -= Z @ np.linalg.lstsq(Z, ri, rcond=None)[0]
                rj -= Z @ np.linalg.lstsq(Z, rj, rcond=None)[0]
            pcorr[i, j] = pcorr[j, i] = ri @ rj / np.sqrt((ri @ ri) * (rj @ rj))
    return resvar, pcorr


class TestResidualStats:
    def test_matches_literal_regressions(self, rng):
        X = rng.standard_normal((40, 5)) @ rng.standard_normal((5, 5))
        resvar, pcorr = regression.residual_stats(X)
        lv, lp = literal_residual_stats(X)
        np.testing.assert_allclose(resvar, lv, rtol=1e-10)
        np.testing.assert_allclose(pcorr, lp, atol=1e-10)

    def test_independent_columns(self, rng):
        X = rng.standard_normal((2000, 3))
        _, pcorr = regression.residual_stats(X - X.mean(0))
        off = pcorr[~np.eye(3, dtype=bool)]
        assert np.max(np.abs(off)) < 0.1

    def test_collinear_raises(self, rng):
        x = rng.standard_normal(50)
        X = np.column_stack([x, x, rng.standard_normal(50)])
        with pytest.raises(SingularityError):
            regression.residual_stats(X)

    def test_two_columns_plain_correlation(self, rng):
        X = rng.standard_normal((100, 2))
        X[:, 1] += 0.5 * X[:, 0]
        X -= X.mean(0)
        _, pcorr = regression.residual_stats(X)
        assert pcorr[0, 1] == pytest.approx(np.corrcoef(X.T)[0, 1], rel=1e-12)

    def test_insufficient_samples(self, rng):
        with pytest.raises(InsufficientSamplesError):
            regression.residual_stats(rng.standard_normal((3, 3)))
