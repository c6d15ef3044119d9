"""Tests for the coordinate-descent solver, the enumeration oracle, the
penalty path, and sign-constrained least squares."""

import numpy as np
import pytest

from refit_lab import (
    Dataset,
    NoConvergence,
    SolverOptions,
    TooLarge,
    fit_from_beta,
    kkt_violation,
    lambda_max,
    lasso_bruteforce_oracle,
    lasso_cd,
    lasso_objective,
    lasso_path,
    sign_constrained_ls,
)

from conftest import (
    lam_at,
    random_dataset,
    sign_ls_enumeration_oracle,
    sign_ls_objective,
)


def small_dataset(seed, n=10, p=5):
    rng = np.random.default_rng(seed)
    return Dataset.from_arrays(rng.standard_normal((n, p)),
                               rng.standard_normal(n))


class TestLassoCD:
    def test_single_column_closed_form(self):
        d = Dataset.from_arrays(np.array([[1.0], [1.0]]), np.array([1.0, 1.0]))
        fit = lasso_cd(d, 0.5)
        np.testing.assert_allclose(fit.beta, [0.5], atol=1e-12)
        assert fit.support == (0,)

    @pytest.mark.parametrize("factor", [1.0, 1.5, 10.0])
    def test_exact_zero_at_and_beyond_lambda_max(self, factor):
        d = random_dataset(11)
        fit = lasso_cd(d, factor * lambda_max(d))
        np.testing.assert_array_equal(fit.beta, np.zeros(d.p))
        assert fit.support == ()

    def test_rejects_nonpositive_lambda(self):
        d = small_dataset(0)
        with pytest.raises(ValueError):
            lasso_cd(d, 0.0)
        with pytest.raises(ValueError):
            lasso_cd(d, -1.0)

    def test_rejects_bad_warm_start_shape(self):
        d = small_dataset(1)
        with pytest.raises(ValueError):
            lasso_cd(d, 0.1, SolverOptions(warm_start=np.zeros(3)))

    @pytest.mark.parametrize("seed", range(8))
    @pytest.mark.parametrize("frac", [0.1, 0.5, 1.0])
    def test_matches_enumeration_oracle(self, seed, frac):
        d = small_dataset(seed, n=9, p=4)
        lam = lam_at(d, frac)
        got = lasso_cd(d, lam)
        want = lasso_bruteforce_oracle(d, lam)
        obj_gap = abs(lasso_objective(d, got.beta, lam)
                      - lasso_objective(d, want.beta, lam))
        assert obj_gap <= 1e-10
        np.testing.assert_allclose(got.beta, want.beta, atol=1e-6)

    def test_kkt_residual_certified(self):
        d = random_dataset(12, n=25, p=10)
        fit = lasso_cd(d, lam_at(d, 0.3))
        assert fit.kkt_residual <= 1e-10
        assert kkt_violation(d, fit.beta, fit.lam) <= 1e-10

    def test_warm_start_reaches_same_solution(self):
        d = random_dataset(13, n=20, p=8)
        lam = lam_at(d, 0.4)
        cold = lasso_cd(d, lam)
        rng = np.random.default_rng(99)
        warm = lasso_cd(d, lam, SolverOptions(warm_start=rng.standard_normal(8)))
        np.testing.assert_allclose(cold.beta, warm.beta, atol=1e-8)

    def test_budget_exhaustion_raises_with_iterate(self):
        d = random_dataset(14, n=30, p=12)
        with pytest.raises(NoConvergence) as info:
            lasso_cd(d, lam_at(d, 0.2), SolverOptions(tol=1e-300, max_iters=3))
        err = info.value
        assert err.beta is not None and err.beta.shape == (12,)
        assert err.residual > 0.0

    def test_objective_nonincreasing_across_sweeps(self):
        d = random_dataset(15, n=30, p=12)
        lam = lam_at(d, 0.2)
        objectives = []
        for sweeps in range(1, 9):
            with pytest.raises(NoConvergence) as info:
                lasso_cd(d, lam, SolverOptions(tol=1e-300, max_iters=sweeps))
            objectives.append(lasso_objective(d, info.value.beta, lam))
        assert all(b <= a + 1e-12 for a, b in zip(objectives, objectives[1:]))


class TestLassoPath:
    def test_grid_of_lambda_max_gives_zero_fit(self):
        d = random_dataset(16)
        fits = lasso_path(d, [lambda_max(d)])
        assert len(fits) == 1
        np.testing.assert_array_equal(fits[0].beta, np.zeros(d.p))

    def test_empty_grid_gives_empty_list(self):
        assert lasso_path(random_dataset(17), []) == []

    def test_warm_fit_matches_cold_fit(self):
        d = random_dataset(18, n=24, p=9)
        lmax = lambda_max(d)
        fits = lasso_path(d, [lmax, lmax / 2.0])
        cold = lasso_cd(d, lmax / 2.0)
        np.testing.assert_allclose(fits[1].beta, cold.beta, atol=1e-8)

    @pytest.mark.parametrize("seed", [19, 20])
    def test_every_grid_point_matches_cold(self, seed):
        d = random_dataset(seed, n=22, p=8)
        lmax = lambda_max(d)
        grid = np.geomspace(lmax, 0.05 * lmax, 6)
        for fit, lam in zip(lasso_path(d, grid), grid):
            cold = lasso_cd(d, lam)
            np.testing.assert_allclose(fit.beta, cold.beta, atol=1e-8)

    def test_rejects_nondescending_grid(self):
        d = random_dataset(21)
        with pytest.raises(ValueError):
            lasso_path(d, [0.1, 0.2])
        with pytest.raises(ValueError):
            lasso_path(d, [0.2, 0.2])

    def test_rejects_nonpositive_grid(self):
        with pytest.raises(ValueError):
            lasso_path(random_dataset(22), [0.1, 0.0])


class TestBruteForceOracle:
    def test_single_column_closed_form(self):
        d = Dataset.from_arrays(np.array([[1.0], [1.0]]), np.array([1.0, 1.0]))
        fit = lasso_bruteforce_oracle(d, 0.5)
        np.testing.assert_allclose(fit.beta, [0.5], atol=1e-12)

    def test_zero_beyond_lambda_max(self):
        d = small_dataset(23, n=8, p=4)
        fit = lasso_bruteforce_oracle(d, 1.5 * lambda_max(d))
        np.testing.assert_array_equal(fit.beta, np.zeros(4))

    def test_objective_agrees_with_solver(self):
        d = small_dataset(0, n=8, p=4)
        lam = lam_at(d, 0.35)
        gap = abs(lasso_objective(d, lasso_cd(d, lam).beta, lam)
                  - lasso_objective(d, lasso_bruteforce_oracle(d, lam).beta, lam))
        assert gap <= 1e-10

    def test_dimension_cap(self):
        d = small_dataset(24, n=10, p=7)
        with pytest.raises(TooLarge):
            lasso_bruteforce_oracle(d, 0.1)

    def test_rejects_nonpositive_lambda(self):
        with pytest.raises(ValueError):
            lasso_bruteforce_oracle(small_dataset(25, p=3), 0.0)


class TestFitFromBeta:
    def test_reconstructs_solver_fields(self):
        d = random_dataset(26, n=20, p=6)
        fit = lasso_cd(d, lam_at(d, 0.4))
        rebuilt = fit_from_beta(d, fit.beta, fit.lam)
        np.testing.assert_array_equal(rebuilt.beta, fit.beta)
        np.testing.assert_allclose(rebuilt.rho, fit.rho, atol=1e-12)
        assert rebuilt.support == fit.support
        assert rebuilt.equicorrelation == fit.equicorrelation
        assert rebuilt.kkt_residual == pytest.approx(fit.kkt_residual, abs=1e-12)

    def test_rejects_wrong_shape(self):
        d = random_dataset(27, n=10, p=4)
        with pytest.raises(ValueError):
            fit_from_beta(d, np.zeros(5), 0.1)


class TestSignConstrainedLS:
    @pytest.mark.parametrize("second", [0.0, 7.0, -3.0])
    def test_one_column_unconstrained_optimum(self, second):
        X_E = np.array([[np.sqrt(2.0)], [0.0]])
        y = np.array([2.0 * np.sqrt(2.0), second])
        beta = sign_constrained_ls(X_E, y, np.array([1.0]))
        np.testing.assert_allclose(beta, [2.0], atol=1e-10)

    def test_binding_constraint_gives_zero(self):
        X_E = np.array([[np.sqrt(2.0)], [0.0]])
        y = np.array([2.0 * np.sqrt(2.0), 0.0])
        beta = sign_constrained_ls(X_E, y, np.array([-1.0]))
        np.testing.assert_array_equal(beta, [0.0])
        # The flipped column is anti-correlated with y, so zero is optimal.
        assert float((X_E[:, 0] * -1.0) @ y) < 0.0

    def test_rejects_invalid_signs(self):
        X_E = np.ones((4, 2))
        y = np.ones(4)
        with pytest.raises(ValueError):
            sign_constrained_ls(X_E, y, np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            sign_constrained_ls(X_E, y, np.array([2.0, 1.0]))

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_binding_set_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(6, 20))
        m = int(rng.integers(1, 9))
        X_E = rng.standard_normal((n, m))
        y = rng.standard_normal(n)
        signs = rng.choice([-1.0, 1.0], size=m)
        got = sign_constrained_ls(X_E, y, signs)
        want = sign_ls_enumeration_oracle(X_E, y, signs)
        assert np.all(signs * got >= -1e-12)
        got_obj = sign_ls_objective(X_E, y, got)
        want_obj = sign_ls_objective(X_E, y, want)
        assert got_obj <= want_obj + 1e-10
        np.testing.assert_allclose(X_E @ got, X_E @ want, atol=1e-6)

    def test_rank_deficient_duplicate_columns(self):
        rng = np.random.default_rng(77)
        base = rng.standard_normal((12, 2))
        X_E = np.column_stack([base[:, 0], base[:, 0], base[:, 1]])
        y = base @ np.array([1.5, -0.5]) + 0.1 * rng.standard_normal(12)
        signs = np.array([1.0, 1.0, -1.0])
        got = sign_constrained_ls(X_E, y, signs)
        want = sign_ls_enumeration_oracle(X_E, y, signs)
        assert np.all(signs * got >= -1e-12)
        assert sign_ls_objective(X_E, y, got) <= \
            sign_ls_objective(X_E, y, want) + 1e-10
