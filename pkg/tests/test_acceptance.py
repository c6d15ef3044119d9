"""Acceptance suite: the eleven package-level guarantees.

Each test prints one PASS/FAIL line and asserts it, so a verbose run reads
as a checklist. Random instances are seeded; every run checks the same
cases.
"""

import filecmp
import time

import numpy as np
import pytest

from refit_lab import (
    CVSpec,
    Dataset,
    SyntheticConfig,
    boosted_lasso,
    boosted_support_lasso,
    bregman_iterations,
    bregman_lasso,
    certify_refitting,
    certify_sign_consistency,
    hard_threshold,
    kkt_violation,
    l1ball_refit,
    lambda_max,
    lasso_bruteforce_oracle,
    lasso_cd,
    lasso_objective,
    ls_lasso,
    normalize_columns,
    ortho_bregman,
    ortho_bregman_iterations,
    relaxed_lasso,
    run_scenario,
    sls_lasso,
    soft_threshold,
    summarize,
    write_long_csv,
    write_summary_json,
)

from conftest import ar_dataset


def note(num, ok, label):
    line = f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {label}"
    print(line)
    assert ok, line


def corpus_instance(rng, correlated=False, n_hi=40, p_hi=50):
    n = int(rng.integers(10, n_hi + 1))
    p = int(rng.integers(5, p_hi + 1))
    X = rng.standard_normal((n, p))
    if correlated:
        X = 0.7 * rng.standard_normal((n, 1)) + 0.3 * X
    s = int(rng.integers(1, 6))
    beta = np.zeros(p)
    beta[rng.choice(p, size=min(s, p), replace=False)] = 1.0 + rng.random(min(s, p))
    y = X @ beta + 0.3 * rng.standard_normal(n)
    return Dataset.from_arrays(X, y)


def test_criterion_01_solver_matches_enumeration_oracle():
    rng = np.random.default_rng(1001)
    start = time.monotonic()
    worst_obj = worst_coef = 0.0
    for i in range(200):
        n = int(rng.integers(4, 13))
        p = int(rng.integers(2, 7))
        X = rng.standard_normal((n, p))
        y = rng.standard_normal(n)
        d = Dataset.from_arrays(X, y)
        lam = [0.1, 0.5, 1.0][i % 3] * lambda_max(d)
        beta_cd = lasso_cd(d, lam).beta
        beta_or = lasso_bruteforce_oracle(d, lam).beta
        worst_obj = max(worst_obj, abs(lasso_objective(d, beta_cd, lam)
                                       - lasso_objective(d, beta_or, lam)))
        worst_coef = max(worst_coef, float(np.max(np.abs(beta_cd - beta_or))))
    elapsed = time.monotonic() - start
    note(1, worst_obj <= 1e-10 and worst_coef <= 1e-6 and elapsed < 30.0,
         f"200 instances vs enumeration: objective gap {worst_obj:.2e}, "
         f"coefficient gap {worst_coef:.2e}, {elapsed:.1f}s")


def test_criterion_02_every_fit_satisfies_kkt():
    rng = np.random.default_rng(1002)
    worst = 0.0
    for i in range(60):
        d = corpus_instance(rng, correlated=(i % 3 == 0))
        lam = float(rng.uniform(0.05, 1.0)) * lambda_max(d)
        fit = lasso_cd(d, lam)
        worst = max(worst, fit.kkt_residual, kkt_violation(d, fit.beta, lam))
    note(2, worst <= 1e-8,
         f"60 fits, worst KKT residual {worst:.2e} (reported and recomputed)")


def all_strategy_results(d, fit, lam):
    return [
        ls_lasso(d, fit),
        sls_lasso(d, fit),
        boosted_lasso(d, fit, 0.7 * lam),
        boosted_support_lasso(d, fit, 0.7 * lam),
        bregman_lasso(d, fit, lam),
        relaxed_lasso(d, fit, 0.5),
        l1ball_refit(d, fit),
    ]


def test_criterion_03_all_strategies_certify_refitting():
    rng = np.random.default_rng(1003)
    bad = []
    for i in range(100):
        d = corpus_instance(rng, correlated=(i % 4 == 0))
        lam = float(rng.uniform(0.1, 0.7)) * lambda_max(d)
        fit = lasso_cd(d, lam)
        for result in all_strategy_results(d, fit, lam):
            if not certify_refitting(d, fit, result, tol=1e-9):
                bad.append((i, result.strategy))
    note(3, not bad,
         f"7 strategies x 100 instances certified at 1e-9, failures: {bad}")


def test_criterion_04_sign_consistency_held_and_breakable():
    rng = np.random.default_rng(1004)
    bad = []
    for i in range(100):
        d = corpus_instance(rng, correlated=(i % 2 == 0))
        lam = float(rng.uniform(0.1, 0.7)) * lambda_max(d)
        fit = lasso_cd(d, lam)
        if not certify_sign_consistency(d, fit, sls_lasso(d, fit)):
            bad.append(i)
    d = ar_dataset(5)
    fit = lasso_cd(d, 0.25 * lambda_max(d))
    ls_flips = not certify_sign_consistency(d, fit, ls_lasso(d, fit))
    note(4, not bad and ls_flips,
         f"sls certified on 100 instances (failures: {bad}); "
         f"constructed correlated instance breaks the ls certificate: {ls_flips}")


def test_criterion_05_boosted_identity():
    rng = np.random.default_rng(1005)
    worst = 0.0
    for _ in range(50):
        d = corpus_instance(rng)
        lam1 = float(rng.uniform(0.1, 0.9)) * lambda_max(d)
        fit = lasso_cd(d, lam1)
        for lam2 in (lam1, 2.0 * lam1):
            gap = float(np.max(np.abs(boosted_lasso(d, fit, lam2).beta
                                      - fit.beta)))
            worst = max(worst, gap)
    worst_zero = 0.0
    for _ in range(10):
        d = corpus_instance(rng)
        lmax = lambda_max(d)
        fit = lasso_cd(d, 1.5 * lmax)
        lam2 = 0.4 * lmax
        gap = float(np.max(np.abs(boosted_lasso(d, fit, lam2).beta
                                  - lasso_cd(d, lam2).beta)))
        worst_zero = max(worst_zero, gap)
    note(5, worst <= 1e-8 and worst_zero <= 1e-8,
         f"50 instances, identity gap {worst:.2e}; "
         f"degenerate first stage reduces to the plain solve, gap {worst_zero:.2e}")


def test_criterion_06_boosting_improvement_inequality_and_event():
    rng = np.random.default_rng(1006)
    worst = -np.inf
    pairs = 0
    for _ in range(100):
        n, p = 30, 12
        X = rng.standard_normal((n, p))
        beta_raw = np.zeros(p)
        beta_raw[rng.choice(p, size=3, replace=False)] = rng.standard_normal(3)
        eps = 0.4 * rng.standard_normal(n)
        d = Dataset.from_arrays(X, X @ beta_raw + eps)
        beta_star = beta_raw * (np.linalg.norm(X, axis=0) / np.sqrt(n))
        lam1 = 2.0 * float(np.max(np.abs(d.X.T @ eps))) / n
        fit = lasso_cd(d, lam1)
        for frac in (0.55, 0.65, 0.75, 0.85, 0.95):
            lam2 = frac * lam1
            for refit in (boosted_lasso(d, fit, lam2),
                          boosted_support_lasso(d, fit, lam2)):
                lhs = (np.linalg.norm(d.X @ (beta_star - refit.beta)) ** 2 / n
                       + (2.0 * lam2 - lam1)
                       * float(np.sum(np.abs(refit.beta - fit.beta))))
                rhs = np.linalg.norm(d.X @ (beta_star - fit.beta)) ** 2 / n
                worst = max(worst, lhs - rhs)
            pairs += 1
    n, p, sigma, delta = 50, 20, 1.0, 0.1
    Xn, _ = normalize_columns(np.random.default_rng(1606).standard_normal((n, p)))
    lam_union = 2.0 * sigma * np.sqrt(2.0 * np.log(p / delta) / n)
    draws = np.random.default_rng(2606).standard_normal((2000, n))
    corr = np.max(np.abs(draws @ Xn), axis=1) / n
    freq = float(np.mean(corr <= lam_union / 2.0))
    note(6, pairs == 500 and worst <= 1e-8 and freq >= 0.9,
         f"{pairs} (instance, lambda2) pairs, worst inequality slack "
         f"{worst:.2e}; union-bound event frequency {freq:.3f}")


def test_criterion_07_bregman_improvement():
    rng = np.random.default_rng(1007)
    worst = -np.inf
    for i in range(100):
        d = corpus_instance(rng, correlated=(i % 3 == 0))
        lam1 = float(rng.uniform(0.1, 0.7)) * lambda_max(d)
        fit = lasso_cd(d, lam1)
        for factor in (0.5, 1.0, 2.0):
            result = bregman_lasso(d, fit, factor * lam1)
            lhs = (np.linalg.norm(d.X @ (fit.beta - result.beta)) ** 2
                   + np.linalg.norm(d.y - d.X @ result.beta) ** 2)
            rhs = np.linalg.norm(d.y - d.X @ fit.beta) ** 2
            worst = max(worst, float(lhs - rhs))
    note(7, worst <= 1e-6,
         f"100 instances x 3 second penalties, worst slack {worst:.2e}")


def test_criterion_08_bregman_escalation_reaches_sls():
    rng = np.random.default_rng(1008)
    worst = 0.0
    for i in range(50):
        d = corpus_instance(rng, correlated=(i % 2 == 0), n_hi=30, p_hi=30)
        lam1 = float(rng.uniform(0.15, 0.6)) * lambda_max(d)
        fit = lasso_cd(d, lam1)
        gap = float(np.max(np.abs(bregman_lasso(d, fit, 1e6 * lam1).beta
                                  - sls_lasso(d, fit).beta)))
        worst = max(worst, gap)
    note(8, worst <= 1e-4,
         f"50 instances, worst sup-norm gap to the sign-constrained refit "
         f"{worst:.2e}")


def test_criterion_09_orthogonal_closed_forms():
    y = 3.0 * np.random.default_rng(1009).standard_normal(60)
    p = y.size
    d_id = Dataset(X=np.eye(p), y=y)
    gaps = {}
    lam1, lam2 = 0.9, 0.6
    gaps["soft"] = float(np.max(np.abs(
        lasso_cd(d_id, lam1 / p).beta - soft_threshold(y, lam1))))
    fit1 = lasso_cd(d_id, lam1 / p)
    gaps["mcp"] = float(np.max(np.abs(
        bregman_lasso(d_id, fit1, lam2 / p).beta
        - ortho_bregman(y, lam1, lam2))))
    gaps["iters"] = 0.0
    for k in range(1, 6):
        want = (soft_threshold(y, lam1) if k == 1
                else ortho_bregman_iterations(y, lam1, k - 1))
        got = bregman_iterations(d_id, lam1 / p, k).beta
        gaps["iters"] = max(gaps["iters"], float(np.max(np.abs(got - want))))
    gaps["hard"] = float(np.max(np.abs(
        bregman_lasso(d_id, fit1, 1e6 / p).beta - hard_threshold(y, lam1))))
    ok = (gaps["soft"] <= 1e-8 and gaps["mcp"] <= 1e-8
          and gaps["iters"] <= 1e-8 and gaps["hard"] <= 1e-5)
    note(9, ok,
         "identity-design bridge gaps: soft {soft:.2e}, mcp {mcp:.2e}, "
         "iterations k=1..5 {iters:.2e}, hard limit {hard:.2e}".format(**gaps))


LOW_CORR = SyntheticConfig(n=40, p=200, s=4, kappa=0.3, sigma=0.5,
                           seed=0, replicas=20)
REDUCED_CV = CVSpec(folds=3, grid_points=10)


@pytest.fixture(scope="module")
def low_corr_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("low_corr")
    start = time.monotonic()
    result = run_scenario(LOW_CORR, ("lasso", "sls"), REDUCED_CV, workers=1)
    elapsed = time.monotonic() - start
    write_long_csv(out / "results.csv", result.rows)
    write_summary_json(out / "summary.json", result)
    return result, out, elapsed


def test_criterion_10_sls_beats_lasso_directionally(low_corr_run):
    result, _, elapsed = low_corr_run
    strata = summarize(result)["strategies"]
    est_sls = strata["sls"]["estimation"]["median"]
    est_lasso = strata["lasso"]["estimation"]["median"]
    spars_sls = strata["sls"]["sparsity"]["median"]
    spars_lasso = strata["lasso"]["sparsity"]["median"]
    ok = (est_sls <= est_lasso and spars_sls <= spars_lasso
          and not result.failures and elapsed < 60.0)
    note(10, ok,
         f"low-correlation scenario, 20 replicas, reduced grid: median "
         f"estimation sls {est_sls:.3f} <= lasso {est_lasso:.3f}; median "
         f"sparsity sls {spars_sls:.0f} <= lasso {spars_lasso:.0f}; "
         f"{elapsed:.1f}s")


def test_criterion_11_reruns_are_byte_identical(low_corr_run, tmp_path):
    _, first_dir, _ = low_corr_run
    result = run_scenario(LOW_CORR, ("lasso", "sls"), REDUCED_CV, workers=1)
    write_long_csv(tmp_path / "results.csv", result.rows)
    write_summary_json(tmp_path / "summary.json", result)
    same_csv = filecmp.cmp(first_dir / "results.csv",
                           tmp_path / "results.csv", shallow=False)
    same_json = filecmp.cmp(first_dir / "summary.json",
                            tmp_path / "summary.json", shallow=False)
    note(11, same_csv and same_json,
         f"same-seed rerun: results.csv identical {same_csv}, "
         f"summary.json identical {same_json}")
