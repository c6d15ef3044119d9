"""Command-line interface: solve, refit, experiment, oracle-check.

Exit codes are a stable contract for scripts: 0 on success, 2 on usage or
parse errors, 3 on numerical failures. Every command is deterministic given
its flags and seed. The environment variable ``REFIT_LAB_THREADS`` caps the
experiment worker pool (default: available cores).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .core import (
    Dataset,
    InvalidSubgradient,
    ZeroColumn,
    lambda_max,
)
from .experiments import (
    CVSpec,
    DegenerateColumn,
    DimensionError,
    EXPERIMENT_STRATEGIES,
    ParseError,
    SemiRealConfig,
    SyntheticConfig,
    ZeroSignal,
    run_scenario,
    write_long_csv,
    write_summary_json,
)
from .refit import (
    BOOSTED,
    BOOSTED_SUPPORT,
    BREGMAN,
    BREGMAN_ITERATIONS,
    L1BALL,
    LS,
    RELAXED,
    SLS,
    STRATEGIES,
    StrategyParams,
    boosted_lasso,
    boosted_support_lasso,
    bregman_iterations,
    bregman_lasso,
    certify_refitting,
    certify_sign_consistency,
    l1ball_refit,
    ls_lasso,
    relaxed_lasso,
    sls_lasso,
)
from .solver import (
    NoConvergence,
    NoKKTPoint,
    SolverOptions,
    TooLarge,
    fit_from_beta,
    kkt_violation,
    lasso_bruteforce_oracle,
    lasso_cd,
    lasso_objective,
)
from .thresholding import (
    InternalMismatch,
    ThresholdSpec,
    firm_threshold,
    hard_threshold,
    ortho_bregman,
    ortho_bregman_iterations,
    soft_threshold,
)

SUITES = ("kkt", "brute", "ortho", "certificates", "all")

# Input problems a caller can fix: bad flags, bad files, bad shapes.
_USAGE_ERRORS = (
    ParseError,
    DimensionError,
    FileNotFoundError,
    IsADirectoryError,
    json.JSONDecodeError,
    ValueError,
    ZeroColumn,
    TooLarge,
)
# Failures of the numerics on well-formed input.
_NUMERICAL_ERRORS = (
    NoConvergence,
    NoKKTPoint,
    InvalidSubgradient,
    InternalMismatch,
    ZeroSignal,
    DegenerateColumn,
    np.linalg.LinAlgError,
)


def _read_csv_rows(path: str, skip_header: bool) -> list[tuple[int, list[float]]]:
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if skip_header and lineno == 1:
                continue
            if not row:
                continue
            vals = []
            for col, cell in enumerate(row, start=1):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ParseError(lineno, col,
                                     f"not a number: {cell!r}") from None
            rows.append((lineno, vals))
    if not rows:
        raise DimensionError(f"{path}: no data rows")
    return rows


def _read_csv_matrix(path: str, skip_header: bool) -> np.ndarray:
    rows = _read_csv_rows(path, skip_header)
    width = len(rows[0][1])
    for lineno, vals in rows:
        if len(vals) != width:
            raise ParseError(lineno, min(len(vals), width) + 1, "ragged row")
    return np.array([vals for _, vals in rows])


def _read_csv_vector(path: str, skip_header: bool) -> np.ndarray:
    rows = _read_csv_rows(path, skip_header)
    for lineno, vals in rows:
        if len(vals) != 1:
            raise ParseError(lineno, 2, "expected a single column")
    return np.array([vals[0] for _, vals in rows])


def _emit_json(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _solver_options(args) -> SolverOptions:
    opts = SolverOptions()
    if getattr(args, "tol", None) is not None:
        if args.tol <= 0:
            raise ValueError("--tol must be positive")
        opts = SolverOptions(tol=args.tol, max_iters=opts.max_iters)
    if getattr(args, "max_iters", None) is not None:
        if args.max_iters < 1:
            raise ValueError("--max-iters must be at least 1")
        opts = SolverOptions(tol=opts.tol, max_iters=args.max_iters)
    return opts


def cmd_solve(args) -> int:
    if args.lam <= 0:
        raise ValueError("--lambda must be positive")
    X = _read_csv_matrix(args.X, args.header)
    y = _read_csv_vector(args.y, args.header)
    if X.shape[0] != y.shape[0]:
        raise DimensionError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    d = Dataset.from_arrays(X, y)
    fit = lasso_cd(d, args.lam, _solver_options(args))
    beta = fit.beta
    coordinates = "normalized"
    if args.original_scale:
        beta = fit.beta / d.column_scales
        coordinates = "original"
    payload = {
        "lambda": float(args.lam),
        "beta": [float(b) for b in beta],
        "rho": [float(r) for r in fit.rho],
        "support": list(fit.support),
        "equicorrelation": list(fit.equicorrelation),
        "kkt_residual": fit.kkt_residual,
        "coordinates": coordinates,
    }
    _emit_json(payload, args.output)
    return 0


def _load_fit_json(path: str, d: Dataset):
    with open(path) as fh:
        doc = json.load(fh)
    try:
        lam = float(doc["lambda"])
        beta = np.asarray(doc["beta"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: fit JSON needs 'lambda' and 'beta'") from exc
    if lam <= 0:
        raise ValueError(f"{path}: lambda must be positive")
    if beta.shape != (d.p,):
        raise DimensionError(
            f"{path}: beta has {beta.size} entries, X has {d.p} columns")
    return fit_from_beta(d, beta, lam)


def cmd_refit(args) -> int:
    X = _read_csv_matrix(args.X, args.header)
    y = _read_csv_vector(args.y, args.header)
    if X.shape[0] != y.shape[0]:
        raise DimensionError(
            f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    d = Dataset.from_arrays(X, y)
    fit = _load_fit_json(args.fit, d)
    params = StrategyParams(lambda2=args.lambda2, phi=args.phi, k=args.k)
    params.validate_for(args.strategy)
    opts = _solver_options(args)
    if args.strategy == LS:
        result = ls_lasso(d, fit)
    elif args.strategy == SLS:
        result = sls_lasso(d, fit)
    elif args.strategy == BOOSTED:
        result = boosted_lasso(d, fit, params.lambda2, opts)
    elif args.strategy == BOOSTED_SUPPORT:
        result = boosted_support_lasso(d, fit, params.lambda2, opts)
    elif args.strategy == BREGMAN:
        result = bregman_lasso(d, fit, params.lambda2, opts)
    elif args.strategy == BREGMAN_ITERATIONS:
        result = bregman_iterations(d, fit.lam, params.k, opts)
    elif args.strategy == RELAXED:
        result = relaxed_lasso(d, fit, params.phi, opts)
    elif args.strategy == L1BALL:
        result = l1ball_refit(d, fit, opts)
    else:
        raise ValueError(f"unknown strategy {args.strategy!r}")
    payload = {
        "strategy": result.strategy,
        "params": result.params,
        "beta": [float(b) for b in result.beta],
        "refit_certified": result.refit_certified,
        "sign_certified": result.sign_certified,
    }
    _emit_json(payload, args.output)
    return 0


def cmd_experiment(args) -> int:
    strategies = tuple(s.strip() for s in args.strategies.split(",") if s.strip())
    if not strategies:
        raise ValueError("--strategies must name at least one strategy")
    for s in strategies:
        if s not in EXPERIMENT_STRATEGIES:
            raise ValueError(
                f"unknown strategy {s!r}; choose from "
                f"{', '.join(EXPERIMENT_STRATEGIES)}")
    if args.scenario == "synthetic":
        config = SyntheticConfig(n=args.n, p=args.p, s=args.s,
                                 kappa=args.kappa, sigma=args.sigma,
                                 seed=args.seed, replicas=args.replicas)
    else:
        config = SemiRealConfig(p=args.p, s=args.s, snr=args.snr,
                                corr_mode=args.corr, design_path=args.design,
                                header=args.header, seed=args.seed,
                                replicas=args.replicas)
    cv = CVSpec(folds=args.folds, seed=args.seed,
                grid_points=args.grid_points)
    os.makedirs(args.output_dir, exist_ok=True)
    result = run_scenario(config, strategies, cv)
    csv_path = os.path.join(args.output_dir, "results.csv")
    json_path = os.path.join(args.output_dir, "summary.json")
    write_long_csv(csv_path, result.rows)
    write_summary_json(json_path, result)
    print(f"wrote {csv_path}")
    print(f"wrote {json_path}")
    print(f"failures: {len(result.failures)}")
    for replica, strategy, message in result.failures:
        print(f"  replica {replica}, {strategy}: {message}", file=sys.stderr)
    return 0


def _random_instance(rng, n_max: int = 40, p_max: int = 60):
    # A dense Gaussian design with a sparse planted signal; lam is a fixed
    # fraction of lambda_max so every draw has a nontrivial solution.
    n = int(rng.integers(8, n_max + 1))
    p = int(rng.integers(3, p_max + 1))
    X = rng.standard_normal((n, p))
    s = int(rng.integers(1, min(p, 5) + 1))
    beta_star = np.zeros(p)
    beta_star[rng.choice(p, size=s, replace=False)] = rng.standard_normal(s)
    y = X @ beta_star + 0.3 * rng.standard_normal(n)
    d = Dataset.from_arrays(X, y)
    frac = float(rng.uniform(0.05, 0.6))
    return d, frac * lambda_max(d)


def _suite_kkt(rng) -> list[tuple[str, bool, str]]:
    checks = []
    for i in range(25):
        d, lam = _random_instance(rng)
        fit = lasso_cd(d, lam)
        fresh = kkt_violation(d, fit.beta, lam)
        resid = max(fit.kkt_residual, fresh)
        checks.append((
            f"kkt residual, instance {i} (n={d.n}, p={d.p})",
            resid <= 1e-8,
            f"residual {resid:.3e}",
        ))
    return checks


def _suite_brute(rng) -> list[tuple[str, bool, str]]:
    checks = []
    for i in range(20):
        n = int(rng.integers(4, 13))
        p = int(rng.integers(2, 7))
        X = rng.standard_normal((n, p))
        y = rng.standard_normal(n)
        d = Dataset.from_arrays(X, y)
        lam = float([0.1, 0.5, 1.0][i % 3]) * lambda_max(d)
        if lam <= 0:
            continue
        beta_cd = lasso_cd(d, lam).beta
        beta_or = lasso_bruteforce_oracle(d, lam).beta
        obj_gap = abs(lasso_objective(d, beta_cd, lam)
                      - lasso_objective(d, beta_or, lam))
        coef_gap = float(np.max(np.abs(beta_cd - beta_or)))
        checks.append((
            f"enumeration agreement, instance {i} (n={n}, p={p})",
            obj_gap <= 1e-10 and coef_gap <= 1e-6,
            f"objective gap {obj_gap:.3e}, coefficient gap {coef_gap:.3e}",
        ))
    return checks


def _suite_ortho(rng) -> list[tuple[str, bool, str]]:
    checks = []
    for i in range(10):
        y = 3.0 * rng.standard_normal(60)
        lam1 = float(rng.uniform(0.2, 2.0))
        lam2 = float(rng.uniform(0.2, 2.0))

        # Definitional soft-threshold form vs the returned MCP form.
        rho = np.where(np.abs(y) >= lam1, np.sign(y), y / lam1)
        st_form = soft_threshold(y + lam2 * rho, lam2)
        mcp = ortho_bregman(y, lam1, lam2)
        gap = float(np.max(np.abs(st_form - mcp)))
        checks.append((f"dual closed forms, draw {i}", gap <= 1e-10,
                       f"gap {gap:.3e}"))

        # Shrinkage sandwich: between soft and identity on the shrunk branch.
        spec = ThresholdSpec(mu=lam1 / (lam1 / lam2 + 1.0),
                             gamma=1.0 + lam1 / lam2)
        firm = firm_threshold(y, spec)
        st = soft_threshold(y, spec.mu * spec.gamma)
        inside = np.abs(y) <= spec.mu * spec.gamma
        ok = bool(np.all(np.abs(firm[inside]) >= np.abs(st[inside]) - 1e-12)
                  and np.all(np.abs(firm[inside]) <= np.abs(y[inside]) + 1e-12))
        checks.append((f"shrinkage sandwich, draw {i}", ok, "componentwise"))

    y = 3.0 * rng.standard_normal(200)
    hard_gap = float(np.max(np.abs(ortho_bregman(y, 0.7, 1e6)
                                   - hard_threshold(y, 0.7))))
    checks.append(("lambda2 -> inf limit is hard threshold",
                   hard_gap <= 1e-5, f"gap {hard_gap:.3e}"))
    soft_gap = float(np.max(np.abs(ortho_bregman(y, 1e6, 0.7)
                                   - soft_threshold(y, 0.7))))
    checks.append(("lambda1 -> inf limit is soft threshold",
                   soft_gap <= 1e-5, f"gap {soft_gap:.3e}"))

    # Closed form vs an explicit run of the modified-response recursion.
    lam = 0.9
    for k in (1, 2, 3, 4):
        acc = np.zeros_like(y)
        beta = np.zeros_like(y)
        for _ in range(k + 1):
            beta = soft_threshold(y + acc, lam)
            acc += y - beta
        gap = float(np.max(np.abs(ortho_bregman_iterations(y, lam, k) - beta)))
        checks.append((f"iteration closed form, k={k}", gap <= 1e-10,
                       f"gap {gap:.3e}"))
    return checks


def _suite_certificates(rng) -> list[tuple[str, bool, str]]:
    checks = []
    for i in range(12):
        d, lam = _random_instance(rng, n_max=30, p_max=40)
        fit = lasso_cd(d, lam)
        results = {
            LS: ls_lasso(d, fit),
            SLS: sls_lasso(d, fit),
            BOOSTED: boosted_lasso(d, fit, 0.7 * lam),
            BOOSTED_SUPPORT: boosted_support_lasso(d, fit, 0.7 * lam),
            BREGMAN: bregman_lasso(d, fit, lam),
            RELAXED: relaxed_lasso(d, fit, 0.5),
            L1BALL: l1ball_refit(d, fit),
        }
        for name, result in results.items():
            ok = certify_refitting(d, fit, result)
            checks.append((f"refitting certificate, {name}, instance {i}",
                           ok, "residual norm did not increase"
                           if ok else "residual norm increased"))
        sign_ok = certify_sign_consistency(d, fit, results[SLS])
        checks.append((f"sign certificate, sls, instance {i}", sign_ok,
                       "subgradient signs respected" if sign_ok
                       else "sign pattern violated"))
    return checks


def cmd_oracle_check(args) -> int:
    if args.suite not in SUITES:
        raise ValueError(f"unknown suite {args.suite!r}")
    suites = {
        "kkt": _suite_kkt,
        "brute": _suite_brute,
        "ortho": _suite_ortho,
        "certificates": _suite_certificates,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    failures = 0
    total = 0
    for name in names:
        rng = np.random.default_rng(12345)
        for label, ok, detail in suites[name](rng):
            total += 1
            if ok:
                print(f"ok   - {name}: {label}")
            else:
                failures += 1
                print(f"FAIL - {name}: {label} ({detail})")
    print(f"{total - failures}/{total} checks passed")
    return 0 if failures == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refit-lab",
        description="Lasso solving, refitting with certificates, and "
                    "benchmark experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="fit the lasso on CSV data")
    p_solve.add_argument("X", help="design matrix CSV (rows = observations)")
    p_solve.add_argument("y", help="response CSV (single column)")
    p_solve.add_argument("--lambda", dest="lam", type=float, required=True,
                         help="penalty level (positive)")
    p_solve.add_argument("--output", default=None,
                         help="write JSON here instead of stdout")
    p_solve.add_argument("--original-scale", action="store_true",
                         help="report coefficients on the raw column scale")
    p_solve.add_argument("--header", action="store_true",
                         help="skip the first line of the CSV inputs")
    p_solve.add_argument("--tol", type=float, default=None,
                         help="override the solver KKT tolerance")
    p_solve.add_argument("--max-iters", type=int, default=None,
                         help="override the solver sweep budget")
    p_solve.set_defaults(func=cmd_solve)

    p_refit = sub.add_parser("refit", help="refit a stored lasso solution")
    p_refit.add_argument("fit", help="fit JSON with 'lambda' and 'beta'")
    p_refit.add_argument("X", help="design matrix CSV")
    p_refit.add_argument("y", help="response CSV (single column)")
    p_refit.add_argument("--strategy", required=True, choices=STRATEGIES)
    p_refit.add_argument("--lambda2", type=float, default=None,
                         help="second penalty (boosted, boosted_support, "
                              "bregman)")
    p_refit.add_argument("--phi", type=float, default=None,
                         help="relaxation parameter in (0, 1) (relaxed)")
    p_refit.add_argument("--k", type=int, default=None,
                         help="iteration count (bregman_iterations)")
    p_refit.add_argument("--output", default=None,
                         help="write JSON here instead of stdout")
    p_refit.add_argument("--header", action="store_true",
                         help="skip the first line of the CSV inputs")
    p_refit.add_argument("--tol", type=float, default=None,
                         help="override the solver KKT tolerance")
    p_refit.add_argument("--max-iters", type=int, default=None,
                         help="override the solver sweep budget")
    p_refit.set_defaults(func=cmd_refit)

    p_exp = sub.add_parser("experiment", help="run a replicated benchmark")
    p_exp.add_argument("--scenario", required=True,
                       choices=("synthetic", "semireal"))
    p_exp.add_argument("--n", type=int, default=40,
                       help="observations (synthetic)")
    p_exp.add_argument("--p", type=int, default=200, help="columns")
    p_exp.add_argument("--s", type=int, default=4, help="true support size")
    p_exp.add_argument("--kappa", type=float, default=0.3,
                       help="column correlation mixing in [0, 1] (synthetic)")
    p_exp.add_argument("--sigma", type=float, default=0.5,
                       help="noise level (synthetic)")
    p_exp.add_argument("--design", default=None,
                       help="design CSV for semireal (default: stand-in)")
    p_exp.add_argument("--snr", type=float, default=5.0,
                       help="signal-to-noise ratio (semireal)")
    p_exp.add_argument("--corr", default="normal", choices=("normal", "high"),
                       help="support selection mode (semireal)")
    p_exp.add_argument("--header", action="store_true",
                       help="skip the first line of the design CSV")
    p_exp.add_argument("--strategies", default="lasso,sls",
                       help="comma-separated strategy list")
    p_exp.add_argument("--replicas", type=int, default=1)
    p_exp.add_argument("--seed", type=int, default=0)
    p_exp.add_argument("--folds", type=int, default=3)
    p_exp.add_argument("--grid-points", type=int, default=50,
                       help="points per cross-validation grid")
    p_exp.add_argument("--output-dir", default=".",
                       help="directory for results.csv and summary.json")
    p_exp.set_defaults(func=cmd_experiment)

    p_oracle = sub.add_parser("oracle-check",
                              help="run the independent verification suites")
    p_oracle.add_argument("--suite", default="all",
                          help="one of: " + ", ".join(SUITES))
    p_oracle.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
