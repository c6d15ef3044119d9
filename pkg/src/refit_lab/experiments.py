"""Benchmark harness: data generators, performance measures,
cross-validation, and replicated scenario runs.

Two scenario families are covered. Synthetic: correlated Gaussian designs
``X_j = sqrt(n) (kappa zeta + (1 - kappa) xi_j) / || . ||`` with planted
coefficients ``(1, ..., 1, 0, ..., 0)``. Semi-real: a user-supplied design
matrix (first ``p`` columns, normalized), random or correlation-clustered
support with ``+-1`` coefficients, and noise level set through the
signal-to-noise ratio.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace as _dc_replace
from typing import Sequence

import numpy as np

from .core import (
    Dataset,
    GroundTruth,
    RefitLabError,
    lambda_max,
    normalize_columns,
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
    boosted_lasso,
    boosted_support_lasso,
    bregman_iterations,
    bregman_lasso,
    l1ball_refit,
    ls_lasso,
    relaxed_lasso,
    sls_lasso,
)
from .solver import NoConvergence, SolverOptions, lasso_cd, lasso_path

LASSO = "lasso"
EXPERIMENT_STRATEGIES = (LASSO,) + STRATEGIES

MEASURES = ("prediction", "estimation", "sparsity", "tp", "fp", "hamming")

STANDIN_ROWS = 72


class ZeroSignal(RefitLabError):
    """``X beta_star`` vanished, so no noise level matches the target SNR."""


class DegenerateColumn(RefitLabError):
    """A generated design column collapsed to numerical zero."""

    def __init__(self, j: int):
        self.j = int(j)
        super().__init__(f"generated column {j} is numerically zero")


class ParseError(RefitLabError):
    """A CSV cell failed to parse; carries 1-based line and column."""

    def __init__(self, line: int, col: int, detail: str = ""):
        self.line = int(line)
        self.col = int(col)
        extra = f": {detail}" if detail else ""
        super().__init__(f"parse error at line {line}, column {col}{extra}")


class DimensionError(RefitLabError):
    """Input shape does not meet the requested dimensions."""


@dataclass(frozen=True)
class SyntheticConfig:
    """Correlated Gaussian scenario parameters."""

    n: int
    p: int
    s: int
    kappa: float
    sigma: float
    seed: int = 0
    replicas: int = 1

    def __post_init__(self):
        if self.s > self.p:
            raise ValueError("s must not exceed p")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError("kappa must lie in [0, 1]")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class SemiRealConfig:
    """Fixed-design scenario parameters.

    ``design_path`` of None falls back to a seeded stand-in design with
    ``STANDIN_ROWS`` rows, so pipelines run without the external file.
    """

    p: int
    s: int
    snr: float
    corr_mode: str = "normal"
    design_path: str | None = None
    header: bool = False
    seed: int = 0
    replicas: int = 1

    def __post_init__(self):
        if self.s > self.p:
            raise ValueError("s must not exceed p")
        if self.snr <= 0:
            raise ValueError("snr must be positive")
        if self.corr_mode not in ("normal", "high"):
            raise ValueError("corr_mode must be 'normal' or 'high'")


@dataclass(frozen=True)
class CVSpec:
    """Cross-validation layout: folds, parameter grids, fold seed.

    ``grid1`` defaults to 50 log-spaced penalties in
    ``[0.01 lambda_max, lambda_max]``; ``grid2`` defaults per strategy (same
    log scale for second penalties, 50 uniform points in (0.001, 0.999) for
    the relaxation parameter, counts 1..5 for iteration strategies).
    """

    folds: int = 3
    grid1: Sequence[float] | None = None
    grid2: Sequence[float] | None = None
    seed: int = 0
    grid_points: int = 50

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        if self.grid1 is not None and len(self.grid1) == 0:
            raise ValueError("grid1 must be nonempty")
        if self.grid2 is not None and len(self.grid2) == 0:
            raise ValueError("grid2 must be nonempty")
        if self.grid_points < 1:
            raise ValueError("grid_points must be at least 1")


@dataclass(frozen=True)
class MetricsReport:
    """The six per-estimate performance measures."""

    prediction: float
    estimation: float
    sparsity: int
    tp: int
    fp: int
    hamming: float


@dataclass(frozen=True)
class ScenarioResult:
    """Long-format rows, per-(replica, strategy) failures, replica details."""

    rows: tuple
    failures: tuple
    details: tuple


def gen_synthetic_design(n: int, p: int, kappa: float, rng) -> np.ndarray:
    """Correlated Gaussian design with exactly normalized columns.

    Column ``j`` is ``sqrt(n) v_j / ||v_j||`` with ``v_j = kappa * zeta +
    (1 - kappa) * xi_j``; ``zeta`` and all ``xi_j`` are i.i.d. standard
    normal in R^n. ``kappa = 1`` duplicates one common column, ``kappa = 0``
    gives independent columns, and in between the pairwise correlations
    concentrate near ``kappa^2 / (kappa^2 + (1 - kappa)^2)``.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("kappa must lie in [0, 1]")
    zeta = rng.standard_normal(n)
    X = np.empty((n, p))
    for j in range(p):
        for _ in range(100):
            xi = rng.standard_normal(n)
            v = kappa * zeta + (1.0 - kappa) * xi
            nv = float(np.linalg.norm(v))
            if nv > 1e-12:
                break
            if kappa == 1.0:
                break
        if nv <= 1e-12:
            raise DegenerateColumn(j)
        X[:, j] = np.sqrt(n) * v / nv
    return X


def standin_design(p: int, rng, rows: int = STANDIN_ROWS) -> np.ndarray:
    """Stand-in for the external gene-expression design: same row count,
    mildly correlated Gaussian columns, normalized."""
    return gen_synthetic_design(rows, p, 0.3, rng)


def make_beta_star(p: int, s: int, mode: str, support, rng) -> GroundTruth:
    """Planted coefficient vector on ``support`` (size ``s``).

    ``ones`` plants +1 everywhere; ``pm_ones`` draws each sign equiprobably
    from the given rng. ``sigma`` starts at 0; set it later with
    :meth:`~refit_lab.core.GroundTruth.with_sigma`.
    """
    support = tuple(int(j) for j in support)
    if len(support) != s or len(set(support)) != s:
        raise ValueError("support must contain exactly s distinct indices")
    if any(j < 0 or j >= p for j in support):
        raise ValueError("support indices out of range")
    beta = np.zeros(p)
    idx = list(support)
    if mode == "ones":
        beta[idx] = 1.0
    elif mode == "pm_ones":
        beta[idx] = rng.integers(0, 2, size=s) * 2.0 - 1.0
    else:
        raise ValueError("mode must be 'ones' or 'pm_ones'")
    return GroundTruth(beta_star=beta, sigma=0.0,
                       support_star=tuple(sorted(support)), s=s)


def select_support(X, s: int, mode: str, rng) -> tuple[int, ...]:
    """Pick a support of size ``s`` from the columns of ``X``.

    ``normal`` draws a uniform subset. ``high`` draws one seed column and
    adds the ``s - 1`` columns with the largest absolute Pearson correlation
    to it, ties broken toward the lower index.
    """
    X = np.asarray(X, dtype=float)
    p = X.shape[1]
    if s > p:
        raise ValueError("s must not exceed p")
    if s == 0:
        return ()
    if mode == "normal":
        return tuple(sorted(int(j) for j in rng.choice(p, size=s, replace=False)))
    if mode != "high":
        raise ValueError("mode must be 'normal' or 'high'")
    seed_col = int(rng.integers(p))
    centered = X - X.mean(axis=0)
    norms = np.sqrt(np.einsum("ij,ij->j", centered, centered))
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.abs(centered.T @ centered[:, seed_col]) / (norms * norms[seed_col])
    corr = np.nan_to_num(corr, nan=0.0)
    corr[seed_col] = -np.inf
    order = np.lexsort((np.arange(p), -corr))
    chosen = [seed_col] + [int(j) for j in order[: s - 1]]
    return tuple(sorted(chosen))


def snr_to_sigma(X, beta_star, snr: float) -> float:
    """Noise level matching ``snr = ||X beta_star|| / sqrt(n sigma^2)``."""
    if snr <= 0:
        raise ValueError("snr must be positive")
    X = np.asarray(X, dtype=float)
    signal = float(np.linalg.norm(X @ np.asarray(beta_star, float)))
    if signal == 0.0:
        raise ZeroSignal("X @ beta_star is zero; SNR is undefined")
    return signal / (np.sqrt(X.shape[0]) * snr)


def gen_response(X, beta_star, sigma: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``y = X beta_star + sigma * eps`` and return ``(y, eps)``.

    The realized noise is returned alongside the response so checks that
    condition on the noise draw stay computable.
    """
    X = np.asarray(X, dtype=float)
    beta_star = np.asarray(beta_star, dtype=float)
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    eps = rng.standard_normal(X.shape[0])
    return X @ beta_star + sigma * eps, eps


def metrics(truth: GroundTruth, X, beta_hat) -> MetricsReport:
    """The six performance measures of an estimate against the truth.

    Hamming counts coordinates where ``sign(beta_star_j) != sign(beta_hat_j)``
    (with ``sign(0) = 0``) and divides by ``p``; this single comparison covers
    false positives, false negatives and flipped signs at once.
    """
    X = np.asarray(X, dtype=float)
    beta_hat = np.asarray(beta_hat, dtype=float)
    diff = truth.beta_star - beta_hat
    hat_nz = beta_hat != 0.0
    star_nz = truth.beta_star != 0.0
    return MetricsReport(
        prediction=float(np.linalg.norm(X @ diff) ** 2),
        estimation=float(np.sum(np.abs(diff))),
        sparsity=int(np.count_nonzero(hat_nz)),
        tp=int(np.count_nonzero(hat_nz & star_nz)),
        fp=int(np.count_nonzero(hat_nz & ~star_nz)),
        hamming=float(np.mean(np.sign(truth.beta_star) != np.sign(beta_hat))),
    )


def default_lambda_grid(d: Dataset, points: int = 50) -> np.ndarray:
    """Log-spaced penalties from ``lambda_max`` down to ``0.01 lambda_max``."""
    lmax = lambda_max(d)
    if lmax <= 0:
        raise ZeroSignal("lambda_max is zero; no meaningful penalty grid")
    return np.geomspace(lmax, 0.01 * lmax, points)


def default_phi_grid(points: int = 50) -> np.ndarray:
    """Relaxation parameters, descending, uniformly covering (0.001, 0.999)."""
    return np.linspace(0.999, 0.001, points)


def _fold_blocks(n: int, folds: int, seed: int) -> list[np.ndarray]:
    # Seeded shuffle, then contiguous blocks of the shuffled order.
    if n < folds:
        raise ValueError("need at least one row per fold")
    order = np.random.default_rng(seed).permutation(n)
    return [np.sort(block) for block in np.array_split(order, folds)]


def _bregman_iteration_snapshots(d: Dataset, lam: float, ks, opts) -> dict:
    acc = np.zeros(d.n)
    beta = None
    out = {}
    for i in range(1, max(ks) + 1):
        step = lasso_cd(d.with_response(d.y + acc), lam,
                        _dc_replace(opts, warm_start=beta))
        beta = step.beta
        acc += d.y - d.X @ beta
        if i in ks:
            out[i] = beta
    return out


def _grid_betas(d_tr: Dataset, strategy: str, lam_grid, grid2, opts):
    """Yield ``(cell, beta)`` over the grid on training data.

    Cells appear with lambda1 descending and the second parameter descending,
    which both enables warm starts and fixes the tie-break order downstream.
    """
    for fit in lasso_path(d_tr, lam_grid, opts):
        lam1 = fit.lam
        if strategy == LASSO:
            yield (lam1,), fit.beta
        elif strategy == LS:
            yield (lam1,), ls_lasso(d_tr, fit).beta
        elif strategy == SLS:
            yield (lam1,), sls_lasso(d_tr, fit).beta
        elif strategy == L1BALL:
            yield (lam1,), l1ball_refit(d_tr, fit, opts).beta
        elif strategy == BOOSTED:
            sub = d_tr.with_response(d_tr.y - d_tr.X @ fit.beta)
            for dfit in lasso_path(sub, grid2, opts):
                yield (lam1, dfit.lam), fit.beta + dfit.beta
        elif strategy == BOOSTED_SUPPORT:
            support = list(fit.support)
            if not support:
                for lam2 in grid2:
                    yield (lam1, float(lam2)), fit.beta
            else:
                sub = d_tr.restrict_columns(support).with_response(
                    d_tr.y - d_tr.X @ fit.beta)
                for dfit in lasso_path(sub, grid2, opts):
                    beta = fit.beta.copy()
                    beta[support] += dfit.beta
                    yield (lam1, dfit.lam), beta
        elif strategy == BREGMAN:
            warm = fit.beta
            for lam2 in grid2:
                res = bregman_lasso(d_tr, fit, float(lam2),
                                    _dc_replace(opts, warm_start=warm))
                warm = res.beta
                yield (lam1, float(lam2)), res.beta
        elif strategy == RELAXED:
            support = list(fit.support)
            if not support:
                for phi in grid2:
                    yield (lam1, float(phi)), fit.beta
            else:
                sub = d_tr.restrict_columns(support)
                sub_fits = lasso_path(sub, [phi * lam1 for phi in grid2], opts)
                for phi, sfit in zip(grid2, sub_fits):
                    beta = np.zeros(d_tr.p)
                    beta[support] = sfit.beta
                    yield (lam1, float(phi)), beta
        elif strategy == BREGMAN_ITERATIONS:
            ks = sorted({int(k) for k in grid2})
            snaps = _bregman_iteration_snapshots(d_tr, lam1, ks, opts)
            for k in sorted(ks, reverse=True):
                yield (lam1, float(k)), snaps[k]
        else:
            raise ValueError(f"unknown strategy {strategy!r}")


def _resolve_grid2(d: Dataset, strategy: str, cv: CVSpec) -> list | None:
    if strategy in (LASSO, LS, SLS, L1BALL):
        return None
    if cv.grid2 is not None:
        vals = [float(v) for v in cv.grid2]
    elif strategy == RELAXED:
        vals = [float(v) for v in default_phi_grid(cv.grid_points)]
    elif strategy == BREGMAN_ITERATIONS:
        vals = [float(k) for k in range(1, 6)]
    else:
        vals = [float(v) for v in default_lambda_grid(d, cv.grid_points)]
    return sorted(vals, reverse=True)


def _cell_params(strategy: str, cell: tuple) -> dict:
    params = {"lambda1": cell[0]}
    if len(cell) == 2:
        if strategy == RELAXED:
            params["phi"] = cell[1]
        elif strategy == BREGMAN_ITERATIONS:
            params["k"] = int(cell[1])
        else:
            params["lambda2"] = cell[1]
    return params


def cross_validate(d: Dataset, strategy: str, cv: CVSpec | None = None,
                   opts: SolverOptions | None = None):
    """Grid search by k-fold cross-validation for one strategy.

    Folds come from a seeded shuffle split into contiguous blocks. Each
    training fold is renormalized to the package's column convention and its
    scales are applied to the held-out columns before scoring. The score of
    a cell is the across-fold average of the per-fold mean squared prediction
    error; the argmin is returned with ties broken toward the stronger
    regularization (larger ``lambda1``, then larger second parameter).

    Returns
    -------
    best : dict
        Selected parameters, keyed ``lambda1`` plus ``lambda2``/``phi``/``k``
        where applicable.
    table : list of dict
        One row per cell: ``{"params": ..., "cv_mse": ...}``.
    """
    if strategy not in EXPERIMENT_STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    cv = cv or CVSpec()
    opts = opts or SolverOptions()
    lam_grid = sorted((float(v) for v in
                       (cv.grid1 if cv.grid1 is not None
                        else default_lambda_grid(d, cv.grid_points))),
                      reverse=True)
    grid2 = _resolve_grid2(d, strategy, cv)
    blocks = _fold_blocks(d.n, cv.folds, cv.seed)
    all_rows = np.arange(d.n)
    totals: dict[tuple, float] = {}
    for fold_no, test_idx in enumerate(blocks):
        train_idx = np.setdiff1d(all_rows, test_idx)
        d_tr = Dataset.from_arrays(d.X[train_idx], d.y[train_idx])
        X_te = d.X[test_idx] / d_tr.column_scales
        y_te = d.y[test_idx]
        try:
            for cell, beta in _grid_betas(d_tr, strategy, lam_grid, grid2, opts):
                err = float(np.mean((y_te - X_te @ beta) ** 2))
                totals[cell] = totals.get(cell, 0.0) + err
        except NoConvergence as exc:
            exc.args = (f"{exc.args[0]} [strategy {strategy}, fold {fold_no}]",)
            raise
    best_cell = None
    best_mse = np.inf
    table = []
    for cell, total in totals.items():
        mse = total / len(blocks)
        table.append({"params": _cell_params(strategy, cell), "cv_mse": mse})
        if mse < best_mse:
            best_mse = mse
            best_cell = cell
    return _cell_params(strategy, best_cell), table


def estimate(d: Dataset, strategy: str, params: dict,
             opts: SolverOptions | None = None) -> np.ndarray:
    """Fit one strategy on the full dataset at the given parameters."""
    lam1 = float(params["lambda1"])
    if strategy == LASSO:
        return lasso_cd(d, lam1, opts).beta
    if strategy == BREGMAN_ITERATIONS:
        return bregman_iterations(d, lam1, int(params["k"]), opts).beta
    fit = lasso_cd(d, lam1, opts)
    if strategy == LS:
        return ls_lasso(d, fit).beta
    if strategy == SLS:
        return sls_lasso(d, fit).beta
    if strategy == BOOSTED:
        return boosted_lasso(d, fit, float(params["lambda2"]), opts).beta
    if strategy == BOOSTED_SUPPORT:
        return boosted_support_lasso(d, fit, float(params["lambda2"]), opts).beta
    if strategy == BREGMAN:
        return bregman_lasso(d, fit, float(params["lambda2"]), opts).beta
    if strategy == RELAXED:
        return relaxed_lasso(d, fit, float(params["phi"]), opts).beta
    if strategy == L1BALL:
        return l1ball_refit(d, fit, opts).beta
    raise ValueError(f"unknown strategy {strategy!r}")


def resolve_workers(explicit: int | None = None) -> int:
    """Worker count: explicit argument, else REFIT_LAB_THREADS, else cores."""
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get("REFIT_LAB_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValueError(f"REFIT_LAB_THREADS is not an integer: {env!r}") from exc
    return os.cpu_count() or 1


def _replica_task(args):
    config, strategies, cv, replica, seed_seq, design = args
    rng = np.random.default_rng(seed_seq)
    if isinstance(config, SyntheticConfig):
        X = gen_synthetic_design(config.n, config.p, config.kappa, rng)
        truth = make_beta_star(config.p, config.s, "ones",
                               tuple(range(config.s)), rng)
        truth = truth.with_sigma(config.sigma)
    else:
        X = design
        support = select_support(X, config.s, config.corr_mode, rng)
        truth = make_beta_star(config.p, config.s, "pm_ones", support, rng)
        truth = truth.with_sigma(snr_to_sigma(X, truth.beta_star, config.snr))
    y, eps = gen_response(X, truth.beta_star, truth.sigma, rng)
    d = Dataset(X=X, y=y)
    rows = []
    failures = []
    for strategy in strategies:
        try:
            best, _ = cross_validate(d, strategy, cv)
            beta = estimate(d, strategy, best)
            report = metrics(truth, X, beta)
            rows.extend((replica, strategy, m, float(getattr(report, m)))
                        for m in MEASURES)
        except (RefitLabError, np.linalg.LinAlgError) as exc:
            failures.append((replica, strategy, f"{type(exc).__name__}: {exc}"))
    detail = {"sigma": truth.sigma, "eps": eps,
              "beta_star": truth.beta_star, "support": truth.support_star}
    return replica, rows, failures, detail


def run_scenario(config, strategies, cv: CVSpec | None = None,
                 workers: int | None = None) -> ScenarioResult:
    """Replicated benchmark of the given strategies under one scenario.

    Per replica: generate data, cross-validate every strategy, fit at the
    selected parameters, evaluate the six measures. Failures are collected
    per (replica, strategy) without aborting the batch. RNG streams are
    spawned per replica from the master seed, and results are assembled in
    replica order, so the output is identical however many workers run.
    """
    cv = cv or CVSpec()
    strategies = tuple(strategies)
    for s in strategies:
        if s not in EXPERIMENT_STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    children = np.random.SeedSequence(config.seed).spawn(config.replicas + 1)
    design = None
    if isinstance(config, SemiRealConfig):
        if config.design_path is not None:
            design = load_design_csv(config.design_path, config.p,
                                     skip_header=config.header)
        else:
            design = standin_design(config.p,
                                    np.random.default_rng(children[-1]))
    tasks = [(config, strategies, cv, r, children[r], design)
             for r in range(config.replicas)]
    n_workers = min(resolve_workers(workers), max(1, len(tasks)))
    if n_workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(_replica_task, tasks))
    else:
        outcomes = [_replica_task(t) for t in tasks]
    outcomes.sort(key=lambda item: item[0])
    rows = []
    failures = []
    details = []
    for _, r_rows, r_fail, r_detail in outcomes:
        rows.extend(r_rows)
        failures.extend(r_fail)
        details.append(r_detail)
    return ScenarioResult(rows=tuple(rows), failures=tuple(failures),
                          details=tuple(details))


def load_design_csv(path, p: int | None = None,
                    skip_header: bool = False) -> np.ndarray:
    """Read a rectangular numeric CSV, keep the first ``p`` columns, and
    normalize them.

    Raises
    ------
    ParseError
        On a non-numeric cell or a ragged row, with 1-based location.
    DimensionError
        If the file has fewer than ``p`` columns or no data rows.
    """
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
                    raise ParseError(lineno, col, f"not a number: {cell!r}") from None
            rows.append((lineno, vals))
    if not rows:
        raise DimensionError(f"{path}: no data rows")
    width = len(rows[0][1])
    for lineno, vals in rows:
        if len(vals) != width:
            raise ParseError(lineno, min(len(vals), width) + 1,
                             "ragged row")
    if p is None:
        p = width
    if width < p:
        raise DimensionError(f"{path}: need {p} columns, found {width}")
    M = np.array([vals[:p] for _, vals in rows])
    X, _ = normalize_columns(M)
    return X


def write_long_csv(path, rows) -> None:
    """Write long-format rows (replica, strategy, measure, value)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["replica", "strategy", "measure", "value"])
        for replica, strategy, measure, value in rows:
            writer.writerow([replica, strategy, measure, repr(float(value))])


def summarize(result: ScenarioResult) -> dict:
    """Per-strategy quartiles of every measure, plus run bookkeeping."""
    per: dict[str, dict[str, list[float]]] = {}
    for _, strategy, measure, value in result.rows:
        per.setdefault(strategy, {}).setdefault(measure, []).append(float(value))
    strategies = {}
    for strategy in sorted(per):
        entry = {}
        for measure in MEASURES:
            vals = per[strategy].get(measure)
            if vals:
                q25, med, q75 = np.percentile(vals, [25.0, 50.0, 75.0])
                entry[measure] = {"q25": float(q25), "median": float(med),
                                  "q75": float(q75)}
        strategies[strategy] = entry
    return {
        "strategies": strategies,
        "replicas": len(result.details),
        "failures": len(result.failures),
    }


def write_summary_json(path, result: ScenarioResult) -> None:
    with open(path, "w") as fh:
        json.dump(summarize(result), fh, indent=2, sort_keys=True)
        fh.write("\n")
