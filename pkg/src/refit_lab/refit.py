"""Refitting strategies for a first-step lasso fit, plus the two
definitional certificates.

A refitting of ``beta_hat`` is any vector whose residual norm does not
exceed that of ``beta_hat``. A sign-consistent refitting additionally
respects the canonical subgradient componentwise: nonnegative where
``rho_j = +1``, nonpositive where ``rho_j = -1``, zero where ``|rho_j| < 1``.
Each strategy returns a :class:`~refit_lab.core.RefitResult` carrying its
certificate outcomes; nothing is assumed, everything is evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    EQUICORRELATION_TOL,
    Dataset,
    LassoFit,
    RefitResult,
)
from .solver import NoConvergence, SolverOptions, lasso_cd, sign_constrained_ls

LS = "ls"
SLS = "sls"
BOOSTED = "boosted"
BOOSTED_SUPPORT = "boosted_support"
BREGMAN = "bregman"
BREGMAN_ITERATIONS = "bregman_iterations"
RELAXED = "relaxed"
L1BALL = "l1ball"

STRATEGIES = (LS, SLS, BOOSTED, BOOSTED_SUPPORT, BREGMAN,
              BREGMAN_ITERATIONS, RELAXED, L1BALL)

# Loss comparisons are well conditioned; sign checks live on the
# equicorrelation band.
REFIT_CERT_TOL = 1e-9


@dataclass(frozen=True)
class StrategyParams:
    """Optional tuning knobs; a strategy requires exactly its own.

    ``lambda2`` drives the boosted and Bregman refits, ``phi`` the relaxed
    refit, ``k`` the Bregman iteration count, and ``radius_mode`` (only value
    ``"s_hat_lambda"``) names the l1-ball radius rule.
    """

    lambda2: float | None = None
    phi: float | None = None
    k: int | None = None
    radius_mode: str | None = None

    REQUIRED = {
        LS: (),
        SLS: (),
        BOOSTED: ("lambda2",),
        BOOSTED_SUPPORT: ("lambda2",),
        BREGMAN: ("lambda2",),
        BREGMAN_ITERATIONS: ("k",),
        RELAXED: ("phi",),
        L1BALL: (),
    }

    def validate_for(self, strategy: str) -> None:
        if strategy not in self.REQUIRED:
            raise ValueError(f"unknown strategy {strategy!r}")
        allowed = set(self.REQUIRED[strategy])
        if strategy == L1BALL:
            allowed.add("radius_mode")
        for name in self.REQUIRED[strategy]:
            if getattr(self, name) is None:
                raise ValueError(f"strategy {strategy!r} requires {name}")
        for name in ("lambda2", "phi", "k", "radius_mode"):
            if name not in allowed and getattr(self, name) is not None:
                raise ValueError(f"strategy {strategy!r} does not take {name}")
        if self.radius_mode is not None and self.radius_mode != "s_hat_lambda":
            raise ValueError(
                f"radius_mode must be 's_hat_lambda', got {self.radius_mode!r}")


def certify_refitting(d: Dataset, fit: LassoFit, result,
                      tol: float = REFIT_CERT_TOL) -> bool:
    """True iff ``||y - X beta_bar||_2 <= ||y - X beta_hat||_2 + tol``."""
    beta_bar = result.beta if isinstance(result, RefitResult) else np.asarray(result, float)
    new = float(np.linalg.norm(d.y - d.X @ beta_bar))
    old = float(np.linalg.norm(d.y - d.X @ fit.beta))
    return new <= old + tol


def certify_sign_consistency(d: Dataset, fit: LassoFit, result,
                             tol: float = EQUICORRELATION_TOL) -> bool:
    """Componentwise sign check of a refit against the fit's subgradient.

    ``rho_j`` within ``tol`` of +1 requires ``beta_bar_j >= -tol``; within
    ``tol`` of -1 requires ``beta_bar_j <= tol``; strictly inside the band
    requires ``|beta_bar_j| <= tol``.
    """
    beta_bar = result.beta if isinstance(result, RefitResult) else np.asarray(result, float)
    rho = fit.rho
    pos = rho >= 1.0 - tol
    neg = rho <= -(1.0 - tol)
    mid = ~(pos | neg)
    return bool(
        np.all(beta_bar[pos] >= -tol)
        and np.all(beta_bar[neg] <= tol)
        and np.all(np.abs(beta_bar[mid]) <= tol)
    )


def _result(d: Dataset, fit: LassoFit, beta: np.ndarray, strategy: str,
            params: dict, with_sign: bool = True) -> RefitResult:
    return RefitResult(
        beta=beta,
        strategy=strategy,
        params=params,
        refit_certified=certify_refitting(d, fit, beta),
        sign_certified=certify_sign_consistency(d, fit, beta) if with_sign else None,
    )


def ls_lasso(d: Dataset, fit: LassoFit) -> RefitResult:
    """Least squares restricted to the support of the fit.

    Rank-deficient supports get the minimum-norm solution. An empty support
    returns the zero vector.
    """
    beta = np.zeros(d.p)
    support = list(fit.support)
    if support:
        sol, *_ = np.linalg.lstsq(d.X[:, support], d.y, rcond=None)
        beta[support] = sol
    return _result(d, fit, beta, LS, {"lambda1": fit.lam})


def sls_lasso(d: Dataset, fit: LassoFit) -> RefitResult:
    """Sign-constrained least squares on the equicorrelation set.

    Coordinates keep the sign of ``rho`` or drop to zero; everything off
    the equicorrelation set stays zero. Both certificates hold for this
    strategy by construction and are evaluated anyway.
    """
    beta = np.zeros(d.p)
    eset = list(fit.equicorrelation)
    if eset:
        signs = np.sign(fit.rho[eset])
        beta[eset] = sign_constrained_ls(d.X[:, eset], d.y, signs)
    return _result(d, fit, beta, SLS, {"lambda1": fit.lam})


def _zero_correction(fit: LassoFit) -> bool:
    # The residual problem's critical penalty is lambda1 * max|rho|. For a
    # genuine lasso solution that maximum is 1 up to solver noise, so any
    # lambda2 >= lambda1 makes the correction identically zero; skipping
    # the solve keeps the identity exact instead of leaving KKT-sized dust.
    return float(np.max(np.abs(fit.rho), initial=0.0)) <= 1.0 + EQUICORRELATION_TOL


def boosted_lasso(d: Dataset, fit: LassoFit, lambda2: float,
                  opts: SolverOptions | None = None) -> RefitResult:
    """Twicing: lasso on the residual at ``lambda2``, added back.

    For ``lambda2 >= lambda1`` (and ``lambda1 < lambda_max``) the correction
    vanishes and the fit is returned unchanged.
    """
    if lambda2 <= 0:
        raise ValueError("lambda2 must be positive")
    params = {"lambda1": fit.lam, "lambda2": float(lambda2)}
    if lambda2 >= fit.lam and _zero_correction(fit):
        return _result(d, fit, fit.beta.copy(), BOOSTED, params)
    residual = d.y - d.X @ fit.beta
    delta_fit = lasso_cd(d.with_response(residual), lambda2, opts)
    beta = fit.beta + delta_fit.beta
    return _result(d, fit, beta, BOOSTED, params)


def boosted_support_lasso(d: Dataset, fit: LassoFit, lambda2: float,
                          opts: SolverOptions | None = None) -> RefitResult:
    """Boosted refit with the correction restricted to the fit's support."""
    if lambda2 <= 0:
        raise ValueError("lambda2 must be positive")
    params = {"lambda1": fit.lam, "lambda2": float(lambda2)}
    support = list(fit.support)
    if not support:
        return _result(d, fit, np.zeros(d.p), BOOSTED_SUPPORT, params)
    if lambda2 >= fit.lam and _zero_correction(fit):
        return _result(d, fit, fit.beta.copy(), BOOSTED_SUPPORT, params)
    residual = d.y - d.X @ fit.beta
    sub = d.restrict_columns(support).with_response(residual)
    delta_fit = lasso_cd(sub, lambda2, opts)
    beta = fit.beta.copy()
    beta[support] += delta_fit.beta
    return _result(d, fit, beta, BOOSTED_SUPPORT, params)


def bregman_lasso(d: Dataset, fit: LassoFit, lambda2: float,
                  opts: SolverOptions | None = None) -> RefitResult:
    """Bregman refit: lasso at ``lambda2`` on the inflated response
    ``y + (lambda2/lambda1)(y - X beta_hat)``.

    As ``lambda2`` grows the solution converges to the sign-constrained
    least-squares refit; the solve tolerance tracks the response scale so
    extreme ratios stay solvable in float64.
    """
    if lambda2 <= 0:
        raise ValueError("lambda2 must be positive")
    opts = opts or SolverOptions()
    ratio = lambda2 / fit.lam
    src = fit
    if ratio > 10.0:
        # The modified response amplifies the fit's subgradient noise by
        # lambda2/lambda1, so polish the fit to a matching tolerance first
        # (warm started, a few extra sweeps); certificates still compare
        # against the fit the caller supplied.
        base = float(np.max(np.abs(d.X.T @ d.y)) / d.n)
        polish_tol = max(256.0 * np.finfo(float).eps * max(base, fit.lam),
                         opts.tol / ratio)
        src = lasso_cd(d, fit.lam,
                       replace(opts, tol=polish_tol, warm_start=fit.beta))
    y_mod = d.y + ratio * (d.y - d.X @ src.beta)
    scale = max(float(lambda2), float(np.max(np.abs(d.X.T @ y_mod)) / d.n))
    tol = max(opts.tol, 256.0 * np.finfo(float).eps * scale)
    warm = opts.warm_start if opts.warm_start is not None else src.beta
    inner = replace(opts, tol=tol, warm_start=warm)
    bfit = lasso_cd(d.with_response(y_mod), lambda2, inner)
    return _result(d, fit, bfit.beta, BREGMAN,
                   {"lambda1": fit.lam, "lambda2": float(lambda2)})


def bregman_iterations(d: Dataset, lam: float, k: int,
                       opts: SolverOptions | None = None) -> RefitResult:
    """``k`` Bregman iterations at fixed penalty ``lam``.

    Each step minimizes the lasso loss plus ``lam`` times the l1 Bregman
    divergence from the previous iterate, realized as a plain lasso on the
    response ``y`` plus the accumulated residuals; the running subgradient
    stays implicit in that accumulation. ``k = 1`` is the plain lasso.
    The refit certificate compares the final iterate against the first.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if int(k) != k or k < 1:
        raise ValueError("k must be a positive integer")
    opts = opts or SolverOptions()
    acc = np.zeros(d.n)
    first: LassoFit | None = None
    beta = None
    for _ in range(int(k)):
        step = lasso_cd(d.with_response(d.y + acc),
                        lam, replace(opts, warm_start=beta))
        beta = step.beta
        acc += d.y - d.X @ beta
        if first is None:
            first = step
    return RefitResult(
        beta=beta,
        strategy=BREGMAN_ITERATIONS,
        params={"lambda": float(lam), "k": int(k)},
        refit_certified=certify_refitting(d, first, beta),
        sign_certified=None,
    )


def relaxed_lasso(d: Dataset, fit: LassoFit, phi: float,
                  opts: SolverOptions | None = None) -> RefitResult:
    """Lasso at the relaxed penalty ``phi * lambda1`` on the support
    submatrix, embedded back. ``phi`` lies strictly between 0 and 1."""
    if not 0.0 < phi < 1.0:
        raise ValueError("phi must lie in (0, 1)")
    params = {"lambda1": fit.lam, "phi": float(phi)}
    support = list(fit.support)
    beta = np.zeros(d.p)
    if support:
        sub_fit = lasso_cd(d.restrict_columns(support), phi * fit.lam, opts)
        beta[support] = sub_fit.beta
    return _result(d, fit, beta, RELAXED, params)


def l1ball_refit(d: Dataset, fit: LassoFit,
                 opts: SolverOptions | None = None) -> RefitResult:
    """Least squares constrained to the l1 ball of radius ``s_hat * lambda1``
    around the fit.

    Solved by monotone accelerated projected gradient started at the ball's
    center, so the returned point is feasible and never worse than the fit.
    """
    opts = opts or SolverOptions()
    radius = len(fit.support) * fit.lam
    params = {"lambda1": fit.lam, "radius": float(radius)}
    if radius == 0.0:
        return _result(d, fit, fit.beta.copy(), L1BALL, params)
    beta = _projected_gradient(d.X, d.y, fit.beta, radius,
                               tol=max(opts.tol, 1e-11),
                               max_iters=opts.max_iters)
    return _result(d, fit, beta, L1BALL, params)


def _project_l1(v: np.ndarray, radius: float) -> np.ndarray:
    # Exact Euclidean projection onto {||x||_1 <= radius}, sort-based.
    a = np.abs(v)
    if a.sum() <= radius:
        return v.copy()
    u = np.sort(a)[::-1]
    css = np.cumsum(u)
    counts = np.arange(1.0, u.size + 1.0)
    last = int(np.flatnonzero(u > (css - radius) / counts).max())
    theta = (css[last] - radius) / (last + 1.0)
    return np.sign(v) * np.maximum(a - theta, 0.0)


def _projected_gradient(X, y, center, radius, tol, max_iters) -> np.ndarray:
    # Monotone FISTA on (1/2n)||y - X b||^2 over the shifted l1 ball, with
    # momentum restart on stalls. Starting at the center keeps every iterate
    # feasible and the objective nonincreasing.
    n = y.shape[0]
    lip = float(np.linalg.norm(X, 2)) ** 2 / n
    if lip == 0.0:
        return center.copy()
    step = 1.0 / lip

    def proj(v):
        return center + _project_l1(v - center, radius)

    def grad(b):
        return -(X.T @ (y - X @ b)) / n

    def fval(b):
        r = y - X @ b
        return 0.5 * float(r @ r) / n

    x_prev = center.copy()
    x = center.copy()
    fx = fval(x)
    yk = x.copy()
    t = 1.0
    res = np.inf
    for _ in range(max_iters):
        pure = bool(np.array_equal(yk, x))
        z = proj(yk - step * grad(yk))
        fz = fval(z)
        if fz < fx:
            x_new, f_new = z, fz
        elif pure:
            x_new, f_new = x, fx
        else:
            cand = proj(x - step * grad(x))
            fc = fval(cand)
            x_new, f_new = (cand, fc) if fc < fx else (x, fx)
        res = float(np.max(np.abs(x_new - proj(x_new - step * grad(x_new)))))
        if res <= tol:
            return x_new
        if x_new is x:
            if pure:
                # Even the plain descent step cannot reduce the objective in
                # float64; x is the attainable optimum for this arithmetic.
                return x
            # Momentum overshot; restart so the next step is plain descent.
            yk = x.copy()
            t = 1.0
            continue
        if f_new >= fx:
            yk = x_new.copy()
            t = 1.0
        else:
            t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
            yk = x_new + (t / t_new) * (z - x_new) \
                + ((t - 1.0) / t_new) * (x_new - x_prev)
            t = t_new
        x_prev, x, fx = x, x_new, f_new
    # On a rank-deficient design the fixed-point residual shrinks only
    # sublinearly, so a tight tol can be out of reach in any fixed budget
    # even though the iterate is feasible, no worse than the center, and
    # accurate far beyond certificate precision. Accept it when it is
    # tight at a relaxed threshold; anything looser is a genuine failure.
    if res <= 1e4 * tol * (1.0 + float(np.max(np.abs(x), initial=0.0))):
        return x
    raise NoConvergence(max_iters, res)
