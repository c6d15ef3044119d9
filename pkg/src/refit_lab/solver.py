"""Lasso solvers: cyclic coordinate descent, an enumeration oracle for tiny
problems, and sign-constrained least squares via active-set NNLS.

All solvers certify their output through the KKT conditions of

    min_beta (1 / (2 n)) ||y - X beta||_2^2 + lam ||beta||_1,

namely ``X^T (y - X beta) / n = lam * rho`` with ``rho_j = sign(beta_j)`` on
the support and ``|rho_j| <= 1`` elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .core import (
    EQUICORRELATION_TOL,
    Dataset,
    LassoFit,
    RefitLabError,
    equicorrelation_set,
    subgradient_from_fit,
)

# Hard cap on p for the enumeration oracle (3**p sign patterns).
ORACLE_MAX_P = 6


class NoConvergence(RefitLabError):
    """An iterative solve exhausted its budget above tolerance."""

    def __init__(self, max_iters: int, residual: float, lam: float | None = None,
                 beta: np.ndarray | None = None):
        self.max_iters = int(max_iters)
        self.residual = float(residual)
        self.lam = lam
        self.beta = None if beta is None else np.array(beta)
        where = "" if lam is None else f" at lam={lam!r}"
        super().__init__(
            f"no convergence{where}: residual {residual!r} after "
            f"{max_iters} iterations"
        )


class TooLarge(RefitLabError):
    """Problem dimension exceeds what exhaustive enumeration can cover."""


class NoKKTPoint(RefitLabError):
    """Enumeration certified no sign pattern; indicates a bug upstream."""


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the iterative solvers.

    ``tol`` bounds the KKT residual at convergence, ``max_iters`` counts full
    coordinate sweeps (or gradient steps for the projected solver), and
    ``warm_start`` seeds the iteration when given.
    """

    tol: float = 1e-10
    max_iters: int = 100_000
    warm_start: np.ndarray | None = None


def lasso_objective(d: Dataset, beta, lam: float) -> float:
    """Penalized objective ``(1/(2n)) ||y - X beta||^2 + lam ||beta||_1``."""
    beta = np.asarray(beta, dtype=float)
    r = d.y - d.X @ beta
    return float(0.5 * (r @ r) / d.n + lam * np.sum(np.abs(beta)))


def kkt_violation(d: Dataset, beta, lam: float) -> float:
    """Max componentwise violation of the lasso stationarity conditions.

    Active coordinates contribute ``|g_j - lam * sign(beta_j)|`` and inactive
    ones ``max(|g_j| - lam, 0)`` where ``g = X^T (y - X beta) / n``.
    """
    beta = np.asarray(beta, dtype=float)
    g = d.X.T @ (d.y - d.X @ beta) / d.n
    active = beta != 0.0
    viol = np.maximum(np.abs(g) - lam, 0.0)
    viol[active] = np.abs(g[active] - lam * np.sign(beta[active]))
    return float(viol.max()) if viol.size else 0.0


@njit(cache=True)
def _cd_kernel(X, r, beta, colsq, lam, max_sweeps, tol):
    # Cyclic coordinate descent. r must equal y - X @ beta on entry and is
    # kept in sync; colsq[j] = ||X_j||^2 / n. Returns (sweeps, kkt, done).
    n, p = X.shape
    kkt = np.inf
    for sweep in range(max_sweeps):
        for j in range(p):
            dj = colsq[j]
            if dj <= 0.0:
                continue
            g = 0.0
            for i in range(n):
                g += X[i, j] * r[i]
            g /= n
            z = dj * beta[j] + g
            # Tie band of a few ulp so |z| = lam lands on exactly zero even
            # when this dot product and the caller's lambda_max disagree in
            # the last bit.
            edge = lam * (1.0 + 8.9e-16)
            if z > edge:
                bnew = (z - lam) / dj
            elif z < -edge:
                bnew = (z + lam) / dj
            else:
                bnew = 0.0
            diff = bnew - beta[j]
            if diff != 0.0:
                for i in range(n):
                    r[i] -= diff * X[i, j]
                beta[j] = bnew
        kkt = 0.0
        for j in range(p):
            g = 0.0
            for i in range(n):
                g += X[i, j] * r[i]
            g /= n
            if beta[j] > 0.0:
                v = abs(g - lam)
            elif beta[j] < 0.0:
                v = abs(g + lam)
            else:
                v = abs(g) - lam
                if v < 0.0:
                    v = 0.0
            if v > kkt:
                kkt = v
        if kkt <= tol:
            return sweep + 1, kkt, True
    return max_sweeps, kkt, False


def _finish_fit(d: Dataset, beta: np.ndarray, lam: float) -> LassoFit:
    rho = subgradient_from_fit(d, beta, lam)
    support = np.flatnonzero(beta)
    viol = np.maximum(lam * np.abs(rho) - lam, 0.0)
    viol[support] = np.abs(lam * rho[support] - lam * np.sign(beta[support]))
    return LassoFit(
        beta=beta,
        lam=float(lam),
        rho=rho,
        support=support,
        equicorrelation=equicorrelation_set(rho, EQUICORRELATION_TOL),
        kkt_residual=float(viol.max()) if viol.size else 0.0,
    )


def fit_from_beta(d: Dataset, beta, lam: float) -> LassoFit:
    """Assemble the fit record for an externally supplied coefficient vector.

    Subgradient, support, equicorrelation set and KKT residual are all
    recomputed from ``d``, so the record is internally consistent whatever
    produced ``beta``. The residual is reported, not checked: callers decide
    whether the vector is good enough for their purpose.
    """
    beta = np.asarray(beta, dtype=float).copy()
    if beta.shape != (d.p,):
        raise ValueError(f"beta has shape {beta.shape}, expected ({d.p},)")
    return _finish_fit(d, beta, float(lam))


def lasso_cd(d: Dataset, lam: float, opts: SolverOptions | None = None) -> LassoFit:
    """Solve the lasso at penalty ``lam`` by cyclic coordinate descent.

    Coordinates are updated in fixed index order; iteration stops once the
    recomputed-from-scratch KKT residual drops to ``opts.tol``. The returned
    fit carries the canonical subgradient, the support, the equicorrelation
    set and the certified residual.

    Parameters
    ----------
    d : Dataset
    lam : float
        Penalty level, strictly positive.
    opts : SolverOptions, optional

    Raises
    ------
    NoConvergence
        If the sweep budget runs out above tolerance. The exception carries
        the last iterate and residual.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    opts = opts or SolverOptions()
    X = np.asfortranarray(d.X)
    y = np.asarray(d.y, dtype=float)
    n, p = X.shape
    colsq = np.einsum("ij,ij->j", X, X) / n
    if opts.warm_start is not None:
        beta = np.array(opts.warm_start, dtype=float)
        if beta.shape != (p,):
            raise ValueError("warm_start must have shape (p,)")
    else:
        beta = np.zeros(p)
    # The kernel tracks the residual incrementally; verify against a fresh
    # residual before trusting convergence, re-entering if drift ate the
    # margin.
    kkt = np.inf
    for _ in range(4):
        r = y - X @ beta
        sweeps, kkt, done = _cd_kernel(
            X, r, beta, colsq, float(lam), int(opts.max_iters), float(opts.tol)
        )
        if not done:
            raise NoConvergence(opts.max_iters, kkt, lam=lam, beta=beta)
        kkt = kkt_violation(d, beta, lam)
        if kkt <= opts.tol:
            return _finish_fit(d, beta, lam)
    raise NoConvergence(opts.max_iters, kkt, lam=lam, beta=beta)


def lasso_path(d: Dataset, lams, opts: SolverOptions | None = None) -> list[LassoFit]:
    """Warm-started fits along a strictly descending penalty grid."""
    lams = [float(l) for l in lams]
    if any(l <= 0 for l in lams):
        raise ValueError("all penalties must be positive")
    if any(b >= a for a, b in zip(lams, lams[1:])):
        raise ValueError("penalty grid must be strictly descending")
    opts = opts or SolverOptions()
    fits: list[LassoFit] = []
    warm = opts.warm_start
    for lam in lams:
        fit = lasso_cd(d, lam, replace(opts, warm_start=warm))
        fits.append(fit)
        warm = fit.beta
    return fits


def lasso_bruteforce_oracle(d: Dataset, lam: float) -> LassoFit:
    """Exhaustive lasso solve for ``p <= ORACLE_MAX_P`` by sign enumeration.

    Every pattern ``sigma`` in ``{-1, 0, 1}^p`` induces the linear system
    ``(X_A^T X_A / n) beta_A = X_A^T y / n - lam * sigma_A`` on its active
    set ``A``; a candidate is kept when the solved signs match ``sigma`` and
    the inactive coordinates satisfy ``|X_j^T (y - X beta) / n| <= lam``.
    Among certified candidates the smallest objective wins, with ties broken
    by smaller l1 norm and then lexicographic sign pattern.

    Raises
    ------
    TooLarge
        If ``p`` exceeds ``ORACLE_MAX_P``.
    NoKKTPoint
        If no pattern certifies; with exact arithmetic this cannot happen,
        so it signals a bug.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    p = d.p
    if p > ORACLE_MAX_P:
        raise TooLarge(f"enumeration oracle supports p <= {ORACLE_MAX_P}, got {p}")
    X = d.X
    n = d.n
    G = X.T @ X / n
    c = X.T @ d.y / n
    vtol = 1e-8 * max(1.0, lam, float(np.max(np.abs(c))) if p else 1.0)
    candidates = []
    for pattern in itertools.product((-1.0, 0.0, 1.0), repeat=p):
        sigma = np.array(pattern)
        active = np.flatnonzero(sigma)
        beta = np.zeros(p)
        if active.size:
            GA = G[np.ix_(active, active)]
            rhs = c[active] - lam * sigma[active]
            try:
                sol = np.linalg.solve(GA, rhs)
            except np.linalg.LinAlgError:
                sol, *_ = np.linalg.lstsq(GA, rhs, rcond=None)
            if np.any(sol * sigma[active] <= 0.0):
                continue
            beta[active] = sol
        g = c - G @ beta
        if active.size and np.max(np.abs(g[active] - lam * sigma[active])) > vtol:
            continue
        inactive = np.flatnonzero(sigma == 0.0)
        if inactive.size and np.max(np.abs(g[inactive])) > lam + vtol:
            continue
        candidates.append(
            (lasso_objective(d, beta, lam), float(np.sum(np.abs(beta))),
             pattern, beta)
        )
    if not candidates:
        raise NoKKTPoint(f"no sign pattern certified at lam={lam!r}")
    best_obj = min(obj for obj, *_ in candidates)
    slack = 1e-12 * max(1.0, abs(best_obj))
    pool = [cand for cand in candidates if cand[0] <= best_obj + slack]
    best_l1 = min(l1 for _, l1, *_ in pool)
    pool = [cand for cand in pool if cand[1] <= best_l1 + slack]
    _, _, _, beta = min(pool, key=lambda cand: cand[2])
    return _finish_fit(d, beta, lam)


def sign_constrained_ls(X_E, y, signs) -> np.ndarray:
    """Least squares on ``X_E`` with coordinatewise sign constraints.

    Solves ``min ||y - X_E b||_2`` subject to ``sign(b_j) in {0, signs_j}``
    by flipping columns (``X_E diag(signs)``), running Lawson-Hanson
    active-set nonnegative least squares, and flipping back. Equality
    subproblems use minimum-norm solves, so rank-deficient passive sets are
    handled. At return the KKT system holds: passive coordinates have
    stationarity residual at most 1e-8 and binding coordinates have
    nonnegative multipliers up to the same slack.

    Parameters
    ----------
    X_E : array_like, shape (n, k)
    y : array_like, shape (n,)
    signs : array_like of +-1, shape (k,)

    Raises
    ------
    NoConvergence
        If the active-set loop runs ``3 k`` iterations without progress.
    """
    X_E = np.asarray(X_E, dtype=float)
    y = np.asarray(y, dtype=float)
    signs = np.asarray(signs, dtype=float)
    if X_E.ndim != 2:
        raise ValueError("X_E must be 2-d")
    n, k = X_E.shape
    if signs.shape != (k,):
        raise ValueError("signs must have one entry per column")
    if not np.all(np.abs(signs) == 1.0):
        raise ValueError("signs must be +-1")
    if k == 0:
        return np.zeros(0)
    A = X_E * signs
    gamma = _nnls(A, y, stall_limit=3 * k)
    scale = max(1.0, float(np.max(np.abs(A.T @ y))) / n)
    grad = A.T @ (y - A @ gamma) / n
    passive = gamma > 0.0
    resid = float(np.max(np.abs(grad[passive]))) if passive.any() else 0.0
    if resid > 1e-8 * scale or (~passive).any() and grad[~passive].max() > 1e-8 * scale:
        raise NoConvergence(3 * k, resid)
    return signs * gamma


def _nnls(A, b, stall_limit: int) -> np.ndarray:
    # Lawson-Hanson with minimum-norm inner solves. Progress is measured on
    # the squared residual; stall_limit outer rounds without improvement
    # aborts.
    m, k = A.shape
    x = np.zeros(k)
    passive = np.zeros(k, dtype=bool)
    r = b.astype(float).copy()
    wtol = 1e-10 * max(1.0, float(np.max(np.abs(A.T @ b))) if k else 1.0)
    best = float(r @ r)
    stall = 0
    while True:
        w = A.T @ r
        w[passive] = -np.inf
        j = int(np.argmax(w))
        if passive.all() or w[j] <= wtol:
            return x
        passive[j] = True
        while True:
            sol, *_ = np.linalg.lstsq(A[:, passive], b, rcond=None)
            if sol.size == 0 or sol.min() > 0.0:
                break
            xp = x[passive]
            drop = sol <= 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = xp[drop] / (xp[drop] - sol[drop])
            alpha = float(np.min(steps)) if steps.size else 0.0
            xp = xp + alpha * (sol - xp)
            xp[xp < 0.0] = 0.0
            idx = np.flatnonzero(passive)
            x[idx] = xp
            passive[idx[xp == 0.0]] = False
            if not passive.any():
                return np.zeros(k)
        x[:] = 0.0
        x[passive] = sol
        r = b - A @ x
        obj = float(r @ r)
        if obj < best - 1e-12 * max(1.0, best):
            best = obj
            stall = 0
        else:
            stall += 1
            if stall > stall_limit:
                raise NoConvergence(stall_limit, obj)
