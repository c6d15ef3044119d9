"""Shared test helpers: instance factories and independent oracles."""

import itertools

import numpy as np

from refit_lab import Dataset, lambda_max


def random_dataset(seed, n=16, p=8, s=3, noise=0.3, correlated=False):
    """A seeded dataset with a planted sparse signal.

    ``correlated`` mixes a common factor into every column so that support
    recovery is hard and sign disagreements between refits become likely.
    """
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    if correlated:
        common = rng.standard_normal((n, 1))
        X = 0.75 * common + 0.25 * X
    beta_star = np.zeros(p)
    idx = rng.choice(p, size=min(s, p), replace=False)
    beta_star[idx] = rng.standard_normal(idx.size) + np.sign(
        rng.standard_normal(idx.size))
    y = X @ beta_star + noise * rng.standard_normal(n)
    return Dataset.from_arrays(X, y)


def ar_dataset(seed, n=25, p=8, rho=0.9, noise=0.5):
    """Strongly chain-correlated design where least squares flips signs.

    At seed 5 with the defaults, the lasso fit at a quarter of the
    critical penalty has a support coordinate whose least-squares refit
    takes the opposite sign.
    """
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, p))
    X = np.empty((n, p))
    X[:, 0] = Z[:, 0]
    for j in range(1, p):
        X[:, j] = rho * X[:, j - 1] + np.sqrt(1 - rho ** 2) * Z[:, j]
    beta_star = np.zeros(p)
    beta_star[[0, 3, 5]] = [2.0, -1.0, 1.5]
    y = X @ beta_star + noise * rng.standard_normal(n)
    return Dataset.from_arrays(X, y)


def lam_at(d, frac):
    """Penalty at a fraction of the instance's critical value."""
    return frac * lambda_max(d)


def sign_ls_objective(X_E, y, beta):
    r = y - X_E @ beta
    return 0.5 * float(r @ r) / y.shape[0]


def sign_ls_enumeration_oracle(X_E, y, signs):
    """Solve sign-constrained least squares by enumerating binding sets.

    Every subset of coordinates may be bound at zero; the rest are solved by
    unconstrained (minimum-norm) least squares on the sign-flipped columns.
    A candidate is kept when it is primal feasible (solved coordinates
    nonnegative after the flip) and dual feasible (gradient at bound
    coordinates nonnegative). All kept candidates share the optimal
    objective; the one with smallest l1 norm is returned for determinism.
    """
    X_E = np.asarray(X_E, dtype=float)
    y = np.asarray(y, dtype=float)
    signs = np.asarray(signs, dtype=float)
    n, m = X_E.shape
    A = X_E * signs
    scale = max(1.0, float(np.max(np.abs(A.T @ y))) / n)
    best = None
    for mask in itertools.product((0, 1), repeat=m):
        free = np.flatnonzero(np.asarray(mask))
        b = np.zeros(m)
        if free.size:
            sol, *_ = np.linalg.lstsq(A[:, free], y, rcond=None)
            b[free] = sol
        if np.any(b < -1e-9):
            continue
        grad = -A.T @ (y - A @ b) / n
        bound = np.setdiff1d(np.arange(m), free)
        if free.size and np.max(np.abs(grad[free])) > 1e-8 * scale:
            continue
        if bound.size and np.min(grad[bound]) < -1e-8 * scale:
            continue
        key = (sign_ls_objective(A, y, b), float(np.sum(np.abs(b))))
        if best is None or key < best[0]:
            best = (key, b)
    assert best is not None, "enumeration found no KKT point"
    return signs * best[1]
