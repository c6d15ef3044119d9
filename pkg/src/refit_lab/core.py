"""Shared data model for the lasso refitting toolkit.

Conventions used across the package: design matrices have shape ``(n, p)``
with columns scaled so that ``||X_j||_2^2 = n``, and the lasso objective is

    (1 / (2 n)) ||y - X beta||_2^2 + lambda ||beta||_1.

Under the column convention ``lambda_max = ||X^T y / n||_inf`` is the
smallest penalty with all-zero solution, and the canonical subgradient of a
fit ``beta`` is ``rho = X^T (y - X beta) / (lambda n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

# Relative slack on ||X_j||_2^2 = n accepted after normalization.
COLUMN_NORM_RTOL = 1e-8
# |rho_j| >= 1 - EQUICORRELATION_TOL puts j in the equicorrelation set.
EQUICORRELATION_TOL = 1e-6
# Componentwise slack when validating a claimed subgradient of ||.||_1.
SUBGRADIENT_TOL = 1e-8


class RefitLabError(Exception):
    """Base class for all errors raised by this package."""


class ZeroColumn(RefitLabError):
    """A design column has zero norm and cannot be normalized."""

    def __init__(self, j: int):
        self.j = int(j)
        super().__init__(f"design column {j} has zero norm")


class InvalidSubgradient(RefitLabError):
    """A vector presented as a subgradient of ``||.||_1`` is not one."""


def _readonly(a, dtype=float) -> np.ndarray:
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


def _index_tuple(idx) -> tuple[int, ...]:
    return tuple(int(i) for i in idx)


def normalize_columns(X) -> tuple[np.ndarray, np.ndarray]:
    """Scale each column of ``X`` to squared norm ``n``.

    Parameters
    ----------
    X : array_like, shape (n, p)
        Design matrix with finite entries.

    Returns
    -------
    X_scaled : ndarray, shape (n, p)
        ``X`` with column ``j`` divided by ``scales[j]``.
    scales : ndarray, shape (p,)
        Per-column divisors ``||X_j||_2 / sqrt(n)``.

    Raises
    ------
    ZeroColumn
        If some column has zero norm.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be a 2-d array")
    n = X.shape[0]
    sq = np.einsum("ij,ij->j", X, X)
    zero = np.flatnonzero(sq == 0.0)
    if zero.size:
        raise ZeroColumn(zero[0])
    scales = np.sqrt(sq / n)
    return X / scales, scales


@dataclass(frozen=True)
class Dataset:
    """Immutable regression data ``(X, y)`` with recorded column scales.

    Build instances with :meth:`from_arrays`, which normalizes columns to
    squared norm ``n`` and records the applied scales. The plain constructor
    keeps the arrays as given (scales default to ones); it exists for the
    identity-design checks, where renormalizing the identity would defeat
    the point, and for internal reuse of already-normalized designs.
    """

    X: np.ndarray
    y: np.ndarray
    column_scales: np.ndarray | None = None

    def __post_init__(self):
        X = _readonly(self.X)
        y = _readonly(self.y)
        if X.ndim != 2 or y.ndim != 1:
            raise ValueError("X must be 2-d and y 1-d")
        if X.shape[0] != y.shape[0]:
            raise ValueError(
                f"X has {X.shape[0]} rows but y has {y.shape[0]} entries"
            )
        scales = self.column_scales
        scales = np.ones(X.shape[1]) if scales is None else np.asarray(scales, float)
        if scales.shape != (X.shape[1],):
            raise ValueError("column_scales must have one entry per column")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_scales", _readonly(scales))

    @classmethod
    def from_arrays(cls, X, y) -> "Dataset":
        """Normalize columns of ``X`` and wrap the result."""
        X_scaled, scales = normalize_columns(X)
        return cls(X=X_scaled, y=np.asarray(y, float), column_scales=scales)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def with_response(self, y) -> "Dataset":
        """Same design, different response. Skips renormalization."""
        return Dataset(X=self.X, y=np.asarray(y, float),
                       column_scales=self.column_scales)

    def restrict_columns(self, idx) -> "Dataset":
        """Dataset on the column submatrix ``X[:, idx]`` (norms unchanged)."""
        idx = np.asarray(idx, dtype=int)
        return Dataset(X=self.X[:, idx], y=self.y,
                       column_scales=self.column_scales[idx])


@dataclass(frozen=True)
class LassoFit:
    """A lasso solution together with its optimality evidence.

    Attributes
    ----------
    beta : ndarray, shape (p,)
        Fitted coefficients (exact zeros off the support).
    lam : float
        Penalty level the fit was computed at.
    rho : ndarray, shape (p,)
        Canonical subgradient ``X^T (y - X beta) / (lam n)``.
    support : tuple of int
        Indices with ``beta_j != 0``.
    equicorrelation : tuple of int
        Indices with ``|rho_j| >= 1 - EQUICORRELATION_TOL``.
    kkt_residual : float
        Max componentwise violation of the stationarity conditions.
    """

    beta: np.ndarray
    lam: float
    rho: np.ndarray
    support: tuple[int, ...]
    equicorrelation: tuple[int, ...]
    kkt_residual: float

    def __post_init__(self):
        object.__setattr__(self, "beta", _readonly(self.beta))
        object.__setattr__(self, "rho", _readonly(self.rho))
        object.__setattr__(self, "support", _index_tuple(self.support))
        object.__setattr__(self, "equicorrelation",
                           _index_tuple(self.equicorrelation))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "kkt_residual", float(self.kkt_residual))


@dataclass(frozen=True)
class RefitResult:
    """Output of a refitting strategy applied to a first-step lasso fit."""

    beta: np.ndarray
    strategy: str
    params: Mapping[str, float]
    refit_certified: bool
    sign_certified: bool | None

    def __post_init__(self):
        object.__setattr__(self, "beta", _readonly(self.beta))
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class GroundTruth:
    """Planted coefficients and noise level of a generated instance."""

    beta_star: np.ndarray
    sigma: float
    support_star: tuple[int, ...]
    s: int

    def __post_init__(self):
        object.__setattr__(self, "beta_star", _readonly(self.beta_star))
        object.__setattr__(self, "support_star",
                           _index_tuple(self.support_star))

    def with_sigma(self, sigma: float) -> "GroundTruth":
        return replace(self, sigma=float(sigma))


def lambda_max(d: Dataset) -> float:
    """Smallest penalty for which the lasso solution is identically zero."""
    return float(np.max(np.abs(d.X.T @ d.y)) / d.n) if d.p else 0.0


def subgradient_from_fit(d: Dataset, beta, lam: float) -> np.ndarray:
    """Canonical subgradient ``X^T (y - X beta) / (lam n)`` of a fit."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    beta = np.asarray(beta, dtype=float)
    return d.X.T @ (d.y - d.X @ beta) / (lam * d.n)


def equicorrelation_set(rho, tol: float = EQUICORRELATION_TOL) -> tuple[int, ...]:
    """Indices whose subgradient entry sits at the boundary, ``|rho_j| >= 1 - tol``."""
    rho = np.asarray(rho, dtype=float)
    return _index_tuple(np.flatnonzero(np.abs(rho) >= 1.0 - tol))


def bregman_divergence(z, w, rho, tol: float = SUBGRADIENT_TOL) -> float:
    """l1 Bregman divergence ``||z||_1 - <rho, z>`` for ``rho`` in the
    subdifferential of ``||.||_1`` at ``w``.

    The divergence is nonnegative, bounded by ``2 ||z||_1``, convex and
    separable in ``z``, and vanishes when the signs of ``z`` agree with
    ``rho`` coordinatewise.

    Raises
    ------
    InvalidSubgradient
        If ``||rho||_inf > 1 + tol`` or ``rho_j`` differs from ``sign(w_j)``
        by more than ``tol`` on the support of ``w``.
    """
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if z.shape != w.shape or z.shape != rho.shape:
        raise ValueError("z, w and rho must share one shape")
    if rho.size and np.max(np.abs(rho)) > 1.0 + tol:
        j = int(np.argmax(np.abs(rho)))
        raise InvalidSubgradient(f"|rho[{j}]| = {abs(rho[j])!r} exceeds 1")
    bad = np.flatnonzero((w != 0.0) & (np.abs(rho - np.sign(w)) > tol))
    if bad.size:
        j = int(bad[0])
        raise InvalidSubgradient(
            f"rho[{j}] = {rho[j]!r} but sign(w[{j}]) = {np.sign(w[j])!r}"
        )
    val = float(np.sum(np.abs(z)) - rho @ z)
    return max(0.0, val)
