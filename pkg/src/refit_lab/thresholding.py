"""Threshold operators and identity-design closed forms.

For the denoising model (n = p, identity design, objective
``(1/2) ||y - beta||^2 + lam ||beta||_1``) every estimator in this package has
a componentwise closed form. These serve as independent oracles for the
iterative solvers: the general solver reproduces them through the scaling
bridge ``X = I_p`` with penalty ``lam / n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import RefitLabError


class InternalMismatch(RefitLabError):
    """Two formulas that must agree disagreed; signals a bug."""


@dataclass(frozen=True)
class ThresholdSpec:
    """Firm-threshold parameters: level ``mu > 0`` and shape ``gamma > 1``."""

    mu: float
    gamma: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if not self.gamma > 1:
            raise ValueError("gamma must exceed 1")


def soft_threshold(y, lam: float) -> np.ndarray:
    """``sign(y_j) (|y_j| - lam)_+`` componentwise, ``lam >= 0``."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    y = np.asarray(y, dtype=float)
    return np.sign(y) * np.maximum(np.abs(y) - lam, 0.0)


def hard_threshold(y, lam: float) -> np.ndarray:
    """``y_j`` where ``|y_j| > lam``, else 0. Ties at the boundary shrink."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    y = np.asarray(y, dtype=float)
    return np.where(np.abs(y) > lam, y, 0.0)


def firm_threshold(y, spec: ThresholdSpec) -> np.ndarray:
    """Firm (MCP) threshold: ``(gamma/(gamma-1)) ST(y_j, mu)`` on
    ``|y_j| <= mu * gamma``, identity outside."""
    y = np.asarray(y, dtype=float)
    shrunk = (spec.gamma / (spec.gamma - 1.0)) * soft_threshold(y, spec.mu)
    return np.where(np.abs(y) <= spec.mu * spec.gamma, shrunk, y)


def ortho_subgradient(y, lambda1: float) -> np.ndarray:
    """Canonical subgradient of the identity-design lasso ``ST(y, lambda1)``:
    ``sign(y_j)`` where ``|y_j| >= lambda1``, else ``y_j / lambda1``."""
    if lambda1 <= 0:
        raise ValueError("lambda1 must be positive")
    y = np.asarray(y, dtype=float)
    return np.where(np.abs(y) >= lambda1, np.sign(y), y / lambda1)


def ortho_bregman(y, lambda1: float, lambda2: float) -> np.ndarray:
    """Identity-design Bregman refit of ``ST(y, lambda1)`` at ``lambda2``.

    Two equivalent routes exist: shrink then threshold,
    ``ST(y + lambda2 * rho, lambda2)`` with ``rho = ortho_subgradient(y,
    lambda1)``, and the firm threshold with ``mu = (1/lambda1 +
    1/lambda2)^-1`` and ``gamma = 1 + lambda1/lambda2``. Both are computed
    and compared on every call; the firm-threshold value is returned.

    Raises
    ------
    InternalMismatch
        If the two routes disagree beyond round-off (a bug, not a data
        condition).
    """
    if lambda1 <= 0 or lambda2 <= 0:
        raise ValueError("lambda1 and lambda2 must be positive")
    y = np.asarray(y, dtype=float)
    rho = ortho_subgradient(y, lambda1)
    via_soft = soft_threshold(y + lambda2 * rho, lambda2)
    lam_h = 1.0 / (1.0 / lambda1 + 1.0 / lambda2)
    via_firm = firm_threshold(y, ThresholdSpec(mu=lam_h, gamma=1.0 + lambda1 / lambda2))
    # Forming y + lambda2 * rho costs ~eps * lambda2 in absolute terms, so
    # the agreement bound has to scale with the data.
    bound = 1e-12 * max(1.0, lambda1, lambda2,
                        float(np.max(np.abs(y))) if y.size else 1.0)
    gap = float(np.max(np.abs(via_soft - via_firm))) if y.size else 0.0
    if gap > bound:
        raise InternalMismatch(
            f"threshold formulas disagree by {gap!r} (bound {bound!r})"
        )
    return via_firm


def ortho_bregman_iterations(y, lam: float, k: int) -> np.ndarray:
    """Closed form of ``k + 1`` identity-design Bregman iterations at ``lam``:
    the firm threshold with ``mu = lam/(k+1)`` and ``gamma = (k+1)/k``, whose
    branch point sits at ``lam / k``."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    if k < 1:
        raise ValueError("k must be at least 1")
    y = np.asarray(y, dtype=float)
    return firm_threshold(y, ThresholdSpec(mu=lam / (k + 1), gamma=(k + 1) / k))
