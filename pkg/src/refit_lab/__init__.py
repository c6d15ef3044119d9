"""Refitting strategies for the lasso, with certified solvers and a
benchmark harness.

The package solves the lasso by certified coordinate descent, then offers
seven second-step estimators that keep (or provably do not worsen) the
first step's fit while undoing its shrinkage bias: least squares on the
support, sign-constrained least squares on the equicorrelation set, two
boosting variants, Bregman-divergence refitting and its iterated form, the
relaxed lasso, and projected least squares over an l1 ball around the first
step. Certificates check the defining inequalities of each method a
posteriori on every result.
"""

from .core import (
    COLUMN_NORM_RTOL,
    EQUICORRELATION_TOL,
    SUBGRADIENT_TOL,
    Dataset,
    GroundTruth,
    InvalidSubgradient,
    LassoFit,
    RefitLabError,
    RefitResult,
    ZeroColumn,
    bregman_divergence,
    equicorrelation_set,
    lambda_max,
    normalize_columns,
    subgradient_from_fit,
)
from .solver import (
    ORACLE_MAX_P,
    NoConvergence,
    NoKKTPoint,
    SolverOptions,
    TooLarge,
    fit_from_beta,
    kkt_violation,
    lasso_bruteforce_oracle,
    lasso_cd,
    lasso_objective,
    lasso_path,
    sign_constrained_ls,
)
from .thresholding import (
    InternalMismatch,
    ThresholdSpec,
    firm_threshold,
    hard_threshold,
    ortho_bregman,
    ortho_bregman_iterations,
    ortho_subgradient,
    soft_threshold,
)
from .refit import (
    BOOSTED,
    BOOSTED_SUPPORT,
    BREGMAN,
    BREGMAN_ITERATIONS,
    L1BALL,
    LS,
    REFIT_CERT_TOL,
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
from .experiments import (
    EXPERIMENT_STRATEGIES,
    MEASURES,
    CVSpec,
    DegenerateColumn,
    DimensionError,
    MetricsReport,
    ParseError,
    ScenarioResult,
    SemiRealConfig,
    SyntheticConfig,
    ZeroSignal,
    cross_validate,
    default_lambda_grid,
    default_phi_grid,
    estimate,
    gen_response,
    gen_synthetic_design,
    load_design_csv,
    make_beta_star,
    metrics,
    resolve_workers,
    run_scenario,
    select_support,
    snr_to_sigma,
    standin_design,
    summarize,
    write_long_csv,
    write_summary_json,
)

__version__ = "0.1.0"

__all__ = [
    "COLUMN_NORM_RTOL",
    "EQUICORRELATION_TOL",
    "SUBGRADIENT_TOL",
    "Dataset",
    "GroundTruth",
    "InvalidSubgradient",
    "LassoFit",
    "RefitLabError",
    "RefitResult",
    "ZeroColumn",
    "bregman_divergence",
    "equicorrelation_set",
    "lambda_max",
    "normalize_columns",
    "subgradient_from_fit",
    "ORACLE_MAX_P",
    "NoConvergence",
    "NoKKTPoint",
    "SolverOptions",
    "TooLarge",
    "fit_from_beta",
    "kkt_violation",
    "lasso_bruteforce_oracle",
    "lasso_cd",
    "lasso_objective",
    "lasso_path",
    "sign_constrained_ls",
    "InternalMismatch",
    "ThresholdSpec",
    "firm_threshold",
    "hard_threshold",
    "ortho_bregman",
    "ortho_bregman_iterations",
    "ortho_subgradient",
    "soft_threshold",
    "BOOSTED",
    "BOOSTED_SUPPORT",
    "BREGMAN",
    "BREGMAN_ITERATIONS",
    "L1BALL",
    "LS",
    "REFIT_CERT_TOL",
    "RELAXED",
    "SLS",
    "STRATEGIES",
    "StrategyParams",
    "boosted_lasso",
    "boosted_support_lasso",
    "bregman_iterations",
    "bregman_lasso",
    "certify_refitting",
    "certify_sign_consistency",
    "l1ball_refit",
    "ls_lasso",
    "relaxed_lasso",
    "sls_lasso",
    "EXPERIMENT_STRATEGIES",
    "MEASURES",
    "CVSpec",
    "DegenerateColumn",
    "DimensionError",
    "MetricsReport",
    "ParseError",
    "ScenarioResult",
    "SemiRealConfig",
    "SyntheticConfig",
    "ZeroSignal",
    "cross_validate",
    "default_lambda_grid",
    "default_phi_grid",
    "estimate",
    "gen_response",
    "gen_synthetic_design",
    "load_design_csv",
    "make_beta_star",
    "metrics",
    "resolve_workers",
    "run_scenario",
    "select_support",
    "snr_to_sigma",
    "standin_design",
    "summarize",
    "write_long_csv",
    "write_summary_json",
    "__version__",
]
