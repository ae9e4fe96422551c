"""Risk analysis and simulation toolkit for sparse-mean estimation.

Thresholding and shrinkage estimators for the Gaussian sequence model with a
sparsity- and signal-budget-constrained parameter space: exact risks and
their oracles, worst-case risk, tuning optimization, SNR-regime risk
approximations, Bayes lower bounds from spike priors, and a deterministic
simulation sweep engine.
"""

from .bayes import (
    BayesRiskEstimate,
    BlockPrior,
    Sided,
    SpikePrior,
    lower_bound_formula,
    mc_bayes_risk,
    posterior_mean_onesided,
    posterior_mean_symmetric,
)
from .estimators import EstimatorKind, Tuning, apply, scale_tuning
from .experiments import (
    SimConfig,
    SimResult,
    gen_signal,
    load_config,
    read_csv,
    run_sweep,
    write_csv,
)
from .gaussian import QuadratureError, TailSeries, gauss_expect, mills_bound, phi, upper_tail
from .minimax import (
    MinimaxApprox,
    Regime,
    RegimeDecision,
    classical_minimax,
    classify_regime,
    estimator_sup_risk_approx,
    minimax_approx,
)
from .risk import (
    RiskReport,
    SparseSpace,
    mc_risk,
    quad_risk,
    risk_elastic,
    risk_hard,
    risk_linear,
    risk_soft,
    risk_zero,
    sup_risk,
)
from .tuning import (
    TuningResult,
    hard_tuning_window,
    optimize_lambda,
    optimize_lambda_gamma,
    recommended_tuning,
)

__version__ = "0.1.0"

__all__ = [
    "BayesRiskEstimate",
    "BlockPrior",
    "EstimatorKind",
    "MinimaxApprox",
    "QuadratureError",
    "Regime",
    "RegimeDecision",
    "RiskReport",
    "Sided",
    "SimConfig",
    "SimResult",
    "SparseSpace",
    "SpikePrior",
    "TailSeries",
    "Tuning",
    "TuningResult",
    "apply",
    "classical_minimax",
    "classify_regime",
    "estimator_sup_risk_approx",
    "gauss_expect",
    "gen_signal",
    "hard_tuning_window",
    "load_config",
    "lower_bound_formula",
    "mc_bayes_risk",
    "mc_risk",
    "mills_bound",
    "minimax_approx",
    "optimize_lambda",
    "optimize_lambda_gamma",
    "phi",
    "posterior_mean_onesided",
    "posterior_mean_symmetric",
    "quad_risk",
    "read_csv",
    "recommended_tuning",
    "risk_elastic",
    "risk_hard",
    "risk_linear",
    "risk_soft",
    "risk_zero",
    "run_sweep",
    "scale_tuning",
    "sup_risk",
    "upper_tail",
    "write_csv",
]
