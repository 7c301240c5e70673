"""Cost-weighted optimisation of type I and type II error rates."""

from ._core import (
    BracketError,
    CompositeContext,
    ConvergenceError,
    DecisionRule,
    DesignParams,
    DomainError,
    EffectPrior,
    InfeasibleError,
    PlaceboDesignPrior,
    PlaceboPrior,
    Regime,
    TwoArmLayout,
    __version__,
    beta_from_alpha,
    bvn_cdf,
    calibrate_alpha,
    errors_composite,
    errors_historical,
    errors_simple_bayes,
    hc_optimal_alpha,
    hc_unconditional_errors,
    noncentrality,
    norm_cdf,
    norm_pdf,
    norm_quantile,
    omega_from_costs,
    omega_from_weights,
    optimal_composite_bayes,
    optimal_composite_freq,
    optimal_simple_bayes,
    optimal_simple_freq,
    pos,
    pos_decomposition,
    psi,
    run_cli,
    sample_size,
    simulate,
    size_for_psi_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
