#pragma once

#include "errbalance/simple_freq.hpp"
#include "errbalance/types.hpp"

namespace errbalance {

/// Normal prior on the treatment effect, N(delta0, 2 sigma^2 / n0). The SD
/// comes from the design it is combined with.
struct EffectPrior {
    double delta0 = 0.0;
    double n0 = 0.0;  // prior information in per-arm patients

    void validate() const;
};

/// n0 / (n0 + n1)
double prior_fraction(const DesignParams& design, const EffectPrior& prior);
/// sqrt(n0 / 2) delta0 / sigma
double prior_z(const DesignParams& design, const EffectPrior& prior);

/// Lower limit on the estimated difference above which the lower 1 - alpha
/// credible bound for delta excludes zero.
double bayes_threshold(const DesignParams& design, const EffectPrior& prior, double alpha);

/// Type I error of the credible-bound rule at delta = 0.
double t1e_bayes(const DesignParams& design, const EffectPrior& prior, double alpha);

/// Type II error of the credible-bound rule at delta = design.delta0. One minus
/// this is the conditional Bayesian power.
double t2e_bayes(const DesignParams& design, const EffectPrior& prior, double alpha);

double psi_bayes(const DesignParams& design, const EffectPrior& prior, double alpha,
                 double omega);
ErrorReport errors_simple_bayes(const DesignParams& design, const EffectPrior& prior,
                                double alpha, double omega);

/// Minimiser of psi_bayes. The attained minimum equals min_psi_simple(theta, omega).
OptimumResult optimal_simple_bayes(const DesignParams& design, const EffectPrior& prior,
                                   double omega);

/// alpha at which the credible-bound rule has frequentist type I error
/// epsilon / 2. The resulting threshold is the plain z-test threshold.
double calibrate_alpha(const EffectPrior& prior, const DesignParams& design, double epsilon);

}  // namespace errbalance
