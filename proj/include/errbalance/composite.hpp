#pragma once

#include "errbalance/simple_bayes.hpp"
#include "errbalance/simple_freq.hpp"
#include "errbalance/types.hpp"

namespace errbalance {

/// Which success criterion is applied to the estimated difference.
enum class DecisionRule {
    Frequentist,  // one-sided z-test at level alpha
    Bayesian,     // lower 1 - alpha credible bound excludes zero
};

/// Composite hypotheses H0: delta <= 0 vs H1: delta > 0 with delta drawn from
/// the effect prior. The prior mean is also the design effect, so
/// design.delta0 must equal prior.delta0.
struct CompositeContext {
    DesignParams design;
    EffectPrior prior;

    static CompositeContext from_design(const DesignParams& design, double n0);

    void validate() const;
    double f0() const;    // n0 / (n0 + n1)
    double z0() const;    // sqrt(n0 / 2) delta0 / sigma
    double z1() const;    // sqrt(n1 / 2) delta0 / sigma
    double rho() const;   // -sqrt(1 - f0)
};

/// Threshold on y = standardised predictive deviation of the estimate, such
/// that success corresponds to y > k. Shared by every average below.
double composite_success_limit(const CompositeContext& ctx, double alpha, DecisionRule rule);

double ave_t1e_freq(const CompositeContext& ctx, double alpha);
double ave_t2e_freq(const CompositeContext& ctx, double alpha);
double psi_composite_freq(const CompositeContext& ctx, double alpha, double omega);
OptimumResult optimal_composite_freq(const CompositeContext& ctx, double omega);

double ave_t1e_bayes(const CompositeContext& ctx, double alpha);
double ave_t2e_bayes(const CompositeContext& ctx, double alpha);
double psi_composite_bayes(const CompositeContext& ctx, double alpha, double omega);
OptimumResult optimal_composite_bayes(const CompositeContext& ctx, double omega);

ErrorReport errors_composite(const CompositeContext& ctx, double alpha, double omega,
                             DecisionRule rule);

/// Phi(z0): prior probability that the effect is positive.
double prior_prob_effective(const CompositeContext& ctx);

/// Probability of success (assurance): prior-predictive probability that the
/// rule declares success.
double pos(const CompositeContext& ctx, double alpha,
           DecisionRule rule = DecisionRule::Frequentist);

/// PoS split by where the true effect lies.
struct PosDecomposition {
    double relevant = 0.0;    // success and delta > delta_mcid
    double marginal = 0.0;    // success and 0 < delta <= delta_mcid
    double null_region = 0.0; // success and delta <= 0, i.e. Ave(T1E)
};

PosDecomposition pos_decomposition(const CompositeContext& ctx, double alpha, double delta_mcid,
                                   DecisionRule rule = DecisionRule::Frequentist);

}  // namespace errbalance
