#include "errbalance/simple_bayes.hpp"

#include <cmath>

#include "checks.hpp"

namespace errbalance {

using detail::require_nonnegative;
using detail::require_positive;
using detail::require_probability;

void EffectPrior::validate() const {
    require_positive("prior delta0", delta0);
    require_nonnegative("n0", n0);
}

double prior_fraction(const DesignParams& design, const EffectPrior& prior) {
    design.validate();
    prior.validate();
    return prior.n0 / (prior.n0 + design.n1);
}

double prior_z(const DesignParams& design, const EffectPrior& prior) {
    design.validate();
    prior.validate();
    return std::sqrt(prior.n0 / 2.0) * prior.delta0 / design.sigma;
}

namespace {

// Standardised quantity a(alpha) such that P(T1E) = Phi(a) and
// P(T2E) = 1 - Phi(a + theta).
double bayes_shift(const DesignParams& design, const EffectPrior& prior, double alpha) {
    require_probability("alpha", alpha);
    const double f0 = prior_fraction(design, prior);
    const double z0 = prior_z(design, prior);
    return norm_quantile(alpha) / std::sqrt(1.0 - f0) + std::sqrt(f0 / (1.0 - f0)) * z0;
}

}  // namespace

double bayes_threshold(const DesignParams& design, const EffectPrior& prior, double alpha) {
    design.validate();
    prior.validate();
    require_probability("alpha", alpha);
    const double n = design.n1 + prior.n0;
    return -norm_quantile(alpha) * std::sqrt(2.0) * design.sigma * std::sqrt(n) /
               design.n1 -
           prior.n0 / design.n1 * prior.delta0;
}

double t1e_bayes(const DesignParams& design, const EffectPrior& prior, double alpha) {
    return norm_cdf(bayes_shift(design, prior, alpha));
}

double t2e_bayes(const DesignParams& design, const EffectPrior& prior, double alpha) {
    return norm_cdf(-bayes_shift(design, prior, alpha) - noncentrality(design));
}

double psi_bayes(const DesignParams& design, const EffectPrior& prior, double alpha,
                 double omega) {
    return errors_simple_bayes(design, prior, alpha, omega).psi;
}

ErrorReport errors_simple_bayes(const DesignParams& design, const EffectPrior& prior,
                                double alpha, double omega) {
    require_positive("omega", omega);
    const double t1e = t1e_bayes(design, prior, alpha);
    const double t2e = t2e_bayes(design, prior, alpha);
    return {alpha, t1e, t2e, weighted_error(t1e, t2e, omega), omega};
}

OptimumResult optimal_simple_bayes(const DesignParams& design, const EffectPrior& prior,
                                   double omega) {
    require_positive("omega", omega);
    const double theta = noncentrality(design);
    const double f0 = prior_fraction(design, prior);
    const double z0 = prior_z(design, prior);
    const double best_shift = -std::log(omega) / theta - theta / 2.0;
    const double alpha = norm_cdf(std::sqrt(1.0 - f0) * best_shift - std::sqrt(f0) * z0);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InfeasibleError("optimal_simple_bayes: optimal alpha is not representable "
                              "in (0, 1)");
    }
    // Error rates follow from the optimal shift directly; going through
    // alpha would lose accuracy in the tails.
    const double t1e = norm_cdf(best_shift);
    const double t2e = norm_cdf(-best_shift - theta);
    return {Regime::SimpleBayes, omega, alpha, t1e, t2e, weighted_error(t1e, t2e, omega),
            theta};
}

double calibrate_alpha(const EffectPrior& prior, const DesignParams& design, double epsilon) {
    require_probability("epsilon", epsilon);
    const double f0 = prior_fraction(design, prior);
    const double z0 = prior_z(design, prior);
    const double z = -std::sqrt(1.0 - f0) * norm_quantile(epsilon / 2.0) +
                     std::sqrt(f0) * z0;
    return norm_cdf(-z);
}

}  // namespace errbalance
