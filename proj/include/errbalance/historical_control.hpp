#pragma once

#include <optional>

#include "errbalance/types.hpp"

namespace errbalance {

/// Design prior on the true placebo mean, N(pi00, sigma^2 / n00).
struct PlaceboDesignPrior {
    double pi00 = 0.0;
    double n00 = 0.0;
};

/// Historical-data prior on the placebo mean, N(pi0, sigma^2 / n0), with a
/// flat prior on the treatment effect. Conditional error rates are evaluated
/// at pi_true.
struct PlaceboPrior {
    double pi0 = 0.0;
    double n0 = 0.0;
    double pi_true = 0.0;
    std::optional<PlaceboDesignPrior> design_prior;

    void validate() const;
};

struct TwoArmLayout {
    double n_a = 0.0;  // active arm size
    double n_p = 0.0;  // concurrent placebo arm size
    double sigma = 0.0;
    double delta = 0.0;  // effect at which the type II error is evaluated

    void validate() const;
};

/// Smallest n0 accepted for the placebo prior; reductions to the frequentist
/// two-sample test are evaluated here.
inline constexpr double kMinPlaceboPriorSize = 1e-9;

/// Test statistic xbar_A - n_P xbar_P / (n0 + n_P).
double hc_statistic(const TwoArmLayout& layout, const PlaceboPrior& prior, double xbar_a,
                    double xbar_p);

/// Success is declared when hc_statistic exceeds this value.
double hc_threshold(const TwoArmLayout& layout, const PlaceboPrior& prior, double alpha);

/// Moments of hc_statistic given the data-generating placebo mean and effect.
struct StatisticMoments {
    double mean = 0.0;
    double sd = 0.0;
};
StatisticMoments hc_statistic_moments(const TwoArmLayout& layout, const PlaceboPrior& prior,
                                      double pi, double delta);

/// Noncentrality delta / sd(hc_statistic); with the design prior the sd
/// includes the uncertainty in pi.
double hc_theta(const TwoArmLayout& layout, const PlaceboPrior& prior,
                bool unconditional = false);

/// P(T1E) at placebo mean pi_true.
double hc_t1e(const TwoArmLayout& layout, const PlaceboPrior& prior, double alpha);
/// P(T2E) at placebo mean pi_true and effect layout.delta.
double hc_t2e(const TwoArmLayout& layout, const PlaceboPrior& prior, double alpha);

ErrorReport errors_historical(const TwoArmLayout& layout, const PlaceboPrior& prior,
                              double alpha, double omega, bool unconditional = false);

/// Minimiser of the weighted error, conditional on pi_true or averaged over
/// the design prior. Throws InfeasibleError when alpha* underflows (0, 1).
OptimumResult hc_optimal_alpha(const TwoArmLayout& layout, const PlaceboPrior& prior,
                               double omega, bool unconditional = false);

struct ErrorPair {
    double t1e = 0.0;
    double t2e = 0.0;
};

/// Error rates averaged over the design prior on the placebo mean. Throws
/// DomainError when the prior carries no design prior.
ErrorPair hc_unconditional_errors(const TwoArmLayout& layout, const PlaceboPrior& prior,
                                  double alpha);

}  // namespace errbalance
