#include "errbalance/historical_control.hpp"

#include <cmath>
#include <string>

#include "checks.hpp"
#include "errbalance/numerics.hpp"

namespace errbalance {

using detail::require_finite;
using detail::require_positive;
using detail::require_probability;

void PlaceboPrior::validate() const {
    require_finite("pi0", pi0);
    require_finite("pi_true", pi_true);
    if (!(n0 >= kMinPlaceboPriorSize) || !std::isfinite(n0)) {
        throw DomainError("placebo prior n0 must be at least 1e-9, got " + std::to_string(n0));
    }
    if (design_prior) {
        require_finite("pi00", design_prior->pi00);
        require_positive("n00", design_prior->n00);
    }
}

void TwoArmLayout::validate() const {
    if (!(n_a >= 1.0) || !(n_p >= 1.0)) throw DomainError("arm sizes must be at least 1");
    require_positive("sigma", sigma);
    require_finite("delta", delta);
}

namespace {

// Standardised terms shared by both error rates: P(T1E) = Phi(shift) and
// P(T2E) = 1 - Phi(shift + theta), where shift = -(drift + z s_threshold) / s_stat.
struct HcTerms {
    double drift = 0.0;        // n0 (pi0 - pi) / (n0 + n_P)
    double s_threshold = 0.0;  // posterior SD of delta
    double s_stat = 0.0;       // SD of the statistic
};

HcTerms hc_terms(const TwoArmLayout& layout, const PlaceboPrior& prior, bool unconditional) {
    layout.validate();
    prior.validate();
    const double pooled = prior.n0 + layout.n_p;
    double pi = prior.pi_true;
    double var = 1.0 / layout.n_a + layout.n_p / (pooled * pooled);
    if (unconditional) {
        if (!prior.design_prior) {
            throw DomainError("unconditional error rates need a design prior (pi00, n00)");
        }
        pi = prior.design_prior->pi00;
        // Var(n0 pi / (n0 + n_P)) under pi ~ N(pi00, sigma^2 / n00).
        var += prior.n0 * prior.n0 / (prior.design_prior->n00 * pooled * pooled);
    }
    HcTerms t;
    t.drift = prior.n0 * (prior.pi0 - pi) / pooled;
    t.s_threshold = layout.sigma * std::sqrt(1.0 / layout.n_a + 1.0 / pooled);
    t.s_stat = layout.sigma * std::sqrt(var);
    return t;
}

double shift_at(const HcTerms& t, double alpha) {
    require_probability("alpha", alpha);
    return -(t.drift - norm_quantile(alpha) * t.s_threshold) / t.s_stat;
}

}  // namespace

double hc_statistic(const TwoArmLayout& layout, const PlaceboPrior& prior, double xbar_a,
                    double xbar_p) {
    return xbar_a - layout.n_p * xbar_p / (prior.n0 + layout.n_p);
}

double hc_threshold(const TwoArmLayout& layout, const PlaceboPrior& prior, double alpha) {
    const HcTerms t = hc_terms(layout, prior, false);
    require_probability("alpha", alpha);
    return prior.n0 * prior.pi0 / (prior.n0 + layout.n_p) -
           norm_quantile(alpha) * t.s_threshold;
}

StatisticMoments hc_statistic_moments(const TwoArmLayout& layout, const PlaceboPrior& prior,
                                      double pi, double delta) {
    const HcTerms t = hc_terms(layout, prior, false);
    return {prior.n0 * pi / (prior.n0 + layout.n_p) + delta, t.s_stat};
}

double hc_theta(const TwoArmLayout& layout, const PlaceboPrior& prior, bool unconditional) {
    return layout.delta / hc_terms(layout, prior, unconditional).s_stat;
}

double hc_t1e(const TwoArmLayout& layout, const PlaceboPrior& prior, double alpha) {
    return norm_cdf(shift_at(hc_terms(layout, prior, false), alpha));
}

double hc_t2e(const TwoArmLayout& layout, const PlaceboPrior& prior, double alpha) {
    const HcTerms t = hc_terms(layout, prior, false);
    return norm_cdf(-shift_at(t, alpha) - layout.delta / t.s_stat);
}

ErrorPair hc_unconditional_errors(const TwoArmLayout& layout, const PlaceboPrior& prior,
                                  double alpha) {
    const HcTerms t = hc_terms(layout, prior, true);
    const double shift = shift_at(t, alpha);
    return {norm_cdf(shift), norm_cdf(-shift - layout.delta / t.s_stat)};
}

ErrorReport errors_historical(const TwoArmLayout& layout, const PlaceboPrior& prior,
                              double alpha, double omega, bool unconditional) {
    require_positive("omega", omega);
    const HcTerms t = hc_terms(layout, prior, unconditional);
    const double shift = shift_at(t, alpha);
    const double t1e = norm_cdf(shift);
    const double t2e = norm_cdf(-shift - layout.delta / t.s_stat);
    return {alpha, t1e, t2e, weighted_error(t1e, t2e, omega), omega};
}

OptimumResult hc_optimal_alpha(const TwoArmLayout& layout, const PlaceboPrior& prior,
                               double omega, bool unconditional) {
    require_positive("omega", omega);
    const HcTerms t = hc_terms(layout, prior, unconditional);
    const double theta = layout.delta / t.s_stat;
    require_positive("theta (historical control)", theta);
    const double best_shift = -std::log(omega) / theta - theta / 2.0;
    // -(drift + z s_threshold) / s_stat = best_shift, solved for z = z_{1-alpha}.
    const double z = (-best_shift * t.s_stat - t.drift) / t.s_threshold;
    const double alpha = norm_cdf(-z);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InfeasibleError("hc_optimal_alpha: optimal z_{1-alpha} = " + std::to_string(z) +
                              " puts alpha outside (0, 1); drift " + std::to_string(t.drift) +
                              ", theta " + std::to_string(theta));
    }
    const double t1e = norm_cdf(best_shift);
    const double t2e = norm_cdf(-best_shift - theta);
    return {Regime::HistoricalControl, omega, alpha, t1e, t2e, weighted_error(t1e, t2e, omega),
            theta};
}

}  // namespace errbalance
