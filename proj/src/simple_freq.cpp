#include "errbalance/simple_freq.hpp"

#include <cmath>

#include "checks.hpp"

namespace errbalance {

using detail::require_positive;
using detail::require_probability;

void DesignParams::validate() const {
    require_positive("n1", n1);
    require_positive("delta0", delta0);
    require_positive("sigma", sigma);
}

SampleSize sample_size(double delta0, double sigma, double alpha, double beta) {
    require_positive("delta0", delta0);
    require_positive("sigma", sigma);
    require_probability("alpha", alpha);
    require_probability("beta", beta);
    const double z = -norm_quantile(alpha) - norm_quantile(beta);
    const double n1 = 2.0 * sigma * sigma * z * z / (delta0 * delta0);
    return {n1, static_cast<long>(std::ceil(n1))};
}

double noncentrality(const DesignParams& design) {
    design.validate();
    return std::sqrt(design.n1 / 2.0) * design.delta0 / design.sigma;
}

double freq_threshold(const DesignParams& design, double alpha) {
    design.validate();
    require_probability("alpha", alpha);
    return -norm_quantile(alpha) * std::sqrt(2.0 / design.n1) * design.sigma;
}

double beta_from_alpha(double alpha, double theta) {
    require_probability("alpha", alpha);
    require_positive("theta", theta);
    return norm_cdf(-theta - norm_quantile(alpha));
}

double psi(double alpha, double theta, double omega) {
    require_positive("omega", omega);
    return weighted_error(alpha, beta_from_alpha(alpha, theta), omega);
}

ErrorReport errors_simple_freq(double alpha, double theta, double omega) {
    require_positive("omega", omega);
    const double beta = beta_from_alpha(alpha, theta);
    return {alpha, alpha, beta, weighted_error(alpha, beta, omega), omega};
}

OptimumResult optimal_simple_freq(double theta, double omega) {
    if (theta == 0.0) throw DomainError("optimal_simple_freq: theta = 0 is a singular design");
    require_positive("theta", theta);
    require_positive("omega", omega);
    const double shift = std::log(omega) / theta;
    const double alpha = norm_cdf(-shift - theta / 2.0);
    const double beta = norm_cdf(shift - theta / 2.0);
    return {Regime::SimpleFreq, omega, alpha, alpha, beta, weighted_error(alpha, beta, omega),
            theta};
}

double min_psi_simple(double theta, double omega) {
    return optimal_simple_freq(theta, omega).psi;
}

PsiBoundSizing size_for_psi_bound(double psi0, double omega, double delta0, double sigma,
                                  std::pair<double, double> theta2_range) {
    require_probability("psi0", psi0);
    require_positive("omega", omega);
    require_positive("delta0", delta0);
    require_positive("sigma", sigma);
    require_positive("theta2 lower bound", theta2_range.first);

    const auto excess = [&](double theta2) {
        return min_psi_simple(std::sqrt(theta2), omega) - psi0;
    };
    const Bracket bracket = make_bracket(excess, theta2_range.first, theta2_range.second);
    const double theta2 = solve_root(excess, bracket);

    PsiBoundSizing out;
    out.theta2 = theta2;
    out.n1_fractional = 2.0 * sigma * sigma * theta2 / (delta0 * delta0);
    out.n1 = static_cast<long>(std::ceil(out.n1_fractional));
    const double theta = noncentrality({static_cast<double>(out.n1), delta0, sigma});
    const OptimumResult opt = optimal_simple_freq(theta, omega);
    out.alpha = opt.alpha;
    out.beta = opt.t2e;
    out.psi = opt.psi;
    return out;
}

double optimal_critical_generic(double omega, const ScalarFunction& density_null,
                                const ScalarFunction& density_alt, double lo, double hi) {
    require_positive("omega", omega);
    for (double t : {lo, hi}) {
        if (!(density_null(t) > 0.0) || !(density_alt(t) > 0.0)) {
            throw DomainError("optimal_critical_generic: densities must be positive on the bracket");
        }
    }
    const auto excess = [&](double t) { return density_alt(t) / density_null(t) - omega; };
    return solve_root(excess, make_bracket(excess, lo, hi), 1e-12);
}

}  // namespace errbalance
