#include "errbalance/composite.hpp"

#include <cmath>
#include <string>

#include "checks.hpp"
#include "errbalance/numerics.hpp"

namespace errbalance {

using detail::require_nonnegative;
using detail::require_positive;
using detail::require_probability;

CompositeContext CompositeContext::from_design(const DesignParams& design, double n0) {
    CompositeContext ctx{design, {design.delta0, n0}};
    ctx.validate();
    return ctx;
}

void CompositeContext::validate() const {
    design.validate();
    prior.validate();
    require_positive("n0 (composite hypotheses need a proper prior)", prior.n0);
    if (design.delta0 != prior.delta0) {
        throw DomainError("composite context: design delta0 must equal prior mean delta0");
    }
}

double CompositeContext::f0() const {
    validate();
    return prior.n0 / (prior.n0 + design.n1);
}

double CompositeContext::z0() const {
    validate();
    return std::sqrt(prior.n0 / 2.0) * prior.delta0 / design.sigma;
}

double CompositeContext::z1() const {
    validate();
    return std::sqrt(design.n1 / 2.0) * prior.delta0 / design.sigma;
}

double CompositeContext::rho() const { return -std::sqrt(1.0 - f0()); }

// With x = standardised delta and y = standardised estimate, corr(x, y) =
// sqrt(1 - f0); delta <= 0 iff x <= -z0 and success iff y > k.
double composite_success_limit(const CompositeContext& ctx, double alpha, DecisionRule rule) {
    require_probability("alpha", alpha);
    const double f0 = ctx.f0();
    const double z = -norm_quantile(alpha);
    if (rule == DecisionRule::Frequentist) return std::sqrt(f0) * (z - ctx.z1());
    return std::sqrt(f0 / (1.0 - f0)) * (z - ctx.z1() / std::sqrt(1.0 - f0));
}

namespace {

double ave_t1e(const CompositeContext& ctx, double alpha, DecisionRule rule) {
    const double k = composite_success_limit(ctx, alpha, rule);
    return bvn_cdf({-ctx.z0(), -k, ctx.rho()});
}

double ave_t2e(const CompositeContext& ctx, double alpha, DecisionRule rule) {
    const double k = composite_success_limit(ctx, alpha, rule);
    return bvn_cdf({ctx.z0(), k, ctx.rho()});
}

// Both optima share the stationarity condition
//   Phi((-z0 + rho k) / sqrt(1 - rho^2)) = 1 / (omega + 1)
// in the success limit k; only the map from k back to alpha differs.
double optimal_success_limit(const CompositeContext& ctx, double omega) {
    require_positive("omega", omega);
    const double rho = ctx.rho();
    return (norm_quantile(1.0 / (omega + 1.0)) * std::sqrt(1.0 - rho * rho) + ctx.z0()) / rho;
}

OptimumResult finish_optimum(const CompositeContext& ctx, double omega, Regime regime,
                             double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InfeasibleError(std::string(to_string(regime)) +
                              ": optimal alpha is not representable in (0, 1)");
    }
    const DecisionRule rule =
        regime == Regime::CompositeFreq ? DecisionRule::Frequentist : DecisionRule::Bayesian;
    const ErrorReport r = errors_composite(ctx, alpha, omega, rule);
    return {regime, omega, alpha, r.t1e, r.t2e, r.psi, noncentrality(ctx.design)};
}

}  // namespace

double ave_t1e_freq(const CompositeContext& ctx, double alpha) {
    return ave_t1e(ctx, alpha, DecisionRule::Frequentist);
}

double ave_t2e_freq(const CompositeContext& ctx, double alpha) {
    return ave_t2e(ctx, alpha, DecisionRule::Frequentist);
}

double psi_composite_freq(const CompositeContext& ctx, double alpha, double omega) {
    return errors_composite(ctx, alpha, omega, DecisionRule::Frequentist).psi;
}

double ave_t1e_bayes(const CompositeContext& ctx, double alpha) {
    return ave_t1e(ctx, alpha, DecisionRule::Bayesian);
}

double ave_t2e_bayes(const CompositeContext& ctx, double alpha) {
    return ave_t2e(ctx, alpha, DecisionRule::Bayesian);
}

double psi_composite_bayes(const CompositeContext& ctx, double alpha, double omega) {
    return errors_composite(ctx, alpha, omega, DecisionRule::Bayesian).psi;
}

ErrorReport errors_composite(const CompositeContext& ctx, double alpha, double omega,
                             DecisionRule rule) {
    require_positive("omega", omega);
    const double t1e = ave_t1e(ctx, alpha, rule);
    const double t2e = ave_t2e(ctx, alpha, rule);
    return {alpha, t1e, t2e, weighted_error(t1e, t2e, omega), omega};
}

OptimumResult optimal_composite_freq(const CompositeContext& ctx, double omega) {
    const double k = optimal_success_limit(ctx, omega);
    const double alpha = norm_cdf(-(k / std::sqrt(ctx.f0()) + ctx.z1()));
    return finish_optimum(ctx, omega, Regime::CompositeFreq, alpha);
}

OptimumResult optimal_composite_bayes(const CompositeContext& ctx, double omega) {
    const double k = optimal_success_limit(ctx, omega);
    const double f0 = ctx.f0();
    const double z = k / std::sqrt(f0 / (1.0 - f0)) + ctx.z1() / std::sqrt(1.0 - f0);
    return finish_optimum(ctx, omega, Regime::CompositeBayes, norm_cdf(-z));
}

double prior_prob_effective(const CompositeContext& ctx) { return norm_cdf(ctx.z0()); }

double pos(const CompositeContext& ctx, double alpha, DecisionRule rule) {
    return norm_cdf(-composite_success_limit(ctx, alpha, rule));
}

PosDecomposition pos_decomposition(const CompositeContext& ctx, double alpha, double delta_mcid,
                                   DecisionRule rule) {
    require_nonnegative("delta_mcid", delta_mcid);
    const double k = composite_success_limit(ctx, alpha, rule);
    const double rho = ctx.rho();
    // P(success and x <= upper) for the standardised effect x.
    const auto success_below = [&](double upper) { return bvn_cdf({upper, -k, rho}); };
    const double x_null = -ctx.z0();
    const double x_mcid =
        (delta_mcid - ctx.prior.delta0) * std::sqrt(ctx.prior.n0 / 2.0) / ctx.design.sigma;

    PosDecomposition out;
    out.null_region = success_below(x_null);
    const double below_mcid = delta_mcid == 0.0 ? out.null_region : success_below(x_mcid);
    out.marginal = below_mcid - out.null_region;
    out.relevant = norm_cdf(-k) - below_mcid;
    return out;
}

}  // namespace errbalance
