#include "errbalance/cost_models.hpp"

#include <limits>
#include <string>

#include "checks.hpp"

namespace errbalance {

using detail::require_nonnegative;
using detail::require_positive;
using detail::require_probability;

double omega_from_weights(double w1, double w2) {
    require_positive("w1", w1);
    require_positive("w2", w2);
    return w1 / w2;
}

void CostSpec::validate() const {
    require_positive("c_alpha", c_alpha);
    require_positive("c_beta", c_beta);
    require_probability("p_effective", p_effective);
}

double omega_from_costspec(const CostSpec& spec) {
    spec.validate();
    return spec.c_alpha * (1.0 - spec.p_effective) / (spec.c_beta * spec.p_effective);
}

void IsakovSpec::validate() const {
    require_nonnegative("c1", c1);
    require_nonnegative("c2", c2);
    require_positive("pop_n", pop_n);
    require_nonnegative("gamma", gamma);
    require_probability("p0", p0);
    if (!(power_floor >= 0.0 && power_floor < 1.0)) {
        throw DomainError("power_floor must lie in [0, 1), got " + std::to_string(power_floor));
    }
}

double IsakovSpec::omega() const {
    validate();
    require_positive("c1", c1);
    require_positive("c2", c2);
    return p0 * c1 / ((1.0 - p0) * c2);
}

double isakov_total_cost(const IsakovSpec& spec, double alpha, double n,
                         const DesignParams& design) {
    spec.validate();
    require_probability("alpha", alpha);
    require_nonnegative("n", n);
    const double w0 = 2.0 * spec.p0;
    const double w1 = 2.0 * (1.0 - spec.p0);
    // n = 0 is the no-trial limit: nothing is learned, beta = 1 - alpha.
    const double beta = n > 0.0
        ? beta_from_alpha(alpha, noncentrality({n, design.delta0, design.sigma}))
        : 1.0 - alpha;
    double cost = w0 * spec.c1 * spec.pop_n * alpha + w1 * spec.c2 * spec.pop_n * beta;
    if (spec.in_trial_costs) {
        cost += w0 * spec.c1 * n + w1 * spec.c2 * n * spec.gamma * spec.pop_n;
    }
    return cost;
}

IsakovOptimum isakov_optimize(const IsakovSpec& spec, const DesignParams& design, long n_min,
                              long n_max) {
    spec.validate();
    if (n_min < 1 || n_max < n_min) throw DomainError("isakov_optimize: empty n range");
    const double omega = spec.omega();

    IsakovOptimum best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (long n = n_min; n <= n_max; ++n) {
        const DesignParams d{static_cast<double>(n), design.delta0, design.sigma};
        const OptimumResult inner = optimal_simple_freq(noncentrality(d), omega);
        if (1.0 - inner.t2e < spec.power_floor) continue;
        if (!(inner.alpha > 0.0 && inner.alpha < 1.0)) continue;
        const double cost = isakov_total_cost(spec, inner.alpha, d.n1, d);
        if (cost < best_cost) {
            best_cost = cost;
            best = {inner.alpha, n, cost, inner.t2e};
        }
    }
    if (best.n == 0) {
        throw InfeasibleError("isakov_optimize: no n in [" + std::to_string(n_min) + ", " +
                              std::to_string(n_max) + "] reaches power " +
                              std::to_string(spec.power_floor));
    }
    return best;
}

}  // namespace errbalance
