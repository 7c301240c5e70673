#pragma once

#include <utility>

#include "errbalance/numerics.hpp"
#include "errbalance/types.hpp"

namespace errbalance {

/// Two-arm parallel design with known SD and equal allocation.
struct DesignParams {
    double n1 = 0.0;      // per-arm sample size, may be fractional
    double delta0 = 0.0;  // effect size under the alternative
    double sigma = 0.0;   // known SD of a single observation

    void validate() const;
};

struct SampleSize {
    double fractional = 0.0;
    long rounded = 0;  // ceiling of fractional
};

/// Per-arm n1 = 2 sigma^2 (z_{1-alpha} + z_{1-beta})^2 / delta0^2.
SampleSize sample_size(double delta0, double sigma, double alpha, double beta);

/// theta = sqrt(n1 / 2) delta0 / sigma
double noncentrality(const DesignParams& design);

/// Critical value on the estimated difference for the one-sided z-test.
double freq_threshold(const DesignParams& design, double alpha);

/// beta = 1 - Phi(theta + z_alpha)
double beta_from_alpha(double alpha, double theta);

double psi(double alpha, double theta, double omega);
ErrorReport errors_simple_freq(double alpha, double theta, double omega);

/// Closed-form minimiser of psi over alpha for fixed theta and omega.
/// theta must be strictly positive.
OptimumResult optimal_simple_freq(double theta, double omega);

/// The minimum itself, as a function of theta.
double min_psi_simple(double theta, double omega);

struct PsiBoundSizing {
    double theta2 = 0.0;  // theta*^2 at which the minimum weighted error equals psi0
    double n1_fractional = 0.0;
    long n1 = 0;
    // Optimum re-computed at the rounded n1.
    double alpha = 0.0;
    double beta = 0.0;
    double psi = 0.0;
};

inline constexpr std::pair<double, double> kDefaultTheta2Range{1e-4, 100.0};

/// Smallest design whose optimal weighted error does not exceed psi0.
/// Throws BracketError when psi0 is not attained for theta^2 in the range.
PsiBoundSizing size_for_psi_bound(double psi0, double omega, double delta0, double sigma,
                                  std::pair<double, double> theta2_range =
                                      kDefaultTheta2Range);

/// Critical value t where density_alt(t) / density_null(t) == omega, for a
/// test whose power depends on one noncentrality parameter.
double optimal_critical_generic(double omega, const ScalarFunction& density_null,
                                const ScalarFunction& density_alt, double lo, double hi);

}  // namespace errbalance
