#pragma once

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "errbalance/errbalance.hpp"

#define CHECK_NEAR(actual, expected, tol)                                                \
    do {                                                                                 \
        const double eb_a_ = (actual);                                                   \
        const double eb_e_ = (expected);                                                 \
        CHECK_MESSAGE(std::abs(eb_a_ - eb_e_) <= (tol), #actual " = ", eb_a_,            \
                      " expected ", eb_e_, " tol ", (tol));                              \
    } while (0)

namespace testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed-seed engine so every run traverses the same random grid.
inline std::mt19937_64& engine() {
    static std::mt19937_64 gen(20240611ULL);
    return gen;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine());
}

inline double bvn_density(double x, double y, double rho) {
    const double r = 1.0 - rho * rho;
    return std::exp(-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * r)) /
           (2.0 * M_PI * std::sqrt(r));
}

// Nested adaptive Gauss-Kronrod over the joint density; slow but independent
// of every routine in numerics.
inline double bvn_quadrature_2d(double h, double k, double rho) {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double x) {
        return gauss_kronrod<double, 61>::integrate(
            [&](double y) { return bvn_density(x, y, rho); }, -kInf, k, 15, 1e-13);
    };
    return gauss_kronrod<double, 61>::integrate(inner, -kInf, h, 15, 1e-13);
}

// One-dimensional conditioning form, used where the 2-D form is too slow.
inline double bvn_quadrature_1d(double h, double k, double rho) {
    using boost::math::quadrature::gauss_kronrod;
    const double s = std::sqrt(1.0 - rho * rho);
    auto f = [&](double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI) *
               0.5 * std::erfc(-((k - rho * x) / s) / std::sqrt(2.0));
    };
    return gauss_kronrod<double, 61>::integrate(f, -kInf, h, 20, 1e-14);
}

inline errbalance::DesignParams rls_design() { return {64.0, 4.0, 8.0}; }
inline errbalance::EffectPrior rls_prior() { return {4.0, 2.0}; }
inline errbalance::CompositeContext rls_context() { return {rls_design(), rls_prior()}; }

}  // namespace testing
