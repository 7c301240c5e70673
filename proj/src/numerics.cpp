#include "errbalance/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "errbalance/errors.hpp"

namespace errbalance {

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre abscissae on [-1, 0) and weights for 6, 12 and 20 points;
// the rules are symmetric so only half of each is stored.
constexpr std::array<double, 3> kGl6X{-0.9324695142031522, -0.6612093864662647,
                                      -0.2386191860831970};
constexpr std::array<double, 3> kGl6W{0.1713244923791705, 0.3607615730481384,
                                      0.4679139345726904};
constexpr std::array<double, 6> kGl12X{-0.9815606342467191, -0.9041172563704750,
                                       -0.7699026741943050, -0.5873179542866171,
                                       -0.3678314989981802, -0.1252334085114692};
constexpr std::array<double, 6> kGl12W{0.04717533638651177, 0.1069393259953183,
                                       0.1600783285433464,  0.2031674267230659,
                                       0.2334925365383547,  0.2491470458134029};
constexpr std::array<double, 10> kGl20X{
    -0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
    -0.7463319064601508, -0.6360536807265150, -0.5108670019508271, -0.3737060887154196,
    -0.2277858511416451, -0.07652652113349733};
constexpr std::array<double, 10> kGl20W{
    0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
    0.1019301198172404,  0.1181945319615184,  0.1316886384491766,  0.1420961093183821,
    0.1491729864726037,  0.1527533871307259};

struct GaussRule {
    const double* x;
    const double* w;
    std::size_t size;
};

GaussRule rule_for(double abs_rho) {
    if (abs_rho < 0.3) return {kGl6X.data(), kGl6W.data(), kGl6X.size()};
    if (abs_rho < 0.75) return {kGl12X.data(), kGl12W.data(), kGl12X.size()};
    return {kGl20X.data(), kGl20W.data(), kGl20X.size()};
}

// P(X > h, Y > k) for finite h, k and |r| < 1.
double bvn_upper(double h, double k, double r) {
    const GaussRule gl = rule_for(std::abs(r));
    double hk = h * k;
    double bvn = 0.0;

    if (std::abs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (std::size_t i = 0; i < gl.size; ++i) {
            double sn = std::sin(asr * (gl.x[i] + 1.0) / 2.0);
            bvn += gl.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            sn = std::sin(asr * (1.0 - gl.x[i]) / 2.0);
            bvn += gl.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return bvn * asr / (2.0 * kTwoPi) + norm_cdf(-h) * norm_cdf(-k);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
        const double b = std::sqrt(bs);
        bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * norm_cdf(-b / a) * b *
               (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < gl.size; ++i) {
        double xs = a * (gl.x[i] + 1.0);
        xs *= xs;
        double rs = std::sqrt(1.0 - xs);
        bvn += a * gl.w[i] *
               (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
                std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
        xs = as * (1.0 - gl.x[i]) * (1.0 - gl.x[i]) / 4.0;
        rs = std::sqrt(1.0 - xs);
        bvn += a * gl.w[i] * std::exp(-(bs / xs + hk) / 2.0) *
               (std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs -
                (1.0 + c * xs * (1.0 + d * xs)));
    }
    bvn = -bvn / kTwoPi;

    if (r > 0.0) return bvn + norm_cdf(-std::max(h, k));
    return std::max(0.0, norm_cdf(-h) - norm_cdf(-k)) - bvn;
}

void check_rho(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw DomainError("bivariate normal: correlation must lie in [-1, 1], got " +
                          std::to_string(rho));
    }
}

}  // namespace

double norm_pdf(double x) {
    if (!std::isfinite(x)) throw DomainError("norm_pdf: argument must be finite");
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    if (std::isnan(x)) throw DomainError("norm_cdf: argument is NaN");
    return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0);
}

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("norm_quantile: probability must lie in (0, 1), got " +
                          std::to_string(p));
    }
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

double bvn_cdf(const BvnArgs& args) {
    const auto [h, k, rho] = args;
    check_rho(rho);
    if (std::isnan(h) || std::isnan(k)) throw DomainError("bvn_cdf: NaN limit");

    if (h == -std::numeric_limits<double>::infinity() ||
        k == -std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (std::isinf(h)) return norm_cdf(k);
    if (std::isinf(k)) return norm_cdf(h);

    if (rho > 1.0 - 1e-12) return norm_cdf(std::min(h, k));
    if (rho < -1.0 + 1e-12) return std::max(0.0, norm_cdf(h) + norm_cdf(k) - 1.0);

    return std::clamp(bvn_upper(-h, -k, rho), 0.0, 1.0);
}

double bvn_cdf_dh(const BvnArgs& args) {
    const auto [h, k, rho] = args;
    if (!(rho > -1.0 && rho < 1.0)) {
        throw DomainError("bvn_cdf_dh: derivative is singular for |rho| >= 1");
    }
    if (!std::isfinite(h)) return 0.0;
    return norm_pdf(h) * norm_cdf((k - rho * h) / std::sqrt(1.0 - rho * rho));
}

double bvn_cdf_dk(const BvnArgs& args) {
    return bvn_cdf_dh({args.k, args.h, args.rho});
}

Bracket make_bracket(const ScalarFunction& f, double lo, double hi) {
    Bracket b{lo, hi, f(lo), f(hi)};
    if (!(lo < hi)) throw BracketError("bracket: lower end must be below upper end");
    if (std::isnan(b.f_lo) || std::isnan(b.f_hi) || b.f_lo * b.f_hi > 0.0) {
        throw BracketError("bracket: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    return b;
}

double solve_root(const ScalarFunction& f, const Bracket& bracket, double tol,
                  int max_iter) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    double f_lo = bracket.f_lo;
    double f_hi = bracket.f_hi;
    if (!(lo < hi) || std::isnan(f_lo) || std::isnan(f_hi) || f_lo * f_hi > 0.0) {
        throw BracketError("solve_root: invalid bracket");
    }
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    int side = 0;  // +1: hi moved last, -1: lo moved last
    double checkpoint = hi - lo;
    for (int iter = 1; iter <= max_iter; ++iter) {
        bool bisect = false;
        if (iter % 3 == 0) {
            // The bracket must halve at least every three steps.
            bisect = (hi - lo) > 0.5 * checkpoint;
            checkpoint = hi - lo;
        }
        double x = 0.5 * (lo + hi);
        if (!bisect) {
            const double secant = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
            if (secant > lo && secant < hi) x = secant;
        }
        const double fx = f(x);
        if (std::isnan(fx)) throw ConvergenceError("solve_root: function returned NaN");
        if (std::abs(fx) <= tol) return x;

        if ((fx < 0.0) == (f_hi < 0.0)) {
            hi = x;
            f_hi = fx;
            if (side == +1) f_lo *= 0.5;
            side = +1;
        } else {
            lo = x;
            f_lo = fx;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        }
        if (hi - lo <= tol) return 0.5 * (lo + hi);
    }
    throw ConvergenceError("solve_root: no convergence after " + std::to_string(max_iter) +
                           " iterations");
}

}  // namespace errbalance
