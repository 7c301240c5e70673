#pragma once

#include <functional>

namespace errbalance {

/// Standard normal density. Throws DomainError for non-finite input.
double norm_pdf(double x);

/// Standard normal distribution function, accepts +-infinity.
double norm_cdf(double x);

/// Inverse of norm_cdf on the open interval (0, 1) (Wichura's AS241).
double norm_quantile(double p);

/// Arguments of the standard bivariate normal distribution function
/// B(h, k, rho) = P(X <= h, Y <= k) with corr(X, Y) = rho.
struct BvnArgs {
    double h = 0.0;
    double k = 0.0;
    double rho = 0.0;
};

/// Bivariate normal lower-orthant probability.
///
/// Drezner-Wesolowsky Gauss-Legendre quadrature as refined by Genz, with the
/// asymptotic expansion for |rho| >= 0.925. Correlations within 1e-12 of +-1
/// use the degenerate closed forms; infinite limits reduce to norm_cdf.
double bvn_cdf(const BvnArgs& args);

/// dB/dh = phi(h) Phi((k - rho h) / sqrt(1 - rho^2)). Requires |rho| < 1.
double bvn_cdf_dh(const BvnArgs& args);
/// dB/dk = phi(k) Phi((h - rho k) / sqrt(1 - rho^2)). Requires |rho| < 1.
double bvn_cdf_dk(const BvnArgs& args);

/// An interval enclosing a sign change of some function.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

using ScalarFunction = std::function<double(double)>;

/// Evaluates f at both ends; throws BracketError when there is no sign change.
Bracket make_bracket(const ScalarFunction& f, double lo, double hi);

inline constexpr double kRootTol = 1e-10;
inline constexpr int kRootMaxIter = 200;

/// Illinois regula falsi with a bisection step whenever the bracket fails to
/// halve over two consecutive iterations. Stops when |f(x)| <= tol or the
/// bracket is narrower than tol.
double solve_root(const ScalarFunction& f, const Bracket& bracket,
                  double tol = kRootTol, int max_iter = kRootMaxIter);

}  // namespace errbalance
