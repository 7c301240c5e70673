#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace errbalance {

enum class Regime {
    SimpleFreq,
    SimpleBayes,
    HistoricalControl,
    CompositeFreq,
    CompositeBayes,
};

std::string_view to_string(Regime regime);
/// Accepts the CLI spellings: simple-freq, simple-bayes, historical,
/// composite-freq, composite-bayes. Throws DomainError otherwise.
Regime parse_regime(std::string_view name);

/// Error rates of one decision rule at one value of alpha. For composite
/// regimes t1e and t2e are the prior-averaged rates.
struct ErrorReport {
    double alpha = 0.0;
    double t1e = 0.0;
    double t2e = 0.0;
    double psi = 0.0;
    double omega = 0.0;
};

struct OptimumResult {
    Regime regime = Regime::SimpleFreq;
    double omega = 0.0;
    double alpha = 0.0;
    double t1e = 0.0;
    double t2e = 0.0;  // beta for simple hypotheses, Ave(T2E) for composite
    double psi = 0.0;
    double theta = 0.0;  // noncentrality the optimum was computed at (0 if n/a)
};

/// (omega * t1e + t2e) / (omega + 1)
inline double weighted_error(double t1e, double t2e, double omega) {
    return (omega * t1e + t2e) / (omega + 1.0);
}

}  // namespace errbalance
