#include "errbalance/types.hpp"

#include <string>

#include "errbalance/errors.hpp"

namespace errbalance {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::SimpleFreq: return "simple-freq";
        case Regime::SimpleBayes: return "simple-bayes";
        case Regime::HistoricalControl: return "historical";
        case Regime::CompositeFreq: return "composite-freq";
        case Regime::CompositeBayes: return "composite-bayes";
    }
    return "unknown";
}

Regime parse_regime(std::string_view name) {
    for (Regime r : {Regime::SimpleFreq, Regime::SimpleBayes, Regime::HistoricalControl,
                     Regime::CompositeFreq, Regime::CompositeBayes}) {
        if (name == to_string(r)) return r;
    }
    throw DomainError("unknown regime '" + std::string(name) +
                      "' (expected simple-freq, simple-bayes, historical, "
                      "composite-freq or composite-bayes)");
}

}  // namespace errbalance
