#pragma once

#include <cmath>
#include <string>

#include "errbalance/errors.hpp"

namespace errbalance::detail {

inline void require_probability(const char* what, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(std::string(what) + " must lie in (0, 1), got " + std::to_string(p));
    }
}

inline void require_positive(const char* what, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(v));
    }
}

inline void require_nonnegative(const char* what, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be non-negative and finite, got " +
                          std::to_string(v));
    }
}

inline void require_finite(const char* what, double v) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace errbalance::detail
