#pragma once

#include <stdexcept>
#include <string>

namespace errbalance {

// Parameter outside the domain of a formula, or a failed validation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Root finder was given an interval without a sign change.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The optimum exists mathematically but is not representable or violates a
// caller constraint (e.g. power floor).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace errbalance
