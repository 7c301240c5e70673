#pragma once

#include "errbalance/simple_freq.hpp"

namespace errbalance {

/// omega = w1 / w2 for the weighted sum (w1 alpha + w2 beta) / (w1 + w2).
double omega_from_weights(double w1, double w2);

/// Expected-cost weights: false positives cost c_alpha, false negatives cost
/// c_beta, and the drug is effective with probability p_effective.
struct CostSpec {
    double c_alpha = 0.0;
    double c_beta = 0.0;
    double p_effective = 0.5;

    void validate() const;
};

/// c_alpha (1 - P(E)) / (c_beta P(E))
double omega_from_costspec(const CostSpec& spec);

/// Joint sample-size and alpha cost model with in-trial and post-trial costs.
///
///   Cost(alpha, n) = 2 p0 c1 N alpha + 2 p1 c2 N beta + [2 p0 c1 n + 2 p1 c2 n gamma N]
///
/// with p1 = 1 - p0. The factor 2 normalises the model so that the default
/// p0 = p1 = 1/2 gives the simplified form c1 N alpha + c2 N beta + c1 n +
/// c2 n gamma N. The bracketed in-trial terms can be switched off.
struct IsakovSpec {
    double c1 = 0.0;      // per-person post-trial cost of a type I error
    double c2 = 0.0;      // per-person post-trial cost of a type II error
    double pop_n = 0.0;   // target population size N
    double gamma = 0.0;   // delay cost fraction per enrolled patient
    double power_floor = 0.0;  // minimum power at the per-n optimal alpha
    double p0 = 0.5;      // prior probability of the null
    bool in_trial_costs = true;

    void validate() const;
    /// Weight ratio of the inner problem, p0 c1 / (p1 c2).
    double omega() const;
};

/// Cost at a given alpha and per-arm n; design.n1 is replaced by n.
double isakov_total_cost(const IsakovSpec& spec, double alpha, double n,
                         const DesignParams& design);

struct IsakovOptimum {
    double alpha = 0.0;
    long n = 0;
    double cost = 0.0;
    double beta = 0.0;
};

/// For each integer n in [n_min, n_max] take the closed-form optimal alpha
/// for omega = spec.omega(), keep the n whose power meets the floor and
/// minimise total cost; ties go to the smaller n. design.n1 is ignored.
/// Throws InfeasibleError when no n meets the power floor.
IsakovOptimum isakov_optimize(const IsakovSpec& spec, const DesignParams& design, long n_min,
                              long n_max);

}  // namespace errbalance
