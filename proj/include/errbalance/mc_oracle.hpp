#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "errbalance/composite.hpp"
#include "errbalance/historical_control.hpp"
#include "errbalance/simple_bayes.hpp"
#include "errbalance/simple_freq.hpp"
#include "errbalance/types.hpp"

namespace errbalance {

/// Counter-based generator: the value for (replicate, stream) depends only on
/// the seed, so any partition of replicates across threads reproduces the
/// same draws.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed);

    /// Uniform on the open interval (0, 1).
    double uniform(std::uint64_t replicate, std::uint32_t stream) const;
    /// Standard normal by inversion of uniform().
    double normal(std::uint64_t replicate, std::uint32_t stream) const;

private:
    std::uint64_t key_;
};

struct SimpleFreqSim {
    DesignParams design;
};

struct SimpleBayesSim {
    DesignParams design;
    EffectPrior prior;
};

struct HistoricalSim {
    TwoArmLayout layout;
    PlaceboPrior prior;
    bool unconditional = false;  // draw pi from prior.design_prior first
};

struct CompositeSim {
    CompositeContext ctx;
    DecisionRule rule = DecisionRule::Frequentist;
    std::optional<double> delta_mcid;  // enables the PoS decomposition counts
};

using SimParams = std::variant<SimpleFreqSim, SimpleBayesSim, HistoricalSim, CompositeSim>;

inline constexpr std::uint64_t kDefaultReplications = 1'000'000;

struct SimPlan {
    SimParams params;
    double alpha = 0.025;
    std::uint64_t replications = kDefaultReplications;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency; never affects results

    Regime regime() const;
    /// Throws DomainError naming every offending field.
    void validate() const;
};

struct SimResult {
    Regime regime = Regime::SimpleFreq;
    double alpha = 0.0;
    std::uint64_t replications = 0;
    std::uint64_t seed = 0;

    // Composite regimes report joint rates, e.g. P(success and delta <= 0).
    double empirical_t1e = 0.0;
    double empirical_t2e = 0.0;
    double se_t1e = 0.0;
    double se_t2e = 0.0;

    std::optional<double> empirical_pos;
    std::optional<double> se_pos;
    std::optional<PosDecomposition> empirical_decomposition;
};

SimResult simulate(const SimPlan& plan);

/// One result per grid value, all computed from the same draws so the
/// empirical rates are monotone step functions of alpha. plan.alpha is ignored.
std::vector<SimResult> sweep_simulate(const SimPlan& plan, std::span<const double> alpha_grid);

/// Closed-form rates the simulation estimates, for side-by-side reporting.
struct AnalyticRates {
    double t1e = 0.0;
    double t2e = 0.0;
    std::optional<double> pos;
    std::optional<PosDecomposition> decomposition;
};
AnalyticRates analytic_counterpart(const SimPlan& plan, double alpha);

/// Success threshold of the plan's decision rule on its test statistic.
double plan_threshold(const SimPlan& plan, double alpha);

}  // namespace errbalance
