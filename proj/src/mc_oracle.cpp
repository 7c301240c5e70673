#include "errbalance/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "errbalance/errors.hpp"
#include "errbalance/numerics.hpp"

namespace errbalance {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};

// Per-replicate outcome. For simple and historical regimes `first` is the
// statistic under the null and `second` under the alternative; for composite
// regimes `first` is the estimate and `category` locates the true effect
// (0: delta <= 0, 1: 0 < delta <= mcid, 2: delta > mcid).
struct Outcome {
    double first = 0.0;
    double second = 0.0;
    int category = 0;
};

Outcome draw(const SimParams& params, const CounterRng& rng, std::uint64_t i) {
    return std::visit(
        Overloaded{
            [&](const SimpleFreqSim& p) {
                const double se = p.design.sigma * std::sqrt(2.0 / p.design.n1);
                return Outcome{rng.normal(i, 0) * se, p.design.delta0 + rng.normal(i, 1) * se, 0};
            },
            [&](const SimpleBayesSim& p) {
                const double se = p.design.sigma * std::sqrt(2.0 / p.design.n1);
                return Outcome{rng.normal(i, 0) * se, p.design.delta0 + rng.normal(i, 1) * se, 0};
            },
            [&](const HistoricalSim& p) {
                const TwoArmLayout& l = p.layout;
                double pi = p.prior.pi_true;
                if (p.unconditional) {
                    const PlaceboDesignPrior& dp = *p.prior.design_prior;
                    pi = dp.pi00 + rng.normal(i, 2) * l.sigma / std::sqrt(dp.n00);
                }
                const double xbar_p = pi + rng.normal(i, 0) * l.sigma / std::sqrt(l.n_p);
                const double xbar_a0 = pi + rng.normal(i, 1) * l.sigma / std::sqrt(l.n_a);
                const double null_stat = hc_statistic(l, p.prior, xbar_a0, xbar_p);
                return Outcome{null_stat, hc_statistic(l, p.prior, xbar_a0 + l.delta, xbar_p), 0};
            },
            [&](const CompositeSim& p) {
                const DesignParams& d = p.ctx.design;
                const double delta = p.ctx.prior.delta0 +
                                     rng.normal(i, 0) * d.sigma * std::sqrt(2.0 / p.ctx.prior.n0);
                const double estimate = delta + rng.normal(i, 1) * d.sigma * std::sqrt(2.0 / d.n1);
                const double mcid = p.delta_mcid.value_or(0.0);
                const int category = delta <= 0.0 ? 0 : (delta <= mcid ? 1 : 2);
                return Outcome{estimate, 0.0, category};
            },
        },
        params);
}

std::vector<Outcome> draw_all(const SimPlan& plan) {
    const CounterRng rng(plan.seed);
    std::vector<Outcome> out(plan.replications);
    unsigned workers = plan.threads ? plan.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1, 64);
    const std::uint64_t n = plan.replications;
    const auto fill = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) out[i] = draw(plan.params, rng, i);
    };
    if (workers == 1 || n < 10'000) {
        fill(0, n);
        return out;
    }
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (std::uint64_t begin = 0; begin < n; begin += chunk) {
        pool.emplace_back(fill, begin, std::min(n, begin + chunk));
    }
    return out;
}

std::uint64_t count_above(const std::vector<double>& sorted, double threshold) {
    return static_cast<std::uint64_t>(
        sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold));
}

double rate(std::uint64_t count, std::uint64_t total) {
    return static_cast<double>(count) / static_cast<double>(total);
}

double standard_error(double p, std::uint64_t total) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x6A09E667F3BCC909ULL)) {}

double CounterRng::uniform(std::uint64_t replicate, std::uint32_t stream) const {
    const std::uint64_t counter =
        replicate * 0x9E3779B97F4A7C15ULL + (static_cast<std::uint64_t>(stream) + 1) * 0xD1B54A32D192ED03ULL;
    const std::uint64_t bits = mix64(mix64(key_ ^ counter) + key_);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t replicate, std::uint32_t stream) const {
    return norm_quantile(uniform(replicate, stream));
}

Regime SimPlan::regime() const {
    return std::visit(Overloaded{
                          [](const SimpleFreqSim&) { return Regime::SimpleFreq; },
                          [](const SimpleBayesSim&) { return Regime::SimpleBayes; },
                          [](const HistoricalSim&) { return Regime::HistoricalControl; },
                          [](const CompositeSim& p) {
                              return p.rule == DecisionRule::Frequentist ? Regime::CompositeFreq
                                                                         : Regime::CompositeBayes;
                          },
                      },
                      params);
}

void SimPlan::validate() const {
    std::vector<std::string> problems;
    const auto check = [&](const char* field, auto&& fn) {
        try {
            fn();
        } catch (const DomainError& e) {
            problems.push_back(std::string(field) + ": " + e.what());
        }
    };
    if (replications < 1) problems.emplace_back("replications: must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) problems.emplace_back("alpha: must lie in (0, 1)");
    std::visit(Overloaded{
                   [&](const SimpleFreqSim& p) { check("design", [&] { p.design.validate(); }); },
                   [&](const SimpleBayesSim& p) {
                       check("design", [&] { p.design.validate(); });
                       check("prior", [&] { p.prior.validate(); });
                   },
                   [&](const HistoricalSim& p) {
                       check("layout", [&] { p.layout.validate(); });
                       check("prior", [&] { p.prior.validate(); });
                       if (p.unconditional && !p.prior.design_prior) {
                           problems.emplace_back("prior.design_prior: required when unconditional");
                       }
                   },
                   [&](const CompositeSim& p) {
                       check("ctx", [&] { p.ctx.validate(); });
                       if (p.delta_mcid && !(*p.delta_mcid >= 0.0)) {
                           problems.emplace_back("delta_mcid: must be non-negative");
                       }
                   },
               },
               params);
    if (!problems.empty()) {
        std::string msg = "invalid simulation plan";
        for (const auto& p : problems) msg += "; " + p;
        throw DomainError(msg);
    }
}

double plan_threshold(const SimPlan& plan, double alpha) {
    return std::visit(
        Overloaded{
            [&](const SimpleFreqSim& p) { return freq_threshold(p.design, alpha); },
            [&](const SimpleBayesSim& p) { return bayes_threshold(p.design, p.prior, alpha); },
            [&](const HistoricalSim& p) { return hc_threshold(p.layout, p.prior, alpha); },
            [&](const CompositeSim& p) {
                return p.rule == DecisionRule::Frequentist
                           ? freq_threshold(p.ctx.design, alpha)
                           : bayes_threshold(p.ctx.design, p.ctx.prior, alpha);
            },
        },
        plan.params);
}

std::vector<SimResult> sweep_simulate(const SimPlan& plan, std::span<const double> alpha_grid) {
    plan.validate();
    for (double a : alpha_grid) {
        if (!(a > 0.0 && a < 1.0)) throw DomainError("alpha grid values must lie in (0, 1)");
    }
    const std::vector<Outcome> outcomes = draw_all(plan);
    const std::uint64_t total = plan.replications;
    const bool composite = std::holds_alternative<CompositeSim>(plan.params);
    const bool with_mcid = composite && std::get<CompositeSim>(plan.params).delta_mcid.has_value();

    // Sorted statistics per event class; counts at any threshold are then
    // exact integer lookups on the same draws.
    std::vector<double> first;   // null statistic, or estimates with delta <= 0
    std::vector<double> second;  // alternative statistic, or estimates with 0 < delta <= mcid
    std::vector<double> third;   // estimates with delta > mcid
    for (const Outcome& o : outcomes) {
        if (!composite) {
            first.push_back(o.first);
            second.push_back(o.second);
        } else if (o.category == 0) {
            first.push_back(o.first);
        } else if (o.category == 1) {
            second.push_back(o.first);
        } else {
            third.push_back(o.first);
        }
    }
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    std::sort(third.begin(), third.end());

    std::vector<SimResult> results;
    results.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        const double c = plan_threshold(plan, alpha);
        SimResult r;
        r.regime = plan.regime();
        r.alpha = alpha;
        r.replications = total;
        r.seed = plan.seed;
        std::uint64_t t1e = 0;
        std::uint64_t t2e = 0;
        if (!composite) {
            t1e = count_above(first, c);
            t2e = second.size() - count_above(second, c);
        } else {
            const std::uint64_t hit_null = count_above(first, c);
            const std::uint64_t hit_marginal = count_above(second, c);
            const std::uint64_t hit_relevant = count_above(third, c);
            t1e = hit_null;
            t2e = (second.size() + third.size()) - hit_marginal - hit_relevant;
            const double p = rate(hit_null + hit_marginal + hit_relevant, total);
            r.empirical_pos = p;
            r.se_pos = standard_error(p, total);
            if (with_mcid) {
                r.empirical_decomposition = PosDecomposition{
                    rate(hit_relevant, total), rate(hit_marginal, total), rate(hit_null, total)};
            }
        }
        r.empirical_t1e = rate(t1e, total);
        r.empirical_t2e = rate(t2e, total);
        r.se_t1e = standard_error(r.empirical_t1e, total);
        r.se_t2e = standard_error(r.empirical_t2e, total);
        results.push_back(r);
    }
    return results;
}

SimResult simulate(const SimPlan& plan) {
    const double grid[] = {plan.alpha};
    return sweep_simulate(plan, grid).front();
}

AnalyticRates analytic_counterpart(const SimPlan& plan, double alpha) {
    return std::visit(
        Overloaded{
            [&](const SimpleFreqSim& p) {
                return AnalyticRates{alpha, beta_from_alpha(alpha, noncentrality(p.design)), {}, {}};
            },
            [&](const SimpleBayesSim& p) {
                return AnalyticRates{t1e_bayes(p.design, p.prior, alpha),
                                     t2e_bayes(p.design, p.prior, alpha), {}, {}};
            },
            [&](const HistoricalSim& p) {
                if (p.unconditional) {
                    const ErrorPair e = hc_unconditional_errors(p.layout, p.prior, alpha);
                    return AnalyticRates{e.t1e, e.t2e, {}, {}};
                }
                return AnalyticRates{hc_t1e(p.layout, p.prior, alpha),
                                     hc_t2e(p.layout, p.prior, alpha), {}, {}};
            },
            [&](const CompositeSim& p) {
                const ErrorReport e = errors_composite(p.ctx, alpha, 1.0, p.rule);
                AnalyticRates a{e.t1e, e.t2e, pos(p.ctx, alpha, p.rule), {}};
                if (p.delta_mcid) a.decomposition = pos_decomposition(p.ctx, alpha, *p.delta_mcid, p.rule);
                return a;
            },
        },
        plan.params);
}

}  // namespace errbalance
