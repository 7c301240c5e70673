#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <vector>

using namespace errbalance;

namespace {

constexpr double kBand = 3.29;

SimPlan make_plan(SimParams params, double alpha, std::uint64_t reps = kDefaultReplications,
                  std::uint64_t seed = 7) {
    SimPlan p;
    p.params = std::move(params);
    p.alpha = alpha;
    p.replications = reps;
    p.seed = seed;
    p.threads = 1;
    return p;
}

bool within(double empirical, double analytic, double se) {
    // A zero SE can only happen for an event never or always seen.
    return std::abs(empirical - analytic) <= kBand * std::max(se, 1.0 / 1e6);
}

PlaceboPrior placebo(double pi0, double n0, double pi_true) {
    PlaceboPrior p;
    p.pi0 = pi0;
    p.n0 = n0;
    p.pi_true = pi_true;
    return p;
}

}  // namespace

TEST_CASE("counter RNG") {
    const CounterRng a(1);
    const CounterRng b(1);
    const CounterRng c(2);
    CHECK(a.uniform(10, 0) == b.uniform(10, 0));
    CHECK(a.uniform(10, 0) != c.uniform(10, 0));
    CHECK(a.uniform(10, 0) != a.uniform(10, 1));
    CHECK(a.uniform(10, 0) != a.uniform(11, 0));
    double sum = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (std::uint64_t i = 0; i < 200000; ++i) {
        const double u = a.uniform(i, 3);
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK_NEAR(sum / 200000.0, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 200000.0));
}

TEST_CASE("plan validation lists every offending field") {
    SimPlan p = make_plan(SimpleBayesSim{{-1.0, 4.0, 8.0}, {4.0, -2.0}}, 1.5, 0);
    try {
        p.validate();
        FAIL("expected a validation error");
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("replications") != std::string::npos);
        CHECK(msg.find("alpha") != std::string::npos);
        CHECK(msg.find("design") != std::string::npos);
        CHECK(msg.find("prior") != std::string::npos);
    }
    SimPlan h = make_plan(HistoricalSim{{64, 64, 8, 4}, placebo(0, 10, 0), true}, 0.025);
    CHECK_THROWS_AS(simulate(h), DomainError);
}

TEST_CASE("determinism and thread independence") {
    SimPlan p = make_plan(SimpleFreqSim{{64.0, 4.0, 8.0}}, 0.025, 200000, 42);
    const SimResult a = simulate(p);
    const SimResult b = simulate(p);
    p.threads = 4;
    const SimResult c = simulate(p);
    CHECK(a.empirical_t1e == b.empirical_t1e);
    CHECK(a.empirical_t2e == b.empirical_t2e);
    CHECK(a.empirical_t1e == c.empirical_t1e);
    CHECK(a.empirical_t2e == c.empirical_t2e);
    CHECK(a.seed == 42);
    CHECK(a.replications == 200000);
    p.seed = 43;
    CHECK(simulate(p).empirical_t1e != a.empirical_t1e);
}

TEST_CASE("simple frequentist calibration") {
    const SimResult r = simulate(make_plan(SimpleFreqSim{{64.0, 4.0, 8.0}}, 0.025));
    CHECK(within(r.empirical_t1e, 0.025, r.se_t1e));
    CHECK(within(r.empirical_t2e, beta_from_alpha(0.025, noncentrality({64.0, 4.0, 8.0})), r.se_t2e));
    CHECK_NEAR(r.se_t1e, std::sqrt(r.empirical_t1e * (1 - r.empirical_t1e) / 1e6), 1e-15);
}

TEST_CASE("simple Bayesian error rates at random points") {
    for (int i = 0; i < 5; ++i) {
        const double delta0 = testing::uniform(1.0, 5.0);
        const DesignParams d{std::round(testing::uniform(20, 150)), delta0, testing::uniform(3, 10)};
        const EffectPrior pr{delta0, testing::uniform(0.5, 30.0)};
        const double alpha = testing::uniform(0.005, 0.2);
        const SimPlan plan = make_plan(SimpleBayesSim{d, pr}, alpha, kDefaultReplications, 100 + i);
        const SimResult r = simulate(plan);
        CHECK(within(r.empirical_t1e, t1e_bayes(d, pr, alpha), r.se_t1e));
        CHECK(within(r.empirical_t2e, t2e_bayes(d, pr, alpha), r.se_t2e));
    }
}

TEST_CASE("historical control: conditional and two-stage draws") {
    const TwoArmLayout l{64, 40, 8.0, 4.0};
    PlaceboPrior p = placebo(1.0, 30.0, -0.5);
    p.design_prior = PlaceboDesignPrior{0.5, 15.0};
    for (bool uncond : {false, true}) {
        const SimPlan plan = make_plan(HistoricalSim{l, p, uncond}, 0.025, kDefaultReplications, 5);
        const SimResult r = simulate(plan);
        const AnalyticRates a = analytic_counterpart(plan, 0.025);
        CHECK(within(r.empirical_t1e, a.t1e, r.se_t1e));
        CHECK(within(r.empirical_t2e, a.t2e, r.se_t2e));
    }
}

TEST_CASE("composite reference design and decomposition") {
    const CompositeContext ctx = testing::rls_context();
    const SimPlan plan =
        make_plan(CompositeSim{ctx, DecisionRule::Frequentist, 4.0}, 0.025, kDefaultReplications, 11);
    const SimResult r = simulate(plan);
    CHECK(within(r.empirical_t1e, 0.000569, r.se_t1e));
    CHECK(within(r.empirical_t2e, ave_t2e_freq(ctx, 0.025), r.se_t2e));
    REQUIRE(r.empirical_pos);
    CHECK(within(*r.empirical_pos, pos(ctx, 0.025), *r.se_pos));
    REQUIRE(r.empirical_decomposition);
    const AnalyticRates a = analytic_counterpart(plan, 0.025);
    REQUIRE(a.decomposition);
    const auto se = [](double p) { return std::sqrt(p * (1 - p) / 1e6); };
    CHECK(within(r.empirical_decomposition->relevant, a.decomposition->relevant,
                 se(r.empirical_decomposition->relevant)));
    CHECK(within(r.empirical_decomposition->marginal, a.decomposition->marginal,
                 se(r.empirical_decomposition->marginal)));
    CHECK(r.empirical_decomposition->null_region == r.empirical_t1e);

    const SimPlan bayes = make_plan(CompositeSim{ctx, DecisionRule::Bayesian, {}}, 0.025,
                                    kDefaultReplications, 12);
    const SimResult rb = simulate(bayes);
    CHECK(within(rb.empirical_t1e, ave_t1e_bayes(ctx, 0.025), rb.se_t1e));
    CHECK(within(rb.empirical_t2e, ave_t2e_bayes(ctx, 0.025), rb.se_t2e));
    CHECK_FALSE(rb.empirical_decomposition);
}

TEST_CASE("sweeps use common random numbers") {
    const SimPlan plan = make_plan(SimpleFreqSim{{64.0, 4.0, 8.0}}, 0.025, 400000, 3);
    std::vector<double> grid;
    for (int i = 1; i <= 200; ++i) grid.push_back(i * 5e-4);
    const auto results = sweep_simulate(plan, grid);
    REQUIRE(results.size() == grid.size());
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK(results[i].alpha == grid[i]);
        CHECK(results[i].empirical_t1e >= results[i - 1].empirical_t1e);
        CHECK(results[i].empirical_t2e <= results[i - 1].empirical_t2e);
    }
    const double single[] = {0.025};
    const SimResult one = sweep_simulate(plan, single).front();
    const SimResult direct = simulate(plan);
    CHECK(one.empirical_t1e == direct.empirical_t1e);
    CHECK(one.empirical_t2e == direct.empirical_t2e);
    const double bad[] = {0.0};
    CHECK_THROWS_AS(sweep_simulate(plan, bad), DomainError);
}

TEST_CASE("empirical weighted-error argmin") {
    const SimPlan plan = make_plan(SimpleFreqSim{{64.0, 4.0, 8.0}}, 0.025, kDefaultReplications, 21);
    std::vector<double> grid;
    for (double a = 0.005; a < 0.1; a += 0.005) grid.push_back(a);
    const auto results = sweep_simulate(plan, grid);
    std::size_t best = 0;
    double best_psi = 1.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double p = (3.0 * results[i].empirical_t1e + results[i].empirical_t2e) / 4.0;
        if (p < best_psi) {
            best_psi = p;
            best = i;
        }
    }
    CHECK(std::abs(grid[best] - 0.0357) <= 0.005);
}
