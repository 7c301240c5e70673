#include "errbalance/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

#include "errbalance/errbalance.hpp"

namespace errbalance::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Kind { Number, Text, Flag };

struct ParamSpec {
    const char* key;
    Kind kind;
    const char* help;
};

// Every parameter the CLI understands. The flag is the key with '_' -> '-'.
const std::vector<ParamSpec>& all_params() {
    static const std::vector<ParamSpec> params{
        {"regime", Kind::Text, "simple-freq | simple-bayes | historical | composite-freq | composite-bayes"},
        {"n1", Kind::Number, "per-arm sample size"},
        {"delta0", Kind::Number, "effect size (historical: effect for the type II error)"},
        {"sigma", Kind::Number, "known standard deviation"},
        {"n0", Kind::Number, "prior effective sample size"},
        {"prior_delta0", Kind::Number, "prior mean effect if different from --delta0 (simple-bayes)"},
        {"omega", Kind::Number, "cost ratio of a type I to a type II error"},
        {"alpha", Kind::Number, "decision criterion parameter"},
        {"beta", Kind::Number, "type II error rate"},
        {"n_a", Kind::Number, "active arm size (historical)"},
        {"n_p", Kind::Number, "placebo arm size (historical)"},
        {"pi0", Kind::Number, "historical placebo mean"},
        {"pi_true", Kind::Number, "true placebo mean for conditional rates (default --pi0)"},
        {"pi00", Kind::Number, "design prior mean of the placebo response"},
        {"n00", Kind::Number, "design prior effective sample size"},
        {"unconditional", Kind::Flag, "average over the placebo design prior"},
        {"psi0", Kind::Number, "bound on the weighted error"},
        {"theta2_lo", Kind::Number, "lower end of the theta^2 search range"},
        {"theta2_hi", Kind::Number, "upper end of the theta^2 search range"},
        {"epsilon", Kind::Number, "two-sided level to calibrate to"},
        {"delta_mcid", Kind::Number, "minimal clinically important difference"},
        {"rule", Kind::Text, "decision rule for pos: freq | bayes"},
        {"w1", Kind::Number, "weight of a type I error"},
        {"w2", Kind::Number, "weight of a type II error"},
        {"c_alpha", Kind::Number, "cost of a type I error"},
        {"c_beta", Kind::Number, "cost of a type II error"},
        {"p_effective", Kind::Number, "prior probability the drug is effective"},
        {"c1", Kind::Number, "per-person post-trial cost of a type I error"},
        {"c2", Kind::Number, "per-person post-trial cost of a type II error"},
        {"pop_n", Kind::Number, "target population size"},
        {"gamma", Kind::Number, "delay cost fraction per enrolled patient"},
        {"power_floor", Kind::Number, "minimum power"},
        {"p0", Kind::Number, "prior probability of the null (default 0.5)"},
        {"n_min", Kind::Number, "smallest per-arm n searched"},
        {"n_max", Kind::Number, "largest per-arm n searched"},
        {"no_in_trial", Kind::Flag, "drop the in-trial cost terms"},
        {"grid", Kind::Text, "lo:hi:step or comma-separated values"},
        {"axis", Kind::Text, "sweep axis: alpha | theta2"},
        {"replications", Kind::Number, "Monte Carlo replications"},
        {"seed", Kind::Number, "Monte Carlo seed (default $ERRBALANCE_SEED or 1)"},
        {"threads", Kind::Number, "worker threads for simulation (0 = all cores)"},
    };
    return params;
}

const ParamSpec& spec_for(const std::string& key) {
    for (const auto& p : all_params()) {
        if (key == p.key) return p;
    }
    throw std::logic_error("unknown parameter " + key);
}

std::string flag_name(const std::string& key) {
    std::string flag = "--" + key;
    for (char& c : flag) {
        if (c == '_') c = '-';
    }
    return flag;
}

// Parameter values after merging flags over the config file.
class Bindings {
public:
    void set_number(const std::string& key, double value) { numbers_[key] = value; }
    void set_text(const std::string& key, std::string value) { texts_[key] = std::move(value); }
    void set_flag(const std::string& key, bool value) { flags_[key] = value; }

    bool has(const std::string& key) const {
        return numbers_.count(key) || texts_.count(key) || flags_.count(key);
    }

    double number(const std::string& key) const {
        auto it = numbers_.find(key);
        if (it == numbers_.end()) throw UsageError("missing required parameter " + flag_name(key));
        return it->second;
    }
    double number_or(const std::string& key, double fallback) const {
        auto it = numbers_.find(key);
        return it == numbers_.end() ? fallback : it->second;
    }
    std::optional<double> maybe_number(const std::string& key) const {
        auto it = numbers_.find(key);
        if (it == numbers_.end()) return std::nullopt;
        return it->second;
    }
    std::string text(const std::string& key) const {
        auto it = texts_.find(key);
        if (it == texts_.end()) throw UsageError("missing required parameter " + flag_name(key));
        return it->second;
    }
    std::string text_or(const std::string& key, const std::string& fallback) const {
        auto it = texts_.find(key);
        return it == texts_.end() ? fallback : it->second;
    }
    bool flag(const std::string& key) const {
        auto it = flags_.find(key);
        return it != flags_.end() && it->second;
    }

    Json to_json(const std::vector<std::string>& order) const {
        Json j = Json::object();
        for (const auto& key : order) {
            if (auto n = numbers_.find(key); n != numbers_.end()) j[key] = n->second;
            if (auto t = texts_.find(key); t != texts_.end()) j[key] = t->second;
            if (auto f = flags_.find(key); f != flags_.end()) j[key] = f->second;
        }
        return j;
    }

private:
    std::map<std::string, double> numbers_;
    std::map<std::string, std::string> texts_;
    std::map<std::string, bool> flags_;
};

// A report is either a flat record (one row) or a table (sweeps).
struct Record {
    std::vector<std::pair<std::string, std::variant<double, std::string>>> fields;

    void add(std::string key, double v) { fields.emplace_back(std::move(key), v); }
    void add(std::string key, std::string v) { fields.emplace_back(std::move(key), std::move(v)); }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

using Report = std::variant<Record, Table>;

// ---------------------------------------------------------------------------
// parameter assembly

DesignParams design_from(const Bindings& b) {
    return {b.number("n1"), b.number("delta0"), b.number("sigma")};
}

EffectPrior effect_prior_from(const Bindings& b) {
    return {b.number_or("prior_delta0", b.number("delta0")), b.number("n0")};
}

CompositeContext composite_from(const Bindings& b) {
    CompositeContext ctx{design_from(b), effect_prior_from(b)};
    ctx.validate();
    return ctx;
}

TwoArmLayout layout_from(const Bindings& b) {
    return {b.number("n_a"), b.number("n_p"), b.number("sigma"), b.number("delta0")};
}

PlaceboPrior placebo_prior_from(const Bindings& b) {
    PlaceboPrior p;
    p.pi0 = b.number("pi0");
    p.n0 = b.number("n0");
    p.pi_true = b.number_or("pi_true", p.pi0);
    const bool has_pi00 = b.has("pi00");
    const bool has_n00 = b.has("n00");
    if (has_pi00 != has_n00) throw UsageError("--pi00 and --n00 must be given together");
    if (has_pi00) p.design_prior = PlaceboDesignPrior{b.number("pi00"), b.number("n00")};
    if (b.flag("unconditional") && !p.design_prior) {
        throw UsageError("--unconditional needs --pi00 and --n00");
    }
    return p;
}

DecisionRule rule_from(const Bindings& b, Regime regime) {
    if (regime == Regime::CompositeBayes) return DecisionRule::Bayesian;
    if (regime == Regime::CompositeFreq) return DecisionRule::Frequentist;
    const std::string rule = b.text_or("rule", "freq");
    if (rule == "freq") return DecisionRule::Frequentist;
    if (rule == "bayes") return DecisionRule::Bayesian;
    throw UsageError("--rule must be freq or bayes");
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    const auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in --grid");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw UsageError("--grid range must be lo:hi:step");
        const double lo = to_double(parts[0]);
        const double hi = to_double(parts[1]);
        const double step = to_double(parts[2]);
        if (!(step > 0.0) || hi < lo) throw UsageError("--grid needs lo <= hi and step > 0");
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (long i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(text);
        for (std::string part; std::getline(ss, part, ',');) grid.push_back(to_double(part));
    }
    if (grid.empty()) throw UsageError("--grid is empty");
    return grid;
}

// ---------------------------------------------------------------------------
// subcommands

Record optimum_record(const OptimumResult& r) {
    Record rec;
    rec.add("regime", std::string(to_string(r.regime)));
    rec.add("alpha", r.alpha);
    rec.add("t1e", r.t1e);
    rec.add("beta", r.t2e);
    rec.add("psi", r.psi);
    rec.add("omega", r.omega);
    rec.add("theta", r.theta);
    return rec;
}

OptimumResult optimize_regime(const Bindings& b, Regime regime) {
    const double omega = b.number("omega");
    switch (regime) {
        case Regime::SimpleFreq:
            return optimal_simple_freq(noncentrality(design_from(b)), omega);
        case Regime::SimpleBayes:
            return optimal_simple_bayes(design_from(b), effect_prior_from(b), omega);
        case Regime::HistoricalControl:
            return hc_optimal_alpha(layout_from(b), placebo_prior_from(b), omega,
                                    b.flag("unconditional"));
        case Regime::CompositeFreq:
            return optimal_composite_freq(composite_from(b), omega);
        case Regime::CompositeBayes:
            return optimal_composite_bayes(composite_from(b), omega);
    }
    throw std::logic_error("unreachable");
}

// Evaluates one regime at alpha; closures so sweeps build the context once.
std::function<ErrorReport(double)> error_evaluator(const Bindings& b, Regime regime) {
    const double omega = b.number("omega");
    switch (regime) {
        case Regime::SimpleFreq: {
            const double theta = noncentrality(design_from(b));
            return [=](double a) { return errors_simple_freq(a, theta, omega); };
        }
        case Regime::SimpleBayes: {
            const DesignParams d = design_from(b);
            const EffectPrior p = effect_prior_from(b);
            return [=](double a) { return errors_simple_bayes(d, p, a, omega); };
        }
        case Regime::HistoricalControl: {
            const TwoArmLayout l = layout_from(b);
            const PlaceboPrior p = placebo_prior_from(b);
            const bool uncond = b.flag("unconditional");
            return [=](double a) { return errors_historical(l, p, a, omega, uncond); };
        }
        case Regime::CompositeFreq:
        case Regime::CompositeBayes: {
            const CompositeContext ctx = composite_from(b);
            const DecisionRule rule = rule_from(b, regime);
            return [=](double a) { return errors_composite(ctx, a, omega, rule); };
        }
    }
    throw std::logic_error("unreachable");
}

Report cmd_optimize(const Bindings& b) {
    return optimum_record(optimize_regime(b, parse_regime(b.text("regime"))));
}

Report cmd_errors(const Bindings& b) {
    const Regime regime = parse_regime(b.text("regime"));
    const ErrorReport r = error_evaluator(b, regime)(b.number("alpha"));
    Record rec;
    rec.add("regime", std::string(to_string(regime)));
    rec.add("alpha", r.alpha);
    rec.add("t1e", r.t1e);
    rec.add("t2e", r.t2e);
    rec.add("psi", r.psi);
    rec.add("omega", r.omega);
    return rec;
}

Report cmd_size(const Bindings& b) {
    const SampleSize s =
        sample_size(b.number("delta0"), b.number("sigma"), b.number("alpha"), b.number("beta"));
    Record rec;
    rec.add("n1_fractional", s.fractional);
    rec.add("n1", static_cast<double>(s.rounded));
    return rec;
}

Report cmd_size_psi(const Bindings& b) {
    const std::pair<double, double> range{b.number_or("theta2_lo", kDefaultTheta2Range.first),
                                          b.number_or("theta2_hi", kDefaultTheta2Range.second)};
    const PsiBoundSizing s = size_for_psi_bound(b.number("psi0"), b.number("omega"),
                                                b.number("delta0"), b.number("sigma"), range);
    Record rec;
    rec.add("theta2", s.theta2);
    rec.add("n1_fractional", s.n1_fractional);
    rec.add("n1", static_cast<double>(s.n1));
    rec.add("alpha", s.alpha);
    rec.add("beta", s.beta);
    rec.add("psi", s.psi);
    return rec;
}

Report cmd_calibrate(const Bindings& b) {
    const DesignParams d = design_from(b);
    const EffectPrior p = effect_prior_from(b);
    const double alpha = calibrate_alpha(p, d, b.number("epsilon"));
    Record rec;
    rec.add("alpha", alpha);
    rec.add("t1e", t1e_bayes(d, p, alpha));
    rec.add("threshold", bayes_threshold(d, p, alpha));
    return rec;
}

Report cmd_pos(const Bindings& b) {
    const CompositeContext ctx = composite_from(b);
    const double alpha = b.number("alpha");
    const DecisionRule rule = rule_from(b, Regime::SimpleFreq);
    const ErrorReport e = errors_composite(ctx, alpha, 1.0, rule);
    Record rec;
    rec.add("pos", pos(ctx, alpha, rule));
    rec.add("prior_prob_effective", prior_prob_effective(ctx));
    rec.add("ave_t1e", e.t1e);
    rec.add("ave_t2e", e.t2e);
    if (auto mcid = b.maybe_number("delta_mcid")) {
        const PosDecomposition d = pos_decomposition(ctx, alpha, *mcid, rule);
        rec.add("pos_relevant", d.relevant);
        rec.add("pos_marginal", d.marginal);
        rec.add("pos_null", d.null_region);
    }
    return rec;
}

Report cmd_omega(const Bindings& b) {
    Record rec;
    if (b.has("w1") || b.has("w2")) {
        rec.add("omega", omega_from_weights(b.number("w1"), b.number("w2")));
    } else {
        const CostSpec spec{b.number("c_alpha"), b.number("c_beta"), b.number("p_effective")};
        rec.add("omega", omega_from_costspec(spec));
    }
    return rec;
}

Report cmd_isakov(const Bindings& b) {
    IsakovSpec spec;
    spec.c1 = b.number("c1");
    spec.c2 = b.number("c2");
    spec.pop_n = b.number("pop_n");
    spec.gamma = b.number("gamma");
    spec.power_floor = b.number_or("power_floor", 0.0);
    spec.p0 = b.number_or("p0", 0.5);
    spec.in_trial_costs = !b.flag("no_in_trial");
    const DesignParams design{1.0, b.number("delta0"), b.number("sigma")};
    const IsakovOptimum r = isakov_optimize(spec, design, std::lround(b.number("n_min")),
                                            std::lround(b.number("n_max")));
    Record rec;
    rec.add("alpha", r.alpha);
    rec.add("n", static_cast<double>(r.n));
    rec.add("cost", r.cost);
    rec.add("beta", r.beta);
    rec.add("power", 1.0 - r.beta);
    rec.add("omega", spec.omega());
    return rec;
}

Report cmd_sweep(const Bindings& b) {
    const std::vector<double> grid = parse_grid(b.text("grid"));
    const std::string axis = b.text_or("axis", "alpha");
    Table t;
    if (axis == "theta2") {
        const double omega = b.number("omega");
        t.columns = {"theta2", "alpha", "beta", "psi"};
        for (double theta2 : grid) {
            if (!(theta2 > 0.0)) throw DomainError("theta2 grid values must be positive");
            const OptimumResult r = optimal_simple_freq(std::sqrt(theta2), omega);
            t.rows.push_back({theta2, r.alpha, r.t2e, r.psi});
        }
        return t;
    }
    if (axis != "alpha") throw UsageError("--axis must be alpha or theta2");
    const auto eval = error_evaluator(b, parse_regime(b.text("regime")));
    t.columns = {"alpha", "t1e", "t2e", "psi"};
    for (double alpha : grid) {
        const ErrorReport r = eval(alpha);
        t.rows.push_back({alpha, r.t1e, r.t2e, r.psi});
    }
    return t;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("ERRBALANCE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("ERRBALANCE_SEED must be a non-negative integer");
        }
    }
    return 1;
}

SimPlan plan_from(const Bindings& b) {
    const Regime regime = parse_regime(b.text("regime"));
    SimPlan plan;
    switch (regime) {
        case Regime::SimpleFreq: plan.params = SimpleFreqSim{design_from(b)}; break;
        case Regime::SimpleBayes:
            plan.params = SimpleBayesSim{design_from(b), effect_prior_from(b)};
            break;
        case Regime::HistoricalControl:
            plan.params =
                HistoricalSim{layout_from(b), placebo_prior_from(b), b.flag("unconditional")};
            break;
        case Regime::CompositeFreq:
        case Regime::CompositeBayes:
            plan.params = CompositeSim{composite_from(b), rule_from(b, regime),
                                       b.maybe_number("delta_mcid")};
            break;
    }
    plan.alpha = b.number_or("alpha", 0.025);
    const double reps = b.number("replications");
    if (!(reps >= 1.0) || reps != std::floor(reps)) {
        throw DomainError("replications must be a positive integer");
    }
    plan.replications = static_cast<std::uint64_t>(reps);
    const double seed = b.number("seed");
    if (!(seed >= 0.0) || seed != std::floor(seed) || seed > 9.007199254740992e15) {
        throw DomainError("seed must be a non-negative integer below 2^53");
    }
    plan.seed = static_cast<std::uint64_t>(seed);
    plan.threads = static_cast<unsigned>(b.number_or("threads", 0.0));
    return plan;
}

Report cmd_simulate(const Bindings& b) {
    const SimPlan plan = plan_from(b);
    if (b.has("grid")) {
        const std::vector<double> grid = parse_grid(b.text("grid"));
        Table t;
        t.columns = {"alpha", "empirical_t1e", "se_t1e", "analytic_t1e",
                     "empirical_t2e", "se_t2e", "analytic_t2e"};
        const auto results = sweep_simulate(plan, grid);
        for (const SimResult& r : results) {
            const AnalyticRates a = analytic_counterpart(plan, r.alpha);
            t.rows.push_back({r.alpha, r.empirical_t1e, r.se_t1e, a.t1e, r.empirical_t2e,
                              r.se_t2e, a.t2e});
        }
        return t;
    }
    const SimResult r = simulate(plan);
    const AnalyticRates a = analytic_counterpart(plan, plan.alpha);
    Record rec;
    rec.add("regime", std::string(to_string(r.regime)));
    rec.add("alpha", r.alpha);
    rec.add("empirical_t1e", r.empirical_t1e);
    rec.add("se_t1e", r.se_t1e);
    rec.add("analytic_t1e", a.t1e);
    rec.add("empirical_t2e", r.empirical_t2e);
    rec.add("se_t2e", r.se_t2e);
    rec.add("analytic_t2e", a.t2e);
    if (r.empirical_pos && a.pos) {
        rec.add("empirical_pos", *r.empirical_pos);
        rec.add("se_pos", *r.se_pos);
        rec.add("analytic_pos", *a.pos);
    }
    if (r.empirical_decomposition && a.decomposition) {
        rec.add("empirical_pos_relevant", r.empirical_decomposition->relevant);
        rec.add("empirical_pos_marginal", r.empirical_decomposition->marginal);
        rec.add("empirical_pos_null", r.empirical_decomposition->null_region);
        rec.add("analytic_pos_relevant", a.decomposition->relevant);
        rec.add("analytic_pos_marginal", a.decomposition->marginal);
        rec.add("analytic_pos_null", a.decomposition->null_region);
    }
    rec.add("replications", static_cast<double>(r.replications));
    rec.add("seed", static_cast<double>(r.seed));
    return rec;
}

struct Subcommand {
    const char* name;
    const char* description;
    std::vector<std::string> params;
    Report (*handler)(const Bindings&);
    const char* default_format;
};

const std::vector<std::string> kRegimeParams{
    "regime", "n1", "delta0", "sigma", "n0", "prior_delta0", "omega",
    "n_a", "n_p", "pi0", "pi_true", "pi00", "n00", "unconditional"};

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<const char*> extra) {
    for (const char* e : extra) base.emplace_back(e);
    return base;
}

const std::vector<Subcommand>& subcommands() {
    static const std::vector<Subcommand> cmds{
        {"optimize", "optimal alpha, beta and weighted error for a regime", kRegimeParams,
         cmd_optimize, "table"},
        {"errors", "type I/II errors and weighted error at a given alpha",
         with(kRegimeParams, {"alpha"}), cmd_errors, "table"},
        {"size", "per-arm sample size for given alpha and beta",
         {"delta0", "sigma", "alpha", "beta"}, cmd_size, "table"},
        {"size-psi", "sample size bounding the optimal weighted error",
         {"psi0", "omega", "delta0", "sigma", "theta2_lo", "theta2_hi"}, cmd_size_psi, "table"},
        {"calibrate", "alpha giving the credible-bound rule type I error epsilon/2",
         {"n1", "delta0", "sigma", "n0", "prior_delta0", "epsilon"}, cmd_calibrate, "table"},
        {"pos", "probability of success and its decomposition",
         {"n1", "delta0", "sigma", "n0", "alpha", "delta_mcid", "rule"}, cmd_pos, "table"},
        {"omega", "cost ratio from weights or from a cost specification",
         {"w1", "w2", "c_alpha", "c_beta", "p_effective"}, cmd_omega, "table"},
        {"isakov", "joint optimisation of alpha and n under the in-trial cost model",
         {"c1", "c2", "pop_n", "gamma", "power_floor", "p0", "delta0", "sigma", "n_min", "n_max",
          "no_in_trial"},
         cmd_isakov, "table"},
        {"sweep", "weighted error over an alpha grid (or optimum over a theta^2 grid)",
         with(kRegimeParams, {"grid", "axis"}), cmd_sweep, "csv"},
        {"simulate", "Monte Carlo error rates for a regime",
         with(kRegimeParams, {"alpha", "delta_mcid", "replications", "seed", "threads", "grid"}),
         cmd_simulate, "table"},
    };
    return cmds;
}

// ---------------------------------------------------------------------------
// output

Json value_json(const std::variant<double, std::string>& v) {
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    return std::get<double>(v);
}

std::string value_text(const std::variant<double, std::string>& v) {
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    return format_number(std::get<double>(v));
}

void write_report(const Report& report, const std::string& format, const std::string& name,
                  const Json& inputs, std::ostream& out) {
    if (format == "json") {
        Json doc;
        doc["subcommand"] = name;
        doc["inputs"] = inputs;
        Json outputs = Json::object();
        if (const auto* rec = std::get_if<Record>(&report)) {
            for (const auto& [k, v] : rec->fields) outputs[k] = value_json(v);
        } else {
            const auto& t = std::get<Table>(report);
            outputs["columns"] = t.columns;
            outputs["rows"] = t.rows;
        }
        doc["outputs"] = outputs;
        doc["version"] = kVersion;
        out << doc.dump(2) << '\n';
        return;
    }

    if (format == "csv") {
        if (const auto* rec = std::get_if<Record>(&report)) {
            for (std::size_t i = 0; i < rec->fields.size(); ++i) {
                out << (i ? "," : "") << rec->fields[i].first;
            }
            out << '\n';
            for (std::size_t i = 0; i < rec->fields.size(); ++i) {
                out << (i ? "," : "") << value_text(rec->fields[i].second);
            }
            out << '\n';
        } else {
            const auto& t = std::get<Table>(report);
            for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
            out << '\n';
            for (const auto& row : t.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    out << (i ? "," : "") << format_number(row[i]);
                }
                out << '\n';
            }
        }
        return;
    }

    // table
    if (const auto* rec = std::get_if<Record>(&report)) {
        std::size_t width = 0;
        for (const auto& f : rec->fields) width = std::max(width, f.first.size());
        for (const auto& [k, v] : rec->fields) {
            out << k << std::string(width - k.size() + 2, ' ') << value_text(v) << '\n';
        }
    } else {
        const auto& t = std::get<Table>(report);
        for (const auto& c : t.columns) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%-24s", c.c_str());
            out << buf;
        }
        out << '\n';
        for (const auto& row : t.rows) {
            for (double v : row) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%-24.17g", v);
                out << buf;
            }
            out << '\n';
        }
    }
}

void merge_config(const std::string& path, const std::vector<std::string>& allowed,
                  Bindings& bindings) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    if (doc.contains("inputs")) doc = doc["inputs"];
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& key : allowed) {
        if (!doc.contains(key) || bindings.has(key)) continue;
        const Json& v = doc[key];
        switch (spec_for(key).kind) {
            case Kind::Number:
                if (!v.is_number()) throw UsageError("config key '" + key + "' must be a number");
                bindings.set_number(key, v.get<double>());
                break;
            case Kind::Text:
                if (!v.is_string()) throw UsageError("config key '" + key + "' must be a string");
                bindings.set_text(key, v.get<std::string>());
                break;
            case Kind::Flag:
                if (!v.is_boolean()) throw UsageError("config key '" + key + "' must be a boolean");
                bindings.set_flag(key, v.get<bool>());
                break;
        }
    }
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cost-weighted optimisation of type I and type II error rates", "errbalance"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // Node-based maps: option storage addresses stay valid.
    std::map<std::string, std::map<std::string, double>> numbers;
    std::map<std::string, std::map<std::string, std::string>> texts;
    std::map<std::string, std::map<std::string, bool>> flags;
    std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
    std::map<std::string, std::string> format;
    std::map<std::string, std::string> output;
    std::map<std::string, std::string> config;

    for (const Subcommand& cmd : subcommands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
        const std::string name = cmd.name;
        for (const auto& key : cmd.params) {
            const ParamSpec& spec = spec_for(key);
            const std::string flag = flag_name(key);
            CLI::Option* opt = nullptr;
            switch (spec.kind) {
                case Kind::Number:
                    opt = sub->add_option(flag, numbers[name][key], spec.help);
                    break;
                case Kind::Text:
                    opt = sub->add_option(flag, texts[name][key], spec.help);
                    break;
                case Kind::Flag:
                    opt = sub->add_flag(flag, flags[name][key], spec.help);
                    break;
            }
            options[name].emplace_back(key, opt);
        }
        format[name] = cmd.default_format;
        sub->add_option("--format", format[name], "table | json | csv")
            ->check(CLI::IsMember({"table", "json", "csv"}));
        sub->add_option("--output", output[name], "write the report to this file");
        sub->add_option("--config", config[name], "JSON file of parameters (flags take precedence)");
    }

    std::vector<std::string> argv;
    argv.reserve(args.size());
    for (auto it = args.rbegin(); it != args.rend(); ++it) argv.push_back(*it);

    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    const Subcommand* chosen = nullptr;
    for (const Subcommand& cmd : subcommands()) {
        if (app.got_subcommand(cmd.name)) chosen = &cmd;
    }
    const std::string name = chosen->name;

    try {
        Bindings bindings;
        for (const auto& [key, opt] : options[name]) {
            if (opt->count() == 0) continue;
            switch (spec_for(key).kind) {
                case Kind::Number: bindings.set_number(key, numbers[name][key]); break;
                case Kind::Text: bindings.set_text(key, texts[name][key]); break;
                case Kind::Flag: bindings.set_flag(key, flags[name][key]); break;
            }
        }
        if (!config[name].empty()) merge_config(config[name], chosen->params, bindings);
        if (name == "simulate") {
            if (!bindings.has("seed")) bindings.set_number("seed", static_cast<double>(default_seed()));
            if (!bindings.has("replications")) {
                bindings.set_number("replications", static_cast<double>(kDefaultReplications));
            }
        }

        const Report report = chosen->handler(bindings);
        const Json inputs = bindings.to_json(chosen->params);
        if (!output[name].empty()) {
            std::ofstream file(output[name]);
            if (!file) throw UsageError("cannot write " + output[name]);
            write_report(report, format[name], name, inputs, file);
        } else {
            write_report(report, format[name], name, inputs, out);
        }
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.get_subcommand(name)->help();
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const BracketError& e) {
        err << "bracket: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ConvergenceError& e) {
        err << "convergence: " << e.what() << '\n';
        return kExitInfeasible;
    }
}

}  // namespace errbalance::cli
