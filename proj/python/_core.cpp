#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "errbalance/cli.hpp"
#include "errbalance/errbalance.hpp"

namespace py = pybind11;
using namespace errbalance;

namespace {

std::string join_fields(std::initializer_list<std::pair<const char*, double>> fields) {
    std::string s;
    for (const auto& [k, v] : fields) {
        if (!s.empty()) s += ", ";
        s += std::string(k) + "=" + cli::format_number(v);
    }
    return s;
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    int code = 0;
    {
        py::gil_scoped_release release;
        code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cost-weighted optimisation of type I and type II error rates";
    m.attr("__version__") = kVersion;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BracketError>(m, "BracketError", PyExc_RuntimeError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

    py::enum_<Regime>(m, "Regime")
        .value("SIMPLE_FREQ", Regime::SimpleFreq)
        .value("SIMPLE_BAYES", Regime::SimpleBayes)
        .value("HISTORICAL_CONTROL", Regime::HistoricalControl)
        .value("COMPOSITE_FREQ", Regime::CompositeFreq)
        .value("COMPOSITE_BAYES", Regime::CompositeBayes);

    py::enum_<DecisionRule>(m, "DecisionRule")
        .value("FREQUENTIST", DecisionRule::Frequentist)
        .value("BAYESIAN", DecisionRule::Bayesian);

    py::class_<DesignParams>(m, "DesignParams")
        .def(py::init([](double n1, double delta0, double sigma) {
                 return DesignParams{n1, delta0, sigma};
             }),
             py::arg("n1"), py::arg("delta0"), py::arg("sigma"))
        .def_readwrite("n1", &DesignParams::n1)
        .def_readwrite("delta0", &DesignParams::delta0)
        .def_readwrite("sigma", &DesignParams::sigma)
        .def("__repr__", [](const DesignParams& d) {
            return "DesignParams(" + join_fields({{"n1", d.n1}, {"delta0", d.delta0}, {"sigma", d.sigma}}) + ")";
        });

    py::class_<EffectPrior>(m, "EffectPrior")
        .def(py::init([](double delta0, double n0) { return EffectPrior{delta0, n0}; }),
             py::arg("delta0"), py::arg("n0"))
        .def_readwrite("delta0", &EffectPrior::delta0)
        .def_readwrite("n0", &EffectPrior::n0);

    py::class_<CompositeContext>(m, "CompositeContext")
        .def(py::init([](const DesignParams& d, const EffectPrior& p) {
                 CompositeContext c{d, p};
                 c.validate();
                 return c;
             }),
             py::arg("design"), py::arg("prior"))
        .def_static("from_design", &CompositeContext::from_design, py::arg("design"), py::arg("n0"))
        .def_readwrite("design", &CompositeContext::design)
        .def_readwrite("prior", &CompositeContext::prior)
        .def_property_readonly("f0", &CompositeContext::f0)
        .def_property_readonly("z0", &CompositeContext::z0)
        .def_property_readonly("z1", &CompositeContext::z1)
        .def_property_readonly("rho", &CompositeContext::rho);

    py::class_<PlaceboDesignPrior>(m, "PlaceboDesignPrior")
        .def(py::init([](double pi00, double n00) { return PlaceboDesignPrior{pi00, n00}; }),
             py::arg("pi00"), py::arg("n00"))
        .def_readwrite("pi00", &PlaceboDesignPrior::pi00)
        .def_readwrite("n00", &PlaceboDesignPrior::n00);

    py::class_<PlaceboPrior>(m, "PlaceboPrior")
        .def(py::init([](double pi0, double n0, std::optional<double> pi_true,
                         std::optional<PlaceboDesignPrior> design_prior) {
                 PlaceboPrior p;
                 p.pi0 = pi0;
                 p.n0 = n0;
                 p.pi_true = pi_true.value_or(pi0);
                 p.design_prior = design_prior;
                 p.validate();
                 return p;
             }),
             py::arg("pi0"), py::arg("n0"), py::arg("pi_true") = py::none(),
             py::arg("design_prior") = py::none())
        .def_readwrite("pi0", &PlaceboPrior::pi0)
        .def_readwrite("n0", &PlaceboPrior::n0)
        .def_readwrite("pi_true", &PlaceboPrior::pi_true)
        .def_readwrite("design_prior", &PlaceboPrior::design_prior);

    py::class_<TwoArmLayout>(m, "TwoArmLayout")
        .def(py::init([](double n_a, double n_p, double sigma, double delta) {
                 return TwoArmLayout{n_a, n_p, sigma, delta};
             }),
             py::arg("n_a"), py::arg("n_p"), py::arg("sigma"), py::arg("delta"))
        .def_readwrite("n_a", &TwoArmLayout::n_a)
        .def_readwrite("n_p", &TwoArmLayout::n_p)
        .def_readwrite("sigma", &TwoArmLayout::sigma)
        .def_readwrite("delta", &TwoArmLayout::delta);

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("alpha", &ErrorReport::alpha)
        .def_readonly("t1e", &ErrorReport::t1e)
        .def_readonly("t2e", &ErrorReport::t2e)
        .def_readonly("psi", &ErrorReport::psi)
        .def_readonly("omega", &ErrorReport::omega)
        .def("__repr__", [](const ErrorReport& r) {
            return "ErrorReport(" +
                   join_fields({{"alpha", r.alpha}, {"t1e", r.t1e}, {"t2e", r.t2e}, {"psi", r.psi}}) + ")";
        });

    py::class_<OptimumResult>(m, "OptimumResult")
        .def_readonly("regime", &OptimumResult::regime)
        .def_readonly("omega", &OptimumResult::omega)
        .def_readonly("alpha", &OptimumResult::alpha)
        .def_readonly("t1e", &OptimumResult::t1e)
        .def_readonly("t2e", &OptimumResult::t2e)
        .def_readonly("psi", &OptimumResult::psi)
        .def_readonly("theta", &OptimumResult::theta)
        .def_property_readonly("beta", [](const OptimumResult& r) { return r.t2e; })
        .def_property_readonly("regime_name",
                               [](const OptimumResult& r) { return std::string(to_string(r.regime)); })
        .def("__repr__", [](const OptimumResult& r) {
            return "OptimumResult(regime=" + std::string(to_string(r.regime)) + ", " +
                   join_fields({{"alpha", r.alpha}, {"beta", r.t2e}, {"psi", r.psi}}) + ")";
        });

    py::class_<SampleSize>(m, "SampleSize")
        .def_readonly("fractional", &SampleSize::fractional)
        .def_readonly("rounded", &SampleSize::rounded);

    py::class_<PsiBoundSizing>(m, "PsiBoundSizing")
        .def_readonly("theta2", &PsiBoundSizing::theta2)
        .def_readonly("n1_fractional", &PsiBoundSizing::n1_fractional)
        .def_readonly("n1", &PsiBoundSizing::n1)
        .def_readonly("alpha", &PsiBoundSizing::alpha)
        .def_readonly("beta", &PsiBoundSizing::beta)
        .def_readonly("psi", &PsiBoundSizing::psi);

    py::class_<PosDecomposition>(m, "PosDecomposition")
        .def_readonly("relevant", &PosDecomposition::relevant)
        .def_readonly("marginal", &PosDecomposition::marginal)
        .def_readonly("null_region", &PosDecomposition::null_region);

    py::class_<ErrorPair>(m, "ErrorPair")
        .def_readonly("t1e", &ErrorPair::t1e)
        .def_readonly("t2e", &ErrorPair::t2e);

    // numerics
    m.def("norm_cdf", &norm_cdf, py::arg("x"));
    m.def("norm_pdf", &norm_pdf, py::arg("x"));
    m.def("norm_quantile", &norm_quantile, py::arg("p"));
    m.def("bvn_cdf", [](double h, double k, double rho) { return bvn_cdf({h, k, rho}); },
          py::arg("h"), py::arg("k"), py::arg("rho"));

    // cost models
    m.def("omega_from_weights", &omega_from_weights, py::arg("w1"), py::arg("w2"));
    m.def("omega_from_costs",
          [](double c_alpha, double c_beta, double p_effective) {
              return omega_from_costspec({c_alpha, c_beta, p_effective});
          },
          py::arg("c_alpha"), py::arg("c_beta"), py::arg("p_effective"));

    // simple hypotheses
    m.def("sample_size", &sample_size, py::arg("delta0"), py::arg("sigma"), py::arg("alpha"),
          py::arg("beta"));
    m.def("noncentrality", &noncentrality, py::arg("design"));
    m.def("beta_from_alpha", &beta_from_alpha, py::arg("alpha"), py::arg("theta"));
    m.def("psi", &psi, py::arg("alpha"), py::arg("theta"), py::arg("omega"));
    m.def("optimal_simple_freq", &optimal_simple_freq, py::arg("theta"), py::arg("omega"));
    m.def("size_for_psi_bound",
          [](double psi0, double omega, double delta0, double sigma, double lo, double hi) {
              return size_for_psi_bound(psi0, omega, delta0, sigma, {lo, hi});
          },
          py::arg("psi0"), py::arg("omega"), py::arg("delta0"), py::arg("sigma"),
          py::arg("theta2_lo") = kDefaultTheta2Range.first,
          py::arg("theta2_hi") = kDefaultTheta2Range.second);
    m.def("errors_simple_bayes", &errors_simple_bayes, py::arg("design"), py::arg("prior"),
          py::arg("alpha"), py::arg("omega"));
    m.def("optimal_simple_bayes", &optimal_simple_bayes, py::arg("design"), py::arg("prior"),
          py::arg("omega"));
    m.def("calibrate_alpha", &calibrate_alpha, py::arg("prior"), py::arg("design"),
          py::arg("epsilon"));

    // historical control
    m.def("errors_historical", &errors_historical, py::arg("layout"), py::arg("prior"),
          py::arg("alpha"), py::arg("omega"), py::arg("unconditional") = false);
    m.def("hc_optimal_alpha", &hc_optimal_alpha, py::arg("layout"), py::arg("prior"),
          py::arg("omega"), py::arg("unconditional") = false);
    m.def("hc_unconditional_errors", &hc_unconditional_errors, py::arg("layout"),
          py::arg("prior"), py::arg("alpha"));

    // composite hypotheses
    m.def("errors_composite", &errors_composite, py::arg("ctx"), py::arg("alpha"),
          py::arg("omega"), py::arg("rule") = DecisionRule::Frequentist);
    m.def("optimal_composite_freq", &optimal_composite_freq, py::arg("ctx"), py::arg("omega"));
    m.def("optimal_composite_bayes", &optimal_composite_bayes, py::arg("ctx"), py::arg("omega"));
    m.def("pos", &pos, py::arg("ctx"), py::arg("alpha"), py::arg("rule") = DecisionRule::Frequentist);
    m.def("pos_decomposition", &pos_decomposition, py::arg("ctx"), py::arg("alpha"),
          py::arg("delta_mcid"), py::arg("rule") = DecisionRule::Frequentist);

    // Monte Carlo: returns a dict echoing simulate()'s fields with the analytic values.
    m.def(
        "simulate",
        [](py::object params, double alpha, std::uint64_t replications, std::uint64_t seed,
           std::optional<DecisionRule> rule, std::optional<double> delta_mcid, bool unconditional,
           std::optional<EffectPrior> prior) {
            SimPlan plan;
            plan.alpha = alpha;
            plan.replications = replications;
            plan.seed = seed;
            if (py::isinstance<CompositeContext>(params)) {
                plan.params = CompositeSim{params.cast<CompositeContext>(),
                                           rule.value_or(DecisionRule::Frequentist), delta_mcid};
            } else if (py::isinstance<DesignParams>(params)) {
                const auto d = params.cast<DesignParams>();
                if (prior) plan.params = SimpleBayesSim{d, *prior};
                else plan.params = SimpleFreqSim{d};
            } else if (py::isinstance<py::tuple>(params)) {
                const auto t = params.cast<std::pair<TwoArmLayout, PlaceboPrior>>();
                plan.params = HistoricalSim{t.first, t.second, unconditional};
            } else {
                throw DomainError(
                    "simulate: params must be DesignParams, CompositeContext or (TwoArmLayout, "
                    "PlaceboPrior)");
            }
            SimResult r;
            {
                py::gil_scoped_release release;
                r = simulate(plan);
            }
            const AnalyticRates a = analytic_counterpart(plan, alpha);
            py::dict out;
            out["regime"] = r.regime;
            out["alpha"] = r.alpha;
            out["replications"] = r.replications;
            out["seed"] = r.seed;
            out["empirical_t1e"] = r.empirical_t1e;
            out["empirical_t2e"] = r.empirical_t2e;
            out["se_t1e"] = r.se_t1e;
            out["se_t2e"] = r.se_t2e;
            out["analytic_t1e"] = a.t1e;
            out["analytic_t2e"] = a.t2e;
            if (r.empirical_pos) {
                out["empirical_pos"] = *r.empirical_pos;
                out["se_pos"] = *r.se_pos;
                out["analytic_pos"] = *a.pos;
            }
            return out;
        },
        py::arg("params"), py::arg("alpha") = 0.025,
        py::arg("replications") = kDefaultReplications, py::arg("seed") = 1,
        py::arg("rule") = py::none(), py::arg("delta_mcid") = py::none(),
        py::arg("unconditional") = false, py::arg("prior") = py::none());

    m.def("run_cli", &run_cli, py::arg("args"),
          "Run a CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
