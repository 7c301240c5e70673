import json
import math

import pytest

import errbalance as eb

RLS = eb.DesignParams(n1=64, delta0=4, sigma=8)
RLS_PRIOR = eb.EffectPrior(delta0=4, n0=2)


def test_simple_frequentist_optimum():
    r = eb.optimal_simple_freq(eb.noncentrality(RLS), 3.0)
    assert r.alpha == pytest.approx(0.0357, abs=5e-5)
    assert r.beta == pytest.approx(0.1525, abs=5e-5)
    assert r.psi == pytest.approx(0.0649, abs=5e-5)
    assert r.regime == eb.Regime.SIMPLE_FREQ
    assert r.regime_name == "simple-freq"


def test_sample_sizes():
    s = eb.sample_size(4, 8, 0.025, 0.2)
    assert s.rounded == 63
    assert s.fractional == pytest.approx(62.79, abs=0.01)
    b = eb.size_for_psi_bound(0.05, 3.0, 4, 8)
    assert b.n1 == 78
    assert b.theta2 == pytest.approx(9.6487, abs=1e-3)


def test_bayesian_and_composite():
    b = eb.optimal_simple_bayes(RLS, RLS_PRIOR, 3.0)
    assert b.alpha == pytest.approx(0.0313, abs=1e-4)
    ctx = eb.CompositeContext(RLS, RLS_PRIOR)
    assert ctx.f0 == pytest.approx(2 / 66)
    assert eb.optimal_composite_freq(ctx, 3.0).alpha == pytest.approx(0.27540, abs=5e-6)
    assert eb.optimal_composite_bayes(ctx, 3.0).alpha == pytest.approx(0.25, abs=1e-12)
    e = eb.errors_composite(ctx, 0.025, 3.0, eb.DecisionRule.BAYESIAN)
    assert e.t1e == pytest.approx(0.000662, abs=1e-6)
    d = eb.pos_decomposition(ctx, 0.025, 4.0)
    assert d.relevant + d.marginal + d.null_region == pytest.approx(eb.pos(ctx, 0.025), abs=1e-12)


def test_historical_control():
    layout = eb.TwoArmLayout(n_a=64, n_p=64, sigma=8, delta=4)
    prior = eb.PlaceboPrior(pi0=0.0, n0=1e-9)
    assert eb.errors_historical(layout, prior, 0.025, 1.0).t1e == pytest.approx(0.025, abs=1e-6)
    with pytest.raises(eb.DomainError):
        eb.hc_unconditional_errors(layout, prior, 0.025)
    prior = eb.PlaceboPrior(pi0=0.0, n0=20, design_prior=eb.PlaceboDesignPrior(0.0, 50))
    u = eb.hc_unconditional_errors(layout, prior, 0.025)
    assert 0 < u.t1e < 0.5


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        eb.norm_quantile(1.5)
    with pytest.raises(eb.BracketError):
        eb.size_for_psi_bound(1e-12, 3.0, 4, 8)
    assert issubclass(eb.InfeasibleError, RuntimeError)


def test_simulation_is_deterministic_and_calibrated():
    a = eb.simulate(RLS, alpha=0.025, replications=200_000, seed=5)
    b = eb.simulate(RLS, alpha=0.025, replications=200_000, seed=5)
    assert a == b
    assert abs(a["empirical_t1e"] - 0.025) <= 3.29 * a["se_t1e"]
    ctx = eb.CompositeContext(RLS, RLS_PRIOR)
    c = eb.simulate(ctx, replications=200_000, seed=6)
    assert abs(c["empirical_pos"] - c["analytic_pos"]) <= 3.29 * c["se_pos"]


def test_cli_in_process():
    code, out, err = eb.run_cli(
        ["optimize", "--regime", "simple-freq", "--n1", "64", "--delta0", "4", "--sigma", "8",
         "--omega", "3", "--format", "json"])
    assert code == 0, err
    doc = json.loads(out)
    assert doc["subcommand"] == "optimize"
    assert doc["version"] == eb.__version__
    assert math.isclose(doc["outputs"]["alpha"], 0.0357, abs_tol=5e-5)
    code, _, err = eb.run_cli(["optimize", "--nope"])
    assert code == 2
    assert "Usage" in err
