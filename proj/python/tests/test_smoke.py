import math

import pytest

import repremia as r


def test_premium_branches():
    p = r.PremiumParams(delta=1.0, theta0=1.0, theta1=0.5, theta2=2.0)
    assert r.realized_premium(p, 1.0, 0.2) == pytest.approx(1.5)
    assert r.realized_premium(p, 1.0, 1.0) == pytest.approx(2.0)
    assert r.realized_premium(p, 1.0, 2.5) == pytest.approx(3.0)
    assert [r.premium_branch(p, 1.0, y) for y in (0.2, 1.0, 2.5)] == ["floor", "band", "cap"]


def test_invalid_params_raise():
    with pytest.raises(ValueError):
        r.PremiumParams(delta=0.5, theta0=1.0, theta1=0.1, theta2=2.0)
    with pytest.raises(ValueError):
        r.LossModel.pareto(2.0, 0.9)


def test_tvar_of_exponential():
    m = r.LossModel.exponential(2.0)
    assert r.rho_loss(r.Distortion.tvar(0.2), m) == pytest.approx(2.0 * (1.0 + math.log(5.0)))


def test_exponential_insurer_takes_stop_loss():
    m = r.LossModel.exponential(2.0)
    p = r.bowley_params(1.0, 1.0, 0.5, 2.0)
    s = r.solve_insurer(m, p, r.Distortion.tvar(0.1))
    assert s.branch == "stop_loss"
    assert r.ceded_mean(s.contract, m) == pytest.approx(s.a_star, rel=1e-8)
    assert r.insurer_risk(r.Distortion.tvar(0.1), m, p, s.contract) == pytest.approx(s.value, rel=1e-9)


def test_beta_one_gives_zero_delta():
    c = r.BowleyConfig()
    c.loss = r.LossModel.exponential(2.0)
    c.insurer = r.Distortion.power(0.2)
    c.deltas = r.delta_grid(0.0, 1.0, 0.1)
    pts = r.beta_curve(c, [1.0])
    assert pts[0].delta_star == 0.0
