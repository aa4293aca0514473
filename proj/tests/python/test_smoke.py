import math

import pytest

import pinncert


def test_registry_lists_four_problems():
    names = pinncert.registry_names()
    assert names == ["example36", "example41", "example51", "example52"]


def test_registry_problem_shape():
    prob = pinncert.registry_get("example51", {"k": 7.0, "lambda": 7.0})
    assert prob.x1 == 0.0 and prob.x2 == 1.0
    assert prob.p == 0.0 and prob.q == 1.0
    assert prob.b(0.5) == pytest.approx(-3.5)
    assert prob.c(0.5) == pytest.approx(7.0)
    assert prob.has_exact()
    # y(x) = x(1-x)e^x + x^2
    assert prob.exact(0.5) == pytest.approx(0.25 * math.exp(0.5) + 0.25)


def test_validate_and_constants():
    prob = pinncert.registry_get("example51", {"k": 7.0, "lambda": 7.0})
    val = pinncert.validate(prob)
    assert val.gamma == pytest.approx(10.5)
    cert = pinncert.constants(prob, pinncert.Family.PLAIN)
    assert cert.ratio_bound == pytest.approx(4.0 / 441.0)


def test_unknown_problem_raises():
    with pytest.raises(pinncert.PinncertError):
        pinncert.registry_get("example99")


def test_untrained_report_certifies():
    prob = pinncert.registry_get("example51", {"k": 7.0, "lambda": 7.0})
    net = pinncert.Network.init(seed=3)
    trial = pinncert.make_trial("pinn2", net, prob)
    assert trial.boundary_exact()
    sample = pinncert.SampleSet.draw(seed=3, n=128, x1=prob.x1, x2=prob.x2)
    rep = pinncert.certified_report(prob, trial, sample)
    assert rep.plain_applicable and rep.plain_pass
    assert rep.ratio <= rep.bound_plain
    assert rep.all_pass()


def test_short_training_reduces_loss():
    prob = pinncert.registry_get("example36")
    net = pinncert.Network.init(seed=0)
    trial = pinncert.make_trial("pinn2", net, prob)
    res = pinncert.train(prob, trial, epochs=20, n=64, seed=0)
    assert res.loss_history[-1] < res.initial_loss
    assert len(res.loss_history) == 20


def test_cli_roundtrip(tmp_path):
    code = pinncert.run_cli(
        ["fd", "--example", "example41", "--lambda", "10", "--m", "64",
         "--out", str(tmp_path)]
    )
    assert code == 0
    lines = (tmp_path / "fd.csv").read_text().splitlines()
    assert lines[0] == "x,y"
    assert len(lines) == 66
