import math

import pytest

import gcalc

X1 = {"op": "coord", "index": 1}


def test_version_and_defaults():
    assert gcalc.__version__ == "0.1.0"
    cfg = gcalc.default_config()
    assert cfg["gamma"]["kind"] == "interval1d"


def test_g_value_interval():
    gamma = gcalc.interval(0.5, 1.0)
    assert gcalc.g_value(gamma, [[2.0]]) == pytest.approx(1.0)
    assert gcalc.g_value(gamma, [[-2.0]]) == pytest.approx(-0.25)


def test_moments_closed_form():
    # E[B^2] = sigma_plus t, -E[-B^2] = |sigma_minus| t; fourth moment carries (4-1)!! = 3.
    assert gcalc.moment_even_signed(1.0, -0.25, 1.0, 2, 1) == pytest.approx(1.0)
    assert gcalc.moment_even_signed(1.0, -0.25, 1.0, 2, -1) == pytest.approx(-0.25)
    assert gcalc.moment_even_signed(1.0, -0.25, 2.0, 4, 1) == pytest.approx(12.0)
    assert gcalc.moment_abs(1.0, -0.25, 1.0, 1) == pytest.approx(math.sqrt(2 / math.pi))


def test_convex_call_matches_bachelier():
    value = gcalc.evaluate({"op": "call", "of": X1, "strike": 0.0}, 1.0)
    assert value == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-3)


def test_callable_payoff_matches_template():
    a = gcalc.evaluate(lambda x: x * x, 0.5)
    b = gcalc.evaluate({"op": "power", "of": X1, "n": 2}, 0.5)
    assert a == pytest.approx(b, rel=1e-12)
    assert a == pytest.approx(0.5, abs=2e-3)


def test_concave_payoff_uses_lower_variance():
    value = gcalc.evaluate({"op": "neg", "of": {"op": "power", "of": X1, "n": 2}}, 1.0)
    assert value == pytest.approx(-0.25, abs=2e-3)


def test_expect_two_time_functional():
    phi = {"op": "power", "of": {"op": "increment", "from": 1, "to": 2}, "n": 2}
    assert gcalc.expect(phi, [0.5, 1.0]) == pytest.approx(0.5, abs=5e-3)


def test_config_errors_name_the_field():
    with pytest.raises(gcalc.ConfigError, match="paths.speed"):
        gcalc.run_check("picard", {"paths": {"speed": 3}})
    with pytest.raises(gcalc.ConfigError):
        gcalc.check_ids("speed")
    with pytest.raises(gcalc.GcalcError):
        gcalc.g_value(gcalc.interval(0.5, 1.0), [[1.0, 0.0], [0.0, 1.0]])


def test_sde_suite_is_deterministic():
    assert gcalc.check_ids("sde") == ["picard"]
    cfg = {"paths": {"seed": 5}}
    a = gcalc.run_suite("sde", cfg)
    b = gcalc.run_suite("sde", cfg)
    assert a == b
    assert a["passed"] is True


def test_risk_demo_passes():
    report = gcalc.risk_demo({"risk": {"n_paths": 500, "steps": 2000}})
    assert report["id"] == "risk_demo"
    assert report["passed"] is True


def test_sha256_known_answer():
    assert gcalc.sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
