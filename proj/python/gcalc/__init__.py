"""Python front end for the gcalc engine.

Structured arguments (uncertainty sets, payoff templates, configs) are plain dicts;
they travel to the extension as JSON text.
"""

import json

from . import _gcalc
from ._gcalc import (
    BudgetError,
    CflError,
    ConfigError,
    DimensionError,
    DomainError,
    GcalcError,
    __version__,
    moment_abs,
    moment_even_signed,
    sha256_hex,
)

__all__ = [
    "BudgetError", "CflError", "ConfigError", "DimensionError", "DomainError", "GcalcError",
    "__version__", "interval", "default_config", "g_value", "moment_abs", "moment_even_signed",
    "evaluate", "expect", "check_ids", "run_check", "run_suite", "risk_demo", "sha256_hex",
]


def interval(sigma_low, sigma_high):
    return {"kind": "interval1d", "sigma_low": sigma_low, "sigma_high": sigma_high}


def _dump(obj):
    if obj is None:
        return ""
    return obj if isinstance(obj, str) else json.dumps(obj)


def default_config():
    return json.loads(_gcalc.default_config())


def g_value(gamma, a):
    return _gcalc.g_value(_dump(gamma), [list(row) for row in a])


def evaluate(payoff, t, x=0.0, gamma=None, direction=(1.0,), solver=None):
    """P_t^G applied to payoff((a, .)) at x. payoff is a template dict or a float -> float callable."""
    gamma = gamma or interval(0.5, 1.0)
    xs = list(x) if hasattr(x, "__iter__") else [float(x)]
    p = payoff if callable(payoff) else _dump(payoff)
    return _gcalc.evaluate(_dump(gamma), list(direction), p, t, xs, _dump(solver))


def expect(phi, times, gamma=None, direction=(1.0,), config=None):
    """Sublinear expectation of phi((a, B_t1), ..., (a, B_tm)) for m <= 3."""
    gamma = gamma or interval(0.5, 1.0)
    return _gcalc.expect_cylinder(_dump(gamma), list(times), list(direction), _dump(phi), _dump(config))


def check_ids(suite="acceptance"):
    return _gcalc.check_ids(suite)


def run_check(check_id, config=None):
    return json.loads(_gcalc.run_check(check_id, _dump(config)))


def run_suite(suite, config=None):
    return json.loads(_gcalc.run_suite(suite, _dump(config)))


def risk_demo(config=None):
    return run_check("risk_demo", config)
