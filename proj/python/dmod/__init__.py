"""Exact series solutions of linear differential and difference operators."""

import json
from fractions import Fraction

from . import _dmod
from ._dmod import DmodError

__all__ = ["DmodError", "parse_operator", "solve", "indicial", "heun_eigen", "difference_bessel", "run_fixture"]


def _rational(obj):
    return Fraction(int(obj["num"]), int(obj["den"]))


def _decode(obj):
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            return _rational(obj)
        if set(obj) == {"num", "den", "power"}:
            return {"power": obj["power"], "value": _rational(obj)}
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def _params(params):
    if isinstance(params, dict):
        return ",".join(f"{k}={v}" for k, v in params.items())
    return params or ""


def parse_operator(text, params=None):
    """Normal-ordered form of a DSL operator as text."""
    return _dmod.parse_operator(text, _params(params))


def solve(operator, divisor="d", order="standard", seed="1", precision=16, params=None, pair="xd"):
    """Run the Newton iteration; returns the series as {power: Fraction} plus diagnostics."""
    raw = _decode(json.loads(_dmod.solve(operator, divisor, order, seed, precision, _params(params), pair)))
    series = raw["series"]
    raw["coefficients"] = {t["power"]: t["value"] for t in series["coefficients"]}
    return raw


def indicial(operator, params=None):
    return _decode(json.loads(_dmod.indicial(operator, _params(params))))


def heun_eigen(variant, a, alpha, beta, gamma, delta, epsilon, digits=50):
    args = [str(v) for v in (a, alpha, beta, gamma, delta, epsilon)]
    return _decode(json.loads(_dmod.heun_eigen(variant, *args, digits)))


def difference_bessel(n, x):
    return Fraction(_dmod.difference_bessel(n, x))


def run_fixture(path):
    return _decode(json.loads(_dmod.run_fixture(str(path))))
