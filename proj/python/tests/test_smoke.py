from fractions import Fraction
from math import factorial
from pathlib import Path

import pytest

import dmod

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def rising(a, k):
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def test_airy_coefficients_match_closed_form():
    res = dmod.solve("D^2 - X", precision=30)
    assert res["converged"]
    coeffs = res["coefficients"]
    for k in range(10):
        assert coeffs.get(3 * k, 0) == 3**k * rising(Fraction(1, 3), k) / factorial(3 * k)
    assert res["residual_valuations"][:4] == [1, 4, 7, 10]


def test_bessel_frobenius_prefactor():
    res = dmod.solve("X^2*D^2 + X*D + X^2 - nu^2", divisor="xd:nu", order="graded",
                     precision=20, params={"nu": "1/3"})
    assert res["series"]["prefactor"]["exponent"] == Fraction(1, 3)
    assert res["coefficients"][2] == Fraction(-1, 4) / Fraction(4, 3)


def test_operator_text_is_normal_ordered():
    assert dmod.parse_operator("D*X - X*D") == "1"


def test_syntax_error_reports_byte_offset():
    with pytest.raises(dmod.DmodError, match="byte"):
        dmod.parse_operator("D^2 - (X")


def test_unbound_identifier_is_named():
    with pytest.raises(dmod.DmodError, match="'q'"):
        dmod.solve("D^2 - q*X")


def test_indicial_roots_of_bessel():
    res = dmod.indicial("X^2*D^2 + X*D + X^2 - 1/4")
    assert sorted(res["rational_roots"]) == [Fraction(-1, 2), Fraction(1, 2)]


def test_apparent_singularity_eigenvalue_is_exact():
    al, be, ga, e1 = Fraction(1, 3), Fraction(2, 5), Fraction(7, 4), Fraction(5, 2)
    a = e1 * (e1 - ga + 1) / ((e1 - al) * (e1 - be))
    qstar = al * be * (e1 + 1) * (e1 - ga + 1) / ((e1 - al) * (e1 - be))
    res = dmod.heun_eigen("heun", a, al, be, ga, al + be - ga + 2, -1)
    assert res["verified"]
    assert qstar in [e["qstar"] for e in res["eigen"]]
    match = next(e for e in res["eigen"] if e["qstar"] == qstar)
    assert match["e_list"] == [e1]


def test_difference_bessel_value():
    assert dmod.difference_bessel(0, 4) == Fraction(-13, 8)
    assert dmod.difference_bessel(1, 3) == Fraction(9, 8)


def test_gauss_fixture_passes():
    rep = dmod.run_fixture(FIXTURES / "gauss.json")
    assert rep["passed"], rep
