import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from picodim.algebra import build_matrix_algebra, build_ut_algebra
from picodim.asymptotics import (
    AsymptoticParams,
    conjecture_report,
    fit_t,
    predicted_t,
    regev_beckner_lhs,
    regev_beckner_lhs_loggamma,
    regev_beckner_ratio,
    regev_beckner_rhs,
)
from picodim.errors import ContractError

RB_CASES = [((1, 4), (0, Fraction(-3, 2))), ((1, 1), (Fraction(-1, 2), Fraction(-1, 2)))]


def test_predicted_t_examples():
    assert predicted_t(1, 4, 0) == Fraction(-3, 2)
    assert predicted_t(2, 2, 1) == 1
    assert predicted_t(2, 5, 1) == Fraction(-1, 2)
    with pytest.raises(ContractError):
        predicted_t(2, 1, 0)


@given(st.integers(1, 6), st.integers(0, 30), st.integers(0, 5))
def test_predicted_t_half_integer(q, extra, s):
    t = predicted_t(q, q + extra, s)
    assert (2 * t).denominator == 1


def test_params_validation():
    with pytest.raises(ContractError):
        AsymptoticParams((1, 0), (0, 0))
    with pytest.raises(ContractError):
        AsymptoticParams((1,), (0, 0))
    p = AsymptoticParams((1, 4), (0, Fraction(-3, 2)))
    assert p.k_total == 5 and p.r_total == Fraction(-3, 2)


def test_single_block_is_exact():
    p = AsymptoticParams((3,), (Fraction(1, 2),))
    for n in (1, 7, 40):
        lhs = regev_beckner_lhs(p, n)
        with mpmath.workprec(128):
            expected = mpmath.sqrt(n) * mpmath.mpf(3) ** n
            assert mpmath.almosteq(lhs, expected, rel_eps=mpmath.mpf(2) ** -120)
            assert mpmath.almosteq(lhs, regev_beckner_rhs(p, n), rel_eps=mpmath.mpf(2) ** -120)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(2, 60))
def test_binomial_case(k1, k2, n):
    p = AsymptoticParams((k1, k2), (0, 0))
    exact = (k1 + k2) ** n - k1 ** n - k2 ** n
    with mpmath.workprec(128):
        assert mpmath.almosteq(regev_beckner_lhs(p, n), exact, rel_eps=mpmath.mpf(2) ** -120)


def test_rhs_unit_weights():
    p = AsymptoticParams((1, 1), (0, 0))
    for n in (5, 30):
        assert regev_beckner_rhs(p, n) == 2 ** n == regev_beckner_lhs(p, n) + 2


@pytest.mark.parametrize("k,r", RB_CASES)
def test_two_routes_agree(k, r):
    p = AsymptoticParams(k, r)
    for n in (50, 400):
        a = regev_beckner_lhs(p, n, 160)
        b = regev_beckner_lhs_loggamma(p, n, 160)
        assert mpmath.almosteq(a, b, rel_eps=mpmath.mpf(10) ** -30)


@pytest.mark.parametrize("k,r", RB_CASES)
def test_ratio_moves_to_one(k, r, golden):
    p = AsymptoticParams(k, r)
    gaps = [abs(regev_beckner_ratio(p, n) - 1) for n in (50, 100, 200, 400)]
    assert all(x > y for x, y in zip(gaps, gaps[1:]))
    label = [lab for lab in golden["regev_beckner"] if lab.startswith(f"k={k[0]},{k[1]}")][0]
    frozen = golden["regev_beckner"][label]
    for n in (50, 100, 200, 400):
        assert mpmath.almosteq(regev_beckner_ratio(p, n), mpmath.mpf(frozen["ratios"][str(n)]), rel_eps=1e-15)
    assert gaps[-1] < frozen["final_gap_threshold"]


@given(st.fractions(min_value=-3, max_value=3, max_denominator=2), st.integers(1, 5),
       st.floats(min_value=0.1, max_value=10))
def test_fit_recovers_power_law(t, d, c):
    recs = [(n, c * n ** float(t) * d ** n) for n in range(3, 12)]
    fit = fit_t(recs, d, (3, 11))
    assert abs(fit.t_hat - float(t)) < 1e-9
    assert abs(fit.c_hat - c) < 1e-9 * max(1, c)
    assert all(abs(s - float(t)) < 1e-9 for _, s in fit.slopes)


def test_fit_errors():
    with pytest.raises(ContractError):
        fit_t([(1, 1), (2, 2)], 2, (5, 9))
    with pytest.raises(ContractError):
        fit_t([(1, 0), (2, 2)], 2, (1, 2))


def test_fit_ut11_golden(golden):
    vals = golden["codim"]["UT(1,1)"]
    fit = fit_t([(n + 1, c) for n, c in enumerate(vals)], 2, (5, 9), Fraction(1))
    assert fit.to_dict() == golden["fit_ut11"]


def test_report_for_constant_algebra():
    rep = conjecture_report(build_matrix_algebra(1), 8)
    assert rep.predicted_t == 0 and rep.exp == 1
    assert [r.c_n for r in rep.codim] == [1] * 8
    assert all(x == 1 for _, x in rep.ratios)
    assert rep.fit.t_hat == 0


def test_report_examples():
    rep = conjecture_report(build_matrix_algebra(2), 6)
    assert rep.predicted_t == Fraction(-3, 2) and rep.exp == 4
    d = rep.to_dict(timing=False)
    assert set(d) >= {"algebra", "dim", "q", "block_dims", "exp", "par", "predicted_t",
                      "kemer_status", "codim", "fit", "ratios"}
    assert d["predicted_t"] == "-3/2"
    rep = conjecture_report(build_ut_algebra([1, 1]), 7)
    assert rep.predicted_t == 1 and rep.exp == 2
    assert not any("verified" in n for n in rep.notes)


def test_report_is_deterministic():
    a = build_ut_algebra([1, 1])
    one = conjecture_report(a, 6, seed=4).to_json(timing=False)
    two = conjecture_report(a, 6, seed=4).to_json(timing=False)
    assert one == two
