from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlab.errors import BlowUpError, DomainError
from symlab.reductions import (
    REDUCTION_GROUPS, cube_coefficient, first_order_exact, high_precision_solution, invariant,
    invariant_check, lowest_residual_order, ode_integrate, ode_residual_coefficients, reduce,
    rk4, series_error_slope, series_eval, series_first_order, series_second_order,
    series_traveling,
)
from symlab.symcore import to_infix

ETAS = np.linspace(-0.2, 0.2, 9)


# ---------------------------------------------------------------------------
# invariants and reduced equations

@pytest.mark.parametrize("group", REDUCTION_GROUPS)
def test_invariants_are_annihilated(group):
    assert invariant_check(invariant(group))
    assert invariant_check(invariant(group, Fraction(3)), Fraction(3))


def test_unknown_group():
    with pytest.raises(KeyError):
        invariant("Xi9")


def test_feasibility_pattern():
    feasible = {g: reduce(g).feasible for g in REDUCTION_GROUPS}
    assert feasible == {"Xi1": True, "Xi2": True, "Xi3": False, "Xi4": True,
                        "Xi5": False, "Xi6": False, "Xi7": False}


def test_time_invariant_gives_first_order_ode():
    r = reduce("Xi1")
    assert r.order == 1 and r.is_constant_coefficient()
    assert to_infix(r.equation()) == "f1 - lambda*f + lambda*f^3"


def test_space_invariant_gives_second_order_ode():
    r = reduce("Xi2")
    assert r.order == 2 and r.is_constant_coefficient()
    assert to_infix(r.equation()) == "-f2 - lambda*f + lambda*f^3"


@pytest.mark.parametrize("k", [Fraction(1), Fraction(2), Fraction(-1, 3)])
def test_traveling_wave_ode(k):
    r = reduce("Xi4", k)
    assert r.feasible and r.order == 2
    assert to_infix(r.c2) == str(-(k ** 2))
    assert to_infix(r.c1) == "1"


@pytest.mark.parametrize("group", ["Xi3", "Xi5", "Xi6", "Xi7"])
def test_infeasible_reductions_report_leftover(group):
    r = reduce(group)
    assert not r.feasible
    assert to_infix(r.leftover) != "0"
    assert r.to_json()["feasible"] is False


# ---------------------------------------------------------------------------
# series coefficients

def test_cube_coefficient_matches_numpy():
    c = [Fraction(1, 2), Fraction(3), Fraction(-1, 5), Fraction(2, 7)]
    cube = np.polynomial.polynomial.polypow([float(v) for v in c], 3)
    for n in range(len(c)):
        assert float(cube_coefficient(c, n)) == pytest.approx(cube[n])


def test_first_order_leading_coefficients():
    s = series_first_order(1, "0.5")
    assert s.coeffs[:3] == (Fraction(1, 2), Fraction(3, 8), Fraction(3, 64))
    assert s.exact and len(s.coeffs) == 21


def test_second_order_leading_coefficients():
    s = series_second_order(1, "0.5", 0)
    assert s.coeffs[2] == Fraction(-3, 16)
    assert s.coeffs[1] == 0


@pytest.mark.parametrize("eta", ["0.05", "-0.05"])
def test_first_order_series_matches_closed_form(eta):
    # at |eta| = 0.05 the truncation error of 21 terms is far below 1e-20
    s = series_first_order(1, "0.5")
    with mpmath.workdps(60):
        e = mpmath.mpf(eta)
        approx = sum(mpmath.mpf(c.numerator) / c.denominator * e ** n
                     for n, c in enumerate(s.coeffs))
        assert abs(approx - first_order_exact(1, 0.5, e)) < mpmath.mpf("1e-20")


@pytest.mark.parametrize("c0", [0, 1, -1])
def test_first_order_equilibria_are_constant(c0):
    s = series_first_order(1, c0)
    assert all(c == 0 for c in s.coeffs[1:])
    assert "equilibrium" in s.note


@pytest.mark.parametrize("c0", [0, 1, -1])
def test_second_order_equilibria_are_constant(c0):
    s = series_second_order(2, c0, 0)
    assert all(c == 0 for c in s.coeffs[1:])


def test_traveling_rejects_zero_speed():
    with pytest.raises(DomainError):
        series_traveling(1, 0, "0.5", 0)


def test_invalid_truncation():
    with pytest.raises(ValueError):
        series_first_order(1, "0.5", N=0)
    with pytest.raises(ValueError):
        series_second_order(1, "0.5", 0, N=1)


small = st.fractions(min_value=-2, max_value=2, max_denominator=8)


@given(small.filter(lambda v: v > 0), small, small, st.integers(2, 12),
       st.sampled_from(["first", "second", "traveling"]))
@settings(max_examples=40, deadline=None)
def test_truncated_series_residual_order(lam, c0, c1, N, kind):
    if kind == "first":
        s = series_first_order(lam, c0, N)
    elif kind == "second":
        s = series_second_order(lam, c0, c1, N)
    else:
        s = series_traveling(lam, Fraction(3, 2), c0, c1, N)
    order = lowest_residual_order(s)
    assert order is None or order >= N - 2


def test_residual_coefficients_are_exact():
    s = series_second_order(1, "0.5", 0, N=6)
    res = ode_residual_coefficients(s)
    assert all(isinstance(r, Fraction) for r in res)
    assert all(r == 0 for r in res[:5])


# ---------------------------------------------------------------------------
# numeric references

def test_series_agrees_with_rk4_first_order():
    s = series_first_order(1, "0.5")
    ode = reduce("Xi1")
    fwd = ode_integrate(ode, (0.5,), (0, 0.2), 1e-3, 1.0)
    bwd = ode_integrate(ode, (0.5,), (0, -0.2), 1e-3, 1.0)
    for e in ETAS:
        ref = fwd(e) if e >= 0 else bwd(e)
        assert abs(series_eval(s, float(e)) - ref) < 1e-8


def test_series_agrees_with_rk4_second_order():
    s = series_second_order(1, "0.5", 0)
    ode = reduce("Xi2")
    fwd = ode_integrate(ode, (0.5, 0.0), (0, 0.2), 1e-3, 1.0)
    bwd = ode_integrate(ode, (0.5, 0.0), (0, -0.2), 1e-3, 1.0)
    for e in ETAS:
        ref = fwd(e) if e >= 0 else bwd(e)
        assert abs(series_eval(s, float(e)) - ref) < 1e-8


def test_series_agrees_with_rk4_traveling():
    s = series_traveling(1, 2, "0.5", 0)
    ode = reduce("Xi4", 2)
    fwd = ode_integrate(ode, (0.5, 0.0), (0, 0.2), 1e-3, 1.0)
    assert abs(series_eval(s, 0.2) - fwd(0.2)) < 1e-8


@pytest.mark.parametrize("make", [
    lambda: series_first_order(1, "0.5"),
    lambda: series_second_order(1, "0.5", 0),
    lambda: series_traveling(1, 2, "0.5", 0),
])
def test_error_slope_reflects_truncation_order(make):
    assert series_error_slope(make())["slope"] >= 20


def test_high_precision_reference_matches_closed_form():
    ref = high_precision_solution("first", {"lambda": Fraction(1), "c0": Fraction(1, 2)})
    assert abs(float(ref(0.15)) - float(first_order_exact(1, 0.5, 0.15))) < 1e-30


def test_rk4_fourth_order_convergence():
    def rhs(e, y):
        return np.array([y[0]])

    errs = [abs(rk4(rhs, 0.0, [1.0], 1.0, h)(1.0) - np.e) for h in (0.1, 0.05)]
    assert 14 < errs[0] / errs[1] < 18


def test_rk4_blow_up():
    def rhs(e, y):
        return np.array([y[0] ** 2])

    with np.errstate(over="ignore"), pytest.raises(BlowUpError):
        rk4(rhs, 0.0, [1.0], 5.0, 0.01)


def test_integrating_infeasible_reduction_is_refused():
    with pytest.raises(DomainError):
        ode_integrate(reduce("Xi3"), (0.5, 0.0), (0, 0.1), 1e-3, 1.0)
