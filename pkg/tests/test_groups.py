import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlab.errors import DomainError
from symlab.groups import (
    ACTION_IDS, apply_action, catalogue, catalogue_matches_flow, compare_printed, flow,
    get_action, grid_residual, parse_grid, soliton, transform_solution,
)
from symlab.lie import AlgebraElement
from symlab.symcore import T, X, Sym, is_zero, normalize, substitute

GRID = (-2.0, 2.0, 41)


def test_catalogue_ids():
    assert tuple(catalogue()) == ACTION_IDS


def test_catalogue_matches_flows():
    assert all(catalogue_matches_flow().values())
    assert all(catalogue_matches_flow(Fraction(3)).values())


@pytest.mark.parametrize("name", ["Xi1", "Xi2", "Xi3", "Xi4", "Xi5", "Xi6", "Xi7"])
def test_generator_is_derivative_at_identity(name):
    a = get_action(name)
    F = a.element.field
    for g, c in zip(a.generator(), (F.omega, F.psi, F.chi)):
        assert is_zero(normalize(g - c))


@pytest.mark.parametrize("name", ["Xi1", "Xi3", "Xi5", "Xi6", "Xi7"])
@given(e1=st.floats(-1, 1), e2=st.floats(-1, 1), px=st.floats(-2, 2), pt=st.floats(0, 2))
@settings(max_examples=25, deadline=None)
def test_one_parameter_group_law(name, e1, e2, px, pt):
    a = get_action(name)
    once = apply_action(a, e1 + e2, (px, pt, 0.3))
    twice = apply_action(a, e2, apply_action(a, e1, (px, pt, 0.3)))
    assert np.allclose(once, twice, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("name", ["Xi1", "Xi2", "Xi3", "Xi4", "Xi5", "Xi6", "Xi7"])
def test_inverse_undoes_action(name):
    a = get_action(name)
    ix, it = a.inverse()
    xb, tb, _ = a.image
    back_x = substitute(ix, {X: xb}, resolve=False)
    back_t = substitute(it, {T: tb}, resolve=False)
    assert is_zero(normalize(back_x - Sym(X)))
    assert is_zero(normalize(back_t - Sym(T)))


def test_flow_of_combination():
    f = flow(AlgebraElement.of(1, 0, 1))
    assert all(is_zero(normalize(p - q)) for p, q in zip(f.image, get_action("Xi5").image))


# ---------------------------------------------------------------------------
# soliton

@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_soliton_residual_on_grid(lam):
    rep = grid_residual(soliton(lam), GRID)
    assert rep["finite"] and rep["max_residual"] < 1e-10


def test_soliton_against_independent_formula():
    lam = 2.0
    xs = np.linspace(-2, 2, 11)
    XX, TT = np.meshgrid(xs, xs, indexing="ij")
    delta = math.sqrt(lam / 2)
    expected = -0.5 * (1 + np.tanh(delta / 2 * XX + 0.75 * lam * TT))
    assert np.allclose(soliton(lam)(XX, TT), expected, atol=1e-15)


def test_soliton_residual_by_finite_differences():
    lam, h = 2.0, 1e-4
    F = soliton(lam)
    x0, t0 = 0.3, 0.2
    ut = (F(x0, t0 + h) - F(x0, t0 - h)) / (2 * h)
    uxx = (F(x0 + h, t0) - 2 * F(x0, t0) + F(x0 - h, t0)) / h ** 2
    u0 = F(x0, t0)
    assert abs(ut - uxx + lam * (u0 ** 3 - u0)) < 1e-6


def test_soliton_domain():
    with pytest.raises(DomainError):
        soliton(0)
    with pytest.raises(DomainError):
        soliton(-1.0)


@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("name", ["Xi1", "Xi2", "Xi4"])
@pytest.mark.parametrize("eps", [0.3, 1.0])
def test_symmetry_images_stay_exact(lam, name, eps):
    F = transform_solution(get_action(name), eps, soliton(lam))
    assert grid_residual(F, GRID)["max_residual"] < 1e-10


def test_translation_image_is_shifted_soliton():
    F = transform_solution(get_action("Xi1"), 0.3, soliton(2.0))
    base = soliton(2.0)
    assert np.isclose(F(0.5, 0.1), base(0.2, 0.1))


@pytest.mark.parametrize("lam", [0.5, 2.0])
def test_scaling_image_is_not_a_solution(lam):
    F = transform_solution(get_action("Xi3"), 1.0, soliton(lam))
    assert grid_residual(F, GRID)["max_residual"] > 1e-3


def test_double_transform_uses_independent_parameters():
    once = transform_solution(get_action("Xi1"), 0.5, soliton(2.0))
    twice = transform_solution(get_action("Xi1"), 0.25, once)
    assert np.isclose(twice(1.0, 0.2), soliton(2.0)(0.25, 0.2))


def test_infinite_family_adds_q():
    q = normalize(Sym(X) * Sym(T))
    a = get_action("Xiq", q=q)
    F = transform_solution(a, 1.0, soliton(2.0))
    assert np.isclose(F(0.5, 0.5), soliton(2.0)(0.5, 0.5) + 0.25)


def test_compare_printed_reports_mismatch():
    cmp = compare_printed(2.0, 1.0)
    assert cmp["Xi3"]["max_difference"] > 1e-2
    assert cmp["Xi3"]["printed_max_residual"] > 1e-3
    assert cmp["Xi3"]["computed_max_residual"] > 1e-3


# ---------------------------------------------------------------------------
# grid parsing

def test_parse_grid():
    assert parse_grid("-2:2:41") == (-2.0, 2.0, 41)
    for bad in ("1:2", "2:1:5", "0:1:1", "a:b:c"):
        with pytest.raises(ValueError):
            parse_grid(bad)


def test_grid_residual_reports_samples():
    rep = grid_residual(soliton(1.0), (-1.0, 1.0, 5), n_samples=3)
    assert len(rep["sample_values"]) == 9
    assert rep["grid"] == [-1.0, 1.0, 5]

