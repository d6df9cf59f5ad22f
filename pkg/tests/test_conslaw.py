import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlab.conslaw import (
    ConservedVector, adjoint_equation, conserved_vector, divergence, divergence_onshell,
    equation, formal_lagrangian, multipliers, refinement_study, self_adjointness,
    variational_derivative,
)
from symlab.errors import JetCapacityError
from symlab.lie import G1, G2, G3, AlgebraElement
from symlab.symcore import (
    LAMBDA, T, U, V, X, Const, Sym, jet, normalize, parse, to_infix, total_derivative,
)

u, v, lam = Sym(U), Sym(V), Sym(LAMBDA)


def same(a, b):
    return not normalize(a - b).poly


FIRST_ORDER = [Sym(X), Sym(T), u, v, Sym(jet("u", 0, 1)), Sym(jet("u", 1, 0))]


@st.composite
def first_order_polys(draw):
    e = Const(draw(st.integers(-3, 3)))
    for _ in range(draw(st.integers(1, 3))):
        term = Const(draw(st.integers(-3, 3)))
        for i in draw(st.lists(st.integers(0, len(FIRST_ORDER) - 1), min_size=1, max_size=3)):
            term = term * FIRST_ORDER[i]
        e = e + term
    return normalize(e)


rationals = st.fractions(min_value=-10, max_value=10, max_denominator=9)


# ---------------------------------------------------------------------------
# Euler operator and the adjoint equation

@given(first_order_polys(), st.sampled_from(["t", "x"]))
@settings(max_examples=40, deadline=None)
def test_euler_operator_annihilates_total_derivatives(P, var):
    assert not variational_derivative(total_derivative(P, var)).poly


def test_variational_derivative_examples():
    assert same(variational_derivative(parse("v*u_t")), parse("-v_t"))
    assert same(variational_derivative(parse("-v*u_xx")), parse("-v_xx"))
    assert same(variational_derivative(parse("u^2*u_x^2")), parse("-2*u*u_x^2 - 2*u^2*u_xx"))


def test_variational_derivative_capacity():
    with pytest.raises(JetCapacityError):
        variational_derivative(parse("v*u_xxx"))


def test_adjoint_equation():
    assert same(formal_lagrangian(), v * equation())
    assert same(adjoint_equation(), parse("-v_t - v_xx - lambda*v + 3*lambda*u^2*v"))


# ---------------------------------------------------------------------------
# self-adjointness probes

def test_strict_self_adjointness_fails():
    p = self_adjointness("strict")
    assert not p.holds
    assert to_infix(p.multiplier) == "-1"
    obstruction = {to_infix(e) for e in p.obstruction}
    assert obstruction == {"2*lambda*u - 4*lambda*u^3", "2"}


def test_quasi_self_adjointness_forces_trivial_substitution():
    p = self_adjointness("quasi")
    assert not p.holds
    assert to_infix(p.multiplier) == "-h_u(u)"
    assert "2*h_u(u)" in {to_infix(e) for e in p.obstruction}
    assert any("forces h_u(u) = 0" in s for s in p.steps)
    assert "v = 0" in p.steps[-1]


def test_nonlinear_self_adjointness_fails():
    p = self_adjointness("nonlinear")
    assert not p.holds
    assert to_infix(p.multiplier) == "-h_u(t,x,u)"
    assert "2*h_u(t,x,u)" in {to_infix(e) for e in p.obstruction}
    assert "v = 0" in p.steps[-1]


def test_probe_json_and_bad_kind():
    assert self_adjointness("strict").to_json()["verdict"] == "fails"
    with pytest.raises(ValueError):
        self_adjointness("weak")


# ---------------------------------------------------------------------------
# conserved vectors

def test_translation_conserved_vectors():
    c1 = conserved_vector(G1)
    assert same(c1.Tt, parse("-v*u_x"))
    assert same(c1.Tx, parse("v*u_t - u_x*v_x - lambda*u*v + lambda*u^3*v"))
    c2 = conserved_vector(G2)
    assert same(c2.Tt, parse("-v*u_xx - lambda*u*v + lambda*u^3*v"))
    assert same(c2.Tx, parse("v*u_tx - u_t*v_x"))


@pytest.mark.parametrize("G", [G1, G2])
def test_translations_conserved_onshell(G):
    rep = divergence_onshell(conserved_vector(G))
    assert rep.conserved and rep.certificate == "canonical"
    assert rep.order_invariant and not rep.remainder.poly


@given(rationals, rationals)
@settings(max_examples=15, deadline=None)
def test_conserved_vector_linear_in_generator(a, b):
    F = AlgebraElement.of(a, b, 0).field
    cv = conserved_vector(F)
    c1, c2 = conserved_vector(G1), conserved_vector(G2)
    assert same(cv.Tt, Const(a) * c1.Tt + Const(b) * c2.Tt)
    assert same(cv.Tx, Const(a) * c1.Tx + Const(b) * c2.Tx)
    assert divergence_onshell(cv).conserved


def test_scaling_leaves_reaction_remainder():
    rep = divergence_onshell(conserved_vector(G3))
    assert not rep.conserved
    assert same(rep.remainder, parse("-2*lambda*u*v + 2*lambda*u^3*v"))


def test_negative_control_not_conserved():
    junk = ConservedVector(u, Const(0), Const(0), "junk")
    rep = divergence_onshell(junk)
    assert not rep.conserved
    assert same(rep.remainder, parse("u_xx + lambda*u - lambda*u^3"))


@pytest.mark.parametrize("G", [G1, G2])
def test_multipliers_reconstruct_divergence(G):
    div = divergence(conserved_vector(G))
    L1, L2 = multipliers(div)
    assert same(div, L1 * equation() + L2 * adjoint_equation())


def test_no_multipliers_for_scaling():
    assert multipliers(divergence(conserved_vector(G3))) is None


def test_numeric_divergence_converges_at_second_order():
    rep = refinement_study(conserved_vector(G1))
    assert all(r >= 3 for r in rep["ratios"])
    assert rep["max_divergence"][-1] < 1e-5


def test_numeric_divergence_second_translation():
    rep = refinement_study(conserved_vector(G2), spacings=(1 / 32, 1 / 64))
    assert rep["ratios"][0] >= 3
