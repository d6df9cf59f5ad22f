from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlab.errors import (
    CyclicBindingError, JetCapacityError, ParseError, UnboundCoordinateError,
)
from symlab.symcore import (
    JET_ORDER, LAMBDA, T, U, X, Const, Sym, eval_numeric, exp, from_json, is_zero, jet,
    normalize, parse, partial_derivative, sech, sqrt, substitute, tanh, to_infix, to_json,
    total_derivative,
)

ATOMS = [Sym(X), Sym(T), Sym(U), Sym(LAMBDA), Sym(jet("u", 0, 1)), Sym(jet("u", 1, 0)),
         Sym(jet("u", 0, 2)), Sym(jet("u", 1, 1))]


@st.composite
def polynomials(draw, max_terms=4):
    e = Const(Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))))
    for _ in range(draw(st.integers(0, max_terms))):
        coef = Const(Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4))))
        term = coef
        for i in draw(st.lists(st.integers(0, len(ATOMS) - 1), min_size=1, max_size=3)):
            term = term * ATOMS[i]
        e = e + term
    return normalize(e)


def same(a, b):
    return not normalize(a - b).poly


# ---------------------------------------------------------------------------
# canonical form

def test_normalize_collects_like_terms():
    assert to_infix(normalize(parse("x*u + u*x - 2*x*u"))) == "0"
    assert same(parse("(x + 1)^2"), parse("x^2 + 2*x + 1"))


def test_exact_rational_coefficients():
    e = normalize(parse("1/3*x + 1/6*x"))
    assert to_infix(e) == "1/2*x"


@given(polynomials())
def test_normalize_idempotent(p):
    assert normalize(normalize(p)) == normalize(p)


@given(polynomials(), polynomials())
def test_addition_and_multiplication_commute(p, q):
    assert same(p + q, q + p)
    assert same(p * q, q * p)


@given(polynomials(), polynomials(), polynomials())
def test_distributivity(p, q, r):
    assert same(p * (q + r), p * q + p * r)


# ---------------------------------------------------------------------------
# derivatives

def test_partial_derivative_of_tanh():
    assert to_infix(partial_derivative(tanh(Sym(X)), X)) == "1 - tanh(x)^2"


def test_partial_derivative_of_opaque_function():
    from symlab.symcore import Func

    q = Func("q", (T, X))
    assert to_infix(partial_derivative(q, X)) == "q_x(t,x)"


def test_total_derivative_chain_rule():
    e = total_derivative(parse("u^2*u_x"), "t")
    assert same(e, parse("u^2*u_tx + 2*u*u_x*u_t"))


def test_jet_capacity():
    assert JET_ORDER == 4
    with pytest.raises(JetCapacityError):
        total_derivative(parse("u_xxxx"), "x")


@given(polynomials(), polynomials())
def test_total_derivative_is_linear_and_leibniz(p, q):
    for var in ("t", "x"):
        assert same(total_derivative(p + q, var),
                    total_derivative(p, var) + total_derivative(q, var))
        assert same(total_derivative(p * q, var),
                    total_derivative(p, var) * q + p * total_derivative(q, var))


@given(polynomials())
def test_total_derivatives_commute(p):
    a = total_derivative(total_derivative(p, "t"), "x")
    b = total_derivative(total_derivative(p, "x"), "t")
    assert same(a, b)


@given(st.floats(-2, 2), st.floats(-2, 2))
@settings(max_examples=30)
def test_derivative_matches_finite_difference(x0, t0):
    e = normalize(tanh(Sym(X) * Sym(T)) + exp(Sym(X)) * Sym(T) ** 2)
    d = partial_derivative(e, X)
    h = 1e-6
    fd = (eval_numeric(e, {X: x0 + h, T: t0}) - eval_numeric(e, {X: x0 - h, T: t0})) / (2 * h)
    assert abs(eval_numeric(d, {X: x0, T: t0}) - fd) < 1e-6


# ---------------------------------------------------------------------------
# zero testing

def test_is_zero_canonical_certificate():
    z = is_zero(parse("x^2 - x*x"))
    assert z and z.certificate == "canonical"


def test_is_zero_sampled_identity():
    z = is_zero(normalize(tanh(Sym(X)) ** 2 + sech(Sym(X)) ** 2 - Const(1)))
    assert z and z.certificate == "sampled"


def test_is_zero_rejects_nonzero():
    z = is_zero(normalize(tanh(Sym(X)) - Sym(X)))
    assert not z


def test_sqrt_squares_back():
    assert is_zero(normalize(sqrt(Sym(LAMBDA)) ** 2 - Sym(LAMBDA)))


# ---------------------------------------------------------------------------
# substitution and evaluation

def test_substitute():
    assert same(substitute(parse("u*x"), {U: parse("x^2")}), parse("x^3"))


def test_cyclic_binding():
    with pytest.raises(CyclicBindingError):
        substitute(parse("x"), {X: parse("t"), T: parse("x")})


def test_unbound_coordinate():
    with pytest.raises(UnboundCoordinateError):
        eval_numeric(parse("x*t"), {X: 1.0})


def test_eval_numeric_broadcasts():
    xs = np.linspace(0, 1, 5)
    out = eval_numeric(parse("x^2 + 1"), {X: xs})
    assert np.allclose(out, xs ** 2 + 1)


# ---------------------------------------------------------------------------
# serialization

def test_parse_error():
    with pytest.raises(ParseError):
        parse("x +* 2")


@given(polynomials())
def test_infix_roundtrip(p):
    assert same(parse(to_infix(p)), p)


@given(polynomials())
def test_json_roundtrip(p):
    assert same(from_json(to_json(p)), p)


def test_roundtrip_with_transcendental_atoms():
    e = normalize(tanh(Const(Fraction(1, 2)) * Sym(X) + Sym(T)) * exp(-Sym(T)))
    assert is_zero(normalize(parse(to_infix(e)) - e))
    assert is_zero(normalize(from_json(to_json(e)) - e))
