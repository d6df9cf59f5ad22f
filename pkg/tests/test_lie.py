from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from symlab.errors import NonClosureError
from symlab.lie import (
    BASIS, CI, G1, G2, G3, AlgebraElement, Move, VectorField, adjoint_action,
    adjoint_action_numeric, adjoint_matrix, adjoint_table, canonical_set, check_symmetry,
    commutator, commutator_table, determining_equations, express_in_basis, field_family,
    infinite_field, invariance_residual, optimal_representative, prolong2, replay_exact,
    replay_numeric,
)
from symlab.symcore import LAMBDA, T, U, X, Const, Func, Sym, jet, normalize, parse, to_infix

x, t, u, lam = Sym(X), Sym(T), Sym(U), Sym(LAMBDA)


def same(a, b):
    return not normalize(a - b).poly


@st.composite
def point_polys(draw):
    atoms = [x, t, u]
    e = Const(draw(st.integers(-3, 3)))
    for _ in range(draw(st.integers(0, 3))):
        term = Const(draw(st.integers(-3, 3)))
        for i in draw(st.lists(st.integers(0, 2), min_size=1, max_size=2)):
            term = term * atoms[i]
        e = e + term
    return normalize(e)


@st.composite
def fields(draw):
    return VectorField(draw(point_polys()), draw(point_polys()), draw(point_polys()))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


# ---------------------------------------------------------------------------
# vector fields and prolongation

def test_vector_field_rejects_jet_components():
    with pytest.raises(ValueError):
        VectorField(Sym(jet("u", 0, 1)), Const(0), Const(0))


def test_prolongation_of_scaling():
    P = prolong2(G3)
    # u_x scales with weight -1, u_t and u_xx with weight -2
    assert same(P.apply(Sym(jet("u", 0, 1))), -Sym(jet("u", 0, 1)))
    assert same(P.apply(Sym(jet("u", 1, 0))), -2 * Sym(jet("u", 1, 0)))
    assert same(P.apply(Sym(jet("u", 0, 2))), -2 * Sym(jet("u", 0, 2)))


def test_prolongation_of_dilation_in_u():
    P = prolong2(VectorField(Const(0), Const(0), u))
    for c in (jet("u", 1, 0), jet("u", 0, 1), jet("u", 0, 2), jet("u", 1, 1)):
        assert same(P.apply(Sym(c)), Sym(c))


# ---------------------------------------------------------------------------
# invariance

def test_translations_are_symmetries():
    for G in (G1, G2):
        rep = check_symmetry(G, CI)
        assert rep.is_symmetry and rep.certificate == "canonical"
        assert to_infix(rep.residual_onshell) == "0"


def test_scaling_residual_matches_hand_derivation():
    # G3^(2) acting on u_t - u_xx + lambda(u^3 - u) gives -2(u_t - u_xx) = 2 lambda (u^3 - u)
    rep = check_symmetry(G3, CI)
    assert not rep.is_symmetry
    assert same(rep.residual_onshell, 2 * lam * (u ** 3 - u))
    assert same(rep.residual_preshell, parse("-2*u_t + 2*u_xx"))


def test_infinite_generator_gives_linearised_equation():
    q = Func("q", (T, X))
    res = invariance_residual(infinite_field(q))
    expected = normalize(Func("q", (T, X), (1, 0)) - Func("q", (T, X), (0, 2))
                         + lam * (3 * u ** 2 - 1) * q)
    assert same(res, expected)


def test_invariance_residual_json_fields():
    rep = check_symmetry(G3, CI).to_json()
    assert set(rep) == {"field", "residual_preshell", "residual_onshell", "is_symmetry",
                        "certificate"}


def test_family_determining_equations_force_translations():
    eqs = {to_infix(m): c for m, c in determining_equations(field_family(), CI, split_u=True)}
    assert set(eqs) == {"1", "u", "u^2", "u^3", "u_x", "u_xx"}
    # constants A, B with P = Q = 0 satisfy every equation
    trans = field_family(Const(5), Const(3), Const(0), Const(0))
    assert all(not c.poly for _, c in determining_equations(trans, CI, split_u=True))
    # the scaling A = 2t, B = x fails only through the reaction terms
    scal = field_family(2 * t, x, Const(0), Const(0))
    bad = {to_infix(m) for m, c in determining_equations(scal, CI, split_u=True) if c.poly}
    assert bad == {"u", "u^3"}


@given(rationals, rationals)
@settings(max_examples=20, deadline=None)
def test_translation_combinations_are_symmetries(a, b):
    F = AlgebraElement.of(a, b, 0).field
    assert check_symmetry(F, CI).is_symmetry


# ---------------------------------------------------------------------------
# algebra

def test_commutator_table():
    tab = commutator_table().to_json()["table"]
    assert tab["[G1,G3]"] == "G1"
    assert tab["[G2,G3]"] == "2*G2"
    assert tab["[G3,G1]"] == "-G1"
    assert tab["[G3,G2]"] == "-2*G2"
    for k in ("[G1,G1]", "[G1,G2]", "[G2,G1]", "[G2,G2]", "[G3,G3]"):
        assert tab[k] == "0"
    assert commutator_table().jacobi_holds()


def test_express_in_basis_rejects_outside_fields():
    with pytest.raises(NonClosureError):
        express_in_basis(VectorField(x ** 2, Const(0), Const(0)))
    with pytest.raises(NonClosureError):
        express_in_basis(infinite_field())


@given(fields(), fields())
@settings(max_examples=40, deadline=None)
def test_commutator_antisymmetric(A, B):
    assert (commutator(A, B) + commutator(B, A)).is_zero()


@given(fields(), fields(), fields())
@settings(max_examples=40, deadline=None)
def test_jacobi_identity(A, B, C):
    s = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) \
        + commutator(C, commutator(A, B))
    assert s.is_zero()


def test_adjoint_closed_forms():
    tab = adjoint_table()
    assert str(tab[(0, 2)]) == "-eps*G1 + G3"
    assert str(tab[(1, 2)]) == "-2*eps*G2 + G3"
    assert str(tab[(2, 0)]) == "exp(eps)*G1"
    assert str(tab[(2, 1)]) == "exp(2*eps)*G2"
    for i in range(3):
        assert str(tab[(i, i)]) == ("G1", "G2", "G3")[i]


def _ad_matrices():
    """ad_i as 3x3 matrices from the structure constants (independent oracle)."""
    C = commutator_table().structure_constants()
    return [C[:, i, :] for i in range(3)]


@given(st.integers(0, 2), st.floats(-2, 2))
@settings(max_examples=30, deadline=None)
def test_adjoint_matrix_matches_exponential_of_ad(i, eps):
    # Ad(exp(eps A)) = exp(-eps ad_A) in the B - eps [A, B] + ... convention
    oracle = expm(-eps * _ad_matrices()[i])
    assert np.allclose(adjoint_matrix(i, eps), oracle, atol=1e-12)


@given(st.integers(0, 2), st.integers(0, 2), st.floats(-1, 1))
@settings(max_examples=30, deadline=None)
def test_adjoint_action_numeric_matches_table(i, j, eps):
    closed = adjoint_table()[(i, j)].numeric(eps=eps)
    assert np.allclose(adjoint_action_numeric(BASIS[i], BASIS[j], eps), closed, atol=1e-12)


def test_adjoint_action_symbolic():
    F = adjoint_action(G3, G1)
    assert str(AlgebraElement(express_in_basis(F))) == "exp(eps)*G1"


# ---------------------------------------------------------------------------
# optimal system

def test_canonical_set():
    assert [str(c) for c in canonical_set()] == ["G3", "G1", "G2", "G1 + G2", "G1 - G2"]


def test_representative_example():
    res = optimal_representative((3, -2, 5))
    assert res.label == "G3"
    assert [(m.generator, m.a) for m in res.word] == [("G1", Fraction(-3, 5)),
                                                     ("G2", Fraction(1, 5))]
    assert res.scale == Fraction(1, 5)


def test_zero_element_rejected():
    with pytest.raises(ValueError):
        optimal_representative((0, 0, 0))


vectors = st.tuples(rationals, rationals, rationals).filter(any)


@given(vectors)
@settings(max_examples=200, deadline=None)
def test_representative_lands_in_canonical_set(v):
    res = optimal_representative(v)
    canon = {c.rational() for c in canonical_set()}
    assert res.representative in canon
    assert replay_exact(res) == res.representative
    assert np.max(np.abs(replay_numeric(res) - np.array(res.representative, float))) < 1e-10
    if v[2] != 0:
        assert res.label == "G3"


@given(vectors, st.sampled_from(["G1", "G2", "G3"]), rationals.filter(lambda a: a > 0),
       rationals.filter(lambda c: c != 0))
@settings(max_examples=200, deadline=None)
def test_representative_constant_on_orbits(v, gen, a, c):
    moved = Move(gen, a).apply(tuple(Fraction(z) for z in v))
    scaled = tuple(c * z for z in moved)
    assert optimal_representative(v).representative == \
        optimal_representative(scaled).representative


def test_representatives_are_fixed_points():
    for c in canonical_set():
        res = optimal_representative(c.rational())
        assert res.representative == c.rational()
        assert res.word == () and res.scale == 1
