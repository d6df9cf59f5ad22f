"""Deterministic invariant suite run by ``symlab selftest``.

Each check returns (passed, detail).  Random draws come from a generator
seeded by SYMLAB_SEED so repeated runs print identical reports.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .conslaw import (
    ConservedVector, adjoint_equation, conserved_vector, divergence_onshell, refinement_study,
    self_adjointness,
)
from .groups import catalogue_matches_flow, get_action, grid_residual, soliton, transform_solution
from .lie import (
    CI, G1, G2, G3, AlgebraElement, adjoint_action_numeric, adjoint_table, canonical_set,
    check_symmetry, commutator, commutator_table, infinite_field, optimal_representative,
    replay_exact, replay_numeric,
)
from .reductions import (
    REDUCTION_GROUPS, invariant, invariant_check, lowest_residual_order, ode_integrate, reduce,
    series_eval, series_first_order, series_second_order, series_traveling,
)
from .symcore import (
    LAMBDA, U, Const, Sym, T, X, from_json, jet, normalize, parse, tanh,
    to_infix, to_json, total_derivative,
)
from .symcore.numeric import default_seed


def _rng():
    return np.random.default_rng(default_seed())


def _random_poly(rng, n_terms=4):
    atoms = [Sym(X), Sym(T), Sym(U), Sym(jet("u", 0, 1)), Sym(jet("u", 1, 0))]
    e = Const(0)
    for _ in range(n_terms):
        term = Const(Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))))
        for a in rng.choice(len(atoms), size=2):
            term = term * atoms[int(a)]
        e = e + term
    return normalize(e)


# ---------------------------------------------------------------------------
# symcore

def check_total_derivatives_commute():
    rng = _rng()
    for _ in range(10):
        p = _random_poly(rng)
        d = total_derivative(total_derivative(p, "t"), "x") - total_derivative(
            total_derivative(p, "x"), "t")
        if normalize(d).poly:
            return False, f"D_t D_x != D_x D_t on {to_infix(p)}"
    return True, "10 random polynomials"


def check_serialization_roundtrip():
    rng = _rng()
    exprs = [_random_poly(rng) for _ in range(10)]
    exprs.append(normalize(tanh(Sym(X) * Const(Fraction(1, 2)) + Sym(T))))
    for e in exprs:
        if normalize(from_json(to_json(e)) - e).poly or normalize(parse(to_infix(e)) - e).poly:
            return False, f"round trip failed for {to_infix(e)}"
    return True, f"{len(exprs)} expressions through JSON and infix"


# ---------------------------------------------------------------------------
# lie

def check_translations_are_symmetries():
    reps = [check_symmetry(G, CI, G.name) for G in (G1, G2)]
    ok = all(r.is_symmetry and r.certificate == "canonical" for r in reps)
    return ok, ", ".join(f"{r.field}: {to_infix(r.residual_onshell)}" for r in reps)


def check_scaling_residual():
    r = check_symmetry(G3, CI, "G3")
    lam, u = Sym(LAMBDA), Sym(U)
    expected = normalize(2 * lam * (u ** 3 - u))
    ok = not r.is_symmetry and not normalize(r.residual_onshell - expected).poly
    return ok, f"G3 on-shell residual {to_infix(r.residual_onshell)}"


def check_infinite_generator_condition():
    r = check_symmetry(infinite_field(), CI, "Gq")
    return not r.is_symmetry, f"Gq residual {to_infix(r.residual_onshell)}"


def check_commutator_table():
    tab = commutator_table()
    j = tab.to_json()["table"]
    expected = {"[G1,G3]": "G1", "[G2,G3]": "2*G2", "[G3,G1]": "-G1", "[G3,G2]": "-2*G2",
                "[G1,G2]": "0", "[G2,G1]": "0"}
    bad = [k for k, v in expected.items() if j[k] != v]
    return not bad and tab.jacobi_holds(), "mismatched: " + (", ".join(bad) or "none")


def check_jacobi_random_fields():
    from .lie import VectorField

    rng = _rng()
    for _ in range(20):
        fs = [VectorField(*(_random_point_poly(rng) for _ in range(3))) for _ in range(3)]
        A, B, C = fs
        s = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) \
            + commutator(C, commutator(A, B))
        if not s.is_zero():
            return False, "Jacobi sum nonzero"
    return True, "20 random polynomial triples"


def _random_point_poly(rng):
    atoms = [Sym(X), Sym(T), Sym(U)]
    e = Const(int(rng.integers(-3, 4)))
    for _ in range(3):
        term = Const(int(rng.integers(-3, 4)))
        for a in rng.choice(3, size=int(rng.integers(1, 3))):
            term = term * atoms[int(a)]
        e = e + term
    return normalize(e)


def check_adjoint_closed_forms():
    tab = adjoint_table()
    expected = {(0, 2): "-eps*G1 + G3", (1, 2): "-2*eps*G2 + G3", (2, 0): "exp(eps)*G1",
                (2, 1): "exp(2*eps)*G2"}
    bad = [f"{k}" for k, v in expected.items() if str(tab[k]) != v]
    # numeric agreement with the truncated series at a small eps
    eps = 0.3
    for (i, j), elem in tab.items():
        closed = elem.numeric(eps=eps)
        basis = (G1, G2, G3)
        series = adjoint_action_numeric(basis[i], basis[j], eps)
        if np.max(np.abs(closed - series)) > 1e-10:
            bad.append(f"numeric {(i, j)}")
    return not bad, "mismatched: " + (", ".join(bad) or "none")


def check_optimal_system():
    rng = _rng()
    canon = {tuple(c.rational()) for c in canonical_set()}
    worst = 0.0
    for _ in range(1000):
        v = tuple(Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) for _ in range(3))
        if not any(v):
            continue
        res = optimal_representative(v)
        if res.representative not in canon or replay_exact(res) != res.representative:
            return False, f"{v} -> {res.label}"
        if v[2] != 0 and res.representative != (0, 0, 1):
            return False, f"{v} with l3 != 0 did not land on G3"
        worst = max(worst, float(np.max(np.abs(replay_numeric(res)
                                                - np.array(res.representative, float)))))
    return worst < 1e-10, f"1000 random vectors, worst numeric replay error {worst:.1e}"


# ---------------------------------------------------------------------------
# groups

def check_catalogue_flows():
    m = catalogue_matches_flow()
    return all(m.values()), ", ".join(f"{k}={'ok' if v else 'mismatch'}" for k, v in m.items())


def check_soliton_and_translations():
    worst = 0.0
    for lam in (0.5, 2.0):
        base = soliton(lam)
        worst = max(worst, grid_residual(base)["max_residual"])
        for name in ("Xi1", "Xi2", "Xi4"):
            for eps in (0.3, 1.0):
                F = transform_solution(get_action(name), eps, base)
                worst = max(worst, grid_residual(F)["max_residual"])
    return worst < 1e-10, f"max residual {worst:.1e}"


def check_scaling_breaks_soliton():
    r = grid_residual(transform_solution(get_action("Xi3"), 1.0, soliton(2.0)))["max_residual"]
    return r > 1e-3, f"Xi3 image at eps=1, lambda=2 has max residual {r:.3e}"


# ---------------------------------------------------------------------------
# reductions

def check_invariants():
    bad = [g for g in REDUCTION_GROUPS if not invariant_check(invariant(g))]
    return not bad, "failing: " + (", ".join(bad) or "none")


def check_reduction_feasibility():
    got = {g: reduce(g).feasible for g in REDUCTION_GROUPS}
    expected = {"Xi1": True, "Xi2": True, "Xi3": False, "Xi4": True, "Xi5": False,
                "Xi6": False, "Xi7": False}
    return got == expected, ", ".join(f"{g}={'ODE' if v else 'no ODE'}" for g, v in got.items())


def check_series_coefficients():
    s1 = series_first_order(1, Fraction(1, 2), 4)
    s2 = series_second_order(1, Fraction(1, 2), 0, 4)
    ok = s1.coeffs[1] == Fraction(3, 8) and s2.coeffs[2] == Fraction(-3, 16)
    return ok, f"first-order c1 = {s1.coeffs[1]}, second-order c2 = {s2.coeffs[2]}"


def check_series_residual_orders():
    N = 12
    cases = [series_first_order(1, Fraction(1, 2), N),
             series_second_order(1, Fraction(1, 2), Fraction(1, 3), N),
             series_traveling(1, 1, Fraction(1, 2), Fraction(1, 3), N)]
    orders = [lowest_residual_order(s) for s in cases]
    ok = all(o is not None and o >= N - 2 for o in orders)
    return ok, f"N = {N}, lowest residual orders {orders}"


def check_equilibria():
    ok = True
    for c0 in (0, 1, -1):
        s = series_first_order(1, c0, 10)
        ok &= all(c == 0 for c in s.coeffs[1:])
        s = series_second_order(1, c0, 0, 10)
        ok &= all(c == 0 for c in s.coeffs[1:])
    return ok, "c0 in {0, 1, -1} give constant series"


def check_series_against_rk4():
    worst = 0.0
    for s, ode, init in (
        (series_first_order(1, Fraction(1, 2), 20), reduce("Xi1"), (0.5,)),
        (series_second_order(1, Fraction(1, 2), 0, 20), reduce("Xi2"), (0.5, 0.0)),
    ):
        for end in (0.2, -0.2):
            traj = ode_integrate(ode, init, (0.0, end), 1e-3, 1.0)
            for e in np.linspace(0.0, end, 9):
                worst = max(worst, abs(float(series_eval(s, float(e))) - traj(e)))
    return worst < 1e-8, f"max |series - RK4| on |eta| <= 0.2: {worst:.1e}"


# ---------------------------------------------------------------------------
# conservation laws

def check_adjoint_equation():
    expected = parse("3*lambda*u^2*v - lambda*v - v_t - v_xx")
    return not normalize(adjoint_equation() - expected).poly, to_infix(adjoint_equation())


def check_conserved_vectors():
    rng = _rng()
    a = Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 5)))
    b = Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 5)))
    mix = AlgebraElement.of(a, b, 0).field
    reports = [divergence_onshell(conserved_vector(G)) for G in (G1, G2, mix)]
    ok = all(r.conserved and r.certificate == "canonical" and r.order_invariant for r in reports)
    return ok, f"remainders {[to_infix(r.remainder) for r in reports]} (a = {a}, b = {b})"


def check_conserved_vector_linearity():
    rng = _rng()
    a, b = Fraction(int(rng.integers(-7, 8)), 3), Fraction(int(rng.integers(-7, 8)), 2)
    lhs = conserved_vector(AlgebraElement.of(a, b, 0).field)
    c1, c2 = conserved_vector(G1), conserved_vector(G2)
    ok = (not normalize(lhs.Tt - (a * c1.Tt + b * c2.Tt)).poly
          and not normalize(lhs.Tx - (a * c1.Tx + b * c2.Tx)).poly)
    return ok, f"a = {a}, b = {b}"


def check_negative_control():
    junk = ConservedVector(Sym(U), Const(0), Const(0), "junk")
    r = divergence_onshell(junk)
    return not r.conserved, f"remainder {to_infix(r.remainder)}"


def check_scaling_vector_not_conserved():
    r = divergence_onshell(conserved_vector(G3))
    return not r.conserved, f"remainder {to_infix(r.remainder)}"


def check_self_adjointness():
    probes = [self_adjointness(k) for k in ("strict", "quasi", "nonlinear")]
    ok = not any(p.holds for p in probes) and all(p.obstruction for p in probes)
    return ok, ", ".join(f"{p.kind}: {'holds' if p.holds else 'fails'}" for p in probes)


def check_numeric_divergence():
    study = refinement_study(conserved_vector(G1), lam=1.0)
    errs, ratios = study["max_divergence"], study["ratios"]
    ok = errs[1] < 1e-4 and all(r >= 3 for r in ratios)
    return ok, (f"max divergence {', '.join(f'{e:.2e}' for e in errs)}; "
                f"ratios {', '.join(f'{r:.2f}' for r in ratios)}")


CHECKS = (
    ("symcore.total_derivatives_commute", check_total_derivatives_commute),
    ("symcore.serialization_roundtrip", check_serialization_roundtrip),
    ("lie.translations_are_symmetries", check_translations_are_symmetries),
    ("lie.scaling_residual", check_scaling_residual),
    ("lie.infinite_generator_condition", check_infinite_generator_condition),
    ("lie.commutator_table", check_commutator_table),
    ("lie.jacobi_random_fields", check_jacobi_random_fields),
    ("lie.adjoint_closed_forms", check_adjoint_closed_forms),
    ("lie.optimal_system", check_optimal_system),
    ("groups.catalogue_flows", check_catalogue_flows),
    ("groups.soliton_and_translations", check_soliton_and_translations),
    ("groups.scaling_breaks_soliton", check_scaling_breaks_soliton),
    ("reductions.invariants", check_invariants),
    ("reductions.feasibility", check_reduction_feasibility),
    ("reductions.series_coefficients", check_series_coefficients),
    ("reductions.series_residual_orders", check_series_residual_orders),
    ("reductions.equilibria", check_equilibria),
    ("reductions.series_against_rk4", check_series_against_rk4),
    ("conslaw.adjoint_equation", check_adjoint_equation),
    ("conslaw.conserved_vectors", check_conserved_vectors),
    ("conslaw.linearity", check_conserved_vector_linearity),
    ("conslaw.negative_control", check_negative_control),
    ("conslaw.scaling_vector", check_scaling_vector_not_conserved),
    ("conslaw.self_adjointness", check_self_adjointness),
    ("conslaw.numeric_divergence", check_numeric_divergence),
)


def run_selftest() -> dict:
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, reported not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append({"name": name, "passed": bool(ok), "detail": detail})
    passed = sum(r["passed"] for r in results)
    return {"checks": results, "passed": passed, "failed": len(results) - passed,
            "seed": default_seed()}


__all__ = ["CHECKS", "run_selftest"]
