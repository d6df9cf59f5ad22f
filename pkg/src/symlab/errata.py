"""Printed claims about the Chaffee-Infante analysis compared with computed values.

Every entry pairs a claim as printed with the value this package computes.
``status`` is ``discrepancy`` when they disagree (or the claim cannot hold),
``confirmed`` when they agree.  Locations are descriptive, not numbered.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .conslaw import adjoint_equation, conserved_vector, self_adjointness
from .groups import catalogue, catalogue_matches_flow, compare_printed, grid_residual, soliton
from .lie import (
    BASIS_NAMES, CI, G1, G2, G3, VectorField, adjoint_table, canonical_set, check_symmetry,
    commutator_table,
)
from .reductions import (
    REDUCTION_BOX, chain_rule_coefficients, reduce, series_first_order, series_second_order,
)
from .symcore import T, X, Const, Sym, is_zero, normalize, parse, sqrt, symbol, to_infix
from .symcore.expr import from_poly, sorted_terms


@dataclass(frozen=True)
class Entry:
    id: str
    location: str
    claim: str
    printed: str
    computed: str
    status: str
    note: str = ""

    def to_json(self) -> dict:
        return {"id": self.id, "location": self.location, "claim": self.claim,
                "printed": self.printed, "computed": self.computed, "status": self.status,
                "note": self.note}


def _status(ok: bool) -> str:
    return "confirmed" if ok else "discrepancy"


def _same(a, b) -> bool:
    return bool(is_zero(normalize(a - b)))


def term_diff(computed, printed) -> dict:
    """Terms present only in the computed or only in the printed expression."""
    pc, pp = normalize(computed).poly, normalize(printed).poly
    only_c = {m: c for m, c in pc.items() if pp.get(m) != c}
    only_p = {m: c for m, c in pp.items() if pc.get(m) != c}
    return {
        "only_computed": [to_infix(from_poly({m: c})) for m, c in sorted_terms(only_c)],
        "only_printed": [to_infix(from_poly({m: c})) for m, c in sorted_terms(only_p)],
    }


# ---------------------------------------------------------------------------
# symmetries and the algebra

def _symmetry_entries() -> list:
    out = [Entry(
        "generator-labels", "first case of the determining equations vs the algebra section",
        "translation generators are labelled consistently",
        "G1 = d/dt, G2 = d/dx in the first case; G1 = d/dx, G2 = d/dt in the algebra",
        "convention used here: G1 = d/dx, G2 = d/dt, G3 = x d/dx + 2t d/dt",
        "discrepancy", "the conserved-vector section reuses the first-case labels")]

    C1, m = Sym(symbol("C1")), Sym(symbol("m"))
    case2 = VectorField(C1 * Sym(X), 2 * C1 * Sym(T), 2 * C1 * m ** -1, name="case2")
    r = check_symmetry(case2, CI, "case2")
    out.append(Entry(
        "case2-infinitesimals", "second case of the determining equations",
        "omega = C1 x + C2, psi = 2 C1 t + C0, chi = 2 C1/m give symmetries",
        "chi = 2*C1/m (m undefined)",
        f"on-shell residual {to_infix(r.residual_onshell)}",
        _status(r.is_symmetry), "m is kept as a free symbol; C1 = 0 is the only way out"))

    g3 = check_symmetry(G3, CI, "G3")
    out.append(Entry(
        "G3-symmetry", "algebra section", "G3 = x d/dx + 2t d/dt is a point symmetry",
        "G3 generates a symmetry", f"on-shell residual {to_infix(g3.residual_onshell)}",
        _status(g3.is_symmetry), "the scaling only survives when lambda = 0"))
    for G in (G1, G2):
        rep = check_symmetry(G, CI, G.name)
        out.append(Entry(
            f"{G.name}-symmetry", "algebra section", f"{G.name} is a point symmetry",
            f"{G.name} generates a symmetry",
            f"on-shell residual {to_infix(rep.residual_onshell)} ({rep.certificate})",
            _status(rep.is_symmetry)))

    table = commutator_table().to_json()["table"]
    printed = {"[G1,G3]": "G1", "[G3,G1]": "G1", "[G2,G3]": "2*G2", "[G3,G2]": "-2*G2",
               "[G1,G2]": "0", "[G2,G1]": "0"}
    for key in sorted(printed):
        ok = table[key].replace(" ", "") == printed[key]
        out.append(Entry(
            f"commutator-{key.strip('[]').replace(',', '-')}", "commutator table",
            f"{key} = {printed[key]}", printed[key], table[key], _status(ok),
            "" if ok else "antisymmetry of the bracket forces [G3,G1] = -[G1,G3]"))

    adj = adjoint_table()
    printed_adj = {(0, 2): "G3 - eps*G1", (1, 2): "2*G3 - 2*eps*G2", (2, 0): "exp(eps)*G1",
                   (2, 1): "exp(2*eps)*G2"}
    eps = Sym(symbol("eps"))
    printed_coeffs = {(0, 2): (-eps, Const(0), Const(1)), (1, 2): (Const(0), -2 * eps, Const(2)),
                      (2, 0): None, (2, 1): None}
    for (i, j), text in sorted(printed_adj.items()):
        comp = adj[(i, j)]
        pc = printed_coeffs[(i, j)]
        if pc is None:
            ok = str(comp).replace(" ", "") == text.replace(" ", "")
        else:
            ok = all(_same(a, b) for a, b in zip(comp.coeffs, pc))
        a, b = BASIS_NAMES[i], BASIS_NAMES[j]
        out.append(Entry(
            f"adjoint-{a}-{b}", "adjoint representation table",
            f"Ad(exp(eps {a})) {b} = {text}", text, str(comp), _status(ok),
            "" if ok else "the G3 coefficient is 1: the action fixes G3 up to G2 terms"))
    out.append(Entry(
        "adjoint-notation", "adjoint representation table",
        "adjoint actions written as brackets",
        "[A, B] denotes Ad(exp(eps A)) B", "Ad(exp(eps A)) B = B - eps [A,B] + ...",
        "discrepancy", "the same bracket symbol denotes commutators in the preceding table"))

    ct = commutator_table().structure_constants()
    struct_ok = (ct[0, 0, 2] == 1 and ct[1, 1, 2] == 2 and ct[0, 2, 0] == -1
                 and ct[1, 2, 1] == -2)
    out.append(Entry(
        "structure-constants", "optimal system construction",
        "C^1_13 = 1, C^2_23 = 2, C^1_31 = -1, C^2_32 = -2",
        "1, 2, -1, -2",
        ", ".join(f"{ct[idx]:g}" for idx in ((0, 0, 2), (1, 1, 2), (0, 2, 0), (1, 2, 1))),
        _status(struct_ok),
        "these agree with [G3,G1] = -G1, not with the printed table entry"))

    reps = [str(c) for c in canonical_set()]
    out.append(Entry(
        "optimal-system", "optimal system", "G1, G2, k G1 + m G2 is an optimal system",
        "G1, G2, k*G1 + m*G2", ", ".join(reps), "discrepancy",
        "G3 is omitted although every element with a G3 component is conjugate to G3; "
        "k G1 + m G2 with k, m nonzero scales to G1 + G2 or G1 - G2"))
    return out


# ---------------------------------------------------------------------------
# groups and transformed solutions

def _group_entries() -> list:
    out = []
    flows = catalogue_matches_flow()
    for name, action in sorted(catalogue().items()):
        if action.element is None:
            continue
        rep = check_symmetry(action.element.field, CI, name)
        out.append(Entry(
            f"{name}-symmetry-group", "one-parameter groups",
            f"{name} maps solutions to solutions",
            ", ".join(action.to_json()["image"]),
            f"generator {action.element}; on-shell residual {to_infix(rep.residual_onshell)}",
            _status(rep.is_symmetry),
            "closed form matches the flow" if flows[name] else "closed form differs from flow"))

    base = soliton(2.0)
    res = grid_residual(base)["max_residual"]
    out.append(Entry(
        "soliton", "known soliton", "u = -(1 + tanh(delta x/2 + 3 lambda t/4))/2 solves the PDE",
        "delta = sqrt(lambda/2)", f"max residual {res:.3e} on [-2,2]^2 at lambda = 2",
        _status(res < 1e-10)))

    cmp = compare_printed(2.0, 1.0)
    a = cmp["Xi3"]
    out.append(Entry(
        "scaling-transformed-soliton", "transformed solutions",
        "printed transformed soliton (attributed to the first group) solves the PDE",
        a["printed"],
        f"Xi3 pullback {a['computed']}; max |difference| {a['max_difference']:.3e}; "
        f"printed max residual {a['printed_max_residual']:.3e}; "
        f"pullback max residual {a['computed_max_residual']:.3e}",
        "discrepancy",
        "lambda = 2, eps = 1; the first group is a translation, and the coefficients "
        "lambda/(2 sqrt 2) and 3 lambda/2 do not match the soliton"))
    b = cmp["Xi3-then-Xi5"]
    out.append(Entry(
        "double-transformed-soliton", "transformed solutions",
        "printed composite of the scaling group and Xi5 solves the PDE", b["printed"],
        f"max |difference| {b['max_difference']:.3e}; printed max residual "
        f"{b['printed_max_residual']:.3e}; computed max residual "
        f"{b['computed_max_residual']:.3e}",
        "discrepancy", "lambda = 2, eps = 1; neither group is a symmetry"))
    return out


# ---------------------------------------------------------------------------
# reductions and series

def _reduction_entries() -> list:
    out = []
    lam0, c0 = Fraction(1), Fraction(1, 2)
    s = series_first_order(lam0, c0, 4)
    c1_printed = lam0 * c0 - lam0 * c0 ** 3
    out.append(Entry(
        "first-order-c1", "first-order series", "c1 = lambda c0 - lambda c0^3",
        f"{c1_printed} at lambda = 1, c0 = 1/2", str(s.coeffs[1]),
        _status(c1_printed == s.coeffs[1])))
    cube1 = 3 * c0 ** 2 * s.coeffs[1]
    printed_c2 = -lam0 / 2 * (s.coeffs[1] - cube1)
    out.append(Entry(
        "first-order-recurrence", "first-order series",
        "c_{n+1} = -lambda/(n+1) (c_n - cube_n) for n >= 1",
        f"c2 = {printed_c2}", f"c2 = {s.coeffs[2]} from c_(n+1) = lambda/(n+1) (c_n - cube_n)",
        _status(printed_c2 == s.coeffs[2]),
        "the printed n >= 1 rule flips the sign of the n = 0 rule"))
    out.append(Entry(
        "first-order-solution", "first-order series",
        "u = c0 + (lambda c0 + lambda c0^3) t + ...",
        f"coefficient of t: {lam0 * c0 + lam0 * c0 ** 3} at lambda = 1, c0 = 1/2",
        f"coefficient of t: {s.coeffs[1]}", "discrepancy",
        "the c0^3 term carries a minus sign"))

    r1 = reduce("Xi1")
    out.append(Entry(
        "first-order-ode", "reduction by the first group",
        "u = f(t) gives f' + lambda (f^3 - f) = 0", "f1 + lambda*f^3 - lambda*f",
        to_infix(r1.equation()), _status(_same(r1.equation(), parse("f1 + lambda*f^3 - lambda*f")))))
    r2 = reduce("Xi2")
    out.append(Entry(
        "second-order-ode", "reduction by the second group",
        "u = f(x) gives f'' + lambda (f^3 - f) = 0", "f2 + lambda*f^3 - lambda*f",
        to_infix(r2.equation()),
        _status(_same(r2.equation(), parse("f2 + lambda*f^3 - lambda*f"))),
        "the printed coefficient expansion and recurrence follow the computed sign"))
    s2 = series_second_order(lam0, c0, 0, 4)
    out.append(Entry(
        "second-order-c2", "second-order series", "c2 = (lambda c0^3 - lambda c0)/2",
        str((lam0 * c0 ** 3 - lam0 * c0) / 2), str(s2.coeffs[2]),
        _status((lam0 * c0 ** 3 - lam0 * c0) / 2 == s2.coeffs[2])))
    out.append(Entry(
        "second-order-truncation", "second-order series",
        "u = c0 + c1 x + c1 x^2 + ...", "c1*x^2", "c2*x^2", "discrepancy",
        "typo: c1 in place of c2"))
    out.append(Entry(
        "second-order-solution", "second-order series",
        "u = c0 + c1 x + (lambda c0^3 - lambda c0)/2 x + ...",
        "(lambda*c0^3 - lambda*c0)/2*x", "(lambda*c0^3 - lambda*c0)/2*x^2", "discrepancy",
        "typo: x in place of x^2"))

    r3 = reduce("Xi3")
    printed_a1 = parse("(1 + 2*x)*x^-2")
    out.append(Entry(
        "scaling-reduction-f1", "reduction by the third group",
        "u = f(t/x^2) gives (1+2x)/x^2 f' - 4t^2/x^6 f'' + lambda (f^3 - f) = 0",
        to_infix(printed_a1), to_infix(r3.raw[1]), _status(_same(r3.raw[1], printed_a1))))
    out.append(Entry(
        "scaling-reduction-f2", "reduction by the third group", "f'' coefficient -4t^2/x^6",
        "-4*t^2*x^-6", to_infix(r3.raw[0]), _status(_same(r3.raw[0], parse("-4*t^2*x^-6")))))
    out.append(Entry(
        "scaling-reduction-ode", "reduction by the third group",
        "the reduced equation is an ODE in eta", "ODE in eta",
        f"after dividing by the f'' coefficient the leftover {to_infix(r3.leftover)} "
        "still depends on x", _status(r3.feasible),
        "the series built on it mixes x and t into the coefficients"))

    k = Sym(symbol("k"))
    eta = Sym(T) - k * Sym(X)
    a2, a1, _ = chain_rule_coefficients(eta)
    out.append(Entry(
        "traveling-reduction", "reduction by the fourth group",
        "u = f(t - k x) gives f' - k f'' + lambda (f^3 - f) = 0", "-k",
        to_infix(a2), _status(_same(a2, -k)), "the f'' coefficient is -k^2"))

    printed_raw = {
        "Xi5": ("-(1 + x)/(2 t^(3/2))", "-1/t"),
        "Xi6": ("-(1 + x)/(1 + 2t)^(3/2)", "-1/(1 + 2t)"),
        "Xi7": ("-x/(1 + 2t)^(3/2)", "-1/(1 + 2t)"),
    }
    one, x, t = Const(1), Sym(X), Sym(T)
    printed_expr = {
        "Xi5": (-(one + x) * Const(Fraction(1, 2)) * sqrt(t) ** -3, -(t ** -1)),
        "Xi6": (-(one + x) * sqrt(one + 2 * t) ** -3, -((one + 2 * t) ** -1)),
        "Xi7": (-x * sqrt(one + 2 * t) ** -3, -((one + 2 * t) ** -1)),
    }
    for name in ("Xi5", "Xi6", "Xi7"):
        r = reduce(name)
        pa1, pa2 = printed_expr[name]
        ok = (bool(is_zero(normalize(r.raw[1] - pa1), box=REDUCTION_BOX))
              and bool(is_zero(normalize(r.raw[0] - pa2), box=REDUCTION_BOX)))
        out.append(Entry(
            f"{name}-reduction-coefficients", f"reduction by the group {name}",
            "chain-rule coefficients of f' and f''",
            f"{printed_raw[name][0]}, {printed_raw[name][1]}",
            f"{to_infix(r.raw[1])}, {to_infix(r.raw[0])}", _status(ok)))
        out.append(Entry(
            f"{name}-reduction-ode", f"reduction by the group {name}",
            "the reduced equation is an ODE in eta", "ODE in eta",
            f"leftover {to_infix(r.leftover)}", _status(r.feasible),
            "the reaction term keeps a factor that is not a function of eta"))
    return out


# ---------------------------------------------------------------------------
# conservation laws

def _printed_vectors() -> dict:
    """Printed conserved vectors with the undefined multiplier set to 1, in local labels."""
    return {
        "G2": ("-v*u_xx + v*lambda*u^3 - v*lambda*u", "-u_t*v_x + u_tx*v"),
        "G1": ("-u_x*v",
               "v*u_t - v*u_xx + lambda*v*u^3 - lambda*v*u - u_x*v_x + u_xx*v"),
        "G3": ("v*(-u_xx + lambda*u^3 - lambda*u - x*u_x)",
               "x*v*u_t - x*v*u_xx + x*lambda*v*u^3 - x*lambda*v*u - x*u_x - 2*t*u_t"
               " + v_xx + v*u_x + v*x*u_xx"),
        "a*G1 + G2": ("v*(-u_xx + lambda*u^3 - lambda*u - a*u_x)",
                      "a*v*u_t + lambda*a*v*u^3 - a*lambda*v*u - a*v + x*u_x - u_t*v_x"),
    }


def _conslaw_entries() -> list:
    out = []
    Hs = adjoint_equation()
    printed_Hs = parse("lambda*(3*u^2*v - v) - v_t - v_xx")
    out.append(Entry(
        "adjoint-equation", "adjoint equation", "H* = lambda (3u^2 v - v) - v_t - v_xx",
        to_infix(printed_Hs), to_infix(Hs), _status(_same(Hs, printed_Hs)),
        "the printed v{xx} is read as v_xx"))

    strict = self_adjointness("strict")
    out.append(Entry(
        "strict-self-adjointness", "self-adjointness", "not strictly self-adjoint",
        "fails", f"{strict.to_json()['verdict']}; obstruction "
        f"{', '.join(strict.to_json()['obstruction'])}", _status(not strict.holds)))
    quasi = self_adjointness("quasi")
    out.append(Entry(
        "quasi-self-adjointness", "self-adjointness", "not quasi self-adjoint; h'(u) = 0 forced",
        "fails", f"{quasi.to_json()['verdict']}; {quasi.steps[2]}", _status(not quasi.holds)))
    out.append(Entry(
        "quasi-multiplier", "self-adjointness", "Lambda = h'(u)", "h_u(u)",
        to_infix(quasi.multiplier), "discrepancy",
        "the u_t coefficient gives Lambda = -h'(u); the printed expansion also drops "
        "lambda from the Lambda u^3 - Lambda u terms"))
    nonlin = self_adjointness("nonlinear")
    out.append(Entry(
        "nonlinear-self-adjointness", "self-adjointness", "not nonlinearly self-adjoint",
        "fails", f"{nonlin.to_json()['verdict']}; {nonlin.steps[3]}",
        _status(not nonlin.holds)))
    out.append(Entry(
        "nonlinear-condition", "self-adjointness",
        "-h + 3u^2 h - h_t - h_xx = 0 with Lambda = h_u = 0", "-h + 3*u^2*h - h_t - h_xx",
        "-lambda*h + 3*lambda*u^2*h - h_t - h_xx with Lambda = -h_u", "discrepancy",
        "lambda is missing from the printed condition"))

    a = Sym(symbol("a"))
    gens = {"G1": G1, "G2": G2, "G3": G3,
            "a*G1 + G2": VectorField(a, Const(1), Const(0), name="a*G1 + G2")}
    printed_label = {"G2": "G1 = d/dt", "G1": "G2 = d/dx", "G3": "G3",
                     "a*G1 + G2": "aG1 + G2 = a d/dx + d/dt"}
    for name, (tt, tx) in _printed_vectors().items():
        cv = conserved_vector(gens[name], name=name)
        for comp, printed, computed in (("Tt", tt, cv.Tt), ("Tx", tx, cv.Tx)):
            p = parse(printed)
            ok = _same(p, computed)
            diff = term_diff(computed, p)
            note = "printed multiplier Lambda read as 1; generator printed as " \
                   f"{printed_label[name]}"
            if not ok:
                note += (f"; only computed: {', '.join(diff['only_computed']) or 'none'}"
                         f"; only printed: {', '.join(diff['only_printed']) or 'none'}")
            out.append(Entry(
                f"conserved-vector-{name.replace('*', '').replace(' ', '')}-{comp}",
                "conserved vectors", f"{comp} for {printed_label[name]}",
                to_infix(p), to_infix(computed), _status(ok), note))
    return out


def errata() -> list:
    """All comparisons, in a fixed order."""
    return _symmetry_entries() + _group_entries() + _reduction_entries() + _conslaw_entries()


def errata_report() -> dict:
    entries = [e.to_json() for e in errata()]
    disc = [e for e in entries if e["status"] == "discrepancy"]
    return {"discrepancies": disc,
            "confirmed": [e for e in entries if e["status"] == "confirmed"],
            "counts": {"discrepancy": len(disc), "confirmed": len(entries) - len(disc)}}


__all__ = ["Entry", "errata", "errata_report", "term_diff"]
