"""Similarity reduction u = f(eta) and the check that the result is a genuine ODE."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError
from ..symcore import (
    LAMBDA, T, X, Const, Expr, Sym, free_coords, is_zero, normalize, partial_derivative,
    sqrt, substitute, symbol, to_infix,
)

x, t, lam = Sym(X), Sym(T), Sym(LAMBDA)
ETA = Sym(symbol("eta"))
F0, F1, F2 = Sym(symbol("f")), Sym(symbol("f1")), Sym(symbol("f2"))

# sampling box keeping every invariant real and finite
REDUCTION_BOX = {"x": (0.5, 2.0), "t": (0.25, 2.0), "eta": (0.25, 2.0), "lambda": (0.5, 4.0)}


@dataclass(frozen=True)
class Invariant:
    group: str
    eta: Expr
    solve_for: object  # coordinate eliminated in favour of eta
    solved: Expr       # its expression in eta and the other coordinate
    anchor: tuple = ()  # (coordinate, value) inside the domain for the other coordinate

    def to_json(self) -> dict:
        return {"group": self.group, "eta": to_infix(self.eta),
                "rewrite": f"{self.solve_for.name} = {to_infix(self.solved)}"}


def invariant(group: str, k=Fraction(1)) -> Invariant:
    k = Const(Fraction(k))
    one = Const(1)
    table = {
        "Xi1": (t, T, ETA, (X, 0)),
        "Xi2": (x, X, ETA, (T, 0)),
        "Xi3": (t * x ** -2, T, ETA * x ** 2, (X, 1)),
        "Xi4": (t - k * x, T, ETA + k * x, (X, 0)),
        "Xi5": ((one + x) * sqrt(t) ** -1, X, ETA * sqrt(t) - one, (T, 1)),
        "Xi6": ((one + x) * sqrt(one + 2 * t) ** -1, X, ETA * sqrt(one + 2 * t) - one, (T, 0)),
        "Xi7": (x * sqrt(one + 2 * t) ** -1, X, ETA * sqrt(one + 2 * t), (T, 0)),
    }
    key = group.replace("Ξ", "Xi").replace("_", "")
    if key not in table:
        raise KeyError(f"no invariant catalogued for {group!r}; expected one of {sorted(table)}")
    eta, c, solved, anchor = table[key]
    return Invariant(key, normalize(eta), c, normalize(solved), anchor)


def invariant_check(inv: Invariant, k=Fraction(1)) -> bool:
    """G(eta) = 0 for the generator of the group."""
    from ..groups import get_action

    field = get_action(inv.group, k).element.field
    return bool(is_zero(field.apply(inv.eta), box=REDUCTION_BOX))


@dataclass(frozen=True)
class ReducedODE:
    """c2 f'' + c1 f' + c0 lambda (f^3 - f) = 0 after dividing by a common factor."""

    group: str
    eta: Expr
    order: int
    c2: Expr
    c1: Expr
    c0: Expr
    feasible: bool
    leftover: Expr
    raw: tuple  # (a2, a1, a0) in x, t before normalisation

    def equation(self) -> Expr:
        body = self.c2 * F2 + self.c1 * F1 + self.c0 * lam * (F0 ** 3 - F0)
        return normalize(body)

    def is_constant_coefficient(self) -> bool:
        return all(not (free_coords(c) & {X, T, ETA.coord}) for c in (self.c2, self.c1, self.c0))

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "eta": to_infix(self.eta),
            "order": self.order,
            "feasible": self.feasible,
            "ode": f"{to_infix(self.equation())} = 0",
            "coefficients": {"f2": to_infix(self.c2), "f1": to_infix(self.c1),
                             "lambda*(f^3-f)": to_infix(self.c0)},
            "leftover": to_infix(self.leftover),
            "raw_coefficients": [to_infix(a) for a in self.raw],
        }


def _jacobian(r: Expr, eta: Expr) -> Expr:
    return normalize(partial_derivative(r, X) * partial_derivative(eta, T)
                     - partial_derivative(r, T) * partial_derivative(eta, X))


def _zero(e: Expr) -> bool:
    try:
        return bool(is_zero(e, box=REDUCTION_BOX))
    except DomainError:
        return False


def _in_eta(r: Expr, inv: Invariant, anchored: bool = False) -> Expr:
    """Rewrite an expression in (x, t) through the solved form of eta.

    With ``anchored`` the caller asserts that r depends on eta alone; the
    remaining coordinate is then pinned at the anchor value, which removes
    factors the canonical form cannot cancel, e.g. (1 + 2t)(1 + 2t)^-1.
    """
    out = substitute(r, {inv.solve_for: inv.solved}, resolve=False)
    if anchored and inv.anchor and inv.anchor[0] in free_coords(out):
        c, val = inv.anchor
        out = substitute(out, {c: Const(val)})
    return out


def chain_rule_coefficients(eta: Expr) -> tuple:
    """(a2, a1, a0) with u_t - u_xx + lambda(u^3 - u) = a2 f'' + a1 f' + a0 lambda(f^3 - f)."""
    ex = partial_derivative(eta, X)
    a2 = normalize(-(ex ** 2))
    a1 = normalize(partial_derivative(eta, T) - partial_derivative(ex, X))
    return a2, a1, Const(1)


def reduce(group: str, k=Fraction(1)) -> ReducedODE:
    """Substitute u = f(eta) and decide whether the result closes over eta."""
    inv = invariant(group, k)
    a2, a1, a0 = chain_rule_coefficients(inv.eta)
    lead = a2 if a2.poly else a1
    order = 2 if a2.poly else 1
    coeffs = []
    good = []
    for a in (a2, a1, a0):
        r = normalize(a * lead ** -1)
        is_eta_fn = _zero(_jacobian(r, inv.eta))
        rewritten = _in_eta(r, inv, anchored=True) if is_eta_fn else r
        coeffs.append(rewritten)
        good.append(is_eta_fn)
    feasible = all(good)
    c2, c1, c0 = coeffs
    if feasible:
        # present with unit coefficient on lambda(f^3 - f) when that is a constant
        scale = c0
        if not (free_coords(scale) & {ETA.coord}):
            c2, c1, c0 = (normalize(c * scale ** -1) for c in (c2, c1, c0))
        leftover = Const(0)
    else:
        parts = [c * m for c, m, ok in zip(coeffs, (F2, F1, lam * (F0 ** 3 - F0)), good) if not ok]
        leftover = _in_eta(normalize(sum(parts, Const(0))), inv)
    return ReducedODE(inv.group, inv.eta, order, normalize(c2), normalize(c1), normalize(c0),
                      feasible, normalize(leftover), (a2, a1, a0))


REDUCTION_GROUPS = ("Xi1", "Xi2", "Xi3", "Xi4", "Xi5", "Xi6", "Xi7")


__all__ = [
    "ETA", "F0", "F1", "F2", "Invariant", "REDUCTION_BOX", "REDUCTION_GROUPS", "ReducedODE",
    "chain_rule_coefficients", "invariant", "invariant_check", "reduce",
]
