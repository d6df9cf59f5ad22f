"""Formal Lagrangian, adjoint equation, self-adjointness probes and conserved vectors."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import JetCapacityError
from ..lie.fields import VectorField, onshell_rules, reduce_modulo, split_monomials
from ..symcore import (
    LAMBDA, U, V, Const, Expr, Func, Sym, T, X, as_expr, free_coords, free_funcs, is_zero, jet,
    normalize, partial_derivative, substitute, substitute_function, symbol, to_infix,
    total_derivative,
)

u, v, lam = Sym(U), Sym(V), Sym(LAMBDA)
UT, UX, UXX = Sym(jet("u", 1, 0)), Sym(jet("u", 0, 1)), Sym(jet("u", 0, 2))
VT, VXX = Sym(jet("v", 1, 0)), Sym(jet("v", 0, 2))
MULT = Sym(symbol("Lambda"))


def equation() -> Expr:
    """H = u_t - u_xx + lambda (u^3 - u)."""
    return normalize(UT - UXX + lam * (u ** 3 - u))


def formal_lagrangian() -> Expr:
    return normalize(v * equation())


def _jets_of(e, base):
    return [c for c in free_coords(e) if c.is_field and c.base == base]


def variational_derivative(L, base: str = "u") -> Expr:
    """Euler operator dL/du - D_i dL/du_i + D_i D_j dL/du_ij (second order)."""
    L = as_expr(L)
    high = [c.name for c in _jets_of(L, base) if c.order > 2]
    if high:
        raise JetCapacityError(
            f"variational derivative is truncated at second order; found {', '.join(sorted(high))}")
    out = Const(0)
    for nt in range(3):
        for nx in range(3 - nt):
            c = jet(base, nt, nx)
            d = partial_derivative(L, c)
            if not d.poly:
                continue
            term = d
            for _ in range(nt):
                term = total_derivative(term, "t")
            for _ in range(nx):
                term = total_derivative(term, "x")
            out = out + (term if (nt + nx) % 2 == 0 else -term)
    return normalize(out)


def adjoint_equation() -> Expr:
    """H* = dL/du for the formal Lagrangian."""
    return variational_derivative(formal_lagrangian())


# ---------------------------------------------------------------------------
# on-shell reduction for the (u, v) system

def system_rules() -> dict:
    """Rules eliminating t-derivatives of u via H = 0 and of v via H* = 0."""
    u_rules = onshell_rules("u", UXX - lam * (u ** 3 - u))
    # H* = 0  <=>  v_t = lambda (3u^2 - 1) v - v_xx
    v_rhs = normalize(lam * (3 * u ** 2 - 1) * v - VXX)
    v_rules = {}
    for nt in range(1, 5):
        for nx in range(0, 5 - nt):
            target = jet("v", nt, nx)
            try:
                if nt == 1 and nx == 0:
                    val = v_rhs
                elif nx > 0:
                    val = total_derivative(v_rules[jet("v", nt, nx - 1)], "x")
                else:
                    val = total_derivative(v_rules[jet("v", nt - 1, 0)], "t")
            except (JetCapacityError, KeyError):
                break
            val = reduce_modulo(substitute(val, v_rules) if v_rules else val, u_rules, "u")
            v_rules[target] = val
    return {"u": u_rules, "v": v_rules}


_RULES = None


def rules() -> dict:
    global _RULES
    if _RULES is None:
        _RULES = system_rules()
    return _RULES


def reduce_system(e, order=("u", "v")) -> Expr:
    r = rules()
    out = normalize(e)
    for base in order:
        out = reduce_modulo(out, r[base], base)
    # a second sweep settles jets reintroduced by the first
    for base in order:
        out = reduce_modulo(out, r[base], base)
    return out


# ---------------------------------------------------------------------------
# self-adjointness

@dataclass(frozen=True)
class SelfAdjointnessProbe:
    kind: str
    substitution: str
    multiplier: Expr | None
    holds: bool
    obstruction: tuple
    steps: tuple = field(default=())

    def to_json(self) -> dict:
        return {
            "class": self.kind,
            "substitution": self.substitution,
            "multiplier": None if self.multiplier is None else to_infix(self.multiplier),
            "verdict": "holds" if self.holds else "fails",
            "obstruction": [to_infix(e) for e in self.obstruction],
            "steps": list(self.steps),
        }


def _v_bindings(h: Expr) -> dict:
    """v and its jets replaced by h and its total derivatives (up to second order)."""
    b = {V: h}
    for nt in range(3):
        for nx in range(3 - nt):
            if nt == nx == 0:
                continue
            e = h
            for _ in range(nt):
                e = total_derivative(e, "t")
            for _ in range(nx):
                e = total_derivative(e, "x")
            b[jet("v", nt, nx)] = e
    return b


def _is_u_jet(c):
    return c.kind == "jet" and c.base == "u"


def _coefficients(e):
    return [c for _, c in split_monomials(e, _is_u_jet)]


def _solve_multiplier(coeffs):
    """Pick the first coefficient linear in Lambda with a constant slope and solve it."""
    for c in coeffs:
        slope = partial_derivative(c, MULT)
        if slope.poly and not (free_coords(slope) or free_funcs(slope)):
            rest = normalize(c - slope * MULT)
            if MULT.coord in free_coords(rest):
                continue
            return normalize(-rest * slope ** -1)
    return None


def _forced(constraint: Expr):
    """If the constraint is (nonzero constant) * (single function atom), return that atom."""
    p = constraint.poly
    if len(p) != 1:
        return None
    (mono, coef), = p.items()
    funcs = [(a, k) for a, k in mono if isinstance(a, Func)]
    others = [(a, k) for a, k in mono if not isinstance(a, Func)]
    if len(funcs) != 1 or funcs[0][1] <= 0:
        return None
    # remaining factors must be nonzero: lambda, rational constants, powers of u
    for a, _ in others:
        if not (isinstance(a, Sym) and a.coord in (LAMBDA, U)):
            return None
    return funcs[0][0]


def _eliminate(constraints, fname: str, steps: list):
    """Propagate forced vanishing of derivatives of the unknown function.

    Returns (final constraints, function expression or None if forced to 0).
    """
    h_expr = None
    current = [c for c in constraints if c.poly]
    for _ in range(10):
        hit = None
        for c in current:
            atom = _forced(c)
            if atom is not None and atom.name == fname and sum(atom.derivs) <= 1:
                hit = (c, atom)
                break
        if hit is None:
            return current, h_expr
        c, atom = hit
        if sum(atom.derivs) == 0:
            steps.append(f"{to_infix(c)} = 0 forces {to_infix(atom)} = 0")
            current = [normalize(substitute_function(e, fname, Const(0))) for e in current]
            return [e for e in current if e.poly], Const(0)
        # one vanishing first derivative removes that argument
        (i, _), = [(i, d) for i, d in enumerate(atom.derivs) if d]
        base_args = atom.args
        keep = tuple(a for j, a in enumerate(base_args) if j != i)
        steps.append(f"{to_infix(c)} = 0 forces {to_infix(atom)} = 0, so {fname} is independent "
                     f"of {base_args[i].name}")
        repl = Func(fname + "r", keep) if keep else Sym(symbol(fname + "0"))
        current = [normalize(substitute_function(e, fname, repl)) for e in current]
        # rename back so later steps address the same unknown
        if keep:
            current = [normalize(substitute_function(e, fname + "r", Func(fname, keep)))
                       for e in current]
            h_expr = Func(fname, keep)
        else:
            h_expr = Sym(symbol(fname + "0"))
        # u no longer enters the unknown: split every constraint by powers of u
        if U not in keep:
            split = []
            for e in current:
                split.extend(c for _, c in split_monomials(e, {U}))
            current = split
        current = [e for e in current if e.poly]
        if not keep:
            # a constant unknown: any constraint k * h0 forces h0 = 0
            for e in current:
                p = e.poly
                if len(p) == 1 and h_expr.coord in free_coords(e):
                    steps.append(f"{to_infix(e)} = 0 forces {h_expr.coord.name} = 0")
                    return [e], Const(0)
            return current, h_expr
    return current, h_expr


def self_adjointness(kind: str) -> SelfAdjointnessProbe:
    """Probe strict (v = u), quasi (v = h(u)) or nonlinear (v = h(t, x, u)) self-adjointness."""
    Hs = adjoint_equation()
    H = equation()
    if kind == "strict":
        h = u
        label = "v = u"
    elif kind == "quasi":
        h = Func("h", (U,))
        label = "v = h(u)"
    elif kind == "nonlinear":
        h = Func("h", (T, X, U))
        label = "v = h(t,x,u)"
    else:
        raise ValueError(f"unknown probe {kind!r}; expected strict, quasi or nonlinear")
    sub = substitute(Hs, _v_bindings(h))
    E = normalize(-sub + MULT * H)
    coeffs = _coefficients(E)
    steps = [f"-H* + Lambda*H = {to_infix(E)}"]
    Lam = _solve_multiplier(coeffs)
    if Lam is None:
        return SelfAdjointnessProbe(kind, label, None, False, tuple(coeffs), tuple(steps))
    steps.append(f"Lambda = {to_infix(Lam)}")
    constraints = [normalize(substitute(c, {MULT.coord: Lam})) for c in coeffs]
    constraints = [c for c in constraints if c.poly]
    if kind == "strict":
        return SelfAdjointnessProbe(kind, label, Lam, not constraints, tuple(constraints),
                                    tuple(steps))
    final, h_final = _eliminate(constraints, "h", steps)
    holds = not final and not (h_final is not None and not as_expr(h_final).poly)
    if h_final is not None and not as_expr(h_final).poly:
        steps.append("h vanishes identically: only the trivial substitution v = 0 survives")
    return SelfAdjointnessProbe(kind, label, Lam, holds, tuple(constraints), tuple(steps))


# ---------------------------------------------------------------------------
# conserved vectors

@dataclass(frozen=True)
class ConservedVector:
    Tt: Expr
    Tx: Expr
    w: Expr
    generator: str = ""

    def to_json(self) -> dict:
        return {"generator": self.generator, "w": to_infix(self.w), "Tt": to_infix(self.Tt),
                "Tx": to_infix(self.Tx)}


def characteristic(G: VectorField) -> Expr:
    return normalize(G.chi - G.psi * UT - G.omega * UX)


def conserved_vector(G: VectorField, L=None, name: str | None = None) -> ConservedVector:
    """T^i = xi^i L + w [dL/du_i - D_j dL/du_ij] + D_j(w) dL/du_ij."""
    L = formal_lagrangian() if L is None else as_expr(L)
    w = characteristic(G)
    xi = {"t": G.psi, "x": G.omega}

    def second(i, j):
        nt = (i == "t") + (j == "t")
        nx = (i == "x") + (j == "x")
        d = partial_derivative(L, jet("u", nt, nx))
        return d * Const(Fraction(1, 2)) if i != j else d

    comps = {}
    for i in ("t", "x"):
        first = partial_derivative(L, jet("u", *((1, 0) if i == "t" else (0, 1))))
        bracket = first
        tail = Const(0)
        for j in ("t", "x"):
            s = second(i, j)
            if not as_expr(s).poly:
                continue
            bracket = bracket - total_derivative(s, j)
            tail = tail + total_derivative(w, j) * s
        comps[i] = normalize(xi[i] * L + w * bracket + tail)
    return ConservedVector(comps["t"], comps["x"], w, name or G.name)


def divergence(T: ConservedVector) -> Expr:
    return normalize(total_derivative(T.Tt, "t") + total_derivative(T.Tx, "x"))


@dataclass(frozen=True)
class DivergenceReport:
    divergence: Expr
    remainder: Expr
    multipliers: tuple | None
    conserved: bool
    certificate: str
    order_invariant: bool

    def to_json(self) -> dict:
        return {
            "divergence": to_infix(self.divergence),
            "remainder": to_infix(self.remainder),
            "multipliers": None if self.multipliers is None
            else [to_infix(m) for m in self.multipliers],
            "verdict": "conserved" if self.conserved else "not conserved",
            "certificate": self.certificate,
            "order_invariant": self.order_invariant,
        }


def _divide_by(e: Expr, H: Expr, var) -> tuple:
    """Quotient and remainder of e by H as polynomials in ``var`` (H monic, degree 1)."""
    q = Const(0)
    r = normalize(e)
    for _ in range(32):
        pairs = split_monomials(r, {var})
        top = max(((m, c) for m, c in pairs), key=lambda mc: _deg(mc[0], var), default=None)
        if top is None or _deg(top[0], var) == 0:
            return normalize(q), r
        m, c = top
        lower = normalize(m * Sym(var) ** -1)
        term = normalize(c * lower)
        q = q + term
        r = normalize(r - term * H)
    raise JetCapacityError("division did not terminate")


def _deg(mono: Expr, var) -> int:
    for a, k in mono.poly and next(iter(mono.poly)) or ():
        if isinstance(a, Sym) and a.coord == var:
            return k
    return 0


def multipliers(div: Expr):
    """(L1, L2) with div = L1*H + L2*H* exactly, when both are plain functions."""
    H, Hs = equation(), adjoint_equation()
    # H* is -v_t + ...: divide by -H* which is monic in v_t
    q2, r = _divide_by(div, normalize(-Hs), jet("v", 1, 0))
    q1, r = _divide_by(r, H, jet("u", 1, 0))
    if r.poly:
        return None
    return (q1, normalize(-q2))


def divergence_onshell(T: ConservedVector) -> DivergenceReport:
    div = divergence(T)
    rem = reduce_system(div, ("u", "v"))
    rem_rev = reduce_system(div, ("v", "u"))
    z = is_zero(rem)
    mult = multipliers(div)
    return DivergenceReport(div, rem, mult, bool(z), z.certificate,
                            bool(is_zero(normalize(rem - rem_rev))))


__all__ = [
    "ConservedVector", "DivergenceReport", "MULT", "SelfAdjointnessProbe", "adjoint_equation",
    "characteristic", "conserved_vector", "divergence", "divergence_onshell", "equation",
    "formal_lagrangian", "multipliers", "reduce_system", "rules", "self_adjointness",
    "system_rules", "variational_derivative",
]
