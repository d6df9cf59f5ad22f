"""Point vector fields, their second prolongation and invariance residuals."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import JetCapacityError, NonPolynomialError
from ..symcore import (
    JET_ORDER, LAMBDA, T, U, X, Const, Coordinate, Expr, Func, Sym, as_expr, free_coords,
    is_zero, jet, normalize, partial_derivative, substitute, total_derivative,
)
from ..symcore.expr import atom_key, free_funcs, from_poly, mono_key, p_add

UT, UX, UTT, UTX, UXX = (Sym(jet("u", 1, 0)), Sym(jet("u", 0, 1)), Sym(jet("u", 2, 0)),
                         Sym(jet("u", 1, 1)), Sym(jet("u", 0, 2)))
_POINT_COORDS = {X, T, U}


def _check_point(e: Expr, label: str):
    bad = [c.name for c in free_coords(e) if c.kind in ("jet", "auxiliary")]
    if bad:
        raise ValueError(f"{label} depends on {', '.join(sorted(bad))}; point fields use x, t, u only")
    for f in free_funcs(e):
        if not set(f.args) <= _POINT_COORDS:
            raise ValueError(f"{label}: function {f.name} has non-point arguments")


@dataclass(frozen=True)
class VectorField:
    """omega d/dx + psi d/dt + chi d/du."""

    omega: Expr
    psi: Expr
    chi: Expr
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for label in ("omega", "psi", "chi"):
            e = normalize(as_expr(getattr(self, label)))
            _check_point(e, label)
            object.__setattr__(self, label, e)

    @property
    def components(self):
        return (self.omega, self.psi, self.chi)

    def apply(self, f) -> Expr:
        """First-order action on a function of (x, t, u)."""
        f = as_expr(f)
        return normalize(self.omega * partial_derivative(f, X)
                         + self.psi * partial_derivative(f, T)
                         + self.chi * partial_derivative(f, U))

    def is_zero(self) -> bool:
        return all(bool(is_zero(c)) for c in self.components)

    def __add__(self, other):
        return VectorField(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return VectorField(*(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(*(-a for a in self.components))

    def scaled(self, c) -> "VectorField":
        c = as_expr(c)
        return VectorField(*(c * a for a in self.components))

    def __rmul__(self, c):
        return self.scaled(c)

    def __str__(self):
        parts = []
        for comp, d in zip(self.components, ("d/dx", "d/dt", "d/du")):
            if comp.poly:
                parts.append(f"({comp})*{d}")
        return " + ".join(parts) or "0"


G1 = VectorField(Const(1), Const(0), Const(0), name="G1")
G2 = VectorField(Const(0), Const(1), Const(0), name="G2")
G3 = VectorField(Sym(X), 2 * Sym(T), Const(0), name="G3")
BASIS = (G1, G2, G3)
BASIS_NAMES = ("G1", "G2", "G3")


def infinite_field(q=None) -> VectorField:
    """G_q = q(t, x) d/du."""
    q = Func("q", (T, X)) if q is None else q
    return VectorField(Const(0), Const(0), q, name="Gq")


def generic_field() -> VectorField:
    return VectorField(Func("omega", (X, T, U)), Func("psi", (X, T, U)), Func("chi", (X, T, U)),
                       name="generic")


def named_field(name: str) -> VectorField:
    table = {"G1": G1, "G2": G2, "G3": G3, "Gq": infinite_field()}
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"unknown generator {name!r}; expected one of {sorted(table)}") from None


@dataclass(frozen=True)
class ProlongedField:
    base: VectorField
    chi_t: Expr
    chi_x: Expr
    chi_xx: Expr
    chi_tt: Expr
    chi_tx: Expr

    def apply(self, f) -> Expr:
        f = as_expr(f)
        out = self.base.omega * partial_derivative(f, X) + self.base.psi * partial_derivative(f, T)
        out = out + self.base.chi * partial_derivative(f, U)
        for coef, j in ((self.chi_t, UT), (self.chi_x, UX), (self.chi_xx, UXX),
                        (self.chi_tt, UTT), (self.chi_tx, UTX)):
            out = out + coef * partial_derivative(f, j.coord)
        return normalize(out)


def prolong2(G: VectorField) -> ProlongedField:
    D = total_derivative
    w, p, c = G.components
    chi_t = normalize(D(c, "t") - UT * D(p, "t") - UX * D(w, "t"))
    chi_x = normalize(D(c, "x") - UT * D(p, "x") - UX * D(w, "x"))
    chi_tt = normalize(D(chi_t, "t") - UTT * D(p, "t") - UTX * D(w, "t"))
    chi_xx = normalize(D(chi_x, "x") - UTX * D(p, "x") - UXX * D(w, "x"))
    chi_tx = normalize(D(chi_t, "x") - UTT * D(p, "x") - UTX * D(w, "x"))
    return ProlongedField(G, chi_t, chi_x, chi_xx, chi_tt, chi_tx)


# ---------------------------------------------------------------------------
# the equation and its on-shell rule

def onshell_rules(base: str, rhs: Expr, max_order: int = JET_ORDER) -> dict:
    """Bindings eliminating every t-derivative of ``base`` that fits in the jet bound.

    ``rhs`` gives ``base_t`` in terms of x-jets only.
    """
    rules = {}

    def reduce(e):
        return substitute(e, rules) if rules else normalize(e)

    for nt in range(1, max_order + 1):
        for nx in range(0, max_order - nt + 1):
            target = jet(base, nt, nx)
            try:
                if nt == 1 and nx == 0:
                    val = normalize(rhs)
                elif nx > 0:
                    val = reduce(total_derivative(rules[jet(base, nt, nx - 1)], "x", max_order))
                else:
                    val = reduce(total_derivative(rules[jet(base, nt - 1, 0)], "t", max_order))
            except (JetCapacityError, KeyError):
                break
            rules[target] = val
    return rules


def reduce_modulo(e, rules: dict, base: str) -> Expr:
    """Substitute on-shell rules; every t-jet of ``base`` must be covered."""
    e = normalize(e)
    for _ in range(4):
        hits = {c for c in free_coords(e) if c in rules}
        if not hits:
            break
        e = substitute(e, {c: rules[c] for c in hits})
    left = [c.name for c in free_coords(e) if c.is_field and c.base == base and c.nt > 0]
    if left:
        raise JetCapacityError(
            f"cannot eliminate {', '.join(sorted(left))} on-shell within jet order {JET_ORDER}")
    return e


@dataclass(frozen=True)
class PDESpec:
    residual_expr: Expr
    onshell_rule: dict
    name: str = ""

    def onshell(self, e) -> Expr:
        return reduce_modulo(e, self.onshell_rule, "u")


def chaffee_infante() -> PDESpec:
    lam, u = Sym(LAMBDA), Sym(U)
    rho = normalize(UT - UXX + lam * (u ** 3 - u))
    rhs = UXX - lam * (u ** 3 - u)
    return PDESpec(rho, onshell_rules("u", rhs), name="chaffee-infante")


CI = chaffee_infante()


# ---------------------------------------------------------------------------
# invariance

@dataclass(frozen=True)
class SymmetryReport:
    field: str
    residual_preshell: Expr
    residual_onshell: Expr
    is_symmetry: bool
    certificate: str

    def to_json(self) -> dict:
        from ..symcore import to_infix

        return {
            "field": self.field,
            "residual_preshell": to_infix(self.residual_preshell),
            "residual_onshell": to_infix(self.residual_onshell),
            "is_symmetry": self.is_symmetry,
            "certificate": self.certificate,
        }


def preshell_residual(G: VectorField, pde: PDESpec = CI) -> Expr:
    return prolong2(G).apply(pde.residual_expr)


def invariance_residual(G: VectorField, pde: PDESpec = CI) -> Expr:
    """G^(2) rho restricted to solutions; zero iff G is a point symmetry."""
    return pde.onshell(preshell_residual(G, pde))


def check_symmetry(G: VectorField, pde: PDESpec = CI, label: str | None = None) -> SymmetryReport:
    pre = preshell_residual(G, pde)
    post = pde.onshell(pre)
    z = is_zero(post)
    return SymmetryReport(label or G.name or str(G), pre, post, bool(z), z.certificate)


# ---------------------------------------------------------------------------
# splitting into determining equations

def split_monomials(e, selected) -> list:
    """Group ``e`` by monomials in the selected coordinates.

    Returns ``[(monomial, coefficient)]`` sorted by monomial order; raises
    NonPolynomialError when a selected coordinate appears non-polynomially.
    """
    if not callable(selected):
        chosen = set(selected)
        selected = chosen.__contains__
    groups = {}
    for m, c in as_expr(e).poly.items():
        key, rest = [], []
        for a, k in m:
            if isinstance(a, Sym) and selected(a.coord):
                if k < 0:
                    raise NonPolynomialError(f"negative power of {a.coord.name}")
                key.append((a, k))
            else:
                if any(selected(cc) for cc in free_coords(a)):
                    raise NonPolynomialError(f"{a} is not polynomial in the split coordinates")
                rest.append((a, k))
        key = tuple(key)
        groups[key] = p_add(groups.get(key, {}), {tuple(rest): c})
    out = []
    for key in sorted(groups, key=mono_key):
        coef = groups[key]
        if coef:
            out.append((from_poly({key: Fraction(1)}), from_poly(coef)))
    return out


def _is_u_jet(c: Coordinate) -> bool:
    return c.kind == "jet" and c.base == "u"


def split_by_jet_monomials(residual) -> list:
    return split_monomials(residual, _is_u_jet)


def determining_equations(G: VectorField, pde: PDESpec = CI, onshell: bool = True,
                          split_u: bool = False) -> list:
    """Coefficients of the jet monomials of G^(2) rho (on-shell by default).

    ``split_u`` additionally splits each coefficient by powers of u, valid when
    the unknown functions do not depend on u.
    """
    res = invariance_residual(G, pde) if onshell else preshell_residual(G, pde)
    eqs = split_by_jet_monomials(res)
    if not split_u:
        return eqs
    out = []
    for mono, coef in eqs:
        for umono, c in split_monomials(coef, {U}):
            out.append((normalize(mono * umono), c))
    return out


def field_family(A=None, B=None, P=None, Q=None) -> VectorField:
    """psi = A(t), omega = B(t, x), chi = P(t, x) u + Q(t, x)."""
    A = Func("A", (T,)) if A is None else A
    B = Func("B", (T, X)) if B is None else B
    P = Func("P", (T, X)) if P is None else P
    Q = Func("Q", (T, X)) if Q is None else Q
    return VectorField(B, A, as_expr(P) * Sym(U) + Q, name="family")


__all__ = [
    "BASIS", "BASIS_NAMES", "CI", "G1", "G2", "G3", "PDESpec", "ProlongedField", "SymmetryReport",
    "VectorField", "chaffee_infante", "check_symmetry", "determining_equations", "field_family",
    "generic_field", "infinite_field", "invariance_residual", "named_field", "onshell_rules",
    "preshell_residual", "prolong2", "reduce_modulo", "split_by_jet_monomials", "split_monomials",
    "atom_key",
]
