"""One-parameter point transformation groups and their action on solutions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError
from .lie.algebra import EPS, AlgebraElement
from .symcore import (
    LAMBDA, T, U, X, Const, Expr, Func, Sym, as_expr, eval_numeric, exp, free_coords, is_zero,
    normalize, partial_derivative, sqrt, substitute, symbol, tanh, to_infix,
)

x, t, u, lam = Sym(X), Sym(T), Sym(U), Sym(LAMBDA)
ONE = Const(1)
HALF = Const(Fraction(1, 2))


@dataclass(frozen=True)
class GroupAction:
    """(x, t, u) -> (xbar, tbar, ubar), each an expression in x, t, u and eps."""

    id: str
    image: tuple
    element: AlgebraElement | None = None
    k: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(normalize(as_expr(e)) for e in self.image))

    def at(self, eps) -> tuple:
        """Image with eps bound to an exact value or expression."""
        return tuple(substitute(e, {EPS.coord: as_expr(eps)}) for e in self.image)

    def generator(self) -> tuple:
        """d(image)/d eps at eps = 0, i.e. (omega, psi, chi)."""
        return tuple(substitute(partial_derivative(e, EPS), {EPS.coord: Const(0)})
                     for e in self.image)

    def inverse(self) -> tuple:
        """Pre-image (x, t) of a point (x, t) as expressions in x, t, eps.

        Each catalogued map is affine in its own coordinate
        (xbar = a x + b, tbar = c t + d); the inverse is derived from that form.
        """
        xb, tb, _ = self.image
        return (_invert_affine(xb, X, "xbar"), _invert_affine(tb, T, "tbar"))

    def to_json(self) -> dict:
        out = {"id": self.id, "image": [to_infix(e) for e in self.image]}
        if self.element is not None:
            out["element"] = [to_infix(c) for c in self.element.coeffs]
        if self.k is not None:
            out["k"] = str(self.k)
        return out


def _invert_affine(e: Expr, c, label):
    others = ({X, T, U} - {c})
    if free_coords(e) & others:
        raise ValueError(f"{label} mixes coordinates; not invertible componentwise")
    a = partial_derivative(e, c)
    if c in free_coords(a):
        raise ValueError(f"{label} is not affine in {c.name}")
    if not a.poly:
        raise ValueError(f"{label} is degenerate")
    b = substitute(e, {c: Const(0)})
    return normalize((Sym(c) - b) * a ** -1)


def _action(id_, xb, tb, ub=None, element=None, k=None):
    return GroupAction(id_, (xb, tb, u if ub is None else ub), element, k)


def catalogue(k=Fraction(1), q=None) -> dict:
    """The seven tabulated groups plus the infinite family Xi_q."""
    k = Fraction(k)
    e = EPS
    q = Func("q", (T, X)) if q is None else as_expr(q)
    return {
        "Xi1": _action("Xi1", x + e, t, element=AlgebraElement.of(1, 0, 0)),
        "Xi2": _action("Xi2", x, t + e, element=AlgebraElement.of(0, 1, 0)),
        "Xi3": _action("Xi3", exp(e) * x, exp(2 * e) * t, element=AlgebraElement.of(0, 0, 1)),
        "Xi4": _action("Xi4", x + e, t + Const(k) * e, element=AlgebraElement.of(1, k, 0), k=k),
        "Xi5": _action("Xi5", exp(e) * (1 + x) - 1, exp(2 * e) * t,
                       element=AlgebraElement.of(1, 0, 1)),
        "Xi6": _action("Xi6", exp(e) * (1 + x) - 1, HALF * (exp(2 * e) * (1 + 2 * t) - 1),
                       element=AlgebraElement.of(1, 1, 1)),
        "Xi7": _action("Xi7", exp(e) * x, HALF * (exp(2 * e) * (1 + 2 * t) - 1),
                       element=AlgebraElement.of(0, 1, 1)),
        "Xiq": _action("Xiq", x, t, u + e * q),
    }


ACTION_IDS = ("Xi1", "Xi2", "Xi3", "Xi4", "Xi5", "Xi6", "Xi7", "Xiq")


def get_action(name: str, k=Fraction(1), q=None) -> GroupAction:
    key = name.replace("Ξ", "Xi").replace("_", "")
    table = catalogue(k, q)
    if key not in table:
        raise KeyError(f"unknown group {name!r}; expected one of {list(ACTION_IDS)}")
    return table[key]


def flow(v, eps=EPS) -> GroupAction:
    """Exponentiate l1 G1 + l2 G2 + l3 G3 in closed form.

    The characteristic system x' = l1 + l3 x, t' = l2 + 2 l3 t, u' = 0 is linear.
    """
    if not isinstance(v, AlgebraElement):
        v = AlgebraElement.of(*v)
    l1, l2, l3 = v.rational()
    e = as_expr(eps)
    if l3 == 0:
        xb = x + Const(l1) * e
        tb = t + Const(l2) * e
    else:
        sx = Const(l1 / l3)
        st = Const(l2 / (2 * l3))
        xb = exp(Const(l3) * e) * (x + sx) - sx
        tb = exp(Const(2 * l3) * e) * (t + st) - st
    return GroupAction(f"flow({l1},{l2},{l3})", (xb, tb, u), element=v)


def apply_action(a: GroupAction, eps: float, p) -> tuple:
    xv, tv, uv = p
    env = {X: xv, T: tv, U: uv, EPS.coord: eps}
    return tuple(float(eval_numeric(e, env)) for e in a.image)


# ---------------------------------------------------------------------------
# solutions

@dataclass(frozen=True)
class SolutionFn:
    """u(x, t) as an expression; ``params`` binds lambda, eps and friends numerically."""

    expr: Expr
    params: dict = field(default_factory=dict)
    exact: bool = False
    label: str = ""

    def __call__(self, xv, tv):
        env = {X: xv, T: tv}
        env.update({_coord(k): v for k, v in self.params.items()})
        with np.errstate(all="ignore"):
            return eval_numeric(self.expr, env)

    def residual_expr(self) -> Expr:
        """u_t - u_xx + lambda (u^3 - u) for this u, symbolically."""
        F = self.expr
        uxx = partial_derivative(partial_derivative(F, X), X)
        return normalize(partial_derivative(F, T) - uxx + lam * (F ** 3 - F))

    def residual(self, xv, tv):
        env = {X: xv, T: tv}
        env.update({_coord(k): v for k, v in self.params.items()})
        with np.errstate(all="ignore"):
            return eval_numeric(self.residual_expr(), env)


def _coord(k):
    from .symcore import coordinate

    return coordinate(k) if isinstance(k, str) else k


def _lambda_value(lam_value):
    if isinstance(lam_value, Expr):
        return None
    val = float(lam_value)
    if not val > 0:
        raise DomainError(f"soliton needs lambda > 0 for real delta, got {lam_value}")
    return val


def soliton(lambda_value=None) -> SolutionFn:
    """u = -1/2 (1 + tanh(delta x / 2 + 3 lambda t / 4)), delta = sqrt(lambda/2).

    With ``lambda_value`` None the parameter stays symbolic and unbound.
    """
    params = {}
    if lambda_value is not None:
        params["lambda"] = _lambda_value(lambda_value)
    delta = sqrt(HALF * lam)
    expr = -HALF * (ONE + tanh(HALF * delta * x + Const(Fraction(3, 4)) * lam * t))
    return SolutionFn(normalize(expr), params, exact=True, label="soliton")


def transform_solution(a: GroupAction, eps, F: SolutionFn) -> SolutionFn:
    """Image of the graph u = F(x, t) under the action at parameter eps.

    The new solution at (x, t) is ubar evaluated at the pre-image of (x, t).
    ``eps`` may be a float (bound numerically) or an exact value.
    """
    xp, tp = a.inverse()
    ub = a.image[2]
    params = dict(F.params)
    if isinstance(eps, float):
        # each numerically bound parameter gets its own symbol so that
        # successive transforms do not share one eps
        name = "eps"
        n = 1
        while name in params:
            n += 1
            name = f"eps{n}"
        params[name] = eps
        eps_expr = Sym(symbol(name))
    else:
        eps_expr = as_expr(eps)
    if eps_expr != EPS:
        rename = {EPS.coord: eps_expr}
        xp, tp, ub = (substitute(e, rename) for e in (xp, tp, ub))
    new = substitute(ub, {U: F.expr})
    bind = {}
    if xp != x:
        bind[X] = xp
    if tp != t:
        bind[T] = tp
    if bind:
        new = substitute(new, bind, resolve=False)
    return SolutionFn(new, params, exact=False, label=f"{a.id}({F.label})")


def parse_grid(spec: str) -> tuple:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like a:b:n, got {spec!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 2 or not hi > lo:
        raise ValueError(f"bad grid {spec!r}")
    return lo, hi, n


def grid_residual(F: SolutionFn, grid=(-2.0, 2.0, 41), n_samples: int = 5) -> dict:
    """PDE residual of F over the square grid [a, b]^2 with n points per side."""
    lo, hi, n = grid
    xs = np.linspace(lo, hi, n)
    XX, TT = np.meshgrid(xs, xs, indexing="ij")
    R = np.broadcast_to(np.asarray(F.residual(XX, TT), dtype=float), XX.shape)
    U_ = np.broadcast_to(np.asarray(F(XX, TT), dtype=float), XX.shape)
    absR = np.abs(R)
    idx = np.linspace(0, n - 1, n_samples).astype(int)
    samples = [{"x": float(xs[i]), "t": float(xs[j]), "u": float(U_[i, j]),
                "residual": float(R[i, j])} for i in idx for j in idx]
    return {
        "max_residual": float(absR.max()),
        "mean_residual": float(absR.mean()),
        "sample_values": samples,
        "grid": [lo, hi, n],
        "finite": bool(np.all(np.isfinite(R))),
    }


def grid_table(F: SolutionFn, grid=(-2.0, 2.0, 41)) -> list:
    lo, hi, n = grid
    xs = np.linspace(lo, hi, n)
    XX, TT = np.meshgrid(xs, xs, indexing="ij")
    U_ = np.broadcast_to(np.asarray(F(XX, TT), dtype=float), XX.shape)
    R = np.broadcast_to(np.asarray(F.residual(XX, TT), dtype=float), XX.shape)
    return [(float(XX[i, j]), float(TT[i, j]), float(U_[i, j]), float(R[i, j]))
            for i in range(n) for j in range(n)]


# ---------------------------------------------------------------------------
# the printed transformed solutions, kept as claims to compare against

def printed_xi3_solution(lambda_value) -> SolutionFn:
    """Transformed soliton as printed for the scaling group (coefficients as given)."""
    arg = (lam * Const(Fraction(1, 2)) * sqrt(Const(2)) ** -1 * x * exp(-EPS)
           + Const(Fraction(3, 2)) * lam * t * exp(-2 * EPS))
    expr = -HALF * (ONE + tanh(arg))
    return SolutionFn(normalize(expr), {"lambda": _lambda_value(lambda_value)}, label="printed-Xi3")


def printed_double_solution(lambda_value) -> SolutionFn:
    """Printed composite of the scaling group at eps=1 followed by Xi5."""
    inner = (exp(-EPS) * (ONE + x) - ONE
             + Const(Fraction(3, 2)) * lam * exp(Const(-2)) * exp(-2 * EPS) * t)
    arg = lam * Const(Fraction(1, 2)) * sqrt(Const(2)) ** -1 * exp(Const(-1)) * inner
    expr = -HALF * (ONE + tanh(arg))
    return SolutionFn(normalize(expr), {"lambda": _lambda_value(lambda_value)},
                      label="printed-Xi3-Xi5")


def compare_printed(lambda_value=2.0, eps=1.0, grid=(-2.0, 2.0, 41)) -> dict:
    """Computed pullbacks versus the printed transformed solutions."""
    base = soliton(lambda_value)
    xi3 = transform_solution(get_action("Xi3"), eps, base)
    xi3_once = transform_solution(get_action("Xi3"), 1.0, base)
    double = transform_solution(get_action("Xi5"), eps, xi3_once)
    out = {}
    for name, computed, printed in (
        ("Xi3", xi3, printed_xi3_solution(lambda_value)),
        ("Xi3-then-Xi5", double, printed_double_solution(lambda_value)),
    ):
        printed = SolutionFn(printed.expr, {**printed.params, "eps": eps}, label=printed.label)
        lo, hi, n = grid
        xs = np.linspace(lo, hi, n)
        XX, TT = np.meshgrid(xs, xs, indexing="ij")
        diff = np.abs(np.asarray(computed(XX, TT)) - np.asarray(printed(XX, TT)))
        out[name] = {
            "computed": to_infix(computed.expr),
            "printed": to_infix(printed.expr),
            "max_difference": float(diff.max()),
            "computed_max_residual": grid_residual(computed, grid)["max_residual"],
            "printed_max_residual": grid_residual(printed, grid)["max_residual"],
        }
    return out


def catalogue_matches_flow(k=Fraction(1)) -> dict:
    """Each tabulated map agrees symbolically with the flow of its algebra element."""
    out = {}
    for name, a in catalogue(k).items():
        if a.element is None:
            continue
        f = flow(a.element)
        out[name] = all(bool(is_zero(p - q)) for p, q in zip(a.image, f.image))
    return out


__all__ = [
    "ACTION_IDS", "GroupAction", "SolutionFn", "apply_action", "catalogue",
    "catalogue_matches_flow", "compare_printed", "flow", "get_action", "grid_residual",
    "grid_table", "parse_grid", "printed_double_solution", "printed_xi3_solution", "soliton",
    "symbol", "transform_solution",
]
