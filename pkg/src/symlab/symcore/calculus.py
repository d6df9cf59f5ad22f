"""Partial and total derivatives, substitution."""
from __future__ import annotations

from fractions import Fraction

from ..errors import CyclicBindingError, JetCapacityError, RuleMissingError, SubstitutionError
from .coords import JET_ORDER, T, X, Coordinate, coordinate
from .expr import (
    Add, Apply, Const, Expr, Func, Pow, Sym, as_expr, canon_mono, free_coords, from_poly,
    p_add, p_mul, p_pow, p_scale,
)

DERIVATIVE_RULES = {
    "tanh": lambda a: Const(1) - Pow(Apply("tanh", a), 2),
    "exp": lambda a: Apply("exp", a),
    "sqrt": lambda a: Const(Fraction(1, 2)) * Pow(Apply("sqrt", a), -1),
    "sech": lambda a: -(Apply("sech", a) * Apply("tanh", a)),
}


def _as_coord(c) -> Coordinate:
    if isinstance(c, Coordinate):
        return c
    if isinstance(c, Sym):
        return c.coord
    if isinstance(c, str):
        return coordinate(c)
    raise TypeError(f"not a coordinate: {c!r}")


def _d_atom(a, c: Coordinate) -> dict:
    if isinstance(a, Sym):
        return {(): Fraction(1)} if a.coord == c else {}
    if isinstance(a, Func):
        return a.derivative(c).poly if c in a.args else {}
    if isinstance(a, Apply):
        inner = _d_poly(a.arg.poly, c)
        if not inner:
            return {}
        rule = DERIVATIVE_RULES.get(a.fn)
        if rule is None:
            raise RuleMissingError(f"no derivative rule for {a.fn!r}")
        return p_mul(rule(a.arg).poly, inner)
    if isinstance(a, Add):
        return _d_poly(a.poly, c)
    raise TypeError(f"not an atom: {a!r}")


def _d_poly(p: dict, c: Coordinate) -> dict:
    out = {}
    for m, coef in p.items():
        for i, (a, e) in enumerate(m):
            if c not in free_coords(a):
                continue
            da = _d_atom(a, c)
            if not da:
                continue
            rest = dict(m)
            rest[a] = e - 1
            term = p_mul(canon_mono(rest), da)
            out = p_add(out, p_scale(term, coef * e))
    return out


def partial_derivative(e, c) -> Expr:
    """d e / d c with every other coordinate held fixed."""
    return from_poly(_d_poly(as_expr(e).poly, _as_coord(c)))


def total_derivative(e, direction: str, max_order: int = JET_ORDER) -> Expr:
    """D_x or D_t, acting on x/t explicitly and on u, v and their jets."""
    if direction not in ("x", "t"):
        raise ValueError(f"direction must be 'x' or 't', got {direction!r}")
    p = as_expr(e).poly
    out = _d_poly(p, X if direction == "x" else T)
    for c in sorted(free_coords(e), key=Coordinate.sort_key):
        if not c.is_field:
            continue
        nxt = c.shifted(direction)
        if nxt.order > max_order:
            raise JetCapacityError(
                f"D_{direction}({c.name}) = {nxt.name} exceeds jet order {max_order}")
        dc = _d_poly(p, c)
        if dc:
            out = p_add(out, p_mul(Sym(nxt).poly, dc))
    return from_poly(out)


def total_derivative_n(e, nt: int = 0, nx: int = 0, max_order: int = JET_ORDER) -> Expr:
    for _ in range(nx):
        e = total_derivative(e, "x", max_order)
    for _ in range(nt):
        e = total_derivative(e, "t", max_order)
    return as_expr(e)


# ---------------------------------------------------------------------------
# substitution

def _subst_poly(p: dict, bindings: dict, cache: dict) -> dict:
    out = {}
    for m, coef in p.items():
        term = {(): coef}
        for a, e in m:
            term = p_mul(term, p_pow(_subst_atom(a, bindings, cache), e))
            if not term:
                break
        out = p_add(out, term)
    return out


def _subst_atom(a, bindings, cache) -> dict:
    if a in cache:
        return cache[a]
    if isinstance(a, Sym):
        r = bindings[a.coord].poly if a.coord in bindings else a.poly
    elif isinstance(a, Func):
        hit = [c.name for c in a.args if c in bindings]
        if hit:
            raise SubstitutionError(
                f"cannot substitute {', '.join(hit)} inside argument list of {a.name}")
        r = a.poly
    elif isinstance(a, Apply):
        r = Apply(a.fn, from_poly(_subst_poly(a.arg.poly, bindings, cache))).poly
    else:
        r = _subst_poly(a.poly, bindings, cache)
    cache[a] = r
    return r


def _normalize_bindings(bindings) -> dict:
    return {_as_coord(k): as_expr(v) for k, v in bindings.items()}


def substitute(e, bindings, resolve: bool = True) -> Expr:
    """Simultaneous substitution of coordinates, then normalize.

    Jets of bound coordinates are left alone; bind every jet explicitly.  With
    ``resolve`` (the default) bindings may refer to each other and are chained
    once; a binding that still mentions a bound coordinate is cyclic.  With
    ``resolve=False`` every binding is applied once as written, so a change of
    variables such as ``x -> x - eps`` is allowed.
    """
    b = _normalize_bindings(bindings)
    if not b:
        return from_poly(as_expr(e).poly)
    if not resolve:
        return from_poly(_subst_poly(as_expr(e).poly, b, {}))
    bound = set(b)
    # one resolution pass, after which no binding may mention a bound coordinate
    resolved = {}
    for c, val in b.items():
        if not (free_coords(val) & bound):
            resolved[c] = val
            continue
        once = from_poly(_subst_poly(val.poly, b, {}))
        if free_coords(once) & bound:
            raise CyclicBindingError(f"binding for {c.name} is cyclic")
        resolved[c] = once
    return from_poly(_subst_poly(as_expr(e).poly, resolved, {}))


def substitute_function(e, name: str, replacement) -> Expr:
    """Replace the undetermined function ``name`` (and all its derivatives).

    ``replacement`` is an expression in the function's argument coordinates; a
    derivative atom is replaced by the matching partial derivative.
    """
    from .expr import free_funcs

    replacement = as_expr(replacement)
    targets = [f for f in free_funcs(e) if f.name == name]
    cache = {}
    for f in targets:
        r = replacement
        for c, k in zip(f.args, f.derivs):
            for _ in range(k):
                r = partial_derivative(r, c)
        cache[f] = as_expr(r).poly
    if not cache:
        return from_poly(as_expr(e).poly)
    return from_poly(_subst_funcs(as_expr(e).poly, cache, {}))


def _subst_funcs(p, table, memo):
    out = {}
    for m, coef in p.items():
        term = {(): coef}
        for a, e in m:
            if a in table:
                r = table[a]
            elif isinstance(a, Apply):
                key = ("apply", a)
                if key not in memo:
                    memo[key] = Apply(a.fn, from_poly(_subst_funcs(a.arg.poly, table, memo))).poly
                r = memo[key]
            elif isinstance(a, Add):
                key = ("add", a)
                if key not in memo:
                    memo[key] = _subst_funcs(a.poly, table, memo)
                r = memo[key]
            else:
                r = a.poly
            term = p_mul(term, p_pow(r, e))
            if not term:
                break
        out = p_add(out, term)
    return out
