"""Minimal symbolic engine over jet coordinates with exact rational coefficients."""
from .calculus import (
    DERIVATIVE_RULES, partial_derivative, substitute, substitute_function, total_derivative,
    total_derivative_n,
)
from .coords import (
    JET_ORDER, LAMBDA, T, U, V, X, Coordinate, coordinate, jet, symbol,
)
from .expr import (
    Add, Apply, Const, Expr, Func, Mul, Pow, Sym, as_expr, constant_value, exp, free_coords,
    free_funcs, is_constant, is_polynomial_class, normalize, sech, sqrt, tanh,
)
from .numeric import ZeroCheck, eval_numeric, is_zero
from .serialize import from_json, parse, to_infix, to_json

x, t, u, v, lam = Sym(X), Sym(T), Sym(U), Sym(V), Sym(LAMBDA)


def J(name: str) -> Sym:
    """Shorthand: ``J("u_tx")`` is the jet coordinate u_tx as an expression."""
    return Sym(coordinate(name))


__all__ = [
    "Add", "Apply", "Const", "Coordinate", "DERIVATIVE_RULES", "Expr", "Func", "J", "JET_ORDER",
    "LAMBDA", "Mul", "Pow", "Sym", "T", "U", "V", "X", "ZeroCheck", "as_expr", "constant_value",
    "coordinate", "eval_numeric", "exp", "free_coords", "free_funcs", "from_json", "is_constant",
    "is_polynomial_class", "is_zero", "jet", "lam", "normalize", "parse", "partial_derivative",
    "sech", "sqrt", "substitute", "substitute_function", "symbol", "t", "tanh", "to_infix",
    "to_json", "total_derivative", "total_derivative_n", "u", "v", "x",
]
