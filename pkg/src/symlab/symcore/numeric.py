"""Floating point evaluation and the zero test."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from ..errors import DomainError, UnboundCoordinateError
from .coords import Coordinate, coordinate
from .expr import (
    Add, Apply, Const, Expr, Func, Mul, Pow, Sym, as_expr, atoms, free_funcs, is_polynomial_class,
)

NUMERIC_FUNCTIONS = {
    "tanh": np.tanh,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "sech": lambda a: 1.0 / np.cosh(a),
}

DEFAULT_BOX = {"x": (-2.0, 2.0), "t": (-2.0, 2.0), "lambda": (0.5, 4.0)}
DEFAULT_RANGE = (-2.0, 2.0)
ZERO_TOL = 1e-10
N_SAMPLES = 64


def default_seed() -> int:
    return int(os.environ.get("SYMLAB_SEED", "0"))


def _key(k):
    if isinstance(k, (Coordinate, Func)):
        return k
    if isinstance(k, Sym):
        return k.coord
    if isinstance(k, str):
        return coordinate(k)
    raise TypeError(f"cannot bind {k!r}")


def _label(k) -> str:
    if isinstance(k, Coordinate):
        return k.name
    from .serialize import to_infix

    return to_infix(k)


def eval_numeric(e, point):
    """Evaluate ``e`` with IEEE doubles (numpy arrays broadcast).

    ``point`` maps coordinates (or their names, or Func atoms) to values.
    """
    env = {_key(k): v for k, v in point.items()}
    return _eval(as_expr(e), env)


def _eval(node: Expr, env):
    if isinstance(node, Const):
        return float(node.value)
    if isinstance(node, Sym):
        try:
            return env[node.coord]
        except KeyError:
            raise UnboundCoordinateError(f"unbound coordinate {node.coord.name}") from None
    if isinstance(node, Func):
        try:
            return env[node]
        except KeyError:
            raise UnboundCoordinateError(f"unbound function value {_label(node)}") from None
    if isinstance(node, Add):
        total = 0.0
        for t in node.terms:
            total = total + _eval(t, env)
        return total
    if isinstance(node, Mul):
        prod = 1.0
        for f in node.factors:
            prod = prod * _eval(f, env)
        return prod
    if isinstance(node, Pow):
        base = _eval(node.base, env)
        if node.exp < 0:
            return 1.0 / base ** (-node.exp)
        return base ** node.exp
    if isinstance(node, Apply):
        fn = NUMERIC_FUNCTIONS.get(node.fn)
        if fn is None:
            raise UnboundCoordinateError(f"no numeric implementation for {node.fn}")
        return fn(_eval(node.arg, env))
    raise TypeError(f"cannot evaluate {node!r}")


def sample_variables(e) -> list:
    """Coordinates and function atoms that must be bound to evaluate ``e``."""
    coords = set()
    stack = [as_expr(e)]
    seen = set()
    while stack:
        node = stack.pop()
        for a in atoms(node):
            if a in seen:
                continue
            seen.add(a)
            if isinstance(a, Sym):
                coords.add(a.coord)
            elif isinstance(a, Apply):
                stack.append(a.arg)
            elif isinstance(a, Add):
                stack.append(a)
    ordered = sorted(coords, key=Coordinate.sort_key)
    from .expr import atom_key

    ordered += sorted(free_funcs(e), key=atom_key)
    return ordered


@dataclass
class ZeroCheck:
    zero: bool
    certificate: str  # "canonical" or "sampled"
    witness: dict | None = None
    max_abs: float = 0.0
    samples: int = 0
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.zero


def _box_for(var, box):
    name = var.name if isinstance(var, Coordinate) else None
    if box and name in box:
        return box[name]
    if name in DEFAULT_BOX:
        return DEFAULT_BOX[name]
    return DEFAULT_RANGE


def sample_points(variables, n, box=None, seed=None):
    seed = default_seed() if seed is None else seed
    d = len(variables)
    if d == 0:
        return np.zeros((n, 0))
    sampler = qmc.Sobol(d, scramble=True, seed=seed)
    m = max(1, int(np.ceil(np.log2(n))))
    raw = sampler.random_base2(m)[:n]
    lo = np.array([_box_for(v, box)[0] for v in variables])
    hi = np.array([_box_for(v, box)[1] for v in variables])
    return lo + raw * (hi - lo)


def is_zero(e, box=None, seed=None, tol: float = ZERO_TOL, samples: int = N_SAMPLES) -> ZeroCheck:
    """Decide e == 0: exactly for the polynomial class, by sampling otherwise."""
    e = as_expr(e)
    p = e.poly
    if not p:
        return ZeroCheck(True, "canonical")
    canonical = is_polynomial_class(e)
    variables = sample_variables(e)
    # draw a generous pool; failed evaluations are resampled from it
    pool = sample_points(variables, samples * 4, box=box, seed=seed)
    good = 0
    failed = 0
    worst = 0.0
    witness = None
    from .expr import from_poly

    canon = from_poly(p)
    with np.errstate(all="ignore"):
        for row in pool:
            if good >= samples:
                break
            env = dict(zip(variables, row))
            try:
                val = float(_eval(canon, env))
            except (ZeroDivisionError, OverflowError, ValueError):
                val = float("nan")
            if not np.isfinite(val):
                failed += 1
                continue
            good += 1
            if abs(val) > worst:
                worst = abs(val)
                if worst >= tol:
                    witness = {_label(v): float(x) for v, x in zip(variables, row)}
    if good == 0 or failed > good:
        raise DomainError(
            f"more than half of the sample points are outside the domain of {canon}")
    if canonical:
        return ZeroCheck(False, "canonical", witness=witness, max_abs=worst, samples=good)
    return ZeroCheck(worst < tol, "sampled", witness=None if worst < tol else witness,
                     max_abs=worst, samples=good)
