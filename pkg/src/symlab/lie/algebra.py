"""Commutators, basis decomposition and the adjoint representation."""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import NonClosureError, NonPolynomialError, SeriesCapError
from ..symcore import (
    Const, Expr, Sym, T, U, X, as_expr, constant_value, eval_numeric, exp, is_constant, is_zero,
    normalize, symbol, to_infix,
)
from .fields import BASIS, BASIS_NAMES, VectorField, split_monomials

EPS = Sym(symbol("eps"))
SERIES_CAP = 16


def commutator(A: VectorField, B: VectorField) -> VectorField:
    """[A, B] acting as A(B(f)) - B(A(f))."""
    comps = [normalize(A.apply(b) - B.apply(a)) for a, b in zip(A.components, B.components)]
    return VectorField(*comps)


def express_in_basis(F: VectorField, basis=BASIS) -> tuple:
    """Coefficients c with F = sum c_i basis_i.

    Coefficients may depend on parameters (eps, lambda) but not on x, t, u.
    Raises NonClosureError when F is outside the span.
    """
    n = len(basis)
    rows, rhs = [], []
    xtu = {X, T, U}
    for k in range(3):
        monos = {}
        try:
            split = split_monomials(F.components[k], xtu)
        except NonPolynomialError:
            raise NonClosureError(f"{F} is not in the span of the basis") from None
        for mono, coef in split:
            monos.setdefault(mono, [None, [Fraction(0)] * n])[0] = coef
        for i, G in enumerate(basis):
            for mono, coef in split_monomials(G.components[k], xtu):
                if not is_constant(coef):
                    raise ValueError("basis fields must have rational coefficients")
                monos.setdefault(mono, [None, [Fraction(0)] * n])[1][i] = constant_value(coef)
        for mono, (target, row) in monos.items():
            rows.append(list(row))
            rhs.append(target if target is not None else Const(0))
    # exact elimination; the right-hand side may be symbolic
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        p = rows[r][col]
        rows[r] = [v / p for v in rows[r]]
        rhs[r] = normalize(Const(1 / p) * rhs[r])
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
                rhs[i] = normalize(rhs[i] - Const(f) * rhs[r])
        pivots.append(col)
        r += 1
    for i in range(r, len(rows)):
        if not is_zero(rhs[i]):
            raise NonClosureError(f"{F} is not in the span of the basis")
    if len(pivots) < n:
        raise ValueError("basis fields are linearly dependent")
    out = [Const(0)] * n
    for i, col in enumerate(pivots):
        out[col] = rhs[i]
    return tuple(out)


def combine(coeffs, basis=BASIS) -> VectorField:
    total = VectorField(Const(0), Const(0), Const(0))
    for c, G in zip(coeffs, basis):
        total = total + G.scaled(c)
    return total


@dataclass(frozen=True)
class AlgebraElement:
    """sum coeffs[i] * G_(i+1) in the three-dimensional algebra."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(normalize(as_expr(c)) for c in self.coeffs))

    @classmethod
    def of(cls, *coeffs):
        return cls(tuple(Fraction(c) if isinstance(c, int) else c for c in coeffs))

    @property
    def field(self) -> VectorField:
        return combine(self.coeffs)

    def rational(self) -> tuple:
        return tuple(constant_value(c) for c in self.coeffs)

    def numeric(self, **params) -> np.ndarray:
        return np.array([float(eval_numeric(c, params)) for c in self.coeffs])

    def __str__(self):
        parts = []
        for c, name in zip(self.coeffs, BASIS_NAMES):
            if not c.poly:
                continue
            s = to_infix(c)
            if s == "1":
                parts.append(name)
            elif s == "-1":
                parts.append("-" + name)
            else:
                parts.append(f"({s})*{name}" if " " in s else f"{s}*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


# ---------------------------------------------------------------------------
# commutator table

@dataclass(frozen=True)
class CommutatorTable:
    names: tuple
    entries: tuple  # entries[i][j] = coefficient tuple of [G_i, G_j]

    def entry(self, i: int, j: int) -> AlgebraElement:
        return AlgebraElement(self.entries[i][j])

    def structure_constants(self) -> np.ndarray:
        n = len(self.names)
        C = np.zeros((n, n, n))
        for i in range(n):
            for j in range(n):
                for k, c in enumerate(self.entries[i][j]):
                    C[k, i, j] = float(constant_value(c))
        return C

    def jacobi_holds(self) -> bool:
        C = self.structure_constants()
        n = len(self.names)
        # [[a,b],c] + [[b,c],a] + [[c,a],b] in structure-constant form
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    total = (C[:, :, c] @ C[:, a, b] + C[:, :, a] @ C[:, b, c]
                             + C[:, :, b] @ C[:, c, a])
                    if np.any(np.abs(total) > 1e-12):
                        return False
        return True

    def to_json(self) -> dict:
        return {
            "basis": list(self.names),
            "table": {f"[{a},{b}]": str(self.entry(i, j))
                      for i, a in enumerate(self.names) for j, b in enumerate(self.names)},
        }


def commutator_table(basis=BASIS, names=BASIS_NAMES) -> CommutatorTable:
    n = len(basis)
    entries = tuple(tuple(express_in_basis(commutator(basis[i], basis[j]), basis)
                          for j in range(n)) for i in range(n))
    return CommutatorTable(tuple(names), entries)


# ---------------------------------------------------------------------------
# adjoint representation

def _ratio(Fn: VectorField, Fp: VectorField):
    """Rational c with Fn == c * Fp, else None."""
    for a, b in zip(Fn.components, Fp.components):
        if b.poly:
            ma, ca = next(iter(sorted_items(a)), (None, None))
            mb, cb = next(iter(sorted_items(b)))
            if ma is None:
                return Fraction(0) if Fn.is_zero() else None
            c = ca / cb
            if (Fn - Fp.scaled(Const(c))).is_zero():
                return c
            return None
    return None


def sorted_items(e: Expr):
    from ..symcore.expr import sorted_terms

    return sorted_terms(e.poly)


def lie_series_terms(A: VectorField, B: VectorField, cap: int = SERIES_CAP) -> list:
    """B, [A,B], [A,[A,B]], ... up to ``cap`` terms."""
    terms = [B]
    for _ in range(cap - 1):
        terms.append(commutator(A, terms[-1]))
    return terms


def adjoint_action(A: VectorField, B: VectorField, eps=EPS, basis=BASIS) -> VectorField:
    """Ad(exp(eps A)) B = sum_n (-eps)^n / n! ad_A^n B, in closed form.

    The series is summed exactly when it terminates or becomes geometric
    (ad_A T_n = c T_n) within SERIES_CAP terms; otherwise B is decomposed over
    the basis and each piece is summed separately.
    """
    eps = as_expr(eps)
    closed = _closed_series(A, B, eps)
    if closed is not None:
        return closed
    try:
        coeffs = express_in_basis(B, basis)
    except NonClosureError:
        coeffs = None
    if coeffs is not None and sum(1 for c in coeffs if c.poly) > 1:
        total = VectorField(Const(0), Const(0), Const(0))
        for c, G in zip(coeffs, basis):
            if c.poly:
                piece = _closed_series(A, G, eps)
                if piece is None:
                    break
                total = total + piece.scaled(c)
        else:
            return total
    raise SeriesCapError(f"Lie series of {B} under {A} not recognised within {SERIES_CAP} terms")


def _closed_series(A, B, eps):
    terms = [B]
    total = VectorField(Const(0), Const(0), Const(0))
    for n in range(SERIES_CAP):
        Tn = terms[-1]
        if Tn.is_zero():
            return total
        nxt = commutator(A, Tn)
        c = _ratio(nxt, Tn)
        if c is not None and c != 0:
            # tail sum_{k>=n} (-eps)^k c^(k-n) / k! = c^-n (exp(-c eps) - sum_{k<n} (-c eps)^k/k!)
            head = sum(((-c * eps) ** k * Const(Fraction(1, math.factorial(k))) for k in range(n)),
                       Const(0))
            tail = Const(c ** -n) * (exp(-c * eps) - head)
            return total + Tn.scaled(tail)
        total = total + Tn.scaled((-eps) ** n * Const(Fraction(1, math.factorial(n))))
        terms.append(nxt)
    return None


def adjoint_table(basis=BASIS, names=BASIS_NAMES, eps=EPS) -> dict:
    """Ad(exp(eps G_i)) G_j expressed in the basis, keyed by (i, j)."""
    out = {}
    for i, A in enumerate(basis):
        for j, B in enumerate(basis):
            out[(i, j)] = AlgebraElement(express_in_basis(adjoint_action(A, B, eps, basis), basis))
    return out


@functools.lru_cache(maxsize=8)
def _cached_adjoint_table(basis) -> dict:
    return adjoint_table(tuple(basis))


def adjoint_matrix(generator: int, eps: float, basis=BASIS) -> np.ndarray:
    """Matrix M with l' = M l for v = sum l_j G_j under Ad(exp(eps G_generator))."""
    table = _cached_adjoint_table(tuple(basis))
    n = len(basis)
    M = np.zeros((n, n))
    for j in range(n):
        M[:, j] = table[(generator, j)].numeric(eps=eps)
    return M


def adjoint_action_numeric(A: VectorField, B: VectorField, eps: float, basis=BASIS) -> np.ndarray:
    """Basis coefficients of Ad(exp(eps A)) B at a numeric eps."""
    F = adjoint_action(A, B, EPS, basis)
    return AlgebraElement(express_in_basis(F, basis)).numeric(eps=eps)


__all__ = [
    "AlgebraElement", "CommutatorTable", "EPS", "SERIES_CAP", "adjoint_action",
    "adjoint_action_numeric", "adjoint_matrix", "adjoint_table", "combine", "commutator",
    "commutator_table", "express_in_basis", "lie_series_terms",
]
