"""Expression trees and their canonical polynomial form.

Every node lazily computes ``poly``: a dict mapping monomials to exact
``Fraction`` coefficients.  A monomial is a sorted tuple of ``(atom, exponent)``
pairs.  Atoms are coordinates (``Sym``), undetermined functions (``Func``),
opaque function applications (``Apply``, argument kept canonical) and primitive
sums raised to negative powers (a canonical ``Add``).  ``normalize`` rebuilds
the tree from ``poly``; for expressions without opaque functions or inverted
sums this form is unique.

Two rewriting rules act on monomials because they are always valid:
``sqrt(a)**2 -> a`` and ``exp(a) * exp(b) -> exp(a + b)``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .coords import Coordinate, RESERVED

OPAQUE_FUNCTIONS = ("tanh", "exp", "sqrt", "sech")


class Expr:
    __slots__ = ("_hash", "_poly", "_key", "_free")

    def __init__(self):
        self._hash = None
        self._poly = None
        self._key = None
        self._free = None

    def _args(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._args() == other._args()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._args()))
        return self._hash

    @property
    def poly(self) -> dict:
        if self._poly is None:
            self._poly = self._compute_poly()
        return self._poly

    def _compute_poly(self):
        raise NotImplementedError

    # arithmetic builds unnormalized trees
    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, -as_expr(other)))

    def __rsub__(self, other):
        return Add((as_expr(other), -self))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Mul((self, Pow(as_expr(other), -1)))

    def __rtruediv__(self, other):
        return Mul((as_expr(other), Pow(self, -1)))

    def __neg__(self):
        return Mul((Const(-1), self))

    def __pow__(self, n):
        return Pow(self, n)

    def __str__(self):
        from .serialize import to_infix

        return to_infix(self)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        if isinstance(value, bool) or not isinstance(value, Rational):
            raise TypeError(f"constants must be exact rationals, got {value!r}")
        self.value = Fraction(value)

    def _args(self):
        return (self.value,)

    def _compute_poly(self):
        return p_const(self.value)


class Sym(Expr):
    __slots__ = ("coord",)

    def __init__(self, coord: Coordinate):
        super().__init__()
        self.coord = coord

    def _args(self):
        return (self.coord,)

    def _compute_poly(self):
        return {((self, 1),): Fraction(1)}


class Func(Expr):
    """Undetermined function of coordinates, e.g. q(t, x) or h_u(t, x, u)."""

    __slots__ = ("name", "args", "derivs")

    def __init__(self, name: str, args, derivs=None):
        super().__init__()
        if not name.isidentifier() or name in RESERVED or "_" in name:
            raise ValueError(f"invalid function name {name!r}")
        self.name = name
        self.args = tuple(args)
        self.derivs = tuple(derivs) if derivs is not None else (0,) * len(self.args)
        if len(self.derivs) != len(self.args) or any(d < 0 for d in self.derivs):
            raise ValueError("derivative index does not match arguments")
        if len(set(self.args)) != len(self.args):
            raise ValueError("repeated function argument")

    def _args(self):
        return (self.name, self.args, self.derivs)

    def _compute_poly(self):
        return {((self, 1),): Fraction(1)}

    def derivative(self, coord: Coordinate) -> "Func":
        i = self.args.index(coord)
        d = list(self.derivs)
        d[i] += 1
        return Func(self.name, self.args, d)

    @property
    def base(self) -> "Func":
        return Func(self.name, self.args)


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms):
        super().__init__()
        self.terms = tuple(as_expr(t) for t in terms)

    def _args(self):
        return self.terms

    def _compute_poly(self):
        return p_add(*(t.poly for t in self.terms))


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors):
        super().__init__()
        self.factors = tuple(as_expr(f) for f in factors)

    def _args(self):
        return self.factors

    def _compute_poly(self):
        out = {(): Fraction(1)}
        for f in self.factors:
            out = p_mul(out, f.poly)
            if not out:
                break
        return out


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base, exp: int):
        super().__init__()
        if isinstance(exp, bool) or not isinstance(exp, int):
            raise TypeError("only integer powers are supported")
        self.base = as_expr(base)
        self.exp = exp

    def _args(self):
        return (self.base, self.exp)

    def _compute_poly(self):
        return p_pow(self.base.poly, self.exp)


class Apply(Expr):
    """Opaque function (tanh, exp, sqrt, sech, ...) applied to one argument."""

    __slots__ = ("fn", "arg")

    def __init__(self, fn: str, arg):
        super().__init__()
        self.fn = fn
        self.arg = as_expr(arg)

    def _args(self):
        return (self.fn, self.arg)

    def _compute_poly(self):
        return make_apply(self.fn, self.arg.poly)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, Coordinate):
        return Sym(value)
    return Const(value)


def tanh(e):
    return Apply("tanh", e)


def exp(e):
    return Apply("exp", e)


def sqrt(e):
    return Apply("sqrt", e)


def sech(e):
    return Apply("sech", e)


# ---------------------------------------------------------------------------
# polynomial engine

def p_const(c) -> dict:
    c = Fraction(c)
    return {(): c} if c else {}


def p_add(*polys) -> dict:
    out = {}
    for p in polys:
        for m, c in p.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def p_scale(p, c) -> dict:
    c = Fraction(c)
    if not c:
        return {}
    return {m: v * c for m, v in p.items()}


def p_mul(p, q) -> dict:
    if not p or not q:
        return {}
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            for m, c in mono_mul(m1, m2).items():
                v = out.get(m, 0) + c * c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return out


def p_pow(p, n: int) -> dict:
    if n == 0:
        return {(): Fraction(1)}
    if n > 0:
        result = {(): Fraction(1)}
        base = p
        while n:
            if n & 1:
                result = p_mul(result, base)
            n >>= 1
            if n:
                base = p_mul(base, base)
        return result
    if not p:
        raise ZeroDivisionError("zero raised to a negative power")
    if len(p) == 1:
        (m, c), = p.items()
        return p_scale(canon_mono({a: e * n for a, e in m}), c ** n)
    # pull out the monomial content and leading coefficient, keep a primitive sum
    items = sorted(p.items(), key=lambda mc: mono_key(mc[0]))
    lead = items[0][1]
    content = _mono_content([m for m, _ in items])
    inv_content = {a: -e for a, e in content.items()}
    base = {}
    for m, c in items:
        for mm, cc in mono_mul(m, _mono_tuple(inv_content)).items():
            base[mm] = base.get(mm, 0) + cc * c / lead
    atom = from_poly(base)
    out = canon_mono({atom: n})
    out = p_mul(out, canon_mono({a: e * n for a, e in content.items()}))
    return p_scale(out, lead ** n)


def _mono_content(monos):
    every = {a for m in monos for a, _ in m}
    content = {}
    for a in every:
        e = min(dict(m).get(a, 0) for m in monos)
        if e:
            content[a] = e
    return content


def _mono_tuple(d) -> tuple:
    return tuple(sorted(((a, e) for a, e in d.items() if e), key=lambda ae: atom_key(ae[0])))


@lru_cache(maxsize=200_000)
def mono_mul(m1, m2) -> dict:
    if not m1:
        return {m2: Fraction(1)}
    if not m2:
        return {m1: Fraction(1)}
    d = dict(m1)
    for a, e in m2:
        d[a] = d.get(a, 0) + e
    return canon_mono(d)


def canon_mono(d) -> dict:
    """Canonicalize an atom->exponent map into a polynomial."""
    d = {a: e for a, e in d.items() if e}
    n_exp = 0
    special = False
    for a, e in d.items():
        if isinstance(a, Apply):
            if a.fn == "exp":
                n_exp += 1
                special = special or e != 1 or n_exp > 1
            elif a.fn == "sqrt" and abs(e) >= 2:
                special = True
        elif isinstance(a, Add) and e > 0:
            special = True
    if not special:
        return {_mono_tuple(d): Fraction(1)}
    extra = {(): Fraction(1)}
    plain = {}
    exp_arg = {}
    for a, e in d.items():
        if isinstance(a, Apply) and a.fn == "exp":
            exp_arg = p_add(exp_arg, p_scale(a.arg.poly, e))
        elif isinstance(a, Apply) and a.fn == "sqrt" and abs(e) >= 2:
            q = int(e / 2)
            r = e - 2 * q
            extra = p_mul(extra, p_pow(a.arg.poly, q))
            if r:
                plain[a] = plain.get(a, 0) + r
        elif isinstance(a, Add) and e > 0:
            extra = p_mul(extra, p_pow(a.poly, e))
        else:
            plain[a] = plain.get(a, 0) + e
    if exp_arg:
        extra = p_mul(extra, make_apply("exp", exp_arg))
    return p_mul(extra, {_mono_tuple(plain): Fraction(1)})


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def make_apply(fn: str, arg_poly: dict) -> dict:
    if set(arg_poly) <= {()}:
        c = arg_poly.get((), Fraction(0))
        if c == 0:
            value = {"tanh": 0, "sech": 1, "exp": 1, "sqrt": 0}.get(fn)
            if value is not None:
                return p_const(value)
        if fn == "sqrt" and c > 0 and _is_square(c.numerator) and _is_square(c.denominator):
            return p_const(Fraction(math.isqrt(c.numerator), math.isqrt(c.denominator)))
    atom = Apply(fn, from_poly(arg_poly))
    return {((atom, 1),): Fraction(1)}


# ---------------------------------------------------------------------------
# ordering

def atom_key(a):
    if a._key is None:
        if isinstance(a, Sym):
            a._key = (0, a.coord.sort_key())
        elif isinstance(a, Func):
            a._key = (1, a.name, tuple(c.sort_key() for c in a.args), a.derivs)
        elif isinstance(a, Apply):
            a._key = (2, a.fn, poly_key(a.arg.poly))
        elif isinstance(a, Add):
            a._key = (3, poly_key(a.poly))
        else:
            raise TypeError(f"not an atom: {a!r}")
    return a._key


@lru_cache(maxsize=200_000)
def mono_key(m):
    """Graded lexicographic key: ascending total degree, then lex on atoms."""
    return (sum(e for _, e in m), tuple((atom_key(a), -e) for a, e in m))


def poly_key(p):
    return tuple(sorted((mono_key(m), c) for m, c in p.items()))


def sorted_terms(p):
    return sorted(p.items(), key=lambda mc: mono_key(mc[0]))


# ---------------------------------------------------------------------------
# canonical trees

def term_tree(m, c) -> Expr:
    factors = [] if (c == 1 and m) else [Const(c)]
    for a, e in m:
        factors.append(a if e == 1 else Pow(a, e))
    node = factors[0] if len(factors) == 1 else Mul(tuple(factors))
    return node


def from_poly(p) -> Expr:
    if not p:
        node = Const(0)
    else:
        terms = [term_tree(m, c) for m, c in sorted_terms(p)]
        node = terms[0] if len(terms) == 1 else Add(tuple(terms))
    if node._poly is None and not isinstance(node, (Sym, Func, Apply)):
        node._poly = p
    return node


def normalize(e) -> Expr:
    return from_poly(as_expr(e).poly)


def atoms(e) -> set:
    """Top-level atoms of the canonical form."""
    out = set()
    for m in as_expr(e).poly:
        out.update(a for a, _ in m)
    return out


def free_coords(e) -> frozenset:
    e = as_expr(e)
    if e._free is None:
        if isinstance(e, Sym):
            e._free = frozenset((e.coord,))
        elif isinstance(e, Func):
            e._free = frozenset(e.args)
        elif isinstance(e, Apply):
            e._free = free_coords(e.arg)
        else:
            acc = set()
            for a in atoms(e):
                acc |= free_coords(a)
            e._free = frozenset(acc)
    return e._free


def free_funcs(e) -> set:
    """Undetermined-function atoms anywhere in ``e``."""
    out = set()
    stack = [as_expr(e)]
    seen = set()
    while stack:
        node = stack.pop()
        for a in atoms(node):
            if a in seen:
                continue
            seen.add(a)
            if isinstance(a, Func):
                out.add(a)
            elif isinstance(a, Apply):
                stack.append(a.arg)
            elif isinstance(a, Add):
                stack.append(a)
    return out


def is_polynomial_class(e) -> bool:
    """No opaque functions and no inverted sums anywhere."""
    return all(isinstance(a, (Sym, Func)) for a in atoms(e))


def is_constant(e):
    p = as_expr(e).poly
    return set(p) <= {()}


def constant_value(e) -> Fraction:
    p = as_expr(e).poly
    if not set(p) <= {()}:
        raise ValueError(f"{e} is not a rational constant")
    return p.get((), Fraction(0))
