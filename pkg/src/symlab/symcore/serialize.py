"""Text and JSON forms of expressions.

Infix grammar (whitespace insensitive)::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := "-" factor | power
    power   := primary ("^" ["-"] INT)?
    primary := NUMBER | "(" expr ")" | FN "(" expr ")"
             | NAME ["_" SUFFIX] "(" COORD ("," COORD)* ")" | COORD

``FN`` is one of tanh, exp, sqrt, sech.  ``COORD`` is x, t, u, v, a jet such
as u_tx or v_xx, ``lambda`` (or λ), or any other identifier (a free symbol).
An undetermined function is written ``q(t,x)``; its derivatives carry the
argument names as suffix, e.g. ``q_tx(t,x)`` or ``h_uu(t,x,u)``.  Rationals
print as ``3/8``.  Printing then parsing a normalized expression returns an
identical tree.
"""
from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .coords import coordinate
from .expr import OPAQUE_FUNCTIONS, Add, Apply, Const, Expr, Func, Mul, Pow, Sym, as_expr

# ---------------------------------------------------------------------------
# printing


def _const_str(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _func_str(f: Func) -> str:
    suffix = "".join(c.name * k for c, k in zip(f.args, f.derivs))
    head = f"{f.name}_{suffix}" if suffix else f.name
    return f"{head}({','.join(c.name for c in f.args)})"


def _is_negative(node: Expr) -> bool:
    if isinstance(node, Const):
        return node.value < 0
    if isinstance(node, Mul) and node.factors and isinstance(node.factors[0], Const):
        return node.factors[0].value < 0
    return False


def negate(node: Expr) -> Expr:
    if isinstance(node, Const):
        return Const(-node.value)
    if isinstance(node, Mul) and node.factors and isinstance(node.factors[0], Const):
        c = -node.factors[0].value
        rest = node.factors[1:]
        if c == 1 and rest:
            return rest[0] if len(rest) == 1 else Mul(rest)
        return Mul((Const(c),) + rest)
    if isinstance(node, Mul):
        return Mul((Const(-1),) + node.factors)
    return Mul((Const(-1), node))


def _factor_str(node: Expr, first: bool) -> str:
    if isinstance(node, (Add, Mul)):
        return f"({to_infix(node)})"
    if isinstance(node, Const) and node.value < 0 and not first:
        return _const_str(node.value)
    return to_infix(node)


def to_infix(node) -> str:
    node = as_expr(node)
    if isinstance(node, Const):
        return _const_str(node.value)
    if isinstance(node, Sym):
        return node.coord.name
    if isinstance(node, Func):
        return _func_str(node)
    if isinstance(node, Apply):
        return f"{node.fn}({to_infix(node.arg)})"
    if isinstance(node, Pow):
        b = node.base
        simple = isinstance(b, (Sym, Func, Apply)) or (
            isinstance(b, Const) and b.value >= 0 and b.value.denominator == 1)
        bs = to_infix(b) if simple else f"({to_infix(b)})"
        return f"{bs}^{node.exp}"
    if isinstance(node, Mul):
        fs = list(node.factors)
        if not fs:
            return "1"
        if (len(fs) > 1 and isinstance(fs[0], Const) and fs[0].value == -1
                and not isinstance(fs[1], Const)):
            return "-" + "*".join(_factor_str(f, i == 0) for i, f in enumerate(fs[1:]))
        return "*".join(_factor_str(f, i == 0) for i, f in enumerate(fs))
    if isinstance(node, Add):
        if not node.terms:
            return "0"
        parts = []
        for i, term in enumerate(node.terms):
            ts = f"({to_infix(term)})" if isinstance(term, Add) else None
            if i == 0:
                parts.append(ts or to_infix(term))
            elif ts is None and _is_negative(term):
                parts.append(" - " + _term_str(negate(term)))
            else:
                parts.append(" + " + (ts or to_infix(term)))
        return "".join(parts)
    raise TypeError(f"cannot print {node!r}")


def _term_str(node):
    return f"({to_infix(node)})" if isinstance(node, Add) else to_infix(node)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-zλ][A-Za-z0-9_λ]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {pos}: {text[pos:]!r}")
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif ident is not None:
            tokens.append(("id", ident))
        elif op is not None and op.strip():
            if op not in "+-*/^(),":
                raise ParseError(f"unexpected character {op!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self, value=None):
        if self.i >= len(self.tokens):
            return None
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, value=None):
        tok = self.peek()
        if tok is None or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.i != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        terms = [self.term()]
        while self.peek() and self.peek()[1] in "+-" and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else negate(t))
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def term(self):
        factors = []
        if self.peek("-"):
            self.take("-")
            f = self.factor()
            if isinstance(f, Const):
                factors.append(Const(-f.value))
            else:
                factors.extend([Const(-1), f])
        else:
            factors.append(self.factor())
        while self.peek() and self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            f = self.factor()
            if op == "*":
                factors.append(f)
            elif isinstance(f, Const) and isinstance(factors[-1], Const):
                if f.value == 0:
                    raise ParseError("division by zero")
                factors[-1] = Const(factors[-1].value / f.value)
            else:
                factors.append(Pow(f, -1))
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def factor(self):
        if self.peek("-"):
            self.take("-")
            f = self.factor()
            return Const(-f.value) if isinstance(f, Const) else Mul((Const(-1), f))
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek("^"):
            self.take("^")
            sign = -1 if self.peek("-") else 1
            if sign < 0:
                self.take("-")
            tok = self.take()
            if tok[0] != "num" or not tok[1].isdigit():
                raise ParseError("exponent must be an integer")
            return Pow(base, sign * int(tok[1]))
        return base

    def primary(self):
        tok = self.take()
        kind, val = tok
        if kind == "num":
            return Const(Fraction(val))
        if kind == "op" and val == "(":
            node = self.expr()
            self.take(")")
            return node
        if kind == "id":
            if self.peek("("):
                self.take("(")
                if val in OPAQUE_FUNCTIONS:
                    arg = self.expr()
                    self.take(")")
                    return Apply(val, arg)
                names = [self.take()[1]]
                while self.peek(","):
                    self.take(",")
                    names.append(self.take()[1])
                self.take(")")
                return _make_func(val, names)
            try:
                return Sym(coordinate(val))
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def _make_func(head: str, names):
    args = tuple(coordinate(n) for n in names)
    name, _, suffix = head.partition("_")
    derivs = [0] * len(args)
    arg_names = sorted(((c.name, i) for i, c in enumerate(args)), key=lambda p: -len(p[0]))
    pos = 0
    while pos < len(suffix):
        for n, i in arg_names:
            if suffix.startswith(n, pos):
                derivs[i] += 1
                pos += len(n)
                break
        else:
            raise ParseError(f"bad derivative suffix {suffix!r} for {name}")
    try:
        return Func(name, args, derivs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# JSON tree


def to_json(node) -> dict:
    node = as_expr(node)
    if isinstance(node, Const):
        return {"type": "const", "value": _const_str(node.value)}
    if isinstance(node, Sym):
        return {"type": "coord", "name": node.coord.name}
    if isinstance(node, Func):
        return {"type": "func", "name": node.name, "args": [c.name for c in node.args],
                "derivs": list(node.derivs)}
    if isinstance(node, Add):
        return {"type": "add", "terms": [to_json(t) for t in node.terms]}
    if isinstance(node, Mul):
        return {"type": "mul", "factors": [to_json(f) for f in node.factors]}
    if isinstance(node, Pow):
        return {"type": "pow", "base": to_json(node.base), "exp": node.exp}
    if isinstance(node, Apply):
        return {"type": "apply", "fn": node.fn, "arg": to_json(node.arg)}
    raise TypeError(f"cannot serialize {node!r}")


def from_json(data: dict) -> Expr:
    kind = data.get("type")
    if kind == "const":
        return Const(Fraction(data["value"]))
    if kind == "coord":
        return Sym(coordinate(data["name"]))
    if kind == "func":
        return Func(data["name"], [coordinate(n) for n in data["args"]], data["derivs"])
    if kind == "add":
        return Add(tuple(from_json(t) for t in data["terms"]))
    if kind == "mul":
        return Mul(tuple(from_json(f) for f in data["factors"]))
    if kind == "pow":
        return Pow(from_json(data["base"]), int(data["exp"]))
    if kind == "apply":
        return Apply(data["fn"], from_json(data["arg"]))
    raise ParseError(f"unknown node type {kind!r}")
