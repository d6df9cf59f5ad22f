"""Coordinates of the jet space: independent variables, u and v with their
jets, the parameter lambda and free symbols (eps, k, eta, ...)."""
from __future__ import annotations

import re
from dataclasses import dataclass

JET_ORDER = 4

INDEPENDENT = "independent"
DEPENDENT = "dependent"
JET = "jet"
PARAMETER = "parameter"
AUXILIARY = "auxiliary"
SYMBOL = "symbol"

_FIELD_RANK = {"u": 0, "v": 1}
_JET_RE = re.compile(r"^([uv])_([tx]+)$")
_IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")
RESERVED = {"tanh", "exp", "sqrt", "sech", "lambda"}


@dataclass(frozen=True)
class Coordinate:
    kind: str
    base: str
    nt: int = 0
    nx: int = 0

    @property
    def order(self) -> int:
        return self.nt + self.nx

    @property
    def name(self) -> str:
        if self.order == 0:
            return self.base
        return f"{self.base}_{'t' * self.nt}{'x' * self.nx}"

    @property
    def is_field(self) -> bool:
        """True for u, v and their jets (the coordinates D_x, D_t act on)."""
        return self.kind in (DEPENDENT, JET, AUXILIARY)

    def shifted(self, direction: str) -> "Coordinate":
        if not self.is_field:
            raise ValueError(f"{self.name} has no jet successor")
        nt, nx = (self.nt + 1, self.nx) if direction == "t" else (self.nt, self.nx + 1)
        return jet(self.base, nt, nx)

    def sort_key(self):
        # lambda, free symbols, x, t, u, v, then jets by ascending order
        if self.kind == PARAMETER:
            return (0, 0, self.base)
        if self.kind == SYMBOL:
            return (1, 0, self.base)
        if self.kind == INDEPENDENT:
            return (2, 0 if self.base == "x" else 1, "")
        if self.order == 0:
            return (3, _FIELD_RANK[self.base], "")
        return (4, self.order, self.base, self.nt, self.nx)

    def __repr__(self):
        return f"Coordinate({self.name})"


def jet(base: str, nt: int = 0, nx: int = 0) -> Coordinate:
    if base not in _FIELD_RANK:
        raise ValueError(f"no jets for {base!r}")
    if nt < 0 or nx < 0:
        raise ValueError("negative jet index")
    if base == "v":
        return Coordinate(AUXILIARY, "v", nt, nx)
    if nt == nx == 0:
        return Coordinate(DEPENDENT, "u")
    return Coordinate(JET, "u", nt, nx)


def symbol(name: str) -> Coordinate:
    if not _IDENT_RE.match(name) or name in RESERVED or name in ("x", "t", "u", "v"):
        raise ValueError(f"invalid symbol name {name!r}")
    return Coordinate(SYMBOL, name)


X = Coordinate(INDEPENDENT, "x")
T = Coordinate(INDEPENDENT, "t")
U = jet("u")
V = jet("v")
LAMBDA = Coordinate(PARAMETER, "lambda")


def coordinate(name: str) -> Coordinate:
    """Resolve a printed name (``u_xt``, ``lambda``, ``eps``) to its coordinate."""
    if name in ("lambda", "λ"):
        return LAMBDA
    if name == "x":
        return X
    if name == "t":
        return T
    if name in ("u", "v"):
        return jet(name)
    m = _JET_RE.match(name)
    if m:
        idx = m.group(2)
        return jet(m.group(1), idx.count("t"), idx.count("x"))
    return symbol(name)
