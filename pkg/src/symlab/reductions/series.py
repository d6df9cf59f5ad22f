"""Power-series solutions of the reduced ODEs via Cauchy-product recurrences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DomainError


def as_number(v, exact: bool = True):
    """Exact Fraction for ints, Fractions and decimal strings; float otherwise."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v) if exact else float(v)
    if isinstance(v, float):
        return Fraction(str(v)) if exact else v
    raise TypeError(f"not a number: {v!r}")


def cube_coefficient(c, n):
    """Coefficient of eta^n in (sum c_j eta^j)^3 using c_0..c_n."""
    total = 0
    for k in range(n + 1):
        sq = 0
        for j in range(k + 1):
            sq += c[j] * c[k - j]
        total += sq * c[n - k]
    return total


@dataclass(frozen=True)
class SeriesSolution:
    coeffs: tuple
    recurrence: str
    N: int
    params: dict = field(default_factory=dict)
    note: str = ""

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def to_json(self) -> dict:
        return {
            "recurrence": self.recurrence,
            "N": self.N,
            "params": {k: str(v) for k, v in self.params.items()},
            "coefficients": [str(c) for c in self.coeffs],
            "note": self.note,
        }


def series_first_order(lam, c0, N: int = 20, exact: bool = True) -> SeriesSolution:
    """f' + lambda (f^3 - f) = 0:  c_{n+1} = lambda (c_n - cube_n) / (n + 1)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    lam, c0 = as_number(lam, exact), as_number(c0, exact)
    c = [c0]
    for n in range(N):
        c.append(lam * (c[n] - cube_coefficient(c, n)) / (n + 1))
    return SeriesSolution(tuple(c), "first", N, {"lambda": lam, "c0": c0},
                          note=_first_order_radius_note(lam, c0))


def series_second_order(lam, c0, c1, N: int = 20, exact: bool = True) -> SeriesSolution:
    """f'' = lambda (f^3 - f):  c_{n+2} = lambda (cube_n - c_n) / ((n+1)(n+2))."""
    if N < 2:
        raise ValueError("N must be at least 2")
    lam, c0, c1 = as_number(lam, exact), as_number(c0, exact), as_number(c1, exact)
    c = [c0, c1]
    for n in range(N - 1):
        c.append(lam * (cube_coefficient(c, n) - c[n]) / ((n + 1) * (n + 2)))
    return SeriesSolution(tuple(c), "second", N, {"lambda": lam, "c0": c0, "c1": c1})


def series_traveling(lam, k, c0, c1, N: int = 20, exact: bool = True) -> SeriesSolution:
    """f' - k^2 f'' + lambda (f^3 - f) = 0:

    c_{n+2} = ((n+1) c_{n+1} + lambda (cube_n - c_n)) / (k^2 (n+1)(n+2)).
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    lam, k = as_number(lam, exact), as_number(k, exact)
    if k == 0:
        raise DomainError("k = 0 degenerates to the first-order reduction; use series_first_order")
    c0, c1 = as_number(c0, exact), as_number(c1, exact)
    k2 = k * k
    c = [c0, c1]
    for n in range(N - 1):
        num = (n + 1) * c[n + 1] + lam * (cube_coefficient(c, n) - c[n])
        c.append(num / (k2 * (n + 1) * (n + 2)))
    return SeriesSolution(tuple(c), "traveling", N, {"lambda": lam, "k": k, "c0": c0, "c1": c1})


def _first_order_radius_note(lam, c0) -> str:
    import cmath
    import math

    lam, c0 = float(lam), float(c0)
    if c0 in (0.0, 1.0, -1.0) or lam == 0:
        return "equilibrium: the series is constant"
    # singularities where 1 + (c0^-2 - 1) exp(-2 lam eta) = 0
    a = 1.0 / (c0 * c0) - 1.0
    z = cmath.log(complex(-1.0 / a))
    radius = min(abs((z + 2j * math.pi * m) / (-2 * lam)) for m in (-1, 0, 1))
    return f"radius of convergence about {radius:.4f}"


def series_eval(s: SeriesSolution, eta):
    """Horner evaluation of the truncated polynomial (works for floats, arrays, mpf)."""
    acc = 0
    for c in reversed(s.coeffs):
        acc = acc * eta + (float(c) if isinstance(c, Fraction) and isinstance(eta, float) else c)
    return acc


# ---------------------------------------------------------------------------
# re-verification against the ODE

def _poly_mul(a, b, limit):
    out = [0] * min(len(a) + len(b) - 1, limit)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if i + j >= limit:
                break
            out[i + j] += ai * bj
    return out


def ode_residual_coefficients(s: SeriesSolution) -> list:
    """Coefficients of (ODE applied to the truncated series), exactly."""
    c = list(s.coeffs)
    lam = s.params["lambda"]
    limit = 3 * len(c)
    cube = _poly_mul(_poly_mul(c, c, limit), c, limit)
    d1 = [(n + 1) * c[n + 1] for n in range(len(c) - 1)]
    d2 = [(n + 1) * (n + 2) * c[n + 2] for n in range(len(c) - 2)]
    size = len(cube)
    res = [0] * size
    for n in range(size):
        nonlin = lam * (cube[n] - (c[n] if n < len(c) else 0))
        if s.recurrence == "first":
            res[n] = (d1[n] if n < len(d1) else 0) + nonlin
        elif s.recurrence == "second":
            res[n] = (d2[n] if n < len(d2) else 0) - nonlin
        elif s.recurrence == "traveling":
            k2 = s.params["k"] ** 2
            res[n] = (d1[n] if n < len(d1) else 0) - k2 * (d2[n] if n < len(d2) else 0) + nonlin
        else:
            raise ValueError(f"unknown recurrence {s.recurrence!r}")
    return res


def lowest_residual_order(s: SeriesSolution):
    """Lowest eta power with a nonzero residual coefficient (None if identically zero)."""
    for n, r in enumerate(ode_residual_coefficients(s)):
        if r != 0:
            return n
    return None


__all__ = [
    "SeriesSolution", "as_number", "cube_coefficient", "lowest_residual_order",
    "ode_residual_coefficients", "series_eval", "series_first_order", "series_second_order",
    "series_traveling",
]
