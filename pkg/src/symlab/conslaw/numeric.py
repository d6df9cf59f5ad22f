"""Finite-difference cross-check of a conserved vector along an exact solution.

u is the tanh soliton (derivatives exact), v solves the adjoint equation
v_t = -v_xx + lambda (3u^2 - 1) v backwards from v(., T) = 1 with Crank-Nicolson
on a uniform grid (dt = dx = h).  The Dirichlet data at the edges only
approximates the adjoint solution, which creates a thin layer there; the solve
therefore runs on a padded interval and the divergence is measured on
[-2, 2], where it should be O(h^2).
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

from ..groups import soliton
from ..symcore import LAMBDA, T, X, eval_numeric, free_coords, jet, partial_derivative
from .core import ConservedVector


def _u_jets(lam: float, XX, TT, needed):
    F = soliton(lam).expr
    out = {}
    for c in needed:
        e = F
        for _ in range(c.nt):
            e = partial_derivative(e, T)
        for _ in range(c.nx):
            e = partial_derivative(e, X)
        out[c] = np.broadcast_to(
            np.asarray(eval_numeric(e, {X: XX, T: TT, LAMBDA: lam}), dtype=float), XX.shape)
    return out


def solve_adjoint(lam: float, h: float, t_final: float = 0.5, half_width: float = 2.0):
    """Return (xs, ts, V) with V[n, i] ~ v(ts[n], xs[i])."""
    nx = int(round(2 * half_width / h)) + 1
    nt = int(round(t_final / h)) + 1
    xs = np.linspace(-half_width, half_width, nx)
    ts = np.linspace(0.0, t_final, nt)
    dt = ts[1] - ts[0]
    dx = xs[1] - xs[0]
    TT, XX = np.meshgrid(ts, xs, indexing="ij")
    uu = _u_jets(lam, XX, TT, [jet("u", 0, 0)])[jet("u", 0, 0)]
    react = lam * (3 * uu ** 2 - 1)  # v_s = v_xx - react * v with s = t_final - t
    V = np.empty((nt, nx))
    V[-1] = 1.0
    # boundary data from g_s = -react g (diffusion neglected at the edges)
    for col in (0, nx - 1):
        r = react[:, col]
        integral = np.concatenate(([0.0], np.cumsum(0.5 * (r[1:] + r[:-1]) * dt)))
        # integrate backwards from t_final
        V[:, col] = np.exp(integral - integral[-1])
    m = nx - 2
    k = dt / dx ** 2
    for n in range(nt - 1, 0, -1):
        # step from time level n to n-1 (forward in s)
        r_old, r_new = react[n, 1:-1], react[n - 1, 1:-1]
        ab = np.zeros((3, m))
        ab[0, 1:] = -0.5 * k
        ab[1, :] = 1 + k + 0.5 * dt * r_new
        ab[2, :-1] = -0.5 * k
        v_old = V[n]
        rhs = (v_old[1:-1] * (1 - k - 0.5 * dt * r_old)
               + 0.5 * k * (v_old[2:] + v_old[:-2]))
        rhs[0] += 0.5 * k * V[n - 1, 0]
        rhs[-1] += 0.5 * k * V[n - 1, -1]
        V[n - 1, 1:-1] = solve_banded((1, 1), ab, rhs)
    return xs, ts, V


def _fd(V, dx, axis, order):
    """Central differences on the interior, NaN on the edges."""
    out = np.full(V.shape, np.nan)
    if order == 1:
        sl = [slice(None)] * 2
        sl[axis] = slice(1, -1)
        hi = [slice(None)] * 2
        hi[axis] = slice(2, None)
        lo = [slice(None)] * 2
        lo[axis] = slice(None, -2)
        out[tuple(sl)] = (V[tuple(hi)] - V[tuple(lo)]) / (2 * dx)
    else:
        sl = [slice(None)] * 2
        sl[axis] = slice(1, -1)
        hi = [slice(None)] * 2
        hi[axis] = slice(2, None)
        lo = [slice(None)] * 2
        lo[axis] = slice(None, -2)
        out[tuple(sl)] = (V[tuple(hi)] - 2 * V[tuple(sl)] + V[tuple(lo)]) / dx ** 2
    return out


def discrete_divergence(cv: ConservedVector, lam: float, h: float, t_final: float = 0.5,
                        window: float = 2.0, padding: float = 2.0) -> float:
    """Max |D_t T^t + D_x T^x| over nodes with |x| <= window, by central differences."""
    xs, ts, V = solve_adjoint(lam, h, t_final, half_width=window + padding)
    dt, dx = ts[1] - ts[0], xs[1] - xs[0]
    TT, XX = np.meshgrid(ts, xs, indexing="ij")
    coords = free_coords(cv.Tt) | free_coords(cv.Tx)
    u_needed = [c for c in coords if c.is_field and c.base == "u"]
    env = {X: XX, T: TT, LAMBDA: lam}
    env.update(_u_jets(lam, XX, TT, u_needed))
    for c in coords:
        if c.is_field and c.base == "v":
            if c.order == 0:
                env[c] = V
            elif (c.nt, c.nx) == (0, 1):
                env[c] = _fd(V, dx, 1, 1)
            elif (c.nt, c.nx) == (1, 0):
                env[c] = _fd(V, dt, 0, 1)
            elif (c.nt, c.nx) == (0, 2):
                env[c] = _fd(V, dx, 1, 2)
            else:
                raise ValueError(f"no stencil for {c.name}")
    Tt = np.broadcast_to(np.asarray(eval_numeric(cv.Tt, env), dtype=float), V.shape)
    Tx = np.broadcast_to(np.asarray(eval_numeric(cv.Tx, env), dtype=float), V.shape)
    div = _fd(Tt, dt, 0, 1) + _fd(Tx, dx, 1, 1)
    inside = np.abs(xs) <= window + 1e-12
    return float(np.nanmax(np.abs(div[:, inside])))


def refinement_study(cv: ConservedVector, lam: float = 1.0,
                     spacings=(1 / 32, 1 / 64, 1 / 128), t_final: float = 0.5) -> dict:
    errs = [discrete_divergence(cv, lam, h, t_final) for h in spacings]
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    return {"h": [float(h) for h in spacings], "max_divergence": errs, "ratios": ratios,
            "lambda": lam, "t_final": t_final}


__all__ = ["discrete_divergence", "refinement_study", "solve_adjoint"]
