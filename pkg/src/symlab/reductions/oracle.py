"""Independent numeric references for the series: RK4 and a high-precision solver."""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np

from ..errors import BlowUpError, DomainError
from ..symcore import LAMBDA, eval_numeric, free_coords
from .reduce import ETA, ReducedODE
from .series import series_eval


def ode_rhs(ode: ReducedODE, lam: float):
    """State derivative for c2 f'' + c1 f' + c0 lambda (f^3 - f) = 0."""
    if not ode.feasible:
        raise DomainError(f"{ode.group} does not reduce to an ODE in eta")

    def coef(e):
        if ETA.coord in free_coords(e):
            return lambda eta: float(eval_numeric(e, {ETA.coord: eta, LAMBDA: lam}))
        val = float(eval_numeric(e, {LAMBDA: lam}))
        return lambda eta: val

    c2, c1, c0 = coef(ode.c2), coef(ode.c1), coef(ode.c0)
    if ode.order == 1:
        def rhs(eta, y):
            f = y[0]
            return np.array([-c0(eta) * lam * (f ** 3 - f) / c1(eta)])
    else:
        def rhs(eta, y):
            f, fp = y
            return np.array([fp, -(c1(eta) * fp + c0(eta) * lam * (f ** 3 - f)) / c2(eta)])
    return rhs


@dataclass(frozen=True)
class Trajectory:
    eta: np.ndarray
    y: np.ndarray
    dy: np.ndarray

    def __call__(self, e):
        """First component at e by cubic Hermite interpolation between steps."""
        return self.state(e)[0]

    def state(self, e):
        grid = self.eta
        forward = grid[-1] >= grid[0]
        g = grid if forward else grid[::-1]
        i = int(np.clip(np.searchsorted(g, e) - 1, 0, len(g) - 2))
        if not forward:
            i = len(grid) - 2 - i
        e0, e1 = grid[i], grid[i + 1]
        h = e1 - e0
        s = (e - e0) / h
        h00 = 2 * s ** 3 - 3 * s ** 2 + 1
        h10 = s ** 3 - 2 * s ** 2 + s
        h01 = -2 * s ** 3 + 3 * s ** 2
        h11 = s ** 3 - s ** 2
        return (h00 * self.y[i] + h10 * h * self.dy[i] + h01 * self.y[i + 1]
                + h11 * h * self.dy[i + 1])


def rk4(rhs, eta0: float, y0, eta1: float, step: float) -> Trajectory:
    if not step > 0:
        raise ValueError("step must be positive")
    n = max(1, int(round(abs(eta1 - eta0) / step)))
    h = (eta1 - eta0) / n
    ys = [np.asarray(y0, dtype=float)]
    etas = [eta0]
    dys = [rhs(eta0, ys[0])]
    y = ys[0]
    e = eta0
    for _ in range(n):
        k1 = dys[-1]
        k2 = rhs(e + h / 2, y + h / 2 * k1)
        k3 = rhs(e + h / 2, y + h / 2 * k2)
        k4 = rhs(e + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        e = e + h
        if not np.all(np.isfinite(y)):
            raise BlowUpError(f"solution left the finite range after eta={etas[-1]}",
                              last_eta=etas[-1])
        etas.append(e)
        ys.append(y)
        dys.append(rhs(e, y))
    return Trajectory(np.array(etas), np.array(ys), np.array(dys))


def ode_integrate(ode: ReducedODE, init, eta_range, step: float, lam: float) -> Trajectory:
    """Classical RK4 from eta_range[0] to eta_range[1]; init is (f0,) or (f0, f0')."""
    init = tuple(float(v) for v in init)
    if len(init) != ode.order:
        raise ValueError(f"order {ode.order} ODE needs {ode.order} initial values")
    return rk4(ode_rhs(ode, float(lam)), float(eta_range[0]), init, float(eta_range[1]), step)


# ---------------------------------------------------------------------------
# high-precision reference

def first_order_exact(lam, c0, eta, dps: int = 60):
    """Closed form of f' = lambda (f - f^3): f = (1 + (c0^-2 - 1) e^{-2 lambda eta})^{-1/2}."""
    with mpmath.workdps(dps):
        lam, c0 = mpmath.mpf(lam), mpmath.mpf(c0)
        if c0 == 0:
            return mpmath.mpf(0)
        sign = 1 if c0 > 0 else -1
        w = 1 + (1 / c0 ** 2 - 1) * mpmath.exp(-2 * lam * mpmath.mpf(eta))
        return sign / mpmath.sqrt(w)


def high_precision_solution(recurrence: str, params: dict, dps: int = 60):
    """mpmath Taylor-series ODE solver for the reduced ODE, returned as a callable."""
    mpmath.mp.dps = dps
    lam = mpmath.mpf(params["lambda"].numerator) / params["lambda"].denominator \
        if hasattr(params["lambda"], "numerator") else mpmath.mpf(params["lambda"])

    def mp(v):
        return mpmath.mpf(v.numerator) / v.denominator if hasattr(v, "numerator") else mpmath.mpf(v)

    if recurrence == "first":
        return mpmath.odefun(lambda e, f: lam * (f - f ** 3), 0, mp(params["c0"]))
    if recurrence == "second":
        return mpmath.odefun(lambda e, y: [y[1], lam * (y[0] ** 3 - y[0])], 0,
                             [mp(params["c0"]), mp(params["c1"])])
    if recurrence == "traveling":
        k2 = mp(params["k"]) ** 2
        return mpmath.odefun(lambda e, y: [y[1], (y[1] + lam * (y[0] ** 3 - y[0])) / k2], 0,
                             [mp(params["c0"]), mp(params["c1"])])
    raise ValueError(f"unknown recurrence {recurrence!r}")


def series_error_slope(s, etas=None, dps: int = 60) -> dict:
    """Log-log slope of |series - reference| over eta, in high precision."""
    etas = list(etas if etas is not None else np.geomspace(0.01, 0.2, 8))
    ref = high_precision_solution(s.recurrence, s.params, dps)
    errs = []
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in s.coeffs]
        for e in etas:
            em = mpmath.mpf(e)
            acc = mpmath.mpf(0)
            for c in reversed(coeffs):
                acc = acc * em + c
            r = ref(em)
            r0 = r[0] if isinstance(r, (list, tuple)) else r
            errs.append(abs(acc - r0))
    logs_e = np.log([float(e) for e in etas])
    logs_r = np.array([float(mpmath.log(err)) if err > 0 else -np.inf for err in errs])
    if not np.all(np.isfinite(logs_r)):
        return {"slope": float("inf"), "errors": [float(e) for e in errs], "etas": etas}
    slope = float(np.polyfit(logs_e, logs_r, 1)[0])
    return {"slope": slope, "errors": [float(e) for e in errs], "etas": [float(e) for e in etas]}


__all__ = [
    "Trajectory", "first_order_exact", "high_precision_solution", "ode_integrate", "ode_rhs",
    "rk4", "series_error_slope", "series_eval",
]
