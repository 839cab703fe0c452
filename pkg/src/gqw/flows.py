"""Numeric flow machinery: RK4 integration, flow commutators, and a
pullback-under-flow derivative.  These are the independent oracles that the
symbolic bracket and Lie-derivative code is checked against."""

from __future__ import annotations

from typing import Callable, List, Sequence

from .expr import evalf
from .forms import KForm, VectorField

RHS = Callable[[Sequence[float]], List[float]]


def rk4_step(f: RHS, x: Sequence[float], h: float) -> List[float]:
    k1 = f(x)
    k2 = f([xi + 0.5 * h * ki for xi, ki in zip(x, k1)])
    k3 = f([xi + 0.5 * h * ki for xi, ki in zip(x, k2)])
    k4 = f([xi + h * ki for xi, ki in zip(x, k3)])
    return [xi + h / 6.0 * (a + 2 * b + 2 * c + d)
            for xi, a, b, c, d in zip(x, k1, k2, k3, k4)]


def _commutator_estimate(f1: RHS, f2: RHS, x: Sequence[float], t: float) -> List[float]:
    y = rk4_step(f1, x, t)
    y = rk4_step(f2, y, t)
    y = rk4_step(f1, y, -t)
    y = rk4_step(f2, y, -t)
    return [(yi - xi) / (t * t) for yi, xi in zip(y, x)]


def flow_commutator(f1: RHS, f2: RHS, x: Sequence[float], t: float = 1e-3) -> List[float]:
    """[f1, f2](x) estimated from the loop of flows.  The raw estimate has
    error c3 t + c4 t^2 + O(t^3); three-point Richardson extrapolation over
    t, t/2, t/4 removes both leading terms."""
    e1 = _commutator_estimate(f1, f2, x, t)
    e2 = _commutator_estimate(f1, f2, x, t / 2)
    e3 = _commutator_estimate(f1, f2, x, t / 4)
    return [a / 3.0 - 2.0 * b + 8.0 * c / 3.0 for a, b, c in zip(e1, e2, e3)]


def vf_rhs(v: VectorField, params=None) -> RHS:
    """Numeric right-hand side of a symbolic vector field on its chart."""
    names = v.chart.coords
    extra = {"hbar": 1.0}
    if params:
        extra.update(params)

    def f(x):
        env = dict(zip(names, x))
        env.update(extra)
        return [evalf(c, env).real for c in v.components]

    return f


def flow_point(v: VectorField, x: Sequence[float], t: float, steps: int = 16,
               params=None) -> List[float]:
    f = vf_rhs(v, params)
    h = t / steps
    y = list(x)
    for _ in range(steps):
        y = rk4_step(f, y, h)
    return y


def _pullback_at(v: VectorField, a: KForm, x: Sequence[float], t: float,
                 params=None) -> List[float]:
    """Coefficients at x of the pullback of ``a`` under the time-t flow of v,
    with the flow's Jacobian taken by central differences."""
    chart = v.chart
    n = chart.dim
    extra = {"hbar": 1.0}
    if params:
        extra.update(params)

    def flowed(pt):
        return flow_point(v, pt, t, steps=4, params=params)

    def coeffs_at(pt):
        env = dict(zip(chart.coords, pt))
        env.update(extra)
        return [evalf(c, env).real for c in a.coeffs]

    y = flowed(list(x))
    if a.degree == 0:
        return coeffs_at(y)
    dx = 1e-5
    jac = [[0.0] * n for _ in range(n)]  # jac[i][k] = d(flow_i)/dx_k
    for k in range(n):
        hi = list(x)
        lo = list(x)
        hi[k] += dx
        lo[k] -= dx
        fh, fl = flowed(hi), flowed(lo)
        for i in range(n):
            jac[i][k] = (fh[i] - fl[i]) / (2 * dx)
    ay = coeffs_at(y)
    if a.degree == 1:
        return [sum(ay[i] * jac[i][k] for i in range(n)) for k in range(n)]
    pairs = chart.pairs()
    out = []
    for (k, l) in pairs:
        pb = 0.0
        for c, (i, j) in zip(ay, pairs):
            pb += c * (jac[i][k] * jac[j][l] - jac[i][l] * jac[j][k])
        out.append(pb)
    return out


def pullback_under_flow(v: VectorField, a: KForm, x: Sequence[float],
                        h: float = 1e-4, params=None) -> List[float]:
    """Centered finite-difference Lie derivative:
    (phi_h^* a - phi_{-h}^* a) / (2h) evaluated at x."""
    hi = _pullback_at(v, a, x, h, params)
    lo = _pullback_at(v, a, x, -h, params)
    return [(p - m) / (2 * h) for p, m in zip(hi, lo)]
