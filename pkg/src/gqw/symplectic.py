"""Symplectic structure on a chart: validation of the 2-form, Hamiltonian
vector fields, and the Poisson bracket.

Conventions (pinned, and cross-asserted in three independent routes):

    xi_f . omega = df
    {f, g} = -omega(xi_f, xi_g) = xi_f g

Sign errors are the dominant failure mode in this domain, so poisson_ways
computes the bracket through all three formulas and the callers assert they
agree identically.
"""

from __future__ import annotations

from typing import Dict, List

from .errors import DegeneracyError
from .expr import Expr, ZERO, add, diff, evalf, mul, power, rational, symbol
from .forms import Chart, KForm, VectorField, exterior_derivative, interior_product, lie_bracket

Matrix = List[List[Expr]]


def _det(m: Matrix) -> Expr:
    n = len(m)
    if n == 1:
        return m[0][0]
    terms = []
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = mul(m[0][j], _det(minor))
        if (j % 2) == 1:
            term = mul(rational(-1), term)
        terms.append(term)
    return add(*terms)


def _adjugate(m: Matrix) -> Matrix:
    n = len(m)
    if n == 1:
        return [[rational(1)]]
    adj = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:i] + row[i + 1:] for k, row in enumerate(m) if k != j]
            cof = _det(minor)
            if (i + j) % 2 == 1:
                cof = mul(rational(-1), cof)
            adj[i][j] = cof
    return adj


class SymplecticChart:
    """A chart together with a closed nondegenerate 2-form.

    The coefficient matrix of omega is inverted symbolically once, via the
    adjugate and determinant (dimension <= 6, so this is cheap and exact).
    """

    def __init__(self, chart: Chart, omega: KForm):
        if omega.degree != 2 or omega.chart.coords != chart.coords:
            raise ValueError("omega must be a 2-form on the given chart")
        self.chart = chart
        self.omega = omega
        self._check_closed()
        self.matrix = self._coefficient_matrix()
        self.det = _det(self.matrix)
        self._check_nondegenerate()
        detinv = power(self.det, -1)
        adj = _adjugate(self.matrix)
        self.inverse = [[mul(detinv, adj[i][j]) for j in range(chart.dim)]
                        for i in range(chart.dim)]

    def _coefficient_matrix(self) -> Matrix:
        n = self.chart.dim
        m = [[ZERO] * n for _ in range(n)]
        for c, (i, j) in zip(self.omega.coeffs, self.chart.pairs()):
            m[i][j] = c
            m[j][i] = mul(rational(-1), c)
        return m

    def _check_closed(self):
        # the degree-3 coefficients of d(omega) must vanish identically;
        # KForm itself stays capped at degree 2, so expand them inline
        xs = [symbol(x) for x in self.chart.coords]
        idx = {pair: c for pair, c in zip(self.chart.pairs(), self.omega.coeffs)}
        n = self.chart.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    c = add(diff(idx[(j, k)], xs[i]),
                            mul(rational(-1), diff(idx[(i, k)], xs[j])),
                            diff(idx[(i, j)], xs[k]))
                    if not c.is_zero():
                        raise DegeneracyError(
                            f"omega is not closed: d-omega coefficient {c} on "
                            f"(d{xs[i]},d{xs[j]},d{xs[k]})")

    def _check_nondegenerate(self):
        for pt in self.chart.sampler.points(seed_tag="nondegenerate"):
            v = evalf(self.det, dict(pt, hbar=1.0))
            if abs(v) <= self.chart.sampler.tolerance:
                raise DegeneracyError(f"omega degenerate at sample point {pt}")

    def gradient(self, f: Expr) -> List[Expr]:
        return [diff(f, symbol(x)) for x in self.chart.coords]


def hamiltonian_vf(f: Expr, s: SymplecticChart) -> VectorField:
    """The unique field with xi_f . omega = df, i.e. xi = -W^{-1} grad f
    for the antisymmetric coefficient matrix W of omega."""
    grads = s.gradient(f)
    n = s.chart.dim
    comps = []
    for i in range(n):
        comps.append(add(*[mul(rational(-1), s.inverse[i][j], grads[j])
                           for j in range(n)]))
    xi = VectorField(s.chart, comps)
    got = interior_product(xi, s.omega)
    for a, b in zip(got.coeffs, grads):
        if not add(a, mul(rational(-1), b)).is_zero():
            raise DegeneracyError(
                "defining equation xi_f . omega = df failed to close symbolically")
    return xi


def poisson(f: Expr, g: Expr, s: SymplecticChart) -> Expr:
    """{f, g} = xi_f g."""
    return hamiltonian_vf(f, s).apply(g)


def poisson_ways(f: Expr, g: Expr, s: SymplecticChart) -> Dict[str, Expr]:
    """The bracket through three routes that must agree identically:
    -omega(xi_f, xi_g), the directional derivative xi_f g, and the pairing
    of xi_f with dg through the interior product."""
    xi_f = hamiltonian_vf(f, s)
    xi_g = hamiltonian_vf(g, s)
    from .forms import exterior_derivative, scalar_form
    dg = exterior_derivative(scalar_form(s.chart, g))
    return {
        "minus_omega": mul(rational(-1), s.omega(xi_f, xi_g)),
        "directional": xi_f.apply(g),
        "interior": interior_product(xi_f, dg).coeffs[0],
    }


def verify_bracket_lemma(f: Expr, g: Expr, s: SymplecticChart) -> dict:
    """Residuals of [xi_f, xi_g] - xi_{f,g}, per component.

    Components that cancel structurally report residual 0; otherwise the
    difference is sampled on the chart domain.
    """
    from .sample import expr_equal
    lhs = lie_bracket(hamiltonian_vf(f, s), hamiltonian_vf(g, s))
    rhs = hamiltonian_vf(poisson(f, g, s), s)
    residuals = []
    for a, b in zip(lhs.components, rhs.components):
        _, r = expr_equal(a, b, s.chart.sampler)
        residuals.append(r)
    return {
        "residuals": residuals,
        "passed": all(r <= s.chart.sampler.tolerance for r in residuals),
    }


def lie_derivative_omega(f: Expr, s: SymplecticChart) -> KForm:
    """L_{xi_f} omega, computed as d(xi_f . omega); the d(omega) term of the
    Cartan formula is dropped because closedness is validated at
    construction."""
    return exterior_derivative(interior_product(hamiltonian_vf(f, s), s.omega))
