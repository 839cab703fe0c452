"""Prequantization on the trivialized circle bundle Y = M x U(1).

The connection form is gamma = (1/(i*hbar)) beta + (fiber Maurer-Cartan
form), where beta is a global potential with d(beta) = omega.  The fiber
coordinate is t with lambda = e^{2 pi i t}; the vertical generator is
normalized so that gamma(vertical) = 2 pi i.

Lifted fields are restricted to base + c(m) * vertical with c a function of
the base only: this class contains every connection-preserving field and is
closed under brackets, which keeps all computations exact.

Sections of the associated line bundle are encoded by their equivariant
functions u(m); the vertical generator acts on them as multiplication by
-2 pi i.
"""

from __future__ import annotations

from .errors import NotQuantomorphismError
from .expr import Expr, HBAR, IMAG, PI, ZERO, add, mul, power, rational
from .forms import KForm, VectorField, exterior_derivative, scalar_form
from .sample import expr_equal
from .symplectic import SymplecticChart, hamiltonian_vf

TWO_PI_I = mul(rational(2), PI, IMAG)
I_HBAR_INV = power(mul(IMAG, HBAR), -1)          # 1/(i*hbar) = -i/hbar
TWO_PI_HBAR_INV = power(mul(rational(2), PI, HBAR), -1)


class PrequantCircle:
    """Bundle data: a symplectic chart plus a potential with d(beta) = omega."""

    def __init__(self, sympl: SymplecticChart, beta: KForm, validate: bool = True):
        if beta.degree != 1 or beta.chart.coords != sympl.chart.coords:
            raise ValueError("beta must be a 1-form on the symplectic chart")
        self.sympl = sympl
        self.chart = sympl.chart
        self.beta = beta
        if validate:
            d_beta = exterior_derivative(beta)
            for a, b in zip(d_beta.coeffs, sympl.omega.coeffs):
                delta = add(a, mul(rational(-1), b))
                if not delta.is_zero():
                    ok, res = expr_equal(a, b, self.chart.sampler)
                    if not ok:
                        raise NotQuantomorphismError(
                            "d(beta) != omega for the supplied potential", res)

    def beta_of(self, v: VectorField) -> Expr:
        return self.beta(v)


class CircleLiftedVF:
    """base + c(m) * vertical, with gamma(zeta) = (1/(i hbar)) beta(base) + 2 pi i c."""

    __slots__ = ("bundle", "base", "fiber")

    def __init__(self, bundle: PrequantCircle, base: VectorField, fiber: Expr):
        self.bundle = bundle
        self.base = base
        self.fiber = fiber

    def __eq__(self, other):
        return (isinstance(other, CircleLiftedVF)
                and self.base == other.base and self.fiber == other.fiber)

    def __hash__(self):
        return hash((self.base, self.fiber))

    def __repr__(self):
        return f"{self.base!r} + ({self.fiber!r}) * vertical"

    def gamma(self) -> Expr:
        return add(mul(I_HBAR_INV, self.bundle.beta_of(self.base)),
                   mul(TWO_PI_I, self.fiber))

    def is_zero(self) -> bool:
        return self.base.is_zero() and self.fiber.is_zero()


def horizontal_lift(xi: VectorField, y: PrequantCircle) -> CircleLiftedVF:
    """The lift with gamma = 0: the fiber coefficient solves
    (1/(i hbar)) beta(xi) + 2 pi i c = 0, i.e. c = beta(xi) / (2 pi hbar)."""
    c = mul(TWO_PI_HBAR_INV, y.beta_of(xi))
    return CircleLiftedVF(y, xi, c)


def vertical_field(y: PrequantCircle, coefficient: Expr) -> CircleLiftedVF:
    from .forms import zero_vf
    return CircleLiftedVF(y, zero_vf(y.chart), coefficient)


def E_circle(f: Expr, y: PrequantCircle) -> CircleLiftedVF:
    """Horizontal lift of the Hamiltonian field plus (1/(2 pi hbar)) f * vertical."""
    xi = hamiltonian_vf(f, y.sympl)
    hor = horizontal_lift(xi, y)
    return CircleLiftedVF(y, xi, add(hor.fiber, mul(TWO_PI_HBAR_INV, f)))


def bracket_lifted(z1: CircleLiftedVF, z2: CircleLiftedVF) -> CircleLiftedVF:
    """Bracket on the restricted class: fiber coefficients depend on the base
    only, so vertical parts commute and only get differentiated."""
    from .forms import lie_bracket
    base = lie_bracket(z1.base, z2.base)
    fiber = add(z1.base.apply(z2.fiber), mul(rational(-1), z2.base.apply(z1.fiber)))
    return CircleLiftedVF(z1.bundle, base, fiber)


def gamma_lie_derivative(z: CircleLiftedVF) -> KForm:
    """L_zeta gamma as a 1-form on the base: (1/(i hbar)) L_base beta
    + d(2 pi i c).  The fiber direction contributes nothing because
    gamma(zeta) is a function of the base alone."""
    from .forms import lie_derivative
    y = z.bundle
    lb = lie_derivative(z.base, y.beta).scale(I_HBAR_INV)
    dc = exterior_derivative(scalar_form(y.chart, mul(TWO_PI_I, z.fiber)))
    return lb.plus(dc)


def quantomorphism_residual(z: CircleLiftedVF) -> float:
    la = gamma_lie_derivative(z)
    worst = 0.0
    for c in la.coeffs:
        _, r = expr_equal(c, ZERO, z.bundle.chart.sampler)
        worst = max(worst, r)
    return worst


def F_circle(z: CircleLiftedVF, y: PrequantCircle, check: bool = True) -> Expr:
    """Inverse of E on connection-preserving fields:
    -(1/(i hbar)) F(zeta) = gamma(zeta), so F = -(i hbar) gamma(zeta)."""
    if check:
        la = gamma_lie_derivative(z)
        if not la.is_zero():
            res = quantomorphism_residual(z)
            if res > y.chart.sampler.tolerance:
                raise NotQuantomorphismError(
                    "the field does not preserve the connection form", res)
    return mul(rational(-1), IMAG, HBAR, z.gamma())


# ---------------------------------------------------------------------------
# sections of the associated line bundle and the operator representation


class EquivariantSection:
    """Encodes the section through u(m): the equivariant function is
    s(m, t) = e^{-2 pi i t} u(m)."""

    __slots__ = ("u",)

    def __init__(self, u: Expr):
        self.u = u

    def __eq__(self, other):
        return isinstance(other, EquivariantSection) and self.u == other.u

    def __hash__(self):
        return hash(self.u)

    def __repr__(self):
        return f"section({self.u!r})"


def connection_nabla(xi: VectorField, s: EquivariantSection,
                     y: PrequantCircle) -> EquivariantSection:
    """Covariant derivative through the horizontal lift acting on the
    equivariant function: u' = xi u + (1/(i hbar)) beta(xi) u.

    (The vertical part of the lift acts as multiplication by -2 pi i, and
    the lift's fiber coefficient is beta(xi)/(2 pi hbar).)
    """
    u = s.u
    out = add(xi.apply(u), mul(I_HBAR_INV, y.beta_of(xi), u))
    return EquivariantSection(out)


def ks_operator(f: Expr, s: EquivariantSection, y: PrequantCircle) -> EquivariantSection:
    """r(f) s = (i hbar nabla_{xi_f} + f) s."""
    xi = hamiltonian_vf(f, y.sympl)
    nabla = connection_nabla(xi, s, y)
    out = add(mul(IMAG, HBAR, nabla.u), mul(f, s.u))
    return EquivariantSection(out)


def vertical_action(s: EquivariantSection) -> EquivariantSection:
    """Action of the vertical generator on an equivariant function:
    multiplication by -2 pi i."""
    return EquivariantSection(mul(rational(-1), TWO_PI_I, s.u))
