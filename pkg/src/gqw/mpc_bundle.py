"""Prequantization on the trivialized bundle P = M x Mp^c over a 2-dimensional
chart carrying the standard area form.

The frame bundle is identified with M x SL(2,R) through the coordinate frame
(d/dp, d/dq), which is a symplectic frame everywhere precisely because omega
is the constant standard form; the construction therefore requires
omega = dp^dq in the global chart.

The prequantization form is gamma = (1/(i hbar)) beta + (half the determinant
character's derivative applied to the trivial connection).  Vector fields on
P are restricted to the structured class

    base field  +  right-invariant part (A(m), tau(m))  +  left-invariant
    constant part (B, c)

where right-invariant means the fiber tangent exp(t alpha) . a generated by
left translations (these carry the lifted Hamiltonian flows) and
left-invariant means a . exp(t alpha) (these are the vertical generators).
Because the determinant character kills the adjoint twist, gamma evaluates on
a structured field as a function of the base alone:

    gamma(zeta)(m) = (1/(i hbar)) beta(base)(m) + tau(m) + c.

The class is closed under brackets; the bracket signs are fixed by the
numeric flow-commutator oracle (see structured_rhs), which the test suites
re-run on every build.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from .circle import I_HBAR_INV, TWO_PI_HBAR_INV, TWO_PI_I
from .errors import (
    DegenerateParameterError, NotQuantomorphismError, UnsupportedFieldError,
)
from .expr import Expr, HBAR, IMAG, ZERO, add, diff, evalf, mul, rational, symbol
from .flows import flow_commutator
from .forms import ChartMap, KForm, VectorField, lie_derivative, pullback, zero_vf
from .mpc_group import (
    IDENTITY, Mat, MpcElement, MpElement, eta, mat_mul, mat_sub_norm,
    mp_mul, mpc_mul, mu_loop, rotation,
)
from .sample import expr_equal
from .symplectic import SymplecticChart, hamiltonian_vf
from .circle import PrequantCircle

EMat = Tuple[Expr, Expr, Expr, Expr]  # 2x2 matrix of expressions, row-major

E_ZERO: EMat = (ZERO, ZERO, ZERO, ZERO)
M_ZERO: Mat = (0.0, 0.0, 0.0, 0.0)

FIBER_SYMBOLS = ("g11", "g12", "g21", "g22")


def emat_commutator(a: EMat, b: EMat) -> EMat:
    def entry(i, j):
        return add(*[mul(a[2 * i + k], b[2 * k + j]) for k in range(2)],
                   *[mul(rational(-1), b[2 * i + k], a[2 * k + j]) for k in range(2)])
    return (entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))


def emat_apply(v: VectorField, a: EMat) -> EMat:
    return tuple(v.apply(entry) for entry in a)


def emat_from_mat(m: Mat) -> EMat:
    return tuple(rational(Fraction(x)) for x in m)


def imag_expr(c: complex) -> Expr:
    """Embed an imaginary float as an exact expression c = (Im c) * i."""
    if abs(c.real) > 1e-12:
        raise UnsupportedFieldError(f"u(1) coefficient {c} is not imaginary")
    return mul(rational(Fraction(c.imag)), IMAG)


def jacobian(v: VectorField) -> EMat:
    p, q = (symbol(x) for x in v.chart.coords)
    v1, v2 = v.components
    return (diff(v1, p), diff(v1, q), diff(v2, p), diff(v2, q))


class MpcPrequant:
    """Bundle data for P = M x Mp^c over (M, dp^dq) with potential beta."""

    def __init__(self, sympl: SymplecticChart, beta: KForm, validate: bool = True):
        chart = sympl.chart
        if chart.dim != 2:
            raise UnsupportedFieldError("the trivialized construction needs a 2-dimensional chart")
        if validate and not sympl.omega.coeffs[0].is_one():
            raise UnsupportedFieldError(
                "the coordinate frame must be symplectic: omega must equal dp^dq")
        self.sympl = sympl
        self.chart = chart
        self.beta = beta
        # the circle-bundle layer performs the d(beta) = omega validation
        self.circle = PrequantCircle(sympl, beta, validate=validate)

    def beta_of(self, v: VectorField) -> Expr:
        return self.beta(v)


class StructuredVF:
    """base + right-invariant (A(m), tau(m)) + left-invariant constant (B, c)."""

    __slots__ = ("bundle", "base", "a_r", "tau_r", "a_l", "tau_l")

    def __init__(self, bundle: MpcPrequant, base: VectorField,
                 a_r: EMat = E_ZERO, tau_r: Expr = ZERO,
                 a_l: Mat = M_ZERO, tau_l: complex = 0j):
        tr = add(a_r[0], a_r[3])
        if not tr.is_zero():
            raise UnsupportedFieldError(
                f"right-invariant matrix coefficient has trace {tr}")
        if abs(a_l[0] + a_l[3]) > 1e-12:
            raise UnsupportedFieldError("left-invariant matrix part must be traceless")
        if abs(tau_l.real) > 1e-12:
            raise UnsupportedFieldError("left-invariant u(1) part must be imaginary")
        self.bundle = bundle
        self.base = base
        self.a_r = a_r
        self.tau_r = tau_r
        self.a_l = a_l
        self.tau_l = tau_l

    def __eq__(self, other):
        return (isinstance(other, StructuredVF)
                and self.base == other.base and self.a_r == other.a_r
                and self.tau_r == other.tau_r and self.a_l == other.a_l
                and self.tau_l == other.tau_l)

    def __hash__(self):
        return hash((self.base, self.a_r, self.tau_r, self.a_l, self.tau_l))

    def __repr__(self):
        return (f"StructuredVF(base={self.base!r}, a_r={self.a_r!r}, "
                f"tau_r={self.tau_r!r}, a_l={self.a_l!r}, tau_l={self.tau_l!r})")

    def gamma(self) -> Expr:
        """gamma(zeta) as a function on the base; the adjoint twist on the
        right-invariant part is invisible because the determinant character
        is a character."""
        return add(mul(I_HBAR_INV, self.bundle.beta_of(self.base)),
                   self.tau_r, imag_expr(self.tau_l))

    def is_zero(self) -> bool:
        return (self.base.is_zero() and all(c.is_zero() for c in self.a_r)
                and self.tau_r.is_zero()
                and all(v == 0 for v in self.a_l) and self.tau_l == 0)


def vertical_central(bundle: MpcPrequant, coefficient: Expr) -> StructuredVF:
    """coefficient(m) times the central vertical generator normalized so that
    gamma assigns it 2 pi i.  Central directions are both left- and
    right-invariant; an m-dependent coefficient lives in the right slot."""
    return StructuredVF(bundle, zero_vf(bundle.chart),
                        tau_r=mul(TWO_PI_I, coefficient))


def left_invariant(bundle: MpcPrequant, a_l: Mat, tau_l: complex) -> StructuredVF:
    """The vertical generator of the right action by exp(t (B, c))."""
    return StructuredVF(bundle, zero_vf(bundle.chart), a_l=a_l, tau_l=tau_l)


def frame_lift(f: Expr, bundle: MpcPrequant) -> StructuredVF:
    """Lift of the Hamiltonian flow to the frame bundle: the fiber part is
    right-invariant with matrix the Jacobian of the Hamiltonian field (the
    linearization of a symplectic flow, hence traceless)."""
    xi = hamiltonian_vf(f, bundle.sympl)
    jac = jacobian(xi)
    tr = add(jac[0], jac[3])
    if not tr.is_zero():
        raise UnsupportedFieldError(
            f"frame lift got a non-Hamiltonian linearization with trace {tr}")
    return StructuredVF(bundle, xi, a_r=jac)


def hat_lift(f: Expr, bundle: MpcPrequant) -> StructuredVF:
    """Horizontal lift to P: the frame lift plus the central coefficient
    solving (1/(i hbar)) beta(xi_f) + tau = 0."""
    z = frame_lift(f, bundle)
    tau = mul(rational(-1), I_HBAR_INV, bundle.beta_of(z.base))
    return StructuredVF(bundle, z.base, a_r=z.a_r, tau_r=tau)


def E_mpc(f: Expr, bundle: MpcPrequant) -> StructuredVF:
    """hat lift plus (1/(2 pi hbar)) f times the central vertical generator."""
    z = hat_lift(f, bundle)
    tau = add(z.tau_r, mul(TWO_PI_HBAR_INV, TWO_PI_I, f))
    return StructuredVF(bundle, z.base, a_r=z.a_r, tau_r=tau)


def structured_bracket(z1: StructuredVF, z2: StructuredVF) -> StructuredVF:
    """Closed-form bracket on the structured class.

    Right-invariant parts: derivative terms along the bases plus minus the
    matrix commutator (fields generated by left translations bracket
    anti-homomorphically).  Left-invariant parts: plus the commutator.
    Mixed right/left parts commute; central coefficients just get
    differentiated.  All signs are pinned by the flow-commutator oracle.
    """
    from .forms import lie_bracket
    base = lie_bracket(z1.base, z2.base)
    a_r = emat_apply(z1.base, z2.a_r)
    a_r = tuple(add(x, mul(rational(-1), y), mul(rational(-1), z))
                for x, y, z in zip(a_r, emat_apply(z2.base, z1.a_r),
                                   emat_commutator(z1.a_r, z2.a_r)))
    tau_r = add(z1.base.apply(z2.tau_r), mul(rational(-1), z2.base.apply(z1.tau_r)))
    b1, b2 = z1.a_l, z2.a_l
    a_l = (b1[0] * b2[0] + b1[1] * b2[2] - (b2[0] * b1[0] + b2[1] * b1[2]),
           b1[0] * b2[1] + b1[1] * b2[3] - (b2[0] * b1[1] + b2[1] * b1[3]),
           b1[2] * b2[0] + b1[3] * b2[2] - (b2[2] * b1[0] + b2[3] * b1[2]),
           b1[2] * b2[1] + b1[3] * b2[3] - (b2[2] * b1[1] + b2[3] * b1[3]))
    return StructuredVF(z1.bundle, base, a_r=a_r, tau_r=tau_r, a_l=a_l, tau_l=0j)


def gamma_lie_derivative_struct(z: StructuredVF) -> KForm:
    """L_zeta gamma as a 1-form on the base:
    (1/(i hbar)) L_base beta + d(tau_r); the constant left part drops out."""
    from .forms import exterior_derivative, scalar_form
    lb = lie_derivative(z.base, z.bundle.beta).scale(I_HBAR_INV)
    dtau = exterior_derivative(scalar_form(z.bundle.chart, z.tau_r))
    return lb.plus(dtau)


@dataclass
class MembershipReport:
    connection_residual: float
    left_sp_norm: float
    frame_residual: float
    condition_1: bool
    condition_2: bool

    @property
    def passed(self) -> bool:
        return self.condition_1 and self.condition_2


def quantomorphism_membership(z: StructuredVF, bundle: MpcPrequant) -> MembershipReport:
    """Checks the two defining conditions on the structured class:

    (1) the flow preserves gamma: (1/(i hbar)) L_base beta + d(tau_r) = 0;
    (2) the flow covers the lifted base flow: the left-invariant sp-part
        vanishes and the right-invariant matrix equals the Jacobian of the
        base field.
    """
    tol = bundle.chart.sampler.tolerance
    la = gamma_lie_derivative_struct(z)
    res1 = 0.0
    for c in la.coeffs:
        _, r = expr_equal(c, ZERO, bundle.chart.sampler)
        res1 = max(res1, r)
    left_norm = math.sqrt(sum(v * v for v in z.a_l))
    jac = jacobian(z.base)
    res2 = 0.0
    for a, b in zip(z.a_r, jac):
        _, r = expr_equal(a, b, bundle.chart.sampler)
        res2 = max(res2, r)
    return MembershipReport(
        connection_residual=res1,
        left_sp_norm=left_norm,
        frame_residual=res2,
        condition_1=res1 <= tol,
        condition_2=left_norm <= tol and res2 <= tol,
    )


def F_mpc(z: StructuredVF, bundle: MpcPrequant, check: bool = True) -> Expr:
    """-(1/(i hbar)) F(zeta) = gamma(zeta); inverse of E on the members."""
    if check:
        rep = quantomorphism_membership(z, bundle)
        if not rep.passed:
            raise NotQuantomorphismError(
                "field is not an infinitesimal structure-preserving symmetry",
                max(rep.connection_residual, rep.left_sp_norm, rep.frame_residual))
    return mul(rational(-1), IMAG, HBAR, z.gamma())


# ---------------------------------------------------------------------------
# numeric flow oracle on the product coordinates (p, q, g11, g12, g21, g22, theta)


def structured_rhs(z: StructuredVF, hbar: float = 1.0) -> Callable:
    """Velocity field in covering coordinates: the base moves by the base
    field, the matrix part by A(m) g + g B, the fiber angle by the imaginary
    parts of the u(1) coefficients.  Sheet bookkeeping is locally constant
    and does not enter the flow."""
    chart = z.bundle.chart

    def fn(x: Sequence[float]) -> List[float]:
        env = {chart.coords[0]: x[0], chart.coords[1]: x[1], "hbar": hbar}
        vp = evalf(z.base.components[0], env).real
        vq = evalf(z.base.components[1], env).real
        a = [evalf(c, env) for c in z.a_r]
        if max(abs(v.imag) for v in a) > 1e-9:
            raise UnsupportedFieldError("right-invariant matrix part must be real")
        g = x[2:6]
        ag = (a[0].real * g[0] + a[1].real * g[2],
              a[0].real * g[1] + a[1].real * g[3],
              a[2].real * g[0] + a[3].real * g[2],
              a[2].real * g[1] + a[3].real * g[3])
        b = z.a_l
        gb = (g[0] * b[0] + g[1] * b[2], g[0] * b[1] + g[1] * b[3],
              g[2] * b[0] + g[3] * b[2], g[2] * b[1] + g[3] * b[3])
        tau = evalf(z.tau_r, env) + z.tau_l
        return [vp, vq, ag[0] + gb[0], ag[1] + gb[1], ag[2] + gb[2], ag[3] + gb[3],
                tau.imag]

    return fn


def bracket_flow_residual(z1: StructuredVF, z2: StructuredVF,
                          points: Sequence[Sequence[float]],
                          hbar: float = 1.0, t: float = 1e-3) -> float:
    """Worst deviation between the symbolic structured bracket and the
    numeric flow commutator at the given covering-coordinate points."""
    zb = structured_bracket(z1, z2)
    f1, f2, fb = structured_rhs(z1, hbar), structured_rhs(z2, hbar), structured_rhs(zb, hbar)
    worst = 0.0
    for x in points:
        oracle = flow_commutator(f1, f2, x, t=t)
        exact = fb(x)
        worst = max(worst, max(abs(a - b) for a, b in zip(oracle, exact)))
    return worst


def sample_fiber_points(bundle: MpcPrequant, n: int, seed_tag: str = "fiber"):
    """Covering-coordinate sample points (p, q, g, theta) with g in SL(2,R)."""
    from .mpc_group import mat_exp
    rng = random.Random(f"{bundle.chart.sampler.seed}:{seed_tag}")
    base_pts = bundle.chart.sampler.points(n, seed_tag=seed_tag)
    out = []
    for pt in base_pts:
        a = rng.uniform(-0.8, 0.8)
        g = mat_exp((a, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -a))
        theta = rng.uniform(-2.5, 2.5)
        out.append([pt[bundle.chart.coords[0]], pt[bundle.chart.coords[1]],
                    g[0], g[1], g[2], g[3], theta])
    return out


# ---------------------------------------------------------------------------
# gamma contract checks (numeric side)


def gamma_numeric(bundle: MpcPrequant, x: Sequence[float], v: Sequence[float],
                  hbar: float = 1.0) -> complex:
    """gamma evaluated on a coordinate tangent at a covering-coordinate point:
    (1/(i hbar)) beta(v_base) + i v_theta.  The matrix directions are
    annihilated because the determinant character only sees the phase."""
    env = {bundle.chart.coords[0]: x[0], bundle.chart.coords[1]: x[1], "hbar": hbar}
    bcoeffs = [evalf(c, env) for c in bundle.beta.coeffs]
    beta_v = bcoeffs[0] * v[0] + bcoeffs[1] * v[1]
    return beta_v / (1j * hbar) + 1j * v[6]


def pushforward_residual(bundle: MpcPrequant, fmap: Callable, x: Sequence[float],
                         h: float = 1e-6, hbar: float = 1.0, n_tangents: int = 4,
                         seed_tag: str = "push") -> float:
    """max over random unit tangents v of |gamma(K_* v) - gamma(v)|, with the
    pushforward taken by central differences of the coordinate map."""
    rng = random.Random(f"{bundle.chart.sampler.seed}:{seed_tag}")
    worst = 0.0
    for _ in range(n_tangents):
        v = [rng.uniform(-1, 1) for _ in range(7)]
        norm = math.sqrt(sum(c * c for c in v))
        v = [c / norm for c in v]
        hi = fmap([a + h * b for a, b in zip(x, v)])
        lo = fmap([a - h * b for a, b in zip(x, v)])
        pushed = [(a - b) / (2 * h) for a, b in zip(hi, lo)]
        g1 = gamma_numeric(bundle, fmap(list(x)), pushed, hbar)
        g0 = gamma_numeric(bundle, x, v, hbar)
        worst = max(worst, abs(g1 - g0))
    return worst


def right_action_map(b: MpcElement) -> Callable:
    """Right translation in covering coordinates, with the cocycle sign frozen
    (it is locally constant, hence invisible to derivatives)."""
    shift = cmath.phase(b.phase)

    def fn(x: Sequence[float]) -> List[float]:
        g = mat_mul((x[2], x[3], x[4], x[5]), b.g)
        return [x[0], x[1], g[0], g[1], g[2], g[3], x[6] + shift]

    return fn


def eta_ad_residual(n: int = 50, seed: int = 42) -> float:
    """Numeric check that conjugation is invisible to half the determinant
    character's derivative: (1/2) d/dt arg eta(a exp(t alpha) a^{-1}) = Im tau."""
    from .mpc_group import MpcAlgebra, exp_mpc, mpc_inv
    rng = random.Random(f"{seed}:eta-ad")
    h = 1e-6
    worst = 0.0
    for _ in range(n):
        a_diag = rng.uniform(-0.8, 0.8)
        alg = MpcAlgebra((a_diag, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
                          -a_diag), 1j * rng.uniform(-1, 1))
        g = rng.uniform(-0.9, 0.9)
        a = MpcElement(
            mat_mul(rotation(rng.uniform(-2, 2)),
                    (math.exp(g), 0.0, rng.uniform(-0.5, 0.5), math.exp(-g))),
            cmath.exp(1j * rng.uniform(-3, 3)))
        conj = mpc_mul(mpc_mul(a, exp_mpc(alg, h)), mpc_inv(a))
        fd = 0.5 * cmath.phase(eta(conj)) / h
        worst = max(worst, abs(fd - alg.tau.imag))
    return worst


def dgamma_structured_residual(bundle: MpcPrequant, pairs) -> float:
    """Residual of d(gamma) = (1/(i hbar)) omega pulled back, evaluated
    invariantly on structured pairs:
    zeta1 gamma(zeta2) - zeta2 gamma(zeta1) - gamma([zeta1, zeta2])."""
    worst = 0.0
    for z1, z2 in pairs:
        lhs = add(z1.base.apply(z2.gamma()),
                  mul(rational(-1), z2.base.apply(z1.gamma())),
                  mul(rational(-1), structured_bracket(z1, z2).gamma()))
        rhs = mul(I_HBAR_INV, bundle.sympl.omega(z1.base, z2.base))
        _, r = expr_equal(lhs, rhs, bundle.chart.sampler)
        worst = max(worst, r)
    return worst


# ---------------------------------------------------------------------------
# the operator representation on centrally-equivariant sections


def section_vocabulary(bundle: MpcPrequant):
    return tuple(bundle.chart.coords) + FIBER_SYMBOLS


def delta_operator(f: Expr, u: Expr, bundle: MpcPrequant) -> Expr:
    """delta_f on a section encoded by u(p, q, g11, g12, g21, g22), where the
    equivariant function is s(m, (g, lambda)) = lambda^{-1} u(m, g) and the
    central circle acts on the fiber by scalars.

    The horizontal lift acts by base derivatives, the linear fiber field
    (A(m) g)_{ij} d/dg_{ij}, and -tau(m) from the central part (the vertical
    generator acts on equivariant functions as -2 pi i); then (1/(i hbar)) f
    is added.
    """
    z = hat_lift(f, bundle)
    out = z.base.apply(u)
    gmat = tuple(symbol(s) for s in FIBER_SYMBOLS)
    ag = (add(mul(z.a_r[0], gmat[0]), mul(z.a_r[1], gmat[2])),
          add(mul(z.a_r[0], gmat[1]), mul(z.a_r[1], gmat[3])),
          add(mul(z.a_r[2], gmat[0]), mul(z.a_r[3], gmat[2])),
          add(mul(z.a_r[2], gmat[1]), mul(z.a_r[3], gmat[3])))
    for coeff, gsym in zip(ag, gmat):
        out = add(out, mul(coeff, diff(u, gsym)))
    out = add(out, mul(rational(-1), z.tau_r, u))
    return add(out, mul(I_HBAR_INV, f, u))


# ---------------------------------------------------------------------------
# bundle maps and the two counterexample constructions


@dataclass
class BundleMap:
    """A bundle map in the trivialization: a chart map downstairs plus a
    closed-form fiber map (base point, group element) -> group element.

    Being a diffeomorphism is only checked as invertibility of caller-supplied
    inverse data (see inverse_residual); smoothness is assumed.
    """

    base: ChartMap
    fiber: Callable[[dict, MpcElement], MpcElement]
    inverse: "BundleMap | None" = None

    def apply(self, point: dict, a: MpcElement) -> Tuple[dict, MpcElement]:
        env = dict(point)
        env["hbar"] = 1.0
        moved = {name: evalf(comp, env).real
                 for name, comp in zip(self.base.target.coords, self.base.components)}
        return moved, self.fiber(point, a)

    def inverse_residual(self, bundle: MpcPrequant, n: int = 8) -> float:
        """Worst round-trip defect of apply followed by the inverse data."""
        if self.inverse is None:
            raise UnsupportedFieldError("no inverse data supplied")
        rng = random.Random(f"{bundle.chart.sampler.seed}:bundlemap")
        from .mpc_group import mat_exp
        worst = 0.0
        for pt in bundle.chart.sampler.points(n, seed_tag="bundlemap"):
            d = rng.uniform(-0.8, 0.8)
            a = MpcElement(mat_exp((d, rng.uniform(-0.8, 0.8),
                                    rng.uniform(-0.8, 0.8), -d)),
                           cmath.exp(1j * rng.uniform(-3, 3)))
            mid_pt, mid_a = self.apply(pt, a)
            back_pt, back_a = self.inverse.apply(mid_pt, mid_a)
            worst = max(worst, max(abs(back_pt[c] - pt[c]) for c in pt))
            worst = max(worst, mat_sub_norm(back_a.g, a.g), abs(back_a.phase - a.phase))
        return worst


def _identity_chart_map(bundle: MpcPrequant) -> ChartMap:
    return ChartMap(bundle.chart, bundle.chart,
                    [symbol(c) for c in bundle.chart.coords])


def fiber_twist(a: MpcElement) -> MpcElement:
    """The fiber map of the first counterexample: [h, e^{2 pi i t}] goes to
    [h mu(2t), e^{2 pi i t}] for the period-1 loop mu in the double cover."""
    t = cmath.phase(a.phase) / (2 * math.pi)
    m = mu_loop(2 * t)
    prod = mp_mul(MpElement(a.g, 0), m)
    sign = -1.0 if prod.sheet else 1.0
    return MpcElement(prod.g, a.phase * sign)


def fiber_untwist(a: MpcElement) -> MpcElement:
    """Inverse of fiber_twist: multiply by the inverse loop value instead."""
    from .mpc_group import mp_inv
    t = cmath.phase(a.phase) / (2 * math.pi)
    m = mp_inv(mu_loop(2 * t))
    prod = mp_mul(MpElement(a.g, 0), m)
    sign = -1.0 if prod.sheet else 1.0
    return MpcElement(prod.g, a.phase * sign)


def twist_bundle_map(bundle: MpcPrequant) -> BundleMap:
    out = BundleMap(_identity_chart_map(bundle), lambda pt, a: fiber_twist(a))
    out.inverse = BundleMap(_identity_chart_map(bundle),
                            lambda pt, a: fiber_untwist(a))
    return out


def rotation_bundle_map(bundle: MpcPrequant, angle: Expr) -> BundleMap:
    from .expr import call
    p, q = (symbol(c) for c in bundle.chart.coords)

    def turn(by: Expr) -> ChartMap:
        c, s = call("cos", by), call("sin", by)
        return ChartMap(bundle.chart, bundle.chart, [
            add(mul(c, p), mul(rational(-1), s, q)),
            add(mul(s, p), mul(c, q)),
        ])

    out = BundleMap(turn(angle), lambda pt, a: a)
    out.inverse = BundleMap(turn(mul(rational(-1), angle)), lambda pt, a: a)
    return out


def _twist_covering_map(x: Sequence[float]) -> List[float]:
    # smooth representative in covering coordinates: theta is preserved and
    # the matrix picks up the projected loop factor R(4 theta)
    g = mat_mul((x[2], x[3], x[4], x[5]), rotation(4 * x[6]))
    return [x[0], x[1], g[0], g[1], g[2], g[3], x[6]]


@dataclass
class TwistReport:
    gamma_residual: float
    gamma_residual_half_step: float
    fiber_gap: float
    eta_residual: float
    fiber_values: tuple

    @property
    def gamma_preserved(self) -> bool:
        return self.gamma_residual <= 1e-6 and self.gamma_residual_half_step <= 1e-6

    @property
    def descends_to_frame_bundle(self) -> bool:
        return self.fiber_gap < 0.5

    @property
    def passed(self) -> bool:
        # the finding: the connection form is preserved, yet no frame-bundle
        # map exists because the image is fiber-dependent
        return self.gamma_preserved and not self.descends_to_frame_bundle


def example_fiberwise_twist(bundle: MpcPrequant, n_points: int = 8,
                            hbar: float = 1.0) -> TwistReport:
    """K(m, a) = (m, fiber_twist(a)): preserves gamma but does not descend
    through the frame-bundle projection."""
    kmap = twist_bundle_map(bundle)
    pts = sample_fiber_points(bundle, n_points, seed_tag="twist")
    worst = 0.0
    worst_half = 0.0
    for x in pts:
        worst = max(worst, pushforward_residual(bundle, _twist_covering_map, x,
                                                h=1e-6, hbar=hbar))
        worst_half = max(worst_half, pushforward_residual(
            bundle, _twist_covering_map, x, h=5e-7, hbar=hbar))
    # two points of one Sigma-fiber: t = 0 and t = 1/8
    origin = {c: v for c, v in zip(bundle.chart.coords, (1.0, 0.0))}
    g0 = kmap.apply(origin, MpcElement(IDENTITY, 1.0))[1].g
    g1 = kmap.apply(origin, MpcElement(IDENTITY, cmath.exp(2j * math.pi / 8)))[1].g
    gap = mat_sub_norm(g0, g1)
    rng = random.Random("twist-eta")
    eta_worst = 0.0
    for _ in range(20):
        from .mpc_group import mat_exp
        a_diag = rng.uniform(-0.8, 0.8)
        a = MpcElement(mat_exp((a_diag, rng.uniform(-0.8, 0.8),
                                rng.uniform(-0.8, 0.8), -a_diag)),
                       cmath.exp(1j * rng.uniform(-3, 3)))
        eta_worst = max(eta_worst, abs(eta(kmap.fiber(origin, a)) - eta(a)))
    return TwistReport(gamma_residual=worst, gamma_residual_half_step=worst_half,
                       fiber_gap=gap, eta_residual=eta_worst,
                       fiber_values=(g0, g1))


@dataclass
class RotationReport:
    gamma_symbolic: bool
    equivariant: bool
    induced_fiber: Mat
    lifted_fiber: Mat
    fiber_difference: float
    condition_1: bool
    condition_2: bool

    @property
    def passed(self) -> bool:
        # the finding: equivariant and connection-preserving, yet the induced
        # frame map differs from the lift of the base map
        return self.condition_1 and not self.condition_2


def example_base_rotation(bundle: MpcPrequant, angle: Expr,
                          hbar: float = 1.0) -> RotationReport:
    """K(m, a) = (T(m), a) for the base rotation T by ``angle``: preserves
    gamma and is equivariant, but the induced frame-bundle map keeps the
    frame fixed while the lift of T rotates it."""
    angle_num = evalf(angle, {"hbar": hbar}).real
    if abs(math.remainder(angle_num, 2 * math.pi)) < 1e-9:
        raise DegenerateParameterError(
            f"rotation angle {angle_num} is an integer multiple of 2 pi")
    kmap = rotation_bundle_map(bundle, angle)
    gamma_sym = (pullback(kmap.base, bundle.beta) == bundle.beta
                 and pullback(kmap.base, bundle.sympl.omega) == bundle.sympl.omega)

    rng = random.Random("rotation-equivariance")
    from .mpc_group import mat_exp
    origin = {c: v for c, v in zip(bundle.chart.coords, (1.0, 0.0))}
    equivariant = True
    for _ in range(20):
        d = rng.uniform(-0.8, 0.8)
        qa = MpcElement(mat_exp((d, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -d)),
                        cmath.exp(1j * rng.uniform(-3, 3)))
        d2 = rng.uniform(-0.8, 0.8)
        act = MpcElement(mat_exp((d2, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -d2)),
                         cmath.exp(1j * rng.uniform(-3, 3)))
        equivariant &= (kmap.fiber(origin, mpc_mul(qa, act))
                        == mpc_mul(kmap.fiber(origin, qa), act))

    induced = IDENTITY                   # the induced frame map keeps g
    lifted = rotation(angle_num)         # the lift of T rotates the frame
    diff_norm = mat_sub_norm(induced, lifted)
    return RotationReport(
        gamma_symbolic=gamma_sym,
        equivariant=equivariant,
        induced_fiber=induced,
        lifted_fiber=lifted,
        fiber_difference=diff_norm,
        condition_1=gamma_sym,
        condition_2=diff_norm < 1e-9,
    )
