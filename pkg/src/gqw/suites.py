"""Property suites over a loaded system, with machine-readable reports.

Each check carries an identifier, an anchor string stating the verified
identity, a pass/fail status, the worst residual observed, and the number of
samples involved.  Checks never raise: an exception inside a check surfaces
as a failed check with the error message attached.

Reports are deterministic for a fixed system and seed; timing is kept out of
the JSON rendering so that identical runs produce byte-identical reports.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .circle import (
    CircleLiftedVF, E_circle, EquivariantSection, F_circle, TWO_PI_HBAR_INV,
    TWO_PI_I, bracket_lifted, connection_nabla, gamma_lie_derivative,
    horizontal_lift, ks_operator, vertical_action,
)
from .expr import (
    Expr, HBAR, IMAG, ZERO, add, evalf, mul, power, rational, symbol,
)
from .flows import flow_commutator
from .forms import VectorField, exterior_derivative, interior_product, scalar_form, zero_vf
from .mpc_bundle import (
    E_mpc, F_mpc, StructuredVF, bracket_flow_residual, dgamma_structured_residual,
    delta_operator, eta_ad_residual, example_base_rotation,
    example_fiberwise_twist, hat_lift, frame_lift, jacobian, left_invariant,
    pushforward_residual, quantomorphism_membership, right_action_map,
    sample_fiber_points, section_vocabulary, structured_bracket,
)
from .mpc_group import (
    IDENTITY, MpcAlgebra, MpcElement, ROTATION_GENERATOR, central, eta,
    exp_mpc, kappa, lift_path, mat_exp, mat_mul, mat_sub_norm, mp_mul,
    mpc_distance, mpc_identity, mpc_inv, mpc_mul, mu_loop, rotation, sigma,
)
from .parse import parse_expr
from .sample import expr_equal
from .symplectic import (
    hamiltonian_vf, lie_derivative_omega, poisson, poisson_ways,
    verify_bracket_lemma,
)
from .system import SystemSpec

SUITE_NAMES = ("poisson", "circle-iso", "dirac", "group", "mpc-iso", "delta",
               "counterexamples")


@dataclass
class CheckResult:
    id: str
    anchor: str
    status: str
    residual: Optional[float]
    n_samples: int
    error: Optional[str] = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Report:
    suite: str
    checks: List[CheckResult]
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        payload = {
            "suite": self.suite,
            "checks": [
                {
                    "id": c.id,
                    "anchor": c.anchor,
                    "status": c.status,
                    "residual": c.residual,
                    "n_samples": c.n_samples,
                    **({"error": c.error} if c.error else {}),
                }
                for c in self.checks
            ],
        }
        return json.dumps(payload, indent=2)

    def to_text(self) -> str:
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'} "
                 f"({self.elapsed:.2f} s)"]
        for c in self.checks:
            res = "-" if c.residual is None else f"{c.residual:.3e}"
            line = (f"  [{'pass' if c.passed else 'FAIL'}] {c.id}: {c.anchor} "
                    f"(residual {res}, n={c.n_samples}, {c.elapsed:.2f} s)")
            if c.error:
                line += f" error: {c.error}"
            lines.append(line)
        return "\n".join(lines)


Check = Tuple[str, str, Callable[[], Tuple[bool, float, int]]]


def _run_checks(suite: str, checks: Sequence[Check]) -> Report:
    results = []
    t0 = time.perf_counter()
    for cid, anchor, fn in checks:
        t1 = time.perf_counter()
        try:
            ok, residual, n = fn()
            results.append(CheckResult(cid, anchor, "pass" if ok else "fail",
                                       residual, n, elapsed=time.perf_counter() - t1))
        except Exception as exc:  # a crashed check is a failed check
            results.append(CheckResult(cid, anchor, "fail", None, 0,
                                       error=f"{type(exc).__name__}: {exc}",
                                       elapsed=time.perf_counter() - t1))
    return Report(suite, results, elapsed=time.perf_counter() - t0)


def _random_polynomial(rng: random.Random, coords: Sequence[str],
                       max_degree: int = 3) -> Expr:
    xs = [symbol(c) for c in coords]
    terms = []
    for _ in range(rng.randint(1, 4)):
        exps = [0] * len(xs)
        budget = max_degree
        for k in range(len(xs)):
            exps[k] = rng.randint(0, budget)
            budget -= exps[k]
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        terms.append(mul(rational(c), *[power(x, e) for x, e in zip(xs, exps)]))
    return add(*terms)


def _params(spec: SystemSpec):
    return {"hbar": spec.hbar}


def _sym_residual(spec: SystemSpec, pairs) -> Tuple[bool, float, int]:
    """Worst sampled residual over (lhs, rhs) expression pairs; residual 0.0
    when every difference collapses structurally."""
    worst = 0.0
    n = 0
    for lhs, rhs in pairs:
        ok, r = expr_equal(lhs, rhs, spec.chart.sampler, params=_params(spec))
        worst = max(worst, r)
        n += spec.samples
        if not ok:
            return False, worst, n
    return True, worst, n


def _ham_pairs(spec: SystemSpec):
    hs = list(spec.hamiltonians.values())
    return list(itertools.combinations(hs, 2))


# ---------------------------------------------------------------------------
# poisson suite


def poisson_checks(spec: SystemSpec) -> List[Check]:
    s = spec.sympl
    hs = list(spec.hamiltonians.values())

    def defining_equation():
        pairs = []
        for f in hs:
            lhs = interior_product(hamiltonian_vf(f, s), s.omega)
            rhs = exterior_derivative(scalar_form(spec.chart, f))
            pairs.extend(zip(lhs.coeffs, rhs.coeffs))
        return _sym_residual(spec, pairs)

    def bracket_corpus():
        worst = 0.0
        n = 0
        for f, g in _ham_pairs(spec):
            rep = verify_bracket_lemma(f, g, s)
            worst = max(worst, max(rep["residuals"]))
            n += spec.samples * len(rep["residuals"])
            if not rep["passed"]:
                return False, worst, n
        return True, worst, n

    def bracket_random():
        rng = random.Random(f"{spec.seed}:bracket-random")
        worst = 0.0
        n = 0
        for _ in range(20):
            f = _random_polynomial(rng, spec.coords)
            g = _random_polynomial(rng, spec.coords)
            rep = verify_bracket_lemma(f, g, s)
            worst = max(worst, max(rep["residuals"]))
            n += spec.samples * len(rep["residuals"])
            if not rep["passed"]:
                return False, worst, n
        return True, worst, n

    def jacobi():
        rng = random.Random(f"{spec.seed}:jacobi")
        triples = list(itertools.combinations(hs, 3))[:10]
        triples += [tuple(_random_polynomial(rng, spec.coords) for _ in range(3))
                    for _ in range(5)]
        pairs = []
        for f, g, h in triples:
            total = add(poisson(f, poisson(g, h, s), s),
                        poisson(g, poisson(h, f, s), s),
                        poisson(h, poisson(f, g, s), s))
            pairs.append((total, ZERO))
        return _sym_residual(spec, pairs)

    def leibniz():
        rng = random.Random(f"{spec.seed}:leibniz")
        pairs = []
        for _ in range(8):
            f = _random_polynomial(rng, spec.coords)
            g = _random_polynomial(rng, spec.coords)
            h = _random_polynomial(rng, spec.coords)
            lhs = poisson(f, mul(g, h), s)
            rhs = add(mul(poisson(f, g, s), h), mul(g, poisson(f, h, s)))
            pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    def sign_coherence():
        pairs = []
        for f, g in _ham_pairs(spec):
            ways = poisson_ways(f, g, s)
            pairs.append((ways["minus_omega"], ways["directional"]))
            pairs.append((ways["interior"], ways["directional"]))
        return _sym_residual(spec, pairs)

    def flows_preserve_omega():
        pairs = []
        for f in hs:
            for c in lie_derivative_omega(f, s).coeffs:
                pairs.append((c, ZERO))
        return _sym_residual(spec, pairs)

    return [
        ("hamiltonian-defining", "xi_f . omega = df", defining_equation),
        ("bracket-compat-corpus", "[xi_f, xi_g] = xi_{f,g} on the corpus", bracket_corpus),
        ("bracket-compat-random", "[xi_f, xi_g] = xi_{f,g} on 20 random polynomial pairs",
         bracket_random),
        ("jacobi", "{f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0", jacobi),
        ("leibniz", "{f, g*h} = {f,g}*h + g*{f,h}", leibniz),
        ("sign-coherence", "xi_f g = -omega(xi_f, xi_g) = <dg, xi_f>", sign_coherence),
        ("flows-preserve-omega", "L_{xi_f} omega = 0", flows_preserve_omega),
    ]


# ---------------------------------------------------------------------------
# circle-iso suite


def circle_checks(spec: SystemSpec) -> List[Check]:
    y = spec.circle_bundle()
    s = spec.sympl
    hs = list(spec.hamiltonians.values())

    def field_pairs(z1: CircleLiftedVF, z2: CircleLiftedVF):
        out = list(zip(z1.base.components, z2.base.components))
        out.append((z1.fiber, z2.fiber))
        return out

    def lifted_bracket():
        pairs = []
        for f, g in _ham_pairs(spec):
            br = poisson(f, g, s)
            lhs = bracket_lifted(horizontal_lift(hamiltonian_vf(f, s), y),
                                 horizontal_lift(hamiltonian_vf(g, s), y))
            hor = horizontal_lift(hamiltonian_vf(br, s), y)
            rhs = CircleLiftedVF(y, hor.base,
                                 add(hor.fiber, mul(rational(-1), TWO_PI_HBAR_INV, br)))
            pairs.extend(field_pairs(lhs, rhs))
        return _sym_residual(spec, pairs)

    def e_homomorphism():
        pairs = []
        for f, g in _ham_pairs(spec):
            lhs = E_circle(poisson(f, g, s), y)
            rhs = bracket_lifted(E_circle(f, y), E_circle(g, y))
            pairs.extend(field_pairs(lhs, rhs))
        return _sym_residual(spec, pairs)

    def e_preserves_connection():
        pairs = []
        for f in hs:
            for c in gamma_lie_derivative(E_circle(f, y)).coeffs:
                pairs.append((c, ZERO))
        return _sym_residual(spec, pairs)

    def f_inverts_e():
        pairs = [(F_circle(E_circle(f, y), y), f) for f in hs]
        return _sym_residual(spec, pairs)

    def e_inverts_f():
        pairs = []
        for f in hs:
            z = E_circle(f, y)
            back = E_circle(F_circle(z, y), y)
            pairs.extend(field_pairs(back, z))
        return _sym_residual(spec, pairs)

    def horizontal_gamma():
        rng = random.Random(f"{spec.seed}:hlift")
        pairs = []
        for _ in range(10):
            f = _random_polynomial(rng, spec.coords)
            z = horizontal_lift(hamiltonian_vf(f, s), y)
            pairs.append((z.gamma(), ZERO))
        return _sym_residual(spec, pairs)

    def bracket_flow_oracle():
        f = list(spec.hamiltonians.values())[4]
        g = list(spec.hamiltonians.values())[3]
        z1, z2 = E_circle(f, y), E_circle(g, y)
        z12 = bracket_lifted(z1, z2)

        def rhs(z):
            def fn(x):
                env = dict(zip(spec.coords, x[:len(spec.coords)]))
                env["hbar"] = spec.hbar
                return [evalf(c, env).real for c in z.base.components] + \
                    [evalf(z.fiber, env).real]
            return fn

        rng = random.Random(f"{spec.seed}:circle-flow")
        worst = 0.0
        pts = spec.chart.sampler.points(8, seed_tag="circle-flow")
        for pt in pts:
            x = [pt[c] for c in spec.coords] + [rng.uniform(0, 1)]
            oracle = flow_commutator(rhs(z1), rhs(z2), x, t=1e-3)
            exact = rhs(z12)(x)
            worst = max(worst, max(abs(a - b) for a, b in zip(oracle, exact)))
        return worst < 1e-5, worst, 8

    return [
        ("lifted-bracket-formula",
         "[lift xi_f, lift xi_g] = lift xi_{f,g} - (1/(2 pi hbar)) {f,g} vertical",
         lifted_bracket),
        ("e-homomorphism", "E({f,g}) = [E(f), E(g)]", e_homomorphism),
        ("e-preserves-connection", "L_{E(f)} gamma = 0", e_preserves_connection),
        ("f-inverts-e", "F(E(f)) = f", f_inverts_e),
        ("e-inverts-f", "E(F(zeta)) = zeta on the image of E", e_inverts_f),
        ("horizontal-lift-gamma", "gamma(horizontal lift) = 0", horizontal_gamma),
        ("bracket-flow-oracle",
         "lifted bracket agrees with the numeric flow commutator", bracket_flow_oracle),
    ]


# ---------------------------------------------------------------------------
# dirac suite


def dirac_checks(spec: SystemSpec) -> List[Check]:
    y = spec.circle_bundle()
    s = spec.sympl
    hs = list(spec.hamiltonians.values())
    x0, x1 = symbol(spec.coords[0]), symbol(spec.coords[1])
    sects = [EquivariantSection(u) for u in
             (rational(1), mul(x0, x1), add(power(x0, 2), mul(rational(-1), x1)))]

    def identity_axiom():
        pairs = [(ks_operator(rational(1), sec, y).u, sec.u) for sec in sects]
        return _sym_residual(spec, pairs)

    def commutator_axiom():
        pairs = []
        for f in hs[1:6]:
            for g in hs[2:5]:
                for sec in sects:
                    fg = ks_operator(f, ks_operator(g, sec, y), y)
                    gf = ks_operator(g, ks_operator(f, sec, y), y)
                    lhs = add(fg.u, mul(rational(-1), gf.u))
                    rhs = mul(IMAG, HBAR, ks_operator(poisson(f, g, s), sec, y).u)
                    pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    def curvature():
        from .forms import lie_bracket
        n = spec.chart.dim

        def basis(k):
            return VectorField(spec.chart,
                               [rational(1) if i == k else ZERO for i in range(n)])

        mixed = [ZERO] * n
        mixed[0], mixed[1] = x1, x0
        fields = [basis(0), basis(1), VectorField(spec.chart, mixed)]
        pairs = []
        for xi in fields:
            for etaf in fields:
                for sec in sects[:2]:
                    a = connection_nabla(xi, connection_nabla(etaf, sec, y), y).u
                    b = connection_nabla(etaf, connection_nabla(xi, sec, y), y).u
                    c = connection_nabla(lie_bracket(xi, etaf), sec, y).u
                    lhs = add(a, mul(rational(-1), b), mul(rational(-1), c))
                    rhs = mul(power(mul(IMAG, HBAR), -1), s.omega(xi, etaf), sec.u)
                    pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    def operator_via_connection():
        pairs = []
        for f in hs:
            for sec in sects:
                xi = hamiltonian_vf(f, s)
                lhs = ks_operator(f, sec, y).u
                rhs = add(mul(IMAG, HBAR, connection_nabla(xi, sec, y).u),
                          mul(f, sec.u))
                pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    def vertical_rule():
        pairs = []
        for sec in sects:
            lhs = vertical_action(sec).u
            rhs = mul(rational(-1), TWO_PI_I, sec.u)
            pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    return [
        ("identity-axiom", "r(1) = id", identity_axiom),
        ("commutator-axiom", "[r(f), r(g)] = i hbar r({f,g})", commutator_axiom),
        ("curvature-identity",
         "(nabla nabla - nabla nabla - nabla_[,]) = (1/(i hbar)) omega", curvature),
        ("operator-via-connection", "r(f) = i hbar nabla_{xi_f} + f",
         operator_via_connection),
        ("vertical-action", "the vertical generator acts on sections by -2 pi i",
         vertical_rule),
    ]


# ---------------------------------------------------------------------------
# group suite (independent of the system; uses the seed and tolerances)


def group_checks(spec: SystemSpec) -> List[Check]:
    seed = spec.seed

    def rand_sp(rng):
        a = rng.uniform(-1.2, 1.2)
        return mat_exp((a, rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2), -a))

    def rand_mpc(rng):
        import cmath
        return MpcElement(rand_sp(rng), cmath.exp(1j * rng.uniform(-math.pi, math.pi)))

    def cocycle_identity():
        rng = random.Random(f"{seed}:cocycle")
        for k in range(1000):
            g1, g2, g3 = rand_sp(rng), rand_sp(rng), rand_sp(rng)
            lhs = kappa(g1, g2) + kappa(mat_mul(g1, g2), g3)
            rhs = kappa(g2, g3) + kappa(g1, mat_mul(g2, g3))
            if (lhs - rhs) % 2 != 0:
                return False, 1.0, k + 1
        return True, 0.0, 1000

    def group_axioms():
        rng = random.Random(f"{seed}:axioms")
        worst = 0.0
        for _ in range(1000):
            a, b, c = rand_mpc(rng), rand_mpc(rng), rand_mpc(rng)
            worst = max(worst, mpc_distance(mpc_mul(mpc_mul(a, b), c),
                                            mpc_mul(a, mpc_mul(b, c))))
            worst = max(worst, mpc_distance(mpc_mul(a, mpc_inv(a)), mpc_identity()))
        return worst <= 1e-9, worst, 1000

    def eta_on_center():
        import cmath
        rng = random.Random(f"{seed}:center")
        worst = 0.0
        for _ in range(200):
            lam = cmath.exp(1j * rng.uniform(-math.pi, math.pi))
            worst = max(worst, abs(eta(central(lam)) - lam * lam))
        return worst <= 1e-12, worst, 200

    def homomorphisms():
        rng = random.Random(f"{seed}:homs")
        worst = 0.0
        for _ in range(1000):
            a, b = rand_mpc(rng), rand_mpc(rng)
            ab = mpc_mul(a, b)
            worst = max(worst, mat_sub_norm(sigma(ab), mat_mul(sigma(a), sigma(b))))
            worst = max(worst, abs(eta(ab) - eta(a) * eta(b)))
        return worst <= 1e-9, worst, 1000

    def path_lift_vs_cocycle():
        rng = random.Random(f"{seed}:pathlift")
        for k in range(200):
            m1 = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
            m2 = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
            a1 = (m1[0], m1[1], m1[2], -m1[0])
            a2 = (m2[0], m2[1], m2[2], -m2[0])
            g1 = mat_exp(a1)
            lift1 = lift_path(lambda u: mat_exp(tuple(u * v for v in a1)), 128)
            lift2 = lift_path(lambda u: mat_exp(tuple(u * v for v in a2)), 128)
            cont = lift_path(lambda u: mat_mul(g1, mat_exp(tuple(u * v for v in a2))),
                             128, start=lift1)
            prod = mp_mul(lift1, lift2)
            if cont.sheet != prod.sheet or mat_sub_norm(cont.g, prod.g) > 1e-9:
                return False, 1.0, k + 1
        return True, 0.0, 200

    def loop_lifts():
        single = lift_path(lambda u: rotation(2 * math.pi * u), 256)
        double = lift_path(lambda u: rotation(4 * math.pi * u), 256)
        ok = (single.sheet == 1 and double.sheet == 0
              and mat_sub_norm(single.g, IDENTITY) < 1e-9
              and mat_sub_norm(double.g, IDENTITY) < 1e-9)
        ok = ok and mu_loop(0.5).sheet == 1 and mu_loop(1.0).sheet == 0
        return ok, 0.0, 2

    def one_parameter():
        rng = random.Random(f"{seed}:exp")
        worst = 0.0
        for _ in range(20):
            a = rng.uniform(-0.8, 0.8)
            alpha = MpcAlgebra((a, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -a),
                               1j * rng.uniform(-1, 1))
            t, u = rng.uniform(-2, 2), rng.uniform(-2, 2)
            worst = max(worst, mpc_distance(exp_mpc(alpha, t + u),
                                            mpc_mul(exp_mpc(alpha, t), exp_mpc(alpha, u))))
        full_turn = exp_mpc(MpcAlgebra(ROTATION_GENERATOR, 0j), 2 * math.pi)
        ok = worst <= 1e-9 and abs(full_turn.phase + 1.0) < 1e-9
        return ok, worst, 20

    def algebra_split():
        import cmath
        rng = random.Random(f"{seed}:split")
        h = 1e-6
        worst = 0.0
        for _ in range(20):
            a = rng.uniform(-0.8, 0.8)
            A = (a, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -a)
            tau = 1j * rng.uniform(-1, 1)
            out = exp_mpc(MpcAlgebra(A, tau), h)
            fd_A = tuple((g - e) / h for g, e in zip(out.g, IDENTITY))
            worst = max(worst, max(abs(x - y) for x, y in zip(fd_A, A)))
            worst = max(worst, abs(0.5 * cmath.phase(eta(out)) / h - tau.imag))
        return worst <= 1e-4, worst, 20

    return [
        ("cocycle-identity", "kappa parity satisfies the 2-cocycle identity",
         cocycle_identity),
        ("group-axioms", "associativity and inverses in the circle extension",
         group_axioms),
        ("eta-center", "eta(lambda) = lambda^2 on the central circle", eta_on_center),
        ("sigma-eta-homomorphisms", "sigma and eta are group homomorphisms",
         homomorphisms),
        ("path-lift-vs-cocycle",
         "continuous path lifting agrees with the cocycle sheets on products",
         path_lift_vs_cocycle),
        ("loop-lifts", "R(2 pi t) lifts open; R(4 pi t) lifts closed", loop_lifts),
        ("exp-one-parameter", "exp((t+s) alpha) = exp(t alpha) exp(s alpha)",
         one_parameter),
        ("algebra-split",
         "sigma_* and (1/2) eta_* recover the algebra components", algebra_split),
    ]


# ---------------------------------------------------------------------------
# mpc-iso suite


def mpc_checks(spec: SystemSpec) -> List[Check]:
    bundle = spec.mpc_bundle()
    s = spec.sympl
    hs = list(spec.hamiltonians.values())

    def struct_pairs(z1: StructuredVF, z2: StructuredVF):
        out = list(zip(z1.base.components, z2.base.components))
        out.extend(zip(z1.a_r, z2.a_r))
        out.append((z1.tau_r, z2.tau_r))
        left_gap = max(abs(a - b) for a, b in zip(z1.a_l, z2.a_l))
        left_gap = max(left_gap, abs(z1.tau_l - z2.tau_l))
        return out, left_gap

    def invariance():
        import cmath
        rng = random.Random(f"{spec.seed}:invariance")
        pts = sample_fiber_points(bundle, 4, seed_tag="inv")
        worst = 0.0
        for x in pts:
            d = rng.uniform(-0.8, 0.8)
            b = MpcElement(mat_exp((d, rng.uniform(-0.8, 0.8),
                                    rng.uniform(-0.8, 0.8), -d)),
                           cmath.exp(1j * rng.uniform(-3, 3)))
            worst = max(worst, pushforward_residual(
                bundle, right_action_map(b), x, h=1e-6, hbar=spec.hbar))
        return worst <= 1e-6, worst, len(pts)

    def vertical_pairing():
        rng = random.Random(f"{spec.seed}:vertical")
        pairs = []
        from .mpc_bundle import imag_expr
        for _ in range(10):
            a = rng.uniform(-1, 1)
            tau = 1j * rng.uniform(-1, 1)
            v = left_invariant(bundle, (a, rng.uniform(-1, 1), rng.uniform(-1, 1), -a),
                               tau)
            pairs.append((v.gamma(), imag_expr(tau)))
        ok, worst, n = _sym_residual(spec, pairs)
        ad = eta_ad_residual(30, seed=spec.seed)
        return ok and ad <= 1e-4, max(worst, ad), n + 30

    def curvature_structured():
        f, g = hs[4], hs[3]
        pairs = [
            (E_mpc(f, bundle), E_mpc(g, bundle)),
            (hat_lift(f, bundle), hat_lift(g, bundle)),
            (hat_lift(g, bundle), left_invariant(bundle, (0.0, 1.0, 1.0, 0.0), 0.4j)),
        ]
        worst = dgamma_structured_residual(bundle, pairs)
        return worst <= spec.epsilon, worst, len(pairs) * spec.samples

    def frame_homomorphism():
        pairs = []
        for f, g in _ham_pairs(spec)[:10]:
            lhs = frame_lift(poisson(f, g, s), bundle)
            rhs = structured_bracket(frame_lift(f, bundle), frame_lift(g, bundle))
            ps, gap = struct_pairs(lhs, rhs)
            if gap > 0:
                return False, gap, 0
            pairs.extend(ps)
        return _sym_residual(spec, pairs)

    def hat_contract():
        pairs = []
        for f in hs:
            z = hat_lift(f, bundle)
            pairs.append((z.gamma(), ZERO))
            pairs.extend(zip(z.a_r, jacobian(z.base)))
            pairs.extend(zip(z.base.components, hamiltonian_vf(f, s).components))
        return _sym_residual(spec, pairs)

    def e_homomorphism_mpc():
        pairs = []
        for f, g in _ham_pairs(spec)[:12]:
            lhs = E_mpc(poisson(f, g, s), bundle)
            rhs = structured_bracket(E_mpc(f, bundle), E_mpc(g, bundle))
            ps, gap = struct_pairs(lhs, rhs)
            if gap > spec.epsilon:
                return False, gap, 0
            pairs.extend(ps)
        return _sym_residual(spec, pairs)

    def e_membership():
        worst = 0.0
        n = 0
        for f in hs:
            rep = quantomorphism_membership(E_mpc(f, bundle), bundle)
            worst = max(worst, rep.connection_residual, rep.left_sp_norm,
                        rep.frame_residual)
            n += 3 * spec.samples
            if not rep.passed:
                return False, worst, n
        return True, worst, n

    def hat_commutes_vertical():
        rng = random.Random(f"{spec.seed}:hatvert")
        pairs = []
        gap = 0.0
        for f in hs[1:]:
            a = rng.uniform(-1, 1)
            v = left_invariant(bundle, (a, rng.uniform(-1, 1), rng.uniform(-1, 1), -a),
                               1j * rng.uniform(-1, 1))
            out = structured_bracket(hat_lift(f, bundle), v)
            ps, g0 = struct_pairs(out, StructuredVF(bundle, zero_vf(bundle.chart)))
            gap = max(gap, g0)
            pairs.extend(ps)
        ok, worst, n = _sym_residual(spec, pairs)
        return ok and gap <= spec.epsilon, max(worst, gap), n

    def f_inverts_e_mpc():
        pairs = [(F_mpc(E_mpc(f, bundle), bundle), f) for f in hs]
        return _sym_residual(spec, pairs)

    def e_inverts_f_mpc():
        pairs = []
        gap = 0.0
        for f in hs:
            z = E_mpc(f, bundle)
            back = E_mpc(F_mpc(z, bundle), bundle)
            ps, g0 = struct_pairs(back, z)
            gap = max(gap, g0)
            pairs.extend(ps)
        ok, worst, n = _sym_residual(spec, pairs)
        return ok and gap <= spec.epsilon, max(worst, gap), n

    def bracket_oracle():
        f, g = hs[4], hs[3]
        pts = sample_fiber_points(bundle, 8)
        worst = 0.0
        for z1, z2 in [
            (E_mpc(f, bundle), E_mpc(g, bundle)),
            (hat_lift(f, bundle), left_invariant(bundle, (0.0, 1.0, 1.0, 0.0), 0.7j)),
        ]:
            worst = max(worst, bracket_flow_residual(z1, z2, pts, hbar=spec.hbar))
        return worst <= 1e-5, worst, 8

    def membership_regression():
        f = hs[3]
        good = E_mpc(f, bundle)
        bad = StructuredVF(bundle, good.base, a_r=good.a_r, tau_r=good.tau_r,
                           a_l=(1.0, 0.0, 0.0, -1.0), tau_l=0j)
        rep = quantomorphism_membership(bad, bundle)
        fval = F_mpc(bad, bundle, check=False)
        ok_value, _ = expr_equal(fval, f, spec.chart.sampler, params=_params(spec))
        broke = E_mpc(fval, bundle) != bad
        ok = rep.condition_1 and not rep.condition_2 and ok_value and broke
        return ok, rep.left_sp_norm, spec.samples

    return [
        ("prequant-invariance", "gamma is invariant under the right action (sampled)",
         invariance),
        ("prequant-vertical",
         "gamma(vertical generator) = u(1) algebra component; conjugation invisible",
         vertical_pairing),
        ("prequant-curvature",
         "d gamma = (1/(i hbar)) omega upstairs (structured evaluation)",
         curvature_structured),
        ("frame-lift-homomorphism", "lift of {f,g} = bracket of the lifts",
         frame_homomorphism),
        ("hat-lift-contract",
         "gamma(hat xi_f) = 0 and the frame part is the base Jacobian", hat_contract),
        ("e-homomorphism", "E({f,g}) = [E(f), E(g)] on structured fields",
         e_homomorphism_mpc),
        ("e-membership", "E(f) satisfies both membership conditions", e_membership),
        ("hat-commutes-vertical", "[hat xi_f, vertical generator] = 0",
         hat_commutes_vertical),
        ("f-inverts-e", "F(E(f)) = f", f_inverts_e_mpc),
        ("e-inverts-f", "E(F(zeta)) = zeta on the image of E", e_inverts_f_mpc),
        ("bracket-flow-oracle",
         "structured bracket agrees with the flow commutator at 8 points",
         bracket_oracle),
        ("membership-regression",
         "dropping the covering condition breaks E(F(zeta)) = zeta",
         membership_regression),
    ]


# ---------------------------------------------------------------------------
# delta suite


def delta_checks(spec: SystemSpec) -> List[Check]:
    bundle = spec.mpc_bundle()
    s = spec.sympl
    hs = list(spec.hamiltonians.values())
    vocab = section_vocabulary(bundle)
    sections = [parse_expr(t, vocab) for t in ["1", "g11*p", "p*q + g21"]]

    def identity_rule():
        pairs = [(delta_operator(rational(1), u, bundle),
                  mul(power(mul(IMAG, HBAR), -1), u)) for u in sections]
        return _sym_residual(spec, pairs)

    def homomorphism():
        pairs = []
        for u in sections:
            for f, g in _ham_pairs(spec)[:7]:
                lhs = add(delta_operator(f, delta_operator(g, u, bundle), bundle),
                          mul(rational(-1),
                              delta_operator(g, delta_operator(f, u, bundle), bundle)))
                rhs = delta_operator(poisson(f, g, s), u, bundle)
                pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    def scaled_operator():
        y = spec.circle_bundle()
        pairs = []
        for f in hs[3:6]:
            for t in ["1", "p*q"]:
                u = parse_expr(t, spec.coords)
                lhs = mul(IMAG, HBAR, delta_operator(f, u, bundle))
                rhs = ks_operator(f, EquivariantSection(u), y).u
                pairs.append((lhs, rhs))
        return _sym_residual(spec, pairs)

    return [
        ("delta-identity", "delta_1 = (1/(i hbar)) id", identity_rule),
        ("delta-homomorphism", "[delta_f, delta_g] = delta_{f,g}", homomorphism),
        ("delta-scaled-operator",
         "i hbar delta_f matches the line-bundle operator on base-only sections",
         scaled_operator),
    ]


# ---------------------------------------------------------------------------
# counterexamples suite


def counterexample_checks(spec: SystemSpec) -> List[Check]:
    bundle = spec.mpc_bundle()

    def twist():
        rep = example_fiberwise_twist(bundle, hbar=spec.hbar)
        return rep.gamma_preserved, max(rep.gamma_residual,
                                        rep.gamma_residual_half_step), 8

    def twist_fiber():
        rep = example_fiberwise_twist(bundle, hbar=spec.hbar)
        return (not rep.descends_to_frame_bundle) and rep.fiber_gap >= 0.5, \
            rep.fiber_gap, 2

    def twist_eta():
        rep = example_fiberwise_twist(bundle, hbar=spec.hbar)
        return rep.eta_residual <= 1e-12, rep.eta_residual, 20

    def rotation_gamma():
        from .expr import PI
        rep = example_base_rotation(bundle, mul(rational(1, 2), PI), hbar=spec.hbar)
        return rep.condition_1 and rep.equivariant, 0.0, 20

    def rotation_mismatch():
        from .expr import PI
        rep = example_base_rotation(bundle, mul(rational(1, 2), PI), hbar=spec.hbar)
        gap_ok = abs(rep.fiber_difference - 2.0) < 1e-9
        return (not rep.condition_2) and gap_ok and rep.passed, rep.fiber_difference, 1

    return [
        ("twist-gamma-preserved",
         "the fiberwise twist preserves the connection form (sampled)", twist),
        ("twist-no-frame-map",
         "the twisted image is fiber-dependent: no frame-bundle map exists",
         twist_fiber),
        ("twist-eta-preserved", "the determinant character is preserved exactly",
         twist_eta),
        ("rotation-gamma-equivariance",
         "the base rotation preserves gamma and is equivariant", rotation_gamma),
        ("rotation-frame-mismatch",
         "induced frame map differs from the lifted base map (gap |I - R| = 2)",
         rotation_mismatch),
    ]


# ---------------------------------------------------------------------------


_SUITE_BUILDERS = {
    "poisson": poisson_checks,
    "circle-iso": circle_checks,
    "dirac": dirac_checks,
    "group": group_checks,
    "mpc-iso": mpc_checks,
    "delta": delta_checks,
    "counterexamples": counterexample_checks,
}


def _build(name: str, spec: SystemSpec) -> List[Check]:
    # a builder that cannot set up (e.g. the 2-dim-only bundle on another
    # system) must surface as a failed check, not a crash
    try:
        return _SUITE_BUILDERS[name](spec)
    except Exception as exc:
        msg = f"{type(exc).__name__}: {exc}"

        def failed():
            raise RuntimeError(msg)

        return [(f"{name}-setup", "suite construction", failed)]


def run_suite(spec: SystemSpec, suite: str) -> Report:
    """Execute one named suite (or 'all') against a loaded system."""
    if suite == "all":
        checks = []
        for name in SUITE_NAMES:
            checks.extend(_build(name, spec))
        return _run_checks("all", checks)
    if suite not in _SUITE_BUILDERS:
        raise ValueError(f"unknown suite '{suite}' (choose from "
                         f"{', '.join(SUITE_NAMES + ('all',))})")
    return _run_checks(suite, _build(suite, spec))
