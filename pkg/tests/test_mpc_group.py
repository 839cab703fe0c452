"""Double cover and circle-extension arithmetic: the cocycle, the group laws,
one-parameter subgroups, and the periodic loop used by the counterexamples."""

import cmath
import math
import random

import pytest

from gqw.errors import NumericError
from gqw.mpc_group import (
    IDENTITY, ROTATION_GENERATOR, MpcAlgebra, MpcElement, MpElement, central,
    eta, exp_mpc, kappa, lift_path, mat_exp, mat_mul, mat_sub_norm,
    mp_identity, mp_inv, mp_mul, mpc_distance, mpc_identity, mpc_inv, mpc_mul,
    mu_loop, rotation, sigma,
)


def random_sp(rng):
    # exp of a random traceless matrix; covers elliptic/hyperbolic/parabolic
    a = rng.uniform(-1.2, 1.2)
    b = rng.uniform(-1.2, 1.2)
    c = rng.uniform(-1.2, 1.2)
    return mat_exp((a, b, c, -a))


def random_mpc(rng):
    return MpcElement(random_sp(rng), cmath.exp(1j * rng.uniform(-math.pi, math.pi)))


# ---------------------------------------------------------------------------
# kappa


def test_kappa_identity_normalization():
    rng = random.Random("kappa-id")
    for _ in range(50):
        g = random_sp(rng)
        assert kappa(IDENTITY, g) == 0
        assert kappa(g, IDENTITY) == 0


def test_kappa_rotation_worked_example():
    # w-values: 2pi/3 + 2pi/3 - (-2pi/3) = 2pi, so kappa = 1
    r = rotation(2 * math.pi / 3)
    assert kappa(r, r) == 1


def test_kappa_against_angle_oracle():
    # independent oracle: for rotations the automorphy factor at i is e^{i theta},
    # so kappa counts wraps of theta1 + theta2 past the (-pi, pi] branch
    def wrap(t):
        while t > math.pi:
            t -= 2 * math.pi
        while t <= -math.pi:
            t += 2 * math.pi
        return t

    rng = random.Random("kappa-oracle")
    for _ in range(200):
        t1 = rng.uniform(-math.pi, math.pi)
        t2 = rng.uniform(-math.pi, math.pi)
        expected = round((wrap(t1) + wrap(t2) - wrap(t1 + t2)) / (2 * math.pi))
        assert kappa(rotation(t1), rotation(t2)) == expected


def test_kappa_cocycle_identity():
    rng = random.Random("cocycle")
    for _ in range(1000):
        g1, g2, g3 = random_sp(rng), random_sp(rng), random_sp(rng)
        lhs = kappa(g1, g2) + kappa(mat_mul(g1, g2), g3)
        rhs = kappa(g2, g3) + kappa(g1, mat_mul(g2, g3))
        assert (lhs - rhs) % 2 == 0


# ---------------------------------------------------------------------------
# double cover


def test_deck_transformation_squares_to_identity():
    deck = MpElement(IDENTITY, 1)
    out = mp_mul(deck, deck)
    assert out.sheet == 0 and mat_sub_norm(out.g, IDENTITY) < 1e-12


def test_mp_projection_is_homomorphism():
    rng = random.Random("mp-proj")
    for _ in range(100):
        x = MpElement(random_sp(rng), rng.randint(0, 1))
        y = MpElement(random_sp(rng), rng.randint(0, 1))
        assert mat_sub_norm(mp_mul(x, y).g, mat_mul(x.g, y.g)) < 1e-9


def test_mp_inverse():
    rng = random.Random("mp-inv")
    for _ in range(100):
        x = MpElement(random_sp(rng), rng.randint(0, 1))
        out = mp_mul(x, mp_inv(x))
        assert out.sheet == 0 and mat_sub_norm(out.g, IDENTITY) < 1e-9


def test_full_rotation_lift_is_deck_transformation():
    # the loop R(2 pi t) lifts open: it ends on the other sheet
    lifted = lift_path(lambda s: rotation(2 * math.pi * s), 256)
    assert lifted.sheet == 1
    assert mat_sub_norm(lifted.g, IDENTITY) < 1e-9


def test_double_rotation_lift_closes():
    lifted = lift_path(lambda s: rotation(4 * math.pi * s), 256)
    assert lifted.sheet == 0
    assert mat_sub_norm(lifted.g, IDENTITY) < 1e-9


def test_path_lifting_agrees_with_cocycle_on_products():
    # lifting g1's path then continuing along g1 * g2(s) must equal the
    # product of the individual lifts
    rng = random.Random("path-cocycle")
    for _ in range(200):
        a1 = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
        a2 = (rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2))
        m1 = (a1[0], a1[1], a1[2], -a1[0])
        m2 = (a2[0], a2[1], a2[2], -a2[0])
        g1 = mat_exp(m1)
        lift1 = lift_path(lambda s: mat_exp(tuple(s * v for v in m1)), 128)
        lift2 = lift_path(lambda s: mat_exp(tuple(s * v for v in m2)), 128)
        cont = lift_path(lambda s: mat_mul(g1, mat_exp(tuple(s * v for v in m2))),
                         128, start=lift1)
        prod = mp_mul(lift1, lift2)
        assert cont.sheet == prod.sheet
        assert mat_sub_norm(cont.g, prod.g) < 1e-9


# ---------------------------------------------------------------------------
# circle extension


def test_central_circle_multiplies():
    l1 = cmath.exp(0.7j)
    l2 = cmath.exp(-1.3j)
    out = mpc_mul(central(l1), central(l2))
    assert abs(out.phase - l1 * l2) < 1e-12
    assert mat_sub_norm(out.g, IDENTITY) < 1e-12


def test_rotation_square_flips_phase():
    # (R(2pi/3), 1)^2 = (R(4pi/3), -1) because kappa = 1
    x = MpcElement(rotation(2 * math.pi / 3), 1.0)
    out = mpc_mul(x, x)
    assert mat_sub_norm(out.g, rotation(4 * math.pi / 3)) < 1e-12
    assert abs(out.phase + 1.0) < 1e-12


def test_mpc_group_axioms():
    rng = random.Random("mpc-axioms")
    for _ in range(1000):
        a, b, c = random_mpc(rng), random_mpc(rng), random_mpc(rng)
        assoc = mpc_distance(mpc_mul(mpc_mul(a, b), c), mpc_mul(a, mpc_mul(b, c)))
        assert assoc <= 1e-9
        inv = mpc_distance(mpc_mul(a, mpc_inv(a)), mpc_identity())
        assert inv <= 1e-9


def test_sigma_projection_and_eta_character():
    rng = random.Random("sigma-eta")
    for _ in range(1000):
        a, b = random_mpc(rng), random_mpc(rng)
        assert mat_sub_norm(sigma(mpc_mul(a, b)), mat_mul(sigma(a), sigma(b))) < 1e-9
        assert abs(eta(mpc_mul(a, b)) - eta(a) * eta(b)) < 1e-9


def test_eta_squares_the_center():
    lam = cmath.exp(1j * math.pi / 3)
    assert abs(eta(central(lam)) - cmath.exp(2j * math.pi / 3)) < 1e-12


def test_kernels_of_the_two_projections():
    # sigma-kernel: central circle; eta-kernel: elements with phase +-1
    rng = random.Random("kernels")
    for _ in range(100):
        a = random_mpc(rng)
        if mat_sub_norm(sigma(a), IDENTITY) < 1e-12:
            pass  # central by construction only
        in_mp = abs(eta(a) - 1) < 1e-12
        assert in_mp == (abs(a.phase - 1) < 1e-9 or abs(a.phase + 1) < 1e-9)
    assert abs(eta(MpcElement(random_sp(rng), -1.0)) - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# one-parameter subgroups


def test_exp_central_subgroup():
    alpha = MpcAlgebra((0.0, 0.0, 0.0, 0.0), 1j)
    for t in [0.0, 0.5, 2.0, -1.7]:
        out = exp_mpc(alpha, t)
        assert mat_sub_norm(out.g, IDENTITY) < 1e-12
        assert abs(out.phase - cmath.exp(1j * t)) < 1e-12


def test_exp_rotation_generator_full_turn():
    # exp(2 pi J) projects to the identity but lands on the other sheet
    alpha = MpcAlgebra(ROTATION_GENERATOR, 0.0j)
    out = exp_mpc(alpha, 2 * math.pi)
    assert mat_sub_norm(out.g, IDENTITY) < 1e-9
    assert abs(out.phase + 1.0) < 1e-12
    out2 = exp_mpc(alpha, 4 * math.pi)
    assert abs(out2.phase - 1.0) < 1e-12


def test_exp_one_parameter_property():
    rng = random.Random("exp-group")
    for _ in range(10):
        a = rng.uniform(-0.8, 0.8)
        alpha = MpcAlgebra((a, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -a),
                           1j * rng.uniform(-1, 1))
        t, s = rng.uniform(-2, 2), rng.uniform(-2, 2)
        lhs = exp_mpc(alpha, t + s)
        rhs = mpc_mul(exp_mpc(alpha, t), exp_mpc(alpha, s))
        assert mpc_distance(lhs, rhs) <= 1e-9


def test_exp_inverse_along_subgroup():
    rng = random.Random("exp-inv")
    for _ in range(10):
        a = rng.uniform(-0.8, 0.8)
        alpha = MpcAlgebra((a, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -a),
                           1j * rng.uniform(-1, 1))
        t = rng.uniform(-2, 2)
        out = mpc_mul(exp_mpc(alpha, t), exp_mpc(alpha, -t))
        assert mpc_distance(out, mpc_identity()) <= 1e-9


def test_algebra_split_recovered_by_finite_differences():
    # sigma_* and (1/2) eta_* recover the two components of the algebra
    rng = random.Random("split")
    h = 1e-6
    for _ in range(20):
        a = rng.uniform(-0.8, 0.8)
        A = (a, rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), -a)
        tau = 1j * rng.uniform(-1, 1)
        alpha = MpcAlgebra(A, tau)
        out = exp_mpc(alpha, h)
        fd_A = tuple((g - e) / h for g, e in zip(out.g, IDENTITY))
        assert all(abs(x - y) < 1e-4 for x, y in zip(fd_A, A))
        fd_tau = 0.5 * cmath.phase(eta(out)) / h
        assert abs(fd_tau - tau.imag) < 1e-4


def test_algebra_validation():
    with pytest.raises(NumericError):
        MpcAlgebra((1.0, 0.0, 0.0, 1.0), 0j)  # nonzero trace
    with pytest.raises(NumericError):
        MpcAlgebra((0.0, 1.0, 1.0, 0.0), 1.0 + 0j)  # real u(1) part


# ---------------------------------------------------------------------------
# the periodic loop


def test_mu_is_periodic():
    assert mu_loop(0.0) == mp_identity()
    end = mu_loop(1.0)
    assert end.sheet == 0
    assert mat_sub_norm(end.g, IDENTITY) < 1e-9


def test_mu_halfway_sits_on_other_sheet():
    mid = mu_loop(0.5)
    assert mid.sheet == 1
    assert mat_sub_norm(mid.g, IDENTITY) < 1e-9


def test_mu_projection_is_nonconstant():
    assert mat_sub_norm(mu_loop(1 / 8).g, rotation(math.pi / 2)) < 1e-9
    assert mat_sub_norm(mu_loop(1 / 4).g, rotation(math.pi)) < 1e-9


def test_mu_analytic_sheet_oracle():
    # the lift of R(theta(s)) flips sheets each time theta passes pi + 2 pi k;
    # for theta = 4 pi t the flip count is ceil((4 pi t - pi) / (2 pi)) for
    # t past 1/4
    def expected_sheet(t):
        theta = 4 * math.pi * (t % 1.0)
        if theta <= math.pi:
            return 0
        return math.ceil((theta - math.pi) / (2 * math.pi)) % 2

    for t in [0.0, 0.1, 0.2, 0.3, 0.45, 0.5, 0.6, 0.76, 0.9, 0.99, 1.0]:
        assert mu_loop(t).sheet == expected_sheet(t), t
