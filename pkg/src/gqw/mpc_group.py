"""Concrete arithmetic for Sp(R^2) = SL(2,R), its connected double cover,
and the circle extension Mp^c = (double cover) x_{Z_2} U(1).

The double cover is modeled by an explicit Z_2 cocycle: for g = [[a,b],[c,d]]
acting on the upper half plane, the factor of automorphy j(g, tau) = c tau + d
never vanishes, and the wrapping defect of its principal argument

    kappa(g1, g2) = (w(g1, g2 . i) + w(g2, i) - w(g1 g2, i)) / (2 pi)

is an integer in {-1, 0, 1} whose parity is a group 2-cocycle.  Sheets are
tracked along paths by subdividing and accumulating kappa, which doubles as
an independent oracle for the cocycle itself.

Elements of the circle extension are kept in canonical form (sp matrix,
unit phase) with the sheet normalized to 0; multiplication picks up a sign
(-1)^kappa.  Matrices are plain 4-tuples (a, b, c, d) in row-major order:
the group suites run hundreds of thousands of these products, and small
tuples keep that fast.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .errors import NumericError

Mat = Tuple[float, float, float, float]  # ((a, b), (c, d)) flattened

IDENTITY: Mat = (1.0, 0.0, 0.0, 1.0)

_DET_TOL = 1e-12


def mat_mul(x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(x: Mat) -> float:
    return x[0] * x[3] - x[1] * x[2]


def mat_inv(x: Mat) -> Mat:
    det = mat_det(x)
    return (x[3] / det, -x[1] / det, -x[2] / det, x[0] / det)


def mat_norm(x: Mat) -> float:
    return math.sqrt(sum(v * v for v in x))


def mat_sub_norm(x: Mat, y: Mat) -> float:
    return math.sqrt(sum((u - v) ** 2 for u, v in zip(x, y)))


def normalize_det(x: Mat) -> Mat:
    det = mat_det(x)
    if det <= 0:
        raise NumericError(f"matrix has non-positive determinant {det}")
    s = math.sqrt(det)
    return (x[0] / s, x[1] / s, x[2] / s, x[3] / s)


def rotation(theta: float) -> Mat:
    c, s = math.cos(theta), math.sin(theta)
    return (c, -s, s, c)


def mat_exp(x: Mat, tol: float = 1e-12) -> Mat:
    """Scaling-and-squaring Taylor exponential for 2x2 matrices."""
    norm = mat_norm(x)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    y = tuple(v / (2 ** squarings) for v in x)
    term: Mat = IDENTITY
    total = [1.0, 0.0, 0.0, 1.0]
    k = 0
    while True:
        k += 1
        term = tuple(v / k for v in mat_mul(term, y))
        for i in range(4):
            total[i] += term[i]
        if mat_norm(term) < tol:
            break
        if k > 64:
            raise NumericError("matrix exponential failed to converge")
    out: Mat = tuple(total)
    for _ in range(squarings):
        out = mat_mul(out, out)
    return out


# ---------------------------------------------------------------------------
# the cocycle


def _arg_branch(z: complex) -> float:
    """Principal argument on the branch (-pi, pi]."""
    w = cmath.phase(z)
    if w <= -math.pi:
        w += 2 * math.pi
    return w


def automorphy_angle(g: Mat, tau: complex) -> float:
    """w(g, tau): argument of the factor of automorphy c tau + d."""
    return _arg_branch(g[2] * tau + g[3])


def mobius(g: Mat, tau: complex) -> complex:
    return (g[0] * tau + g[1]) / (g[2] * tau + g[3])


def kappa(g1: Mat, g2: Mat) -> int:
    """Angle-wrapping defect of the automorphy factor at i; in {-1, 0, 1}."""
    i0 = 1j
    total = (automorphy_angle(g1, mobius(g2, i0))
             + automorphy_angle(g2, i0)
             - automorphy_angle(mat_mul(g1, g2), i0))
    return round(total / (2 * math.pi))


# ---------------------------------------------------------------------------
# the double cover


@dataclass(frozen=True)
class MpElement:
    g: Mat
    sheet: int  # 0 or 1

    def __post_init__(self):
        object.__setattr__(self, "g", normalize_det(self.g))
        object.__setattr__(self, "sheet", self.sheet & 1)


def mp_identity() -> MpElement:
    return MpElement(IDENTITY, 0)


def mp_mul(x: MpElement, y: MpElement) -> MpElement:
    return MpElement(mat_mul(x.g, y.g), x.sheet ^ y.sheet ^ (kappa(x.g, y.g) & 1))


def mp_inv(x: MpElement) -> MpElement:
    gi = mat_inv(x.g)
    return MpElement(gi, x.sheet ^ (kappa(x.g, gi) & 1))


# ---------------------------------------------------------------------------
# the circle extension, in canonical form (sheet normalized to 0)


@dataclass(frozen=True)
class MpcElement:
    g: Mat
    phase: complex  # unit modulus

    def __post_init__(self):
        object.__setattr__(self, "g", normalize_det(self.g))
        r = abs(self.phase)
        if r == 0:
            raise NumericError("zero phase in a circle-extension element")
        object.__setattr__(self, "phase", self.phase / r)


def mpc_identity() -> MpcElement:
    return MpcElement(IDENTITY, 1.0 + 0.0j)


def mpc_mul(x: MpcElement, y: MpcElement) -> MpcElement:
    sign = -1.0 if (kappa(x.g, y.g) & 1) else 1.0
    return MpcElement(mat_mul(x.g, y.g), x.phase * y.phase * sign)


def mpc_inv(x: MpcElement) -> MpcElement:
    gi = mat_inv(x.g)
    sign = -1.0 if (kappa(x.g, gi) & 1) else 1.0
    return MpcElement(gi, sign / x.phase)


def sigma(x: MpcElement) -> Mat:
    """Projection onto the symplectic group."""
    return x.g


def eta(x: MpcElement) -> complex:
    """Determinant character: squares the phase; kernel = the double cover."""
    return x.phase * x.phase


def mpc_distance(x: MpcElement, y: MpcElement) -> float:
    return mat_sub_norm(x.g, y.g) + abs(x.phase - y.phase)


def central(phase: complex) -> MpcElement:
    return MpcElement(IDENTITY, phase)


# ---------------------------------------------------------------------------
# Lie algebra and one-parameter subgroups


@dataclass(frozen=True)
class MpcAlgebra:
    """sp(R^2) + u(1) split: A is a traceless real 2x2 matrix, tau is the
    imaginary u(1) component (the value the connection form assigns to the
    generated vertical field)."""

    A: Mat
    tau: complex

    def __post_init__(self):
        if abs(self.A[0] + self.A[3]) > 1e-12:
            raise NumericError(f"algebra matrix has trace {self.A[0] + self.A[3]}")
        if abs(self.tau.real) > 1e-12:
            raise NumericError(f"u(1) component {self.tau} is not imaginary")

    def norm(self) -> float:
        return mat_norm(self.A) + abs(self.tau)


ROTATION_GENERATOR: Mat = (0.0, -1.0, 1.0, 0.0)


def lift_path(path: Callable[[float], Mat], steps: int,
              start: MpElement | None = None) -> MpElement:
    """Continuous lift of a matrix path (path(0) must equal start's matrix,
    identity by default): subdivide and accumulate the cocycle parity."""
    current = start if start is not None else mp_identity()
    prev = current.g
    for k in range(1, steps + 1):
        nxt = normalize_det(path(k / steps))
        step = mat_mul(mat_inv(prev), nxt)
        current = MpElement(nxt, current.sheet ^ (kappa(prev, step) & 1))
        prev = nxt
    return current


def _sheet_of_path(path: Callable[[float], Mat], steps: int) -> int:
    return lift_path(path, steps).sheet


def lift_path_checked(path: Callable[[float], Mat], base_steps: int) -> MpElement:
    """Lift with step-doubling verification of the accumulated sheet."""
    steps = base_steps
    for _ in range(4):
        a = _sheet_of_path(path, steps)
        b = _sheet_of_path(path, 2 * steps)
        if a == b:
            return lift_path(path, 2 * steps)
        steps *= 4
    raise NumericError("sheet tracking did not converge under step doubling")


def exp_mpc(alpha: MpcAlgebra, t: float) -> MpcElement:
    """One-parameter subgroup exp(t alpha): the matrix part is the matrix
    exponential, the phase combines the central rotation e^{t tau} with the
    sheet sign of the continuous lift (64 subdivision steps per unit of
    norm)."""
    target = mat_exp(tuple(t * v for v in alpha.A))
    norm = abs(t) * alpha.norm()
    steps = max(64, int(math.ceil(64 * norm)))
    try:
        lifted = lift_path_checked(
            lambda s: mat_exp(tuple(s * t * v for v in alpha.A)), steps)
    except NumericError as exc:
        raise NumericError(f"exp subdivision failed for t={t}, alpha={alpha}: {exc}") from exc
    sign = -1.0 if lifted.sheet else 1.0
    phase = cmath.exp(t * alpha.tau) * sign
    return MpcElement(target, phase)


def mu_loop(t: float) -> MpElement:
    """A smooth nonconstant loop in the double cover with period exactly 1:
    the continuous lift of the rotation path R(4 pi s), s in [0, t mod 1],
    starting on sheet 0.  One full period winds through the rotation group
    twice, which closes up in the double cover."""
    t = t % 1.0
    if t == 0.0:
        return mp_identity()
    steps = max(64, int(math.ceil(256 * t)))
    return lift_path(lambda s: rotation(4 * math.pi * s * t), steps)
