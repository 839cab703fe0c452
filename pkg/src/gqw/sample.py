"""Randomized point sampling on chart domains, and sampling-based equality.

Symbolic zero-testing for the expression class here (rational + trig) is
undecidable in general, so equality is decided by canonical simplification
plus evaluation at N random points of the chart domain.  The sampler is
deterministic for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import EvaluationError, SamplingError
from .expr import Expr, evalf, add, mul, rational

_MAX_RESAMPLE = 1000


@dataclass(frozen=True)
class DomainSampler:
    """Draws points from a coordinate box, rejecting those that violate the
    chart's strict inequalities (each entry of ``positive`` must evaluate
    > ``tolerance`` at every emitted point)."""

    coords: Tuple[str, ...]
    box: Dict[str, Tuple[float, float]]
    positive: Tuple[Expr, ...] = ()
    seed: int = 42
    n_samples: int = 32
    tolerance: float = 1e-9

    def __post_init__(self):
        for c in self.coords:
            if c not in self.box:
                raise SamplingError(f"no bounding box for coordinate '{c}'")

    def admissible(self, point: Mapping[str, float]) -> bool:
        for ineq in self.positive:
            v = evalf(ineq, dict(point))
            if not (v.real > self.tolerance and abs(v.imag) < 1e-12):
                return False
        return True

    def points(self, n: Optional[int] = None, seed_tag: str = "") -> List[Dict[str, float]]:
        """Deterministic list of admissible sample points."""
        n = self.n_samples if n is None else n
        rng = random.Random(f"{self.seed}:{seed_tag}")
        out = []
        attempts = 0
        while len(out) < n:
            attempts += 1
            if attempts > _MAX_RESAMPLE * max(n, 1):
                raise SamplingError(
                    f"could not find {n} admissible points in {attempts} draws")
            pt = {c: rng.uniform(*self.box[c]) for c in self.coords}
            try:
                ok = self.admissible(pt)
            except EvaluationError:
                ok = False
            if ok:
                out.append(pt)
        return out


def expr_equal(a: Expr, b: Expr, sampler: DomainSampler,
               params: Optional[Mapping[str, complex]] = None,
               n: Optional[int] = None) -> Tuple[bool, float]:
    """Decide a == b on the sampler's domain; returns (verdict, worst residual).

    The difference is canonicalized first, so identities that normalize to a
    structural zero report residual exactly 0.0.  Parameters (hbar defaults
    to 1) are bound only at evaluation time.  Points where evaluation fails
    are resampled, with a cap.
    """
    delta = add(a, mul(rational(-1), b))
    if delta.is_zero():
        return True, 0.0
    env_extra = {"hbar": 1.0}
    if params:
        env_extra.update(params)
    worst = 0.0
    n = sampler.n_samples if n is None else n
    rng = random.Random(f"{sampler.seed}:equal")
    count = 0
    attempts = 0
    while count < n:
        attempts += 1
        if attempts > _MAX_RESAMPLE:
            raise SamplingError("too many evaluation failures while comparing")
        pt = {c: rng.uniform(*sampler.box[c]) for c in sampler.coords}
        try:
            if not sampler.admissible(pt):
                continue
            env = dict(pt)
            env.update(env_extra)
            r = abs(evalf(delta, env))
        except EvaluationError:
            continue
        worst = max(worst, r)
        count += 1
    return worst <= sampler.tolerance, worst


def residual(a: Expr, b: Expr, sampler: DomainSampler,
             params: Optional[Mapping[str, complex]] = None) -> float:
    return expr_equal(a, b, sampler, params)[1]
