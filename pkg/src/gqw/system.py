"""System description files: a sectioned key-value format that carries a
chart, its domain, the symplectic form, the potential, named Hamiltonians,
and tolerances.

    [manifold]
    coordinates = p, q
    domain = p^2 + q^2 > 0
    box p = -2, 2
    box q = -2, 2

    [symplectic]
    omega = dp^dq

    [prequant]
    beta = 1/2*(p*dq - q*dp)

    [hamiltonians]
    energy = 1/2*(p^2 + q^2)

    [tolerances]
    epsilon = 1e-9
    samples = 32
    seed = 42
    hbar = 1

Expressions use the scalar grammar; omega and beta use the form grammar.
Lines starting with '#' are comments.  Loading validates d(beta) = omega and
nondegeneracy of omega at the sampled points.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import GqwError, SystemSpecError
from .expr import Expr, add, mul, rational
from .forms import Chart, KForm, parse_form
from .mpc_bundle import MpcPrequant
from .circle import PrequantCircle
from .sample import DomainSampler
from .symplectic import SymplecticChart
from .parse import parse_expr

DEFAULT_HAMILTONIANS = [
    ("one", "1"), ("lin_p", "p"), ("lin_q", "q"), ("pq", "p*q"),
    ("r2", "p^2+q^2"), ("energy", "1/2*(p^2+q^2)"), ("hyperbolic", "p^2-q^2"),
]


@dataclass
class SystemSpec:
    coords: Tuple[str, ...]
    chart: Chart
    sympl: SymplecticChart
    beta: KForm
    hamiltonians: Dict[str, Expr]
    epsilon: float
    samples: int
    seed: int
    hbar: float
    validate: bool = True
    _circle: Optional[PrequantCircle] = field(default=None, repr=False)
    _mpc: Optional[MpcPrequant] = field(default=None, repr=False)

    @property
    def omega(self) -> KForm:
        return self.sympl.omega

    def circle_bundle(self) -> PrequantCircle:
        if self._circle is None:
            self._circle = PrequantCircle(self.sympl, self.beta, validate=self.validate)
        return self._circle

    def mpc_bundle(self) -> MpcPrequant:
        if self._mpc is None:
            self._mpc = MpcPrequant(self.sympl, self.beta, validate=self.validate)
        return self._mpc


def _parse_sections(text: str) -> Dict[str, List[Tuple[str, str, int]]]:
    sections: Dict[str, List[Tuple[str, str, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise SystemSpecError(f"line {lineno}: content before any [section]")
        if "=" not in line:
            raise SystemSpecError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        sections[current].append((key.strip(), value.strip(), lineno))
    return sections


def _single(entries, key: str, default: Optional[str] = None) -> Optional[str]:
    found = [v for k, v, _ in entries if k == key]
    if not found:
        return default
    if len(found) > 1:
        raise SystemSpecError(f"duplicate key '{key}'")
    return found[0]


def load_spec_text(text: str, validate: bool = True,
                   samples: Optional[int] = None, tol: Optional[float] = None,
                   seed: Optional[int] = None, hbar: Optional[float] = None) -> SystemSpec:
    sections = _parse_sections(text)
    for required in ("manifold", "symplectic", "prequant"):
        if required not in sections:
            raise SystemSpecError(f"missing [{required}] section")

    man = sections["manifold"]
    coords_text = _single(man, "coordinates")
    if not coords_text:
        raise SystemSpecError("missing 'coordinates' in [manifold]")
    coords = tuple(c.strip() for c in coords_text.replace(",", " ").split())

    tols = sections.get("tolerances", [])
    epsilon = tol if tol is not None else float(_single(tols, "epsilon", "1e-9"))
    n_samples = samples if samples is not None else int(_single(tols, "samples", "32"))
    seed_v = seed if seed is not None else int(_single(tols, "seed", "42"))
    hbar_v = hbar if hbar is not None else float(_single(tols, "hbar", "1"))

    box = {}
    for k, v, lineno in man:
        if k.startswith("box "):
            name = k[4:].strip()
            parts = [p.strip() for p in v.replace(",", " ").split()]
            if name not in coords or len(parts) != 2:
                raise SystemSpecError(f"line {lineno}: bad box entry '{k} = {v}'")
            box[name] = (float(parts[0]), float(parts[1]))
    for c in coords:
        box.setdefault(c, (-2.0, 2.0))

    positive = []
    for k, v, lineno in man:
        if k != "domain":
            continue
        if ">" not in v:
            raise SystemSpecError(f"line {lineno}: domain entries need 'expr > expr'")
        lhs, rhs = v.split(">", 1)
        try:
            le = parse_expr(lhs.strip(), coords)
            re = parse_expr(rhs.strip(), coords)
        except GqwError as exc:
            raise SystemSpecError(f"line {lineno}: {exc}") from exc
        positive.append(add(le, mul(rational(-1), re)))

    sampler = DomainSampler(coords=coords, box=box, positive=tuple(positive),
                            seed=seed_v, n_samples=n_samples, tolerance=epsilon)
    chart = Chart(coords, sampler)

    omega_text = _single(sections["symplectic"], "omega")
    beta_text = _single(sections["prequant"], "beta")
    if not omega_text or not beta_text:
        raise SystemSpecError("both 'omega' ([symplectic]) and 'beta' ([prequant]) are required")
    try:
        omega = parse_form(omega_text, chart)
        beta = parse_form(beta_text, chart)
    except GqwError as exc:
        raise SystemSpecError(f"bad form literal: {exc}") from exc
    if not isinstance(omega, KForm) or omega.degree != 2:
        raise SystemSpecError("omega must be a degree-2 form literal")
    if not isinstance(beta, KForm) or beta.degree != 1:
        raise SystemSpecError("beta must be a degree-1 form literal")

    hams: Dict[str, Expr] = {}
    entries = sections.get("hamiltonians", [])
    if not entries:
        entries = [(k, v, 0) for k, v in DEFAULT_HAMILTONIANS]
    for k, v, lineno in entries:
        try:
            hams[k] = parse_expr(v, coords)
        except GqwError as exc:
            raise SystemSpecError(f"hamiltonian '{k}': {exc}") from exc

    try:
        sympl = SymplecticChart(chart, omega)
        spec = SystemSpec(coords=coords, chart=chart, sympl=sympl, beta=beta,
                          hamiltonians=hams, epsilon=epsilon, samples=n_samples,
                          seed=seed_v, hbar=hbar_v, validate=validate)
        if validate:
            spec.circle_bundle()  # runs the d(beta) = omega check now
            sampler.points(1, seed_tag="probe")  # sampler must be nonempty
    except GqwError as exc:
        if isinstance(exc, SystemSpecError):
            raise
        raise SystemSpecError(f"validation failed: {exc}") from exc
    return spec


def load_spec(path: str, validate: bool = True, **overrides) -> SystemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SystemSpecError(f"cannot read '{path}': {exc}") from exc
    return load_spec_text(text, validate=validate, **overrides)


def bundled_spec_text(name: str = "punctured_plane") -> str:
    resource = importlib.resources.files("gqw.data").joinpath(f"{name}.spec")
    return resource.read_text(encoding="utf-8")


def load_bundled(name: str = "punctured_plane", **overrides) -> SystemSpec:
    return load_spec_text(bundled_spec_text(name), **overrides)
