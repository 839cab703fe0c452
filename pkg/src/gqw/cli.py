"""Command-line front end.

    gqw check [--system FILE] [--suite NAME] [--samples N] [--tol EPS]
              [--seed N] [--hbar H] [--format text|json]
    gqw poisson [--system FILE] -f EXPR -g EXPR
    gqw demo {a1,a2}
    gqw group selftest [--seed N] [--format text|json]

Exit codes: 0 all checks passed, 1 at least one failed, 2 a system file
failed to load or validate.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import GqwError
from .parse import parse_expr
from .suites import SUITE_NAMES, run_suite
from .symplectic import hamiltonian_vf, poisson
from .system import SystemSpec, load_bundled, load_spec


def _load(args) -> SystemSpec:
    overrides = {}
    for name in ("samples", "tol", "seed", "hbar"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "system", None):
        return load_spec(args.system, **overrides)
    return load_bundled(**overrides)


def _cmd_check(args) -> int:
    spec = _load(args)
    report = run_suite(spec, args.suite)
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def _cmd_poisson(args) -> int:
    spec = _load(args)
    try:
        f = parse_expr(args.f, spec.coords)
        g = parse_expr(args.g, spec.coords)
    except GqwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    xi = hamiltonian_vf(f, spec.sympl)
    print(f"xi_f = {xi!r}")
    print(f"{{f, g}} = {poisson(f, g, spec.sympl)!r}")
    return 0


def _cmd_demo(args) -> int:
    from .expr import PI, mul, rational
    from .mpc_bundle import example_base_rotation, example_fiberwise_twist

    spec = _load(args)
    bundle = spec.mpc_bundle()
    if args.which == "a1":
        rep = example_fiberwise_twist(bundle, hbar=spec.hbar)
        print("fiberwise twist of the trivialized bundle over the punctured plane")
        print(f"  connection form preserved: residual {rep.gamma_residual:.3e} "
              f"(half-step {rep.gamma_residual_half_step:.3e})")
        print(f"  determinant character preserved: residual {rep.eta_residual:.3e}")
        print(f"  image of one fiber is NOT constant: frame gap {rep.fiber_gap:.3f}")
        print("  finding: no frame-bundle map exists under this twist"
              if rep.passed else "  finding: UNEXPECTED (check failed)")
        return 0 if rep.passed else 1
    rep = example_base_rotation(bundle, mul(rational(1, 2), PI), hbar=spec.hbar)
    print("base rotation by pi/2 lifted trivially to the bundle")
    print(f"  connection form preserved symbolically: {rep.gamma_symbolic}")
    print(f"  equivariant under the structure group: {rep.equivariant}")
    print(f"  induced frame map vs lifted base map: Frobenius gap "
          f"{rep.fiber_difference:.3f}")
    print("  finding: the induced map is not the lift of the base map"
          if rep.passed else "  finding: UNEXPECTED (check failed)")
    return 0 if rep.passed else 1


def _cmd_group(args) -> int:
    if args.action != "selftest":
        print(f"unknown group action '{args.action}'", file=sys.stderr)
        return 2
    spec = load_bundled(seed=args.seed) if args.seed is not None else load_bundled()
    report = run_suite(spec, "group")
    if args.format == "json":
        print(report.to_json())
    else:
        print(report.to_text())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gqw",
                                     description="prequantization geometry workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a property suite against a system")
    check.add_argument("--system", help="system file (bundled default if omitted)")
    check.add_argument("--suite", default="all", choices=SUITE_NAMES + ("all",))
    check.add_argument("--samples", type=int)
    check.add_argument("--tol", type=float)
    check.add_argument("--seed", type=int)
    check.add_argument("--hbar", type=float)
    check.add_argument("--format", default="text", choices=("text", "json"))
    check.set_defaults(fn=_cmd_check)

    pois = sub.add_parser("poisson", help="print a Hamiltonian field and a bracket")
    pois.add_argument("--system")
    pois.add_argument("-f", required=True, help="first function")
    pois.add_argument("-g", required=True, help="second function")
    pois.set_defaults(fn=_cmd_poisson)

    demo = sub.add_parser("demo", help="run one of the counterexample constructions")
    demo.add_argument("which", choices=("a1", "a2"))
    demo.add_argument("--system")
    demo.set_defaults(fn=_cmd_demo)

    group = sub.add_parser("group", help="group-arithmetic selftest")
    group.add_argument("action", choices=("selftest",))
    group.add_argument("--seed", type=int)
    group.add_argument("--format", default="text", choices=("text", "json"))
    group.set_defaults(fn=_cmd_group)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except GqwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
