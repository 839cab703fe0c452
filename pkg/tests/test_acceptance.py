"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Every tolerance and time budget is pinned here.
"""

import pytest

from gqw.suites import run_suite
from gqw.system import load_bundled


@pytest.fixture(scope="module")
def spec():
    return load_bundled()


def _criterion(name: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] acceptance {name}: {detail}")
    assert ok, f"acceptance {name}: {detail}"


def _ids(report):
    return {c.id: c for c in report.checks}


def test_criterion_1_poisson_bracket_suite(spec):
    report = run_suite(spec, "poisson")
    checks = _ids(report)
    worst = max((c.residual or 0.0) for c in report.checks)
    needed = {"bracket-compat-corpus", "bracket-compat-random", "jacobi", "leibniz"}
    ok = (report.passed and needed <= set(checks)
          and worst <= 1e-9 and report.elapsed < 5.0)
    _criterion("1-poisson", ok,
               f"bracket/Jacobi/Leibniz on corpus + 20 random pairs, worst "
               f"residual {worst:.2e} <= 1e-9 at {spec.samples} points, "
               f"{report.elapsed:.2f} s < 5 s")


def test_criterion_2_circle_isomorphism_suite(spec):
    report = run_suite(spec, "circle-iso")
    checks = _ids(report)
    needed = {"lifted-bracket-formula", "e-homomorphism", "e-preserves-connection",
              "f-inverts-e", "e-inverts-f"}
    sym = [checks[k] for k in ("f-inverts-e", "e-inverts-f")]
    ok = (report.passed and needed <= set(checks)
          and all(c.residual == 0.0 for c in sym)    # round trips are structural
          and report.elapsed < 10.0)
    _criterion("2-circle-iso", ok,
               f"lifted bracket, homomorphism, connection preservation, "
               f"round trips (structural); {report.elapsed:.2f} s < 10 s")


def test_criterion_3_dirac_suite(spec):
    report = run_suite(spec, "dirac")
    checks = _ids(report)
    ok = (report.passed
          and checks["identity-axiom"].residual == 0.0
          and checks["commutator-axiom"].residual == 0.0
          and checks["curvature-identity"].residual == 0.0
          and report.elapsed < 10.0)
    _criterion("3-dirac", ok,
               f"r(1) = id exactly, commutator axiom and curvature identity "
               f"structural on the grid; {report.elapsed:.2f} s < 10 s")


def test_criterion_4_group_suite(spec):
    report = run_suite(spec, "group")
    checks = _ids(report)
    ok = (report.passed
          and checks["group-axioms"].residual <= 1e-9
          and checks["group-axioms"].n_samples >= 1000
          and checks["cocycle-identity"].n_samples >= 1000
          and checks["path-lift-vs-cocycle"].n_samples >= 200
          and report.elapsed < 20.0)
    _criterion("4-group", ok,
               f"axioms on 1000 elements (residual "
               f"{checks['group-axioms'].residual:.2e} <= 1e-9), eta/sigma "
               f"homomorphisms, cocycle on 1000 triples, path lifting on 200 "
               f"products, loop parity; {report.elapsed:.2f} s < 20 s")


def test_criterion_5_mpc_isomorphism_suite(spec):
    report = run_suite(spec, "mpc-iso")
    checks = _ids(report)
    needed = {"prequant-invariance", "prequant-vertical", "prequant-curvature",
              "e-homomorphism", "f-inverts-e", "e-inverts-f",
              "hat-commutes-vertical", "bracket-flow-oracle",
              "membership-regression"}
    ok = (report.passed and needed <= set(checks)
          and checks["bracket-flow-oracle"].residual <= 1e-5
          and report.elapsed < 30.0)
    _criterion("5-mpc-iso", ok,
               f"prequantization conditions (1)-(3), E/F round trips and "
               f"homomorphism, vertical commutation, flow oracle residual "
               f"{checks['bracket-flow-oracle'].residual:.2e} <= 1e-5, "
               f"covering-condition regression; {report.elapsed:.2f} s < 30 s")


def test_criterion_6_delta_suite(spec):
    report = run_suite(spec, "delta")
    checks = _ids(report)
    ok = (report.passed
          and checks["delta-homomorphism"].residual == 0.0
          and report.elapsed < 10.0)
    _criterion("6-delta", ok,
               f"delta_{{f,g}} = [delta_f, delta_g] structural on 3 sections x "
               f"corpus pairs; {report.elapsed:.2f} s < 10 s")


def test_criterion_7_counterexample_suite(spec):
    report = run_suite(spec, "counterexamples")
    checks = _ids(report)
    ok = (report.passed
          and checks["twist-gamma-preserved"].residual <= 1e-6
          and checks["twist-no-frame-map"].residual >= 0.5
          and abs(checks["rotation-frame-mismatch"].residual - 2.0) < 1e-9
          and report.elapsed < 10.0)
    _criterion("7-counterexamples", ok,
               f"twist: gamma residual "
               f"{checks['twist-gamma-preserved'].residual:.2e} <= 1e-6 with "
               f"fiber gap {checks['twist-no-frame-map'].residual:.2f} >= 0.5; "
               f"rotation: frame gap = "
               f"{checks['rotation-frame-mismatch'].residual:.3f} (Frobenius 2); "
               f"{report.elapsed:.2f} s < 10 s")


def test_criterion_8_determinism():
    r1 = run_suite(load_bundled(seed=42), "all")
    r2 = run_suite(load_bundled(seed=42), "all")
    ok = r1.to_json() == r2.to_json() and r1.passed
    _criterion("8-determinism", ok,
               "two seed-42 runs of the full suite render identical JSON")
