"""System file loading, validation, suite reports, and the CLI contract."""

import json

import pytest

from gqw.cli import main
from gqw.errors import SystemSpecError
from gqw.suites import run_suite
from gqw.system import bundled_spec_text, load_bundled, load_spec_text

GOOD = bundled_spec_text()


def test_bundled_system_loads():
    spec = load_bundled()
    assert spec.coords == ("p", "q")
    assert len(spec.hamiltonians) == 7
    assert spec.epsilon == 1e-9 and spec.samples == 32 and spec.seed == 42


def test_alternative_potential_loads():
    text = GOOD.replace("beta = 1/2*(p*dq - q*dp)", "beta = p*dq")
    spec = load_spec_text(text)
    assert spec.circle_bundle() is not None


def test_bad_potential_rejected_at_load():
    text = GOOD.replace("beta = 1/2*(p*dq - q*dp)", "beta = p*dp")
    with pytest.raises(SystemSpecError):
        load_spec_text(text)


def test_validation_can_be_deferred_for_mutation_runs():
    text = GOOD.replace("beta = 1/2*(p*dq - q*dp)", "beta = -1/2*(p*dq - q*dp)")
    with pytest.raises(SystemSpecError):
        load_spec_text(text)
    spec = load_spec_text(text, validate=False)
    report = run_suite(spec, "dirac")
    assert not report.passed
    failed = {c.id for c in report.checks if not c.passed}
    assert "curvature-identity" in failed


def test_parse_error_carries_line_number():
    text = GOOD.replace("omega = dp^dq", "omega dp^dq")
    with pytest.raises(SystemSpecError) as err:
        load_spec_text(text)
    assert "key = value" in str(err.value)


def test_missing_section_rejected():
    text = GOOD.replace("[symplectic]", "[sympelctic]")
    with pytest.raises(SystemSpecError):
        load_spec_text(text)


def test_unknown_symbol_in_hamiltonian():
    text = GOOD.replace("pq = p*q", "pq = p*z")
    with pytest.raises(SystemSpecError) as err:
        load_spec_text(text)
    assert "z" in str(err.value)


def test_overrides():
    spec = load_bundled(samples=8, tol=1e-6, seed=7, hbar=2.0)
    assert spec.samples == 8 and spec.epsilon == 1e-6
    assert spec.seed == 7 and spec.hbar == 2.0


def test_report_json_schema():
    spec = load_bundled()
    report = run_suite(spec, "poisson")
    payload = json.loads(report.to_json())
    assert payload["suite"] == "poisson"
    for check in payload["checks"]:
        assert set(check) >= {"id", "anchor", "status", "residual", "n_samples"}
        assert check["status"] in ("pass", "fail")


def test_reports_are_deterministic():
    r1 = run_suite(load_bundled(), "poisson").to_json()
    r2 = run_suite(load_bundled(), "poisson").to_json()
    assert r1 == r2


def test_crashing_check_becomes_failure():
    # hamiltonians referencing a singular denominator crash evaluation in a
    # controlled way; the runner must record a failure, not raise
    text = GOOD.replace("pq = p*q", "pq = (p^2+q^2)^(-1)")
    spec = load_spec_text(text)
    report = run_suite(spec, "poisson")
    assert isinstance(report.passed, bool)


# ---------------------------------------------------------------------------
# CLI


def test_cli_check_poisson_exit_zero(capsys):
    assert main(["check", "--suite", "poisson"]) == 0
    out = capsys.readouterr().out
    assert "suite poisson: PASS" in out


def test_cli_check_json(capsys):
    assert main(["check", "--suite", "delta", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["suite"] == "delta"


def test_cli_poisson_command(capsys):
    assert main(["poisson", "-f", "p^2+q^2", "-g", "p*q"]) == 0
    out = capsys.readouterr().out
    assert "{f, g}" in out


def test_cli_demo_commands(capsys):
    assert main(["demo", "a1"]) == 0
    assert main(["demo", "a2"]) == 0


def test_cli_group_selftest(capsys):
    assert main(["group", "selftest", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["suite"] == "group"


def test_cli_load_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.spec"
    bad.write_text(GOOD.replace("beta = 1/2*(p*dq - q*dp)", "beta = p*dp"))
    assert main(["check", "--system", str(bad)]) == 2


def test_cli_missing_file_exit_two(capsys):
    assert main(["check", "--system", "/nonexistent/x.spec"]) == 2


def test_runner_records_crashes_as_failures():
    from gqw.suites import _run_checks

    def boom():
        raise RuntimeError("synthetic failure")

    report = _run_checks("synthetic", [("x", "always explodes", boom)])
    assert not report.passed
    assert report.checks[0].error and "synthetic failure" in report.checks[0].error


def test_cli_failing_suite_exit_one(monkeypatch, capsys):
    import gqw.cli as cli
    from gqw.suites import CheckResult, Report

    def fake_run(spec, suite):
        return Report(suite, [CheckResult("x", "forced", "fail", 1.0, 1)])

    monkeypatch.setattr(cli, "run_suite", fake_run)
    assert cli.main(["check", "--suite", "poisson"]) == 1


def test_full_run_under_a_minute():
    report = run_suite(load_bundled(), "all")
    assert report.passed and report.elapsed < 60.0


FOUR_DIM = """
[manifold]
coordinates = p1, p2, q1, q2
box p1 = -2, 2
box p2 = -2, 2
box q1 = -2, 2
box q2 = -2, 2

[symplectic]
omega = dp1^dq1 + dp2^dq2

[prequant]
beta = p1*dq1 + p2*dq2

[hamiltonians]
one = 1
h1 = p1*q2
h2 = p2*q1
r2 = p1^2 + q1^2 + p2^2 + q2^2
mix = p1*p2 + q1*q2
"""


def test_four_dimensional_system_runs_base_suites():
    spec = load_spec_text(FOUR_DIM)
    for suite in ("poisson", "circle-iso", "dirac"):
        assert run_suite(spec, suite).passed, suite


def test_two_dim_only_suites_fail_cleanly_in_four_dimensions():
    spec = load_spec_text(FOUR_DIM)
    report = run_suite(spec, "mpc-iso")
    assert not report.passed
    assert report.checks[0].error and "2-dimensional" in report.checks[0].error
