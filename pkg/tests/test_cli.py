from __future__ import annotations

import subprocess
import sys

import pytest

from gaugedirac import cli
from gaugedirac.suites import (
    SUITES,
    ConfigError,
    SuiteConfig,
    derive_bracket_sign,
    derive_facet_signs,
    parse_report,
    render_report,
    run,
)


def test_stokes_report_has_exact_zero_entries(tmp_path):
    out = tmp_path / "r.txt"
    assert cli.main(["--suite", "stokes", "--instances", "50", "--seed", "7", "--report", str(out)]) == 0
    records = parse_report(out.read_text())
    assert len(records) == 50
    assert {r["status"] for r in records} == {"exact_zero"}
    assert [r["instance"] for r in records] == [str(i) for i in range(50)]


def test_unknown_suite_is_usage_error(capsys):
    assert cli.main(["--suite", "nosuch"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_bad_option_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["--n", "two"])
    assert exc.value.code == 2


@pytest.mark.parametrize("kw", [
    {"n": 5}, {"max_input_degree": 0}, {"instances": 0}, {"seed": -1}, {"quad_order": 1},
    {"backend": "gpu"}, {"t_probes": ()}, {"suites": ("nosuch",)}, {"jobs": 0},
])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        SuiteConfig(**kw).validate()


def test_degree_cap_overflow_is_an_error_entry(tmp_path):
    out = tmp_path / "r.txt"
    code = cli.main(["--suite", "stokes", "--instances", "3", "--degree-cap", "2", "--report", str(out)])
    assert code == 1
    assert {r["status"] for r in parse_report(out.read_text())} == {"error"}


def test_empty_suite_list_gives_header_only():
    cfg = SuiteConfig(suites=()).validate()
    text = render_report(cfg, run(cfg))
    assert text.startswith("gaugedirac-report v1\n")
    assert "results" not in text and parse_report(text) == []


def test_reports_are_byte_identical(tmp_path):
    args = ["--suite", "stokes,lemma-kappa-bulk", "--instances", "2", "--n", "3"]
    p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
    assert cli.main(args + ["--report", str(p1)]) == 0
    assert cli.main(args + ["--report", str(p2), "--jobs", "2"]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_seed_changes_instances():
    a = SuiteConfig(suites=("stokes",), instances=1, seed=1).validate()
    b = SuiteConfig(suites=("stokes",), instances=1, seed=2).validate()
    assert run(a)[0].status == run(b)[0].status == "exact_zero"
    from gaugedirac.suites import instance_rng

    assert instance_rng(1, "stokes", 0).integers(1 << 30) != instance_rng(2, "stokes", 0).integers(1 << 30)


def test_environment_override(monkeypatch, tmp_path):
    monkeypatch.setenv("GAUGEDIRAC_INSTANCES", "3")
    monkeypatch.setenv("GAUGEDIRAC_SEED", "99")
    out = tmp_path / "r.txt"
    assert cli.main(["--suite", "stokes", "--report", str(out)]) == 0
    text = out.read_text()
    assert "instances=3 seed=99" in text
    assert len(parse_report(text)) == 3


def test_header_records_conventions():
    cfg = SuiteConfig(suites=("stokes",), instances=1).validate()
    text = render_report(cfg, run(cfg))
    assert "fundamental_bracket_sign=+1" in text
    assert "x1=1:+1,x1=0:-1,x2=1:-1,x2=0:+1" in text
    assert "matches_builtin=yes" in text
    assert text.rstrip().splitlines()[-1].startswith("summary total=1 failed=0")


def test_oracles_for_conventions():
    signs = derive_facet_signs()
    assert signs == {(i, s): (-1) ** (i - 1) * (2 * s - 1) for i in range(1, 5) for s in (0, 1)}
    assert derive_bracket_sign(2) == derive_bracket_sign(3) == 1


def test_t_probe_parsing():
    ns = cli.build_parser().parse_args(["--t", "1/2, -3,7/3"])
    assert [str(t) for t in ns.t] == ["1/2", "-3", "7/3"]


def test_every_suite_runs_one_instance():
    cfg = SuiteConfig(suites=tuple(SUITES), instances=1, backend="exact").validate()
    results = run(cfg)
    assert {r.suite for r in results} == set(SUITES)
    assert not [r for r in results if r.failed]
    assert all("." not in r.defect for r in results if r.status.startswith("exact"))


def test_console_entry_point(tmp_path):
    out = tmp_path / "r.txt"
    proc = subprocess.run(
        [sys.executable, "-m", "gaugedirac.cli", "--suite", "stokes", "--instances", "1", "--report", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "1 checks, 0 failed" in proc.stderr


def test_quad_inputs_reach_top_x1_degree():
    # an order-4 rule must stay inexact, so the density needs x1-degree exactly 8
    from gaugedirac import dirac, polyforms
    from gaugedirac.suites import _quad_inputs, instance_rng

    cfg = SuiteConfig(n=3, suites=("gauge-finite",)).validate()
    for index in (6, 7):
        A, a, b = _quad_inputs(instance_rng(42, "gauge-finite", index), cfg)
        density = polyforms.trace_form(dirac.phi_map(A, a).form ^ b)
        degrees = [p.degree_in(1) for m in density.comps.values() for row in m for p in row]
        assert max(degrees) == 8
