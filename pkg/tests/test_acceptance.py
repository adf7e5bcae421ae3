"""Acceptance criteria AC1..AC11.

The full default battery (n=2, 20 instances) runs once and is timed as a
whole; its records supply the n=2 half of the criteria that ask for
n in {2, 3}.  The n=3 half runs per criterion.  Each test prints one
PASS/FAIL line.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import pytest

from gaugedirac.suites import NUMERIC_PASS, RECORDED, SUITES, SuiteConfig, run

PASSING = {"exact_zero", "exact_equal", NUMERIC_PASS}


@dataclass
class Outcome:
    results: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, results, seconds):
        self.results.extend(results)
        self.seconds += seconds
        return self

    @property
    def failures(self):
        return [r for r in self.results if r.status not in PASSING and r.status != RECORDED]


@pytest.fixture(scope="session")
def default_battery():
    cfg = SuiteConfig(suites=tuple(SUITES)).validate()
    start = time.perf_counter()
    results = run(cfg)
    return results, time.perf_counter() - start


def from_defaults(battery, suites):
    results, _ = battery
    picked = [r for r in results if r.suite in suites]
    return Outcome().add(picked, sum(r.elapsed for r in picked))


def timed_run(**kw):
    cfg = SuiteConfig(**kw).validate()
    start = time.perf_counter()
    results = run(cfg)
    return results, time.perf_counter() - start


def report(capsys, label, outcome: Outcome, limit=None, extra="", also=True):
    ok = also and not outcome.failures and bool(outcome.results) and (limit is None or outcome.seconds < limit)
    budget = f" (limit {limit:.0f}s)" if limit is not None else ""
    line = (f"{label} {'PASS' if ok else 'FAIL'}: {len(outcome.results)} checks, "
            f"{len(outcome.failures)} failed, {outcome.seconds:.1f}s{budget}{extra}")
    with capsys.disabled():
        print("\n" + line)
    return ok


def check_counts(outcome: Outcome, suite: str, n_instances: int):
    seen = {(r.suite, r.instance) for r in outcome.results if r.suite == suite}
    return len(seen) >= n_instances


def test_ac1_stokes(capsys):
    out = Outcome().add(*timed_run(suites=("stokes",), instances=50))
    statuses = {r.status for r in out.results}
    assert report(capsys, "AC1", out, limit=10)
    assert len(out.results) == 50 and statuses == {"exact_zero"}


def _both_sizes(battery, suites, **kw):
    out = from_defaults(battery, suites)
    out.add(*timed_run(suites=suites, n=3, **kw))
    return out


def test_ac2_dtilde_omega_kappa(capsys, default_battery):
    out = _both_sizes(default_battery, ("dtilde-omega-kappa",))
    assert report(capsys, "AC2", out, limit=30)
    assert check_counts(out, "dtilde-omega-kappa", 20)


def test_ac3_isotropy(capsys, default_battery):
    out = _both_sizes(default_battery, ("isotropy",))
    maps = {r.check.split("-")[0].split("[")[0] for r in out.results}
    assert report(capsys, "AC3", out)
    assert maps == {"omega", "phi", "gamma_prime", "gamma_t"}


def test_ac4_closure(capsys, default_battery):
    suites = ("dM-closure", "phi-closure", "gamma-prime-dirac", "gamma-t-closure")
    out = _both_sizes(default_battery, suites)
    assert report(capsys, "AC4", out, limit=300)
    checks = {r.check for r in out.results if r.suite == "gamma-t-closure"}
    for t in ("-1/1", "0/1", "1/1", "2/1", "7/3"):
        for kind in ("const", "fundamental"):
            assert f"t={t}-{kind}" in checks


def test_ac5_lemma_formulas(capsys, default_battery):
    out = _both_sizes(default_battery, ("lemma-dorfman-formulas",))
    assert report(capsys, "AC5", out)
    assert {"Lie4-fundamental", "idorf-fundamental"} <= {r.check for r in out.results}


def test_ac6_kappa_bulk(capsys, default_battery):
    out = _both_sizes(default_battery, ("lemma-kappa-bulk",))
    assert report(capsys, "AC6", out)
    assert check_counts(out, "lemma-kappa-bulk", 20)


def test_ac7_pre_symplectic_family(capsys, default_battery):
    out = _both_sizes(default_battery, ("omega-t-closed",))
    assert report(capsys, "AC7", out)
    assert {"Omega-dCS", "Omega-theta1"} <= {r.check for r in out.results}


def test_ac8_flat_boundary(capsys, default_battery):
    out = _both_sizes(default_battery, ("boundary-gamma",))
    checks = {r.check for r in out.results}
    assert report(capsys, "AC8", out)
    for kind in ("zero", "abelian", "unipotent"):
        assert {f"boundary-gamma[{kind}]", f"degree[{kind}]", f"integrable[{kind}]"} <= checks


def test_ac9_gauge(capsys, default_battery):
    suites = ("gauge-infinitesimal", "gauge-finite")
    out = from_defaults(default_battery, suites)
    n3_results, seconds = timed_run(suites=suites, n=3)
    out.add(n3_results, seconds)
    n3 = [r for r in n3_results if r.check.startswith("quad-convergence")]
    ratios = [float(r.defect) for r in n3 if r.status == NUMERIC_PASS]
    extra = f"; n=3 order 4->8 residual ratios >= {min(ratios, default=0.0):.1e}"
    assert report(capsys, "AC9", out, extra=extra)
    assert len(n3) == 20 and all(r.status == NUMERIC_PASS for r in n3)
    checks = {r.check for r in out.results}
    assert {"lie-omega-flat[abelian]", "lie-lambda0-flat[abelian]", "kappa-invariance",
            "phi-equivariance-exact", "phi-equivariance-quad[8]"} <= checks


def test_ac10_courant_axioms(capsys, default_battery):
    picked = [r for r in default_battery[0] if r.suite == "courant-axioms" and r.instance < 10]
    out = Outcome().add(picked, sum(r.elapsed for r in picked))
    out.add(*timed_run(suites=("courant-axioms",), n=3, instances=10))
    assert report(capsys, "AC10", out)
    axioms = {r.check.split("-")[0] for r in out.results}
    assert axioms == {f"axiom{k}" for k in range(1, 6)}


def test_ac11_calculus_and_full_run(capsys, default_battery):
    out = Outcome()
    for n in (2, 3):
        out.add(*timed_run(suites=("calculus",), n=n, instances=50))
    results, wall = default_battery
    full_failed = sum(1 for r in results if r.status not in PASSING and r.status != RECORDED)
    ok_full = wall < 15 * 60 and full_failed == 0
    extra = f"; full default run {len(results)} checks, {full_failed} failed, {wall:.0f}s (limit 900s)"
    assert report(capsys, "AC11", out, extra=extra, also=ok_full)
