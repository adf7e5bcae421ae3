"""``verify``: run verification suites and write a deterministic report."""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction

from .suites import SUITES, ConfigError, SuiteConfig, emit_report, run

ENV_PREFIX = "GAUGEDIRAC_"


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def _t_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(tok.strip()) for tok in text.split(",") if tok.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad t-probe list {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit with 2, as argparse does by default
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    d = SuiteConfig()
    p = _Parser(prog="verify", description="Exact verification of gauge-theoretic Dirac structures.")
    p.add_argument("--suite", default=_env("suite", "all"),
                   help="suite name, comma-separated names, or 'all' (choices: %s)" % ", ".join(SUITES))
    p.add_argument("--n", type=int, default=int(_env("n", d.n)), help="su(n) size, 2..4")
    p.add_argument("--deg", type=int, default=int(_env("deg", d.max_input_degree)),
                   help="maximal polynomial degree of random inputs, 1..3")
    p.add_argument("--instances", type=int, default=int(_env("instances", d.instances)))
    p.add_argument("--seed", type=int, default=int(_env("seed", d.seed)))
    p.add_argument("--t", type=_t_list, default=_t_list(_env("t", "-1,0,1,2,7/3")),
                   help="comma-separated rational t-probes")
    p.add_argument("--backend", choices=("exact", "quad"), default=_env("backend", d.backend),
                   help="'quad' adds the quadrature checks for non-constant gauge transformations")
    p.add_argument("--quad-order", type=int, default=int(_env("quad_order", d.quad_order)))
    p.add_argument("--degree-cap", type=int, default=int(_env("degree_cap", d.degree_cap)))
    p.add_argument("--report", default=_env("report", None), help="write the report to this path")
    p.add_argument("--jobs", type=int, default=int(_env("jobs", d.jobs)))
    p.add_argument("--quiet", action="store_true", help="print only the summary line")
    return p


def config_from_args(ns: argparse.Namespace) -> SuiteConfig:
    names = tuple(SUITES) if ns.suite == "all" else tuple(s for s in ns.suite.split(",") if s)
    return SuiteConfig(
        n=ns.n, max_input_degree=ns.deg, instances=ns.instances, seed=ns.seed, t_probes=ns.t,
        quad_order=ns.quad_order, backend=ns.backend, suites=names, degree_cap=ns.degree_cap,
        jobs=ns.jobs,
    ).validate()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"verify: error: {exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    results = run(cfg)
    text = emit_report(cfg, results, ns.report)
    if not ns.quiet and ns.report is None:
        sys.stdout.write(text)
    failed = [r for r in results if r.failed]
    for r in failed:
        print(f"FAILED {r.record()}", file=sys.stderr)
    print(f"verify: {len(results)} checks, {len(failed)} failed, {time.perf_counter() - start:.1f}s",
          file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
