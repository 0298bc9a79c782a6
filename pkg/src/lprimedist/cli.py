"""Command-line entry point: ``lprimedist <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 numerical tolerance failure,
3 invalid modulus.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass

from . import distribution, lvalues, moments, verify
from .arith import is_odd_prime
from .errors import InvalidModulusError, NumericToleranceError, PreconditionError

JOBS_ENV = "LPRIMEDIST_JOBS"

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_MODULUS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    qs: tuple[int, ...] = ()
    ks: tuple[int, ...] = ()
    truncation: int = 10**7
    method: str = "euler"
    grid: tuple[float, float, float] = (0.0, 4.0, 0.01)
    fmt: str = "csv"
    out: str | None = None
    suite: str = "all"
    jobs: int = 1


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _grid(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must be start:stop:step, got {text!r}")
    if step <= 0 or stop < start:
        raise UsageError("grid needs step > 0 and stop >= start")
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lprimedist", description="Distribution of |L'/L(1, chi)| modulo primes.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p, fmt="csv"):
        p.add_argument("--format", choices=["csv", "json"], default=fmt)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--jobs", type=int, default=None,
                       help=f"worker processes (default: ${JOBS_ENV} or 1)")

    p = sub.add_parser("lvalues", help="L(1, chi), L'(1, chi) and |L'/L| for each character")
    p.add_argument("--q", required=True)
    common(p)

    p = sub.add_parser("dist", help="CDF table D_q(t) on a grid")
    p.add_argument("--q", default="59,101,257")
    p.add_argument("--grid", default="0:4:0.01")
    common(p)

    p = sub.add_parser("mk", help="certified enclosures of M_k")
    p.add_argument("--k", required=True)
    p.add_argument("--truncation", type=int, default=10**7)
    p.add_argument("--method", choices=["euler", "direct"], default="euler")
    common(p, "json")

    p = sub.add_parser("empirical", help="empirical moments and the convergence report")
    p.add_argument("--q", default=",".join(map(str, distribution.DEFAULT_LADDER)))
    p.add_argument("--k", default="1,2")
    p.add_argument("--truncation", type=int, default=10**7)
    common(p, "json")

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--suite", default="all", choices=["all", *verify.SUITES])
    common(p, "json")
    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    jobs = ns.jobs if ns.jobs is not None else int(os.environ.get(JOBS_ENV, "1"))
    if jobs < 1:
        raise UsageError("--jobs must be >= 1")
    kw = dict(subcommand=ns.subcommand, fmt=ns.format, out=ns.out, jobs=jobs)
    if hasattr(ns, "q"):
        kw["qs"] = _int_list(ns.q)
        if not kw["qs"]:
            raise UsageError("--q needs at least one modulus")
    if hasattr(ns, "k"):
        kw["ks"] = _int_list(ns.k)
        if not kw["ks"] or min(kw["ks"]) < 0:
            raise UsageError("--k needs non-negative integers")
    if hasattr(ns, "truncation"):
        if ns.truncation < moments.MIN_TRUNCATION:
            raise UsageError(f"--truncation must be >= {moments.MIN_TRUNCATION}")
        kw["truncation"] = ns.truncation
    if hasattr(ns, "method"):
        kw["method"] = ns.method
    if hasattr(ns, "grid"):
        kw["grid"] = _grid(ns.grid)
    if hasattr(ns, "suite"):
        kw["suite"] = ns.suite
    return RunConfig(**kw)


def _emit(text: str, out: str | None) -> None:
    """Write to stdout, or atomically replace ``out``."""
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lprimedist-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        os.unlink(tmp)
        raise


def _check_moduli(qs) -> None:
    bad = [q for q in qs if not is_odd_prime(q)]
    if bad:
        raise InvalidModulusError(f"not odd primes: {bad}")


def cmd_lvalues(cfg: RunConfig) -> str:
    _check_moduli(cfg.qs)
    records = [r for q in cfg.qs for r in lvalues.l_values_for(q)]
    if cfg.fmt == "json":
        rows = [{"q": r.q, "b": r.b, "re_L1": repr(r.L1.real), "im_L1": repr(r.L1.imag),
                 "re_Lp1": repr(r.Lp1.real), "im_Lp1": repr(r.Lp1.imag), "ratio": repr(r.ratio)}
                for r in records]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    lvalues.write_csv(records, buf)
    return buf.getvalue()


def cmd_dist(cfg: RunConfig) -> str:
    _check_moduli(cfg.qs)
    dists = distribution.distributions(list(cfg.qs), cfg.jobs)
    data = distribution.figure1_data(distribution.grid_points(*cfg.grid), cfg.qs, dists)
    if cfg.fmt == "json":
        payload = {"t": [float(t) for t in data["t"]]}
        payload.update({str(q): [float(v) for v in data[q]] for q in cfg.qs})
        return json.dumps(payload) + "\n"
    buf = io.StringIO()
    distribution.write_figure_csv(data, buf)
    return buf.getvalue()


def cmd_mk(cfg: RunConfig) -> str:
    est = [moments.moment_constant(k, cfg.truncation, cfg.method) for k in cfg.ks]
    if cfg.fmt == "csv":
        lines = ["k,truncation,method,partial,tail_bound,closed_form_bound"]
        for e in est:
            j = e.to_json()
            lines.append(",".join(str(j[c]) for c in ("k", "truncation", "method", "partial",
                                                      "tail_bound", "closed_form_bound")))
        return "\n".join(lines) + "\n"
    return json.dumps([e.to_json() for e in est], indent=1) + "\n"


def cmd_empirical(cfg: RunConfig) -> str:
    _check_moduli(cfg.qs)
    qs = list(cfg.qs)
    dists = distribution.distributions(qs, cfg.jobs)
    per_q = [{"q": q, "moments": {str(k): distribution.empirical_moment(dists[q], k) for k in cfg.ks}}
             for q in qs]
    reports = {}
    if len(qs) >= 3:
        for k in cfg.ks:
            reports[str(k)] = distribution.theorem1_report(qs, k, cfg.truncation, dists=dists)
    payload = {"per_q": per_q, "convergence": reports or None}
    if cfg.fmt == "csv":
        lines = ["q," + ",".join(f"k{k}" for k in cfg.ks)]
        for row in per_q:
            lines.append(f"{row['q']}," + ",".join(f"{row['moments'][str(k)]:.17g}" for k in cfg.ks))
        return "\n".join(lines) + "\n"
    return json.dumps(payload, indent=1) + "\n"


def cmd_verify(cfg: RunConfig) -> tuple[str, bool]:
    results = verify.run_suite(cfg.suite)
    ok = all(r["ok"] for r in results)
    failures = [r for r in results if not r["ok"]]
    payload = {"suite": cfg.suite, "passed": ok, "results": results, "failures": failures}
    return json.dumps(payload, indent=1) + "\n", ok


COMMANDS = {"lvalues": cmd_lvalues, "dist": cmd_dist, "mk": cmd_mk, "empirical": cmd_empirical}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"lprimedist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if cfg.subcommand == "verify":
            text, ok = cmd_verify(cfg)
            _emit(text, cfg.out)
            return EXIT_OK if ok else EXIT_TOLERANCE
        _emit(COMMANDS[cfg.subcommand](cfg), cfg.out)
    except InvalidModulusError as exc:
        print(f"lprimedist: invalid modulus: {exc}", file=sys.stderr)
        return EXIT_MODULUS
    except NumericToleranceError as exc:
        print(json.dumps({"error": "tolerance", "detail": str(exc)}), file=sys.stderr)
        return EXIT_TOLERANCE
    except PreconditionError as exc:
        print(f"lprimedist: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
