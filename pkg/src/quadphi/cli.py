"""Command-line interface.

Exit codes: 0 success, 1 I/O or validation failure, 2 verification failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import mmio
from .core import quadphi_run
from .dense import as_matrix, count_products, one_norm
from .gallery import DEFAULT_SUITE, generate, uniform_stream
from .params import DEFAULT_NU, UNIT_ROUNDOFF, ThetaTable
from .verify import CSV_HEADER, SUITES, all_passed

log = logging.getLogger("quadphi")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        mmio.atomic_write_text(out, text)


def _write_matrix(path: Path, a, fmt: str) -> None:
    # labels may contain dots, so append rather than use with_suffix
    target = path.parent / f"{path.name}.{fmt}"
    if fmt == "csv":
        mmio.atomic_write_text(target, mmio.format_csv_matrix(a))
    else:
        mmio.write_mtx(target, a)


def cmd_phi(args) -> int:
    if args.input is None:
        raise UsageError("phi: --input is required")
    if args.out is None:
        raise UsageError("phi: --out is required")
    a = as_matrix(mmio.read_mtx(args.input))
    with count_products() as counter:
        run = quadphi_run(a, args.l)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for k, c in enumerate(run.family):
        _write_matrix(out / f"C_{k}", c, args.format)
    plan = run.plan
    mmio.atomic_write_text(out / "plan.csv", mmio.format_csv(
        ("m", "s", "eta", "products"), [(plan.m, plan.s, plan.eta, counter.count)]))
    log.info("m=%d s=%d eta=%g products=%d", plan.m, plan.s, plan.eta, counter.count)
    return EXIT_OK


def cmd_theta(args) -> int:
    tol = args.tol if args.tol is not None else UNIT_ROUNDOFF
    table = ThetaTable.regenerate(tol, args.nu)
    _emit(mmio.format_csv(("m", "theta"), table.rows()), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        suite = SUITES[args.suite]
    except KeyError:
        raise UsageError(f"verify: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}") from None
    kwargs = {"seed": args.seed}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.suite == "action":
        kwargs["steps"] = args.steps
    checks = suite(**kwargs)
    _emit(mmio.format_csv(CSV_HEADER, [c.row() for c in checks]), args.out)
    failed = sum(not c.passed for c in checks)
    if failed:
        log.error("%s: %d of %d checks failed", args.suite, failed, len(checks))
        return EXIT_VERIFY
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = []
    trials = args.trials if args.trials is not None else 1
    for n in args.sizes:
        for t in range(trials):
            a = uniform_stream(args.seed + t, n * n).reshape(n, n)
            a = as_matrix(a * (args.norm / one_norm(a)))
            with count_products() as counter:
                start = time.perf_counter()
                run = quadphi_run(a, args.l)
                elapsed = time.perf_counter() - start
            rows.append((n, args.l, run.plan.m, run.plan.s, counter.count, elapsed))
    _emit(mmio.format_csv(("n", "L", "m", "s", "products", "seconds"), rows), args.out)
    return EXIT_OK


def cmd_gallery(args) -> int:
    if args.out is None:
        raise UsageError("gallery: --out is required")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for spec in DEFAULT_SUITE:
        a = generate(spec)
        _write_matrix(out / spec.label, a, args.format)
        manifest.append((spec.label, spec.n, float(np.abs(a).sum(axis=0).max())))
    mmio.atomic_write_text(out / "manifest.csv", mmio.format_csv(("name", "n", "norm1"), manifest))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quadphi", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, out_help="output path ('-' for stdout)"):
        sp.add_argument("--out", help=out_help)
        sp.add_argument("--seed", type=int, default=0)
        return sp

    sp = common(sub.add_parser("phi", help="compute phi_0(A)..phi_L(A)"), out_help="output directory")
    sp.add_argument("--input", help="Matrix Market file with A")
    sp.add_argument("--l", type=_nonneg_int, default=0)
    sp.add_argument("--format", choices=("mtx", "csv"), default="mtx")
    sp.set_defaults(func=cmd_phi)

    sp = common(sub.add_parser("theta", help="regenerate the theta_m table"))
    sp.add_argument("--tol", type=_positive_float)
    sp.add_argument("--nu", type=_positive_int, default=DEFAULT_NU)
    sp.set_defaults(func=cmd_theta)

    sp = common(sub.add_parser("verify", help="run an invariant suite"))
    sp.add_argument("suite", help=f"one of {', '.join(SUITES)}")
    sp.add_argument("--trials", type=_positive_int)
    sp.add_argument("--steps", type=_positive_int, default=10_000)
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("bench", help="product counts and timings"))
    sp.add_argument("--sizes", type=_positive_int, nargs="+", default=[128])
    sp.add_argument("--l", type=_nonneg_int, default=7)
    sp.add_argument("--trials", type=_positive_int)
    sp.add_argument("--norm", type=_positive_float, default=100.0,
                    help="1-norm of the random test matrices (same stream as the gallery)")
    sp.set_defaults(func=cmd_bench)

    sp = common(sub.add_parser("gallery", help="write the default test matrices"),
                out_help="output directory")
    sp.add_argument("--format", choices=("mtx", "csv"), default="mtx")
    sp.set_defaults(func=cmd_gallery)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    except (mmio.MatrixFileError, ValueError, OSError) as exc:
        sys.stderr.write(f"quadphi {args.command}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
