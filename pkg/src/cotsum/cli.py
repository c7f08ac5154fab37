"""Command-line front end.

Every command writes a table: CSV with ``# key=value`` metadata lines before
the column header, or JSON with the same metadata under ``"meta"``.  Exit
codes: 0 success, 2 usage or domain error, 3 resource limit, 4 verify failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__, _backend
from .cotangent import c0_cf_telescoped, c0_direct, psi_leading_term, psi_via_reciprocity
from .distribution import (
    FIGURE_SAMPLES,
    FIGURE_TRUNCATION,
    cdf_query,
    find_density_witness,
    histogram,
    is_unimodal,
    sample_distribution,
    verify_witness,
)
from .errors import BudgetExhausted, DomainError, PrecisionExhausted, ResourceError
from .estermann import SIEVE_CAP, d1_cf, d1_rational, d1_truncated, divisor_table
from .moments import empirical_moment, hk_brute, hk_dft
from .rationals import ReducedFraction
from .verify import run_suite

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_VERIFY = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    precision: str = "double"
    sieve_cap: int = SIEVE_CAP
    threads: int = 1
    seed: int = 0
    output_format: str = "csv"

    def __post_init__(self):
        if self.precision not in ("double", "extended"):
            raise DomainError(f"precision must be double or extended, got {self.precision!r}")
        if self.output_format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.output_format!r}")
        if self.threads < 1:
            raise DomainError("threads must be >= 1")
        if self.sieve_cap < 1:
            raise DomainError("sieve cap must be >= 1")

    def metadata(self, **extra) -> dict:
        meta = {"version": __version__, "backend": _backend.BACKEND}
        meta.update(asdict(self))
        meta["truncation"] = "none"
        meta.update(extra)
        return meta


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return str(v)


def render(rows, columns, meta: dict, fmt: str) -> str:
    """Serialise ``rows`` (dicts or tuples in ``columns`` order) with ``meta``."""
    rows = [r if isinstance(r, dict) else dict(zip(columns, r)) for r in rows]
    if fmt == "json":
        clean = [{c: (float(r[c]) if isinstance(r[c], np.floating) else
                      int(r[c]) if isinstance(r[c], np.integer) else r[c]) for c in columns} for r in rows]
        return json.dumps({"meta": meta, "columns": list(columns), "rows": clean}, indent=1) + "\n"
    buf = io.StringIO()
    for k, v in meta.items():
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _emit(cfg, rows, columns, out=None, **meta):
    text = render(rows, columns, cfg.metadata(**meta), cfg.output_format)
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _fraction(parts) -> ReducedFraction:
    if len(parts) == 1:
        return ReducedFraction.parse(parts[0])
    if len(parts) == 2:
        try:
            a, q = int(parts[0]), int(parts[1])
        except ValueError:
            raise DomainError(f"expected two integers, got {parts}") from None
        return ReducedFraction(a, q)
    raise DomainError("give a fraction as a/q or as two integers")


def cmd_c0(args, cfg):
    x = _fraction(args.fraction)
    rows = []
    if args.method in ("direct", "both"):
        d = c0_direct(x, cfg.precision)
        rows.append((x.num, x.den, "direct", d.value, d.err_estimate))
    if args.method in ("cf", "both"):
        c = c0_cf_telescoped(x)
        rows.append((x.num, x.den, "cf_telescoped", c.value, c.err_estimate))
    if args.method == "both":
        rows.append((x.num, x.den, "discrepancy", abs(rows[0][3] - rows[1][3]), rows[0][4] + rows[1][4]))
    _emit(cfg, rows, ("a", "q", "method", "value", "err_estimate"))


def cmd_psi(args, cfg):
    x = _fraction(args.fraction)
    psi = psi_via_reciprocity(x).value
    lead = psi_leading_term(float(x))
    _emit(cfg, [(x.num, x.den, psi, lead, psi - lead)], ("a", "q", "psi", "leading_term", "residual"))


def _real_or_fraction(text: str):
    if "/" in text:
        return ReducedFraction.parse(text)
    try:
        float(text)
    except ValueError:
        raise DomainError(f"cannot read {text!r} as a number") from None
    return text


def cmd_estermann(args, cfg):
    x = _real_or_fraction(args.x)
    rational = isinstance(x, ReducedFraction)
    wanted = []
    if args.trunc is not None:
        wanted.append("trunc")
    if args.depth is not None:
        wanted.append("depth")
    if args.bridge:
        wanted.append("bridge")
    if not wanted:
        wanted = ["bridge"] if rational else ["depth"]
    rows = []
    for m in wanted:
        if m == "trunc":
            if args.trunc < 1:
                raise DomainError("truncation must be >= 1")
            table = divisor_table(args.trunc, cfg.sieve_cap)
            v = d1_truncated(x if rational else float(x), args.trunc, table)
        elif m == "depth":
            depth = 30 if args.depth is None else args.depth
            if depth < 1:
                raise DomainError("depth must be >= 1")
            v = d1_cf(x, depth)
        else:
            if not rational:
                raise DomainError("--bridge needs a rational a/q")
            v = d1_rational(x)
        rows.append((str(x), v.method.value, v.truncation, v.value, v.err_estimate))
    _emit(cfg, rows, ("x", "method", "truncation", "value", "err_estimate"),
          truncation=args.trunc if args.trunc is not None else "none")


def cmd_moments(args, cfg):
    rows = []
    for q in args.q:
        for k in args.k:
            if k < 0:
                raise DomainError("k must be >= 0")
            rows.append(empirical_moment(q, k, args.method, precision=cfg.precision).as_row())
    _emit(cfg, rows, ("q", "k", "phi_q", "empirical", "predicted", "rel_dev"), args.out)


def cmd_hk(args, cfg):
    if args.method == "dft":
        table = divisor_table(args.trunc, cfg.sieve_cap) if args.trunc >= 1 else None
        h = hk_dft(args.k, args.trunc, table)
    else:
        h = hk_brute(args.k, args.trunc)
    _emit(cfg, [(h.k, h.truncation, h.method.value, h.value, h.tail_estimate)],
          ("k", "truncation", "method", "value", "tail_estimate"), truncation=h.truncation)


def _cdf_path(out: Path) -> Path:
    return out.with_name(out.stem + "_cdf" + out.suffix)


def cmd_distribution(args, cfg):
    if args.samples < 1 or args.trunc < 1 or args.bins < 1:
        raise DomainError("samples, trunc and bins must all be >= 1")
    if not args.lo < args.hi:
        raise DomainError("need lo < hi")
    divisor_table(args.trunc, cfg.sieve_cap)
    dist = sample_distribution(args.samples, args.trunc, cfg.seed)
    h = histogram(dist, args.bins, (args.lo, args.hi))
    meta = dict(truncation=args.trunc, samples=args.samples, bins=args.bins, lo=args.lo, hi=args.hi,
                underflow=h.underflow, overflow=h.overflow)
    out = Path(args.out)
    _emit(cfg, h.rows(), ("bin_center", "count"), out, **meta)
    # empirical CDF at the sample points; ties collapse onto their last index
    xs = dist.samples
    F = cdf_query(dist, xs)
    keep = np.append(xs[1:] != xs[:-1], True)
    _emit(cfg, zip(xs[keep].tolist(), F[keep].tolist()), ("x", "F̂(x)"), _cdf_path(out), **meta)
    F0 = float(cdf_query(dist, 0.0))
    summary = [
        ("histogram", str(out)),
        ("cdf", str(_cdf_path(out))),
        ("F_hat(0)", F0),
        ("mode_bin_center", float(h.centers[h.mode])),
        ("mode_bin_contains_0", h.bin_contains(h.mode, 0.0)),
        ("unimodal", is_unimodal(h.counts)),
        ("cdf_monotone", bool(np.all(np.diff(F) >= 0))),
    ]
    _emit(cfg, summary, ("key", "value"), **meta)


def cmd_target(args, cfg):
    w = find_density_witness(args.z, args.eps, args.budget)
    check = verify_witness(w)
    row = dict(z=w.target_z, eps=w.epsilon, x=str(w.x_found), value=w.value, bridge_value=check,
               in_window=w.in_window and args.z < check <= args.z + args.eps, kappa=w.kappa, x1=w.x1,
               x2=w.x2, tail_bound=w.tail_bound, evaluations=w.iterations, cf=str(w.cf) if w.cf else "")
    _emit(cfg, [row], tuple(row))


def cmd_verify(args, cfg):
    rows, failed = [], 0
    for c in run_suite(args.level, cfg.seed):
        print(c.line(), file=sys.stderr, flush=True)
        failed += not c.passed
        rows.append((c.name, c.passed, c.measured, c.threshold, c.seconds, c.detail))
    _emit(cfg, rows, ("check", "passed", "measured", "threshold", "seconds", "detail"), level=args.level)
    return EXIT_VERIFY if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--precision", choices=("double", "extended"), default="double",
                   help="extended (long double) applies to direct cotangent sums")
    g.add_argument("--sieve-cap", type=int, default=SIEVE_CAP, help="largest divisor sieve allowed")
    g.add_argument("--threads", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")

    p = argparse.ArgumentParser(prog="cotsum", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("c0", parents=[common], help="cotangent sum c0(a/q)")
    s.add_argument("fraction", nargs="+", help="a/q or a q")
    s.add_argument("--method", choices=("direct", "cf", "both"), default="direct")
    s.set_defaults(func=cmd_c0)

    s = sub.add_parser("psi", parents=[common], help="psi(a/q) and its leading term")
    s.add_argument("fraction", nargs="+", help="a/q or a q")
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("estermann", parents=[common], help="D(1, x)")
    s.add_argument("x", help="a/q or a decimal real")
    s.add_argument("--trunc", type=int, help="truncated series with n <= X")
    s.add_argument("--depth", type=int, help="continued-fraction formula to depth L")
    s.add_argument("--bridge", action="store_true", help="cotangent-sum bridge (rationals)")
    s.set_defaults(func=cmd_estermann)

    s = sub.add_parser("moments", parents=[common], help="empirical moments of c0 over residues")
    s.add_argument("--q", type=int, nargs="+", required=True)
    s.add_argument("--k", type=int, nargs="+", required=True)
    s.add_argument("--method", choices=("direct", "cf"), default="direct")
    s.add_argument("--out", help="write moments table here instead of stdout")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("hk", parents=[common], help="moment constant H_k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trunc", type=int, required=True)
    s.add_argument("--method", choices=("dft", "brute"), default="dft")
    s.set_defaults(func=cmd_hk)

    s = sub.add_parser("distribution", parents=[common], help="sample 2/pi^2 D(1, u)")
    s.add_argument("--samples", type=int, default=FIGURE_SAMPLES)
    s.add_argument("--trunc", type=int, default=FIGURE_TRUNCATION)
    s.add_argument("--bins", type=int, default=100)
    s.add_argument("--lo", type=float, default=-2.0)
    s.add_argument("--hi", type=float, default=2.0)
    s.add_argument("--out", default="fig1.csv", help="histogram file; the CDF goes to <stem>_cdf<suffix>")
    s.set_defaults(func=cmd_distribution)

    s = sub.add_parser("target", parents=[common], help="find x with z < D(1, x) <= z + eps")
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--budget", type=int, default=400)
    s.set_defaults(func=cmd_target)

    s = sub.add_parser("verify", parents=[common], help="run the invariant suite")
    s.add_argument("--level", choices=("fast", "full"), default="fast")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.precision, args.sieve_cap, args.threads, args.seed, args.output_format)
        _backend.set_threads(cfg.threads)
        rc = args.func(args, cfg)
    except (DomainError, ValueError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, BudgetExhausted, PrecisionExhausted, MemoryError) as e:
        print(f"resource error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK if rc is None else rc


if __name__ == "__main__":
    sys.exit(main())
