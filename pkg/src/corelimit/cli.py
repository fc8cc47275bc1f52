"""Command line front end: ``corelimit {enumerate,dist,verify,sample}``.

Exit codes: 0 success, 1 a verified property failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import sys
from datetime import datetime, timezone
from typing import Callable, Iterator, Sequence, TextIO

import numpy as np

from . import __version__
from .core_enum import count_all, count_fixed_k, enumerate_all, enumerate_fixed_k
from .exact_dist import (
    SCHEMA,
    exact_moments,
    fixed_k_distribution,
    iter_fixed_k_distributions,
    mixture_distribution,
)
from .normal_approx import (
    MIX_A,
    MIX_B,
    TAIL_EPS,
    deviation_sweep,
    kolmogorov_distance,
    mixing_quadrature,
    phi_cdf,
    pitman_global_check,
    pitman_local_residual,
    real_roots_check,
    scaled_envelope,
    tail_mass,
    trend_ok,
    y_k_diagnostic,
    Y_K_WINDOW_ENVELOPE,
)
from .rank1_cclt import corollary_bound_factor, useful_bound_max, useful_range
from .sampling import SampleConfig, empirical_ks, sample_sizes, write_sample_csv

MIXING_TOL = 1e-8
USEFUL_BOUND = 1000.0
TAIL_MIN_R2 = 0.9


def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def parse_int_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_float_range(text: str) -> tuple[float, float]:
    try:
        if ".." in text[1:]:
            # allow a leading minus sign: "-3..3"
            i = text.index("..", 1)
            lo, hi = float(text[:i]), float(text[i + 2:])
        else:
            lo = hi = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X or A..B, got {text!r}") from None
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def float_grid(bounds: tuple[float, float], step: float) -> list[float]:
    lo, hi = bounds
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [lo + i * step for i in range(n + 1)]


@contextlib.contextmanager
def open_out(path: str | None) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_manifest(path: str | None, command: str, args: argparse.Namespace) -> None:
    """Sidecar ``PATH.manifest.json`` next to a written file; data stays timestamp-free."""
    if path is None or path == "-":
        return
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    manifest = {
        "schema": SCHEMA,
        "command": command,
        "parameters": params,
        "version": __version__,
        "seed": params.get("seed"),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    with open(path + ".manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")


def emit_table(out: TextIO, fmt_name: str, check: str, header: Sequence[str],
               rows: list[list], passed: bool) -> None:
    if fmt_name == "json":
        json.dump({
            "schema": SCHEMA,
            "check": check,
            "passed": passed,
            "rows": [{h: v for h, v in zip(header, r)} for r in rows],
        }, out, indent=2)
        out.write("\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


# --- enumerate ----------------------------------------------------------------

def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.k is not None and args.k < 0:
        raise UsageError("--k must be non-negative")
    if args.count_only:
        n = count_all(args.s) if args.k is None else count_fixed_k(args.s, args.k)
        with open_out(args.out) as out:
            out.write(f"{n}\n")
        write_manifest(args.out, "enumerate", args)
        return 0
    cores = enumerate_all(args.s) if args.k is None else enumerate_fixed_k(args.s, args.k)
    with open_out(args.out) as out:
        if args.format == "json":
            json.dump({
                "schema": SCHEMA,
                "s": args.s,
                "k": args.k,
                "count": len(cores),
                "cores": [{"parts": list(c.parts), "size": c.size} for c in cores],
            }, out, indent=2)
            out.write("\n")
        elif args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["parts", "k", "size"])
            for c in cores:
                w.writerow([" ".join(map(str, c.parts)), c.k, c.size])
        else:
            for c in cores:
                out.write(f"{c} {c.size}\n")
    write_manifest(args.out, "enumerate", args)
    return 0


# --- dist ---------------------------------------------------------------------

def cmd_dist(args: argparse.Namespace) -> int:
    if args.k is None:
        d = mixture_distribution(args.s)
    else:
        if not 0 <= args.k <= args.s // 2:
            raise UsageError(f"--k must lie in [0, {args.s // 2}]")
        d = fixed_k_distribution(args.s, args.k)
    moments = exact_moments(d) if args.moments else None
    with open_out(args.out) as out:
        if args.format == "csv":
            if moments is not None:
                out.write(f"# mean={moments.mean} ({fmt(float(moments.mean))})\n")
                out.write(f"# variance={moments.variance} ({fmt(float(moments.variance))})\n")
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["size", "count"])
            for n, c in d.counts.items():
                w.writerow([n, c])
        else:
            payload = d.to_json()
            payload["k"] = args.k
            if moments is not None:
                payload["moments"] = {
                    "mean": str(moments.mean),
                    "variance": str(moments.variance),
                    "mean_float": float(moments.mean),
                    "variance_float": float(moments.variance),
                }
            json.dump(payload, out, indent=2)
            out.write("\n")
    write_manifest(args.out, "dist", args)
    return 0


# --- verify -------------------------------------------------------------------

class Check:
    def __init__(self, header: Sequence[str]):
        self.header = list(header)
        self.rows: list[list] = []
        self.failure: str | None = None

    def add(self, row: list, ok: bool = True) -> None:
        self.rows.append(row)
        if not ok and self.failure is None:
            self.failure = ",".join(fmt(v) for v in row)

    def fail(self, message: str) -> None:
        if self.failure is None:
            self.failure = message


def verify_clt(args) -> Check:
    s_vals = args.s or list(range(10, 61))
    chk = Check(["s", "kolmogorov", "scaled", "mean", "stddev", "envelope", "pass"])
    reports = deviation_sweep(s_vals[0], s_vals[-1])
    reports = [r for r in reports if r.s in set(s_vals)]
    for r in reports:
        env = scaled_envelope(r.s)
        chk.add([r.s, r.kolmogorov, r.scaled, r.mean, r.stddev, env, r.scaled <= env], r.scaled <= env)
    if not trend_ok([r.scaled for r in reports]):
        chk.fail("upward trend: max scaled value in the last quarter exceeds the first quarter")
    return chk


def verify_pitman(args) -> Check:
    s_vals = args.s or list(range(2, 401))
    chk = Check(["s", "max_residual", "bound", "local_residual", "pass"])
    for s in s_vals:
        g = pitman_global_check(s)
        chk.add([s, g.max_residual, g.bound, pitman_local_residual(s), g.passed], g.passed)
    return chk


def verify_roots(args) -> Check:
    s_vals = args.s or list(range(2, 61))
    chk = Check(["s", "degree", "max_imag", "max_root", "pass"])
    for s in s_vals:
        r = real_roots_check(s)
        chk.add([s, len(r.roots), r.max_imag, r.max_root, r.passed], r.passed)
    return chk


def verify_tail(args) -> Check:
    s_vals = args.s or list(range(50, 301))
    eps = args.eps if args.eps is not None else TAIL_EPS
    chk = Check(["s", "tail_mass", "log_tail_mass"])
    xs, ys = [], []
    for s in s_vals:
        m = tail_mass(s, eps)
        chk.add([s, m, math.log(m) if m > 0 else -math.inf])
        if m > 0:
            xs.append(s)
            ys.append(math.log(m))
    if len(xs) >= 3:
        slope, r2 = linear_fit(xs, ys)
        if not (slope < 0 and r2 >= TAIL_MIN_R2):
            chk.fail(f"log tail fit: slope={fmt(slope)} r2={fmt(r2)}")
    return chk


def linear_fit(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope and coefficient of determination."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), r2


def verify_mixing(args) -> Check:
    bounds = args.x if args.x is not None else (-3.0, 3.0)
    chk = Check(["x", "quadrature", "phi", "abs_error", "pass"])
    for x in float_grid(bounds, args.step):
        q = mixing_quadrature(MIX_A, MIX_B, x)
        err = abs(q - phi_cdf(x))
        chk.add([x, q, phi_cdf(x), err, err <= MIXING_TOL], err <= MIXING_TOL)
    return chk


def verify_ykdiag(args) -> Check:
    s_vals = args.s or list(range(50, 301))
    bounds = args.x if args.x is not None else (0.0, 0.0)
    xs = float_grid(bounds, args.step)
    chk = Check(["s", "max_residual_window", "max_residual_all", "envelope", "pass"])
    for s in s_vals:
        if s < 3:
            raise UsageError("ykdiag needs s >= 3")
        rows = [r for x in xs for r in y_k_diagnostic(s, x)]
        window = [r.residual for r in rows if s / 4 < r.k < s / 3]
        w = max(window) if window else 0.0
        ok = w <= Y_K_WINDOW_ENVELOPE
        chk.add([s, w, max(r.residual for r in rows), Y_K_WINDOW_ENVELOPE, ok], ok)
    return chk


def verify_cclt_bound(args) -> Check:
    s_vals = args.s or list(range(8, 401))
    header = ["s", "k_min", "k_max", "max_factor_sqrt_s", "pass"]
    if args.effective_k:
        header.insert(4, "effective_K_lower")
    chk = Check(header)
    per_k = None
    if args.effective_k:
        per_k = {dists[0].s: dists for dists in iter_fixed_k_distributions(s_vals[-1], s_vals[0])}
    for s in s_vals:
        ks = [k for k in useful_range(s) if 0 < k < s / 2]
        if not ks:
            continue
        val = useful_bound_max(s)
        row = [s, ks[0], ks[-1], val, val <= USEFUL_BOUND]
        if per_k is not None:
            # a lower estimate: K must be at least the observed distance / factor
            k_eff = max(kolmogorov_distance(per_k[s][k]).kolmogorov / corollary_bound_factor(s, k) for k in ks)
            row.insert(4, k_eff)
        chk.add(row, val <= USEFUL_BOUND)
    return chk


VERIFIERS: dict[str, Callable[[argparse.Namespace], Check]] = {
    "clt": verify_clt,
    "pitman": verify_pitman,
    "roots": verify_roots,
    "tail": verify_tail,
    "mixing": verify_mixing,
    "ykdiag": verify_ykdiag,
    "cclt-bound": verify_cclt_bound,
}


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        chk = VERIFIERS[args.check](args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    passed = chk.failure is None
    with open_out(args.out) as out:
        emit_table(out, args.format, args.check, chk.header, chk.rows, passed)
    write_manifest(args.out, f"verify {args.check}", args)
    if not passed:
        print(f"FAIL {args.check}: {chk.failure}", file=sys.stderr)
        return 1
    return 0


# --- sample -------------------------------------------------------------------

def cmd_sample(args: argparse.Namespace) -> int:
    try:
        cfg = SampleConfig(args.s, args.n, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sizes = sample_sizes(cfg.s, cfg.n_samples, cfg.rng())
    with open_out(args.out) as out:
        if args.format == "json":
            json.dump({"schema": SCHEMA, "s": cfg.s, "seed": cfg.seed, "n": cfg.n_samples,
                       "sizes": sizes.tolist()}, out)
            out.write("\n")
        else:
            write_sample_csv(out, sizes, cfg.s, cfg.seed)
    write_manifest(args.out, "sample", args)
    if not args.ks:
        return 0
    if cfg.n_samples < 1000:
        raise UsageError("--ks needs --n >= 1000")
    report = empirical_ks(cfg)
    stream = sys.stdout if args.out not in (None, "-") else sys.stderr
    json.dump({"schema": SCHEMA, "s": cfg.s, "seed": cfg.seed, **report.to_json()}, stream)
    stream.write("\n")
    return 0 if report.passed else 1


# --- parser -------------------------------------------------------------------

class UsageError(Exception):
    pass


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


VERIFY_HELP = """\
CSV columns per check:
  clt         s,kolmogorov,scaled,mean,stddev,envelope,pass   (default --s 10..60)
  pitman      s,max_residual,bound,local_residual,pass        (default --s 2..400)
  roots       s,degree,max_imag,max_root,pass                 (default --s 2..60)
  tail        s,tail_mass,log_tail_mass                       (default --s 50..300)
  mixing      x,quadrature,phi,abs_error,pass                 (default --x -3..3)
  ykdiag      s,max_residual_window,max_residual_all,envelope,pass (default --s 50..300)
  cclt-bound  s,k_min,k_max,max_factor_sqrt_s,[effective_K_lower,]pass (default --s 8..400)
"""


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corelimit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("enumerate", help="list (s,s+1)-cores with distinct parts",
                       description="text lines: '<parts> <size>'; csv columns: parts,k,size")
    e.add_argument("--s", type=positive_int, required=True)
    e.add_argument("--k", type=int)
    e.add_argument("--count-only", action="store_true", help="print C(s-k,k) or Fib(s+1)")
    e.add_argument("--format", choices=("text", "csv", "json"), default="text")
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)

    d = sub.add_parser("dist", help="exact size distribution",
                       description="json (default) or csv columns: size,count")
    d.add_argument("--s", type=positive_int, required=True)
    d.add_argument("--k", type=int)
    d.add_argument("--moments", action="store_true", help="add exact mean and variance")
    d.add_argument("--format", choices=("json", "csv"), default="json")
    d.add_argument("--out")
    d.set_defaults(func=cmd_dist)

    v = sub.add_parser("verify", help="run a verification sweep",
                       formatter_class=argparse.RawDescriptionHelpFormatter, description=VERIFY_HELP)
    v.add_argument("check", choices=sorted(VERIFIERS))
    v.add_argument("--s", type=parse_int_range, help="A..B inclusive or a single value")
    v.add_argument("--x", type=parse_float_range, help="A..B inclusive or a single value")
    v.add_argument("--step", type=float, default=0.5, help="grid step for --x (default 0.5)")
    v.add_argument("--eps", type=float, help=f"tail window half-width (default {TAIL_EPS:.6f})")
    v.add_argument("--effective-k", action="store_true",
                   help="cclt-bound: add a lower estimate of the absolute constant K")
    v.add_argument("--format", choices=("csv", "json"), default="csv")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    sm = sub.add_parser("sample", help="seeded uniform samples of core sizes",
                        description="csv: '# schema s seed n' header line, then a 'size' column")
    sm.add_argument("--s", type=positive_int, required=True)
    sm.add_argument("--n", type=positive_int, required=True)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--ks", action="store_true", help="KS test against the exact size CDF")
    sm.add_argument("--format", choices=("csv", "json"), default="csv")
    sm.add_argument("--out")
    sm.set_defaults(func=cmd_sample)
    return p


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse takes "-3..3" for an option; turn "--x -3..3" into "--x=-3..3"
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--x", "--s", "--eps"):
            nxt = next(it, None)
            if nxt is not None and nxt[:1] == "-" and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(sys.argv[1:] if argv is None else argv))
    if getattr(args, "step", 1.0) <= 0:
        parser.error("--step must be positive")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    return 2


if __name__ == "__main__":
    sys.exit(main())
