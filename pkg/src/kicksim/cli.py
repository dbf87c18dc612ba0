"""Command line: ``kicksim run | verify | spectrum | defaults``.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 numerical
guard tripped, 4 verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import config as cfgmod
from .errors import NumericalGuardError

OK, INTERNAL, INVALID, GUARD, FAILED = 0, 1, 2, 3, 4
LOCK = ".kicksim.lock"


def _round(obj):
    """Recursively round floats to 12 significant digits; NaN/inf become null."""
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float):
        return float(f"{obj:.12g}") if math.isfinite(obj) else None
    return obj


def dump_json(obj, fh) -> None:
    json.dump(_round(obj), fh, indent=2, sort_keys=True)
    fh.write("\n")


def _write_patterns(columns: dict, path: Path) -> None:
    names = list(columns)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*(columns[k] for k in names)):
            w.writerow([f"{v:.12g}" for v in row])


def _resolve_config(name: str) -> Path:
    path = Path(name)
    if not path.is_file():
        found = cfgmod.bundled(name)
        if found is not None:
            return found
    return path


def cmd_run(args) -> int:
    from .experiment import run_experiment

    try:
        cfg = cfgmod.read_config(_resolve_config(args.config))
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise cfgmod.ConfigError("--seed", "must fit in 64 unsigned bits")
            cfg = cfgmod.ExperimentConfig(**{**cfg.__dict__, "seed": args.seed})
    except cfgmod.ConfigError as err:
        print(f"invalid config: {err}", file=sys.stderr)
        return INVALID
    out = Path(args.out or cfg.output_dir)
    try:
        result = run_experiment(cfg, threads=args.threads)
    except NumericalGuardError as err:
        print(f"numerical guard: {type(err).__name__}: {err}", file=sys.stderr)
        return GUARD

    out.mkdir(parents=True, exist_ok=True)
    lock = out / LOCK
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        print(f"output directory {out} is locked by another run ({lock})", file=sys.stderr)
        return INVALID
    os.close(fd)
    try:
        with tempfile.TemporaryDirectory(dir=out, prefix=".tmp-") as tmp:
            tmp = Path(tmp)
            _write_patterns(result.columns, tmp / "patterns.csv")
            with open(tmp / "report.json", "w") as fh:
                dump_json(result.report, fh)
            if result.samples is not None:
                result.samples.write_csv(tmp / "samples.csv")
                with open(tmp / "histogram.json", "w") as fh:
                    dump_json(result.samples.histogram_json(), fh)
            for f in sorted(tmp.iterdir()):
                os.replace(f, out / f.name)
    finally:
        lock.unlink(missing_ok=True)
    rep = result.report
    print(f"wrote {out}: unconditioned visibility {rep['visibility']['unconditioned']:.4f}")
    return OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}", file=sys.stderr)
        return INVALID
    if args.sigma is not None and not args.sigma > 0:
        print("--sigma must be positive", file=sys.stderr)
        return INVALID
    verdict = run_suite(args.suite, sigma=args.sigma, threads=args.threads)
    data = verdict.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            dump_json(data, fh)
    if args.json:
        dump_json(data, sys.stdout)
    else:
        for c in verdict.checks:
            v = c.value if isinstance(c.value, str) else f"{c.value:.6g}"
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {v} ({c.threshold})")
        print(f"suite {verdict.suite}: {'PASS' if verdict.passed else 'FAIL'}")
    return OK if verdict.passed else FAILED


def cmd_spectrum(args) -> int:
    from .kicks import kick_spectrum

    if args.n < 2:
        print(f"n must be an integer >= 2, got {args.n}", file=sys.stderr)
        return INVALID
    if not (args.d > 0 and math.isfinite(args.d)):
        print(f"d must be positive, got {args.d}", file=sys.stderr)
        return INVALID
    spec = kick_spectrum(args.n, args.d, folded=args.folded)
    rows = [(k.index, str(k.fraction), k.momentum, k.probability) for k in spec.kicks]
    if args.json:
        dump_json({"n": spec.n, "d": spec.d, "folded": spec.folded,
                   "kicks": [{"index": i, "fraction_h_over_d": f, "momentum": p,
                              "probability": q} for i, f, p, q in rows]}, sys.stdout)
        return OK
    print(f"{'j':>3}  {'kick (h/d)':>10}  {'momentum':>14}  {'prob':>8}")
    for i, f, p, q in rows:
        print(f"{i:>3}  {f:>10}  {p:>14.10f}  {q:>8.5f}")
    return OK


def cmd_defaults(args) -> int:
    text = cfgmod.defaults_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kicksim", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    threads_help = "worker threads for sampling (default: $KICKSIM_THREADS or 1)"

    r = sub.add_parser("run", help="run an experiment from a config file",
                       epilog="config keys and defaults:\n\n" + cfgmod.defaults_text(),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    r.add_argument("--config", required=True,
                   help="config path, or name of a bundled config (two_slit, three_slit, ...)")
    r.add_argument("--out", help="output directory (default: [output] dir)")
    r.add_argument("--seed", type=int, help="override [montecarlo] seed")
    r.add_argument("--threads", type=int, help=threads_help)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run an acceptance suite")
    v.add_argument("suite", help="equivalence, eraser, spectrum, pspace, montecarlo, "
                                 "hygiene or all")
    v.add_argument("--json", action="store_true", help="print the verdict as JSON")
    v.add_argument("--out", help="also write the verdict JSON to this file")
    v.add_argument("--sigma", type=float, help="slit width for the equivalence checks "
                                               "(default d/20)")
    v.add_argument("--threads", type=int, help=threads_help)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="print the kick spectrum for n slits")
    s.add_argument("n", type=int, help="number of slits")
    s.add_argument("--d", type=float, default=1.0, help="slit spacing (default 1)")
    s.add_argument("--folded", action="store_true",
                   help="fold kicks into (-h/2d, h/2d] (default: j h / n d)")
    s.add_argument("--json", action="store_true", help="print JSON instead of a table")
    s.set_defaults(func=cmd_spectrum)

    g = sub.add_parser("defaults", help="print the defaults config file")
    g.add_argument("--out", help="write to this file instead of stdout")
    g.set_defaults(func=cmd_defaults)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalGuardError as err:
        print(f"numerical guard: {type(err).__name__}: {err}", file=sys.stderr)
        return GUARD
    except Exception as err:  # noqa: BLE001
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
