"""Command-line interface: screen discriminants, generate records."""

from __future__ import annotations

import argparse
import sys

from . import forms
from .backend import BackendError, BackendUnavailable
from .gp import GpBackend
from .pipeline import (BasisChoice, JobLog, read_discriminants, run_batch,
                       write_records_csv)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BACKEND = 2


def build_parser():
    p = argparse.ArgumentParser(
        prog="massey-datagen",
        description="Generate Massey pairing records for imaginary "
                    "quadratic fields with 3-rank-2 class group.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser(
        "screen",
        help="list fundamental discriminants with class group 3-rank 2 "
             "(native arithmetic, no backend needed)")
    s.add_argument("--max-abs", type=int, required=True,
                   help="largest |d| to consider")
    s.add_argument("--min-abs", type=int, default=3)
    s.add_argument("--limit", type=int, default=0,
                   help="stop after this many hits (0 = no limit)")
    s.add_argument("--out", help="write one discriminant per line here "
                                 "instead of stdout")

    g = sub.add_parser(
        "generate",
        help="run the pairing pipeline over a discriminant list and "
             "write the classifier CSV")
    g.add_argument("--input", required=True,
                   help="discriminant list (plain or CSV with a "
                        "discriminant column)")
    g.add_argument("--out", required=True, help="output CSV path")
    g.add_argument("--log", required=True,
                   help="resumable job log (JSON lines)")
    g.add_argument("--gp", default="gp", help="GP interpreter executable")
    g.add_argument("--timeout", type=int, default=600,
                   help="per-backend-call timeout in seconds")
    g.add_argument("--x1-extension", type=int, default=0)
    g.add_argument("--x2-extension", type=int, default=1)
    g.add_argument("--first-solution", type=int, default=0)
    return p


def _cmd_screen(args):
    if args.max_abs < args.min_abs or args.min_abs < 3:
        print("error: need 3 <= min-abs <= max-abs", file=sys.stderr)
        return EXIT_INPUT
    hits = forms.screen_range(-args.max_abs, -args.min_abs, rank=2)
    if args.limit:
        hits = hits[:args.limit]
    text = "\n".join(str(d) for d in hits)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + ("\n" if text else ""))
        print(f"# {len(hits)} discriminants written to {args.out}")
    else:
        print(text)
    return EXIT_OK


def _cmd_generate(args):
    try:
        discs = read_discriminants(args.input)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        backend = GpBackend(gp_path=args.gp, timeout=args.timeout)
    except BackendUnavailable as exc:
        print(f"error: backend unavailable: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    choice = BasisChoice(x1_extension=args.x1_extension,
                         x2_extension=args.x2_extension,
                         first_solution=args.first_solution)
    log = JobLog(args.log)

    def progress(job):
        print(f"{job.discriminant}: {job.status}"
              + (f" ({job.detail})" if job.detail else ""))

    try:
        run_batch(discs, backend, log, choice=choice, progress=progress)
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    rows = log.done_records()
    write_records_csv(rows, args.out)
    print(f"# {len(rows)} records written to {args.out}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "screen":
        return _cmd_screen(args)
    return _cmd_generate(args)


if __name__ == "__main__":
    sys.exit(main())
