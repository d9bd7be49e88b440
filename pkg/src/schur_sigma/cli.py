"""Command-line surface for the catalog, classification and report tools.

Subcommands
-----------
catalog      build the 19-entry catalog and emit it as JSON
classify     map a Massey-record CSV to catalog labels
ipad         print the IPAD of a catalog entry or a pc-presentation file
descendants  list immediate descendants of a pc-presentation file
powerful     run the powerfulness recursion for one catalog type
report       observed-vs-expected frequency table from a label CSV
selfcheck    run the built-in invariant suite

Exit status: 0 on success, 1 on an input or usage error, 2 when a
`powerful` run ends inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import classify as cl
from . import covers as cv
from . import heuristics as hx
from . import modp
from . import pcgroup as pg
from . import schur as sc

log = logging.getLogger("schur_sigma")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONCLUSIVE = 2

SUBGROUP_RECIPES = {
    "D2": lambda: sc.zassenhaus_recipe(2),
    "D3": lambda: sc.zassenhaus_recipe(3),
    "D4": lambda: sc.zassenhaus_recipe(4),
}

LABELS_CSV_HEADER = ("discriminant", "label")


class CliError(Exception):
    """Input or usage error; message is printed to stderr, exit code 1."""


def _write_out(text, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _read_group_file(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(str(exc)) from None
    try:
        return pg.from_text(text)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def _entry_for_type(spec):
    """Catalog entry for a `--type` argument: either a catalog label
    (e.g. d2-1001.0111) or an alias written 243,5 or [243,5]."""
    by_label = cl.catalog_by_label()
    if spec in by_label:
        return by_label[spec]
    raw = spec.strip().strip("[]")
    parts = [x.strip() for x in raw.split(",")]
    if len(parts) == 2 and all(x.lstrip("-").isdigit() for x in parts):
        alias = (int(parts[0]), int(parts[1]))
        entry = cl.catalog_by_alias().get(alias)
        if entry is not None:
            return entry
    valid = ", ".join(sorted(by_label))
    raise CliError(f"unknown type {spec!r}; valid labels: {valid}")


# -- subcommands ---------------------------------------------------------------


def cmd_catalog(args):
    _write_out(cl.catalog_to_json() + "\n", args.out)
    return EXIT_OK


def cmd_classify(args):
    try:
        records = cl.read_massey_csv(args.infile)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc)) from None
    log.info("classifying %d records", len(records))
    # Classification is a pure per-record map; partition across the
    # worker pool and merge in input order.
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        labels = list(pool.map(cl.classify_record, records))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(LABELS_CSV_HEADER)
    for rec, label in zip(records, labels):
        writer.writerow([rec.discriminant, label])
    _write_out(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_ipad(args):
    if args.type is not None:
        entry = _entry_for_type(args.type)
        rendered = entry.ipad.render()
    else:
        G = _read_group_file(args.group)
        try:
            rendered = cl.ipad(G).render()
        except ValueError as exc:
            raise CliError(f"{args.group}: {exc}") from None
    _write_out(rendered + "\n", args.out)
    return EXIT_OK


def cmd_descendants(args):
    G = _read_group_file(args.group)
    if args.step < 1:
        raise CliError("--step must be at least 1")
    desc = cv.immediate_descendants(G, args.step)
    log.info("%d immediate descendants of step %d", len(desc), args.step)
    parts = [f"# {len(desc)} immediate descendants, step {args.step}\n"]
    for K in desc:
        parts.append(pg.to_text(K))
    _write_out("\n".join(parts), args.out)
    return EXIT_OK


def cmd_powerful(args):
    entry = _entry_for_type(args.type)
    recipe = SUBGROUP_RECIPES[args.subgroup]()
    log.info("powerfulness recursion for %s with E = %s",
             entry.label, args.subgroup)
    verdict = sc.powerfulness_recursion(
        entry.group, recipe, max_class=args.max_class,
        type_label=entry.label)
    doc = verdict.to_json()
    doc["alias"] = entry.gap_alias
    _write_out(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_INCONCLUSIVE if verdict.verdict == "inconclusive" else EXIT_OK


def _read_labels_csv(path):
    pairs = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise CliError(str(exc)) from None
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != LABELS_CSV_HEADER:
            raise CliError(
                f"{path}: expected header {','.join(LABELS_CSV_HEADER)}")
        for ln, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise CliError(f"{path}:{ln}: expected 2 fields")
            try:
                disc = int(row[0])
            except ValueError:
                raise CliError(
                    f"{path}:{ln}: bad discriminant {row[0]!r}") from None
            pairs.append((disc, row[1].strip()))
    return pairs


def cmd_report(args):
    pairs = _read_labels_csv(args.infile)
    model = hx.expected_model()
    try:
        report = hx.frequency_report(pairs, model)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    if args.format == "json":
        text = json.dumps(report.to_json_dict(), indent=2) + "\n"
    else:
        text = report.render_markdown()
    _write_out(text, args.out)
    return EXIT_OK


def cmd_selfcheck(args):
    failures = 0

    def check(name, fn):
        nonlocal failures
        try:
            fn()
        except Exception as exc:       # noqa: BLE001 - report and continue
            failures += 1
            print(f"FAIL {name}: {exc}")
        else:
            print(f"ok   {name}")

    def ambient():
        cl.ambient_group()             # raises on wrong graded structure

    def orbits():
        for dim, expect in ((1, 5), (2, 13)):
            reps = {cl.orbit_representative(rows)
                    for rows in modp.subspaces(3, 4, dim)}
            if len(reps) != expect:
                raise AssertionError(
                    f"dim {dim}: {len(reps)} orbits, expected {expect}")

    def catalog():
        cat = cl.build_catalog()
        by_order = {}
        for e in cat:
            by_order[e.order] = by_order.get(e.order, 0) + 1
        if by_order != {243: 13, 729: 5, 2187: 1}:
            raise AssertionError(f"bad class counts {by_order}")
        missing = [e.label for e in cat if not isinstance(e.gap_alias, list)]
        if missing:
            raise AssertionError(f"entries without alias: {missing}")

    def m_values():
        d4 = sc.zassenhaus_recipe(4)
        want = {243: 2, 729: 1, 2187: 0}
        for e in cl.build_catalog():
            m = sc.rel_rank(e.group, d4)
            if m != want[e.order]:
                raise AssertionError(
                    f"{e.label}: m = {m}, expected {want[e.order]}")

    def model_mass():
        model = hx.expected_model()
        total = sum(e.mu_cond for e in model.entries)
        if total != 1:
            raise AssertionError(f"sum of mu_cond is {total}, not 1")

    check("ambient group graded dimensions", ambient)
    check("subspace orbit counts 5 and 13", orbits)
    check("catalog class counts and aliases", catalog)
    check("relation-rank values per order stratum", m_values)
    check("expected-model mass sums to 1", model_mass)
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_INPUT
    print("all checks passed")
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="schur-sigma",
        description="Catalog, classification and frequency tools for "
                    "2-generated 3-groups with trivial fourth Zassenhaus term.")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="increase log verbosity (repeatable)")
    parser.add_argument("--threads", type=int,
                        default=os.cpu_count() or 1, metavar="N",
                        help="worker pool size for batch subcommands")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("catalog", help="emit the 19-entry catalog as JSON")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=cmd_catalog)

    p = sub.add_parser("classify", help="label a Massey-record CSV")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("ipad", help="print an IPAD")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--group", metavar="FILE",
                     help="pc-presentation file")
    grp.add_argument("--type", metavar="LABEL",
                     help="catalog label or alias like 243,5")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=cmd_ipad)

    p = sub.add_parser("descendants",
                       help="immediate descendants of a pc-presentation")
    p.add_argument("--group", required=True, metavar="FILE")
    p.add_argument("--step", type=int, required=True, metavar="K")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=cmd_descendants)

    p = sub.add_parser("powerful",
                       help="powerfulness recursion for a catalog type")
    p.add_argument("--type", required=True, metavar="LABEL")
    p.add_argument("--subgroup", required=True,
                   choices=sorted(SUBGROUP_RECIPES))
    p.add_argument("--max-class", type=int, default=12, metavar="N")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=cmd_powerful)

    p = sub.add_parser("report", help="observed-vs-expected frequency table")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--format", choices=("markdown", "json"),
                   default="markdown")
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("selfcheck", help="run the built-in invariant suite")
    p.set_defaults(fn=cmd_selfcheck)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
