#!/usr/bin/env python3
"""Produce recursive powerfulness verdicts for the order-243 catalog types.

Runs powerfulness_recursion for every order-243 type with E = D2, plus
the D3 run for the one type whose D2 answer is negative, under a
per-type wall-clock budget (default 3600 s).  A type whose budget
expires is recorded as `budget_exceeded` with verdict `inconclusive` —
never guessed.  Results land in results/recursion_verdicts.json, which
tests/test_acceptance.py consumes.

Usage: python3 scripts/run_recursion.py [--budget SECONDS] [--only ALIAS ...]
"""

import argparse
import json
import logging
import os
import signal
import time

from schur_sigma import classify, schur

OUT = os.path.join(os.path.dirname(__file__), os.pardir,
                   "results", "recursion_verdicts.json")

JOBS = [((243, i), 2) for i in
        (2, 3, 4, 5, 6, 7, 8, 9, 13, 14, 15, 17, 18)] + [((243, 13), 3)]


class _Budget(Exception):
    pass


def _alarm(signum, frame):
    raise _Budget()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=3600,
                    help="seconds per type")
    ap.add_argument("--only", nargs="*", type=str, default=None,
                    help='restrict to aliases like "243,13"')
    args = ap.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    cat = classify.catalog_by_alias()
    only = None
    if args.only:
        only = {tuple(int(t) for t in a.split(",")) for a in args.only}

    rows = []
    if os.path.exists(OUT):
        with open(OUT) as fh:
            rows = json.load(fh)
    done = {(tuple(r["alias"]), r["subgroup"]) for r in rows}

    signal.signal(signal.SIGALRM, _alarm)
    for alias, sub in JOBS:
        if only is not None and alias not in only:
            continue
        if (alias, sub) in done:
            continue
        entry = cat[alias]
        t0 = time.time()
        signal.alarm(args.budget)
        try:
            v = schur.powerfulness_recursion(
                entry.group, schur.zassenhaus_recipe(sub),
                type_label=entry.label)
            row = dict(v.to_json(), alias=list(alias), subgroup=sub,
                       seconds=round(time.time() - t0, 1),
                       budget_exceeded=False)
        except _Budget:
            row = {"type": entry.label, "E": f"D{sub}",
                   "verdict": "inconclusive", "max_rank": None,
                   "levels_explored": None, "groups_examined": None,
                   "alias": list(alias), "subgroup": sub,
                   "seconds": round(time.time() - t0, 1),
                   "budget_exceeded": True}
        finally:
            signal.alarm(0)
        print("RESULT", alias, f"D{sub}", row["verdict"],
              row["seconds"], "s", flush=True)
        rows.append(row)
        os.makedirs(os.path.dirname(OUT), exist_ok=True)
        with open(OUT, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
