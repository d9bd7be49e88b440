"""Per-field record generation and batch orchestration.

For each negative fundamental discriminant d whose class group has
3-rank exactly 2, the pipeline computes the eight triple-pairing values

    e111_l = <<x1,x1,x1>, b_l>   e112_l = <<x1,x1,x2>, b_l>
    e222_l = <<x2,x2,x2>, b_l>   e221_l = <<x2,x2,x1>, b_l>

for the two dual-basis elements b_1, b_2, and writes one CSV row per
field in the layout consumed by the classification tool.  A single
pairing value <<x,x,y>, (a,J)> is computed in three backend steps:

  1. solve  i_x(J) + (1 - rho_x)^2 I = 0  for the class I in Cl(L_x);
  2. pick the solution I whose ideal is principal with a generator t
     satisfying N_{L_x/K}(t) = a u^3 for a unit u;
  3. evaluate  rho_y^{-1}(Art_{L_y}(N_{L_x/K}(I) * J))  in Z/3.

The CSV layout is duplicated here on purpose: this package talks to the
classifier only through the file format, not through imports.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

from .backend import Backend, BackendError

MASSEY_CSV_HEADER = ("discriminant",
                     "e111_1", "e222_1", "e112_1", "e221_1",
                     "e111_2", "e222_2", "e112_2", "e221_2")


@dataclass(frozen=True)
class BasisChoice:
    """Which cubic extension realizes each basis class, and which
    solver solution to start from.  Different consistent choices move
    the record by a basis change of the relator space, which the
    classifier quotients out."""
    x1_extension: int = 0
    x2_extension: int = 1
    first_solution: int = 0


@dataclass
class FieldJob:
    discriminant: int
    status: str = "pending"        # pending | done | rejected | failed
    exponents: tuple = ()          # 8 values in header order when done
    detail: str = ""
    choice: BasisChoice = field(default_factory=BasisChoice)


def generate_record(d, backend: Backend, choice: BasisChoice = None):
    """Run the three-step recipe for one field; returns the 8-tuple of
    exponents in MASSEY_CSV_HEADER order (without the discriminant).

    Raises ValueError when the field does not have 3-rank 2, and
    BackendError when a backend step fails.
    """
    if choice is None:
        choice = BasisChoice()
    if not (d < 0 and d % 4 in (0, 1)):
        raise ValueError(f"{d} is not a negative discriminant")

    K = backend.open_field(d)
    invs = backend.class_group_invariants(K)
    rank = sum(1 for v in invs if v % 3 == 0)
    if rank != 2:
        raise ValueError(
            f"discriminant {d} rejected: class group 3-rank is {rank}, "
            f"need exactly 2 (invariants {invs})")

    exts = backend.cubic_extensions(K)
    if len(exts) != 4:
        raise BackendError(
            "cubic_extensions",
            f"expected 4 unramified cyclic cubic extensions, got {len(exts)}")
    by_index = {e.index: e for e in exts}
    try:
        Lx = (by_index[choice.x1_extension], by_index[choice.x2_extension])
    except KeyError as exc:
        raise ValueError(f"basis choice names extension {exc} "
                         f"outside 0..3") from None

    duals = backend.dual_basis(K)
    if len(duals) != 2:
        raise BackendError("dual_basis",
                           f"expected 2 dual elements, got {len(duals)}")

    def pairing(xi, xj, J):
        """<<x_i, x_i, x_j>, (a, J)> in Z/3."""
        L, Ly = Lx[xi], Lx[xj]
        target = backend.transfer_class(L.handle, J)
        sols = backend.solve_augmentation_square(L.handle, target)
        if not sols:
            raise BackendError("matsolvemod",
                               "augmentation-square equation has no solution")
        start = choice.first_solution % len(sols)
        order = sols[start:] + sols[:start]
        for I in order:
            t = backend.pairing_generator(L.handle, J, I)
            if t is None:
                continue
            if backend.norm_is_a_times_cube_unit(L.handle, t, J):
                return backend.artin_symbol(L.handle, Ly.handle, I, J) % 3
        raise BackendError(
            "bnfisprincipal0",
            f"no solution among {len(sols)} gave a principal ideal whose "
            f"generator has norm a * u^3")

    out = []
    for J in duals:
        out += [pairing(0, 0, J), pairing(1, 1, J),
                pairing(0, 1, J), pairing(1, 0, J)]
    return tuple(out)


class JobLog:
    """Resumable line-oriented job log: one JSON object per line.

    A crashed batch is rerun with the same log path; fields already
    marked done or rejected are skipped."""

    def __init__(self, path):
        self.path = path
        self._seen = {}
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    self._seen[rec["d"]] = rec

    def finished(self, d):
        rec = self._seen.get(d)
        return rec is not None and rec["status"] in ("done", "rejected")

    def result(self, d):
        return self._seen.get(d)

    def record(self, job: FieldJob):
        rec = {"d": job.discriminant, "status": job.status,
               "exponents": list(job.exponents), "detail": job.detail}
        self._seen[job.discriminant] = rec
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")

    def done_records(self):
        """(discriminant, exponents) for completed fields, ascending
        by absolute value of the discriminant."""
        rows = [(d, tuple(rec["exponents"]))
                for d, rec in self._seen.items() if rec["status"] == "done"]
        rows.sort(key=lambda r: -r[0])
        return rows


def run_batch(discriminants, backend, log: JobLog,
              choice: BasisChoice = None, progress=None):
    """Process fields, skipping ones the log already settled; backend
    failures are logged as failed and do not stop the batch."""
    for d in discriminants:
        if log.finished(d):
            continue
        job = FieldJob(discriminant=d, choice=choice or BasisChoice())
        try:
            job.exponents = generate_record(d, backend, choice)
            job.status = "done"
        except ValueError as exc:
            job.status, job.detail = "rejected", str(exc)
        except BackendError as exc:
            job.status, job.detail = "failed", str(exc)
        log.record(job)
        if progress is not None:
            progress(job)


def read_discriminants(path):
    """Discriminants from a plain list (one integer per line, `#`
    comments allowed) or a CSV with a discriminant column (as in
    number-field database exports)."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        fh.seek(0)
        if "," in first and not _is_int_row(first):
            reader = csv.DictReader(fh)
            cols = [c for c in (reader.fieldnames or [])
                    if c.strip().lower() in ("discriminant", "disc", "d")]
            if not cols:
                raise ValueError(
                    f"{path}: no discriminant column in {reader.fieldnames}")
            for row in reader:
                out.append(int(row[cols[0]]))
        else:
            for n, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip().rstrip(",")
                if not line:
                    continue
                try:
                    out.append(int(line))
                except ValueError:
                    raise ValueError(
                        f"{path}:{n}: not an integer: {line!r}") from None
    return out


def _is_int_row(line):
    try:
        [int(tok) for tok in line.strip().split(",") if tok.strip()]
        return True
    except ValueError:
        return False


def write_records_csv(rows, path):
    """Write (discriminant, 8-tuple) rows in the classifier's format."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(MASSEY_CSV_HEADER)
        for d, exps in rows:
            if len(exps) != 8:
                raise ValueError(f"discriminant {d}: need 8 exponents, "
                                 f"got {len(exps)}")
            writer.writerow([d] + [e % 3 for e in exps])
