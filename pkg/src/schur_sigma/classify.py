"""The 19-class catalog of 2-generated 3-groups H with D_4(H) = 1,
Massey-relator classification, and IPADs.

Every such H (with graded Zassenhaus dimensions starting 2, 1) is the
quotient of Fbar = F_2 / D_4(F_2) (order 3^7) by a subspace of dimension
0, 1 or 2 of gr_3 = D_3(Fbar), a 4-dimensional F_3-space with basis

    b1 = a1^3,  b2 = a2^3,  b3 = [[a1,a2],a1],  b4 = [[a1,a2],a2]

for minimal generators a1, a2 of Fbar.  Automorphisms of Fbar act on
gr_3 through GL_2(F_3); subspaces in one orbit give isomorphic
quotients, so the catalog is built from one quotient per orbit and the
orbit representative doubles as the stable class label.

A Massey relator with pairing exponents (e111, e222, e112, e221) has
gr_3 coordinate vector (-e111, -e222, -e112, +e221); classification of
a record spans the two relator vectors and looks up the orbit.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

from . import modp
from . import pcgroup as pg
from . import filtrations as fl
from . import schur as sc


P = 3
GR3_DIM = 4


# -- the ambient group Fbar and its gr_3 structure -----------------------------


def ambient_group():
    """Fbar = F_2 / D_4(F_2), order 3^7, standardized."""
    F = sc.free_quotient(P, 2, sc.zassenhaus_recipe(4), 3)
    ch = fl.zassenhaus_chain(F)
    if F.order != 3 ** 7 or ch.graded_dims != (2, 1, 4):
        raise AssertionError("ambient group has wrong graded structure")
    return F


def _coords_in(H, x):
    """Coordinates of x on the canonical generators of an elementary
    abelian central subgroup handle H (leading-coefficient reading)."""
    G = H.owner
    coords = []
    for lead in sorted(H.slots):
        c = x[lead]
        coords.append(c)
        if c:
            x = G.mult(x, G.power(H.slots[lead], P - c))
    if any(x):
        raise ValueError("element does not lie in the subgroup")
    return tuple(coords)


class _Gr3:
    """gr_3 of the ambient group with its fixed reference basis."""

    def __init__(self):
        F = ambient_group()
        self.F = F
        self.D3 = fl.zassenhaus_term(F, 3)
        if self.D3.dim() != GR3_DIM:
            raise AssertionError("gr_3 must be 4-dimensional")
        a1, a2 = F.gen(0), F.gen(1)
        c = F.commutator(a1, a2)
        self.basis = (
            F.power(a1, P),
            F.power(a2, P),
            F.commutator(c, a1),
            F.commutator(c, a2),
        )
        m = tuple(_coords_in(self.D3, b) for b in self.basis)
        if modp.rank(m, P) != GR3_DIM:
            raise AssertionError("basis of gr_3 is degenerate")
        self._mt = tuple(tuple(m[i][j] for i in range(GR3_DIM))
                         for j in range(GR3_DIM))

    def to_coords(self, x):
        """Coordinates of x in the reference basis."""
        c = _coords_in(self.D3, x)
        v = modp.solve(self._mt, c, P)
        assert v is not None
        return v

    def from_coords(self, v):
        F = self.F
        x = F.identity
        for i in range(GR3_DIM):
            if v[i]:
                x = F.mult(x, F.power(self.basis[i], v[i]))
        return x


_GR3 = None


def _gr3():
    global _GR3
    if _GR3 is None:
        _GR3 = _Gr3()
    return _GR3


def induced_action():
    """[(M, T)] for all 48 M in GL_2(F_3): T is the induced action on
    gr_3 in the reference basis, found by evaluating the basis words at the
    lifted generator images inside the ambient group (never symbolically).
    """
    g = _gr3()
    F = g.F
    a1, a2 = F.gen(0), F.gen(1)
    out = []
    for M in modp.gl_elements(P, 2):
        y1 = F.mult(F.power(a1, M[0][0]), F.power(a2, M[0][1]))
        y2 = F.mult(F.power(a1, M[1][0]), F.power(a2, M[1][1]))
        c = F.commutator(y1, y2)
        imgs = (
            F.power(y1, P),
            F.power(y2, P),
            F.commutator(c, y1),
            F.commutator(c, y2),
        )
        T = tuple(g.to_coords(t) for t in imgs)
        out.append((M, T))
    return out


_ACTION = None


def _action_matrices():
    global _ACTION
    if _ACTION is None:
        _ACTION = tuple(T for _, T in induced_action())
    return _ACTION


def _transform(rows, T):
    moved = [tuple(sum(v[j] * T[j][k] for j in range(GR3_DIM)) % P
                   for k in range(GR3_DIM)) for v in rows]
    return modp.span_canonical(moved, P, GR3_DIM)


def orbit_representative(rows):
    """Lexicographically least canonical form in the GL_2-orbit."""
    rows = modp.span_canonical(rows, P, GR3_DIM)
    return min(_transform(rows, T) for T in _action_matrices())


# -- catalog -------------------------------------------------------------------


@dataclass
class CatalogEntry:
    label: str
    group: object                # PcGroup, standardized
    order: int
    subspace_dim: int
    orbit_rep: tuple             # canonical rows spanning the subspace
    abelianization: tuple
    aut_order: int
    ipad: "IPAD"
    gap_alias: object            # [order, index] list, or None


def _label_for(dim, rep):
    if dim == 0:
        return "d0"
    return f"d{dim}-" + ".".join("".join(str(c) for c in row) for row in rep)


def _quotient_by_rep(rep):
    g = _gr3()
    F = g.F
    gens = [g.from_coords(v) for v in rep]
    N = pg.normal_closure(F, gens)
    Q, _ = pg.quotient(F, N)
    S, _, _ = pg.standardize(Q)
    return S


_CATALOG = None


def build_catalog():
    """The 19 catalog entries: 1 + 5 + 13 classes of subspace dimension
    0 / 1 / 2, pairwise non-isomorphic, in deterministic order."""
    global _CATALOG
    if _CATALOG is not None:
        return _CATALOG
    entries = []
    for dim in (0, 1, 2):
        reps = sorted({orbit_representative(rows)
                       for rows in modp.subspaces(P, GR3_DIM, dim)})
        batch = []
        for rep in reps:
            S = _quotient_by_rep(rep)
            batch.append(CatalogEntry(
                label=_label_for(dim, rep),
                group=S,
                order=S.order,
                subspace_dim=dim,
                orbit_rep=rep,
                abelianization=tuple(pg.abelian_invariants(S)),
                aut_order=pg.automorphism_count(S),
                ipad=ipad(S),
                gap_alias=None,
            ))
        # Distinct orbits must give non-isomorphic quotients; an explicit
        # isomorphism test is only needed when all cheap invariants tie.
        for i, e in enumerate(batch):
            for other in batch[:i]:
                same = (e.abelianization == other.abelianization
                        and e.aut_order == other.aut_order
                        and e.ipad == other.ipad)
                if same and pg.is_isomorphic(e.group, other.group):
                    raise AssertionError(
                        "distinct orbits gave isomorphic quotients")
        entries.extend(batch)
    for entry in entries:
        fingerprint_and_alias(entry)
    _CATALOG = entries
    return entries


def catalog_by_label():
    return {e.label: e for e in build_catalog()}


def catalog_by_alias():
    out = {}
    for e in build_catalog():
        if isinstance(e.gap_alias, list):
            out[tuple(e.gap_alias)] = e
    return out


def catalog_to_json():
    """Deterministic JSON export of the catalog."""
    rows = []
    for e in build_catalog():
        rows.append({
            "label": e.label,
            "order": e.order,
            "subspace_dim": e.subspace_dim,
            "orbit_rep": [list(r) for r in e.orbit_rep],
            "abelianization": list(e.abelianization),
            "aut_order": e.aut_order,
            "ipad": e.ipad.render(),
            "gap_alias": e.gap_alias,
        })
    return json.dumps(rows, indent=2)


# -- Massey records and classification -----------------------------------------


MASSEY_CSV_HEADER = ("discriminant",
                     "e111_1", "e222_1", "e112_1", "e221_1",
                     "e111_2", "e222_2", "e112_2", "e221_2")


@dataclass(frozen=True)
class MasseyRecord:
    discriminant: int
    exponents: tuple             # (e111_1, e222_1, e112_1, e221_1,
                                 #  e111_2, e222_2, e112_2, e221_2)

    def __post_init__(self):
        if self.discriminant >= 0:
            raise ValueError("discriminant must be negative")
        if self.discriminant % 4 not in (0, 1):
            raise ValueError("discriminant must be 0 or 1 mod 4")
        if len(self.exponents) != 8:
            raise ValueError("eight pairing exponents required")
        if any(e % P != e for e in self.exponents):
            raise ValueError("pairing exponents must be residues mod 3")


def relator_vector(e111, e222, e112, e221):
    """gr_3 coordinates of the relator with the given pairing values:
    the generator powers a_i^{-3e} land in the cube coordinates with
    sign -e, the [[a1,a2],a1] exponent is -e112 and the [[a1,a2],a2]
    exponent is +e221."""
    return ((-e111) % P, (-e222) % P, (-e112) % P, e221 % P)


def record_subspace(rec):
    v1 = relator_vector(*rec.exponents[:4])
    v2 = relator_vector(*rec.exponents[4:])
    return modp.span_canonical((v1, v2), P, GR3_DIM)


def classify_record(rec):
    """The catalog label of the class determined by a MasseyRecord."""
    rep = orbit_representative(record_subspace(rec))
    dim = len(rep)
    return _label_for(dim, rep)


def read_massey_csv(path):
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != MASSEY_CSV_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(MASSEY_CSV_HEADER)}")
        for ln, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 9:
                raise ValueError(f"{path}:{ln}: expected 9 fields")
            try:
                disc = int(row[0])
                exps = tuple(int(x) for x in row[1:])
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: {exc}") from None
            try:
                records.append(MasseyRecord(disc, exps))
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: {exc}") from None
    return records


# -- IPAD ----------------------------------------------------------------------


@dataclass(frozen=True)
class IPAD:
    top: tuple                   # abelian invariants of G
    subquotients: tuple          # sorted 4-tuple of invariants of the
                                 # index-3 subgroups

    def render(self):
        def one(t):
            return "[" + ",".join(str(x) for x in t) + "]"

        parts = []
        i = 0
        subs = self.subquotients
        while i < len(subs):
            j = i
            while j < len(subs) and subs[j] == subs[i]:
                j += 1
            parts.append(one(subs[i]) + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        return one(self.top) + "; " + ",".join(parts)


def ipad(group):
    """Abelianization data of the group and its four index-3 subgroups."""
    if pg.generator_rank(group) != 2:
        raise ValueError("IPAD requires generator rank 2")
    fr = pg.frattini_subgroup(group)
    Q, proj = pg.quotient(group, fr)
    sec = pg.quotient_section(group, fr, Q)
    subq = []
    for v in ((1, 0), (0, 1), (1, 1), (1, 2)):
        lift = sec(v)
        H = pg.subgroup(group, [lift] + list(fr.canonical_gens))
        if H.size * P != group.order:
            raise AssertionError("expected an index-3 subgroup")
        inv = tuple(sorted(pg.abelian_invariants(group, H), reverse=True))
        subq.append(inv)
    top = tuple(sorted(pg.abelian_invariants(group), reverse=True))
    return IPAD(top=top, subquotients=tuple(sorted(subq)))


# -- external aliases ----------------------------------------------------------


def _alias_table_path():
    override = os.environ.get("SCHUR_SIGMA_DATA")
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "data", "aliases.json")


_ALIAS_TABLE = None


def load_alias_table():
    global _ALIAS_TABLE
    if _ALIAS_TABLE is None:
        with open(_alias_table_path()) as fh:
            _ALIAS_TABLE = json.load(fh)
    return _ALIAS_TABLE


def fingerprint(entry):
    """(order, abelianization, |Aut|, IPAD) — the alias lookup key."""
    return (entry.order, list(entry.abelianization), entry.aut_order,
            entry.ipad.render())


def fingerprint_and_alias(entry):
    """Attach the external small-group alias recorded for the entry's
    canonical orbit label.  The table also records the fingerprint the
    labelled class had when the alias was assigned; any disagreement
    with the freshly computed invariants means the table is stale and
    raises rather than silently mislabelling."""
    table = load_alias_table()
    hits = [row for row in table if row["label"] == entry.label]
    if not hits:
        entry.gap_alias = None
        return entry
    if len(hits) > 1:
        raise ValueError(f"alias table lists {entry.label} more than once")
    row = hits[0]
    recorded = (row["order"], row["abelianization"],
                row["aut_order"], row["ipad"])
    if recorded != fingerprint(entry):
        raise ValueError(
            f"alias table fingerprint for {entry.label} does not match "
            f"the computed invariants {fingerprint(entry)}")
    entry.gap_alias = row["alias"]
    return entry


__all__ = [
    "CatalogEntry", "MasseyRecord", "IPAD",
    "ambient_group", "induced_action", "orbit_representative",
    "build_catalog", "catalog_by_label", "catalog_by_alias",
    "catalog_to_json", "relator_vector", "record_subspace",
    "classify_record", "read_massey_csv", "ipad",
    "load_alias_table", "fingerprint", "fingerprint_and_alias",
    "MASSEY_CSV_HEADER",
]
