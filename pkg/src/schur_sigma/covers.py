"""p-cover, multiplicator, nucleus, and immediate descendants.

The cover of a d-generated group G of p-class j is built by the tails
method: one new central generator of exponent p per non-defining
relation of a standardized presentation, followed by enforcement of all
consistency test equations.  Each failing test contributes one F_p
relation among the tails (tail contributions are additive because tails
are central of exponent p); the dependent tails are eliminated by row
reduction.  The surviving tails span the multiplicator, and the nucleus
is P_j(cover).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import modp
from . import pcgroup as pg
from .isomorphism import _std


@dataclass(frozen=True)
class CoverData:
    base: object                 # PcGroup
    cover: object                # PcGroup
    projection: object           # GroupMap cover -> base
    multiplicator: object        # SubgroupHandle of cover
    nucleus: object              # SubgroupHandle of cover
    mu_rank: int
    nu_rank: int


GENERATOR_BOUND = 3


def _tails_presentation(S):
    """Extended presentation of S with one tail per non-defining relation.

    Returns (X, tail_rel): X a PcGroup on n + q generators (q tails,
    central, exponent p, possibly inconsistent), tail_rel the list of
    relation keys ("p", i) / ("c", i, j) in tail order.
    """
    n, p = S.n, S.p
    defining = set()
    for k in range(n):
        dfn = S.definitions[k]
        if dfn is None:
            continue
        if dfn[0] == "p":
            defining.add(("p", dfn[1]))
        else:
            defining.add(("c", dfn[1], dfn[2]))
    tail_rel = []
    for i in range(n):
        if ("p", i) not in defining:
            tail_rel.append(("p", i))
    for i in range(n):
        for j in range(i):
            if ("c", i, j) not in defining:
                tail_rel.append(("c", i, j))
    q = len(tail_rel)
    N = n + q
    tail_pos = {rel: n + t for t, rel in enumerate(tail_rel)}

    def ext(w, rel=None):
        v = list(w) + [0] * q
        if rel is not None and rel in tail_pos:
            v[tail_pos[rel]] = 1
        return tuple(v)

    powers = [ext(S.powers[i], ("p", i)) for i in range(n)]
    powers += [(0,) * N] * q
    comms = []
    for i in range(n):
        comms.append([ext(S.comms[i][j], ("c", i, j)) for j in range(i)])
    for t in range(q):
        comms.append([(0,) * N] * (n + t))
    X = pg.PcGroup(p, N, powers, comms)
    return X, tail_rel


def _tail_relations(X, n):
    """F_p relations among the tails from all consistency failures."""
    rows = []
    for fail in X.consistency_failures():
        lhs, rhs = fail[-2], fail[-1]
        if lhs[:n] != rhs[:n]:
            raise AssertionError("base presentation inconsistent")
        rows.append(tuple((a - b) % X.p for a, b in zip(lhs[n:], rhs[n:])))
    return rows


def p_cover(group):
    """CoverData for group; d(group) must be at most GENERATOR_BOUND."""
    got = group._attr_cache.get("p_cover")
    if got is not None:
        return got
    if pg.generator_rank(group) > GENERATOR_BOUND:
        raise ValueError(
            f"generator rank above the supported bound {GENERATOR_BOUND}")
    S, isoS, _dec = _std(group)
    n, p = S.n, S.p
    X, tail_rel = _tails_presentation(S)
    q = X.n - n
    rows = _tail_relations(X, n)
    red, pivots = modp.rref(rows, p) if rows else ((), ())
    free = [t for t in range(q) if t not in pivots]

    # substitution: pivot tail -> minus the free part of its rref row
    def reduce_tail(v):
        v = list(v)
        for r, c in zip(red, pivots):
            if v[c]:
                f = v[c]
                for k in range(q):
                    v[k] = (v[k] - f * r[k]) % p
                v[c] = 0  # r[c] == 1
        return [v[t] for t in free]

    qf = len(free)
    N = n + qf

    def rebuild(w):
        return tuple(list(w[:n]) + reduce_tail(w[n:]))

    powers = [rebuild(X.powers[i]) for i in range(n)]
    powers += [(0,) * N] * qf
    comms = [[rebuild(X.comms[i][j]) for j in range(i)] for i in range(n)]
    for t in range(qf):
        comms.append([(0,) * N] * (n + t))
    weights = None
    if S.weights is not None:
        wtail = (max(S.weights) + 1) if S.weights else 1
        weights = list(S.weights) + [wtail] * qf
    cover = pg.PcGroup(p, N, powers, comms, weights=weights)
    bad = cover.consistency_failures()
    if bad:
        raise AssertionError(f"cover presentation inconsistent: {bad[:3]}")

    proj_S = pg.GroupMap(cover, S,
                         [S.gen(i) for i in range(n)] + [S.identity] * qf)
    projection = isoS.compose(proj_S)
    if projection.target is not group:
        raise AssertionError("projection target mismatch")
    multiplicator = pg.subgroup(cover, [cover.gen(n + t) for t in range(qf)])
    j = pg.p_class(S)
    nucleus = pg.p_central_series(cover)[min(j, pg.p_class(cover))]
    if not multiplicator.contains_subgroup(nucleus):
        raise AssertionError("nucleus not inside multiplicator")
    got = CoverData(base=group, cover=cover, projection=projection,
                    multiplicator=multiplicator, nucleus=nucleus,
                    mu_rank=qf, nu_rank=nucleus.dim())
    group._attr_cache["p_cover"] = got
    return got


def dim_E_in_cover(coverdata, recipe):
    """log_p |recipe(cover)|; the image must lie in the multiplicator."""
    img = recipe.evaluate(coverdata.cover)
    if not coverdata.multiplicator.contains_subgroup(img):
        raise ValueError("recipe image not contained in the multiplicator")
    return img.dim()


def _tail_coords(coverdata, x):
    """Coordinates of a multiplicator element on the tail basis."""
    n = coverdata.cover.n - coverdata.mu_rank
    assert not any(x[:n])
    return tuple(x[n:])


def multiplicator_subspaces(coverdata, dim):
    """Canonical-echelon subspaces of the multiplicator of given dimension."""
    return modp.subspaces(coverdata.cover.p, coverdata.mu_rank, dim)


def quotient_by_subspace(coverdata, rows):
    """cover / <subspace of the multiplicator>, standardized.

    rows: vectors in tail coordinates spanning the subspace.
    """
    cover = coverdata.cover
    n = cover.n - coverdata.mu_rank
    gens = [tuple([0] * n + list(r)) for r in rows]
    U = pg.normal_closure(cover, gens)
    K, _proj = pg.quotient(cover, U)
    KS, _iso, _d = pg.standardize(K)
    return KS


def allowable_subspaces(coverdata, step):
    """Subspaces U of the multiplicator with codim = step, U + nucleus = all.

    Returned in deterministic (echelon-lexicographic) order, in tail
    coordinates.
    """
    m = coverdata.mu_rank
    if step > m:
        return []
    nuc_rows = [_tail_coords(coverdata, u)
                for u in coverdata.nucleus.canonical_gens]
    p = coverdata.cover.p
    out = []
    for rows in modp.subspaces(p, m, m - step):
        if modp.rank(list(rows) + nuc_rows, p) == m:
            out.append(rows)
    return out


def immediate_descendants(group, step):
    """All K with K/P_j(K) isomorphic to group, p-class j+1, |K| = |group| p^step.

    Up to isomorphism, deduplicated by pairwise testing; deterministic
    output order.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if pg.p_class(group) < 1:
        raise ValueError("the trivial group has no descendants")
    cov = p_cover(group)
    j = pg.p_class(group)
    found = []
    for rows in allowable_subspaces(cov, step):
        K = quotient_by_subspace(cov, rows)
        if pg.p_class(K) != j + 1:
            continue
        if any(pg.is_isomorphic(K, other) for other in found):
            continue
        found.append(K)
    return found
