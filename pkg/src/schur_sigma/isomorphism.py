"""Isomorphism testing and automorphism counting for PcGroups.

Isomorphism: invariant prescreen, then generator-image search restricted
to tuples that induce an invertible map on the Frattini quotient.

Automorphisms: lifting along the lower p-central series.  Write c for
the p-class and Q_j = G/P_j(G).  Every automorphism of Q_{j+1} projects
onto one of Q_j, and for a fixed projection the fibre is parametrized by
central shifts of the minimal-generator images by elements of
Z = P_j(Q_{j+1}): relation defects are invariant under such shifts
(the shifts are central of exponent p and never occur in relation
right-hand sides of a weight-compatible presentation), so one defect
evaluation per candidate decides liftability of the whole fibre, and
each liftable map has exactly p^(d * dim Z) lifts.  Counting therefore
needs no brute force over |G|^2 image pairs.
"""

from __future__ import annotations

from itertools import product

from . import modp


def _pg():
    from . import pcgroup
    return pcgroup


def _std(G):
    """Cached (S, iso S->G, dec G->S) with S standardized."""
    got = G._attr_cache.get("std")
    if got is None:
        pg = _pg()
        if G.definitions is not None and G.weights is not None:
            mins = [i for i in range(G.n) if G.definitions[i] is None]
            if mins == list(range(len(mins))):
                ident = pg.GroupMap(G, G, G.gens())
                got = (G, ident, lambda x: x)
                G._attr_cache["std"] = got
                return got
        got = pg.standardize(G)
        G._attr_cache["std"] = got
    return got


_HIST_BOUND_EXP = 8  # full-enumeration invariants only up to p^8


def fingerprint(G):
    """Isomorphism-invariant prescreen vector."""
    got = G._attr_cache.get("fingerprint")
    if got is not None:
        return got
    pg = _pg()
    inv = [G.order, tuple(pg.abelian_invariants(G))]
    ser = pg.p_central_series(G)
    inv.append(tuple(ser[i].dim() - ser[i + 1].dim()
                     for i in range(len(ser) - 1)))
    if G.n <= _HIST_BOUND_EXP:
        from . import filtrations
        inv.append(tuple(filtrations.zassenhaus_chain(G).graded_dims))
        der = pg.derived_subgroup(G)
        cen = pg.center(G)
        inv.append(tuple(pg.abelian_invariants(G, der)) if der.size > 1
                   else (der.size,))
        inv.append(tuple(pg.abelian_invariants(G, cen)) if cen.size > 1
                   else (cen.size,))
        inv.append(tuple(sorted(pg.order_histogram(G).items())))
        inv.append(_maximal_subgroup_profile(G))
    got = tuple(inv)
    G._attr_cache["fingerprint"] = got
    return got


def _maximal_subgroup_profile(G):
    """Sorted abelianization invariants of the maximal subgroups, for
    2-generated groups (where there are only four); a strong, cheap
    prescreen for otherwise-colliding fingerprints."""
    pg = _pg()
    if pg.generator_rank(G) != 2 or G.n < 2:
        return ()
    fr = pg.frattini_subgroup(G)
    Q, _proj = pg.quotient(G, fr)
    sec = pg.quotient_section(G, fr, Q)
    out = []
    for v in ((1, 0), (0, 1), (1, 1), (1, 2)):
        H = pg.subgroup(G, [sec(v)] + list(fr.canonical_gens))
        out.append(tuple(sorted(pg.abelian_invariants(G, H), reverse=True)))
    return tuple(sorted(out))


def _element_orders(G):
    got = G._attr_cache.get("elt_orders")
    if got is None:
        got = {x: G.element_order(x)
               for x in _pg().whole_group(G).elements()}
        G._attr_cache["elt_orders"] = got
    return got


def _lift_base_pair(linkA, linkB, alpha):
    """Base lift of alpha (images of linkA's lower minimal generators
    in linkB's lower group) through the two links, or None.

    All other lifts are central Z-shifts of the base; relation defects
    are invariant under such shifts exactly as in the single-group
    case, so one defect evaluation decides the whole fibre.
    """
    pg = _pg()
    HA, HB = linkA["upper"], linkB["upper"]
    amap = pg.GroupMap(
        linkA["lower"], linkB["lower"],
        pg.extend_from_minimal(linkA["lower"], linkB["lower"], alpha))
    base = [linkB["section"](amap.apply(linkA["pi"].apply(HA.gen(i))))
            for i in linkA["mins_upper"]]
    images = pg.extend_from_minimal(HA, HB, base)
    if pg.GroupMap(HA, HB, images).is_valid(skip_defining=True):
        return base
    return None


def find_isomorphism(A, B):
    """A GroupMap isomorphism A -> B, or None.

    Both groups are standardized and compared by lifting along their
    lower p-central towers: a root map on the Frattini quotients
    (an element of GL_d) is lifted layer by layer, branching over the
    central shifts of each base lift, exactly as in the automorphism
    search but with distinct source and target.  The fail case explores
    the finite lift tree instead of generator-image pools over |B|^d
    element tuples.
    """
    pg = _pg()
    if A._core() == B._core():
        return pg.GroupMap(A, B, A.gens())
    if A.order != B.order:
        return None
    d = pg.generator_rank(A)
    if d != pg.generator_rank(B):
        return None
    if A.n == 0:
        return pg.GroupMap(A, B, [])
    p = A.p
    SA, isoA, decA = _std(A)
    SB, isoB, decB = _std(B)
    _, _, _, chainA, linksA = _tower(SA)
    _, _, _, chainB, linksB = _tower(SB)
    if len(chainA) != len(chainB):
        return None
    for la, lb in zip(linksA, linksB):
        if la["Z"].dim() != lb["Z"].dim():
            return None

    found = None

    def emit(alpha):
        nonlocal found
        smap = pg.GroupMap(SA, SB, pg.extend_from_minimal(SA, SB, alpha))
        images = [isoB.apply(smap.apply(decA(A.gen(i))))
                  for i in range(A.n)]
        out = pg.GroupMap(A, B, images)
        assert out.is_valid()
        found = out
        return True

    def dfs(i, alpha):
        # alpha: images of chainA[i+1]'s minimal generators in chainB[i+1]
        if i < 0:
            return emit(alpha)
        base = _lift_base_pair(linksA[i], linksB[i], alpha)
        if base is None:
            return False
        for lifted in _shifts(linksB[i], base):
            if dfs(i - 1, lifted):
                return True
        return False

    if not linksA:
        # elementary abelian of equal rank
        emit(tuple(SB.gen(i) for i in range(d)))
        return found
    for _M, alpha in _gl_images(chainB[-1], p, d):
        if dfs(len(linksA) - 1, alpha):
            break
    return found


def is_isomorphic(A, B):
    if A.p != B.p:
        return False
    if A._core() == B._core():
        return True
    if fingerprint(A) != fingerprint(B):
        return False
    return find_isomorphism(A, B) is not None


# -- automorphism tower --------------------------------------------------------


def _tower(G):
    """Lifting data, cached on G.

    Returns (S, iso, dec, chain, links): chain[0] = S (standardized G),
    chain[-1] = G/Fr(G); links[i] holds the transition from chain[i+1]
    (lower) up to chain[i] (upper).
    """
    got = G._attr_cache.get("aut_tower")
    if got is not None:
        return got
    pg = _pg()
    S, iso, dec = _std(G)
    chain = [S]
    links = []
    cur = S
    while pg.p_class(cur) > 1:
        ser = pg.p_central_series(cur)
        Z = ser[-2]
        Q, proj = pg.quotient(cur, Z)
        L, isoL, decL = pg.standardize(Q)
        sec_q = pg.quotient_section(cur, Z, Q)
        pi = pg.GroupMap(cur, L, [decL(proj.apply(g)) for g in cur.gens()])

        def section(x, isoL=isoL, sec_q=sec_q):
            return sec_q(isoL.apply(x))

        mins_up = [i for i in range(cur.n) if cur.definitions[i] is None]
        links.append({
            "upper": cur, "lower": L, "Z": Z, "pi": pi,
            "section": section, "mins_upper": mins_up,
        })
        cur = L
        chain.append(cur)
    got = (S, iso, dec, chain, links)
    G._attr_cache["aut_tower"] = got
    return got


def _full_map(L, alpha):
    """Extend minimal-generator images alpha to all generators of L."""
    pg = _pg()
    return pg.GroupMap(L, L, pg.extend_from_minimal(L, L, alpha))


def _lift_base(link, alpha):
    """Base lift of alpha through link, or None if alpha does not lift.

    alpha: images (in the lower group) of the lower group's minimal
    generators.  Returns images (in the upper group) of the upper
    group's minimal generators; all other lifts are central Z-shifts of
    it and are automatically valid.
    """
    pg = _pg()
    H = link["upper"]
    amap = _full_map(link["lower"], alpha)
    pi, section = link["pi"], link["section"]
    base = [section(amap.apply(pi.apply(H.gen(i))))
            for i in link["mins_upper"]]
    images = pg.extend_from_minimal(H, H, base)
    if pg.GroupMap(H, H, images).is_valid(skip_defining=True):
        return base
    return None


def _shifts(link, base):
    """Iterate all lifts (as minimal-gen image tuples) given a base lift."""
    H = link["upper"]
    zb = link["Z"].canonical_gens
    d = len(base)
    if not zb:
        yield tuple(base)
        return
    pows = [[H.identity] + [None] * (H.p - 1) for _ in zb]
    for b, z in enumerate(zb):
        for e in range(1, H.p):
            pows[b][e] = H.mult(pows[b][e - 1], z)
    for v in product(range(H.p), repeat=d * len(zb)):
        imgs = []
        for i in range(d):
            x = base[i]
            for b in range(len(zb)):
                e = v[i * len(zb) + b]
                if e:
                    x = H.mult(x, pows[b][e])
            imgs.append(x)
        yield tuple(imgs)


def _gl_images(bottom, p, d):
    """All of Aut(bottom) = GL_d as minimal-gen image tuples, with the
    inducing matrix (row convention: gen_i -> prod_k gen_k^{M[i][k]})."""
    for M in modp.gl_elements(p, d):
        yield M, tuple(tuple(M[i]) for i in range(d))


def automorphism_count(G, bound_exp=10):
    """Exact |Aut(G)| by layer lifting along the lower p-central series."""
    pg = _pg()
    if G.n > bound_exp:
        raise ValueError(f"group order above p^{bound_exp} bound")
    got = G._attr_cache.get("aut_count")
    if got is not None:
        return got
    p = G.p
    d = pg.generator_rank(G)
    S, iso, dec, chain, links = _tower(G)
    if len(chain) == 1:
        # elementary abelian (or trivial): Aut = GL_d
        total = 1
        for i in range(d):
            total *= p ** d - p ** i
        G._attr_cache["aut_count"] = total
        return total

    def count_above(i, alpha):
        # alpha lives on chain[i+1]; count its automorphism lifts to chain[0]
        link = links[i]
        base = _lift_base(link, alpha)
        if base is None:
            return 0
        dz = d * link["Z"].dim()
        if i == 0:
            return p ** dz
        return sum(count_above(i - 1, lifted) for lifted in _shifts(link, base))

    total = sum(count_above(len(links) - 1, alpha)
                for _, alpha in _gl_images(chain[-1], p, d))
    G._attr_cache["aut_count"] = total
    return total


def automorphisms_with(G, predicate, limit=None, bound_exp=10):
    """All automorphisms whose induced matrix on G/Fr(G) satisfies predicate.

    The matrix is taken with respect to the minimal generating system of
    the standardized lifting tower (row convention as in _gl_images);
    basis-independent predicates such as scalar action are unaffected by
    the choice.  Stops after `limit` results when given.
    """
    pg = _pg()
    if G.n > bound_exp:
        raise ValueError(f"group order above p^{bound_exp} bound")
    p = G.p
    d = pg.generator_rank(G)
    S, iso, dec, chain, links = _tower(G)
    results = []

    def emit(alpha):
        smap = _full_map(S, alpha)
        images = [iso.apply(smap.apply(dec(G.gen(i)))) for i in range(G.n)]
        gm = pg.GroupMap(G, G, images)
        assert gm.is_valid()
        results.append(gm)
        return limit is not None and len(results) >= limit

    def dfs(i, alpha):
        # alpha lives on chain[i+1]
        if i < 0:
            return emit(alpha)
        link = links[i]
        base = _lift_base(link, alpha)
        if base is None:
            return False
        for lifted in _shifts(link, base):
            if dfs(i - 1, lifted):
                return True
        return False

    for M, alpha in _gl_images(chain[-1], p, d):
        if not predicate(M):
            continue
        if dfs(len(links) - 1, alpha):
            break
    return results
