"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's own lifting and
sifting machinery: subgroup oracles close over explicit element sets,
and the isomorphism/automorphism oracles search exhaustively over
generator images.
"""

import itertools

import pytest

from schur_sigma import classify, pcgroup as pg


# -- sample groups -------------------------------------------------------------


def heisenberg27():
    """Extraspecial group of order 27 and exponent 3."""
    z = (0, 0, 0)
    powers = [z, z, z]
    comms = [[], [(0, 0, 1)], [z, z]]
    return pg.PcGroup(3, 3, powers, comms)


def modular27():
    """C9 : C3, the extraspecial group of order 27 and exponent 9."""
    z = (0, 0, 0)
    powers = [(0, 0, 1), z, z]
    comms = [[], [(0, 0, 1)], [z, z]]
    return pg.PcGroup(3, 3, powers, comms)


def cyclic(p, k):
    """C_{p^k} on the pc generators g_1, ..., g_k with g_i^p = g_{i+1}."""
    z = tuple([0] * k)
    powers = [tuple(1 if j == i + 1 else 0 for j in range(k))
              for i in range(k - 1)] + [z]
    comms = [[z] * i for i in range(k)]
    return pg.PcGroup(p, k, powers, comms)


def abelian(p, invariants):
    """Direct product of cyclic groups of the given p-power orders."""
    G = None
    for q in invariants:
        k = 0
        while p ** k < q:
            k += 1
        C = cyclic(p, k)
        G = C if G is None else pg.direct_product(G, C)
    return G


@pytest.fixture(scope="session")
def catalog():
    return classify.build_catalog()


@pytest.fixture(scope="session")
def by_alias(catalog):
    return {tuple(e.gap_alias): e for e in catalog}


def all_groups_by_order():
    """All groups of order 3, 9, 27, 81 up to isomorphism.

    Elementary abelian groups are the class-1 roots; every other group
    is an immediate descendant of its unique parent (the quotient by the
    last nontrivial lower p-central term), so the union over parents is
    complete and duplicate-free.
    """
    from schur_sigma import covers as cv

    groups = {1: [cyclic(3, 1)]}
    for k in (2, 3, 4):
        level = [abelian(3, [3] * k)]
        for j in range(1, k):
            for H in groups[j]:
                if pg.generator_rank(H) <= cv.GENERATOR_BOUND:
                    level += cv.immediate_descendants(H, k - j)
        groups[k] = level
    return groups


@pytest.fixture(scope="session")
def small_groups():
    return all_groups_by_order()


# -- brute-force oracles -------------------------------------------------------


def oracle_subgroup_elements(G, gens):
    """All elements of <gens>, by closure under multiplication."""
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mult(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def oracle_agemo(G, H, i=1):
    """agemo_i(H) by enumerating the p^i-th powers of all of H."""
    q = G.p ** i
    gens = {G.power(x, q) for x in H.elements()}
    return oracle_subgroup_elements(G, list(gens))


def oracle_normal_closure(G, gens):
    conj = {G.mult(G.mult(G.inv(t), g), t)
            for g in set(gens) for t in pg.whole_group(G).elements()}
    return oracle_subgroup_elements(G, sorted(conj))


def _image_pools(S, B, mins):
    """Candidate images in B for S's minimal generators, pruned by
    element order."""
    orders = [S.element_order(S.gen(i)) for i in mins]
    by_order = {}
    for y in pg.whole_group(B).elements():
        by_order.setdefault(B.element_order(y), []).append(y)
    return [by_order.get(o, []) for o in orders]


_INVARIANT_CACHE = {}


def oracle_invariants(G):
    """Cheap isomorphism invariants computed by plain enumeration:
    element-order histogram, centre size, derived subgroup size, and the
    order histogram of the derived subgroup."""
    cached = _INVARIANT_CACHE.get(id(G))
    # the cache pins the group object: a bare id() key could be reused
    # by a new group after garbage collection and serve stale values
    if cached is not None and cached[0] is G:
        return cached[1]
    elems = list(pg.whole_group(G).elements())
    hist = {}
    for x in elems:
        o = G.element_order(x)
        hist[o] = hist.get(o, 0) + 1
    centre = sum(1 for x in elems
                 if all(G.commutator(x, g) == G.identity for g in G.gens()))
    # [G, G] is the normal closure of the generator commutators
    der = oracle_normal_closure(
        G, [G.commutator(a, b) for a in G.gens() for b in G.gens()])
    der_hist = {}
    for x in der:
        o = G.element_order(x)
        der_hist[o] = der_hist.get(o, 0) + 1
    out = (G.order, tuple(sorted(hist.items())), centre, len(der),
           tuple(sorted(der_hist.items())))
    _INVARIANT_CACHE[id(G)] = (G, out)
    return out


def oracle_is_isomorphic(A, B):
    """Exhaustive generator-image search for an isomorphism A -> B,
    after pruning by enumerated invariants."""
    if A.order != B.order:
        return False
    if oracle_invariants(A) != oracle_invariants(B):
        return False
    S, _, _ = pg.standardize(A)
    mins = [i for i in range(S.n) if S.definitions[i] is None]
    for chosen in itertools.product(*_image_pools(S, B, mins)):
        try:
            images = pg.extend_from_minimal(S, B, list(chosen))
        except ValueError:
            continue
        m = pg.GroupMap(S, B, images)
        if not m.is_valid(skip_defining=True):
            continue
        if len(oracle_subgroup_elements(B, list(chosen))) == B.order:
            return True
    return False


def oracle_automorphism_count(G):
    """|Aut(G)| as the number of minimal-generator image tuples that
    extend to a surjective homomorphism G -> G."""
    S, _, _ = pg.standardize(G)
    mins = [i for i in range(S.n) if S.definitions[i] is None]
    count = 0
    for chosen in itertools.product(*_image_pools(S, S, mins)):
        try:
            images = pg.extend_from_minimal(S, S, list(chosen))
        except ValueError:
            continue
        m = pg.GroupMap(S, S, images)
        if not m.is_valid(skip_defining=True):
            continue
        if len(oracle_subgroup_elements(S, list(chosen))) == S.order:
            count += 1
    return count
