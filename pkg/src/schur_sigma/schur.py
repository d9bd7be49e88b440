"""Sigma-structure, powerfulness criteria, relation ranks, recursion.

A SubgroupRecipe is a construction tree over the verbal operations
{whole group, agemo, commutator, product, Frattini, D_i, P_j}.  Recipes
evaluate in any finite quotient of a free pro-p group and commute with
quotient maps, which is what lets every computation here happen in
finite nilpotent quotients:

  * free_quotient(p, n, E, t) builds F_n / E(F_n) P_t(F_n) by iterated
    p-covers, using (E P_t)* = E* P_{t+1} and E* <= E.
  * rel_rank(K, E) = dim N / E(F) N* for K = F/N is read off inside
    F / E P_t once the value stabilizes over two consecutive depths.
  * schur_step(H, E, D) lists all Schur E-quotients K with
    K/D(K) isomorphic to H as quotients of the p-cover of H by
    subspaces of the multiplicator that contain the image of E, have
    the codimension forced by mu(H) = dim Ker(K->>H) + n + dim E(H*),
    and pass the K/D(K) and sigma-structure filters.
  * powerfulness_recursion walks the quotients G/P_j(G)E_2(G) level by
    level; E(G) is powerful iff E_1(G) = E_2(G), so a branch is negative
    as soon as E_1 is visibly nontrivial in a partial quotient and
    positive once the tower stabilizes with E_1 trivial.
"""

from __future__ import annotations

import logging

from dataclasses import dataclass, asdict

from . import modp
from . import pcgroup as pg
from . import filtrations as fl
from . import covers as cv
from .isomorphism import _std

log = logging.getLogger(__name__)


# -- subgroup recipes ----------------------------------------------------------


class SubgroupRecipe:
    """Evaluable construction tree for a verbal (characteristic) subgroup."""

    __slots__ = ("op", "args", "key", "label")

    def __init__(self, op, *args):
        self.op = op
        self.args = args
        self.key = (op,) + tuple(a.key if isinstance(a, SubgroupRecipe) else a
                                 for a in args)
        self.label = _label(op, args)

    def __repr__(self):
        return f"SubgroupRecipe({self.label})"

    def __eq__(self, other):
        return isinstance(other, SubgroupRecipe) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def evaluate(self, G):
        """The recipe's subgroup of G, cached on G."""
        cache = G._attr_cache.setdefault("recipes", {})
        got = cache.get(self.key)
        if got is not None:
            return got
        op, args = self.op, self.args
        if op == "whole":
            got = pg.whole_group(G)
        elif op == "D":
            got = fl.zassenhaus_term(G, args[0])
        elif op == "P":
            got = fl.p_central_term(G, args[0])
        elif op == "agemo":
            got = pg.agemo(G, args[0].evaluate(G), 1)
        elif op == "comm":
            got = pg.commutator_subgroup(
                G, args[0].evaluate(G), args[1].evaluate(G))
        elif op == "product":
            gens = []
            for a in args:
                gens += list(a.evaluate(G).canonical_gens)
            got = pg.subgroup(G, gens)
        elif op == "frattini":
            # Fr(H) = agemo_1(H) [H,H] for normal H is the normal
            # closure of the generator p-th powers and generator
            # commutators: modulo that closure the image of H is
            # generated by commuting order-p elements, hence is
            # elementary abelian, so the whole agemo falls inside.
            H = args[0].evaluate(G)
            if not H.is_normal():
                raise ValueError("frattini recipe needs a normal subgroup")
            us = list(H.canonical_gens)
            gens = [G.power(u, G.p) for u in us]
            gens += [G.commutator(u, v) for u in us for v in us]
            got = pg.normal_closure(G, gens)
        elif op == "star":
            # agemo_1(H) [F,H] for normal H: killing the generator
            # p-th powers and the commutators with the group generators
            # leaves a central elementary abelian image, so this normal
            # closure is already the whole product.
            H = args[0].evaluate(G)
            if not H.is_normal():
                raise ValueError("star recipe needs a normal subgroup")
            gens = [G.power(u, G.p) for u in H.canonical_gens]
            gens += [G.commutator(G.gen(i), u)
                     for i in range(G.n) for u in H.canonical_gens]
            got = pg.normal_closure(G, gens)
        elif op == "two":
            # agemo_1(E) [F, Fr(E)] for normal E.  Killing the listed
            # generators makes Fr(E)'s image central with trivial
            # generator p-th powers (hence trivial agemo, being central
            # abelian on order-p generators) and E's image of class
            # <= 2, where for odd p the p-th power of any product of
            # generators collapses to generator powers times a p-th
            # power from Fr(E); so the whole product falls inside.
            E_ = args[0].evaluate(G)
            if not E_.is_normal():
                raise ValueError("two recipe needs a normal subgroup")
            FrE = self.args[0].frattini().evaluate(G)
            gens = [G.power(u, G.p) for u in E_.canonical_gens]
            gens += [G.power(w, G.p) for w in FrE.canonical_gens]
            gens += [G.commutator(G.gen(i), w)
                     for i in range(G.n) for w in FrE.canonical_gens]
            got = pg.normal_closure(G, gens)
        else:
            raise ValueError(f"unknown recipe operation {op!r}")
        cache[self.key] = got
        return got

    # derived recipes
    def agemo(self):
        return SubgroupRecipe("agemo", self)

    def frattini(self):
        return SubgroupRecipe("frattini", self)

    def star(self):
        """Relative Frattini recipe: agemo_1(E) [F, E]."""
        return SubgroupRecipe("star", self)

    def one(self):
        """E_1 = Fr(E)."""
        return self.frattini()

    def two(self):
        """E_2 = agemo_1(E) [F, Fr(E)]."""
        return SubgroupRecipe("two", self)


def _label(op, args):
    if op == "whole":
        return "F"
    if op in ("D", "P"):
        return f"{op}{args[0]}"
    sub = [a.label if isinstance(a, SubgroupRecipe) else str(a) for a in args]
    if op == "agemo":
        return f"U1({sub[0]})"
    if op == "comm":
        return f"[{sub[0]},{sub[1]}]"
    if op == "product":
        return "*".join(sub)
    if op == "frattini":
        return f"Fr({sub[0]})"
    if op == "star":
        return f"U1({sub[0]})[F,{sub[0]}]"
    if op == "two":
        return f"U1({sub[0]})[F,Fr({sub[0]})]"
    return op


def whole_recipe():
    return SubgroupRecipe("whole")


def zassenhaus_recipe(i):
    if i < 1:
        raise ValueError("Zassenhaus recipes start at D1")
    return SubgroupRecipe("D", i)


def p_central_recipe(j):
    if j < 0:
        raise ValueError("lower p-central recipes start at P0")
    return SubgroupRecipe("P", j)


def product_recipe(*recipes):
    return SubgroupRecipe("product", *recipes)


def commutator_recipe(a, b):
    return SubgroupRecipe("comm", a, b)


# -- sigma structure -----------------------------------------------------------


@dataclass(frozen=True)
class SigmaWitness:
    """An order-2 automorphism acting as -1 on G/Fr(G)."""
    group: object
    sigma: object                # GroupMap group -> group

    def verify(self):
        G, s = self.group, self.sigma
        if not s.is_valid():
            raise AssertionError("sigma is not a homomorphism")
        if not s.compose(s).is_identity():
            raise AssertionError("sigma is not an involution")
        fr = pg.frattini_subgroup(G)
        for i in range(G.n):
            if not fr.contains(G.mult(s.apply(G.gen(i)), G.gen(i))):
                raise AssertionError("sigma is not -1 modulo Frattini")
        return True


def _negation_matrix_predicate(p, d):
    def pred(M):
        for i in range(d):
            for j in range(d):
                if M[i][j] != ((p - 1) if i == j else 0):
                    return False
        return True
    return pred


def is_sigma_group(group, bound_exp=12):
    """A SigmaWitness if one exists, else None.

    Existence is decided by searching for any automorphism tau inducing
    -1 on the Frattini quotient (layer lifting, never brute force over
    element pairs).  tau has order 2 * 3^b because tau^2 acts trivially
    on the Frattini quotient and therefore lies in a finite p-group of
    automorphisms; repeated cubing yields the order-2 witness.
    """
    if group.n == 0:
        return SigmaWitness(group, pg.GroupMap(group, group, []))
    cache = group._attr_cache
    if "sigma_witness" in cache:
        return cache["sigma_witness"]
    d = pg.generator_rank(group)
    found = pg.automorphisms_with(
        group, _negation_matrix_predicate(group.p, d),
        limit=1, bound_exp=bound_exp)
    if not found:
        cache["sigma_witness"] = None
        return None
    sigma = found[0]
    for _ in range(4 * group.n + 4):
        if sigma.compose(sigma).is_identity():
            witness = SigmaWitness(group, sigma)
            witness.verify()
            cache["sigma_witness"] = witness
            return witness
        sigma = sigma.compose(sigma).compose(sigma)
    raise AssertionError("automorphism order is not of the form 2 * 3^b")


def sigma_automorphism_index(group, bound_exp=12):
    """[Aut(G) : Aut_sigma(G)] for Aut_sigma the centralizer of a sigma.

    All order-2 automorphisms acting as -1 on the Frattini quotient are
    conjugate in Aut(G), so the centralizer index equals the size of
    that conjugacy class, i.e. the number of such involutions; this is
    countable by fibre lifting without enumerating Aut(G).
    """
    d = pg.generator_rank(group)
    candidates = pg.automorphisms_with(
        group, _negation_matrix_predicate(group.p, d), bound_exp=bound_exp)
    count = sum(1 for m in candidates if m.compose(m).is_identity())
    if count == 0:
        raise ValueError("the group carries no sigma structure")
    return count


# -- powerfulness --------------------------------------------------------------


def is_powerful(group):
    """p odd: G is powerful iff agemo_1(G) = Fr(G)."""
    ag = pg.agemo(group, pg.whole_group(group), 1)
    fr = pg.frattini_subgroup(group)
    if not fr.contains_subgroup(ag):
        raise AssertionError("agemo_1(G) must lie inside Fr(G)")
    return ag.size == fr.size


def powerful_via_criterion(group, E, quotient_by_E2=None):
    """Whether E(G) is powerful, read off from G/E_2(G).

    E(G) is powerful iff E_1(G) = E_2(G); in any quotient Q of G by
    E_2(G) this becomes E_1(Q) = E_2(Q).  Passing Q = G itself is valid
    whenever G is finite.
    """
    Q = group if quotient_by_E2 is None else quotient_by_E2
    e1 = E.one().evaluate(Q)
    e2 = E.two().evaluate(Q)
    if not e1.contains_subgroup(e2):
        raise AssertionError("E_2 must lie inside E_1")
    return e1.size == e2.size


# -- free nilpotent quotients ----------------------------------------------------


_FREE_CACHE = {}


def free_quotient(p, n, E, depth):
    """F_n / E(F_n) P_depth(F_n), standardized.

    Built by iterated p-covers: the cover of F/E P_t is F/E* P_{t+1},
    and killing the image of E there yields F/E P_{t+1}.
    """
    if depth < 1:
        raise ValueError("depth starts at 1")
    key = (p, n, E.key, depth)
    got = _FREE_CACHE.get(key)
    if got is not None:
        return got
    if depth == 1:
        H = pg.elementary_abelian(p, n)
        H = _kill(H, E)
    else:
        prev = free_quotient(p, n, E, depth - 1)
        H = _kill(cv.p_cover(prev).cover, E)
    _FREE_CACHE[key] = H
    return H


def _kill(G, E):
    EG = E.evaluate(G)
    if EG.size == 1 and G.definitions is not None:
        return G
    Q, _ = pg.quotient(G, EG)
    S, _, _ = pg.standardize(Q)
    return S


# -- relation rank ---------------------------------------------------------------


def _surjection_onto(Phi, K):
    """A surjective GroupMap Phi ->> K sending minimal gens to minimal gens."""
    SK, isoK, _ = _std(K)
    mins = [i for i in range(SK.n) if SK.definitions[i] is None]
    min_images = [isoK.apply(SK.gen(i)) for i in mins]
    images = pg.extend_from_minimal(Phi, K, min_images)
    phi = pg.GroupMap(Phi, K, images)
    if not phi.is_valid(skip_defining=True):
        raise AssertionError("expected surjection is not a homomorphism")
    if phi.image().size != K.order:
        raise AssertionError("expected surjection is not onto")
    return phi


def rel_rank(K, E, max_depth=12):
    """dim N / E(F) N* for K = F_n/N; the E-relation rank of K.

    Requires E(K) = 1.  Computed inside Phi = F/E P_t for increasing t,
    accepting once the value agrees at two consecutive depths; the
    depth used is recorded in K's cache under ("rel_rank_meta", E.key).
    """
    if E.evaluate(K).size != 1:
        raise ValueError("rel_rank requires E(K) = 1")
    n = pg.generator_rank(K)
    if n == 0:
        return 0
    t = max(pg.p_class(K), 3)
    prev = None
    while t <= max_depth:
        Phi = free_quotient(K.p, n, E, t)
        phi = _surjection_onto(Phi, K)
        N = phi.kernel()
        Nstar = fl.relative_frattini(Phi, N)
        r = N.dim() - Nstar.dim()
        stable = (prev is not None
                  and (prev[0] == r or prev[1] == Phi.order))
        if stable:
            K._attr_cache[("rel_rank_meta", E.key)] = {
                "depth": t, "stabilized": True}
            return r
        prev = (r, Phi.order)
        t += 1
    raise RuntimeError(
        f"rel_rank did not stabilize by depth {max_depth} for E = {E.label}")


_CONTAINMENT_CACHE = {}


def _require_dstar_in_e(p, n, D, E, max_depth=10):
    """Verify D* <= E inside a stabilized quotient F_n / E P_t.

    Once |F/E P_t| = |F/E P_{t+1}| the tower has stabilized at F/E
    (P_t has fallen inside E), so triviality of D* there is an exact
    containment proof.
    """
    key = (p, n, D.key, E.key)
    got = _CONTAINMENT_CACHE.get(key)
    if got is None:
        t, stabilized = 3, False
        while t < max_depth:
            if free_quotient(p, n, E, t).order == \
                    free_quotient(p, n, E, t + 1).order:
                stabilized = True
                break
            t += 1
        Phi = free_quotient(p, n, E, t)
        got = (D.star().evaluate(Phi).size == 1, stabilized, t)
        _CONTAINMENT_CACHE[key] = got
    ok, stabilized, t = got
    if not ok:
        raise ValueError(
            f"(precondition) D* = {D.label}* is not contained in {E.label}"
            f" (checked at depth {t})")
    if not stabilized:
        raise ValueError(
            f"(precondition) containment tower for {E.label} did not"
            f" stabilize by depth {t}; cannot certify D* <= E")


# -- Schur E-quotient step -------------------------------------------------------


def step_size(H, E):
    """mu(H) - n - dim E(H*): the forced kernel dimension of K ->> H."""
    cov = cv.p_cover(H)
    EC = E.evaluate(cov.cover)
    if not cov.multiplicator.contains_subgroup(EC):
        raise ValueError("(precondition) E(H) must be trivial")
    return cov.mu_rank - pg.generator_rank(H) - EC.dim()


def schur_step_candidates(H, E, D, assume_preconditions=False):
    """Yield the raw descendant candidates of one Schur E-quotient step.

    Candidates are quotients of the p-cover of H by multiplicator
    subspaces W that contain the image of E (so E(K) = 1) and have
    codimension equal to the forced step size, filtered by
    K/D(K) isomorphic to H.  Neither the sigma test nor isomorphism
    deduplication is applied here; `schur_step` adds both, and the
    level recursion applies them lazily (a candidate that is already
    negative for its purposes never needs either).
    """
    p = H.p
    n = pg.generator_rank(H)
    if not assume_preconditions:
        r = rel_rank(H, D)
        if r != n:
            raise ValueError(
                f"(precondition) rel_rank(H, {D.label}) = {r}, expected {n}")
        _require_dstar_in_e(p, n, D, E)
    cov = cv.p_cover(H)
    mu = cov.mu_rank
    EC = E.evaluate(cov.cover)
    if not cov.multiplicator.contains_subgroup(EC):
        raise ValueError("(precondition) E(H) must be trivial")
    e = EC.dim()
    step = mu - n - e
    if step < 0:
        return
    base_n = cov.cover.n - mu
    rows_E = [u[base_n:] for u in EC.canonical_gens]
    red, pivots = modp.rref(rows_E, p) if rows_E else ((), ())
    free_cols = [c for c in range(mu) if c not in pivots]
    total = modp.num_subspaces(p, mu - e, mu - e - step)
    log.info("schur_step: |H| = %d, mu = %d, e = %d, step = %d,"
             " scanning %d subspaces", H.order, mu, e, step, total)
    scanned = 0
    tick = max(25, total // 20)
    for sub in modp.subspaces(p, mu - e, mu - e - step):
        scanned += 1
        if scanned % tick == 0:
            log.info("schur_step: %d/%d scanned", scanned, total)
        lift = []
        for row in sub:
            v = [0] * mu
            for idx, c in enumerate(free_cols):
                v[c] = row[idx]
            lift.append(tuple(v))
        K = cv.quotient_by_subspace(cov, list(red) + lift)
        if E.evaluate(K).size != 1:
            raise AssertionError("enumerated subspace fails E(K) = 1")
        DK = D.evaluate(K)
        Q, _ = pg.quotient(K, DK)
        if not pg.is_isomorphic(Q, H):
            continue
        yield K


def dedup_insert(kept, K):
    """Insert K into the kept list unless isomorphic to a member.

    Move-to-front: candidates arrive in runs of the same type, so
    checking the last-matched class first avoids paying the expensive
    non-isomorphism case on every candidate.  Returns True if K was new.
    """
    matched = None
    for j, other in enumerate(kept):
        if pg.is_isomorphic(K, other):
            matched = j
            break
    if matched is not None:
        if matched:
            kept.insert(0, kept.pop(matched))
        return False
    kept.insert(0, K)
    return True


def schur_step(H, E, D, assume_preconditions=False):
    """All Schur E-quotients K with K/D(K) isomorphic to H, up to isomorphism.

    Preconditions: rel_rank(H, D) = n = d(H); D* <= E; E(H) = 1.  The
    first two are checked unless `assume_preconditions` is set, which
    the level recursion uses for its inner steps where both hold by
    construction: (P_j E_2)* = P_{j+1} E_2* <= P_{j+1} E_2, and the
    relation rank is preserved along accepted descendants (checking
    them directly would mean building free quotients modulo E_2 P_t,
    whose size is unbounded in j).  Candidates are quotients of the
    p-cover of H by multiplicator subspaces W that contain the image of
    E (so E(K) = 1) and have codimension equal to the forced step size;
    each candidate is kept iff K/D(K) is isomorphic to H and K carries
    a sigma structure.
    """
    out = []
    for K in schur_step_candidates(H, E, D, assume_preconditions):
        if is_sigma_group(K) is None:
            continue
        dedup_insert(out, K)
    return out


# -- recursive powerfulness verdicts ----------------------------------------------


@dataclass(frozen=True)
class RecursionVerdict:
    type: str                    # label of the starting quotient
    E: str                       # label of the subgroup recipe
    verdict: str                 # all_powerful | never_powerful | mixed | inconclusive
    max_rank: object             # int for all_powerful, else None
    levels_explored: int
    groups_examined: int

    def to_json(self):
        return asdict(self)


SIGMA_EAGER_BOUND = 7  # order exponent up to which the sigma filter is cheap


def powerfulness_recursion(H0, E, max_class=12, type_label=None):
    """Decide whether E(G) is powerful for all / no / some weak Schur
    sigma-groups G with G/D4(G) isomorphic to H0.

    Walks the quotients G/P_j(G)E_2(G) by schur_step levels, starting
    from (P_3 E_2, D_4).  A branch is negative once E_1 is nontrivial in
    the current partial quotient, positive once its tower stabilizes
    (step size 0) with E_1 trivial; stabilized branches report
    d(E(G)) = dim E(G/E_2(G)).

    Sigma existence is tested lazily above order 3^SIGMA_EAGER_BOUND,
    where its failure case is expensive.  This is sound because every
    quotient of a sigma-group by a characteristic subgroup inherits the
    sigma structure: a candidate that is already negative only needs
    the sigma test when positives also exist (to separate mixed from
    all_powerful), a positive stabilization point is always tested, and
    a subtree rooted at a non-sigma quotient can never reach a sigma
    endpoint (the root is one of its characteristic quotients).
    """
    if max_class < 3:
        raise ValueError("max_class must be at least 3")
    label = type_label if type_label is not None else f"order-{H0.order}"
    E2 = E.two()
    pos_ranks = []
    negative = False
    neg_unverified = []
    unresolved = False
    levels = 0
    examined = 0

    def sigma_ok(G):
        return is_sigma_group(G) is not None

    def admit(K, into):
        """Construction-time candidate handling shared by all levels."""
        nonlocal negative, examined
        examined += 1
        if E.one().evaluate(K).size > 1:
            if K.n <= SIGMA_EAGER_BOUND:
                if sigma_ok(K):
                    negative = True
            else:
                neg_unverified.append(K)
            return
        if K.n <= SIGMA_EAGER_BOUND and not sigma_ok(K):
            return
        dedup_insert(into, K)

    frontier = []
    for K in schur_step_candidates(
            H0, product_recipe(p_central_recipe(3), E2),
            zassenhaus_recipe(4)):
        admit(K, frontier)
    levels += 1

    for j in range(3, max_class + 1):
        if not frontier:
            break
        if negative and pos_ranks:
            unresolved = False
            break
        E_next = product_recipe(p_central_recipe(j + 1), E2)
        D_here = product_recipe(p_central_recipe(j), E2)
        nxt = []
        for H in frontier:
            if step_size(H, E_next) == 0:
                if sigma_ok(H):
                    pos_ranks.append(E.evaluate(H).dim())
                continue
            if j == max_class:
                unresolved = True
                continue
            for K in schur_step_candidates(H, E_next, D_here,
                                           assume_preconditions=True):
                admit(K, nxt)
        frontier = nxt
        log.info("recursion %s (E = %s): class %d done, frontier %d,"
                 " negative %s (%d unverified), positive ranks %s",
                 label, E.label, j, len(frontier), negative,
                 len(neg_unverified), pos_ranks)
        if frontier:
            levels += 1

    if neg_unverified and not negative:
        if pos_ranks:
            # only here can realizability of a negative change the verdict
            negative = any(sigma_ok(H) for H in neg_unverified)
        else:
            # no positive exists, so no realizable positive exists either;
            # "never powerful" holds whether or not these realize
            negative = True

    if negative and pos_ranks:
        verdict, rank = "mixed", None
    elif unresolved:
        verdict, rank = "inconclusive", None
    elif pos_ranks and not negative:
        verdict, rank = "all_powerful", max(pos_ranks)
    elif negative:
        verdict, rank = "never_powerful", None
    else:
        verdict, rank = "inconclusive", None
    return RecursionVerdict(type=label, E=E.label, verdict=verdict,
                            max_rank=rank, levels_explored=levels,
                            groups_examined=examined)


__all__ = [
    "SubgroupRecipe", "SigmaWitness", "RecursionVerdict",
    "whole_recipe", "zassenhaus_recipe", "p_central_recipe",
    "product_recipe", "commutator_recipe",
    "is_sigma_group", "sigma_automorphism_index",
    "is_powerful", "powerful_via_criterion",
    "free_quotient", "rel_rank", "step_size",
    "schur_step", "schur_step_candidates", "dedup_insert",
    "powerfulness_recursion",
]
