"""Finite p-groups via consistent weighted polycyclic presentations.

A group of order p^n is given by generators g_1..g_n with relations

    g_i^p      = w_i        (a normal-form word in g_{i+1}..g_n)
    [g_i, g_j] = w_ij       (j < i, a word in g_{i+1}..g_n)

with the commutator convention [a, b] = a^-1 b^-1 a b.  Every element has
a unique normal form g_1^{e_1} ... g_n^{e_n} with 0 <= e_i < p; elements
are plain exponent tuples.  Multiplication is collection from the left
with per-group memoisation.

The support conditions above (power words live strictly above i,
commutator words strictly above max(i, j)) make the collection recursion
terminate; they hold for every presentation this package constructs and
are enforced at construction time.
"""

from __future__ import annotations

from . import modp

Element = tuple  # exponent vector, one residue mod p per pc generator


class PcGroup:
    """Immutable finite p-group with a consistent pc presentation.

    powers[i] is the normal form of g_i^p; comms[i][j] (j < i) the normal
    form of [g_i, g_j].  weights, when present, give the lower p-central
    weight of each generator; definitions, when present, record for each
    non-minimal generator how it arises from earlier ones:
    ("p", a) meaning g_i = g_a^p, or ("c", a, b) meaning g_i = [g_a, g_b].
    """

    __slots__ = ("p", "n", "powers", "comms", "weights", "definitions",
                 "_rg_cache", "_conj_cache", "_inv_gens", "_attr_cache")

    def __init__(self, p, n, powers, comms, weights=None, definitions=None):
        if p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ValueError("p must be an odd prime")
        if n > 100:
            raise ValueError("more than 100 pc generators is unsupported")
        powers = tuple(tuple(x % p for x in w) for w in powers)
        comms = tuple(tuple(tuple(x % p for x in w) for w in row)
                      for row in comms)
        if len(powers) != n or len(comms) != n:
            raise ValueError("relation table size mismatch")
        for i, w in enumerate(powers):
            if len(w) != n or any(w[k] for k in range(i + 1)):
                raise ValueError(f"power word of g{i + 1} not above g{i + 1}")
        for i, row in enumerate(comms):
            if len(row) != i:
                raise ValueError("commutator table must be lower triangular")
            for j, w in enumerate(row):
                if len(w) != n or any(w[k] for k in range(i + 1)):
                    raise ValueError(
                        f"commutator word [g{i + 1},g{j + 1}] not above g{i + 1}")
        self.p = p
        self.n = n
        self.powers = powers
        self.comms = comms
        self.weights = tuple(weights) if weights is not None else None
        self.definitions = tuple(definitions) if definitions is not None else None
        self._rg_cache = {}
        self._conj_cache = {}
        self._inv_gens = None
        self._attr_cache = {}

    # -- identity and generators ------------------------------------------

    @property
    def identity(self):
        return (0,) * self.n

    def gen(self, i):
        """The i-th pc generator, 0-based."""
        if not 0 <= i < self.n:
            raise IndexError(f"generator index {i} out of range")
        return tuple(1 if k == i else 0 for k in range(self.n))

    def gens(self):
        return [self.gen(i) for i in range(self.n)]

    @property
    def order(self):
        return self.p ** self.n

    # -- collection --------------------------------------------------------

    def _conj(self, m, j):
        # g_j^-1 g_m g_j = g_m [g_m, g_j]; disjoint ordered supports
        key = (m, j)
        res = self._conj_cache.get(key)
        if res is None:
            w = self.comms[m][j]
            res = tuple((1 if k == m else 0) + w[k] for k in range(self.n))
            self._conj_cache[key] = res
        return res

    def _rg(self, ev, j):
        """Normal form of ev * g_j."""
        key = (ev, j)
        res = self._rg_cache.get(key)
        if res is not None:
            return res
        p = self.p
        m = -1
        for k in range(self.n - 1, j, -1):
            if ev[k]:
                m = k
                break
        if m < 0:
            e = ev[j] + 1
            if e < p:
                res = ev[:j] + (e,) + ev[j + 1:]
            else:
                pw = self.powers[j]
                res = ev[:j] + (0,) * (self.n - j)
                res = tuple(a + b for a, b in zip(res, pw))
        else:
            head = ev[:m] + (0,) + ev[m + 1:]
            res = self._rg(head, j)
            conj = self._conj(m, j)
            for _ in range(ev[m]):
                res = self.mult(res, conj)
        self._rg_cache[key] = res
        return res

    def mult(self, x, y):
        res = x
        rg = self._rg
        for j in range(self.n):
            for _ in range(y[j]):
                res = rg(res, j)
        return res

    def inv(self, x):
        p = self.p
        y = self.identity
        z = x
        for i in range(self.n):
            e = (-z[i]) % p
            if e:
                w = tuple(e if k == i else 0 for k in range(self.n))
                y = self.mult(y, w)
                z = self.mult(z, w)
        return y

    def power(self, x, k):
        if k < 0:
            return self.power(self.inv(x), -k)
        res = self.identity
        sq = x
        while k:
            if k & 1:
                res = self.mult(res, sq)
            k >>= 1
            if k:
                sq = self.mult(sq, sq)
        return res

    def collect(self, word):
        """Normal form of a word given as signed 1-based generator indices."""
        if self._inv_gens is None:
            self._inv_gens = [self.inv(self.gen(i)) for i in range(self.n)]
        res = self.identity
        for s in word:
            if not 1 <= abs(s) <= self.n:
                raise IndexError(f"generator index {s} out of range")
            if s > 0:
                res = self._rg(res, s - 1)
            else:
                res = self.mult(res, self._inv_gens[-s - 1])
        return res

    def commutator(self, a, b):
        return self.mult(self.mult(self.inv(a), self.inv(b)), self.mult(a, b))

    def conjugate(self, a, b):
        """b^-1 a b."""
        return self.mult(self.inv(b), self.mult(a, b))

    def element_order(self, x):
        o = 1
        while x != self.identity:
            x = self.power(x, self.p)
            o *= self.p
        return o

    # -- consistency --------------------------------------------------------

    def consistency_failures(self):
        """All failing Havas-Newman test triples; empty iff consistent."""
        fails = []
        gv = [self.gen(i) for i in range(self.n)]
        for k in range(self.n):
            for j in range(k):
                for i in range(j):
                    lhs = self.mult(self.mult(gv[k], gv[j]), gv[i])
                    rhs = self.mult(gv[k], self.mult(gv[j], gv[i]))
                    if lhs != rhs:
                        fails.append(("assoc", i, j, k, lhs, rhs))
        for j in range(self.n):
            for i in range(j):
                lhs = self.mult(self.powers[j], gv[i])
                rhs = self.mult(self.power(gv[j], self.p - 1),
                                self.mult(gv[j], gv[i]))
                if lhs != rhs:
                    fails.append(("power-left", i, j, lhs, rhs))
                lhs = self.mult(gv[j], self.powers[i])
                rhs = self.mult(self.mult(gv[j], gv[i]),
                                self.power(gv[i], self.p - 1))
                if lhs != rhs:
                    fails.append(("power-right", i, j, lhs, rhs))
        for i in range(self.n):
            lhs = self.mult(gv[i], self.powers[i])
            rhs = self.mult(self.powers[i], gv[i])
            if lhs != rhs:
                fails.append(("power-self", i, lhs, rhs))
        return fails

    def is_consistent(self):
        return not self.consistency_failures()

    # -- structural identity -------------------------------------------------

    def _core(self):
        return (self.p, self.n, self.powers, self.comms)

    def __eq__(self, other):
        return isinstance(other, PcGroup) and self._core() == other._core()

    def __hash__(self):
        return hash(self._core())

    def __repr__(self):
        return f"PcGroup(p={self.p}, order={self.p}^{self.n})"


# -- subgroups ---------------------------------------------------------------


class SubgroupHandle:
    """A subgroup with an echelonized induced generating sequence.

    canonical_gens are fully reduced: each has leading coefficient 1 and
    zeros at the leading indices of the others, so two handles describe
    the same subgroup iff their canonical_gens tuples are equal.
    """

    __slots__ = ("owner", "generators", "slots", "canonical_gens", "size",
                 "_elements", "_normal")

    def __init__(self, owner, generators, slots):
        self.owner = owner
        self.generators = tuple(generators)
        self.slots = dict(slots)
        self.canonical_gens = tuple(self.slots[l] for l in sorted(self.slots))
        self.size = owner.p ** len(self.slots)
        self._elements = None
        self._normal = None

    def __eq__(self, other):
        return (isinstance(other, SubgroupHandle)
                and self.owner is other.owner
                and self.canonical_gens == other.canonical_gens)

    def __hash__(self):
        return hash((id(self.owner), self.canonical_gens))

    def __repr__(self):
        return f"SubgroupHandle(order={self.owner.p}^{len(self.slots)})"

    def sift(self, x):
        G = self.owner
        p = G.p
        for i in range(G.n):
            if x[i]:
                u = self.slots.get(i)
                if u is None:
                    return x
                x = G.mult(G.power(u, (-x[i]) % p), x)
        return x

    def contains(self, x):
        return self.sift(x) == self.owner.identity

    def contains_subgroup(self, other):
        return all(self.contains(u) for u in other.canonical_gens)

    def elements(self):
        if self._elements is None:
            G = self.owner
            elems = [G.identity]
            for u in self.canonical_gens:
                pw = [G.identity]
                for _ in range(G.p - 1):
                    pw.append(G.mult(pw[-1], u))
                elems = [G.mult(x, q) for x in elems for q in pw]
            self._elements = tuple(elems)
        return self._elements

    def is_normal(self):
        if self._normal is None:
            G = self.owner
            self._normal = all(
                self.contains(G.conjugate(u, G.gen(i)))
                for u in self.canonical_gens for i in range(G.n))
        return self._normal

    def dim(self):
        return len(self.slots)


def _close(G, gens, conjugators=()):
    """Echelonized closure of gens, optionally under conjugation.

    conjugators: elements of G by which the result must be closed under
    conjugation (pass G's pc generators for a normal closure).
    """
    p = G.p
    slots = {}

    def sift(x):
        for i in range(G.n):
            if x[i]:
                u = slots.get(i)
                if u is None:
                    return x, i
                x = G.mult(G.power(u, (-x[i]) % p), x)
        return x, -1

    queue = [x for x in gens]
    while queue:
        x = queue.pop()
        x, lead = sift(x)
        if lead < 0:
            continue
        x = G.power(x, modp.inv_mod(x[lead], p))
        slots[lead] = x
        queue.append(G.power(x, p))
        for u in list(slots.values()):
            if u is not x:
                queue.append(G.commutator(x, u))
        for c in conjugators:
            queue.append(G.conjugate(x, c))
        # new slot may open reductions for queued items only; existing
        # slots stay valid, but conjugation closure must cover them too
        if conjugators:
            for u in list(slots.values()):
                for c in conjugators:
                    queue.append(G.conjugate(u, c))

    # full reduction for canonical form
    leads = sorted(slots)
    changed = True
    while changed:
        changed = False
        for l in leads:
            u = slots[l]
            for l2 in leads:
                if l2 > l and u[l2]:
                    u = G.mult(u, G.power(slots[l2], (-u[l2]) % p))
            if u != slots[l]:
                slots[l] = u
                changed = True
    return slots


def subgroup(G, gens):
    """Smallest subgroup of G containing gens."""
    for x in gens:
        if len(x) != G.n:
            raise ValueError("element does not belong to this group")
    return SubgroupHandle(G, gens, _close(G, gens))


def normal_closure(G, gens):
    """Smallest normal subgroup of G containing gens."""
    for x in gens:
        if len(x) != G.n:
            raise ValueError("element does not belong to this group")
    return SubgroupHandle(G, gens, _close(G, gens, conjugators=G.gens()))


def trivial_subgroup(G):
    return subgroup(G, [])


def whole_group(G):
    return subgroup(G, G.gens())


def _check_owner(G, H):
    if H.owner is not G:
        raise ValueError("subgroup handle owned by a different group")


def commutator_subgroup(G, A, B):
    """[A, B], the subgroup generated by all commutators [a, b].

    For normal A, B this is the normal closure of the generator
    commutators; otherwise all elements are enumerated (the handles are
    small in every use this package makes).
    """
    _check_owner(G, A)
    _check_owner(G, B)
    if A.is_normal() and B.is_normal():
        gens = [G.commutator(a, b)
                for a in A.canonical_gens for b in B.canonical_gens]
        return normal_closure(G, gens)
    gens = [G.commutator(a, b) for a in A.elements() for b in B.elements()]
    return subgroup(G, gens)


def agemo(G, H, i=1):
    """The normal subgroup generated by p^i-th powers of elements of H.

    For normal H, the normal closure X of the p^i-th powers of H's
    canonical generators already lies inside the result, so the result
    equals the preimage of agemo computed in G/X; only the (much
    smaller) image of H there is enumerated.  Non-normal H falls back
    to direct enumeration.
    """
    _check_owner(G, H)
    if i < 0:
        raise ValueError("agemo exponent must be nonnegative")
    q = G.p ** i
    if not H.is_normal():
        gens = {G.power(x, q) for x in H.elements()}
        gens.discard(G.identity)
        return normal_closure(G, sorted(gens))
    X = normal_closure(G, [G.power(u, q) for u in H.canonical_gens])
    if X.size == 1:
        gens = {G.power(x, q) for x in H.elements()}
        gens.discard(G.identity)
        return normal_closure(G, sorted(gens))
    Q, proj = quotient(G, X)
    imgH = subgroup(Q, [proj.apply(u) for u in H.canonical_gens])
    Y = agemo(Q, imgH, i)
    sec = quotient_section(G, X, Q)
    gens = [sec(y) for y in Y.canonical_gens] + list(X.canonical_gens)
    return normal_closure(G, gens)


def frattini_subgroup(G):
    """Fr(G) = agemo_1(G)[G,G], without enumerating G.

    Modulo [G,G] the agemo is generated by generator p-th powers, so the
    normal closure of generator powers and generator commutators is the
    whole Frattini subgroup.
    """
    key = "frattini"
    got = G._attr_cache.get(key)
    if got is None:
        gens = [G.powers[i] for i in range(G.n)]
        gens += [G.comms[i][j] for i in range(G.n) for j in range(i)]
        got = normal_closure(G, gens)
        G._attr_cache[key] = got
    return got


def lower_p_central_step(G, H):
    """The next lower p-central term below the normal subgroup H.

    Returns agemo_1(H)[G,H]; modulo [G,H] the agemo part is generated by
    p-th powers of H's canonical generators, so no enumeration is needed.
    """
    _check_owner(G, H)
    gens = [G.power(u, G.p) for u in H.canonical_gens]
    gens += [G.commutator(u, G.gen(i))
             for u in H.canonical_gens for i in range(G.n)]
    return normal_closure(G, gens)


def p_central_series(G):
    """[G, P_1(G), P_2(G), ..., 1] with P_{j+1} = agemo_1(P_j)[G, P_j]."""
    key = "p_central"
    got = G._attr_cache.get(key)
    if got is None:
        terms = [whole_group(G)]
        while terms[-1].size > 1:
            terms.append(lower_p_central_step(G, terms[-1]))
        got = terms
        G._attr_cache[key] = got
    return got


def p_class(G):
    return len(p_central_series(G)) - 1


def minimal_gen_indices(G):
    """Indices of pc generators forming a minimal generating set."""
    if G.definitions is not None:
        return [i for i in range(G.n) if G.definitions[i] is None]
    fr = frattini_subgroup(G)
    picked = []
    cur = fr
    for i in range(G.n):
        if not cur.contains(G.gen(i)):
            picked.append(i)
            cur = subgroup(G, list(cur.canonical_gens) + [G.gen(i)])
    return picked


def generator_rank(G):
    """d(G) = dim G / Fr(G)."""
    return G.n - frattini_subgroup(G).dim()


def center(G):
    key = "center"
    got = G._attr_cache.get(key)
    if got is None:
        gv = G.gens()
        members = [x for x in whole_group(G).elements()
                   if all(G.commutator(x, g) == G.identity for g in gv)]
        got = subgroup(G, members)
        G._attr_cache[key] = got
    return got


def derived_subgroup(G):
    W = whole_group(G)
    return commutator_subgroup(G, W, W)


def abelian_invariants(G, H=None):
    """Elementary divisors of H/[H,H], ascending (H defaults to G).

    Computed from the agemo dimension profile of the abelianization:
    t_k = log_p |agemo_k(A)| determines the partition conjugate to the
    divisor exponents.
    """
    if H is None:
        H = whole_group(G)
    _check_owner(G, H)
    if H.is_normal():
        der = commutator_subgroup(G, H, H)
    else:
        der = subgroup(G, [G.commutator(a, b)
                           for a in H.elements() for b in H.elements()])
    p = G.p
    t = []
    k = 0
    while True:
        q = p ** k
        gens = list(der.canonical_gens)
        gens += [G.power(u, q) for u in H.canonical_gens]
        U = subgroup(G, gens)
        t.append(U.dim() - der.dim())
        if t[-1] == 0:
            break
        k += 1
    invs = []
    for j in range(1, len(t)):
        above_j = t[j - 1] - t[j]
        above_j1 = (t[j] - t[j + 1]) if j + 1 < len(t) else 0
        invs += [p ** j] * (above_j - above_j1)
    return sorted(invs)


def order_histogram(G):
    """Map element order -> count, over all of G."""
    key = "orderhist"
    got = G._attr_cache.get(key)
    if got is None:
        hist = {}
        for x in whole_group(G).elements():
            o = G.element_order(x)
            hist[o] = hist.get(o, 0) + 1
        got = hist
        G._attr_cache[key] = got
    return got


# -- quotients and maps -------------------------------------------------------


class GroupMap:
    """A homomorphism given by images of the source's pc generators."""

    __slots__ = ("source", "target", "images")

    def __init__(self, source, target, images):
        if len(images) != source.n:
            raise ValueError("one image per source generator required")
        self.source = source
        self.target = target
        self.images = tuple(images)

    def apply(self, x):
        T = self.target
        res = T.identity
        for i in range(self.source.n):
            if x[i]:
                res = T.mult(res, T.power(self.images[i], x[i]))
        return res

    __call__ = apply

    def is_valid(self, skip_defining=False):
        """Whether all pc relations of the source hold for the images.

        skip_defining=True omits relations recorded as generator
        definitions; images produced by extend_from_minimal satisfy
        those by construction.
        """
        S, T = self.source, self.target
        defining = set()
        if skip_defining and S.definitions is not None:
            for dfn in S.definitions:
                if dfn is not None:
                    defining.add(dfn)
        for i in range(S.n):
            if ("p", i) not in defining:
                lhs = T.power(self.images[i], S.p)
                if lhs != self.apply(S.powers[i]):
                    return False
            for j in range(i):
                if ("c", i, j) in defining:
                    continue
                lhs = T.commutator(self.images[i], self.images[j])
                if lhs != self.apply(S.comms[i][j]):
                    return False
        return True

    def __eq__(self, other):
        return (isinstance(other, GroupMap)
                and self.source is other.source
                and self.target is other.target
                and self.images == other.images)

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.images))

    def is_identity(self):
        return (self.source is self.target
                and self.images == tuple(self.source.gens()))

    def image(self):
        return subgroup(self.target, self.images)

    def kernel_dim(self):
        return self.source.n - self.image().dim()

    def kernel(self):
        """Ker(self) without enumerating the source.

        Sift the graph subgroup <(f(g_i), g_i)> inside target x source
        (target coordinates first): the echelonized generators whose
        leading index lies in the source block span exactly the kernel.
        """
        S, T = self.source, self.target
        D = direct_product(T, S)
        graph = [tuple(self.images[i]) + tuple(S.gen(i)) for i in range(S.n)]
        slots = _close(D, graph)
        gens = [x[T.n:] for lead, x in sorted(slots.items()) if lead >= T.n]
        return subgroup(S, gens)

    def compose(self, other):
        """self after other (other: A -> source, result: A -> target)."""
        if other.target is not self.source:
            raise ValueError("maps not composable")
        return GroupMap(other.source, self.target,
                        [self.apply(im) for im in other.images])

    def push_subgroup(self, H):
        return subgroup(self.target, [self.apply(u) for u in H.canonical_gens])


def homomorphism(source, target, images):
    """The GroupMap with the given generator images, or None if invalid."""
    gm = GroupMap(source, target, images)
    return gm if gm.is_valid() else None


def quotient(G, N):
    """(G/N, projection).  N must be normal; this is always verified."""
    _check_owner(G, N)
    if not N.is_normal():
        raise ValueError("cannot quotient by a non-normal subgroup")
    p = G.p
    leads = set(N.slots)
    M = [i for i in range(G.n) if i not in leads]

    def rep(x):
        for i in range(G.n):
            if i in leads and x[i]:
                x = G.mult(x, G.power(N.slots[i], (-x[i]) % p))
        return x

    def toq(x):
        r = rep(x)
        assert all(r[i] == 0 for i in leads)
        return tuple(r[i] for i in M)

    k = len(M)
    powers = [toq(G.powers[m]) for m in M]
    comms = [[toq(G.comms[M[a]][M[b]]) for b in range(a)] for a in range(k)]
    weights = None
    if G.weights is not None:
        weights = [G.weights[m] for m in M]
    Q = PcGroup(p, k, powers, comms, weights=weights)
    proj = GroupMap(G, Q, [toq(G.gen(i)) for i in range(G.n)])
    return Q, proj


def quotient_section(G, N, Q):
    """The canonical set-section Q -> G of quotient(G, N) (coset reps)."""
    leads = set(N.slots)
    M = [i for i in range(G.n) if i not in leads]

    def section(q):
        x = [0] * G.n
        for a, m in enumerate(M):
            x[m] = q[a]
        return tuple(x)

    return section


# -- standardized presentations ----------------------------------------------


def standardize(G):
    """Rebuild G on a weighted pcgs with definitions.

    Returns (S, iso, dec) where S is an isomorphic PcGroup whose
    generators are ordered by lower p-central weight, every non-minimal
    generator carries a definition (a power or a commutator of earlier
    ones), iso: S -> G maps S's generators to the chosen pcgs elements,
    and dec is the inverse on elements (G-element -> S-element).
    """
    p = G.p
    mins = minimal_gen_indices(G)
    d = len(mins)
    pcgs = [G.gen(i) for i in mins]          # exact elements
    defs = [None] * d
    wts = [1] * d
    series = p_central_series(G)             # [G, P_1, ..., 1]

    def lead_of(x):
        for i in range(G.n):
            if x[i]:
                return i
        return G.n

    if d != G.n - len(series[1].slots):
        raise ValueError("minimal generators not independent")

    # Weight w+1 elements are p-th powers and minimal-generator
    # commutators of the weight-w ones; these span P_w/P_{w+1}, so a
    # candidate joins the pcgs exactly if it is independent modulo
    # P_{w+1}, which sifting against an echelon basis extended from the
    # P_{w+1} handle decides.  (Greedy sifting without the series is
    # wrong: a minimal generator's p-th power may fall into a deeper
    # term than P_1 and must not be assigned weight 2 then.)
    for w in range(1, len(series) - 1):
        slots = dict(series[w + 1].slots)
        want = len(series[w].slots) - len(series[w + 1].slots)
        block = []  # (element, definition) of weight w+1
        for idx in range(len(pcgs)):
            if wts[idx] != w:
                continue
            u = pcgs[idx]
            # commutator definitions keep the higher generator first so
            # they coincide with entries of the relation table
            cands = [(G.power(u, p), ("p", idx))]
            for b in range(d):
                if b < idx:
                    cands.append((G.commutator(u, pcgs[b]), ("c", idx, b)))
            for val, dfn in cands:
                x = val
                l = -1
                for i in range(G.n):
                    if x[i]:
                        s = slots.get(i)
                        if s is None:
                            l = i
                            break
                        x = G.mult(G.power(s, (-x[i]) % p), x)
                if l < 0:
                    continue
                slots[l] = G.power(x, modp.inv_mod(x[l], p))
                block.append((val, dfn))
        if len(block) != want:
            raise ValueError(
                f"pcgs discovery found {len(block)} weight-{w + 1} "
                f"elements, expected {want}")
        block.sort(key=lambda t: lead_of(t[0]))
        for val, dfn in block:
            pcgs.append(val)
            defs.append(dfn)
            wts.append(w + 1)
    if len(pcgs) != G.n:
        raise ValueError("pcgs discovery did not exhaust the group")

    # tails of the polycyclic series H_a = <pcgs[a], pcgs[a+1], ...>
    tails = [None] * (G.n + 1)
    tails[G.n] = {}
    for a in range(G.n - 1, -1, -1):
        gens = [pcgs[a]] + list(tails[a + 1].values())
        tails[a] = _close(G, gens)
        if len(tails[a]) != G.n - a:
            raise ValueError("pcgs does not form a polycyclic series")

    def _sift_by(slots, x):
        for i in range(G.n):
            if x[i]:
                u = slots.get(i)
                if u is None:
                    return x
                x = G.mult(G.power(u, (-x[i]) % p), x)
        return x

    def _in_tail(slots, x):
        x = _sift_by(slots, x)
        return x == G.identity

    inv_pcgs = [G.inv(u) for u in pcgs]

    def decompose(x):
        e = [0] * G.n
        for a in range(G.n):
            nxt = tails[a + 1]
            for c in range(p):
                if _in_tail(nxt, x):
                    e[a] = c
                    break
                x = G.mult(inv_pcgs[a], x)
            else:
                raise ValueError("element outside span of pcgs")
        return tuple(e)

    powers = [decompose(G.power(u, p)) for u in pcgs]
    comms = [[decompose(G.commutator(pcgs[a], pcgs[b])) for b in range(a)]
             for a in range(G.n)]
    S = PcGroup(p, G.n, powers, comms, weights=wts, definitions=defs)
    iso = GroupMap(S, G, pcgs)
    return S, iso, decompose


def extend_from_minimal(S, target, min_images):
    """Images of all of S's generators given images of its minimal ones.

    S must carry definitions.  The extension follows them; validity as a
    homomorphism is not checked here.
    """
    if S.definitions is None:
        raise ValueError("group carries no definitions; standardize first")
    mins = [i for i in range(S.n) if S.definitions[i] is None]
    if len(min_images) != len(mins):
        raise ValueError("wrong number of minimal-generator images")
    images = [None] * S.n
    for i, im in zip(mins, min_images):
        images[i] = im
    T = target
    for i in range(S.n):
        if images[i] is not None:
            continue
        dfn = S.definitions[i]
        if dfn[0] == "p":
            images[i] = T.power(images[dfn[1]], S.p)
        else:
            images[i] = T.commutator(images[dfn[1]], images[dfn[2]])
    return images


# -- serialization -------------------------------------------------------------


def _word_to_text(w):
    return " ".join(f"g{k + 1}^{e}" for k, e in enumerate(w) if e)


def _word_from_text(s, n, p):
    w = [0] * n
    for tok in s.split():
        if not tok.startswith("g") or "^" not in tok:
            raise ValueError(f"bad word token {tok!r}")
        gs, es = tok[1:].split("^", 1)
        k, e = int(gs), int(es)
        if not 1 <= k <= n:
            raise ValueError(f"generator g{k} out of range")
        w[k - 1] = e % p
    return tuple(w)


def to_text(G):
    lines = [f"pcgroup p={G.p} n={G.n}"]
    for i in range(G.n):
        lines.append(f"g{i + 1}^p = {_word_to_text(G.powers[i])}".rstrip())
    for i in range(G.n):
        for j in range(i):
            if any(G.comms[i][j]):
                lines.append(
                    f"[g{i + 1},g{j + 1}] = {_word_to_text(G.comms[i][j])}")
    return "\n".join(lines) + "\n"


def from_text(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty pcgroup text")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "pcgroup":
        raise ValueError(f"bad header {lines[0]!r}")
    p = int(head[1].removeprefix("p="))
    n = int(head[2].removeprefix("n="))
    powers = [(0,) * n for _ in range(n)]
    comms = [[(0,) * n for _ in range(i)] for i in range(n)]
    for ln in lines[1:]:
        if "=" not in ln:
            raise ValueError(f"bad relation line {ln!r}")
        lhs, rhs = ln.split("=", 1)
        lhs = lhs.strip()
        w = _word_from_text(rhs, n, p)
        if lhs.startswith("[") and lhs.endswith("]"):
            gi, gj = lhs[1:-1].split(",")
            i, j = int(gi.strip()[1:]) - 1, int(gj.strip()[1:]) - 1
            if not (0 <= j < i < n):
                raise ValueError(f"bad commutator indices in {ln!r}")
            comms[i][j] = w
        elif lhs.endswith("^p"):
            i = int(lhs[1:-2]) - 1
            if not 0 <= i < n:
                raise ValueError(f"bad power index in {ln!r}")
            powers[i] = w
        else:
            raise ValueError(f"bad relation line {ln!r}")
    return PcGroup(p, n, powers, comms)


# -- stock constructions -------------------------------------------------------


def elementary_abelian(p, r):
    z = (0,) * r
    return PcGroup(p, r, [z] * r, [[z] * i for i in range(r)],
                   weights=[1] * r, definitions=[None] * r)


def direct_product(A, B):
    """A x B with A's pc generators first, B's after (blocks commute)."""
    if A.p != B.p:
        raise ValueError("direct product requires equal primes")
    nA, nB, n = A.n, B.n, A.n + B.n
    z = (0,) * n

    def left(w):
        return tuple(w) + (0,) * nB

    def right(w):
        return (0,) * nA + tuple(w)

    powers = [left(A.powers[i]) for i in range(nA)]
    powers += [right(B.powers[i]) for i in range(nB)]
    comms = [[left(A.comms[i][j]) for j in range(i)] for i in range(nA)]
    for i in range(nB):
        comms.append([z] * nA + [right(B.comms[i][j]) for j in range(i)])
    return PcGroup(A.p, n, powers, comms)


def cyclic(p, k):
    """C_{p^k} as a pc group on k generators."""
    powers = []
    for i in range(k):
        w = [0] * k
        if i + 1 < k:
            w[i + 1] = 1
        powers.append(tuple(w))
    comms = [[(0,) * k] * i for i in range(k)]
    defs = [None] + [("p", i) for i in range(k - 1)]
    return PcGroup(p, k, powers, comms,
                   weights=list(range(1, k + 1)), definitions=defs)


from .isomorphism import (  # noqa: E402  (re-export, see module docstring)
    is_isomorphic, find_isomorphism, automorphism_count, automorphisms_with,
)

__all__ = [
    "PcGroup", "SubgroupHandle", "GroupMap", "Element",
    "subgroup", "normal_closure", "trivial_subgroup", "whole_group",
    "commutator_subgroup", "agemo", "frattini_subgroup",
    "lower_p_central_step", "p_central_series", "p_class",
    "minimal_gen_indices", "generator_rank", "center", "derived_subgroup",
    "abelian_invariants", "order_histogram",
    "homomorphism", "quotient", "quotient_section", "standardize",
    "extend_from_minimal", "to_text", "from_text",
    "elementary_abelian", "cyclic", "direct_product",
    "is_isomorphic", "find_isomorphism",
    "automorphism_count", "automorphisms_with",
]
