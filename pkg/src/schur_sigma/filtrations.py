"""Zassenhaus filtration, lower p-central series and relative Frattini.

Terminology: D_1(G) = G and

    D_i(G) = agemo_1(D_{ceil(i/p)}(G)) * prod_{j+k=i} [D_j(G), D_k(G)],

with D_2 the Frattini subgroup; P_0(G) = G and
P_{j+1}(G) = agemo_1(P_j(G)) [G, P_j(G)], the lower p-central series;
the p-class is the least j with P_j(G) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import pcgroup as pg


@dataclass(frozen=True)
class FiltrationChain:
    kind: str                    # "zassenhaus" | "lower_p_central"
    terms: tuple                 # descending SubgroupHandles, G .. 1
    graded_dims: tuple           # F_p-dimensions of successive quotients

    def __post_init__(self):
        for a, b in zip(self.terms, self.terms[1:]):
            if not a.contains_subgroup(b):
                raise ValueError("filtration terms not descending")


def _chain(kind, terms):
    dims = tuple(terms[i].dim() - terms[i + 1].dim()
                 for i in range(len(terms) - 1))
    return FiltrationChain(kind, tuple(terms), dims)


def zassenhaus_chain(G):
    """The full Zassenhaus chain [D_1, D_2, ..., 1]."""
    got = G._attr_cache.get("zassenhaus")
    if got is not None:
        return got
    terms = [pg.whole_group(G)]
    while terms[-1].size > 1:
        i = len(terms) + 1
        ceil = -(-i // G.p)
        # agemo_1(D_c) collapses to the generator p-th powers here: the
        # commutator part contains [D_{i-c}, D_c] >= [[D_c, D_c], D_c]
        # (as 2c >= i - c), so modulo it the image of D_c has class
        # <= 2, where for odd p the p-th power map is multiplicative up
        # to p-th powers that are themselves products of generator
        # powers and commutators already in the closure.
        gens = [G.power(u, G.p)
                for u in terms[ceil - 1].canonical_gens]
        for j in range(1, i):
            k = i - j
            if j <= len(terms) and k <= len(terms):
                C = pg.commutator_subgroup(G, terms[j - 1], terms[k - 1])
                gens += list(C.canonical_gens)
        terms.append(pg.normal_closure(G, gens))
    got = _chain("zassenhaus", terms)
    G._attr_cache["zassenhaus"] = got
    return got


def zassenhaus_term(G, i):
    """D_i(G); terms beyond the chain's length are trivial."""
    if i < 1:
        raise ValueError("Zassenhaus terms start at D_1")
    ch = zassenhaus_chain(G)
    return ch.terms[min(i, len(ch.terms)) - 1]


def lower_p_central_chain(G):
    terms = pg.p_central_series(G)
    return _chain("lower_p_central", terms)


def p_central_term(G, j):
    """P_j(G); terms beyond the chain's length are trivial."""
    if j < 0:
        raise ValueError("lower p-central terms start at P_0")
    ser = pg.p_central_series(G)
    return ser[min(j, len(ser) - 1)]


def p_class(G):
    return pg.p_class(G)


def relative_frattini(G, N):
    """N* = agemo_1(N) [G, N] for a normal subgroup N.

    Modulo [G, N] the subgroup N is abelian, so the agemo part is
    generated by p-th powers of N's canonical generators; no element
    enumeration is needed.
    """
    if not N.is_normal():
        raise ValueError("relative Frattini requires a normal subgroup")
    return pg.lower_p_central_step(G, N)


def frattini(G):
    return pg.frattini_subgroup(G)


@dataclass(frozen=True)
class InclusionReport:
    names: tuple                 # ("D2", "P1", "D3", "P2", "D4", "P3")
    subgroups: tuple
    verdicts: tuple              # between consecutive terms: "equal"/"proper"


def inclusion_chain_report(G):
    """Compare D_2, P_1, D_3, P_2, D_4, P_3 inside G."""
    subs = (
        ("D2", zassenhaus_term(G, 2)),
        ("P1", p_central_term(G, 1)),
        ("D3", zassenhaus_term(G, 3)),
        ("P2", p_central_term(G, 2)),
        ("D4", zassenhaus_term(G, 4)),
        ("P3", p_central_term(G, 3)),
    )
    verdicts = []
    for (_, a), (_, b) in zip(subs, subs[1:]):
        if not a.contains_subgroup(b):
            raise AssertionError("expected containment fails")
        verdicts.append("equal" if a.size == b.size else "proper")
    return InclusionReport(tuple(n for n, _ in subs),
                           tuple(s for _, s in subs), tuple(verdicts))
