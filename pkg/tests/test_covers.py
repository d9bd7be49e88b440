"""p-covers and immediate descendants against small known cases."""

import pytest

from schur_sigma import covers as cv, pcgroup as pg

from conftest import (abelian, cyclic, heisenberg27, modular27,
                      oracle_is_isomorphic)


def e9():
    return abelian(3, [3, 3])


def test_cover_of_e9():
    cov = cv.p_cover(e9())
    # free 2-generator group of exponent-p class 2: order 3^5,
    # multiplicator C3 x C3 x C3, nucleus the whole multiplicator
    assert cov.cover.order == 3 ** 5
    assert cov.mu_rank == 3
    assert cov.nu_rank == 3
    assert cov.projection.is_valid()
    assert cov.multiplicator.size == 27
    # projection kernel is the multiplicator
    assert (set(cov.projection.kernel().elements())
            == set(cov.multiplicator.elements()))


def test_cover_of_c3():
    cov = cv.p_cover(cyclic(3, 1))
    # cover of C3 is C9
    assert cov.cover.order == 9
    assert pg.abelian_invariants(cov.cover) == [9]
    assert cov.mu_rank == 1


def test_descendants_of_e9_step1():
    desc = cv.immediate_descendants(e9(), 1)
    assert len(desc) == 3
    known = [heisenberg27(), modular27(), abelian(3, [3, 9])]
    for K in desc:
        assert K.order == 27
        assert pg.p_class(K) == 2
        matches = [H for H in known if oracle_is_isomorphic(K, H)]
        assert len(matches) == 1
        known.remove(matches[0])
    assert not known  # every expected group accounted for


def test_descendants_of_e9_step2():
    desc = cv.immediate_descendants(e9(), 2)
    for K in desc:
        assert K.order == 81
        assert pg.p_class(K) == 2
        # the step-1 quotient relation: K/P_1(K) is elementary of rank 2
        Q, _ = pg.quotient(K, pg.p_central_series(K)[1])
        assert pg.abelian_invariants(Q) == [3, 3]
    # C9xC9, C27 quotient? no: exactly the class-2 order-81 descendants;
    # pairwise non-isomorphic by construction, verify with the oracle
    for i, K in enumerate(desc):
        for other in desc[:i]:
            assert not oracle_is_isomorphic(K, other)


def test_descendant_completeness_step1():
    """Every allowable subspace quotient of class 2 is isomorphic to one
    of the returned descendants."""
    G = e9()
    cov = cv.p_cover(G)
    desc = cv.immediate_descendants(G, 1)
    for rows in cv.allowable_subspaces(cov, 1):
        K = cv.quotient_by_subspace(cov, rows)
        if pg.p_class(K) != 2:
            continue
        assert sum(1 for H in desc if oracle_is_isomorphic(K, H)) == 1


def test_allowable_subspaces_complement_nucleus():
    cov = cv.p_cover(modular27())
    for step in (1, 2):
        subs = cv.allowable_subspaces(cov, step)
        nuc = [cv._tail_coords(cov, u) for u in cov.nucleus.canonical_gens]
        for rows in subs:
            assert len(rows) == cov.mu_rank - step
            assert cv.modp.rank(list(rows) + nuc, 3) == cov.mu_rank


def test_descendants_rejects_bad_arguments():
    with pytest.raises(ValueError):
        cv.immediate_descendants(e9(), 0)
    big = abelian(3, [3, 3, 3, 3])
    with pytest.raises(ValueError):
        cv.p_cover(big)  # generator rank above the supported bound
