"""Linear algebra over F_p against direct enumeration and Hypothesis
round-trip properties."""

import itertools

from hypothesis import given, settings, strategies as st

from schur_sigma import modp

PRIMES = [2, 3, 5]


def vectors(p, n):
    return st.tuples(*[st.integers(0, p - 1)] * n)


def matrices(p, n, m):
    return st.lists(vectors(p, m), min_size=0, max_size=n).map(tuple)


def brute_span(rows, p, n):
    """All linear combinations of the rows, as a set."""
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = tuple(sum(c * r[i] for c, r in zip(coeffs, rows)) % p
                  for i in range(n))
        out.add(v)
    return out


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES), matrices(3, 4, 4).map(list))
def test_rref_preserves_span(p, rows):
    rows = [tuple(x % p for x in r) for r in rows]
    red, pivots = modp.rref(tuple(rows), p)
    assert brute_span(rows, p, 4) == brute_span(red, p, 4)
    # pivots strictly increasing, pivot entries 1, cleared columns
    assert list(pivots) == sorted(set(pivots))
    for r, c in zip(red, pivots):
        assert r[c] == 1
        assert all(other[c] == 0 for other in red if other is not r)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4, 3), vectors(3, 3))
def test_solve_matches_enumeration(a, x):
    p = 3
    b = tuple(sum(r[i] * x[i] for i in range(3)) % p for r in a)
    if a:
        got = modp.solve(a, b, p)
        assert got is not None
        assert tuple(sum(r[i] * got[i] for i in range(3)) % p
                     for r in a) == b


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4, 4))
def test_nullspace_is_exact_kernel(a):
    p, n = 3, 4
    basis = modp.nullspace(a, p, n)
    kernel = {v for v in itertools.product(range(p), repeat=n)
              if all(sum(r[i] * v[i] for i in range(n)) % p == 0
                     for r in a)}
    assert brute_span(basis, p, n) == kernel


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3, 4), vectors(3, 3))
def test_solve_affine_enumerates_all_solutions(a, b):
    p, n = 3, 4
    got = modp.solve_affine(a, b, p, n)
    expected = {v for v in itertools.product(range(p), repeat=n)
                if all(sum(r[i] * v[i] for i in range(n)) % p == bi
                       for r, bi in zip(a, b))}
    if got is None:
        assert not expected
    else:
        part, basis = got
        assert set(modp.affine_points(part, basis, p)) == expected


def test_subspaces_counts_match_gaussian_binomial():
    for n in range(5):
        for k in range(n + 1):
            subs = modp.subspaces(3, n, k)
            assert len(subs) == modp.num_subspaces(3, n, k)
            assert len(set(subs)) == len(subs)
            for m in subs:
                red, _ = modp.rref(m, 3)
                assert red == m  # already canonical


def test_subspaces_are_distinct_as_spans():
    subs = modp.subspaces(3, 3, 2)
    spans = {frozenset(brute_span(m, 3, 3)) for m in subs}
    assert len(spans) == len(subs) == 13


def test_gl_elements_order():
    # |GL_2(F_3)| = (9-1)(9-3) = 48
    mats = modp.gl_elements(3, 2)
    assert len(mats) == 48
    assert len(set(mats)) == 48
    # closed under multiplication and inversion
    i2 = modp.identity_mat(2)
    assert i2 in mats
    sample = mats[:8]
    for a in sample:
        for b in sample:
            assert modp.mat_mul(a, b, 3) in set(mats)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 20))
def test_inv_mod(p, a):
    if a % p:
        assert (a * modp.inv_mod(a, p)) % p == 1


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3, 4), vectors(3, 4))
def test_in_span_matches_enumeration(rows, v):
    assert modp.in_span(v, rows, 3) == (v in brute_span(rows, 3, 4))
