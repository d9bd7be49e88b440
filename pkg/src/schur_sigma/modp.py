"""Exact linear algebra over the prime field F_p.

Vectors are tuples of ints in [0, p); matrices are tuples of row vectors.
Everything here is dense and tiny (at most a few hundred rows, <= 16
columns), so plain row reduction is the right tool.
"""

from __future__ import annotations

from itertools import combinations, product


def inv_mod(a: int, p: int) -> int:
    return pow(a % p, p - 2, p)


def rref(rows, p):
    """Reduced row echelon form.

    Returns (rows, pivots) where rows is a tuple of the nonzero rows and
    pivots the tuple of their pivot column indices, strictly increasing.
    """
    mat = [list(r) for r in rows if any(x % p for x in r)]
    for r in mat:
        for i, x in enumerate(r):
            r[i] = x % p
    ncols = len(mat[0]) if mat else 0
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(mat)):
            if mat[r][col]:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        c = inv_mod(mat[row][col], p)
        mat[row] = [(x * c) % p for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(x - f * y) % p for x, y in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
        if row == len(mat):
            break
    out = tuple(tuple(r) for r in mat[:row])
    return out, tuple(pivots)


def rank(rows, p) -> int:
    return len(rref(rows, p)[0])


def span_canonical(rows, p, ncols):
    """Canonical (RREF) representative of the row span inside F_p^ncols."""
    if not rows:
        return ()
    assert all(len(r) == ncols for r in rows)
    return rref(rows, p)[0]


def in_span(vec, rows, p):
    if not any(x % p for x in vec):
        return True
    base = rref(rows, p)[0]
    return len(rref(base + (tuple(vec),), p)[0]) == len(base)


def solve(a_rows, b, p):
    """One solution x of A x = b, or None.  A given by rows."""
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [list(r) + [bi % p] for r, bi in zip(a_rows, b)]
    red, pivots = rref(tuple(tuple(r) for r in aug), p) if aug else ((), ())
    x = [0] * n
    for r, c in zip(red, pivots):
        if c == n:
            return None
        x[c] = r[-1]
    return tuple(x)


def nullspace(a_rows, p, n):
    """Basis of {x in F_p^n : A x = 0}, A given by rows of length n."""
    red, pivots = rref(tuple(tuple(r) for r in a_rows), p) if a_rows else ((), ())
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, c in zip(red, pivots):
            v[c] = (-r[f]) % p
        basis.append(tuple(v))
    return tuple(basis)


def solve_affine(a_rows, b, p, n):
    """All solutions of A x = b as (particular, nullspace basis), or None."""
    if not a_rows:
        return tuple([0] * n), tuple(
            tuple(1 if i == j else 0 for i in range(n)) for j in range(n)
        )
    part = solve(a_rows, b, p)
    if part is None:
        return None
    return part, nullspace(a_rows, p, n)


def affine_points(part, basis, p):
    """Iterate all points particular + span(basis), deterministically."""
    n = len(part)
    for coeffs in product(range(p), repeat=len(basis)):
        v = list(part)
        for c, vec in zip(coeffs, basis):
            if c:
                for i in range(n):
                    v[i] = (v[i] + c * vec[i]) % p
        yield tuple(v)


def subspaces(p, n, k):
    """All k-dimensional subspaces of F_p^n as canonical RREF matrices.

    Enumerated in lexicographic order of (pivot columns, free entries);
    the order is deterministic and stable.
    """
    out = []
    for pivots in combinations(range(n), k):
        # free positions: to the right of each pivot, excluding pivot columns
        free_pos = []
        for i, pc in enumerate(pivots):
            for c in range(pc + 1, n):
                if c not in pivots:
                    free_pos.append((i, c))
        for vals in product(range(p), repeat=len(free_pos)):
            mat = [[0] * n for _ in range(k)]
            for i, pc in enumerate(pivots):
                mat[i][pc] = 1
            for (i, c), v in zip(free_pos, vals):
                mat[i][c] = v
            out.append(tuple(tuple(r) for r in mat))
    return out


def num_subspaces(p, n, k):
    """Gaussian binomial [n choose k]_p."""
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    return num // den


def mat_mul(a, b, p):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) % p for j in range(len(b[0])))
        for i in range(len(a))
    )


def mat_vec(a, v, p):
    return tuple(sum(r[i] * v[i] for i in range(len(v))) % p for r in a)


def identity_mat(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def gl_elements(p, n):
    """All invertible n x n matrices over F_p, in deterministic order."""
    out = []
    for entries in product(range(p), repeat=n * n):
        m = tuple(tuple(entries[i * n + j] for j in range(n)) for i in range(n))
        if rank(m, p) == n:
            out.append(m)
    return out
