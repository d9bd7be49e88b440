"""Class groups of imaginary quadratic fields via binary quadratic forms.

A negative discriminant d (d ≡ 0 or 1 mod 4) has class group isomorphic
to the group of reduced primitive positive-definite forms (a, b, c) of
discriminant b^2 - 4ac = d under Gaussian composition.  Everything here
is exact integer arithmetic; it exists so the 3-rank-2 screen needs no
external backend.
"""

from __future__ import annotations

from math import gcd, isqrt


def is_discriminant(d):
    return d < 0 and d % 4 in (0, 1)


def reduced_forms(d):
    """All reduced primitive forms (a, b, c) of discriminant d < 0.

    Reduced: |b| <= a <= c, and b >= 0 if |b| == a or a == c.
    """
    if not is_discriminant(d):
        raise ValueError(f"{d} is not a negative discriminant")
    out = []
    amax = isqrt(-d // 3) if d < -3 else 1
    for a in range(1, max(amax, 1) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            out.append((a, b, c))
    return sorted(out)


def class_number(d):
    return len(reduced_forms(d))


def _reduce(a, b, c):
    d = b * b - 4 * a * c
    while True:
        # normalize b into (-a, a]
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            b = b + 2 * k * a
            c = (b * b - d) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if (a == c or b == -a) and b < 0:
        b = -b
    return (a, b, c)


def _equivalent_with_leading_coprime_to(f, m, d):
    """A form equivalent to f whose leading coefficient is coprime to m."""
    a, b, c = f
    for y in range(0, 40):
        for x in range(-40, 41):
            if gcd(x, y) != 1:
                continue
            v = a * x * x + b * x * y + c * y * y
            if v > 0 and gcd(v, m) == 1:
                # complete (x, y) to a unimodular matrix (x u / y w)
                g, w_, u_ = _ext_gcd(x, y)
                u, w = -u_, w_          # x*w - y*u = 1
                A = v
                B = 2 * (a * x * u + c * y * w) + b * (x * w + y * u)
                C = a * u * u + b * u * w + c * w * w
                assert B * B - 4 * A * C == d
                return (A, B, C)
    raise ArithmeticError("no coprime representative found")


def compose(f, g, d):
    """Gaussian (Dirichlet) composition of two forms of discriminant d."""
    a1, b1, _ = f
    a2, b2, _ = _equivalent_with_leading_coprime_to(g, a1, d)
    # now gcd(a1, a2) = 1, so the congruences b3 = b1 (mod 2 a1),
    # b3 = b2 (mod 2 a2) have a common solution and the Dirichlet
    # composition is (a1 a2, b3, *)
    g_, u, v = _ext_gcd(a1, a2)
    assert g_ == 1
    n = (b2 - b1) // 2
    b3 = b1 + 2 * a1 * ((u * n) % a2)
    a3 = a1 * a2
    b3 %= 2 * a3
    c3 = (b3 * b3 - d) // (4 * a3)
    assert (b3 * b3 - d) % (4 * a3) == 0
    return _reduce(a3, b3, c3)


def _ext_gcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity_form(d):
    if d % 4 == 0:
        return _reduce(1, 0, -d // 4)
    return _reduce(1, 1, (1 - d) // 4)


def form_pow(f, k, d):
    out = identity_form(d)
    acc = f
    while k:
        if k & 1:
            out = compose(out, acc, d)
        k >>= 1
        if k:
            acc = compose(acc, acc, d)
    return out


def class_group_invariants(d):
    """Elementary divisors (ascending) of the form class group of d.

    Computed from the composition table by repeatedly extracting the
    largest element order; sizes here are tiny (class screening range).
    """
    forms = reduced_forms(d)
    ident = identity_form(d)
    orders = {}
    for f in forms:
        k, acc = 1, f
        while acc != ident:
            acc = compose(acc, f, d)
            k += 1
        orders[f] = k
    n = len(forms)
    # invariant factors via the order statistics of an abelian group:
    # for each prime power q, the number of elements of order dividing q
    # determines the p-part partition
    invs = _invariants_from_orders(list(orders.values()), n)
    return invs


def _invariants_from_orders(orders, n):
    primes = set()
    for o in orders:
        o0 = o
        f = 2
        while f * f <= o0:
            if o0 % f == 0:
                primes.add(f)
                while o0 % f == 0:
                    o0 //= f
            f += 1
        if o0 > 1:
            primes.add(o0)
    parts = {}
    for p in sorted(primes):
        # t_k = log_p #{x : x^{p^k} = 1}
        t = []
        k = 0
        while True:
            q = p ** k
            cnt = sum(1 for o in orders if q % o == 0)
            e = 0
            while p ** e < cnt:
                e += 1
            if p ** e != cnt:
                raise ArithmeticError("element counts not a p-power")
            t.append(e)
            if k and t[-1] == t[-2]:
                break
            k += 1
        exps = []
        for j in range(1, len(t)):
            above_j = t[j] - t[j - 1]
            exps.append(above_j)
        # exps[j-1] = number of cyclic factors with exponent >= j
        factors = []
        for j, cnt in enumerate(exps, start=1):
            prev = exps[j] if j < len(exps) else 0
            factors += [p ** j] * (cnt - prev)
        parts[p] = sorted(factors)
    # merge prime parts into elementary divisors (ascending)
    maxlen = max((len(v) for v in parts.values()), default=0)
    invs = []
    for i in range(maxlen):
        val = 1
        for p, v in parts.items():
            padded = [1] * (maxlen - len(v)) + v
            val *= padded[i]
        invs.append(val)
    total = 1
    for v in invs:
        total *= v
    if total != n:
        raise ArithmeticError(
            f"invariant product {total} does not match class number {n}")
    return invs


def three_rank(d):
    """3-rank of the class group: #{f : f^3 = identity} = 3^rank."""
    forms = reduced_forms(d)
    ident = identity_form(d)
    cnt = sum(1 for f in forms if form_pow(f, 3, d) == ident)
    r = 0
    while 3 ** r < cnt:
        r += 1
    if 3 ** r != cnt:
        raise ArithmeticError("3-torsion count is not a power of 3")
    return r


def screen_range(dmin, dmax, rank=2):
    """Fundamental-shape discriminants d in [dmin, dmax] (both negative,
    dmin <= dmax) whose class group has the given 3-rank, ascending by
    absolute value."""
    if dmin > dmax:
        raise ValueError("need dmin <= dmax")
    out = []
    for d in range(dmax, dmin - 1, -1):
        if not is_discriminant(d):
            continue
        if not _is_fundamental(d):
            continue
        if three_rank(d) == rank:
            out.append(d)
    return out


def _is_fundamental(d):
    if d % 4 == 1:
        return _squarefree(-d)
    m = d // 4
    return m % 4 in (2, 3) and _squarefree(-m)


def _squarefree(n):
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True
