"""Dense univariate polynomials over F_p or F_{p^n}.

A polynomial is a list of field elements, lowest degree first, with no
trailing zeros; the zero polynomial is the empty list.  Every function
takes the field object as its last argument so the same code serves both
prime fields (int elements) and extensions (tuple elements).
"""

from __future__ import annotations

from itertools import combinations


def strip(coeffs, fld=None):
    """Drop trailing zeros (normal form)."""
    i = len(coeffs)
    if fld is None:
        while i > 0 and not coeffs[i - 1]:
            i -= 1
    else:
        while i > 0 and fld.is_zero(coeffs[i - 1]):
            i -= 1
    return list(coeffs[:i])


def degree(f) -> int:
    """Degree of a normal-form polynomial; -1 for the zero polynomial."""
    return len(f) - 1


def is_zero(f) -> bool:
    return len(f) == 0


def constant(c, fld):
    return [] if fld.is_zero(c) else [c]


def add(f, g, fld):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else fld.zero
        b = g[i] if i < len(g) else fld.zero
        out.append(fld.add(a, b))
    return strip(out, fld)


def sub(f, g, fld):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else fld.zero
        b = g[i] if i < len(g) else fld.zero
        out.append(fld.sub(a, b))
    return strip(out, fld)


def scale(f, c, fld):
    if fld.is_zero(c):
        return []
    return strip([fld.mul(a, c) for a in f], fld)


def mul(f, g, fld):
    if not f or not g:
        return []
    out = [fld.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if fld.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = fld.add(out[i + j], fld.mul(a, b))
    return strip(out, fld)


def eval_at(f, x, fld):
    """Horner evaluation of f at x."""
    if type(x) is int:   # prime-field fast path (elements are ints)
        p = fld.p
        acc = 0
        for c in reversed(f):
            acc = (acc * x + c) % p
        return acc
    acc = fld.zero
    for c in reversed(f):
        acc = fld.add(fld.mul(acc, x), c)
    return acc


def divmod_poly(f, g, fld):
    """Quotient and remainder of f by a nonzero g."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if type(g[-1]) is int:   # prime-field fast path
        p = fld.p
        r = list(f)
        lg = len(g)
        q = [0] * max(0, len(f) - lg + 1)
        inv_lead = pow(g[-1], p - 2, p)
        for i in range(len(f) - lg, -1, -1):
            c = r[i + lg - 1] * inv_lead % p
            if c:
                q[i] = c
                for j in range(lg):
                    r[i + j] = (r[i + j] - c * g[j]) % p
        return strip(q), strip(r)
    r = list(f)
    q = [fld.zero] * max(0, len(f) - len(g) + 1)
    inv_lead = fld.inv(g[-1])
    for i in range(len(f) - len(g), -1, -1):
        c = fld.mul(r[i + len(g) - 1], inv_lead)
        if fld.is_zero(c):
            continue
        q[i] = c
        for j, b in enumerate(g):
            r[i + j] = fld.sub(r[i + j], fld.mul(c, b))
    return strip(q, fld), strip(r, fld)


def monic(f, fld):
    if not f:
        return []
    return scale(f, fld.inv(f[-1]), fld)


def gcd(f, g, fld):
    """Monic gcd by the Euclidean algorithm; gcd(f, 0) = monic(f)."""
    a, b = strip(f, fld), strip(g, fld)
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        _, r = divmod_poly(a, b, fld)
        a, b = b, r
    return monic(a, fld)


def derivative(f, fld):
    """Formal derivative in characteristic p."""
    p = _char(fld)
    if not f or type(f[-1]) is int:   # prime-field fast path
        return strip([i % p * f[i] % p for i in range(1, len(f))])
    out = []
    for i in range(1, len(f)):
        c = f[i]
        acc = fld.zero
        for _ in range(i % p):
            acc = fld.add(acc, c)
        out.append(acc)
    return strip(out, fld)


def _char(fld) -> int:
    return fld.p


def interpolate(points, fld):
    """Unique polynomial of degree < len(points) through the given points.

    points is a sequence of (x_i, y_i) with pairwise distinct x_i.
    Newton's divided differences keep this O(k^2) with exact arithmetic.
    """
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be pairwise distinct")
    if not points:
        return []
    k = len(points)
    if all(type(x) is int for x in xs):   # prime-field fast path
        p = fld.p
        coef = [y % p for _, y in points]
        for j in range(1, k):
            for i in range(k - 1, j - 1, -1):
                den = (xs[i] - xs[i - j]) % p
                coef[i] = (coef[i] - coef[i - 1]) * pow(den, p - 2, p) % p
        out = [coef[k - 1]]
        for i in range(k - 2, -1, -1):
            xi = xs[i] % p
            out = [(a - xi * b) % p for a, b in zip([0] + out, out + [0])]
            out[0] = (out[0] + coef[i]) % p
        return strip(out)
    # divided-difference coefficients
    coef = [y for _, y in points]
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            num = fld.sub(coef[i], coef[i - 1])
            den = fld.sub(xs[i], xs[i - j])
            coef[i] = fld.mul(num, fld.inv(den))
    # expand the Newton form
    out = [coef[k - 1]]
    for i in range(k - 2, -1, -1):
        # out = out*(X - x_i) + coef[i]
        shifted = [fld.zero] + out
        adj = [fld.mul(c, fld.neg(xs[i])) for c in out] + [fld.zero]
        out = [fld.add(a, b) for a, b in zip(shifted, adj)]
        out[0] = fld.add(out[0], coef[i])
    return strip(out, fld)


def from_roots(roots, fld):
    """Monic product of (X - a) over the given distinct elements."""
    rs = list(roots)
    if len(rs) != len(set(rs)):
        raise ValueError("root set must have pairwise distinct elements")
    out = [fld.one]
    for a in rs:
        out = mul(out, [fld.neg(a), fld.one], fld)
    return out


def is_squarefree(f, fld) -> bool:
    """True iff f has no repeated root in the algebraic closure.

    Decided by gcd(f, f'): constant gcd means squarefree.  When f' = 0 the
    polynomial is squarefree only if it is a nonzero constant.
    """
    g = strip(f, fld)
    if not g:
        raise ValueError("squarefreeness of the zero polynomial is undefined")
    d = derivative(g, fld)
    if not d:
        return degree(g) == 0
    return degree(gcd(g, d, fld)) == 0


def distinct_roots_in_field(f, fld):
    """All roots of a nonzero f in the given field, by exhaustive scan."""
    g = strip(f, fld)
    if not g:
        raise ValueError("the zero polynomial vanishes everywhere")
    return [x for x in fld.elements() if fld.is_zero(eval_at(g, x, fld))]


def distinct_root_count_closure(factors, fld, claimed=None) -> int:
    """Number of distinct roots in the closure of a caller-factored product.

    factors is a list of (poly, multiplicity) with monic non-constant,
    squarefree, pairwise coprime polys; the count is the sum of their
    degrees.  When claimed is given the product (up to the claimed leading
    unit) is verified against it.
    """
    polys = []
    for g, m in factors:
        g = strip(g, fld)
        if degree(g) < 1:
            raise ValueError("factors must be non-constant")
        if m < 1:
            raise ValueError("multiplicities must be >= 1")
        g = monic(g, fld)
        if not is_squarefree(g, fld):
            raise ValueError("factors must be squarefree")
        polys.append((g, m))
    for (g1, _), (g2, _) in combinations(polys, 2):
        if g1 == g2:
            raise ValueError("duplicate factor listed twice")
        if degree(gcd(g1, g2, fld)) != 0:
            raise ValueError("factors must be pairwise coprime")
    if claimed is not None:
        prod = [fld.one]
        for g, m in polys:
            for _ in range(m):
                prod = mul(prod, g, fld)
        target = strip(claimed, fld)
        if not target:
            raise ValueError("claimed polynomial is zero")
        if monic(target, fld) != prod:
            raise ValueError("factorization does not match the claimed polynomial")
    return sum(degree(g) for g, _ in polys)
