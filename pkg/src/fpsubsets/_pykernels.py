"""Pure NumPy implementations of the hot enumeration kernels.

This module mirrors fpsubsets._ckernels function by function and is the
import-time fallback when the compiled extension is unavailable (or when
FPSUBSETS_PURE=1).  Semantics are identical: same enumeration orders, same
canonical indices, same early-exit points; only throughput differs.
"""

from __future__ import annotations

from itertools import islice

import numpy as np

COMPILED = False

_CHUNK = 8192


# ---------------------------------------------------------------------------
# level-set histogram and bilinear double sum over F_p  (n = 1 hot path)
# ---------------------------------------------------------------------------

def _row_tables(p, b, c, d, inv):
    """Per-instance tables: k x p inverse rows over y, and the valid-y mask."""
    k = len(b)
    vmat = np.empty((k, p), dtype=np.int64)
    y = np.arange(p, dtype=np.int64)
    for i in range(k):
        vmat[i] = inv[(y - c[i]) % p]
    valid = np.ones(p, dtype=bool)
    valid[np.asarray(c, dtype=np.int64)] = False
    return vmat, valid


def lambda_histogram(p, b, c, d, inv, x_lo, x_hi, counts):
    """Tally lambda = sum_i d_i/((x-b_i)(y-c_i)) for x in [x_lo, x_hi).

    Rows with x in {b_i} are skipped; within a row, y runs over the valid
    set in increasing order.  counts (int64[p]) is accumulated in place.
    """
    b = np.asarray(b, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    vmat, valid = _row_tables(p, b, c, d, inv)
    vval = vmat[:, valid]
    bset = set(int(x) for x in b)
    k = len(b)
    for x in range(x_lo, x_hi):
        if x in bset:
            continue
        lam = np.zeros(vval.shape[1], dtype=np.int64)
        for i in range(k):
            u = int(d[i]) * int(inv[(x - b[i]) % p]) % p
            lam += u * vval[i]
        counts += np.bincount(lam % p, minlength=p)
    return counts


def bilinear_chunk(p, b, c, d, inv, cos_t, sin_t, x_lo, x_hi):
    """Partial direct double sum of e_p(lambda(x, y)) over x in [x_lo, x_hi).

    Returns (re, im, nterms).  Rows are reduced in increasing x order and
    each row sums its y terms in increasing order, so the result depends
    only on the chunk boundaries, not on the caller's threading.
    """
    b = np.asarray(b, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    vmat, valid = _row_tables(p, b, c, d, inv)
    vval = vmat[:, valid]
    bset = set(int(x) for x in b)
    k = len(b)
    nterms = 0
    row_re, row_im = [0.0], [0.0]
    for x in range(x_lo, x_hi):
        if x in bset:
            continue
        lam = np.zeros(vval.shape[1], dtype=np.int64)
        for i in range(k):
            u = int(d[i]) * int(inv[(x - b[i]) % p]) % p
            lam += u * vval[i]
        lam %= p
        row_re.append(float(cos_t[lam].sum()))
        row_im.append(float(sin_t[lam].sum()))
        nterms += lam.shape[0]
    return float(np.sum(row_re)), float(np.sum(row_im)), nterms


# ---------------------------------------------------------------------------
# well-distribution measure W
# ---------------------------------------------------------------------------

def w_max_abs(num):
    """Max |sum of e along an arithmetic progression| as an integer numerator.

    The maximum runs over strides a >= 1, starts b >= 1 and lengths t >= 1
    with b + (t-1)a <= N.
    """
    num = np.asarray(num, dtype=np.int64)
    N = num.shape[0]
    best = 0
    for a in range(1, N + 1):
        L = (N + a - 1) // a
        idx = np.arange(a, dtype=np.int64)[:, None] + a * np.arange(L, dtype=np.int64)[None, :]
        vals = np.where(idx < N, num[np.minimum(idx, N - 1)], 0)
        P = np.zeros((a, L + 1), dtype=np.int64)
        np.cumsum(vals, axis=1, out=P[:, 1:])
        runmin = np.minimum.accumulate(P, axis=1)[:, :-1]
        runmax = np.maximum.accumulate(P, axis=1)[:, :-1]
        up = int((P[:, 1:] - runmin).max())
        dn = int((runmax - P[:, 1:]).max())
        best = max(best, up, dn)
    return best


def w_lex_argmax(num, target):
    """Lexicographically smallest (a, b, t) whose window numerator hits target.

    Any pair realizing the global maximum must difference the running
    prefix extreme, so tracking earliest extreme indices finds the lex-min
    start within each residue class.
    """
    num = [int(v) for v in num]
    N = len(num)
    for a in range(1, N + 1):
        cand = None
        for r in range(a):
            prefix = 0
            mn = mx = 0
            mn_i = mx_i = 0
            j = 0
            pos = r
            while pos < N:
                prefix += num[pos]
                j += 1
                if prefix - mn == target:
                    bt = (r + 1 + mn_i * a, j - mn_i)
                    if cand is None or bt < cand:
                        cand = bt
                if mx - prefix == target:
                    bt = (r + 1 + mx_i * a, j - mx_i)
                    if cand is None or bt < cand:
                        cand = bt
                if prefix < mn:
                    mn, mn_i = prefix, j
                if prefix > mx:
                    mx, mx_i = prefix, j
                pos += a
        if cand is not None:
            return a, cand[0], cand[1]
    raise ValueError("target window value not attained")


# ---------------------------------------------------------------------------
# correlation measure C_k
# ---------------------------------------------------------------------------

def ck_max(num, k):
    """Exhaustive max |sum_{n<=M} prod_i e_{n+d_i}| numerator for k in {1,2,3}.

    Returns (best, M, (d_1..d_k)); shift tuples run in lexicographic order
    and M ascending, with strictly-greater updates, so the reported argmax
    is the first one attained.
    """
    num = np.asarray(num, dtype=np.int64)
    N = num.shape[0]
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    best = -1
    arg = None
    if k == 1:
        for d1 in range(N):
            cums = np.cumsum(num[d1:])
            acb = np.abs(cums)
            j = int(np.argmax(acb))
            if int(acb[j]) > best:
                best, arg = int(acb[j]), (j + 1, (d1,))
    elif k == 2:
        for d1 in range(N - 1):
            for d2 in range(d1 + 1, N):
                m = N - d2
                cums = np.cumsum(num[d1 : d1 + m] * num[d2 : d2 + m])
                acb = np.abs(cums)
                j = int(np.argmax(acb))
                if int(acb[j]) > best:
                    best, arg = int(acb[j]), (j + 1, (d1, d2))
    else:
        for d1 in range(N - 2):
            for d2 in range(d1 + 1, N - 1):
                m2 = N - d2
                pair = num[d1 : d1 + m2] * num[d2 : d2 + m2]
                for d3 in range(d2 + 1, N):
                    m = N - d3
                    cums = np.cumsum(pair[:m] * num[d3 : d3 + m])
                    acb = np.abs(cums)
                    j = int(np.argmax(acb))
                    if int(acb[j]) > best:
                        best, arg = int(acb[j]), (j + 1, (d1, d2, d3))
    return best, arg[0], arg[1]


# ---------------------------------------------------------------------------
# family pattern scans (witness search, subset counting)
# ---------------------------------------------------------------------------

def _update_hits(first_hit, patterns, base):
    """Record first canonical indices; patterns < 0 mark non-members."""
    valid = patterns >= 0
    safe = np.where(valid, patterns, 0)
    new = valid & (first_hit[safe] < 0)
    if not new.any():
        return
    where = np.nonzero(new)[0]
    uniq, first_pos = np.unique(patterns[where], return_index=True)
    first_hit[uniq] = base + where[first_pos]


def _scan_result(first_hit, target):
    """Early-exit bookkeeping shared by the scans; None means keep going.

    On a target hit, entries recorded past the stopping index are dropped
    so the result is identical to a member-by-member scan that stopped
    there (the compiled kernel's behaviour).
    """
    if target >= 0:
        if first_hit[target] >= 0:
            stop = int(first_hit[target])
            first_hit[first_hit > stop] = -1
            return first_hit, stop + 1
    elif (first_hit >= 0).all():
        return first_hit, int(first_hit.max()) + 1
    return None


def _sf_mask(C, p, d):
    """Vectorized squarefree test for coefficient rows with d <= 2."""
    if d == 0:
        return C[:, 0] != 0
    if d == 1:
        return (C != 0).any(axis=1)
    nonzero = (C != 0).any(axis=1)
    quad = C[:, 2] != 0
    disc = (C[:, 1] * C[:, 1] - 4 * C[:, 2] * C[:, 0]) % p
    return np.where(quad, disc != 0, nonzero)


def pattern_scan_dense(p, d, pts, in_s, require_squarefree, target):
    """Scan all p^(d+1) coefficient vectors in canonical index order.

    Canonical index m encodes coefficients c_i = (m // p^i) % p.  Returns
    (first_hit, scanned): the first canonical index realizing each
    membership pattern over the points (bit i set when f(pts[i]) lies in
    the member set) and how many members the scan examined.  The scan
    stops as soon as the target pattern is hit (target >= 0) or every
    pattern is covered (target < 0).
    """
    pts = np.asarray(pts, dtype=np.int64)
    k = pts.shape[0]
    total = p ** (d + 1)
    first_hit = np.full(1 << k, -1, dtype=np.int64)
    powers = p ** np.arange(d + 1, dtype=np.int64)
    weights = 1 << np.arange(k, dtype=np.int64)
    sf_general = None
    if require_squarefree and d > 2:
        from . import poly as _poly
        from .fields import PrimeField

        fld = PrimeField(p)
        sf_general = lambda row: bool(row.any()) and _poly.is_squarefree(
            _poly.strip(row.tolist()), fld
        )
    for base in range(0, total, _CHUNK):
        hi = min(base + _CHUNK, total)
        m = np.arange(base, hi, dtype=np.int64)
        C = (m[:, None] // powers[None, :]) % p
        vals = np.zeros((hi - base, k), dtype=np.int64)
        for j in range(d, -1, -1):
            vals = (vals * pts[None, :] + C[:, j : j + 1]) % p
        patterns = (in_s[vals].astype(np.int64) * weights[None, :]).sum(axis=1)
        if require_squarefree:
            if d <= 2:
                member = _sf_mask(C, p, d)
            else:
                member = np.fromiter(
                    (sf_general(row) for row in C), dtype=bool, count=hi - base
                )
            patterns = np.where(member, patterns, -1)
        _update_hits(first_hit, patterns, base)
        out = _scan_result(first_hit, target)
        if out is not None:
            return out
    return first_hit, total


def _combo_batches(p, d):
    """Yield (base_rank, int64 array of combinations) in lex order."""
    if d == 0:
        yield 0, np.zeros((1, 0), dtype=np.int64)
        return
    from itertools import combinations

    it = combinations(range(p), d)
    base = 0
    while True:
        block = list(islice(it, _CHUNK))
        if not block:
            return
        yield base, np.array(block, dtype=np.int64)
        base += len(block)


def pattern_scan_subsets(p, d, pts, in_s, target):
    """Scan the monic root products f_A over d-subsets A in lex rank order.

    Same contract as pattern_scan_dense with canonical index = lex rank of
    the subset.
    """
    pts = np.asarray(pts, dtype=np.int64)
    k = pts.shape[0]
    from math import comb

    total = comb(p, d)
    first_hit = np.full(1 << k, -1, dtype=np.int64)
    weights = 1 << np.arange(k, dtype=np.int64)
    for base, A in _combo_batches(p, d):
        vals = np.ones((A.shape[0], k), dtype=np.int64)
        for j in range(d):
            vals = vals * ((pts[None, :] - A[:, j : j + 1]) % p) % p
        patterns = (in_s[vals].astype(np.int64) * weights[None, :]).sum(axis=1)
        _update_hits(first_hit, patterns, base)
        out = _scan_result(first_hit, target)
        if out is not None:
            return out
    return first_hit, total


def count_subsets_matching(p, d, pts, accept):
    """Number of d-subsets A whose f_A values satisfy accept[i][f_A(pts[i])]."""
    pts = np.asarray(pts, dtype=np.int64)
    k = pts.shape[0]
    count = 0
    for _, A in _combo_batches(p, d):
        vals = np.ones((A.shape[0], k), dtype=np.int64)
        for j in range(d):
            vals = vals * ((pts[None, :] - A[:, j : j + 1]) % p) % p
        ok = np.ones(A.shape[0], dtype=bool)
        for i in range(k):
            ok &= accept[i][vals[:, i]].astype(bool)
        count += int(ok.sum())
    return count
