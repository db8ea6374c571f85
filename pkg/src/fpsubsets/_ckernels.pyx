# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled enumeration kernels; see fpsubsets._pykernels for the contract.

Enumeration orders, canonical indices and early-exit points are identical
to the pure implementations; tests assert agreement on shared inputs.
"""

from libc.math cimport fabs

import math

import numpy as np

COMPILED = True

DEF MAXK = 64
DEF MAXD = 40


# ---------------------------------------------------------------------------
# level-set histogram / bilinear double sum
# ---------------------------------------------------------------------------

def lambda_histogram(p, b, c, d, inv, x_lo, x_hi, counts):
    b_ = np.ascontiguousarray(b, dtype=np.int64)
    c_ = np.ascontiguousarray(c, dtype=np.int64)
    d_ = np.ascontiguousarray(d, dtype=np.int64)
    cdef long long[::1] bv = b_
    cdef long long[::1] dv = d_
    cdef long long[::1] invv = np.ascontiguousarray(inv, dtype=np.int64)
    cdef long long[::1] cnt = counts
    cdef Py_ssize_t k = b_.shape[0]
    if k > MAXK:
        raise ValueError("k too large for the compiled kernel")
    vmat_, valid_ = _row_tables_np(p, b_, c_, inv)
    cdef long long[:, ::1] vmat = vmat_
    cdef unsigned char[::1] vok = valid_
    cdef unsigned char[::1] bok = _member_mask(p, b_)
    cdef long long pp = p, lo = x_lo, hi = x_hi
    cdef long long x, y, lam, u0, u1, u2
    cdef long long u[MAXK]
    cdef Py_ssize_t i
    with nogil:
        for x in range(lo, hi):
            if bok[x]:
                continue
            for i in range(k):
                u[i] = dv[i] * invv[(x - bv[i] + pp) % pp] % pp
            if k == 1:
                u0 = u[0]
                for y in range(pp):
                    if vok[y]:
                        cnt[(u0 * vmat[0, y]) % pp] += 1
            elif k == 2:
                u0 = u[0]; u1 = u[1]
                for y in range(pp):
                    if vok[y]:
                        cnt[(u0 * vmat[0, y] + u1 * vmat[1, y]) % pp] += 1
            elif k == 3:
                u0 = u[0]; u1 = u[1]; u2 = u[2]
                for y in range(pp):
                    if vok[y]:
                        cnt[(u0 * vmat[0, y] + u1 * vmat[1, y] + u2 * vmat[2, y]) % pp] += 1
            else:
                for y in range(pp):
                    if vok[y]:
                        lam = 0
                        for i in range(k):
                            lam += u[i] * vmat[i, y]
                        cnt[lam % pp] += 1
    return counts


def bilinear_chunk(p, b, c, d, inv, cos_t, sin_t, x_lo, x_hi):
    b_ = np.ascontiguousarray(b, dtype=np.int64)
    c_ = np.ascontiguousarray(c, dtype=np.int64)
    d_ = np.ascontiguousarray(d, dtype=np.int64)
    cdef long long[::1] bv = b_
    cdef long long[::1] dv = d_
    cdef long long[::1] invv = np.ascontiguousarray(inv, dtype=np.int64)
    cdef double[::1] ct = np.ascontiguousarray(cos_t, dtype=np.float64)
    cdef double[::1] st = np.ascontiguousarray(sin_t, dtype=np.float64)
    cdef Py_ssize_t k = b_.shape[0]
    if k > MAXK:
        raise ValueError("k too large for the compiled kernel")
    vmat_, valid_ = _row_tables_np(p, b_, c_, inv)
    cdef long long[:, ::1] vmat = vmat_
    cdef unsigned char[::1] vok = valid_
    cdef unsigned char[::1] bok = _member_mask(p, b_)
    cdef long long pp = p, lo = x_lo, hi = x_hi
    cdef long long x, y, lam, nterms = 0
    cdef long long u[MAXK]
    cdef Py_ssize_t i
    cdef double s_re = 0.0, k_re = 0.0, s_im = 0.0, k_im = 0.0, v, t
    with nogil:
        for x in range(lo, hi):
            if bok[x]:
                continue
            for i in range(k):
                u[i] = dv[i] * invv[(x - bv[i] + pp) % pp] % pp
            for y in range(pp):
                if not vok[y]:
                    continue
                lam = 0
                for i in range(k):
                    lam += u[i] * vmat[i, y]
                lam = lam % pp
                nterms += 1
                # Neumaier-compensated accumulation, fixed term order
                v = ct[lam]
                t = s_re + v
                if fabs(s_re) >= fabs(v):
                    k_re += (s_re - t) + v
                else:
                    k_re += (v - t) + s_re
                s_re = t
                v = st[lam]
                t = s_im + v
                if fabs(s_im) >= fabs(v):
                    k_im += (s_im - t) + v
                else:
                    k_im += (v - t) + s_im
                s_im = t
    return s_re + k_re, s_im + k_im, nterms


def _row_tables_np(p, b, c, inv):
    k = len(b)
    vmat = np.empty((k, p), dtype=np.int64)
    y = np.arange(p, dtype=np.int64)
    inv = np.asarray(inv)
    for i in range(k):
        vmat[i] = inv[(y - c[i]) % p]
    valid = np.ones(p, dtype=np.uint8)
    valid[np.asarray(c, dtype=np.int64)] = 0
    return vmat, valid


def _member_mask(p, b):
    mask = np.zeros(p, dtype=np.uint8)
    mask[np.asarray(b, dtype=np.int64)] = 1
    return mask


# ---------------------------------------------------------------------------
# well-distribution measure W
# ---------------------------------------------------------------------------

def w_max_abs(num):
    cdef long long[::1] e = np.ascontiguousarray(num, dtype=np.int64)
    cdef long long N = e.shape[0]
    cdef long long best = 0, a, r, pos, prefix, mn, mx
    with nogil:
        for a in range(1, N + 1):
            for r in range(a):
                prefix = 0
                mn = 0
                mx = 0
                pos = r
                while pos < N:
                    prefix += e[pos]
                    if prefix - mn > best:
                        best = prefix - mn
                    if mx - prefix > best:
                        best = mx - prefix
                    if prefix < mn:
                        mn = prefix
                    if prefix > mx:
                        mx = prefix
                    pos += a
    return int(best)


def w_lex_argmax(num, target):
    cdef long long[::1] e = np.ascontiguousarray(num, dtype=np.int64)
    cdef long long N = e.shape[0]
    cdef long long tgt = target
    cdef long long a, r, pos, prefix, mn, mx, mn_i, mx_i, j
    cdef long long cb = -1, ct = -1, nb, nt
    cdef bint found
    for a in range(1, N + 1):
        found = False
        cb = -1
        ct = -1
        with nogil:
            for r in range(a):
                prefix = 0
                mn = 0
                mx = 0
                mn_i = 0
                mx_i = 0
                j = 0
                pos = r
                while pos < N:
                    prefix += e[pos]
                    j += 1
                    if prefix - mn == tgt:
                        nb = r + 1 + mn_i * a
                        nt = j - mn_i
                        if (not found) or nb < cb or (nb == cb and nt < ct):
                            cb = nb
                            ct = nt
                            found = True
                    if mx - prefix == tgt:
                        nb = r + 1 + mx_i * a
                        nt = j - mx_i
                        if (not found) or nb < cb or (nb == cb and nt < ct):
                            cb = nb
                            ct = nt
                            found = True
                    if prefix < mn:
                        mn = prefix
                        mn_i = j
                    if prefix > mx:
                        mx = prefix
                        mx_i = j
                    pos += a
        if found:
            return int(a), int(cb), int(ct)
    raise ValueError("target window value not attained")


# ---------------------------------------------------------------------------
# correlation measure C_k
# ---------------------------------------------------------------------------

def ck_max(num, k):
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    cdef long long[::1] e = np.ascontiguousarray(num, dtype=np.int64)
    cdef long long N = e.shape[0]
    cdef long long kk = k
    cdef long long best = -1, bM = 0, b1 = 0, b2 = 0, b3 = 0
    cdef long long d1, d2, d3, n, s, aval, m
    with nogil:
        if kk == 1:
            for d1 in range(N):
                s = 0
                for n in range(N - d1):
                    s += e[n + d1]
                    aval = s if s >= 0 else -s
                    if aval > best:
                        best = aval; bM = n + 1; b1 = d1
        elif kk == 2:
            for d1 in range(N - 1):
                for d2 in range(d1 + 1, N):
                    s = 0
                    m = N - d2
                    for n in range(m):
                        s += e[n + d1] * e[n + d2]
                        aval = s if s >= 0 else -s
                        if aval > best:
                            best = aval; bM = n + 1; b1 = d1; b2 = d2
        else:
            for d1 in range(N - 2):
                for d2 in range(d1 + 1, N - 1):
                    for d3 in range(d2 + 1, N):
                        s = 0
                        m = N - d3
                        for n in range(m):
                            s += e[n + d1] * e[n + d2] * e[n + d3]
                            aval = s if s >= 0 else -s
                            if aval > best:
                                best = aval; bM = n + 1; b1 = d1; b2 = d2; b3 = d3
    if k == 1:
        return int(best), int(bM), (int(b1),)
    if k == 2:
        return int(best), int(bM), (int(b1), int(b2))
    return int(best), int(bM), (int(b1), int(b2), int(b3))


# ---------------------------------------------------------------------------
# family pattern scans
# ---------------------------------------------------------------------------

cdef long long _modpow(long long base, long long e, long long p) nogil:
    cdef long long r = 1 % p
    base = base % p
    while e:
        if e & 1:
            r = r * base % p
        base = base * base % p
        e >>= 1
    return r


cdef int _strip_len(long long *f, int n) nogil:
    while n > 0 and f[n - 1] == 0:
        n -= 1
    return n


cdef bint _is_squarefree_c(long long *coef, int n, long long p) nogil:
    """Squarefree test for the coefficient block of length n (deg bound)."""
    cdef long long buf1[MAXD]
    cdef long long buf2[MAXD]
    cdef long long *pa = buf1
    cdef long long *pb = buf2
    cdef long long *pt
    cdef int la, lb, lt, i, j
    cdef long long lead_inv, q
    la = _strip_len(coef, n)
    if la == 0:
        return False        # zero polynomial: not a squarefree member
    if la == 1:
        return True         # nonzero constant
    for i in range(la):
        buf1[i] = coef[i]
    # formal derivative into buf2
    for i in range(1, la):
        buf2[i - 1] = (i % p) * coef[i] % p
    lb = _strip_len(buf2, la - 1)
    if lb == 0:
        return False        # f' = 0 with deg f >= 1: repeated roots
    # Euclid: squarefree iff gcd(f, f') is a nonzero constant
    while lb > 0:
        lead_inv = _modpow(pb[lb - 1], p - 2, p)
        for i in range(la - lb, -1, -1):
            q = pa[i + lb - 1] * lead_inv % p
            if q != 0:
                for j in range(lb):
                    pa[i + j] = (pa[i + j] + (p - q) * pb[j]) % p
        lt = lb - 1
        while lt > 0 and pa[lt - 1] == 0:
            lt -= 1
        pt = pa; pa = pb; pb = pt
        la = lb; lb = lt
    return la == 1


def pattern_scan_dense(p, d, pts, in_s, require_squarefree, target):
    cdef long long[::1] xs = np.ascontiguousarray(pts, dtype=np.int64)
    cdef unsigned char[::1] member = np.ascontiguousarray(in_s, dtype=np.uint8)
    cdef Py_ssize_t k = xs.shape[0]
    cdef int dd = d
    if dd + 1 > MAXD:
        raise ValueError("degree bound too large for the compiled kernel")
    if k > 62:
        raise ValueError("too many points")
    total_py = p ** (dd + 1)
    if total_py >= 2**62:
        raise ValueError("family too large")
    first_hit_ = np.full(1 << k, -1, dtype=np.int64)
    cdef long long[::1] first_hit = first_hit_
    cdef long long pp = p, total = total_py, tgt = target
    cdef bint sf = bool(require_squarefree)
    cdef long long coef[MAXD]
    cdef long long m, pat, acc, found = 0, want = 1 << k, scanned = total
    cdef Py_ssize_t i, j
    cdef int ii
    for ii in range(dd + 1):
        coef[ii] = 0
    with nogil:
        for m in range(total):
            if m > 0:
                ii = 0
                while coef[ii] == pp - 1:
                    coef[ii] = 0
                    ii += 1
                coef[ii] += 1
            if sf and not _is_squarefree_c(coef, dd + 1, pp):
                continue
            pat = 0
            for i in range(k):
                acc = 0
                for j in range(dd, -1, -1):
                    acc = (acc * xs[i] + coef[j]) % pp
                if member[acc]:
                    pat |= (<long long>1) << i
            if first_hit[pat] < 0:
                first_hit[pat] = m
                found += 1
                if tgt >= 0:
                    if pat == tgt:
                        scanned = m + 1
                        break
                elif found == want:
                    scanned = m + 1
                    break
    return first_hit_, int(scanned)


def pattern_scan_subsets(p, d, pts, in_s, target):
    cdef long long[::1] xs = np.ascontiguousarray(pts, dtype=np.int64)
    cdef unsigned char[::1] member = np.ascontiguousarray(in_s, dtype=np.uint8)
    cdef Py_ssize_t k = xs.shape[0]
    cdef int dd = d
    if dd > MAXD:
        raise ValueError("subset size too large for the compiled kernel")
    if k > 62:
        raise ValueError("too many points")
    total_py = math.comb(p, dd)
    first_hit_ = np.full(1 << k, -1, dtype=np.int64)
    cdef long long[::1] first_hit = first_hit_
    cdef long long pp = p, total = total_py, tgt = target
    cdef long long a[MAXD]
    cdef long long m, pat, acc, found = 0, want = 1 << k, scanned = total
    cdef Py_ssize_t i
    cdef int ii, jj
    for ii in range(dd):
        a[ii] = ii
    with nogil:
        for m in range(total):
            if m > 0:
                jj = dd - 1
                while a[jj] == pp - dd + jj:
                    jj -= 1
                a[jj] += 1
                for ii in range(jj + 1, dd):
                    a[ii] = a[ii - 1] + 1
            pat = 0
            for i in range(k):
                acc = 1
                for ii in range(dd):
                    acc = acc * ((xs[i] - a[ii] + pp) % pp) % pp
                if member[acc]:
                    pat |= (<long long>1) << i
            if first_hit[pat] < 0:
                first_hit[pat] = m
                found += 1
                if tgt >= 0:
                    if pat == tgt:
                        scanned = m + 1
                        break
                elif found == want:
                    scanned = m + 1
                    break
    return first_hit_, int(scanned)


def count_subsets_matching(p, d, pts, accept):
    cdef long long[::1] xs = np.ascontiguousarray(pts, dtype=np.int64)
    cdef unsigned char[:, ::1] acc_tab = np.ascontiguousarray(accept, dtype=np.uint8)
    cdef Py_ssize_t k = xs.shape[0]
    cdef int dd = d
    if dd > MAXD:
        raise ValueError("subset size too large for the compiled kernel")
    total_py = math.comb(p, dd)
    cdef long long pp = p, total = total_py
    cdef long long a[MAXD]
    cdef long long m, acc, count = 0
    cdef Py_ssize_t i
    cdef int ii, jj
    cdef bint ok
    for ii in range(dd):
        a[ii] = ii
    with nogil:
        for m in range(total):
            if m > 0:
                jj = dd - 1
                while a[jj] == pp - dd + jj:
                    jj -= 1
                a[jj] += 1
                for ii in range(jj + 1, dd):
                    a[ii] = a[ii - 1] + 1
            ok = True
            for i in range(k):
                acc = 1
                for ii in range(dd):
                    acc = acc * ((xs[i] - a[ii] + pp) % pp) % pp
                if not acc_tab[i, acc]:
                    ok = False
                    break
            if ok:
                count += 1
    return int(count)
