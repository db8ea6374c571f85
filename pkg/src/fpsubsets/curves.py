"""Bilinear inverse-product sums and point counts on their level sets.

The central objects: for pairwise-distinct poles b_i, c_i and nonzero
weights d_i over F_p, the double exponential sum

    S = sum_{x not in {b}, y not in {c}} e_p( sum_i d_i / ((x-b_i)(y-c_i)) )

and, over F_q with q = p^n, the histogram N_n(lambda) counting points of
the level sets sum_i d_i/((x-b_i)(y-c_i)) = lambda.  On top of those:
the almost-everywhere point-count bound, the full/punctured variety sum
relation, the auxiliary-variable identity, the Newton polygon facts for
the level-set polynomial g_lambda, and the exceptional-lambda analysis
with its Bezout bound.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels, poly
from .errors import BudgetError, CheckFailure
from .expsums import ComplexAcc, ep_table
from .fields import ExtField, PrimeField

HIST_CAP_N1 = 9973     # n = 1: up to ~1e8 (x, y) pairs
HIST_CAP_N2 = 97       # n = 2: up to ~8.8e7 pairs
CHUNK_X = 256          # fixed work unit so results never depend on thread count
PHI_BUDGET = 10**7


@dataclass(frozen=True)
class BilinearInstance:
    p: int
    b: tuple
    c: tuple
    d: tuple

    def __post_init__(self):
        k = len(self.b)
        if k < 1 or len(self.c) != k or len(self.d) != k:
            raise ValueError("b, c, d must share a common length k >= 1")
        if k >= self.p:
            raise ValueError("k must be < p")
        if len({x % self.p for x in self.b}) != k:
            raise ValueError("the b_i must be pairwise distinct")
        if len({y % self.p for y in self.c}) != k:
            raise ValueError("the c_i must be pairwise distinct")
        if any(di % self.p == 0 for di in self.d):
            raise ValueError("the d_i must be nonzero")

    @property
    def k(self) -> int:
        return len(self.b)

    def shifted(self) -> tuple["BilinearInstance", int, int]:
        """Translate coordinates so no pole sits at 0 (product b_i c_i != 0).

        Returns (instance, beta, gamma) with x' = x - beta, y' = y - gamma;
        the level-set values lambda are unchanged by the shift.  beta and
        gamma are the smallest admissible residues, and 0 when no shift is
        needed on that side.
        """
        p = self.p
        beta = gamma = 0
        bs = {x % p for x in self.b}
        cs = {y % p for y in self.c}
        if 0 in bs:
            beta = min(x for x in range(p) if x not in bs)
        if 0 in cs:
            gamma = min(y for y in range(p) if y not in cs)
        if beta == 0 and gamma == 0:
            return self, 0, 0
        inst = BilinearInstance(
            p=p,
            b=tuple((x - beta) % p for x in self.b),
            c=tuple((y - gamma) % p for y in self.c),
            d=tuple(di % p for di in self.d),
        )
        return inst, beta, gamma


@dataclass
class LambdaHistogram:
    p: int
    n: int
    k: int
    counts: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.n

    def check_invariants(self) -> None:
        q, k = self.q, self.k
        mass = int(self.counts.sum())
        if mass != (q - k) ** 2:
            raise CheckFailure(f"histogram mass {mass} != (q-k)^2 = {(q-k)**2}")
        mx = int(self.counts.max())
        if mx > k * q:
            raise CheckFailure(f"histogram count {mx} exceeds the trivial bound {k*q}")


def _chunk_ranges(q: int):
    return [(lo, min(lo + CHUNK_X, q)) for lo in range(0, q, CHUNK_X)]


def histogram_Nn(inst: BilinearInstance, n: int = 1, threads: int = 1) -> LambdaHistogram:
    """Exact level-set histogram over F_{p^n} by a single (x, y) pass.

    The x range is cut into fixed-size chunks; chunk tallies are integer
    arrays merged by addition, so the result is identical for any thread
    count.
    """
    p, k = inst.p, inst.k
    if n == 1:
        if p > HIST_CAP_N1:
            raise BudgetError(f"n=1 histograms capped at p <= {HIST_CAP_N1}")
        fld = PrimeField(p)
        inv = fld.inv_table()
        b = np.array([x % p for x in inst.b], dtype=np.int64)
        c = np.array([y % p for y in inst.c], dtype=np.int64)
        d = np.array([z % p for z in inst.d], dtype=np.int64)
        ranges = _chunk_ranges(p)

        def work(r):
            out = np.zeros(p, dtype=np.int64)
            kernels.lambda_histogram(p, b, c, d, inv, r[0], r[1], out)
            return out

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                parts = list(ex.map(work, ranges))
        else:
            parts = [work(r) for r in ranges]
        counts = np.zeros(p, dtype=np.int64)
        for part in parts:
            counts += part
        hist = LambdaHistogram(p=p, n=1, k=k, counts=counts)
        hist.check_invariants()
        return hist
    if n == 2:
        if p > HIST_CAP_N2:
            raise BudgetError(f"n=2 histograms capped at p <= {HIST_CAP_N2}")
    else:
        raise BudgetError("histograms support n in {1, 2}")
    fld = ExtField(p, n)
    q = fld.order
    inv = fld.inv_index_table()
    ys = np.arange(q, dtype=np.int64)
    b_idx = [x % p for x in inst.b]   # base-field poles embed at their own index
    c_idx = [y % p for y in inst.c]
    d_idx = [z % p for z in inst.d]
    vrows = []
    valid = np.ones(q, dtype=bool)
    for ci in c_idx:
        diff = fld.idx_sub(ys, np.int64(ci))
        valid &= diff != 0
        vrows.append(inv[diff])
    vrows = [row[valid] for row in vrows]
    counts = np.zeros(q, dtype=np.int64)
    for x in range(q):
        if x in b_idx:
            continue
        lam = np.zeros(vrows[0].shape[0], dtype=np.int64)
        for i in range(k):
            u = fld.idx_mul(np.int64(d_idx[i]), inv[fld.idx_sub(np.int64(x), np.int64(b_idx[i]))])
            lam = fld.idx_add(lam, fld.idx_mul(u, vrows[i]))
        counts += np.bincount(lam, minlength=q)
    hist = LambdaHistogram(p=p, n=n, k=k, counts=counts)
    hist.check_invariants()
    return hist


def bilinear_sum(inst: BilinearInstance, threads: int = 1) -> complex:
    """Direct double sum over x not in {b}, y not in {c} (n = 1).

    Fixed-size x chunks are reduced with compensated accumulation and
    merged in chunk order, so the value is independent of the thread
    count.  The modulus is asserted against min(44^(4k) p, (p-k)^2).
    """
    p, k = inst.p, inst.k
    if p > HIST_CAP_N1:
        raise BudgetError(f"bilinear sums capped at p <= {HIST_CAP_N1}")
    fld = PrimeField(p)
    inv = fld.inv_table()
    table = ep_table(p)
    cos_t = np.ascontiguousarray(table.real)
    sin_t = np.ascontiguousarray(table.imag)
    b = np.array([x % p for x in inst.b], dtype=np.int64)
    c = np.array([y % p for y in inst.c], dtype=np.int64)
    d = np.array([z % p for z in inst.d], dtype=np.int64)
    ranges = _chunk_ranges(p)

    def work(r):
        return kernels.bilinear_chunk(p, b, c, d, inv, cos_t, sin_t, r[0], r[1])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, ranges))
    else:
        parts = [work(r) for r in ranges]
    acc = ComplexAcc()
    nterms = 0
    for re, im, cnt in parts:
        acc.add(complex(re, im))
        nterms += cnt
    total = acc.value()
    bound = min(44 ** (4 * k) * p, (p - k) ** 2)
    if abs(total) > bound + 1e-6 * max(nterms, 1):
        raise CheckFailure(f"bilinear sum bound violated: |{total}| > {bound}")
    return total


def bilinear_vs_histogram(inst: BilinearInstance, threads: int = 1) -> dict:
    """Cross-check: the direct sum equals sum_lambda N_1(lambda) e_p(lambda)."""
    p = inst.p
    direct = bilinear_sum(inst, threads=threads)
    hist = histogram_Nn(inst, 1, threads=threads)
    via_hist = complex(np.sum(hist.counts * ep_table(p)))
    err = abs(direct - via_hist)
    tol = 1e-6 * p * p
    if err > tol:
        raise CheckFailure(f"histogram oracle mismatch: {err} > {tol}")
    return {"p": p, "k": inst.k, "direct": direct, "via_histogram": via_hist,
            "error": err, "tol": tol, "pass": True}


# ---------------------------------------------------------------------------
# almost-everywhere point-count bound
# ---------------------------------------------------------------------------

def prop2_constants(k: int) -> tuple[int, int]:
    """(nu, K): deviation factor 2k^2 and exception budget 9(k-1)^2+4(k-1)+2."""
    return 2 * k * k, 9 * (k - 1) ** 2 + 4 * (k - 1) + 2


def prop2_verify(inst: BilinearInstance, n: int = 1, threads: int = 1,
                 hist: LambdaHistogram | None = None) -> dict:
    """Count lambda with |N_n(lambda) - p^n| > 2 k^2 sqrt(p^n); must be <= K."""
    if hist is None:
        hist = histogram_Nn(inst, n, threads=threads)
    q = hist.q
    nu, K = prop2_constants(inst.k)
    dev = np.abs(hist.counts - q)
    exceptional = np.nonzero(dev > nu * math.sqrt(q))[0]
    report = {
        "p": inst.p, "n": n, "k": inst.k, "nu": nu, "K": K,
        "exception_count": int(exceptional.shape[0]),
        "exceptions": [(int(l), int(hist.counts[l]) - q) for l in exceptional],
        "pass": exceptional.shape[0] <= K,
    }
    if not report["pass"]:
        raise CheckFailure(
            f"exception count {report['exception_count']} exceeds K = {K}"
        )
    return report


# ---------------------------------------------------------------------------
# full vs punctured variety sums
# ---------------------------------------------------------------------------

def _field_for(p: int, n: int):
    return PrimeField(p) if n == 1 else ExtField(p, n)


def _variety_solutions(inst: BilinearInstance, fld, side: str) -> np.ndarray:
    """Index rows of the k-tuples solving the chain relations on one side.

    Parametrized by the first coordinate t: t = 0 gives the zero tuple;
    otherwise u_i = t / (1 + t(b_1 - b_i)) whenever no denominator
    vanishes.  Returns an (#solutions, k) int64 array of flat indices
    (residues for n = 1), zero row first, then increasing t.
    """
    p = inst.p
    poles = inst.b if side == "u" else inst.c
    k = inst.k
    if isinstance(fld, PrimeField):
        rows = [[0] * k]
        base = [x % p for x in poles]
        for t in range(1, p):
            row = []
            for i in range(k):
                den = (1 + t * (base[0] - base[i])) % p
                if den == 0:
                    row = None
                    break
                row.append(t * fld.inv(den) % p)
            if row is not None:
                rows.append(row)
        return np.array(rows, dtype=np.int64)
    q = fld.order
    inv = fld.inv_index_table()
    rows = [[0] * k]
    base = [x % p for x in poles]
    for t in range(1, q):
        row = []
        for i in range(k):
            prod = int(fld.idx_mul(np.int64(t), np.int64((base[0] - base[i]) % p)))
            den = int(fld.idx_add(np.int64(1), np.int64(prod)))
            if den == 0:
                row = None
                break
            row.append(int(fld.idx_mul(np.int64(t), inv[den])))
        if row is not None:
            rows.append(row)
    return np.array(rows, dtype=np.int64)


def _pair_sum(inst: BilinearInstance, fld, U: np.ndarray, V: np.ndarray) -> complex:
    """sum over solution pairs of psi(sum_i d_i u_i v_i)."""
    p, k = inst.p, inst.k
    d = [z % p for z in inst.d]
    if isinstance(fld, PrimeField):
        W = (U * np.array(d, dtype=np.int64)) % p
        M = np.zeros((U.shape[0], V.shape[0]), dtype=np.int64)
        for i in range(k):
            M = (M + W[:, i : i + 1] * V[:, i][None, :]) % p
        table = ep_table(p)
        return complex(np.sum(table[M]))
    M = np.zeros((U.shape[0], V.shape[0]), dtype=np.int64)
    for i in range(k):
        term = fld.idx_mul(
            fld.idx_mul(np.int64(d[i]), U[:, i : i + 1]), V[:, i][None, :]
        )
        M = fld.idx_add(M, term)
    tr = fld.trace_index_table()
    table = ep_table(p)
    return complex(np.sum(table[tr[M]]))


def relation9_verify(inst: BilinearInstance, n: int = 1) -> dict:
    """Compare the full and punctured variety sums S_n and S_n*.

    Both sums are evaluated directly from the brute-force solution lists;
    the measured difference always equals 2(p^n - k + 1) - 1 (twice the
    one-sided solution count minus one).  The literature constant
    2(p^n - 1) + 1 agrees at k = 1 and is reported as a finding when it
    deviates (k >= 2).
    """
    fld = _field_for(inst.p, n)
    q = inst.p**n
    if q > 2500:
        raise BudgetError("relation-9 verification capped at p^n <= 2500")
    U = _variety_solutions(inst, fld, "u")
    V = _variety_solutions(inst, fld, "v")
    nu_sol, nv_sol = U.shape[0], V.shape[0]
    s_full = _pair_sum(inst, fld, U, V)
    s_punct = _pair_sum(inst, fld, U[1:], V[1:])
    diff = s_full - s_punct
    diff_int = round(diff.real)
    expected = 2 * nu_sol - 1
    paper = 2 * (q - 1) + 1
    if abs(diff - diff_int) > 1e-6 * q or diff_int != expected:
        raise CheckFailure(
            f"variety sum difference {diff} does not match 2*#solutions-1 = {expected}"
        )
    report = {
        "p": inst.p, "n": n, "k": inst.k,
        "S_full": s_full, "S_punctured": s_punct,
        "diff": diff_int, "expected_diff": expected,
        "u_solution_count": nu_sol, "v_solution_count": nv_sol,
        "paper_constant": paper,
        "pass": True,
        "findings": [],
    }
    if diff_int != paper:
        report["findings"].append(
            f"measured diff 2(q-k+1)-1 = {diff_int} differs from the stated "
            f"2(q-1)+1 = {paper} for k = {inst.k}"
        )
    if nu_sol != q - inst.k + 1:
        raise CheckFailure("one-sided solution count should be q - k + 1")
    return report


def phi_identity_verify(inst: BilinearInstance, n: int = 1) -> dict:
    """Full-enumeration check of the auxiliary-variable sum identity.

    The constrained variety sum S_n equals q^(-2(k-1)) times the free sum
    of psi(phi) over F_q^(4k-2), where phi adds one multiplier variable
    per chain relation.  Enumerates all q^(4k-2) points.
    """
    p, k = inst.p, inst.k
    q = p**n
    if q ** (4 * k - 2) > PHI_BUDGET:
        raise BudgetError(f"phi identity limited to q^(4k-2) <= {PHI_BUDGET}")
    fld = _field_for(p, n)
    U = _variety_solutions(inst, fld, "u")
    V = _variety_solutions(inst, fld, "v")
    s_full = _pair_sum(inst, fld, U, V)

    b = [x % p for x in inst.b]
    c = [y % p for y in inst.c]
    d = [z % p for z in inst.d]
    nvar = 4 * k - 2
    shape = [q] * nvar
    axes = []
    for i in range(nvar):
        sh = [1] * nvar
        sh[i] = q
        axes.append(np.arange(q, dtype=np.int64).reshape(sh))
    # variable layout: u_1..u_k, v_1..v_k, g_2..g_k, h_2..h_k
    u = axes[:k]
    v = axes[k : 2 * k]
    g = axes[2 * k : 3 * k - 1]
    h = axes[3 * k - 1 :]
    if isinstance(fld, PrimeField):
        def mulc(a, cst):
            return (a * (cst % p)) % p

        def mul2(a, bb):
            return (a * bb) % p

        def add(a, bb):
            return (a + bb) % p

        def sub(a, bb):
            return (a - bb) % p
    else:
        mulc = lambda a, cst: fld.idx_mul(a, np.int64(cst % p))
        mul2 = fld.idx_mul
        add = fld.idx_add
        sub = fld.idx_sub
    phi = mulc(mul2(u[0], v[0]), d[0])
    for i in range(1, k):
        phi = add(phi, mulc(mul2(u[i], v[i]), d[i]))
        chain_u = add(mulc(mul2(u[i], u[0]), (b[0] - b[i])), sub(u[i], u[0]))
        chain_v = add(mulc(mul2(v[i], v[0]), (c[0] - c[i])), sub(v[i], v[0]))
        phi = add(phi, mul2(g[i - 1], chain_u))
        phi = add(phi, mul2(h[i - 1], chain_v))
    flat = np.bincount(phi.ravel(), minlength=q)
    table = ep_table(p)
    if isinstance(fld, PrimeField):
        s_phi = complex(np.sum(flat * table))
    else:
        tr = fld.trace_index_table()
        s_phi = complex(np.sum(flat * table[tr]))
    lhs = s_full * q ** (2 * (k - 1))
    tol = 1e-6 * q ** ((4 * k - 2) / 2)
    err = abs(lhs - s_phi)
    if err > tol:
        raise CheckFailure(f"auxiliary-variable identity failed: {err} > {tol}")
    return {
        "p": p, "n": n, "k": k, "terms": q**nvar,
        "S_full": s_full, "S_phi": s_phi, "error": err, "tol": tol, "pass": True,
    }


# ---------------------------------------------------------------------------
# the level-set polynomial g_lambda and its Newton polygon
# ---------------------------------------------------------------------------

def g_lambda_grid(inst: BilinearInstance, lam: int, rng_seed: int = 20240901) -> np.ndarray:
    """(k+1)x(k+1) coefficient grid of g_lambda over F_p (entry [i][j] of X^i Y^j).

    g_lambda = sum_i d_i prod_{j != i} (X-b_j)(Y-c_j) - lam prod_i (X-b_i)(Y-c_i);
    the grid is verified against direct product-form evaluation at ten
    seeded random points before being returned.
    """
    p, k = inst.p, inst.k
    fld = PrimeField(p)
    lam %= p
    bx_full = poly.from_roots([x % p for x in inst.b], fld)
    cy_full = poly.from_roots([y % p for y in inst.c], fld)
    grid = np.zeros((k + 1, k + 1), dtype=np.int64)
    for i in range(k):
        bx = poly.from_roots([x % p for j, x in enumerate(inst.b) if j != i], fld)
        cy = poly.from_roots([y % p for j, y in enumerate(inst.c) if j != i], fld)
        di = inst.d[i] % p
        for a, ca in enumerate(bx):
            for bcoef, cb in enumerate(cy):
                grid[a][bcoef] = (grid[a][bcoef] + di * ca * cb) % p
    for a, ca in enumerate(bx_full):
        for bcoef, cb in enumerate(cy_full):
            grid[a][bcoef] = (grid[a][bcoef] - lam * ca * cb) % p
    rng = random.Random(rng_seed)
    for _ in range(10):
        x, y = rng.randrange(p), rng.randrange(p)
        direct = 0
        for i in range(k):
            t = inst.d[i] % p
            for j in range(k):
                if j != i:
                    t = t * (x - inst.b[j]) % p * (y - inst.c[j]) % p
            direct = (direct + t) % p
        t = lam
        for i in range(k):
            t = t * (x - inst.b[i]) % p * (y - inst.c[i]) % p
        direct = (direct - t) % p
        via_grid = 0
        for a in range(k + 1):
            for bcoef in range(k + 1):
                via_grid = (via_grid + int(grid[a][bcoef]) * pow(x, a, p) * pow(y, bcoef, p)) % p
        if direct != via_grid:
            raise CheckFailure("coefficient grid disagrees with product-form evaluation")
    return grid


@dataclass
class NewtonReport:
    p: int
    k: int
    lam: int
    polygon: list
    commode: bool
    nondegenerate: bool | None
    nu: int
    notes: list


def newton_check(inst: BilinearInstance, lam: int) -> NewtonReport:
    """Newton polygon facts for g_lambda at a nonzero level lambda.

    Requires the normalized situation (no pole at 0); callers with a pole
    at 0 shift coordinates first.  Verifies the pure X^k and Y^k monomials
    are present (so the polygon is the full square [0,k]^2 and g is
    commode) and that both outer faces have squarefree root products
    (non-degeneracy); the face-partial argument divides by k, so p | k
    leaves the non-degeneracy verdict undecided.
    """
    p, k = inst.p, inst.k
    if lam % p == 0:
        raise ValueError("lambda must be nonzero")
    if any(x % p == 0 for x in inst.b) or any(y % p == 0 for y in inst.c):
        raise ValueError("shift the instance first: some pole sits at 0")
    fld = PrimeField(p)
    grid = g_lambda_grid(inst, lam)
    commode = grid[k][0] != 0 and grid[0][k] != 0
    notes = []
    nondeg: bool | None
    if k % p == 0:
        nondeg = None
        notes.append("p divides k: face non-degeneracy verdict unavailable")
    else:
        nondeg = poly.is_squarefree(
            poly.from_roots([y % p for y in inst.c], fld), fld
        ) and poly.is_squarefree(poly.from_roots([x % p for x in inst.b], fld), fld)
    nu = 2 * k * k - 2 * k
    if not commode:
        raise CheckFailure("pure-power monomials missing: g_lambda not commode")
    return NewtonReport(
        p=p, k=k, lam=lam % p,
        polygon=[(0, 0), (k, 0), (k, k), (0, k)],
        commode=commode, nondegenerate=nondeg, nu=nu, notes=notes,
    )


# ---------------------------------------------------------------------------
# exceptional lambda analysis
# ---------------------------------------------------------------------------

def _prod_rows(fld, xs: np.ndarray, poles: list, skip: int | None = None,
               square: bool = False) -> np.ndarray:
    """prod over poles (xs - pole), optionally skipping one index / squaring."""
    p = fld.p
    if isinstance(fld, PrimeField):
        out = np.ones(xs.shape[0], dtype=np.int64)
        for j, pole in enumerate(poles):
            if j == skip:
                continue
            f = (xs - pole) % p
            out = out * f % p
            if square:
                out = out * f % p
        return out
    out = np.ones(xs.shape[0], dtype=np.int64)
    for j, pole in enumerate(poles):
        if j == skip:
            continue
        f = fld.idx_sub(xs, np.int64(pole % p))
        out = fld.idx_mul(out, f)
        if square:
            out = fld.idx_mul(out, f)
    return out


def exceptional_lambdas(inst: BilinearInstance, n: int = 1) -> dict:
    """Identify every lambda the smoothness argument can miss, with provenance.

    After shifting so no pole sits at 0, the candidate lambdas are: the
    single value with a critical point at the origin; up to 2(k-1) values
    from critical points on each axis; the values attained at common
    torus zeros of the two partial-derivative numerators P1, P2 (at most
    9(k-1)^2 points by Bezout); plus lambda = 0.
    """
    shifted, beta, gamma = inst.shifted()
    p, k = shifted.p, shifted.k
    q = p**n
    if (n == 1 and p > HIST_CAP_N1) or (n == 2 and p > HIST_CAP_N2) or n > 2:
        raise BudgetError("exceptional-lambda scan uses the histogram caps")
    fld = _field_for(p, n)
    b = [x % p for x in shifted.b]
    c = [y % p for y in shifted.c]
    d = [z % p for z in shifted.d]
    if isinstance(fld, PrimeField):
        inv = fld.inv_table()
        lam_at = lambda xv, yv: int(
            sum(d[i] * inv[(xv - b[i]) % p] % p * inv[(yv - c[i]) % p] for i in range(k)) % p
        )
        inv_scalar = lambda v: int(inv[v])
    else:
        inv_t = fld.inv_index_table()

        def lam_at(xv, yv):
            acc = np.int64(0)
            for i in range(k):
                t = fld.idx_mul(np.int64(d[i]), inv_t[fld.idx_sub(np.int64(xv), np.int64(b[i]))])
                t = fld.idx_mul(t, inv_t[fld.idx_sub(np.int64(yv), np.int64(c[i]))])
                acc = fld.idx_add(acc, t)
            return int(acc)

        inv_scalar = lambda v: int(fld.inv_index_table()[v])

    provenance: dict[int, list] = {}

    def record(lam, tag):
        provenance.setdefault(int(lam), []).append(tag)

    # critical point at the origin: one lambda
    record(lam_at(0, 0), "origin")

    # axis systems: roots of sum_i d_i/b_i * prod_{j!=i}(Y-c_j)^2 etc.
    ys = np.arange(q, dtype=np.int64)
    axis_counts = {"x_axis": 0, "y_axis": 0}
    for side in ("x0", "y0"):
        poles = c if side == "x0" else b
        others = b if side == "x0" else c
        if isinstance(fld, PrimeField):
            vals = np.zeros(q, dtype=np.int64)
            for i in range(k):
                coef = d[i] * inv_scalar(others[i]) % p
                vals = (vals + coef * _prod_rows(fld, ys, poles, skip=i, square=True)) % p
        else:
            vals = np.zeros(q, dtype=np.int64)
            for i in range(k):
                coef = fld.idx_mul(np.int64(d[i]), np.int64(inv_scalar(others[i])))
                vals = fld.idx_add(
                    vals, fld.idx_mul(coef, _prod_rows(fld, ys, poles, skip=i, square=True))
                )
        pole_set = set(poles) | {0}
        roots = [int(t) for t in np.nonzero(vals == 0)[0] if int(t) not in pole_set]
        for t in roots:
            if side == "x0":
                record(lam_at(0, t), "y_axis")
                axis_counts["y_axis"] += 1
            else:
                record(lam_at(t, 0), "x_axis")
                axis_counts["x_axis"] += 1

    # torus: common zeros of P1, P2 off the excluded lines and axes
    torus_points = []
    ay_rows = [_prod_rows(fld, ys, c, skip=i) for i in range(k)]
    ay2_rows = [None] * k
    if isinstance(fld, PrimeField):
        ay2_rows = [(row * row) % p for row in ay_rows]
    else:
        ay2_rows = [fld.idx_mul(row, row) for row in ay_rows]
    y_ok = np.ones(q, dtype=bool)
    for ci in c:
        if isinstance(fld, PrimeField):
            y_ok &= (ys - ci) % p != 0
        else:
            y_ok &= fld.idx_sub(ys, np.int64(ci)) != 0
    y_ok &= ys != 0
    for x in range(1, q):
        if x in b:      # base-field poles embed at their own flat index
            continue
        if isinstance(fld, PrimeField):
            p1 = np.zeros(q, dtype=np.int64)
            p2 = np.zeros(q, dtype=np.int64)
            for i in range(k):
                ax = 1
                for j in range(k):
                    if j != i:
                        ax = ax * (x - b[j]) % p
                p1 = (p1 + d[i] * (ax * ax % p) % p * ay_rows[i]) % p
                p2 = (p2 + d[i] * ax % p * ay2_rows[i]) % p
        else:
            p1 = np.zeros(q, dtype=np.int64)
            p2 = np.zeros(q, dtype=np.int64)
            for i in range(k):
                ax = np.int64(1)
                for j in range(k):
                    if j != i:
                        ax = fld.idx_mul(ax, fld.idx_sub(np.int64(x), np.int64(b[j])))
                ax2 = fld.idx_mul(ax, ax)
                p1 = fld.idx_add(p1, fld.idx_mul(fld.idx_mul(np.int64(d[i]), ax2), ay_rows[i]))
                p2 = fld.idx_add(p2, fld.idx_mul(fld.idx_mul(np.int64(d[i]), ax), ay2_rows[i]))
        hits = np.nonzero((p1 == 0) & (p2 == 0) & y_ok)[0]
        for yv in hits:
            torus_points.append((x, int(yv)))
            record(lam_at(x, int(yv)), "torus")

    record(0, "lambda_zero")
    bezout = 9 * (k - 1) ** 2
    nonzero_count = len([l for l in provenance if l != 0])
    if len(torus_points) > bezout:
        raise CheckFailure(f"torus common zeros {len(torus_points)} exceed Bezout bound {bezout}")
    if nonzero_count > bezout + 4 * (k - 1) + 1:
        raise CheckFailure("exceptional nonzero lambda count exceeds its budget")
    return {
        "p": p, "n": n, "k": k, "shift": (beta, gamma),
        "exceptional": {l: tags for l, tags in sorted(provenance.items())},
        "count": len(provenance),
        "torus_point_count": len(torus_points),
        "axis_root_counts": axis_counts,
        "bezout_bound": bezout,
        "pass": True,
    }


def deviation_crosscheck(inst: BilinearInstance, n: int = 1, threads: int = 1) -> dict:
    """Compare unrestricted zero counts of g_lambda with the level-set counts.

    N'(lambda) counts all zeros of g_lambda in the plane; one pass sorts
    every point by the lambda (if any) at which it lies on the curve, with
    points on the excluded lines contributing to every lambda at once.
    Asserts |N' - N| <= 2k for all lambda (the gap is exactly k(k-1)).
    """
    p, k = inst.p, inst.k
    q = p**n
    if (n == 1 and p > HIST_CAP_N1) or (n == 2 and p > HIST_CAP_N2) or n > 2:
        raise BudgetError("deviation crosscheck uses the histogram caps")
    fld = _field_for(p, n)
    b = [x % p for x in inst.b]
    c = [y % p for y in inst.c]
    d = [z % p for z in inst.d]
    hist = histogram_Nn(inst, n, threads=threads)
    ys = np.arange(q, dtype=np.int64)
    ay_rows = [_prod_rows(fld, ys, c, skip=i) for i in range(k)]
    cy_full = _prod_rows(fld, ys, c)
    per_lambda = np.zeros(q, dtype=np.int64)
    every_lambda = 0
    if isinstance(fld, PrimeField):
        inv = fld.inv_table()
    else:
        inv = fld.inv_index_table()
    for x in range(q):
        if isinstance(fld, PrimeField):
            anum = np.zeros(q, dtype=np.int64)
            bx_full = 1
            for i in range(k):
                ax = 1
                for j in range(k):
                    if j != i:
                        ax = ax * (x - b[j]) % p
                anum = (anum + d[i] * ax % p * ay_rows[i]) % p
                bx_full = bx_full * (x - b[i]) % p
            bprod = bx_full * cy_full % p
            nz = bprod != 0
            lam = anum[nz] * inv[bprod[nz]] % p
        else:
            anum = np.zeros(q, dtype=np.int64)
            bx_full = np.int64(1)
            for i in range(k):
                ax = np.int64(1)
                for j in range(k):
                    if j != i:
                        ax = fld.idx_mul(ax, fld.idx_sub(np.int64(x), np.int64(b[j])))
                anum = fld.idx_add(anum, fld.idx_mul(fld.idx_mul(np.int64(d[i]), ax), ay_rows[i]))
                bx_full = fld.idx_mul(bx_full, fld.idx_sub(np.int64(x), np.int64(b[i])))
            bprod = fld.idx_mul(bx_full, cy_full)
            nz = bprod != 0
            lam = fld.idx_mul(anum[nz], inv[bprod[nz]])
        per_lambda += np.bincount(lam, minlength=q)
        every_lambda += int(np.count_nonzero(~nz & (anum == 0)))
    nprime = per_lambda + every_lambda
    gap = np.abs(nprime - hist.counts)
    worst = int(gap.max())
    if worst > 2 * k:
        raise CheckFailure(f"|N' - N| reached {worst} > 2k = {2 * k}")
    return {
        "p": p, "n": n, "k": k,
        "worst_gap": worst, "bound": 2 * k,
        "uniform_gap": every_lambda, "expected_uniform_gap": k * (k - 1),
        "pass": True,
    }
